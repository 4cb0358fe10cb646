//! Explicit density matrices for small systems, used as an independent check
//! on the stabilizer engine.
//!
//! Qubit `j` is bit `j` of the computational basis index.
//!
//! The supremum in the TQO condition is over operators `φ` on a region `R`
//! with `‖φ‖ ≤ 1`. Since `⟨ψᵢ|φ|ψⱼ⟩ = tr(φ · tr_{Rᶜ}|ψⱼ⟩⟨ψᵢ|)`, and the
//! operator norm is dual to the trace norm, the off-diagonal supremum is
//! `‖tr_{Rᶜ}|ψⱼ⟩⟨ψᵢ|‖₁` and the diagonal one is `‖ρᵢ,R − ρⱼ,R‖₁`. Both are
//! computed exactly from singular values.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::StabilizerGroup;

pub const QMAX: usize = 12;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = -1e-10;

type CMatrix = DMatrix<Complex64>;
type CVector = DVector<Complex64>;

fn check_qubits(q: usize) -> Result<()> {
    if q > QMAX {
        return Err(Error::TooManyQubits {
            qubits: q,
            max: QMAX,
        });
    }
    Ok(())
}

fn qubits_of_dim(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Singular values, descending. For a positive semidefinite matrix these
/// are its eigenvalues.
///
/// nalgebra's symmetric eigensolver returns NaN on some code projectors with
/// many exact zeros, so every spectrum here goes through the SVD.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut out: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `min λ ≥ −tol` for Hermitian `m`, decided by a real Cholesky
/// factorization of the embedding `[[Re, −Im], [Im, Re]] + tol·I`. (The
/// complex factorization accepts negative pivots.)
fn is_psd_within(m: &CMatrix, tol: f64) -> bool {
    let d = m.nrows();
    let embedded = DMatrix::<f64>::from_fn(2 * d, 2 * d, |i, j| {
        let c = m[(i % d, j % d)];
        let shift = if i == j { tol } else { 0.0 };
        shift
            + match (i < d, j < d) {
                (true, false) => -c.im,
                (false, true) => c.im,
                _ => c.re,
            }
    });
    embedded.cholesky().is_some()
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint())
        .iter()
        .fold(0.0, |acc, c| acc.max(c.norm()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    q: usize,
    matrix: CMatrix,
}

impl DenseState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let q = qubits_of_dim(matrix.nrows())?;
        check_qubits(q)?;
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if !is_psd_within(&matrix, -EIGEN_FLOOR) {
            return Err(Error::InvalidState(format!(
                "eigenvalue below {EIGEN_FLOOR:e}"
            )));
        }
        Ok(Self { q, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        let q = qubits_of_dim(psi.len())?;
        check_qubits(q)?;
        Ok(Self {
            q,
            matrix: psi * psi.adjoint(),
        })
    }

    pub fn maximally_mixed(q: usize) -> Result<Self> {
        check_qubits(q)?;
        let dim = 1usize << q;
        Ok(Self {
            q,
            matrix: CMatrix::identity(dim, dim) / Complex64::from(dim as f64),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        singular_values(&self.matrix)
    }

    pub fn tensor(&self, other: &DenseState) -> Result<DenseState> {
        check_qubits(self.q + other.q)?;
        // other's qubits are the high bits
        Ok(DenseState {
            q: self.q + other.q,
            matrix: other.matrix.kronecker(&self.matrix),
        })
    }
}

/// A Hermitian operator, such as the `φ` of the TQO condition.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    q: usize,
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let q = qubits_of_dim(matrix.nrows())?;
        if matrix.ncols() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if hermiticity_defect(&matrix) > HERMITIAN_TOL {
            return Err(Error::InvalidState("observable is not Hermitian".into()));
        }
        Ok(Self { q, matrix })
    }

    pub fn num_qubits(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn operator_norm(&self) -> f64 {
        singular_values(&self.matrix)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn expectation(&self, rho: &DenseState) -> Result<f64> {
        if rho.q != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: rho.q,
            });
        }
        Ok((&self.matrix * &rho.matrix).trace().re)
    }
}

/// `−Σ λ log₂ λ` in bits.
pub fn von_neumann_entropy(rho: &DenseState) -> Result<f64> {
    let mut s = 0.0;
    for l in rho.eigenvalues() {
        if l.is_nan() {
            return Err(Error::InvalidState("spectrum is not finite".into()));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Reduces an operator on `q` qubits to the qubits in `keep`, which keep
/// their relative order.
fn partial_trace_matrix(m: &CMatrix, q: usize, keep: &[usize]) -> Result<CMatrix> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() || sorted.last().is_some_and(|&k| k >= q) {
        return Err(Error::InvalidRegion(format!(
            "keep set {keep:?} on {q} qubits"
        )));
    }
    let traced: Vec<usize> = (0..q)
        .filter(|j| sorted.binary_search(j).is_err())
        .collect();
    let scatter = |bits: &[usize], v: usize| {
        bits.iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (((v >> i) & 1) << b))
    };
    let kept_idx: Vec<usize> = (0..1usize << sorted.len())
        .map(|a| scatter(&sorted, a))
        .collect();
    let traced_idx: Vec<usize> = (0..1usize << traced.len())
        .map(|t| scatter(&traced, t))
        .collect();
    let dim = kept_idx.len();
    Ok(CMatrix::from_fn(dim, dim, |a, b| {
        traced_idx
            .iter()
            .map(|&t| m[(kept_idx[a] | t, kept_idx[b] | t)])
            .sum()
    }))
}

pub fn partial_trace(rho: &DenseState, keep: &[usize]) -> Result<DenseState> {
    let matrix = partial_trace_matrix(&rho.matrix, rho.q, keep)?;
    Ok(DenseState {
        q: keep.len(),
        matrix,
    })
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// `‖ρ − σ‖₁`, unnormalized, in `[0, 2]`.
pub fn trace_distance(rho: &DenseState, sigma: &DenseState) -> Result<f64> {
    if rho.q != sigma.q {
        return Err(Error::DimensionMismatch {
            expected: rho.q,
            found: sigma.q,
        });
    }
    Ok(trace_norm(&(&rho.matrix - &sigma.matrix)))
}

/// `ε log₂ d − ε log₂ ε`, with value 0 at `ε = 0`.
pub fn fannes_bound(eps: f64, dim: usize) -> Result<f64> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Precondition(format!(
            "negative trace distance {eps}"
        )));
    }
    if dim < 2 {
        return Err(Error::Precondition(format!("dimension {dim} < 2")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    Ok(eps * (dim as f64).log2() - eps * eps.log2())
}

/// `(ε_offdiag, ε_diag)` of the TQO condition for orthonormal `states` on
/// the qubits `region`.
pub fn tqo_epsilon(states: &[CVector], region: &[usize]) -> Result<(f64, f64)> {
    if states.len() < 2 {
        return Err(Error::Precondition("need at least two states".into()));
    }
    let dim = states[0].len();
    let q = qubits_of_dim(dim)?;
    check_qubits(q)?;
    for (i, a) in states.iter().enumerate() {
        if a.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.len(),
            });
        }
        for (j, b) in states.iter().enumerate().skip(i) {
            let overlap = a.dotc(b);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap - Complex64::from(expected)).norm() > 1e-9 {
                return Err(Error::InvalidState(format!(
                    "states {i} and {j} are not orthonormal (overlap {overlap})"
                )));
            }
        }
    }
    let reduced =
        |i: usize, j: usize| partial_trace_matrix(&(&states[j] * states[i].adjoint()), q, region);
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    let singles = (0..states.len())
        .map(|i| reduced(i, i))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..states.len() {
        for j in 0..states.len() {
            if i == j {
                continue;
            }
            off = off.max(trace_norm(&reduced(i, j)?));
            if i < j {
                diag = diag.max(trace_norm(&(&singles[i] - &singles[j])));
            }
        }
    }
    Ok((off, diag))
}

/// Tracks a group element as `i^phase X^x Z^z` on at most `QMAX` qubits.
#[derive(Clone, Copy)]
struct Element {
    x: usize,
    z: usize,
    phase: u32,
}

impl Element {
    fn from_symplectic(group: &StabilizerGroup, row: usize) -> Self {
        let n = group.num_qubits();
        let m = group.check_matrix();
        let (mut x, mut z) = (0usize, 0usize);
        for j in 0..n {
            x |= (m.get(row, j) as usize) << j;
            z |= (m.get(row, n + j) as usize) << j;
        }
        // Y = i X Z
        let phase = (x & z).count_ones() % 4;
        Self { x, z, phase }
    }

    fn times(self, other: Element) -> Element {
        // Z^z X^x' = (−1)^{z·x'} X^x' Z^z
        let sign = 2 * ((self.z & other.x).count_ones() % 2);
        Element {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + sign) % 4,
        }
    }
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `Σ_{g∈S} g` as an explicit matrix.
fn group_sum(group: &StabilizerGroup) -> Result<CMatrix> {
    let n = group.num_qubits();
    check_qubits(n)?;
    let dim = 1usize << n;
    let gens: Vec<Element> = (0..group.num_generators())
        .map(|r| Element::from_symplectic(group, r))
        .collect();
    let mut sum = CMatrix::zeros(dim, dim);
    for subset in 0..1usize << gens.len() {
        let mut current = Element {
            x: 0,
            z: 0,
            phase: 0,
        };
        for (i, g) in gens.iter().enumerate() {
            if subset >> i & 1 == 1 {
                current = current.times(*g);
            }
        }
        let c = I_POWERS[current.phase as usize];
        for r in 0..dim {
            let sign = if (current.z & r).count_ones().is_multiple_of(2) {
                c
            } else {
                -c
            };
            sum[(r ^ current.x, r)] += sign;
        }
    }
    Ok(sum)
}

/// `ρ = 2⁻ⁿ Σ_{g∈S} g`, the maximally mixed state on the code space.
pub fn stabilizer_to_dense(group: &StabilizerGroup) -> Result<DenseState> {
    let sum = group_sum(group)?;
    let n = group.num_qubits();
    Ok(DenseState {
        q: n,
        matrix: sum / Complex64::from((1usize << n) as f64),
    })
}

/// Orthonormal basis of the code space: the projector applied to
/// computational basis states, orthonormalized in index order.
pub fn code_basis(group: &StabilizerGroup) -> Result<Vec<CVector>> {
    let s = group.num_generators();
    let n = group.num_qubits();
    let projector = group_sum(group)? / Complex64::from((1usize << s) as f64);
    let k = n - s;
    let mut basis: Vec<CVector> = Vec::with_capacity(1 << k);
    for idx in 0..1usize << n {
        if basis.len() == 1 << k {
            break;
        }
        let mut v = projector.column(idx).into_owned();
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / Complex64::from(norm));
        }
    }
    Ok(basis)
}

pub fn random_pure_state<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Result<CVector> {
    check_qubits(q)?;
    let v = CVector::from_fn(1 << q, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    Ok(v / Complex64::from(norm))
}

/// Full-rank random state `G G† / tr(G G†)` with Gaussian `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Result<DenseState> {
    check_qubits(q)?;
    let dim = 1usize << q;
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // symmetrize away rounding so the Hermiticity check is exact
    m = (&m + m.adjoint()) * Complex64::from(0.5);
    DenseState::new(m)
}

/// Entropy of the reduced state on `region` via the dense route.
pub fn dense_region_entropy(rho: &DenseState, region: &[usize]) -> Result<f64> {
    von_neumann_entropy(&partial_trace(rho, region)?)
}
