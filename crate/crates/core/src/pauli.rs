//! Pauli operators and stabilizer groups in the binary symplectic picture.
//!
//! A Pauli on `n` qubits is a pair of bit vectors `(x | z)`; qubit `j` carries
//! `X` if only `x[j]` is set, `Z` if only `z[j]`, `Y` if both. Signs are fixed
//! to `+1`: entropies and correctability do not depend on them, so the code
//! space is tracked but individual code states are not.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::BoundVerdict;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::geometry::{Region, TorusLattice};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVector,
    z: BitVector,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn new(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    /// Parses a string over `I X Y Z` (also accepts `_` for identity).
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut p = Self::identity(n);
        for (i, c) in s.chars().enumerate() {
            let (x, z) = match c {
                'I' | '_' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: format!("expected one of IXYZ, found {c:?}"),
                    })
                }
            };
            p.x.set(i, x);
            p.z.set(i, z);
        }
        Ok(p)
    }

    /// A single-qubit Pauli (`'X'`, `'Y'` or `'Z'`) on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, kind: char) -> Self {
        let mut p = Self::identity(n);
        p.x.set(q, matches!(kind, 'X' | 'Y'));
        p.z.set(q, matches!(kind, 'Z' | 'Y'));
        p
    }

    /// From a length-`2n` vector laid out as `(x | z)`.
    pub fn from_symplectic(v: &BitVector) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Precondition(
                "symplectic vector of odd length".into(),
            ));
        }
        let n = v.len() / 2;
        let x: Vec<usize> = (0..n).collect();
        let z: Vec<usize> = (n..2 * n).collect();
        Ok(Self {
            x: v.select(&x),
            z: v.select(&z),
        })
    }

    pub fn to_symplectic(&self) -> BitVector {
        let n = self.num_qubits();
        let mut v = BitVector::zeros(2 * n);
        for i in self.x.ones() {
            v.set(i, true);
        }
        for i in self.z.ones() {
            v.set(n + i, true);
        }
        v
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.clone();
        s.or_assign(&self.z);
        s.ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        PauliOperator { x, z }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.num_qubits() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

/// `1` iff the operators anticommute: `x_p·z_q ⊕ z_p·x_q`.
pub fn symplectic_product(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    if p.num_qubits() != q.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: p.num_qubits(),
            found: q.num_qubits(),
        });
    }
    Ok(p.x.dot(&q.z) ^ p.z.dot(&q.x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
}

/// Logical pairs `(X̄ᵢ, Z̄ᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalSet {
    pub pairs: Vec<(PauliOperator, PauliOperator)>,
}

impl LogicalSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn operators(&self) -> impl Iterator<Item = &PauliOperator> {
        self.pairs.iter().flat_map(|(x, z)| [x, z])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correctability {
    pub correctable: bool,
    /// A logical operator supported inside the region, when not correctable.
    pub witness: Option<PauliOperator>,
}

/// An abelian group of Paulis given by independent, pairwise commuting
/// generators stored as the rows of an `s × 2n` check matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: BitMatrix,
    reduced: BitMatrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabilizerGroup")
            .field("n", &self.n)
            .field("generators", &self.generator_strings())
            .finish()
    }
}

impl StabilizerGroup {
    /// Validates commutation and independence.
    pub fn new(n: usize, generators: BitMatrix) -> Result<Self> {
        if generators.cols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: generators.cols(),
            });
        }
        let (reduced, pivots) = generators.row_reduce();
        if pivots.len() != generators.rows() {
            return Err(Error::InvalidGroup(format!(
                "generators are dependent: rank {} < {}",
                pivots.len(),
                generators.rows()
            )));
        }
        let g = Self {
            n,
            generators,
            reduced,
            pivots,
        };
        if let Some((i, j)) = g.first_anticommuting_pair() {
            return Err(Error::InvalidGroup(format!(
                "generators {i} and {j} anticommute"
            )));
        }
        Ok(g)
    }

    /// Accepts a possibly dependent generating set and keeps a maximal
    /// independent subset, in order.
    pub fn from_spanning(n: usize, generators: BitMatrix) -> Result<Self> {
        if generators.cols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: generators.cols(),
            });
        }
        let keep = generators.independent_rows();
        Self::new(n, generators.select_rows(&keep))
    }

    pub fn from_paulis(n: usize, paulis: &[PauliOperator]) -> Result<Self> {
        let rows = paulis
            .iter()
            .map(|p| {
                if p.num_qubits() != n {
                    Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.num_qubits(),
                    })
                } else {
                    Ok(p.to_symplectic())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, BitMatrix::from_rows(2 * n, &rows)?)
    }

    /// From Pauli strings such as `["XXX", "ZZI", "IZZ"]`.
    pub fn from_strings(gens: &[&str]) -> Result<Self> {
        let paulis = gens
            .iter()
            .map(|s| PauliOperator::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let n = paulis.first().map_or(0, PauliOperator::num_qubits);
        Self::from_paulis(n, &paulis)
    }

    /// The trivial group on `n` qubits (maximally mixed state).
    pub fn trivial(n: usize) -> Self {
        Self::new(n, BitMatrix::zeros(0, 2 * n)).expect("empty group is valid")
    }

    /// Parses the check-matrix text format: one generator per line written as
    /// `x…x|z…z` with `n` bits on each side. Blank lines and lines starting
    /// with `#` are skipped. Commutation and independence are validated.
    pub fn parse_check_matrix(text: &str) -> Result<Self> {
        let mut n = None;
        let mut rows = Vec::new();
        let mut offset = 0;
        for line in text.lines() {
            let trimmed = line.trim();
            let line_start = offset + (line.len() - line.trim_start().len());
            offset += line.len() + 1;
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((xs, zs)) = trimmed.split_once('|') else {
                return Err(Error::Parse {
                    position: line_start,
                    message: "expected 'x…x|z…z'".into(),
                });
            };
            if xs.len() != zs.len() {
                return Err(Error::Parse {
                    position: line_start,
                    message: format!("x part has {} bits, z part {}", xs.len(), zs.len()),
                });
            }
            let shift = |e: Error, base: usize| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: base + position,
                    message,
                },
                e => e,
            };
            let x = BitVector::parse(xs).map_err(|e| shift(e, line_start))?;
            let z = BitVector::parse(zs).map_err(|e| shift(e, line_start + xs.len() + 1))?;
            match n {
                None => n = Some(x.len()),
                Some(m) if m != x.len() => {
                    return Err(Error::Parse {
                        position: line_start,
                        message: format!("row has {} qubits, expected {m}", x.len()),
                    })
                }
                _ => {}
            }
            rows.push(PauliOperator { x, z }.to_symplectic());
        }
        let n = n.ok_or_else(|| Error::Parse {
            position: 0,
            message: "no generators".into(),
        })?;
        Self::new(n, BitMatrix::from_rows(2 * n, &rows)?)
    }

    pub fn to_check_matrix_text(&self) -> String {
        let mut out = String::new();
        for p in self.generator_paulis() {
            out.push_str(&format!("{}|{}\n", p.x, p.z));
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.generators.rows()
    }

    pub fn check_matrix(&self) -> &BitMatrix {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> PauliOperator {
        PauliOperator::from_symplectic(&self.generators.row(i)).expect("even width")
    }

    pub fn generator_paulis(&self) -> impl Iterator<Item = PauliOperator> + '_ {
        (0..self.num_generators()).map(|i| self.generator(i))
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generator_paulis().map(|p| p.to_string()).collect()
    }

    fn first_anticommuting_pair(&self) -> Option<(usize, usize)> {
        let swapped = self.swapped_check_matrix();
        let s = self.num_generators();
        (0..s).find_map(|i| {
            let anti = self.generators.mul_vec(&swapped.row(i));
            let first = anti.ones().next();
            first.map(|j| (j.min(i), j.max(i)))
        })
    }

    /// `(z | x)`: rows paired with `(x | z)` vectors give symplectic products.
    fn swapped_check_matrix(&self) -> BitMatrix {
        let n = self.n;
        let order: Vec<usize> = (n..2 * n).chain(0..n).collect();
        self.generators.select_columns(&order)
    }

    pub fn code_parameters(&self) -> CodeParameters {
        CodeParameters {
            n: self.n,
            k: self.n - self.num_generators(),
            d: None,
        }
    }

    /// Membership of a Pauli (up to sign) in the group.
    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.contains_symplectic(&p.to_symplectic())
    }

    pub fn contains_symplectic(&self, v: &BitVector) -> bool {
        let mut residual = v.clone();
        for (i, &piv) in self.pivots.iter().enumerate() {
            if residual.get(piv) {
                residual.xor_assign(&self.reduced.row(i));
            }
        }
        residual.is_zero()
    }

    pub fn commutes_with_all(&self, p: &PauliOperator) -> bool {
        self.swapped_check_matrix()
            .mul_vec(&p.to_symplectic())
            .is_zero()
    }

    /// `log₂` of the number of group elements supported inside `members`.
    ///
    /// This is `s − rank(G|ᵣᶜ)`, where `G|ᵣᶜ` keeps the columns of the
    /// qubits outside the region.
    pub fn subgroup_rank_within(&self, members: &BitVector) -> usize {
        assert_eq!(members.len(), self.n, "region size mismatch");
        let outside: Vec<usize> = members.not().ones().collect();
        let cols: Vec<usize> = outside
            .iter()
            .copied()
            .chain(outside.iter().map(|&q| q + self.n))
            .collect();
        self.num_generators() - self.generators.select_columns(&cols).rank()
    }

    pub fn subgroup_rank_on(&self, region: &Region) -> usize {
        self.subgroup_rank_within(region.members())
    }

    /// Basis of the normalizer: all Paulis commuting with every generator.
    pub fn normalizer_basis(&self) -> BitMatrix {
        self.swapped_check_matrix().kernel_basis()
    }

    /// `k` anticommuting pairs generating the normalizer modulo the group,
    /// found by symplectic Gram–Schmidt on a normalizer basis.
    pub fn logical_operators(&self) -> LogicalSet {
        let mut pool: Vec<BitVector> = self.normalizer_basis().row_vectors().collect();
        let form = |a: &BitVector, b: &BitVector| {
            let pa = PauliOperator::from_symplectic(a).expect("even");
            let pb = PauliOperator::from_symplectic(b).expect("even");
            symplectic_product(&pa, &pb).expect("same size")
        };
        let mut pairs = Vec::new();
        while let Some(v) = pool.pop() {
            let Some(j) = pool.iter().position(|w| form(&v, w)) else {
                // v lies in the radical of the normalizer, which is the group
                continue;
            };
            let w = pool.swap_remove(j);
            for u in pool.iter_mut() {
                let (uv, uw) = (form(u, &v), form(u, &w));
                if uw {
                    u.xor_assign(&v);
                }
                if uv {
                    u.xor_assign(&w);
                }
            }
            pairs.push((
                PauliOperator::from_symplectic(&v).expect("even"),
                PauliOperator::from_symplectic(&w).expect("even"),
            ));
        }
        debug_assert_eq!(pairs.len(), self.code_parameters().k);
        LogicalSet { pairs }
    }

    /// Whether no logical operator is supported on the qubits in `members`.
    ///
    /// The Paulis on the region that commute with the group form the kernel
    /// of the restricted symplectic map; the region is correctable iff that
    /// kernel lies inside the group.
    pub fn correctability_within(&self, members: &[usize]) -> Correctability {
        let m = members.len();
        let n = self.n;
        // column t pairs with v_x[t] (needs g_z), column m + t with v_z[t]
        let cols: Vec<usize> = members
            .iter()
            .map(|&q| q + n)
            .chain(members.iter().copied())
            .collect();
        let constraints = self.generators.select_columns(&cols);
        let kernel = constraints.kernel_basis();
        for v in kernel.row_vectors() {
            let mut full = BitVector::zeros(2 * n);
            for (t, &q) in members.iter().enumerate() {
                if v.get(t) {
                    full.set(q, true);
                }
                if v.get(m + t) {
                    full.set(n + q, true);
                }
            }
            if !self.contains_symplectic(&full) {
                return Correctability {
                    correctable: false,
                    witness: Some(PauliOperator::from_symplectic(&full).expect("even")),
                };
            }
        }
        Correctability {
            correctable: true,
            witness: None,
        }
    }

    pub fn is_correctable_region(&self, region: &Region) -> Correctability {
        self.correctability_within(&region.indices())
    }

    /// Exact (ε = 0) local indistinguishability on every ball of radius `r`.
    ///
    /// Balls are scanned in cell order; the first non-correctable ball and its
    /// witness are reported. `lhs` counts failing balls, `rhs` is zero.
    pub fn tqo_check(&self, lattice: &Arc<TorusLattice>, r: usize) -> Result<BoundVerdict> {
        if lattice.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: lattice.num_qubits(),
            });
        }
        let results: Vec<Correctability> = (0..lattice.num_cells())
            .into_par_iter()
            .map(|c| self.is_correctable_region(&Region::ball(lattice, c, r)))
            .collect();
        let failing = results.iter().filter(|c| !c.correctable).count();
        let first = results.iter().position(|c| !c.correctable);
        let mut v = BoundVerdict::new("tqo", failing as f64, 0.0, 0.0);
        v.input("radius", r).input("lattice", lattice.as_ref());
        v.input("balls", lattice.num_cells());
        if let Some(c) = first {
            v.input("epsilon", "unbounded");
            v.witness = Some(format!(
                "ball at cell {:?}: logical {}",
                lattice.coords(c),
                results[c]
                    .witness
                    .as_ref()
                    .expect("failing ball has witness")
            ));
        } else {
            v.input("epsilon", 0);
        }
        Ok(v)
    }

    /// Minimum weight of a logical operator, searching supports of weight up
    /// to `cutoff` in increasing order. `None` if the distance exceeds the
    /// cutoff or the code has no logical qubits.
    pub fn brute_force_distance(&self, cutoff: usize) -> Option<usize> {
        if self.code_parameters().k == 0 {
            return None;
        }
        let cutoff = cutoff.min(self.n);
        (1..=cutoff).find(|&w| self.has_logical_of_weight(w))
    }

    fn has_logical_of_weight(&self, w: usize) -> bool {
        const CHUNK: usize = 1 << 14;
        let mut combos = Combinations::new(self.n, w);
        loop {
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                return false;
            }
            if chunk
                .par_iter()
                .any(|s| !self.correctability_within(s).correctable)
            {
                return true;
            }
        }
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s).unwrap()
    }

    #[test]
    fn symplectic_product_examples() {
        assert!(symplectic_product(&p("X"), &p("Z")).unwrap());
        assert!(!symplectic_product(&p("X"), &p("X")).unwrap());
        assert!(symplectic_product(&p("Y"), &p("Z")).unwrap());
        assert!(symplectic_product(&p("XI"), &p("Z")).is_err());
    }

    #[test]
    fn construction_rejects_bad_generators() {
        assert!(matches!(
            StabilizerGroup::from_strings(&["XI", "ZI"]),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            StabilizerGroup::from_strings(&["ZZ", "ZZ"]),
            Err(Error::InvalidGroup(_))
        ));
        let g = StabilizerGroup::from_spanning(
            2,
            BitMatrix::parse_rows(&["0011", "0011", "1100"]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.num_generators(), 2);
    }

    #[test]
    fn code_parameter_examples() {
        assert_eq!(StabilizerGroup::trivial(3).code_parameters().k, 3);
        assert_eq!(models::repetition_code(5).unwrap().code_parameters().k, 1);
        let (toric, _) = models::toric_code(3).unwrap();
        assert_eq!(
            toric.code_parameters(),
            CodeParameters {
                n: 18,
                k: 2,
                d: None
            }
        );
    }

    #[test]
    fn subgroup_rank_examples() {
        let (toric, lat) = models::toric_code(4).unwrap();
        let s = toric.num_generators();
        assert_eq!(toric.subgroup_rank_on(&Region::full(&lat)), s);
        assert_eq!(toric.subgroup_rank_on(&Region::empty(&lat)), 0);
        let star = toric.generator(5);
        let region = Region::from_qubits(&lat, star.support()).unwrap();
        assert!(toric.subgroup_rank_on(&region) >= 1);
        assert!(toric.contains(&star));
    }

    #[test]
    fn repetition_logicals() {
        let g = models::repetition_code(3).unwrap();
        let l = g.logical_operators();
        assert_eq!(l.len(), 1);
        let (x, z) = &l.pairs[0];
        assert!(symplectic_product(x, z).unwrap());
        assert!(g.commutes_with_all(x) && g.commutes_with_all(z));
        // X̄ must flip every qubit; Z̄ is Z₁ up to stabilizers
        assert!(g.contains(&x.mul(&p("XXX"))) || g.contains(&z.mul(&p("XXX"))));
        assert!(g.contains(&z.mul(&p("ZII"))) || g.contains(&x.mul(&p("ZII"))));
        let pure =
            StabilizerGroup::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZZZZ"]).unwrap();
        assert!(pure.logical_operators().is_empty());
    }

    #[test]
    fn toric_logicals_have_weight_three_representatives() {
        let (g, _) = models::toric_code(3).unwrap();
        let l = g.logical_operators();
        assert_eq!(l.len(), 2);
        for (i, (xi, zi)) in l.pairs.iter().enumerate() {
            for (j, (xj, zj)) in l.pairs.iter().enumerate() {
                assert_eq!(symplectic_product(xi, zj).unwrap(), i == j);
                assert!(!symplectic_product(xi, xj).unwrap());
                assert!(!symplectic_product(zi, zj).unwrap());
            }
        }
        // brute force: smallest support carrying a logical has weight 3
        assert_eq!(g.brute_force_distance(4), Some(3));
    }

    #[test]
    fn correctable_region_examples() {
        let (g, lat) = models::toric_code(4).unwrap();
        assert!(g.is_correctable_region(&Region::empty(&lat)).correctable);
        let all = g.is_correctable_region(&Region::full(&lat));
        assert!(!all.correctable);
        let w = all.witness.unwrap();
        assert!(g.commutes_with_all(&w) && !g.contains(&w));
        for q in 0..lat.num_qubits() {
            let r = Region::from_qubits(&lat, [q]).unwrap();
            assert!(g.is_correctable_region(&r).correctable);
        }
    }

    #[test]
    fn tqo_examples() {
        let (g, lat) = models::toric_code(4).unwrap();
        let v = g.tqo_check(&lat, 1).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(!g.tqo_check(&lat, lat.diameter()).unwrap().holds);

        let rep = models::repetition_code(5).unwrap();
        let ring = Arc::new(TorusLattice::ring(5).unwrap());
        let v = rep.tqo_check(&ring, 0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.lhs, 5.0);
        assert!(v.witness.unwrap().ends_with("ZIIII"));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(
            models::repetition_code(5).unwrap().brute_force_distance(5),
            Some(1)
        );
        assert_eq!(models::five_qubit_code().brute_force_distance(5), Some(3));
        assert_eq!(models::five_qubit_code().brute_force_distance(2), None);
    }

    #[test]
    fn check_matrix_roundtrip_and_errors() {
        let g = models::five_qubit_code();
        let text = g.to_check_matrix_text();
        assert_eq!(StabilizerGroup::parse_check_matrix(&text).unwrap(), g);
        let e = StabilizerGroup::parse_check_matrix("10|01\n1x|00\n").unwrap_err();
        assert!(matches!(e, Error::Parse { position: 7, .. }), "{e:?}");
        let e = StabilizerGroup::parse_check_matrix("10|00\n01|00\n00|10\n").unwrap_err();
        assert!(matches!(e, Error::InvalidGroup(_)), "{e:?}");
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(6, 3).count(), 20);
        assert_eq!(Combinations::new(4, 0).count(), 1);
        assert_eq!(Combinations::new(3, 4).count(), 0);
    }
}
