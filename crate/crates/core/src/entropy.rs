//! Entropy functionals of the maximally mixed code state and the bounds built
//! from them.
//!
//! For a stabilizer group `S` on `n` qubits the state `ρ = 2⁻ⁿ Σ_{g∈S} g` is
//! the uniform mixture over the code space. Its reduced state on a region `R`
//! has entropy `|R| − log₂|S_R|` bits, where `S_R` is the subgroup supported
//! inside `R`. All stabilizer quantities below are therefore exact integers.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::geometry::{PartitionSequence, Region, Tripartition};
use crate::pauli::{CodeParameters, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Stabilizer,
    Dense,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub region: String,
    pub size: usize,
    pub entropy_bits: f64,
    pub backend: Backend,
}

/// Outcome of comparing the two sides of an inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub bound: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
    pub tolerance: f64,
    pub witness: Option<String>,
    pub inputs: BTreeMap<String, String>,
}

impl BoundVerdict {
    pub fn new(bound: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            bound: bound.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs + tolerance,
            slack: rhs - lhs,
            tolerance,
            witness: None,
            inputs: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }
}

/// Entropy in bits of the code state on the qubits set in `members`.
pub fn entropy_within(group: &StabilizerGroup, members: &BitVector) -> usize {
    members.count_ones() - group.subgroup_rank_within(members)
}

pub fn entropy_of(group: &StabilizerGroup, region: &Region) -> usize {
    entropy_within(group, region.members())
}

pub fn stabilizer_entropy(group: &StabilizerGroup, region: &Region) -> EntropyReport {
    EntropyReport {
        region: region.to_string(),
        size: region.len(),
        entropy_bits: entropy_of(group, region) as f64,
        backend: Backend::Stabilizer,
    }
}

fn entropies(group: &StabilizerGroup, regions: &[Region]) -> Vec<i64> {
    regions
        .par_iter()
        .map(|r| entropy_of(group, r) as i64)
        .collect()
}

/// `I(A:C|B) = S(AB) + S(BC) − S(B) − S(ABC)`.
pub fn cmi(group: &StabilizerGroup, t: &Tripartition) -> i64 {
    let s = entropies(group, &[t.ab(), t.bc(), t.b.clone(), t.abc()]);
    s[0] + s[1] - s[2] - s[3]
}

/// Mutual information `I(A:B) = S(A) + S(B) − S(AB)`.
pub fn mutual_information(group: &StabilizerGroup, a: &Region, b: &Region) -> Result<i64> {
    let ab = a.union(b)?;
    let s = entropies(group, &[a.clone(), b.clone(), ab]);
    Ok(s[0] + s[1] - s[2])
}

/// The pieces of the telescoped sum for one sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedTerms {
    pub first: i64,
    pub stage_bc: Vec<i64>,
    pub stage_b: Vec<i64>,
    pub stage_cmi: Vec<i64>,
    pub total: i64,
}

impl MedTerms {
    /// `S(A₁B₁) + Σᵢ [S(BᵢCᵢ) − S(Bᵢ)]`.
    pub fn rhs(&self) -> i64 {
        self.first + self.stage_bc.iter().sum::<i64>() - self.stage_b.iter().sum::<i64>()
    }
}

pub fn med_terms(group: &StabilizerGroup, seq: &PartitionSequence) -> MedTerms {
    let stages = seq.stages();
    let first = entropy_of(group, &stages[0].ab()) as i64;
    let per_stage: Vec<(i64, i64, i64)> = stages
        .par_iter()
        .map(|t| {
            let s = entropies(group, &[t.ab(), t.bc(), t.b.clone(), t.abc()]);
            (s[1], s[2], s[0] + s[1] - s[2] - s[3])
        })
        .collect();
    let total = entropy_of(group, &stages[stages.len() - 1].abc()) as i64;
    MedTerms {
        first,
        stage_bc: per_stage.iter().map(|p| p.0).collect(),
        stage_b: per_stage.iter().map(|p| p.1).collect(),
        stage_cmi: per_stage.iter().map(|p| p.2).collect(),
        total,
    }
}

/// `k ≤ S(A₁B₁) + Σᵢ [S(BᵢCᵢ) − S(Bᵢ)]` on the maximally mixed code state.
pub fn med_bound(group: &StabilizerGroup, seq: &PartitionSequence) -> BoundVerdict {
    let terms = med_terms(group, seq);
    let k = group.code_parameters().k;
    let mut v = BoundVerdict::new("med", k as f64, terms.rhs() as f64, 0.0);
    v.input("stages", seq.len())
        .input("locality_radius", seq.locality_radius())
        .input("cmi", format!("{:?}", terms.stage_cmi));
    v
}

/// `Σ I(Aᵢ:Cᵢ|Bᵢ) − (rhs − S(AₙBₙCₙ))`, identically zero.
pub fn telescoping_residual(group: &StabilizerGroup, seq: &PartitionSequence) -> i64 {
    let terms = med_terms(group, seq);
    terms.stage_cmi.iter().sum::<i64>() - (terms.rhs() - terms.total)
}

/// `γ̂ = −[S(A) + S(B) + S(C) − S(AB) − S(BC) − S(CA) + S(ABC)]`.
pub fn tee_kitaev_preskill(group: &StabilizerGroup, t: &Tripartition) -> i64 {
    let s = entropies(
        group,
        &[
            t.a.clone(),
            t.b.clone(),
            t.c.clone(),
            t.ab(),
            t.bc(),
            t.ac(),
            t.abc(),
        ],
    );
    -(s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6])
}

/// `k ≤ 2γ`: degeneracy limited by the topological entropy.
pub fn verify_eq10(group: &StabilizerGroup, gamma: f64) -> BoundVerdict {
    let k = group.code_parameters().k;
    let mut v = BoundVerdict::new("degeneracy-vs-tee", k as f64, 2.0 * gamma, 0.0);
    v.input("gamma", gamma);
    v
}

/// `γ = log₂ √(Σₐ dₐ²)` for quantum dimensions `dₐ ≥ 1`.
pub fn quantum_dimension_gamma(dims: &[f64]) -> Result<f64> {
    if dims.is_empty() {
        return Err(Error::Precondition("no quantum dimensions".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d.is_nan() || d < 1.0) {
        return Err(Error::Precondition(format!("quantum dimension {d} < 1")));
    }
    let total: f64 = dims.iter().map(|d| d * d).sum();
    Ok(0.5 * total.log2())
}

/// `k ≤ Σᵢ S(Xᵢ)` for a partition into parts smaller than the distance `d`.
pub fn partition_bound(
    group: &StabilizerGroup,
    parts: &[Region],
    d: usize,
) -> Result<BoundVerdict> {
    let n = group.num_qubits();
    if d <= 1 {
        return Err(Error::Precondition(format!(
            "distance {d}: every nonempty part has at least d qubits, so no valid partition exists"
        )));
    }
    let mut seen = BitVector::zeros(n);
    for (i, p) in parts.iter().enumerate() {
        if p.members().len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.members().len(),
            });
        }
        if p.len() >= d {
            return Err(Error::Precondition(format!(
                "part {i} has {} qubits, not fewer than d = {d}",
                p.len()
            )));
        }
        let mut overlap = seen.clone();
        overlap.and_assign(p.members());
        if !overlap.is_zero() {
            return Err(Error::Precondition(format!(
                "part {i} overlaps earlier parts"
            )));
        }
        seen.or_assign(p.members());
    }
    if seen.count_ones() != n {
        return Err(Error::Precondition("parts do not cover every qubit".into()));
    }
    let rhs: i64 = entropies(group, parts).iter().sum();
    let k = group.code_parameters().k;
    let mut v = BoundVerdict::new("partition", k as f64, rhs as f64, 0.0);
    v.input("parts", parts.len()).input("d", d);
    Ok(v)
}

/// Both sides of the two code tradeoffs, for comparison only (the constants
/// hidden in the `O(n)` are not fixed, so there is no verdict).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub params: CodeParameters,
    pub dimension: usize,
    pub alpha: f64,
    /// `k · d^{2/(D−1)}`
    pub commuting_projector_product: f64,
    pub commuting_projector_ratio: f64,
    /// `k · d^{1−α}`
    pub subvolume_product: f64,
    pub subvolume_ratio: f64,
}

pub fn tradeoff_report(
    params: CodeParameters,
    dimension: usize,
    alpha: f64,
) -> Result<TradeoffReport> {
    let d = params
        .d
        .ok_or_else(|| Error::Precondition("code distance not set".into()))?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Precondition(format!("alpha {alpha} outside [0, 1]")));
    }
    if dimension < 2 {
        return Err(Error::Precondition(format!("dimension {dimension} < 2")));
    }
    let (k, d, n) = (params.k as f64, d as f64, params.n as f64);
    let cp = k * d.powf(2.0 / (dimension as f64 - 1.0));
    let sv = k * d.powf(1.0 - alpha);
    Ok(TradeoffReport {
        params,
        dimension,
        alpha,
        commuting_projector_product: cp,
        commuting_projector_ratio: cp / n,
        subvolume_product: sv,
        subvolume_ratio: sv / n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "form")]
pub enum FitForm {
    /// `S = a₀ + a₁ x + … + a_deg x^deg`.
    Polynomial { degree: usize },
    /// `S = a₁ x − γ` with a single boundary component.
    AreaLaw,
    /// `S = c · x^α`, fitted on logarithms.
    PowerLaw,
    /// `S = a₁ x`.
    Proportional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub form: FitForm,
    /// Ascending powers for polynomial forms; `[c]` for the power law.
    pub coefficients: Vec<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub residual_norm: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Least-squares fit of `(size, entropy)` samples.
pub fn fit_scaling(samples: &[(f64, f64)], form: FitForm) -> Result<ScalingFit> {
    let (powers, transform_log): (Vec<i32>, bool) = match form {
        FitForm::Polynomial { degree } => ((0..=degree as i32).collect(), false),
        FitForm::AreaLaw => (vec![0, 1], false),
        FitForm::PowerLaw => (vec![0, 1], true),
        FitForm::Proportional => (vec![1], false),
    };
    let p = powers.len();
    if samples.len() < p + 2 {
        return Err(Error::Fit(format!(
            "{} samples for {p} coefficients; need at least {}",
            samples.len(),
            p + 2
        )));
    }
    let pts: Vec<(f64, f64)> = if transform_log {
        if samples.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
            return Err(Error::Fit("power-law fit needs positive samples".into()));
        }
        samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect()
    } else {
        samples.to_vec()
    };
    let design = DMatrix::from_fn(pts.len(), p, |i, j| pts[i].0.powi(powers[j]));
    let rhs = DVector::from_iterator(pts.len(), pts.iter().map(|s| s.1));
    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let eps = 1e-12 * max_sv.max(1.0) * pts.len() as f64;
    if svd.rank(eps) < p {
        return Err(Error::Fit("rank-deficient design matrix".into()));
    }
    let coef = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let residual_norm = (&design * &coef - &rhs).norm();
    let coef: Vec<f64> = coef.iter().copied().collect();
    let (coefficients, alpha, gamma) = match form {
        FitForm::PowerLaw => (vec![coef[0].exp()], Some(coef[1]), None),
        FitForm::AreaLaw => (coef.clone(), None, Some(-coef[0])),
        _ => (coef, None, None),
    };
    Ok(ScalingFit {
        form,
        coefficients,
        alpha,
        gamma,
        residual_norm,
        samples: samples.to_vec(),
    })
}

/// One row of the tabular entropy output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropySample {
    pub region: String,
    pub size: usize,
    pub boundary: Option<usize>,
    pub entropy_bits: f64,
}

impl EntropySample {
    pub fn measure(group: &StabilizerGroup, label: &str, region: &Region) -> Self {
        Self {
            region: label.to_string(),
            size: region.len(),
            boundary: region.boundary_components().ok(),
            entropy_bits: entropy_of(group, region) as f64,
        }
    }

    pub const CSV_HEADER: &'static str = "region,size,boundary,entropy_bits";

    pub fn csv_row(&self) -> String {
        let boundary = self.boundary.map(|b| b.to_string()).unwrap_or_default();
        let region = if self.region.contains([',', '"']) {
            format!("\"{}\"", self.region.replace('"', "\"\""))
        } else {
            self.region.clone()
        };
        format!("{region},{},{boundary},{}", self.size, self.entropy_bits)
    }
}
