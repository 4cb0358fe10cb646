//! Randomized consistency checks of the entropy engine: strong subadditivity
//! and the telescoping identity behind the MED bound. A failure here means an
//! engine bug, not a physical finding.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{cmi, telescoping_residual};
use crate::error::Result;
use crate::geometry::{
    build_med_sequence, MedWidths, PartitionSequence, TorusLattice, Tripartition,
};
use crate::models::{random_stabilizer_code, toric_code};
use crate::pauli::StabilizerGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfCheckConfig {
    pub seed: u64,
    pub ssa_draws: usize,
    pub telescoping_draws: usize,
    pub max_qubits: usize,
    pub toric_sizes: Vec<usize>,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            ssa_draws: 1000,
            telescoping_draws: 100,
            max_qubits: 10,
            toric_sizes: vec![4, 6],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub min_value: i64,
    pub max_value: i64,
    pub first_failure: Option<String>,
}

impl CheckSummary {
    fn collect(name: &str, results: Vec<(i64, String)>, ok: impl Fn(i64) -> bool) -> Self {
        let failures: Vec<&(i64, String)> = results.iter().filter(|r| !ok(r.0)).collect();
        Self {
            name: name.to_string(),
            cases: results.len(),
            failures: failures.len(),
            min_value: results.iter().map(|r| r.0).min().unwrap_or(0),
            max_value: results.iter().map(|r| r.0).max().unwrap_or(0),
            first_failure: failures.first().map(|r| r.1.clone()),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfCheckReport {
    pub config: SelfCheckConfig,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

/// A random code on a ring of `2..=max_qubits` qubits, drawn from `rng`.
fn random_case(
    rng: &mut ChaCha8Rng,
    max_qubits: usize,
) -> Result<(StabilizerGroup, Arc<TorusLattice>, String)> {
    let n = rng.random_range(2..=max_qubits.max(2));
    let s = rng.random_range(0..=n);
    let seed = rng.random::<u64>();
    let group = random_stabilizer_code(n, s, seed)?;
    let lattice = Arc::new(TorusLattice::ring(n)?);
    Ok((group, lattice, format!("random:n={n},s={s},seed={seed}")))
}

fn case_rng(seed: u64, stream: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream << 32 | index as u64);
    rng
}

pub fn ssa_check(config: &SelfCheckConfig) -> Result<CheckSummary> {
    let results = (0..config.ssa_draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(config.seed, 1, i);
            let (group, lattice, label) = random_case(&mut rng, config.max_qubits)?;
            let t = Tripartition::random(&lattice, &mut rng)?;
            Ok((
                cmi(&group, &t),
                format!("{label} A={} B={} C={}", t.a, t.b, t.c),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckSummary::collect("ssa", results, |v| v >= 0))
}

pub fn telescoping_check(config: &SelfCheckConfig) -> Result<CheckSummary> {
    let results = (0..config.telescoping_draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(config.seed, 2, i);
            let (group, lattice, label) = random_case(&mut rng, config.max_qubits)?;
            let stages = rng.random_range(1..=4);
            let seq = PartitionSequence::random(&lattice, stages, &mut rng)?;
            Ok((
                telescoping_residual(&group, &seq),
                format!("{label} stages={stages}"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckSummary::collect("telescoping-random", results, |v| {
        v == 0
    }))
}

pub fn toric_telescoping_check(config: &SelfCheckConfig) -> Result<CheckSummary> {
    let results = config
        .toric_sizes
        .iter()
        .map(|&l| {
            let (group, lattice) = toric_code(l)?;
            let seq = build_med_sequence(&lattice, 3, &MedWidths::default_for(&lattice))?;
            Ok((telescoping_residual(&group, &seq), format!("toric:L={l}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckSummary::collect("telescoping-toric", results, |v| {
        v == 0
    }))
}

pub fn run_selfcheck(config: &SelfCheckConfig) -> Result<SelfCheckReport> {
    let checks = vec![
        ssa_check(config)?,
        telescoping_check(config)?,
        toric_telescoping_check(config)?,
    ];
    let passed = checks.iter().all(CheckSummary::passed);
    Ok(SelfCheckReport {
        config: config.clone(),
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selfcheck_passes_and_is_reproducible() {
        let config = SelfCheckConfig {
            seed: 9,
            ssa_draws: 50,
            telescoping_draws: 20,
            max_qubits: 8,
            toric_sizes: vec![3],
        };
        let a = run_selfcheck(&config).unwrap();
        assert!(a.passed, "{a:?}");
        assert_eq!(a, run_selfcheck(&config).unwrap());
        assert_eq!(a.checks[0].cases, 50);
    }

    #[test]
    fn summary_records_first_failure() {
        let s = CheckSummary::collect(
            "t",
            vec![(0, "a".into()), (-1, "b".into()), (-2, "c".into())],
            |v| v >= 0,
        );
        assert_eq!((s.failures, s.min_value, s.max_value), (2, -2, 0));
        assert_eq!(s.first_failure.as_deref(), Some("b"));
    }
}
