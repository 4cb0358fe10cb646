use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use topobound_core::dense::{dense_region_entropy, stabilizer_to_dense, QMAX};
use topobound_core::entropy::{
    cmi, entropy_of, fit_scaling, med_bound, med_terms, partition_bound, tee_kitaev_preskill,
    tradeoff_report, verify_eq10,
};
use topobound_core::geometry::build_med_sequence;
use topobound_core::{
    BoundVerdict, CodeParameters, EntropySample, FitForm, MedWidths, Model, ModelSpec, Region,
    ScalingFit, Tripartition, ENGINE_VERSION,
};

use crate::config::{expand_template, Config, Experiment, Quantity, SweepTarget};

/// Bounds that are theorems: a failure means an engine bug and exits 1.
/// Everything else (TQO, the degeneracy-vs-TEE comparison) is a finding.
const THEOREMS: &[&str] = &["med", "telescoping", "ssa", "partition", "crosscheck"];

#[derive(Debug, Serialize)]
pub struct PointReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    pub model: String,
    pub code: CodeParameters,
    pub result: Value,
    pub verdicts: Vec<BoundVerdict>,
    #[serde(skip)]
    pub samples: Vec<EntropySample>,
    #[serde(skip)]
    pub fit_point: Option<(f64, f64)>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub engine_version: String,
    pub config: Config,
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<ScalingFit>,
    pub violations: Vec<String>,
    pub findings: Vec<String>,
}

impl Report {
    pub fn csv(&self) -> Option<String> {
        let mut rows = Vec::new();
        for p in &self.points {
            let prefix = match (&p.axis, p.value, self.sweep_over_model()) {
                (Some(axis), Some(v), true) => format!("[{axis}={v}] "),
                _ => String::new(),
            };
            for s in &p.samples {
                let labelled = EntropySample {
                    region: format!("{prefix}{}", s.region),
                    ..s.clone()
                };
                rows.push(labelled.csv_row());
            }
        }
        if rows.is_empty() {
            return None;
        }
        let mut out = String::from(EntropySample::CSV_HEADER);
        out.push('\n');
        for r in rows {
            out.push_str(&r);
            out.push('\n');
        }
        Some(out)
    }

    fn sweep_over_model(&self) -> bool {
        self.config
            .sweep
            .as_ref()
            .is_some_and(|s| sweep_target(&self.config, s) == SweepTarget::Model)
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }
}

fn sweep_target(config: &Config, sweep: &crate::config::Sweep) -> SweepTarget {
    sweep.over.unwrap_or_else(|| {
        let in_model = ModelSpec::parse(&config.model)
            .map(|m| m.params.iter().any(|(k, _)| *k == sweep.axis))
            .unwrap_or(false);
        if in_model {
            SweepTarget::Model
        } else {
            SweepTarget::Regions
        }
    })
}

fn region(model: &Model, spec: &str) -> Result<Region, String> {
    Region::parse(&model.lattice, spec).map_err(|e| format!("region {spec:?}: {e}"))
}

fn core_err(context: &str) -> impl Fn(topobound_core::Error) -> String + '_ {
    move |e| format!("{context}: {e}")
}

/// Per-point inputs after sweep substitution.
struct PointInputs {
    axis: Option<String>,
    value: Option<u64>,
    model: ModelSpec,
    regions: Vec<String>,
    tripartition: Option<[String; 3]>,
}

pub fn run(config: &Config) -> Result<Report, String> {
    let base = ModelSpec::parse(&config.model).map_err(|e| e.to_string())?;
    let inputs: Vec<PointInputs> = match &config.sweep {
        None => vec![PointInputs {
            axis: None,
            value: None,
            model: base.clone(),
            regions: config.regions.clone(),
            tripartition: config
                .tripartition
                .as_ref()
                .map(|t| [t.a.clone(), t.b.clone(), t.c.clone()]),
        }],
        Some(sweep) => {
            if sweep.values.is_empty() {
                return Err("sweep has no values".into());
            }
            let target = sweep_target(config, sweep);
            sweep
                .values
                .iter()
                .map(|&v| {
                    let expand = |s: &String| match target {
                        SweepTarget::Regions => expand_template(s, &sweep.axis, v),
                        SweepTarget::Model => Ok(s.clone()),
                    };
                    let model = match target {
                        SweepTarget::Model => base.with_param(&sweep.axis, v),
                        SweepTarget::Regions => base.clone(),
                    };
                    let tripartition = match &config.tripartition {
                        Some(t) => Some([expand(&t.a)?, expand(&t.b)?, expand(&t.c)?]),
                        None => None,
                    };
                    Ok(PointInputs {
                        axis: Some(sweep.axis.clone()),
                        value: Some(v),
                        model,
                        regions: config
                            .regions
                            .iter()
                            .map(expand)
                            .collect::<Result<_, _>>()?,
                        tripartition,
                    })
                })
                .collect::<Result<_, String>>()?
        }
    };
    if config.experiment == Experiment::Fit && config.sweep.is_none() {
        return Err("the fit experiment needs a sweep".into());
    }

    let points = inputs
        .into_par_iter()
        .map(|p| run_point(config, p))
        .collect::<Result<Vec<_>, String>>()?;

    let fit = if config.experiment == Experiment::Fit {
        let samples: Vec<(f64, f64)> = points.iter().filter_map(|p| p.fit_point).collect();
        let form = config
            .fit
            .unwrap_or(match config.quantity.unwrap_or(Quantity::Entropy) {
                Quantity::Entropy => FitForm::AreaLaw,
                Quantity::K => FitForm::Proportional,
            });
        Some(fit_scaling(&samples, form).map_err(|e| e.to_string())?)
    } else {
        None
    };

    let mut violations = Vec::new();
    let mut findings = Vec::new();
    for p in &points {
        for v in p.verdicts.iter().filter(|v| !v.holds) {
            let line = format!("{} on {}: lhs {} > rhs {}", v.bound, p.model, v.lhs, v.rhs);
            if THEOREMS.contains(&v.bound.as_str()) {
                violations.push(line);
            } else {
                findings.push(line);
            }
        }
    }
    Ok(Report {
        engine_version: ENGINE_VERSION.to_string(),
        config: config.clone(),
        points,
        fit,
        violations,
        findings,
    })
}

fn tripartition(
    model: &Model,
    config: &Config,
    specs: &Option<[String; 3]>,
) -> Result<Tripartition, String> {
    if let Some([a, b, c]) = specs {
        return Tripartition::new(region(model, a)?, region(model, b)?, region(model, c)?)
            .map_err(core_err("tripartition"));
    }
    let disk = config
        .disk
        .as_ref()
        .ok_or("this experiment needs a tripartition or a disk")?;
    let origin = if disk.origin.is_empty() {
        vec![0; model.lattice.dim()]
    } else {
        disk.origin.clone()
    };
    Tripartition::kitaev_preskill_disk(&model.lattice, &origin, disk.width)
        .map_err(core_err("disk"))
}

fn distance(model: &Model, config: &Config) -> Result<usize, String> {
    if let Some(d) = config.distance {
        return Ok(d);
    }
    let cutoff = config
        .distance_cutoff
        .unwrap_or(model.group.num_qubits() / 2);
    model.group.brute_force_distance(cutoff).ok_or_else(|| {
        format!(
            "no logical operator of weight <= {cutoff}; set `distance` or raise `distance_cutoff`"
        )
    })
}

fn run_point(config: &Config, p: PointInputs) -> Result<PointReport, String> {
    let model = p.model.build().map_err(|e| e.to_string())?;
    let g = &model.group;
    let mut code = g.code_parameters();
    let mut verdicts = Vec::new();
    let mut samples = Vec::new();
    let mut fit_point = None;

    let result = match config.experiment {
        Experiment::Entropy => {
            if p.regions.is_empty() {
                return Err("the entropy experiment needs `regions`".into());
            }
            for spec in &p.regions {
                samples.push(EntropySample::measure(g, spec, &region(&model, spec)?));
            }
            serde_json::to_value(&samples).expect("serializable")
        }
        Experiment::Cmi => {
            let t = tripartition(&model, config, &p.tripartition)?;
            let value = cmi(g, &t);
            verdicts.push(BoundVerdict::new("ssa", -(value as f64), 0.0, 0.0));
            json!({ "cmi": value })
        }
        Experiment::MedBound => {
            let stages = config.stages.unwrap_or(3);
            let mut widths = MedWidths::default_for(&model.lattice);
            if let Some(s) = &config.sequence {
                widths.band_height = s.band_height.unwrap_or(widths.band_height);
                widths.first_width = s.first_width.unwrap_or(widths.first_width);
                widths.strip_width = s.strip_width.unwrap_or(widths.strip_width);
                widths.buffer = s.buffer.unwrap_or(widths.buffer);
                widths.locality_radius = s.locality_radius;
            }
            let seq = build_med_sequence(&model.lattice, stages, &widths)
                .map_err(core_err("sequence"))?;
            let terms = med_terms(g, &seq);
            let residual = terms.stage_cmi.iter().sum::<i64>() - (terms.rhs() - terms.total);
            verdicts.push(med_bound(g, &seq));
            verdicts.push(BoundVerdict::new(
                "telescoping",
                residual.abs() as f64,
                0.0,
                0.0,
            ));
            json!({
                "terms": terms,
                "rhs": terms.rhs(),
                "widths": widths,
                "locality_radius": seq.locality_radius(),
            })
        }
        Experiment::Tee => {
            let t = tripartition(&model, config, &p.tripartition)?;
            let gamma = tee_kitaev_preskill(g, &t);
            verdicts.push(verify_eq10(g, gamma as f64));
            json!({ "gamma": gamma })
        }
        Experiment::Tqo => {
            let r = config.r.unwrap_or(1);
            verdicts.push(g.tqo_check(&model.lattice, r).map_err(|e| e.to_string())?);
            json!({ "r": r })
        }
        Experiment::PartitionBound => {
            let d = distance(&model, config)?;
            code.d = Some(d);
            let partitions: Vec<Vec<Region>> = if p.regions.is_empty() {
                random_partitions(&model, d, config.partitions.unwrap_or(20), config.seed)
            } else {
                vec![p
                    .regions
                    .iter()
                    .map(|s| region(&model, s))
                    .collect::<Result<_, _>>()?]
            };
            for parts in &partitions {
                verdicts.push(partition_bound(g, parts, d).map_err(core_err("partition"))?);
            }
            json!({ "d": d, "partitions": partitions.len() })
        }
        Experiment::Tradeoff => {
            let d = distance(&model, config)?;
            code.d = Some(d);
            let report = tradeoff_report(code, model.lattice.dim(), config.alpha.unwrap_or(0.5))
                .map_err(core_err("tradeoff"))?;
            serde_json::to_value(report).expect("serializable")
        }
        Experiment::Fit => {
            let x = p.value.expect("fit runs under a sweep") as f64;
            let y = match config.quantity.unwrap_or(Quantity::Entropy) {
                Quantity::K => code.k as f64,
                Quantity::Entropy => {
                    let [spec] = p.regions.as_slice() else {
                        return Err("an entropy fit needs exactly one region template".into());
                    };
                    let s = EntropySample::measure(g, spec, &region(&model, spec)?);
                    let y = s.entropy_bits;
                    samples.push(s);
                    y
                }
            };
            fit_point = Some((x, y));
            json!({ "x": x, "y": y })
        }
        Experiment::Crosscheck => {
            let n = g.num_qubits();
            if n > QMAX {
                return Err(format!(
                    "crosscheck needs at most {QMAX} qubits, model has {n}"
                ));
            }
            let regions: Vec<Region> = if p.regions.is_empty() {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                (0..config.samples.unwrap_or(50))
                    .map(|_| {
                        Region::from_qubits(&model.lattice, (0..n).filter(|_| rng.random_bool(0.5)))
                            .expect("in range")
                    })
                    .collect()
            } else {
                p.regions
                    .iter()
                    .map(|s| region(&model, s))
                    .collect::<Result<_, _>>()?
            };
            let rho = stabilizer_to_dense(g).map_err(|e| e.to_string())?;
            let mut worst = 0.0f64;
            for r in &regions {
                let dense = dense_region_entropy(&rho, &r.indices()).map_err(|e| e.to_string())?;
                worst = worst.max((dense - entropy_of(g, r) as f64).abs());
            }
            let mut v = BoundVerdict::new("crosscheck", worst, 0.0, 1e-9);
            v.input("regions", regions.len());
            verdicts.push(v);
            json!({ "regions": regions.len(), "max_abs_difference": worst })
        }
    };

    Ok(PointReport {
        axis: p.axis,
        value: p.value,
        model: model.spec.to_string(),
        code,
        result,
        verdicts,
        samples,
        fit_point,
    })
}

/// Random partitions of all qubits into parts of size `1..d`.
fn random_partitions(model: &Model, d: usize, count: usize, seed: u64) -> Vec<Vec<Region>> {
    if d <= 1 {
        // an empty list lets partition_bound report why no partition exists
        return vec![Vec::new()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.lattice.num_qubits();
    (0..count)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut parts = Vec::new();
            let mut rest = order.as_slice();
            while !rest.is_empty() {
                let size = rng.random_range(1..d).min(rest.len());
                let (head, tail) = rest.split_at(size);
                parts.push(
                    Region::from_qubits(&model.lattice, head.iter().copied()).expect("in range"),
                );
                rest = tail;
            }
            parts
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_axis_inference() {
        let c = Config::parse(
            r#"{"experiment": "entropy", "model": "toric:L=4", "regions": ["rect 0 0 {l} {l}"],
                "sweep": {"axis": "L", "values": [3]}}"#,
        )
        .unwrap();
        assert_eq!(
            sweep_target(&c, c.sweep.as_ref().unwrap()),
            SweepTarget::Model
        );
        let mut lower = c.clone();
        lower.sweep.as_mut().unwrap().axis = "l".into();
        assert_eq!(
            sweep_target(&lower, lower.sweep.as_ref().unwrap()),
            SweepTarget::Regions
        );
    }

    #[test]
    fn random_partitions_cover_with_small_parts() {
        let model = ModelSpec::parse("toric:L=4").unwrap().build().unwrap();
        let parts = random_partitions(&model, 4, 5, 9);
        assert_eq!(parts.len(), 5);
        for p in &parts {
            assert!(p.iter().all(|r| (1..4).contains(&r.len())));
            assert_eq!(p.iter().map(Region::len).sum::<usize>(), 32);
        }
        assert_eq!(parts, random_partitions(&model, 4, 5, 9));
    }

    #[test]
    fn model_sweep_labels_csv_rows() {
        let c = Config::parse(
            r#"{"experiment": "entropy", "model": "toric:L=4", "regions": ["ball 0 0 0"],
                "sweep": {"axis": "L", "values": [3, 4]}}"#,
        )
        .unwrap();
        let csv = run(&c).unwrap().csv().unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows, ["[L=3] ball 0 0 0,2,1,2", "[L=4] ball 0 0 0,2,1,2"]);
    }
}
