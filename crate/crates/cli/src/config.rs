use std::path::Path;

use serde::{Deserialize, Serialize};
use topobound_core::FitForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Entropy,
    Cmi,
    MedBound,
    Tee,
    Tqo,
    PartitionBound,
    Tradeoff,
    Fit,
    Crosscheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripartitionSpec {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    #[serde(default)]
    pub origin: Vec<usize>,
    pub width: usize,
}

/// Overrides for the nested-sequence widths; unset fields use defaults
/// scaled to the lattice.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_height: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strip_width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buffer: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality_radius: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    Model,
    Regions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: String,
    pub values: Vec<u64>,
    /// Whether the axis is a model parameter or a variable in region
    /// templates. Inferred when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub over: Option<SweepTarget>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Entropy,
    K,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Experiment,
    pub model: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tripartition: Option<TripartitionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub seed: u64,
    /// Output directory; not embedded in reports so that they do not depend
    /// on where they were written.
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }
}

/// Substitutes `{expr}` placeholders, where `expr` is `var`, `var+N`,
/// `var-N`, `M*var` or `M*var±N`.
pub fn expand_template(template: &str, var: &str, value: u64) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| format!("unclosed '{{' in template {template:?}"))?;
        let expr = &rest[open + 1..open + close];
        let v = eval_linear(expr.trim(), var, value as i64)
            .ok_or_else(|| format!("cannot evaluate {{{expr}}} in template {template:?}"))?;
        if v < 0 {
            return Err(format!("{{{expr}}} is negative at {var}={value}"));
        }
        out.push_str(&v.to_string());
        rest = &rest[open + close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn eval_linear(expr: &str, var: &str, value: i64) -> Option<i64> {
    let (scale, after) = match expr.split_once('*') {
        Some((m, tail)) => (m.trim().parse::<i64>().ok()?, tail.trim()),
        None => (1, expr),
    };
    let tail = after.strip_prefix(var)?.trim();
    let offset = match tail.chars().next() {
        None => 0,
        Some(sign @ ('+' | '-')) => {
            let n = tail[1..].trim().parse::<i64>().ok()?;
            if sign == '-' {
                -n
            } else {
                n
            }
        }
        Some(_) => return None,
    };
    Some(scale * value + offset)
}
