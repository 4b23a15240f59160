//! Multi-seed statistics and the variant-S overlap heatmap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::dumps::SeedMetrics;
use crate::config::{Split, Variant};
use crate::error::{Error, Result};

/// Accuracy above which a seed counts as successful.
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub model: String,
    pub variant: Variant,
    pub split: Split,
    pub seeds: usize,
    pub mean: f64,
    /// Population standard deviation (divides by the number of seeds).
    pub std: f64,
    /// Fraction of seeds strictly above the threshold.
    pub success_rate: f64,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn model_of(m: &SeedMetrics) -> String {
    m.model.clone().unwrap_or_default()
}

/// One row per (model, variant, split ∈ {iid, ood}).
pub fn aggregate_seeds(metrics: &[SeedMetrics], success_threshold: f64) -> Result<Vec<AggregateRow>> {
    if metrics.is_empty() {
        return Err(Error::Dump("no seed metrics to aggregate".into()));
    }
    let mut groups: BTreeMap<(String, Variant), Vec<&SeedMetrics>> = BTreeMap::new();
    for m in metrics {
        m.validate()?;
        groups.entry((model_of(m), m.variant)).or_default().push(m);
    }
    let mut rows = Vec::new();
    for ((model, variant), ms) in groups {
        for split in [Split::Iid, Split::Ood] {
            let values: Vec<f64> = ms
                .iter()
                .map(|m| if split == Split::Iid { m.iid } else { m.ood })
                .collect();
            let (mean, std) = mean_std(&values);
            let success = values.iter().filter(|&&v| v > success_threshold).count();
            rows.push(AggregateRow {
                model: model.clone(),
                variant,
                split,
                seeds: values.len(),
                mean,
                std,
                success_rate: success as f64 / values.len() as f64,
            });
        }
    }
    Ok(rows)
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from("model,variant,split,seeds,mean,std,success_rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.model, r.variant, r.split, r.seeds, r.mean, r.std, r.success_rate
        );
    }
    out
}

/// Model | Dataset | IID | OOD table with `mean ± std` cells.
pub fn aggregate_table(rows: &[AggregateRow]) -> String {
    type Pair<'a> = (Option<&'a AggregateRow>, Option<&'a AggregateRow>);
    let mut by_key: BTreeMap<(&str, Variant), Pair> = BTreeMap::new();
    for r in rows {
        let e = by_key.entry((r.model.as_str(), r.variant)).or_default();
        match r.split {
            Split::Iid => e.0 = Some(r),
            _ => e.1 = Some(r),
        }
    }
    let cell = |r: Option<&AggregateRow>| {
        r.map(|r| format!("{:.2} ± {:.2}", r.mean, r.std)).unwrap_or_else(|| "-".into())
    };
    let width = rows.iter().map(|r| r.model.chars().count()).max().unwrap_or(0).max(5);
    let mut out = format!("{:<width$}  {:<7}  {:<11}  {:<11}  {:>5}\n", "Model", "Dataset", "IID", "OOD", "Seeds");
    let _ = writeln!(out, "{}", "-".repeat(width + 44));
    let mut last_model = None;
    for ((model, variant), (iid, ood)) in &by_key {
        let shown = if last_model == Some(*model) { "" } else { model };
        let seeds = iid.or(*ood).map(|r| r.seeds).unwrap_or(0);
        let _ = writeln!(
            out,
            "{:<width$}  {:<7}  {:<11}  {:<11}  {:>5}",
            if shown.is_empty() && last_model.is_none() { "-" } else { shown },
            variant.to_string(),
            cell(*iid),
            cell(*ood),
            seeds
        );
        last_model = Some(*model);
    }
    out
}

/// Mean OOD accuracy over (overlap-group size, shared symbols).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Heatmap {
    pub model: String,
    pub go_values: Vec<usize>,
    pub shared_values: Vec<usize>,
    /// `cells[i][j]` for `go_values[i]`, `shared_values[j]`.
    pub cells: Vec<Vec<Option<f64>>>,
    pub seeds: Vec<Vec<usize>>,
    pub missing: Vec<(usize, usize)>,
}

/// One heatmap per model over the metrics that carry both overlap tags.
pub fn heatmap_table(metrics: &[SeedMetrics]) -> Vec<Heatmap> {
    let mut by_model: BTreeMap<String, BTreeMap<(usize, usize), Vec<f64>>> = BTreeMap::new();
    for m in metrics {
        if let (Some(go), Some(x)) = (m.go_size, m.shared_symbols) {
            by_model
                .entry(model_of(m))
                .or_default()
                .entry((go, x))
                .or_default()
                .push(m.ood);
        }
    }
    by_model
        .into_iter()
        .map(|(model, cells)| {
            let go_values: Vec<usize> = cells.keys().map(|k| k.0).collect::<BTreeSet<_>>().into_iter().collect();
            let shared_values: Vec<usize> = cells.keys().map(|k| k.1).collect::<BTreeSet<_>>().into_iter().collect();
            let mut grid = vec![vec![None; shared_values.len()]; go_values.len()];
            let mut seeds = vec![vec![0; shared_values.len()]; go_values.len()];
            let mut missing = Vec::new();
            for (i, &go) in go_values.iter().enumerate() {
                for (j, &x) in shared_values.iter().enumerate() {
                    match cells.get(&(go, x)) {
                        Some(v) => {
                            grid[i][j] = Some(mean_std(v).0);
                            seeds[i][j] = v.len();
                        }
                        None => missing.push((go, x)),
                    }
                }
            }
            Heatmap {
                model,
                go_values,
                shared_values,
                cells: grid,
                seeds,
                missing,
            }
        })
        .collect()
}

pub fn heatmap_csv(h: &Heatmap) -> String {
    let mut out = String::from("go_size");
    for x in &h.shared_values {
        let _ = write!(out, ",shared_{x}");
    }
    out.push('\n');
    for (i, go) in h.go_values.iter().enumerate() {
        let _ = write!(out, "{go}");
        for v in &h.cells[i] {
            match v {
                Some(v) => {
                    let _ = write!(out, ",{v}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}
