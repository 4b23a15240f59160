//! Per-symbol analysis of a model dump and the on-disk report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::aggregate::{aggregate_csv, aggregate_seeds, aggregate_table, heatmap_csv, heatmap_table, AggregateRow, Heatmap};
use super::compat::{compatibility_grid, CompatGrid, Partition};
use super::dumps::{DumpMeta, PredictionDump, RepresentationDump, SeedMetrics};
use super::similarity::{cosine_matrix, detect_clusters, Clusters, CosineMatrix};
use super::svg::{heatmap_svg, panels_svg, HeatmapSpec};
use crate::error::{Error, Result};
use crate::fnalg::{FunctionSet, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolAnalysis {
    pub symbol: Symbol,
    pub cosine: CosineMatrix,
    pub clusters: Clusters,
    /// Rows: clusters of this symbol. Columns: function groups.
    pub by_cluster: CompatGrid,
    /// Rows and columns: function groups.
    pub by_group: CompatGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub meta: DumpMeta,
    pub threshold: f64,
    /// Group name of each function, by index.
    pub groups: Vec<String>,
    pub symbols: Vec<SymbolAnalysis>,
    pub warnings: Vec<String>,
}

pub fn analyze(
    dump: &RepresentationDump,
    predictions: &PredictionDump,
    functions: &FunctionSet,
    threshold: f64,
) -> Result<Analysis> {
    let (nf, ns) = (functions.num_functions(), functions.num_symbols());
    dump.validate_complete(nf, ns)?;
    predictions.validate_complete(nf, ns)?;
    let groups = Partition::groups(functions);
    let symbols: Vec<SymbolAnalysis> = (0..ns as u32)
        .into_par_iter()
        .map(|s| {
            let symbol = Symbol(s);
            let cosine = cosine_matrix(dump, symbol)?;
            let clusters = detect_clusters(&cosine.values, threshold);
            let by_cluster = compatibility_grid(predictions, functions, symbol, &Partition::clusters(&clusters), &groups);
            let by_group = compatibility_grid(predictions, functions, symbol, &groups, &groups);
            Ok(SymbolAnalysis {
                symbol,
                cosine,
                clusters,
                by_cluster,
                by_group,
            })
        })
        .collect::<Result<_>>()?;
    let warnings = symbols
        .iter()
        .flat_map(|a| {
            a.cosine
                .zero_norm
                .iter()
                .map(move |f| format!("symbol {}: zero-norm vector for {f}, cosine reported as 0", a.symbol))
        })
        .collect();
    Ok(Analysis {
        meta: dump.meta.clone(),
        threshold,
        groups: functions.tables().iter().map(|t| t.group().to_string()).collect(),
        symbols,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub success_threshold: f64,
    pub converged_only: bool,
    pub seeds_in: usize,
    pub seeds_used: usize,
    pub rows: Vec<AggregateRow>,
    pub heatmaps: Vec<Heatmap>,
}

/// With `converged_only`, seeds flagged as not converged are dropped first.
pub fn build_metrics_report(metrics: &[SeedMetrics], success_threshold: f64, converged_only: bool) -> Result<MetricsReport> {
    let used: Vec<SeedMetrics> = metrics
        .iter()
        .filter(|m| !converged_only || m.converged)
        .cloned()
        .collect();
    Ok(MetricsReport {
        success_threshold,
        converged_only,
        seeds_in: metrics.len(),
        seeds_used: used.len(),
        rows: aggregate_seeds(&used, success_threshold)?,
        heatmaps: heatmap_table(&used),
    })
}

fn grid_csv(corner: &str, rows: &[String], cols: &[String], cells: &[Vec<Option<f64>>]) -> String {
    let mut out = corner.to_string();
    for c in cols {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (label, row) in rows.iter().zip(cells) {
        out.push_str(label);
        for v in row {
            out.push(',');
            if let Some(v) = v {
                let _ = write!(out, "{v}");
            }
        }
        out.push('\n');
    }
    out
}

fn file_tag(model: &str) -> String {
    model
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        self.written.push(path);
        Ok(())
    }
}

fn function_labels(m: &CosineMatrix) -> Vec<String> {
    m.functions.iter().map(|f| f.to_string()).collect()
}

fn write_analysis(a: &Analysis, w: &mut Writer) -> Result<()> {
    let labels: Vec<Vec<String>> = a.symbols.iter().map(|s| function_labels(&s.cosine)).collect();
    let titles: Vec<String> = a.symbols.iter().map(|s| format!("symbol {}", s.symbol)).collect();
    let cosine_values: Vec<Vec<Vec<Option<f64>>>> = a
        .symbols
        .iter()
        .map(|s| s.cosine.values.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect())
        .collect();
    let panels: Vec<(String, HeatmapSpec)> = a
        .symbols
        .iter()
        .enumerate()
        .map(|(k, s)| {
            (
                s.symbol.to_string(),
                HeatmapSpec {
                    title: &titles[k],
                    row_axis: "function",
                    col_axis: "function",
                    row_labels: &labels[k],
                    col_labels: &labels[k],
                    values: &cosine_values[k],
                    range: (-1.0, 1.0),
                },
            )
        })
        .collect();
    w.put("cosine_panels.svg", &panels_svg(&panels, 4))?;

    let mut compat_panels = Vec::new();
    let compat_titles: Vec<(String, String)> = a
        .symbols
        .iter()
        .map(|s| (format!("symbol {}: cluster x group", s.symbol), format!("symbol {}: group x group", s.symbol)))
        .collect();
    for (k, s) in a.symbols.iter().enumerate() {
        w.put(
            &format!("cosine_symbol_{}.csv", s.symbol),
            &grid_csv("function", &labels[k], &labels[k], &cosine_values[k]),
        )?;
        for (suffix, grid, title) in [
            ("clusters", &s.by_cluster, &compat_titles[k].0),
            ("groups", &s.by_group, &compat_titles[k].1),
        ] {
            w.put(
                &format!("compat_symbol_{}_{suffix}.csv", s.symbol),
                &grid_csv("first\\second", &grid.row_labels, &grid.col_labels, &grid.cells),
            )?;
            compat_panels.push((
                format!("{}_{suffix}", s.symbol),
                HeatmapSpec {
                    title,
                    row_axis: if suffix == "clusters" { "first function cluster" } else { "first function group" },
                    col_axis: "second function group",
                    row_labels: &grid.row_labels,
                    col_labels: &grid.col_labels,
                    values: &grid.cells,
                    range: (0.0, 1.0),
                },
            ));
        }
    }
    w.put("compat_panels.svg", &panels_svg(&compat_panels, 2))?;

    #[derive(Serialize)]
    struct ClusterEntry<'a> {
        symbol: Symbol,
        clusters: Vec<Vec<String>>,
        zero_norm: Vec<String>,
        groups: &'a [String],
    }
    let entries: Vec<ClusterEntry> = a
        .symbols
        .iter()
        .map(|s| ClusterEntry {
            symbol: s.symbol,
            clusters: s
                .clusters
                .members
                .iter()
                .map(|m| m.iter().map(|&i| s.cosine.functions[i].to_string()).collect())
                .collect(),
            zero_norm: s.cosine.zero_norm.iter().map(|f| f.to_string()).collect(),
            groups: &a.groups,
        })
        .collect();
    let json = serde_json::json!({ "threshold": a.threshold, "symbols": entries });
    w.put("clusters.json", &(serde_json::to_string_pretty(&json)? + "\n"))?;

    let mut txt = String::new();
    for s in &a.symbols {
        let _ = writeln!(txt, "symbol {}: {} cluster(s)", s.symbol, s.clusters.len());
        for (c, m) in s.clusters.members.iter().enumerate() {
            let names: Vec<String> = m
                .iter()
                .map(|&i| format!("{}({})", s.cosine.functions[i], a.groups[s.cosine.functions[i].index()]))
                .collect();
            let _ = writeln!(txt, "  C{}: {}", c + 1, names.join(" "));
        }
    }
    w.put("clusters.txt", &txt)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "model: {}", a.meta.model);
    let _ = writeln!(summary, "variant: {}", a.meta.variant);
    let _ = writeln!(summary, "seed: {}", a.meta.seed);
    let _ = writeln!(summary, "dim: {}", a.meta.dim);
    let _ = writeln!(summary, "cluster threshold: {}", a.threshold);
    let _ = writeln!(summary, "clustering: connected components of cosine >= threshold");
    let _ = writeln!(summary, "undefined compatibility cells are left blank");
    for s in &a.symbols {
        let overall = |g: &CompatGrid| {
            let c: usize = g.correct.iter().flatten().sum();
            let t: usize = g.total.iter().flatten().sum();
            c as f64 / t.max(1) as f64
        };
        let _ = writeln!(
            summary,
            "symbol {}: clusters={} two-step accuracy={:.4}",
            s.symbol,
            s.clusters.len(),
            overall(&s.by_group)
        );
    }
    if !a.warnings.is_empty() {
        let _ = writeln!(summary, "warnings:");
        for warning in &a.warnings {
            let _ = writeln!(summary, "  {warning}");
        }
    }
    w.put("analysis_summary.txt", &summary)
}

fn write_metrics(m: &MetricsReport, w: &mut Writer) -> Result<()> {
    w.put("aggregate.csv", &aggregate_csv(&m.rows))?;
    w.put("aggregate.txt", &aggregate_table(&m.rows))?;
    let mut txt = String::new();
    let _ = writeln!(txt, "seeds read: {}", m.seeds_in);
    let _ = writeln!(txt, "seeds used: {}", m.seeds_used);
    let _ = writeln!(txt, "converged only: {}", m.converged_only);
    let _ = writeln!(txt, "standard deviation: population (divides by n)");
    let _ = writeln!(txt, "success: accuracy strictly above {}", m.success_threshold);
    for r in &m.rows {
        let _ = writeln!(
            txt,
            "{} {} {}: success rate {:.4} over {} seed(s)",
            if r.model.is_empty() { "-" } else { &r.model },
            r.variant,
            r.split,
            r.success_rate,
            r.seeds
        );
    }
    for h in &m.heatmaps {
        let name = if h.model.is_empty() {
            "heatmap".to_string()
        } else {
            format!("heatmap_{}", file_tag(&h.model))
        };
        w.put(&format!("{name}.csv"), &heatmap_csv(h))?;
        let rows: Vec<String> = h.go_values.iter().map(|v| v.to_string()).collect();
        let cols: Vec<String> = h.shared_values.iter().map(|v| v.to_string()).collect();
        let title = if h.model.is_empty() {
            "mean OOD accuracy".to_string()
        } else {
            format!("{}: mean OOD accuracy", h.model)
        };
        w.put(
            &format!("{name}.svg"),
            &heatmap_svg(&HeatmapSpec {
                title: &title,
                row_axis: "overlapping functions",
                col_axis: "shared symbols",
                row_labels: &rows,
                col_labels: &cols,
                values: &h.cells,
                range: (0.0, 1.0),
            }),
        )?;
        if h.missing.is_empty() {
            let _ = writeln!(txt, "{name}: complete");
        } else {
            let cells: Vec<String> = h.missing.iter().map(|(g, x)| format!("({g},{x})")).collect();
            let _ = writeln!(txt, "{name}: missing cells (go_size,shared_symbols) {}", cells.join(" "));
        }
    }
    w.put("report.txt", &txt)
}

/// Writes every available artifact into `out_dir` and returns the paths in
/// write order. Output bytes depend only on the inputs.
pub fn emit_report(analysis: Option<&Analysis>, metrics: Option<&MetricsReport>, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut w = Writer::new(out_dir.as_ref())?;
    if let Some(a) = analysis {
        write_analysis(a, &mut w)?;
    }
    if let Some(m) = metrics {
        write_metrics(m, &mut w)?;
    }
    Ok(w.written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_csv_blanks() {
        let rows = vec!["Ga".to_string()];
        let cols = vec!["Ga".to_string(), "Gb".to_string()];
        assert_eq!(grid_csv("x", &rows, &cols, &[vec![Some(1.0), None]]), "x,Ga,Gb\nGa,1,\n");
    }

    #[test]
    fn tags_are_file_safe() {
        assert_eq!(file_tag("bi-LSTM/2 layers"), "bi-LSTM_2_layers");
    }
}
