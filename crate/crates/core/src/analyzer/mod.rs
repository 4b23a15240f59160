//! Diagnostics over model outputs: representation similarity, clusters,
//! two-step compatibility, seed statistics and overlap heatmaps.

pub mod aggregate;
pub mod compat;
pub mod dumps;
pub mod report;
pub mod similarity;
pub mod svg;

pub use aggregate::{aggregate_seeds, heatmap_table, AggregateRow, Heatmap, DEFAULT_SUCCESS_THRESHOLD};
pub use compat::{compatibility_grid, oracle_predictions, CompatGrid, Partition};
pub use dumps::{DumpMeta, PredictionDump, PredictionRecord, RepresentationDump, SeedMetrics};
pub use report::{analyze, build_metrics_report, emit_report, Analysis, MetricsReport, SymbolAnalysis};
pub use similarity::{cosine, cosine_matrix, detect_clusters, Clusters, CosineMatrix};

/// Cosine similarity at or above which two functions share a cluster.
pub const DEFAULT_THRESHOLD: f64 = 0.8;
