//! Command-line front end: `generate`, `verify`, `analyze`, `report`, `graph`.
//!
//! Exit codes: 0 success, 1 verification or input-content failure,
//! 2 usage or configuration error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analyzer::{
    analyze, build_metrics_report, emit_report, PredictionDump, RepresentationDump, SeedMetrics, DEFAULT_SUCCESS_THRESHOLD,
    DEFAULT_THRESHOLD,
};
use crate::config::{Split, TaskConfig, Variant};
use crate::dataset::{write_dataset, DatasetReader};
use crate::dataset::{Task, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::sampler::SamplingGraph;
use crate::verifier::verify_file;

/// Output stream accepted by [`run_with`].
pub type Sink = dyn Write + Send;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable consulted for the seed when neither a flag nor a
/// config file sets it.
pub const SEED_ENV: &str = "CTLPP_SEED";

#[derive(Debug, Parser)]
#[command(name = "ctlpp", version, about = "Generate, verify and analyze CTL++ systematicity datasets")]
struct Cli {
    /// Maximum worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write train.jsonl, iid.jsonl, ood.jsonl and manifest.json.
    Generate(GenerateArgs),
    /// Check dataset files; exits 1 on any violation.
    Verify(VerifyArgs),
    /// Cosine matrices, clusters and compatibility grids for one model dump.
    Analyze(AnalyzeArgs),
    /// Seed aggregates and overlap heatmaps from a metrics file.
    Report(ReportArgs),
    /// Export a sampling graph.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// JSON file with any subset of the task configuration fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long)]
    variant: Option<Variant>,
    /// Alphabet size.
    #[arg(long, value_name = "N")]
    symbols: Option<usize>,
    /// Number of random bijections.
    #[arg(long, value_name = "N")]
    functions: Option<usize>,
    /// Largest number of composed functions.
    #[arg(long, value_name = "N")]
    max_depth: Option<usize>,
    #[arg(long, value_name = "N")]
    train_size: Option<usize>,
    /// Size of each of the IID and OOD splits.
    #[arg(long, value_name = "N")]
    test_size: Option<usize>,
    /// Overlapping functions (variant S).
    #[arg(long, value_name = "N")]
    go_size: Option<usize>,
    /// Symbols shared by both paths of each overlapping function (variant S).
    #[arg(long, value_name = "N")]
    shared_symbols: Option<usize>,
    /// Master seed; falls back to the config file, then $CTLPP_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Print machine-readable JSON reports instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Representation dump (JSONL).
    #[arg(long, value_name = "FILE")]
    dump: PathBuf,
    /// Two-step prediction dump (JSONL).
    #[arg(long, value_name = "FILE")]
    preds: PathBuf,
    /// Any split file of the dataset the model was trained on.
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Cosine similarity joining two functions into one cluster.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Seed metrics (JSONL).
    #[arg(long, value_name = "FILE")]
    metrics: PathBuf,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Accuracy a seed must exceed to count as a success.
    #[arg(long, default_value_t = DEFAULT_SUCCESS_THRESHOLD)]
    threshold: f64,
    /// Ignore seeds not flagged as converged.
    #[arg(long)]
    converged_only: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    format: GraphFormat,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Partial configuration as read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    variant: Option<Variant>,
    num_symbols: Option<usize>,
    num_functions: Option<usize>,
    max_functions: Option<usize>,
    train_size: Option<usize>,
    test_size: Option<usize>,
    go_size: Option<usize>,
    shared_symbols: Option<usize>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct SplitEntry {
    file: String,
    examples: usize,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    format: &'a str,
    config: &'a TaskConfig,
    coverage_incomplete: bool,
    splits: std::collections::BTreeMap<Split, SplitEntry>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Config(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn resolve_config(args: &GenerateArgs, env_seed: Option<String>) -> Result<TaskConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            serde_json::from_str::<ConfigFile>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let env_seed = match env_seed {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?,
        ),
        None => None,
    };
    let d = TaskConfig::default();
    let config = TaskConfig {
        variant: args.variant.or(file.variant).unwrap_or(d.variant),
        num_symbols: args.symbols.or(file.num_symbols).unwrap_or(d.num_symbols),
        num_functions: args.functions.or(file.num_functions).unwrap_or(d.num_functions),
        max_functions: args.max_depth.or(file.max_functions).unwrap_or(d.max_functions),
        train_size: args.train_size.or(file.train_size).unwrap_or(d.train_size),
        test_size: args.test_size.or(file.test_size).unwrap_or(d.test_size),
        go_size: args.go_size.or(file.go_size),
        shared_symbols: args.shared_symbols.or(file.shared_symbols),
        seed: args.seed.or(file.seed).or(env_seed).unwrap_or(d.seed),
    };
    config.validate()?;
    Ok(config)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))
}

fn generate(args: &GenerateArgs, out: &mut Sink) -> Result<i32> {
    let config = resolve_config(args, std::env::var(SEED_ENV).ok())?;
    create_dir(&args.out)?;
    let task = Task::new(config.clone())?;
    let mut splits = std::collections::BTreeMap::new();
    for split in Split::ALL {
        let dataset = task.generate_split(split)?;
        let path = args.out.join(split.file_name());
        write_dataset(&dataset, &path)?;
        for w in &dataset.manifest.warnings {
            let _ = writeln!(out, "warning ({split}): {w}");
        }
        let _ = writeln!(out, "wrote {} ({} examples)", path.display(), dataset.examples.len());
        splits.insert(
            split,
            SplitEntry {
                file: split.file_name().to_string(),
                examples: dataset.examples.len(),
                sha256: dataset.manifest.sha256.clone(),
            },
        );
    }
    let manifest = RunManifest {
        format: FORMAT_VERSION,
        config: &config,
        coverage_incomplete: task.coverage_incomplete(),
        splits,
    };
    let path = args.out.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, out: &mut Sink) -> Result<i32> {
    let mut code = EXIT_OK;
    let mut reports = Vec::new();
    for path in &args.files {
        match verify_file(path) {
            Ok(report) => {
                if !report.is_clean() {
                    code = code.max(EXIT_FAILURE);
                }
                if args.json {
                    reports.push(serde_json::to_value(&report)?);
                } else {
                    let _ = write!(out, "{}", report.render_text());
                }
            }
            Err(e) => {
                code = code.max(exit_code(&e));
                if args.json {
                    reports.push(serde_json::json!({ "file": path, "error": e.to_string() }));
                } else {
                    let _ = writeln!(out, "file: {}\nerror: {e}\nRESULT: FAIL", path.display());
                }
            }
        }
    }
    if args.json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&reports)?);
    }
    Ok(code)
}

fn run_analyze(args: &AnalyzeArgs, out: &mut Sink) -> Result<i32> {
    let manifest = DatasetReader::open(&args.manifest)?.into_manifest();
    let functions = manifest.function_set()?;
    let dump = RepresentationDump::read(&args.dump)?;
    let preds = PredictionDump::read(&args.preds)?;
    let analysis = analyze(&dump, &preds, &functions, args.threshold)?;
    for w in &analysis.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let files = emit_report(Some(&analysis), None, &args.out)?;
    let _ = writeln!(out, "wrote {} files to {}", files.len(), args.out.display());
    Ok(EXIT_OK)
}

fn report(args: &ReportArgs, out: &mut Sink) -> Result<i32> {
    let metrics = SeedMetrics::read_all(&args.metrics)?;
    let report = build_metrics_report(&metrics, args.threshold, args.converged_only)?;
    let files = emit_report(None, Some(&report), &args.out)?;
    let _ = writeln!(out, "wrote {} files to {}", files.len(), args.out.display());
    Ok(EXIT_OK)
}

fn graph(args: &GraphArgs, out: &mut Sink) -> Result<i32> {
    let g = SamplingGraph::build(args.variant);
    let text = match args.format {
        GraphFormat::Json => g.to_json() + "\n",
        GraphFormat::Dot => g.to_dot(),
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

/// Runs the CLI with explicit arguments and output streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut Sink, err: &mut Sink) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_IO;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Analyze(a) => run_analyze(a, out),
        Command::Report(a) => report(a, out),
        Command::Graph(a) => graph(a, out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the CLI on the process arguments with stdout and stderr.
pub fn run() -> i32 {
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_with(std::env::args_os(), &mut out, &mut err)
}
