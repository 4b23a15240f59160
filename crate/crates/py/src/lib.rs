//! Python bindings for the `ctlpp` crate, importable as `pyctlpp`.

use std::path::PathBuf;

use ctlpp::analyzer::{self, RepresentationDump, SeedMetrics};
use ctlpp::dataset::{self, parse_tokens_with, render_tokens};
use ctlpp::sampler::SamplingGraph;
use ctlpp::{Error, SeededStream, Split, Symbol, Variant};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_io() {
        PyIOError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(to_py)
}

fn split(s: &str) -> PyResult<Split> {
    s.parse().map_err(to_py)
}

/// Task configuration. `go_size` and `shared_symbols` apply to variant S only.
#[pyclass(name = "TaskConfig", module = "pyctlpp", from_py_object)]
#[derive(Clone)]
struct PyTaskConfig {
    inner: ctlpp::TaskConfig,
}

#[pymethods]
impl PyTaskConfig {
    #[new]
    #[pyo3(signature = (variant = "A", num_symbols = 8, num_functions = 32, max_functions = 6, train_size = 300_000, test_size = 1000, go_size = None, shared_symbols = None, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        variant: &str,
        num_symbols: usize,
        num_functions: usize,
        max_functions: usize,
        train_size: usize,
        test_size: usize,
        go_size: Option<usize>,
        shared_symbols: Option<usize>,
        seed: u64,
    ) -> PyResult<Self> {
        let inner = ctlpp::TaskConfig {
            variant: self::variant(variant)?,
            num_symbols,
            num_functions,
            max_functions,
            train_size,
            test_size,
            go_size,
            shared_symbols,
            seed,
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    #[getter]
    fn num_symbols(&self) -> usize {
        self.inner.num_symbols
    }

    #[getter]
    fn num_functions(&self) -> usize {
        self.inner.num_functions
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn lengths(&self, split: &str) -> PyResult<Vec<usize>> {
        Ok(self.inner.lengths(self::split(split)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("TaskConfig({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

/// Function tables, overlap sets and the split generator for one config.
#[pyclass(name = "Task", module = "pyctlpp")]
struct PyTask {
    inner: dataset::Task,
}

#[pymethods]
impl PyTask {
    #[new]
    fn new(config: PyTaskConfig) -> PyResult<Self> {
        Ok(Self {
            inner: dataset::Task::new(config.inner).map_err(to_py)?,
        })
    }

    /// Permutation of each function, indexed by function id.
    fn mappings(&self) -> Vec<Vec<u32>> {
        self.inner
            .functions()
            .tables()
            .iter()
            .map(|t| t.mapping().iter().map(|s| s.0).collect())
            .collect()
    }

    fn groups(&self) -> Vec<String> {
        self.inner.functions().tables().iter().map(|t| t.group().to_string()).collect()
    }

    #[getter]
    fn coverage_incomplete(&self) -> bool {
        self.inner.coverage_incomplete()
    }

    fn generate_split(&self, py: Python<'_>, split: &str) -> PyResult<PyDataset> {
        let split = self::split(split)?;
        let inner = py.detach(|| self.inner.generate_split(split)).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    /// One draw with `length` functions; returns `(tokens, target)`.
    fn sample(&self, split: &str, length: usize, seed: u64) -> PyResult<(Vec<String>, u32)> {
        let mut rng = SeededStream::new(seed);
        let e = self.inner.sample(self::split(split)?, length, &mut rng).map_err(to_py)?;
        Ok((render_tokens(&e), self.inner.functions().evaluate(&e).0))
    }

    /// Label of a token sequence such as `["f3", "f1", "5"]`.
    fn evaluate(&self, tokens: Vec<String>) -> PyResult<u32> {
        let fs = self.inner.functions();
        let e = parse_tokens_with(&tokens, fs.num_functions(), fs.num_symbols()).map_err(to_py)?;
        Ok(fs.evaluate(&e).0)
    }
}

#[pyclass(name = "Dataset", module = "pyctlpp")]
struct PyDataset {
    inner: dataset::Dataset,
}

#[pymethods]
impl PyDataset {
    fn __len__(&self) -> usize {
        self.inner.examples.len()
    }

    #[getter]
    fn split(&self) -> String {
        self.inner.manifest.split.to_string()
    }

    #[getter]
    fn counts(&self) -> Vec<(usize, usize)> {
        self.inner.manifest.counts.iter().map(|(&k, &v)| (k, v)).collect()
    }

    #[getter]
    fn sha256(&self) -> String {
        self.inner.manifest.sha256.clone()
    }

    fn manifest_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.manifest).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// `(tokens, target)` pairs in file order.
    fn examples(&self) -> Vec<(Vec<String>, u32)> {
        self.inner.examples.iter().map(|e| (e.tokens.clone(), e.target.0)).collect()
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        dataset::write_dataset(&self.inner, path).map_err(to_py)
    }
}

#[pyfunction]
fn read_dataset(path: PathBuf) -> PyResult<PyDataset> {
    Ok(PyDataset {
        inner: dataset::read_dataset(path).map_err(to_py)?,
    })
}

/// Parses tokens into `(input, function_ids)`, functions listed first-applied first.
#[pyfunction]
fn parse_tokens(tokens: Vec<String>, num_functions: usize, num_symbols: usize) -> PyResult<(u32, Vec<u32>)> {
    let e = parse_tokens_with(&tokens, num_functions, num_symbols).map_err(to_py)?;
    Ok((e.input.0, e.functions.iter().map(|f| f.0).collect()))
}

#[pyfunction]
fn render(input: u32, functions: Vec<u32>) -> Vec<String> {
    render_tokens(&ctlpp::Expression::new(
        Symbol(input),
        functions.into_iter().map(ctlpp::FunctionId).collect(),
    ))
}

/// Returns `(clean, text_report, json_report)`.
#[pyfunction]
fn verify_file(py: Python<'_>, path: PathBuf) -> PyResult<(bool, String, String)> {
    let report = py.detach(|| ctlpp::verifier::verify_file(&path)).map_err(to_py)?;
    let json = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report.is_clean(), report.render_text(), json))
}

#[pyfunction]
#[pyo3(signature = (variant, format = "json"))]
fn sampling_graph(variant: &str, format: &str) -> PyResult<String> {
    let g = SamplingGraph::build(self::variant(variant)?);
    match format {
        "json" => Ok(g.to_json()),
        "dot" => Ok(g.to_dot()),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

/// Cosine matrix over the functions of a representation dump at one symbol.
#[pyfunction]
fn cosine_matrix(dump_path: PathBuf, symbol: u32) -> PyResult<Vec<Vec<f64>>> {
    let dump = RepresentationDump::read(dump_path).map_err(to_py)?;
    Ok(analyzer::cosine_matrix(&dump, Symbol(symbol)).map_err(to_py)?.values)
}

/// Cluster index of every row of a square similarity matrix.
#[pyfunction]
#[pyo3(signature = (matrix, threshold = analyzer::DEFAULT_THRESHOLD))]
fn detect_clusters(matrix: Vec<Vec<f64>>, threshold: f64) -> PyResult<Vec<usize>> {
    if matrix.iter().any(|r| r.len() != matrix.len()) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(analyzer::detect_clusters(&matrix, threshold).assignment)
}

type AggregateTuple = (String, String, String, usize, f64, f64, f64);

/// `(model, variant, split, seeds, mean, std, success_rate)` rows from a
/// seed-metrics JSONL file.
#[pyfunction]
#[pyo3(signature = (metrics_path, success_threshold = analyzer::DEFAULT_SUCCESS_THRESHOLD))]
fn aggregate_seeds(
    metrics_path: PathBuf,
    success_threshold: f64,
) -> PyResult<Vec<AggregateTuple>> {
    let metrics = SeedMetrics::read_all(metrics_path).map_err(to_py)?;
    let rows = analyzer::aggregate_seeds(&metrics, success_threshold).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.model, r.variant.to_string(), r.split.to_string(), r.seeds, r.mean, r.std, r.success_rate))
        .collect())
}

/// Runs the `ctlpp` command line with `args` (without the program name).
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| {
        let argv = std::iter::once("ctlpp".to_string()).chain(args);
        let mut out = std::io::stdout();
        let mut err = std::io::stderr();
        ctlpp::cli::run_with(argv, &mut out, &mut err)
    })
}

#[pymodule]
pub fn pyctlpp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTaskConfig>()?;
    m.add_class::<PyTask>()?;
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(read_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(parse_tokens, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(verify_file, m)?)?;
    m.add_function(wrap_pyfunction!(sampling_graph, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(detect_clusters, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate_seeds, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("FORMAT_VERSION", dataset::FORMAT_VERSION)?;
    Ok(())
}
