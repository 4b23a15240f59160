//! File schemas shared with the model-training side: representation dumps,
//! prediction dumps and per-seed metrics, all JSON Lines.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Variant;
use crate::error::{Error, Result};
use crate::fnalg::{FunctionId, Symbol};

fn jsonl_lines(path: &Path) -> Result<impl Iterator<Item = Result<(usize, String)>> + '_> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    Ok(BufReader::new(file)
        .lines()
        .enumerate()
        .map(move |(i, l)| {
            l.map(|text| (i + 1, text))
                .map_err(|e| Error::io(format!("reading {}", path.display()), e))
        })
        .filter(|r| !matches!(r, Ok((_, t)) if t.trim().is_empty())))
}

fn malformed(path: &Path, line: usize, message: impl ToString) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    }
}

fn write_lines<T: Serialize>(path: &Path, head: Option<&impl Serialize>, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let io_err = |e| Error::io(format!("writing {}", path.display()), e);
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    if let Some(h) = head {
        serde_json::to_writer(&mut out, h)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    for r in rows {
        serde_json::to_writer(&mut out, &r)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Header line of a dump. Unknown keys (e.g. a readout-convention tag) are
/// kept verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpMeta {
    pub model: String,
    pub variant: Variant,
    pub seed: u64,
    pub dim: usize,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl DumpMeta {
    pub fn new(model: impl Into<String>, variant: Variant, seed: u64, dim: usize) -> Self {
        Self {
            model: model.into(),
            variant,
            seed,
            dim,
            extra: BTreeMap::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorLine {
    function: u32,
    symbol: u32,
    vector: Vec<f64>,
}

/// Pre-classifier vectors keyed by (function, output symbol).
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationDump {
    pub meta: DumpMeta,
    entries: BTreeMap<(FunctionId, Symbol), Vec<f64>>,
}

impl RepresentationDump {
    pub fn new(meta: DumpMeta) -> Self {
        Self {
            meta,
            entries: BTreeMap::new(),
        }
    }

    /// Rejects wrong dimensions, non-finite components and duplicates.
    pub fn insert(&mut self, f: FunctionId, s: Symbol, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.meta.dim {
            return Err(Error::Dump(format!(
                "({f}, {s}): vector of length {}, expected {}",
                vector.len(),
                self.meta.dim
            )));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dump(format!("({f}, {s}): non-finite component")));
        }
        if self.entries.insert((f, s), vector).is_some() {
            return Err(Error::Dump(format!("({f}, {s}): duplicate entry")));
        }
        Ok(())
    }

    pub fn get(&self, f: FunctionId, s: Symbol) -> Option<&[f64]> {
        self.entries.get(&(f, s)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn functions(&self) -> Vec<FunctionId> {
        let set: BTreeSet<FunctionId> = self.entries.keys().map(|(f, _)| *f).collect();
        set.into_iter().collect()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let set: BTreeSet<Symbol> = self.entries.keys().map(|(_, s)| *s).collect();
        set.into_iter().collect()
    }

    /// Every (function, symbol) of the manifest must be present, and nothing else.
    pub fn validate_complete(&self, num_functions: usize, num_symbols: usize) -> Result<()> {
        for f in 0..num_functions as u32 {
            for s in 0..num_symbols as u32 {
                if !self.entries.contains_key(&(FunctionId(f), Symbol(s))) {
                    return Err(Error::Dump(format!("missing entry for (f{f}, {s})")));
                }
            }
        }
        if self.entries.len() != num_functions * num_symbols {
            return Err(Error::Dump(format!(
                "{} entries, expected {}",
                self.entries.len(),
                num_functions * num_symbols
            )));
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lines = jsonl_lines(path)?;
        let (_, head) = lines
            .next()
            .transpose()?
            .ok_or_else(|| malformed(path, 1, "empty dump"))?;
        let meta: DumpMeta = serde_json::from_str(&head).map_err(|e| malformed(path, 1, e))?;
        let mut dump = Self::new(meta);
        for item in lines {
            let (n, text) = item?;
            let line: VectorLine = serde_json::from_str(&text).map_err(|e| malformed(path, n, e))?;
            dump.insert(FunctionId(line.function), Symbol(line.symbol), line.vector)
                .map_err(|e| malformed(path, n, e))?;
        }
        Ok(dump)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let rows = self.entries.iter().map(|((f, s), v)| VectorLine {
            function: f.0,
            symbol: s.0,
            vector: v.clone(),
        });
        write_lines(path.as_ref(), Some(&self.meta), rows)
    }
}

/// One two-application probe: tokens `[f2, f1, input]`, `f1` applied first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionRecord {
    pub f1: u32,
    pub f2: u32,
    pub input: u32,
    pub pred: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PredictionLine {
    Record(PredictionRecord),
    Meta(DumpMeta),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionDump {
    /// Optional header line.
    pub meta: Option<DumpMeta>,
    records: Vec<PredictionRecord>,
    index: HashMap<(u32, u32, u32), u32>,
}

impl PredictionDump {
    pub fn new(meta: Option<DumpMeta>) -> Self {
        Self {
            meta,
            records: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_records(meta: Option<DumpMeta>, records: impl IntoIterator<Item = PredictionRecord>) -> Result<Self> {
        let mut dump = Self::new(meta);
        for r in records {
            dump.push(r)?;
        }
        Ok(dump)
    }

    pub fn push(&mut self, r: PredictionRecord) -> Result<()> {
        if self.index.insert((r.f1, r.f2, r.input), r.pred).is_some() {
            return Err(Error::Dump(format!(
                "duplicate probe (f1={}, f2={}, input={})",
                r.f1, r.f2, r.input
            )));
        }
        self.records.push(r);
        Ok(())
    }

    pub fn records(&self) -> &[PredictionRecord] {
        &self.records
    }

    pub fn prediction(&self, f1: FunctionId, f2: FunctionId, input: Symbol) -> Option<Symbol> {
        self.index.get(&(f1.0, f2.0, input.0)).copied().map(Symbol)
    }

    /// All ordered pairs times all inputs, predictions inside the alphabet.
    pub fn validate_complete(&self, num_functions: usize, num_symbols: usize) -> Result<()> {
        let expected = num_functions * num_functions * num_symbols;
        if let Some(r) = self.records.iter().find(|r| {
            r.f1 as usize >= num_functions
                || r.f2 as usize >= num_functions
                || r.input as usize >= num_symbols
                || r.pred as usize >= num_symbols
        }) {
            return Err(Error::Dump(format!("record out of range: {r:?}")));
        }
        if self.records.len() != expected {
            return Err(Error::Dump(format!(
                "{} prediction records, expected {num_functions}^2 x {num_symbols} = {expected}",
                self.records.len()
            )));
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut dump = Self::new(None);
        for item in jsonl_lines(path)? {
            let (n, text) = item?;
            match serde_json::from_str(&text).map_err(|e| malformed(path, n, e))? {
                PredictionLine::Record(r) => dump.push(r).map_err(|e| malformed(path, n, e))?,
                PredictionLine::Meta(m) if n == 1 => dump.meta = Some(m),
                PredictionLine::Meta(_) => return Err(malformed(path, n, "header after records")),
            }
        }
        Ok(dump)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_lines(path.as_ref(), self.meta.as_ref(), self.records.iter())
    }
}

/// Final accuracies of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedMetrics {
    pub seed: u64,
    pub variant: Variant,
    pub iid: f64,
    pub ood: f64,
    pub steps: u64,
    pub converged: bool,
    pub go_size: Option<usize>,
    pub shared_symbols: Option<usize>,
    /// Model family; absent in single-model metric files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
}

impl SeedMetrics {
    pub fn new(seed: u64, variant: Variant, iid: f64, ood: f64) -> Self {
        Self {
            seed,
            variant,
            iid,
            ood,
            steps: 0,
            converged: true,
            go_size: None,
            shared_symbols: None,
            model: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("iid", self.iid), ("ood", self.ood)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Dump(format!("seed {}: {name} accuracy {v} outside [0, 1]", self.seed)));
            }
        }
        Ok(())
    }

    pub fn read_all(path: impl AsRef<Path>) -> Result<Vec<Self>> {
        let path = path.as_ref();
        let mut out = Vec::new();
        for item in jsonl_lines(path)? {
            let (n, text) = item?;
            let m: SeedMetrics = serde_json::from_str(&text).map_err(|e| malformed(path, n, e))?;
            m.validate().map_err(|e| malformed(path, n, e))?;
            out.push(m);
        }
        Ok(out)
    }

    pub fn write_all(metrics: &[SeedMetrics], path: impl AsRef<Path>) -> Result<()> {
        write_lines(path.as_ref(), None::<&()>, metrics.iter())
    }
}
