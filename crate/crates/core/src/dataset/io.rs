//! JSON Lines dataset files: one manifest line, then one example per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Dataset, DatasetManifest, Example, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::fnalg::{FunctionSet, Symbol};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleLine {
    tokens: Vec<String>,
    target: u32,
    len: usize,
}

/// Serialized form of one example, without the trailing newline.
pub fn example_line(ex: &Example) -> String {
    let line = ExampleLine {
        tokens: ex.tokens.clone(),
        target: ex.target.0,
        len: ex.expression.len(),
    };
    serde_json::to_string(&line).expect("example serializes")
}

pub fn write_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |e| Error::io(format!("writing {}", path.display()), e);
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    serde_json::to_writer(&mut out, &dataset.manifest)?;
    out.write_all(b"\n").map_err(io_err)?;
    for ex in &dataset.examples {
        out.write_all(example_line(ex).as_bytes()).map_err(io_err)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Reads a whole dataset file into memory.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let mut reader = DatasetReader::open(path)?;
    let examples = reader.by_ref().collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        manifest: reader.manifest,
        examples,
    })
}

/// Streams examples one line at a time. The content hash and example count
/// are checked when the last line has been read; a mismatch is yielded as
/// the final item.
pub struct DatasetReader {
    path: PathBuf,
    manifest: DatasetManifest,
    functions: FunctionSet,
    lines: Lines<BufReader<File>>,
    line_no: usize,
    seen: usize,
    hasher: Option<Sha256>,
}

impl DatasetReader {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        let mut lines = BufReader::new(file).lines();
        let malformed = |message: String| Error::Malformed {
            path: path.clone(),
            line: 1,
            message,
        };
        let first = lines
            .next()
            .ok_or_else(|| malformed("empty file, expected a manifest line".into()))?
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let raw: serde_json::Value =
            serde_json::from_str(&first).map_err(|e| malformed(format!("manifest: {e}")))?;
        let format = raw.get("format").and_then(|f| f.as_str()).unwrap_or_default();
        if format != FORMAT_VERSION {
            return Err(Error::Version {
                path,
                found: format.to_string(),
                expected: FORMAT_VERSION.to_string(),
            });
        }
        let manifest: DatasetManifest =
            serde_json::from_value(raw).map_err(|e| malformed(format!("manifest: {e}")))?;
        manifest
            .config
            .validate()
            .map_err(|e| malformed(format!("manifest: {e}")))?;
        let functions = manifest
            .function_set()
            .map_err(|e| malformed(format!("manifest: {e}")))?;
        if functions.num_functions() != manifest.config.num_functions
            || functions.num_symbols() != manifest.config.num_symbols
        {
            return Err(malformed("manifest tables disagree with config".into()));
        }
        Ok(Self {
            path,
            manifest,
            functions,
            lines,
            line_no: 1,
            seen: 0,
            hasher: Some(Sha256::new()),
        })
    }

    pub fn manifest(&self) -> &DatasetManifest {
        &self.manifest
    }

    pub fn into_manifest(self) -> DatasetManifest {
        self.manifest
    }

    fn malformed(&self, message: String) -> Error {
        Error::Malformed {
            path: self.path.clone(),
            line: self.line_no,
            message,
        }
    }

    fn parse_line(&self, text: &str) -> Result<Example> {
        let line: ExampleLine =
            serde_json::from_str(text).map_err(|e| self.malformed(e.to_string()))?;
        let expression = self
            .manifest
            .parse_tokens(&line.tokens)
            .map_err(|e| self.malformed(e.to_string()))?;
        if expression.len() != line.len {
            return Err(self.malformed(format!(
                "len is {} but the tokens hold {} functions",
                line.len,
                expression.len()
            )));
        }
        if line.target as usize >= self.functions.num_symbols() {
            return Err(self.malformed(format!("target {} outside the alphabet", line.target)));
        }
        Ok(Example {
            expression,
            tokens: line.tokens,
            target: Symbol(line.target),
            split: self.manifest.split,
        })
    }

    fn finish(&mut self) -> Option<Error> {
        let hasher = self.hasher.take()?;
        let found = hex::encode(hasher.finalize());
        if found != self.manifest.sha256 {
            return Some(Error::HashMismatch {
                path: self.path.clone(),
                expected: self.manifest.sha256.clone(),
                found,
            });
        }
        if self.seen != self.manifest.size {
            return Some(self.malformed(format!(
                "manifest declares {} examples, file holds {}",
                self.manifest.size, self.seen
            )));
        }
        None
    }
}

impl Iterator for DatasetReader {
    type Item = Result<Example>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.lines.next() {
            None => self.finish().map(Err),
            Some(Err(e)) => {
                self.hasher = None;
                Some(Err(Error::io(format!("reading {}", self.path.display()), e)))
            }
            Some(Ok(text)) => {
                self.line_no += 1;
                self.seen += 1;
                if let Some(h) = self.hasher.as_mut() {
                    h.update(text.as_bytes());
                    h.update(b"\n");
                }
                Some(self.parse_line(&text))
            }
        }
    }
}
