//! Length-balanced train/IID/OOD split generation.
//!
//! Per split, every admissible length first receives an equal quota
//! (`size / lengths`, remainder to the longest lengths). A length whose
//! distinct-expression space does not exceed its quota is listed
//! exhaustively, and the unused quota moves to the longest length that is
//! still sampled. For A/R train the single-function grid is always listed in
//! full. Everything else is drawn from the sampler, one derived stream per
//! length, so results do not depend on the number of worker threads.

mod io;
mod tokens;

pub use io::{example_line, read_dataset, write_dataset, DatasetReader};
pub use tokens::{function_token, parse_tokens_with, render_tokens, symbol_token};

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Split, TaskConfig, Variant};
use crate::error::{Error, Result};
use crate::fnalg::{build_functions, Expression, FunctionSet, FunctionTable, GroupId, Symbol};
use crate::rng::SeededStream;
use crate::sampler::{
    count_expressions, enumerate_expressions, sample_expression_ar, sample_expression_s, OverlapSpec,
};

pub const FORMAT_VERSION: &str = "ctlpp-v1";

const FUNCTIONS_STREAM: u64 = 0;
const OVERLAP_STREAM: u64 = 1;
const SHUFFLE_STREAM: u64 = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub expression: Expression,
    pub tokens: Vec<String>,
    pub target: Symbol,
    pub split: Split,
}

impl Example {
    pub fn new(expression: Expression, functions: &FunctionSet, split: Split) -> Self {
        let target = functions.evaluate(&expression);
        let tokens = render_tokens(&expression);
        Self {
            expression,
            tokens,
            target,
            split,
        }
    }
}

/// First line of every dataset file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: String,
    pub config: TaskConfig,
    pub functions: Vec<FunctionTable>,
    pub overlap: Option<OverlapSpec>,
    pub coverage_incomplete: bool,
    /// Examples per function count.
    pub counts: BTreeMap<usize, usize>,
    pub split: Split,
    pub size: usize,
    /// Lengths whose whole expression space is listed once.
    pub enumerated: Vec<usize>,
    pub warnings: Vec<String>,
    /// SHA-256 of all example lines, each terminated by `\n`.
    pub sha256: String,
}

impl DatasetManifest {
    pub fn function_set(&self) -> Result<FunctionSet> {
        FunctionSet::new(self.functions.clone())
    }

    pub fn num_functions(&self) -> usize {
        self.functions.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.config.num_symbols
    }

    /// Parses a token sequence against this manifest's vocabulary.
    pub fn parse_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Expression> {
        parse_tokens_with(tokens, self.num_functions(), self.num_symbols())
    }
}

/// Free-function form of [`DatasetManifest::parse_tokens`].
pub fn parse_tokens<S: AsRef<str>>(tokens: &[S], manifest: &DatasetManifest) -> Result<Expression> {
    manifest.parse_tokens(tokens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub examples: Vec<Example>,
}

/// How many examples a length gets and whether they are listed or drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthPlan {
    pub length: usize,
    pub count: usize,
    pub space: u128,
    pub enumerate: bool,
}

/// Quota allocation. `forced` lengths are listed in full regardless of
/// their quota. Returns the plans and the number of examples that could not
/// be placed anywhere.
pub fn plan_lengths(
    lengths: &[usize],
    size: usize,
    spaces: &[u128],
    forced: &[usize],
) -> (Vec<LengthPlan>, usize) {
    let m = lengths.len();
    if m == 0 {
        return (Vec::new(), size);
    }
    let (base, rem) = (size / m, size % m);
    let mut count: Vec<i128> = (0..m).map(|i| (base + usize::from(i >= m - rem)) as i128).collect();
    let mut fixed = vec![false; m];
    let mut pending: i128 = 0;
    let space = |i: usize| spaces[i].min(i128::MAX as u128) as i128;

    for (i, len) in lengths.iter().enumerate() {
        if forced.contains(len) {
            pending += count[i] - space(i);
            count[i] = space(i);
            fixed[i] = true;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..m {
            if !fixed[i] && space(i) <= count[i] {
                pending += count[i] - space(i);
                count[i] = space(i);
                fixed[i] = true;
                changed = true;
            }
        }
        if pending > 0 {
            if let Some(i) = (0..m).rev().find(|&i| !fixed[i]) {
                count[i] += pending;
                pending = 0;
                changed = true;
            }
        } else if pending < 0 {
            for i in (0..m).rev().filter(|&i| !fixed[i]) {
                let take = count[i].min(-pending);
                if take > 0 {
                    count[i] -= take;
                    pending += take;
                    changed = true;
                }
                if pending == 0 {
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let plans = (0..m)
        .map(|i| LengthPlan {
            length: lengths[i],
            count: count[i] as usize,
            space: spaces[i],
            enumerate: fixed[i],
        })
        .collect();
    (plans, pending.max(0) as usize)
}

/// Function tables, overlap sets and split generation for one config.
#[derive(Clone, Debug)]
pub struct Task {
    config: TaskConfig,
    functions: FunctionSet,
    overlap: Option<OverlapSpec>,
}

impl Task {
    pub fn new(config: TaskConfig) -> Result<Self> {
        config.validate()?;
        let root = SeededStream::new(config.seed);
        let tables = build_functions(&config, &mut root.child(FUNCTIONS_STREAM))?;
        let functions = FunctionSet::new(tables)?;
        let overlap = match config.variant {
            Variant::S => Some(OverlapSpec::build(
                &config,
                functions.members(GroupId::Go),
                &mut root.child(OVERLAP_STREAM),
            )?),
            _ => None,
        };
        Ok(Self {
            config,
            functions,
            overlap,
        })
    }

    pub fn config(&self) -> &TaskConfig {
        &self.config
    }

    pub fn functions(&self) -> &FunctionSet {
        &self.functions
    }

    pub fn overlap(&self) -> Option<&OverlapSpec> {
        self.overlap.as_ref()
    }

    pub fn coverage_incomplete(&self) -> bool {
        self.overlap.as_ref().is_some_and(|o| o.coverage_incomplete)
    }

    pub fn sample(&self, split: Split, length: usize, rng: &mut SeededStream) -> Result<Expression> {
        match (&self.config.variant, &self.overlap) {
            (Variant::S, Some(overlap)) => {
                if !length.is_multiple_of(2) {
                    return Err(Error::Sampling(format!(
                        "variant S expressions have an even number of functions, not {length}"
                    )));
                }
                sample_expression_s(split, length / 2, &self.functions, overlap, rng)
            }
            (variant, _) => sample_expression_ar(*variant, split, length, &self.functions, rng),
        }
    }

    pub fn plan(&self, split: Split) -> (Vec<LengthPlan>, usize) {
        let lengths = self.config.lengths(split);
        let spaces: Vec<u128> = lengths
            .iter()
            .map(|&l| count_expressions(self.config.variant, split, l, &self.functions, self.overlap()))
            .collect();
        let forced: &[usize] = match (self.config.variant, split) {
            (Variant::A | Variant::R, Split::Train) => &[1],
            _ => &[],
        };
        plan_lengths(&lengths, self.config.split_size(split), &spaces, forced)
    }

    fn draw_length(&self, split: Split, plan: &LengthPlan, mut rng: SeededStream) -> Result<Vec<Expression>> {
        if plan.enumerate {
            let all = enumerate_expressions(self.config.variant, split, plan.length, &self.functions, self.overlap());
            debug_assert_eq!(all.len(), plan.count);
            return Ok(all);
        }
        let mut out = Vec::with_capacity(plan.count);
        if !split.deduplicated() {
            for _ in 0..plan.count {
                out.push(self.sample(split, plan.length, &mut rng)?);
            }
            return Ok(out);
        }
        let mut seen = HashSet::with_capacity(plan.count);
        let budget = 1000 * plan.count + 1_000_000;
        let mut draws = 0;
        while out.len() < plan.count {
            if draws == budget {
                return Err(Error::Sampling(format!(
                    "{split} length {}: only {} distinct expressions after {draws} draws (space {})",
                    plan.length,
                    out.len(),
                    plan.space
                )));
            }
            draws += 1;
            let e = self.sample(split, plan.length, &mut rng)?;
            if seen.insert(e.clone()) {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Generates one split. Parallel over lengths on the current rayon pool.
    pub fn generate_split(&self, split: Split) -> Result<Dataset> {
        let (plans, shortfall) = self.plan(split);
        let stream = SeededStream::new(self.config.seed).child(split.stream_index());
        let per_length: Vec<Vec<Expression>> = plans
            .par_iter()
            .map(|p| self.draw_length(split, p, stream.child(p.length as u64)))
            .collect::<Result<_>>()?;

        let mut examples: Vec<Example> = per_length
            .into_iter()
            .flatten()
            .map(|e| Example::new(e, &self.functions, split))
            .collect();
        stream.child(SHUFFLE_STREAM).shuffle(&mut examples);

        let mut warnings = Vec::new();
        if shortfall > 0 {
            warnings.push(format!(
                "requested {} examples but the {split} split only has {} distinct expressions; all of them are listed once",
                self.config.split_size(split),
                examples.len()
            ));
        }
        let counts = plans.iter().map(|p| (p.length, p.count)).collect();
        let enumerated = plans.iter().filter(|p| p.enumerate).map(|p| p.length).collect();
        let mut hasher = Sha256::new();
        for ex in &examples {
            hasher.update(example_line(ex).as_bytes());
            hasher.update(b"\n");
        }
        let manifest = DatasetManifest {
            format: FORMAT_VERSION.to_string(),
            config: self.config.clone(),
            functions: self.functions.tables().to_vec(),
            overlap: self.overlap.clone(),
            coverage_incomplete: self.coverage_incomplete(),
            counts,
            split,
            size: examples.len(),
            enumerated,
            warnings,
            sha256: hex::encode(hasher.finalize()),
        };
        Ok(Dataset { manifest, examples })
    }
}

/// Builds the task for `config` and generates `split`.
pub fn generate_split(config: &TaskConfig, split: Split) -> Result<Dataset> {
    Task::new(config.clone())?.generate_split(split)
}
