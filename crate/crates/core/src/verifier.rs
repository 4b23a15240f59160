//! Independent re-check of dataset files.
//!
//! Nothing here calls into the sampler or the evaluator: labels are
//! recomputed with a right-to-left fold over the raw tokens, legality with
//! per-variant rules written against group names, and space sizes with a
//! separate counter. Only the manifest types are shared.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Split, Variant};
use crate::dataset::{example_line, Dataset, DatasetManifest, FORMAT_VERSION};
use crate::error::{Error, Result};

/// One example line as stored, before any interpretation.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct RawRecord {
    #[serde(skip)]
    pub line: usize,
    pub tokens: Vec<String>,
    pub target: i64,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub line: usize,
    pub message: String,
}

/// A dataset as the verifier sees it.
#[derive(Clone, Debug)]
pub struct VerifierInput {
    pub path: Option<PathBuf>,
    pub manifest: DatasetManifest,
    pub records: Vec<RawRecord>,
    /// Lines that are not valid JSON records, and hash problems.
    pub format_issues: Vec<Finding>,
}

impl VerifierInput {
    /// Reads a file. Malformed example lines become findings; only an
    /// unreadable file or manifest is an error.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let io_err = |e| Error::io(format!("reading {}", path.display()), e);
        let file = File::open(&path).map_err(io_err)?;
        let mut lines = BufReader::new(file).lines();
        let first = lines.next().transpose().map_err(io_err)?.ok_or_else(|| Error::Malformed {
            path: path.clone(),
            line: 1,
            message: "empty file".into(),
        })?;
        let raw: serde_json::Value = serde_json::from_str(&first).map_err(|e| Error::Malformed {
            path: path.clone(),
            line: 1,
            message: format!("manifest: {e}"),
        })?;
        let format = raw.get("format").and_then(|v| v.as_str()).unwrap_or_default();
        if format != FORMAT_VERSION {
            return Err(Error::Version {
                path,
                found: format.into(),
                expected: FORMAT_VERSION.into(),
            });
        }
        let manifest: DatasetManifest = serde_json::from_value(raw).map_err(|e| Error::Malformed {
            path: path.clone(),
            line: 1,
            message: format!("manifest: {e}"),
        })?;

        let mut records = Vec::new();
        let mut format_issues = Vec::new();
        let mut hasher = Sha256::new();
        for (i, text) in lines.enumerate() {
            let text = text.map_err(io_err)?;
            let line = i + 2;
            hasher.update(text.as_bytes());
            hasher.update(b"\n");
            match serde_json::from_str::<RawRecord>(&text) {
                Ok(mut r) => {
                    r.line = line;
                    records.push(r);
                }
                Err(e) => format_issues.push(Finding {
                    line,
                    message: format!("unparseable record: {e}"),
                }),
            }
        }
        let digest = hex::encode(hasher.finalize());
        if digest != manifest.sha256 {
            format_issues.push(Finding {
                line: 1,
                message: format!("content hash {digest} differs from manifest {}", manifest.sha256),
            });
        }
        Ok(Self {
            path: Some(path),
            manifest,
            records,
            format_issues,
        })
    }

    /// In-memory dataset; line numbers are those the file would have.
    pub fn from_dataset(dataset: &Dataset) -> Self {
        let records = dataset
            .examples
            .iter()
            .enumerate()
            .map(|(i, ex)| {
                let mut r: RawRecord = serde_json::from_str(&example_line(ex)).expect("own format");
                r.line = i + 2;
                r
            })
            .collect();
        Self {
            path: None,
            manifest: dataset.manifest.clone(),
            records,
            format_issues: Vec::new(),
        }
    }
}

/// Manifest facts the checks need, decoded once.
struct Tables {
    variant: Variant,
    split: Split,
    num_symbols: usize,
    maps: Vec<Vec<u32>>,
    groups: Vec<String>,
    /// overlap function id -> (S_a, S_b)
    overlap: HashMap<u32, (BTreeSet<u32>, BTreeSet<u32>)>,
}

impl Tables {
    fn new(m: &DatasetManifest) -> std::result::Result<Self, String> {
        let n = m.config.num_symbols;
        if m.functions.len() != m.config.num_functions {
            return Err(format!(
                "{} tables for {} functions",
                m.functions.len(),
                m.config.num_functions
            ));
        }
        let mut maps = Vec::new();
        let mut groups = Vec::new();
        for (i, t) in m.functions.iter().enumerate() {
            if t.id().index() != i {
                return Err(format!("table {i} carries id {}", t.id()));
            }
            let map: Vec<u32> = t.mapping().iter().map(|s| s.0).collect();
            let distinct: BTreeSet<u32> = map.iter().copied().collect();
            if map.len() != n || distinct.len() != n || distinct.iter().any(|&s| s as usize >= n) {
                return Err(format!("table {i} is not a permutation of 0..{n}"));
            }
            maps.push(map);
            groups.push(t.group().as_str().to_string());
        }
        let allowed: &[&str] = match m.config.variant {
            Variant::A | Variant::R => &["Ga", "Gb"],
            Variant::S => &["Ga1", "Ga2", "Gb1", "Gb2", "Go"],
        };
        if let Some(g) = groups.iter().find(|g| !allowed.contains(&g.as_str())) {
            return Err(format!("group {g} does not belong to variant {}", m.config.variant));
        }
        let overlap = m
            .overlap
            .iter()
            .flat_map(|o| &o.sets)
            .map(|s| {
                (
                    s.function.0,
                    (s.a.iter().map(|x| x.0).collect(), s.b.iter().map(|x| x.0).collect()),
                )
            })
            .collect();
        Ok(Self {
            variant: m.config.variant,
            split: m.split,
            num_symbols: n,
            maps,
            groups,
            overlap,
        })
    }

    fn function(&self, tok: &str) -> Option<usize> {
        let digits = tok.strip_prefix('f')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let id: usize = digits.parse().ok()?;
        (id < self.maps.len()).then_some(id)
    }

    fn symbol(&self, tok: &str) -> Option<u32> {
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let s: u32 = tok.parse().ok()?;
        ((s as usize) < self.num_symbols).then_some(s)
    }

    /// Decodes tokens into (input, functions in application order).
    fn decode(&self, tokens: &[String]) -> std::result::Result<(u32, Vec<usize>), String> {
        let (last, rest) = tokens.split_last().ok_or("no tokens")?;
        let input = self.symbol(last).ok_or_else(|| format!("bad input symbol {last:?}"))?;
        if rest.is_empty() {
            return Err("no function tokens".into());
        }
        let mut fs = Vec::with_capacity(rest.len());
        for tok in rest.iter().rev() {
            fs.push(self.function(tok).ok_or_else(|| format!("bad function token {tok:?}"))?);
        }
        Ok((input, fs))
    }

    /// Label by walking the token list from its right end.
    fn fold_right_to_left(&self, tokens: &[String]) -> std::result::Result<u32, String> {
        let (last, rest) = tokens.split_last().ok_or("no tokens")?;
        let mut s = self.symbol(last).ok_or_else(|| format!("bad input symbol {last:?}"))?;
        for tok in rest.iter().rev() {
            let f = self.function(tok).ok_or_else(|| format!("bad function token {tok:?}"))?;
            s = self.maps[f][s as usize];
        }
        Ok(s)
    }

    fn group(&self, f: usize) -> &str {
        &self.groups[f]
    }

    /// `None` when legal for the file's split, otherwise the reason.
    fn legality_problem(&self, input: u32, fs: &[usize]) -> Option<String> {
        let groups: Vec<&str> = fs.iter().map(|&f| self.group(f)).collect();
        let same = groups.windows(2).all(|w| w[0] == w[1]);
        let alternating = groups.windows(2).all(|w| w[0] != w[1]);
        let train = self.split != Split::Ood;
        match (self.variant, train) {
            (Variant::A, true) if !alternating => Some(format!("adjacent same-group functions {groups:?}")),
            (Variant::R, true) if !same => Some(format!("mixes groups {groups:?}")),
            (Variant::A, false) | (Variant::R, false) if fs.len() < 2 => {
                Some("single function in an OOD split".into())
            }
            (Variant::A, false) if !same => Some(format!("OOD example mixes groups {groups:?}")),
            (Variant::R, false) if !alternating => {
                Some(format!("OOD example repeats a group {groups:?}"))
            }
            (Variant::S, _) => self.staged_problem(input, fs, train),
            _ => None,
        }
    }

    fn staged_problem(&self, input: u32, fs: &[usize], train: bool) -> Option<String> {
        if !fs.len().is_multiple_of(2) {
            return Some(format!("odd function count {}", fs.len()));
        }
        let mut s = input;
        for (k, pair) in fs.chunks(2).enumerate() {
            let (first, second) = (pair[0], pair[1]);
            let path = match self.group(first) {
                "Ga1" => 'a',
                "Gb1" => 'b',
                g => return Some(format!("pair {k} starts with {g}")),
            };
            let mid = self.maps[first][s as usize];
            let g2 = self.group(second);
            let own = if path == 'a' { "Ga2" } else { "Gb2" };
            let cross = if path == 'a' { "Gb2" } else { "Ga2" };
            if train {
                if g2 == "Go" {
                    let sets = self.overlap.get(&(second as u32));
                    let ok = sets.is_some_and(|(a, b)| if path == 'a' { a.contains(&mid) } else { b.contains(&mid) });
                    if !ok {
                        return Some(format!("pair {k}: f{second} in Go may not consume symbol {mid} from path {path}"));
                    }
                } else if g2 != own {
                    return Some(format!("pair {k}: path {path} followed by {g2}"));
                }
            } else if g2 != cross {
                return Some(format!("pair {k}: OOD pair on path {path} followed by {g2}"));
            }
            s = self.maps[second][mid as usize];
        }
        None
    }

    fn declared_lengths(&self, max: usize) -> Vec<usize> {
        match (self.variant, self.split) {
            (Variant::S, _) => (1..=max).filter(|l| l % 2 == 0).collect(),
            (_, Split::Ood) => (2..=max).collect(),
            _ => (1..=max).collect(),
        }
    }

    fn group_size(&self, g: &str) -> u128 {
        self.groups.iter().filter(|x| x.as_str() == g).count() as u128
    }

    /// Number of distinct legal expressions of `len` functions.
    fn space(&self, len: usize) -> u128 {
        let n = self.num_symbols as u128;
        let train = self.split != Split::Ood;
        match self.variant {
            Variant::A | Variant::R => {
                let (a, b) = (self.group_size("Ga"), self.group_size("Gb"));
                let alternate = (self.variant == Variant::A) == train;
                let pow = |x: u128, e: usize| (0..e).fold(1u128, |acc, _| acc.saturating_mul(x));
                let per_input = if len == 1 {
                    a + b
                } else if alternate {
                    let (hi, lo) = (len.div_ceil(2), len / 2);
                    pow(a, hi).saturating_mul(pow(b, lo)).saturating_add(pow(b, hi).saturating_mul(pow(a, lo)))
                } else {
                    pow(a, len).saturating_add(pow(b, len))
                };
                per_input.saturating_mul(n)
            }
            Variant::S => {
                // count[s]: prefixes ending in symbol s
                let mut count = vec![1u128; self.num_symbols];
                for _ in 0..len / 2 {
                    let mut next = vec![0u128; self.num_symbols];
                    for (s, &c) in count.iter().enumerate() {
                        for first in 0..self.maps.len() {
                            let mid = self.maps[first][s];
                            for second in 0..self.maps.len() {
                                if self.staged_problem(s as u32, &[first, second], train).is_none() {
                                    let out = self.maps[second][mid as usize] as usize;
                                    next[out] = next[out].saturating_add(c);
                                }
                            }
                        }
                    }
                    count = next;
                }
                count.into_iter().fold(0u128, u128::saturating_add)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LabelMismatch {
    pub line: usize,
    pub expected: u32,
    pub found: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LabelReport {
    pub checked: usize,
    pub mismatches: Vec<LabelMismatch>,
    pub undecodable: Vec<Finding>,
}

impl LabelReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.undecodable.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LegalityReport {
    pub checked: usize,
    pub violations: Vec<Finding>,
}

impl LegalityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CoverageReport {
    pub shared_union: Vec<u32>,
    pub union_is_full: bool,
    pub coverage_incomplete_flag: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BalanceReport {
    pub counts: BTreeMap<usize, usize>,
    /// Lengths whose examples form the complete distinct space.
    pub exhaustive: Vec<usize>,
    pub single_function_grid_complete: Option<bool>,
    pub coverage: Option<CoverageReport>,
    pub issues: Vec<String>,
}

impl BalanceReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub file: Option<PathBuf>,
    pub variant: Variant,
    pub split: Split,
    pub examples: usize,
    pub format_issues: Vec<Finding>,
    pub manifest_issues: Vec<String>,
    pub labels: LabelReport,
    pub legality: LegalityReport,
    pub balance: BalanceReport,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.format_issues.is_empty()
            && self.manifest_issues.is_empty()
            && self.labels.is_clean()
            && self.legality.is_clean()
            && self.balance.is_clean()
    }

    pub fn render_text(&self) -> String {
        const SHOW: usize = 20;
        let mut out = String::new();
        let name = self
            .file
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "<memory>".into());
        let _ = writeln!(
            out,
            "file: {name} (variant {}, split {}, {} examples)",
            self.variant, self.split, self.examples
        );
        let status = |ok: bool| if ok { "ok" } else { "FAIL" };
        let _ = writeln!(out, "format:   {}", status(self.format_issues.is_empty()));
        for f in self.format_issues.iter().take(SHOW) {
            let _ = writeln!(out, "  line {}: {}", f.line, f.message);
        }
        let _ = writeln!(out, "manifest: {}", status(self.manifest_issues.is_empty()));
        for m in &self.manifest_issues {
            let _ = writeln!(out, "  {m}");
        }
        let _ = writeln!(
            out,
            "labels:   {} ({} checked, {} mismatches)",
            status(self.labels.is_clean()),
            self.labels.checked,
            self.labels.mismatches.len()
        );
        for m in self.labels.mismatches.iter().take(SHOW) {
            let _ = writeln!(out, "  line {}: target {} but expression evaluates to {}", m.line, m.found, m.expected);
        }
        for f in self.labels.undecodable.iter().take(SHOW) {
            let _ = writeln!(out, "  line {}: {}", f.line, f.message);
        }
        let _ = writeln!(
            out,
            "legality: {} ({} checked, {} violations)",
            status(self.legality.is_clean()),
            self.legality.checked,
            self.legality.violations.len()
        );
        for f in self.legality.violations.iter().take(SHOW) {
            let _ = writeln!(out, "  line {}: {}", f.line, f.message);
        }
        let counts: Vec<String> = self.balance.counts.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        let _ = writeln!(out, "balance:  {} (counts {})", status(self.balance.is_clean()), counts.join(" "));
        if let Some(grid) = self.balance.single_function_grid_complete {
            let _ = writeln!(out, "  single-function grid complete: {grid}");
        }
        if let Some(c) = &self.balance.coverage {
            let _ = writeln!(
                out,
                "  shared-symbol union {:?} (full: {}, coverage_incomplete flag: {})",
                c.shared_union, c.union_is_full, c.coverage_incomplete_flag
            );
        }
        for i in &self.balance.issues {
            let _ = writeln!(out, "  {i}");
        }
        let _ = writeln!(out, "RESULT: {}", if self.is_clean() { "PASS" } else { "FAIL" });
        out
    }
}

/// Recomputes every target with an independent fold.
pub fn verify_labels(input: &VerifierInput) -> Result<LabelReport> {
    let tables = Tables::new(&input.manifest).map_err(Error::Table)?;
    let results: Vec<std::result::Result<Option<LabelMismatch>, Finding>> = input
        .records
        .par_iter()
        .map(|r| match tables.fold_right_to_left(&r.tokens) {
            Ok(expected) if i64::from(expected) == r.target => Ok(None),
            Ok(expected) => Ok(Some(LabelMismatch {
                line: r.line,
                expected,
                found: r.target,
            })),
            Err(message) => Err(Finding { line: r.line, message }),
        })
        .collect();
    let mut report = LabelReport {
        checked: input.records.len(),
        ..Default::default()
    };
    for r in results {
        match r {
            Ok(Some(m)) => report.mismatches.push(m),
            Ok(None) => {}
            Err(f) => report.undecodable.push(f),
        }
    }
    Ok(report)
}

/// Train/IID files must use only training patterns, OOD files only test
/// patterns.
pub fn verify_split_legality(input: &VerifierInput) -> Result<LegalityReport> {
    let tables = Tables::new(&input.manifest).map_err(Error::Table)?;
    let mut violations: Vec<Finding> = input
        .records
        .par_iter()
        .filter_map(|r| {
            let problem = match tables.decode(&r.tokens) {
                Err(e) => Some(e),
                Ok((_, fs)) if fs.len() != r.len => {
                    Some(format!("len {} but {} function tokens", r.len, fs.len()))
                }
                Ok((input, fs)) => tables.legality_problem(input, &fs),
            };
            problem.map(|message| Finding { line: r.line, message })
        })
        .collect();
    violations.sort_by_key(|f| f.line);
    Ok(LegalityReport {
        checked: input.records.len(),
        violations,
    })
}

/// Length counts against the quota rule, the single-function grid for A/R
/// train, and the overlap coverage for S.
pub fn verify_balance_and_coverage(input: &VerifierInput) -> Result<BalanceReport> {
    let m = &input.manifest;
    let tables = Tables::new(m).map_err(Error::Table)?;
    let mut report = BalanceReport::default();
    let mut by_len: BTreeMap<usize, Vec<&RawRecord>> = BTreeMap::new();
    for r in &input.records {
        by_len.entry(r.len).or_default().push(r);
    }
    report.counts = by_len.iter().map(|(&l, v)| (l, v.len())).collect();

    let declared = tables.declared_lengths(m.config.max_functions);
    for &l in by_len.keys() {
        if !declared.contains(&l) {
            report.issues.push(format!("length {l} is outside the declared range {declared:?}"));
        }
    }
    let mut manifest_counts = m.counts.clone();
    manifest_counts.retain(|_, c| *c > 0);
    if manifest_counts != report.counts {
        report.issues.push(format!(
            "per-length counts {:?} differ from manifest {:?}",
            report.counts, manifest_counts
        ));
    }
    let total = input.records.len();
    let requested = match m.split {
        Split::Train => m.config.train_size,
        _ => m.config.test_size,
    };
    if total != m.size {
        report.issues.push(format!("manifest size {} but {total} examples", m.size));
    }
    if m.warnings.is_empty() && total != requested {
        report.issues.push(format!("{total} examples, config requests {requested}"));
    }
    if total > requested {
        report.issues.push(format!("{total} examples exceed the requested {requested}"));
    }

    let base = requested / declared.len().max(1);
    for &l in &declared {
        let records = by_len.get(&l).map(Vec::as_slice).unwrap_or(&[]);
        let distinct: HashSet<&[String]> = records.iter().map(|r| r.tokens.as_slice()).collect();
        if m.split != Split::Train && distinct.len() != records.len() {
            report.issues.push(format!(
                "length {l}: {} duplicate examples in a deduplicated split",
                records.len() - distinct.len()
            ));
        }
        let space = tables.space(l);
        if distinct.len() as u128 == space && records.len() as u128 == space {
            report.exhaustive.push(l);
        } else if records.len() < base {
            report.issues.push(format!(
                "length {l}: {} examples, below the quota {base} although its space holds {space} expressions",
                records.len()
            ));
        }
    }

    if m.config.variant != Variant::S && m.split == Split::Train {
        let nf = tables.maps.len();
        let ns = tables.num_symbols;
        let mut grid = vec![0usize; nf * ns];
        for r in by_len.get(&1).into_iter().flatten() {
            if let Ok((input, fs)) = tables.decode(&r.tokens) {
                grid[fs[0] * ns + input as usize] += 1;
            }
        }
        let complete = grid.iter().all(|&c| c == 1);
        report.single_function_grid_complete = Some(complete);
        if !complete {
            let missing = grid.iter().filter(|&&c| c == 0).count();
            let repeated = grid.iter().filter(|&&c| c > 1).count();
            report.issues.push(format!(
                "single-function grid: {missing} (function, symbol) rows missing, {repeated} repeated"
            ));
        }
    }

    if m.config.variant == Variant::S {
        report.coverage = Some(check_overlap(m, &tables, &mut report.issues));
    }
    Ok(report)
}

fn check_overlap(m: &DatasetManifest, tables: &Tables, issues: &mut Vec<String>) -> CoverageReport {
    let n = tables.num_symbols as u32;
    let all: BTreeSet<u32> = (0..n).collect();
    let x = m.config.shared_symbols();
    let go: BTreeSet<u32> = (0..tables.maps.len() as u32)
        .filter(|&f| tables.group(f as usize) == "Go")
        .collect();
    let listed: BTreeSet<u32> = tables.overlap.keys().copied().collect();
    if listed != go {
        issues.push(format!("overlap sets cover functions {listed:?}, Go is {go:?}"));
    }
    let mut union = BTreeSet::new();
    for (f, (a, b)) in &tables.overlap {
        let shared: BTreeSet<u32> = a.intersection(b).copied().collect();
        if shared.len() != x {
            issues.push(format!("f{f}: {} shared symbols, expected {x}", shared.len()));
        }
        if a.len() != b.len() {
            issues.push(format!("f{f}: |S_a| = {} but |S_b| = {}", a.len(), b.len()));
        }
        if a.union(b).copied().collect::<BTreeSet<_>>() != all {
            issues.push(format!("f{f}: S_a and S_b do not cover the alphabet"));
        }
        union.extend(shared);
    }
    let full = union == all;
    let flag = m.coverage_incomplete;
    if flag == full {
        issues.push(format!("coverage_incomplete = {flag} but the shared-symbol union is {union:?}"));
    }
    if go.len() * x >= n as usize && !full {
        issues.push(format!(
            "coverage is achievable ({} x {x} >= {n}) but the union is {union:?}",
            go.len()
        ));
    }
    CoverageReport {
        shared_union: union.into_iter().collect(),
        union_is_full: full,
        coverage_incomplete_flag: flag,
    }
}

/// Every check on one input.
pub fn verify(input: &VerifierInput) -> VerificationReport {
    let mut manifest_issues = Vec::new();
    if let Err(e) = input.manifest.config.validate() {
        manifest_issues.push(e.to_string());
    }
    let tables_ok = match Tables::new(&input.manifest) {
        Ok(_) => true,
        Err(e) => {
            manifest_issues.push(e);
            false
        }
    };
    let (labels, legality, balance) = if tables_ok {
        (
            verify_labels(input).unwrap_or_default(),
            verify_split_legality(input).unwrap_or_default(),
            verify_balance_and_coverage(input).unwrap_or_default(),
        )
    } else {
        Default::default()
    };
    VerificationReport {
        file: input.path.clone(),
        variant: input.manifest.config.variant,
        split: input.manifest.split,
        examples: input.records.len(),
        format_issues: input.format_issues.clone(),
        manifest_issues,
        labels,
        legality,
        balance,
    }
}

/// Loads and verifies a dataset file.
pub fn verify_file(path: impl AsRef<Path>) -> Result<VerificationReport> {
    Ok(verify(&VerifierInput::load(path)?))
}
