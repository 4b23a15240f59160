//! Oracles shared by the integration tests. Nothing here calls the
//! generator's own legality or space code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ctlpp::analyzer::{DumpMeta, RepresentationDump};
use ctlpp::dataset::DatasetManifest;
use ctlpp::sampler::{EdgeMode, Node, SamplingGraph};
use ctlpp::{Expression, FunctionId, GroupId, SeededStream, Symbol, Variant};

/// Right-to-left fold over the rendered token sequence.
pub fn fold_tokens(tokens: &[String], manifest: &DatasetManifest) -> u32 {
    let (last, fs) = tokens.split_last().expect("non-empty");
    let mut s: u32 = last.parse().expect("symbol token");
    for t in fs.iter().rev() {
        let f: usize = t.trim_start_matches('f').parse().expect("function token");
        s = manifest.functions[f].mapping()[s as usize].0;
    }
    s
}

/// Every group sequence of at most `max_len` groups spelled by a walk
/// IN → ... → OUT (possibly through OUT → IN) over edges allowed by `ok`.
pub fn graph_walks(graph: &SamplingGraph, max_len: usize, ok: impl Fn(EdgeMode) -> bool + Copy) -> BTreeSet<Vec<GroupId>> {
    fn go(
        graph: &SamplingGraph,
        at: Node,
        seq: &mut Vec<GroupId>,
        max_len: usize,
        ok: &dyn Fn(EdgeMode) -> bool,
        out: &mut BTreeSet<Vec<GroupId>>,
    ) {
        for e in graph.edges.iter().filter(|e| e.from == at && ok(e.mode)) {
            match e.to {
                Node::Out => {
                    if !seq.is_empty() {
                        out.insert(seq.clone());
                    }
                    if seq.len() < max_len {
                        go(graph, Node::Out, seq, max_len, ok, out);
                    }
                }
                Node::In => go(graph, Node::In, seq, max_len, ok, out),
                Node::Group(g) => {
                    if seq.len() < max_len {
                        seq.push(g);
                        go(graph, e.to, seq, max_len, ok, out);
                        seq.pop();
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(graph, Node::In, &mut Vec::new(), max_len, &ok, &mut out);
    out
}

fn stage1_path_of(g: GroupId) -> Option<bool> {
    match g {
        GroupId::Ga1 => Some(true),
        GroupId::Gb1 => Some(false),
        _ => None,
    }
}

/// Whether each overlap-function use sees an intermediate symbol in the
/// matching `S^f` set of the manifest.
pub fn go_uses_eligible(expr: &Expression, manifest: &DatasetManifest) -> bool {
    let mut s = expr.input;
    let mut prev: Option<GroupId> = None;
    for &f in &expr.functions {
        let t = &manifest.functions[f.index()];
        if t.group() == GroupId::Go {
            let Some(path_a) = prev.and_then(stage1_path_of) else {
                return false;
            };
            let overlap = manifest.overlap.as_ref().expect("S manifest has overlap");
            let Some(sets) = overlap.sets.iter().find(|x| x.function == f) else {
                return false;
            };
            let allowed = if path_a { &sets.a } else { &sets.b };
            if !allowed.contains(&s) {
                return false;
            }
        }
        s = t.mapping()[s.index()];
        prev = Some(t.group());
    }
    true
}

/// All expressions whose group sequence is in `walks`, filtered by overlap
/// eligibility for variant S.
pub fn expand(walks: &BTreeSet<Vec<GroupId>>, manifest: &DatasetManifest) -> BTreeSet<Expression> {
    let mut out = BTreeSet::new();
    for w in walks {
        let choices: Vec<Vec<FunctionId>> = w
            .iter()
            .map(|&g| manifest.functions.iter().filter(|t| t.group() == g).map(|t| t.id()).collect())
            .collect();
        let mut idx = vec![0usize; w.len()];
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        loop {
            let fs: Vec<FunctionId> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            for s in 0..manifest.config.num_symbols as u32 {
                let e = Expression::new(Symbol(s), fs.clone());
                if manifest.config.variant != Variant::S || go_uses_eligible(&e, manifest) {
                    out.insert(e);
                }
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

/// Planted representations: one orthogonal codebook per block of
/// `block_of`, plus small noise.
pub fn planted_dump(block_of: &[usize], num_symbols: usize, seed: u64) -> RepresentationDump {
    let blocks = block_of.iter().max().map_or(0, |b| b + 1);
    let dim = blocks * num_symbols;
    let mut rng = SeededStream::new(seed);
    let mut dump = RepresentationDump::new(DumpMeta::new("planted", Variant::R, seed, dim));
    for (f, &b) in block_of.iter().enumerate() {
        for s in 0..num_symbols {
            let mut v: Vec<f64> = (0..dim).map(|_| (rng.below(1001) as f64 / 1000.0 - 0.5) * 0.1).collect();
            v[b * num_symbols + s] += 1.0;
            dump.insert(FunctionId(f as u32), Symbol(s as u32), v).unwrap();
        }
    }
    dump
}
