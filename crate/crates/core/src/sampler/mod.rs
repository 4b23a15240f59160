//! Sampling graphs and expression draws for variants A, R and S.

mod graph;
mod overlap;
mod space;

pub use graph::{Edge, EdgeMode, Node, Phase, SamplingGraph};
pub use overlap::{OverlapSets, OverlapSpec};
pub use space::{count_expressions, enumerate_expressions};

use crate::config::{Split, Variant};
use crate::error::{Error, Result};
use crate::fnalg::{Expression, FunctionId, FunctionSet, GroupId, Path, Symbol};
use crate::rng::SeededStream;

/// Stage-1 redraws allowed when a variant-S pair has no stage-2 candidate.
pub const MAX_STAGE1_RETRIES: usize = 100;

/// Which of the two edge sets an expression's pattern belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternLabel {
    TrainLegal,
    OodLegal,
}

/// Whether consecutive functions of an A/R expression alternate groups.
fn ar_alternates(variant: Variant, split: Split) -> bool {
    matches!(
        (variant, split.uses_train_graph()),
        (Variant::A, true) | (Variant::R, false)
    )
}

fn pick(rng: &mut SeededStream, ids: &[FunctionId], group: GroupId) -> Result<FunctionId> {
    rng.choose(ids)
        .copied()
        .ok_or_else(|| Error::Sampling(format!("group {group} has no functions")))
}

/// Draws one variant A or R expression with `length` functions.
pub fn sample_expression_ar(
    variant: Variant,
    split: Split,
    length: usize,
    functions: &FunctionSet,
    rng: &mut SeededStream,
) -> Result<Expression> {
    if variant == Variant::S {
        return Err(Error::Sampling("variant S uses sample_expression_s".into()));
    }
    if length == 0 {
        return Err(Error::Sampling("expressions need at least one function".into()));
    }
    if split == Split::Ood && length < 2 {
        return Err(Error::Sampling(
            "an OOD expression needs at least two functions to contain a test-only pattern".into(),
        ));
    }
    let alternate = ar_alternates(variant, split);
    let input = Symbol(rng.below(functions.num_symbols()) as u32);
    let mut group = if rng.below(2) == 0 { GroupId::Ga } else { GroupId::Gb };
    let mut ids = Vec::with_capacity(length);
    for i in 0..length {
        if i > 0 && alternate {
            group = group.other_ar().expect("A/R group");
        }
        ids.push(pick(rng, functions.members(group), group)?);
    }
    Ok(Expression::new(input, ids))
}

/// Stage-2 functions allowed after a stage-1 function of `path` produced
/// `mid`: `G_p2` plus admitting overlap functions for train/IID, the other
/// path's stage-2 group for OOD. Ordered by id within each part.
pub fn stage2_candidates(
    split: Split,
    path: Path,
    mid: Symbol,
    functions: &FunctionSet,
    overlap: &OverlapSpec,
) -> Vec<FunctionId> {
    if split.uses_train_graph() {
        let mut c = functions.members(path.stage2()).to_vec();
        c.extend(
            functions
                .members(GroupId::Go)
                .iter()
                .copied()
                .filter(|&g| overlap.admits(g, path, mid)),
        );
        c
    } else {
        functions.members(path.other().stage2()).to_vec()
    }
}

/// Draws one variant S expression of `num_pairs` chained (stage 1, stage 2)
/// pairs. The path is redrawn for every pair.
pub fn sample_expression_s(
    split: Split,
    num_pairs: usize,
    functions: &FunctionSet,
    overlap: &OverlapSpec,
    rng: &mut SeededStream,
) -> Result<Expression> {
    if num_pairs == 0 {
        return Err(Error::Sampling("variant S expressions need at least one pair".into()));
    }
    let input = Symbol(rng.below(functions.num_symbols()) as u32);
    let mut current = input;
    let mut ids = Vec::with_capacity(2 * num_pairs);
    for pair in 0..num_pairs {
        let path = if rng.below(2) == 0 { Path::A } else { Path::B };
        let stage1 = functions.members(path.stage1());
        let mut attempts = 0;
        loop {
            let f = pick(rng, stage1, path.stage1())?;
            let mid = functions.table(f).apply(current);
            let candidates = stage2_candidates(split, path, mid, functions, overlap);
            if let Some(&g) = rng.choose(&candidates) {
                ids.push(f);
                ids.push(g);
                current = functions.table(g).apply(mid);
                break;
            }
            attempts += 1;
            if attempts >= MAX_STAGE1_RETRIES {
                return Err(Error::Sampling(format!(
                    "pair {pair} on path {path:?}: no stage-2 candidate after {attempts} stage-1 draws \
                     (|{}| = {}, no overlap function admits the intermediate symbols)",
                    path.stage2(),
                    functions.members(path.stage2()).len()
                )));
            }
        }
    }
    Ok(Expression::new(input, ids))
}

/// Checks an expression against the training edge set of `graph`, and for
/// variant S also the overlap eligibility of every `Go` use.
pub fn is_train_legal(
    expr: &Expression,
    functions: &FunctionSet,
    graph: &SamplingGraph,
    overlap: Option<&OverlapSpec>,
) -> bool {
    if expr.functions.iter().any(|&f| !functions.contains(f))
        || expr.input.index() >= functions.num_symbols()
    {
        return false;
    }
    let groups: Vec<GroupId> = expr.functions.iter().map(|&f| functions.group_of(f)).collect();
    if !graph.accepts(&groups, Phase::Train) {
        return false;
    }
    if graph.variant != Variant::S {
        return true;
    }
    let mut current = expr.input;
    for (i, &f) in expr.functions.iter().enumerate() {
        if groups[i] == GroupId::Go {
            let Some(path) = i.checked_sub(1).and_then(|p| groups[p].stage1_path()) else {
                return false;
            };
            if !overlap.is_some_and(|o| o.admits(f, path, current)) {
                return false;
            }
        }
        current = functions.table(f).apply(current);
    }
    true
}

/// True iff the group sequence is a walk over the test edge set.
pub fn is_test_pattern(expr: &Expression, functions: &FunctionSet, graph: &SamplingGraph) -> bool {
    if expr.functions.iter().any(|&f| !functions.contains(f)) {
        return false;
    }
    let groups: Vec<GroupId> = expr.functions.iter().map(|&f| functions.group_of(f)).collect();
    graph.accepts(&groups, Phase::Test)
}

/// Train-legal expressions are labelled as such first; otherwise an
/// expression that walks the test edges is OOD-legal. `None` for patterns
/// neither graph produces.
pub fn pattern_label(
    expr: &Expression,
    functions: &FunctionSet,
    graph: &SamplingGraph,
    overlap: Option<&OverlapSpec>,
) -> Option<PatternLabel> {
    if is_train_legal(expr, functions, graph, overlap) {
        Some(PatternLabel::TrainLegal)
    } else if is_test_pattern(expr, functions, graph) {
        Some(PatternLabel::OodLegal)
    } else {
        None
    }
}
