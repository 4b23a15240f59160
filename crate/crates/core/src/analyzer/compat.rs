//! Two-step compatibility grids: accuracy of `f2(f1(s))` probes bucketed by
//! a partition of the producing functions and one of the consumers.

use serde::Serialize;

use super::dumps::PredictionDump;
use super::similarity::Clusters;
use crate::fnalg::{FunctionSet, GroupId, Symbol};

/// Assignment of functions (by index) to labelled blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub labels: Vec<String>,
    pub block_of: Vec<usize>,
}

impl Partition {
    /// Blocks are the function groups in declaration order.
    pub fn groups(functions: &FunctionSet) -> Self {
        let mut groups: Vec<GroupId> = functions.tables().iter().map(|t| t.group()).collect();
        groups.sort();
        groups.dedup();
        let block_of = functions
            .tables()
            .iter()
            .map(|t| groups.iter().position(|&g| g == t.group()).unwrap())
            .collect();
        Self {
            labels: groups.iter().map(|g| g.to_string()).collect(),
            block_of,
        }
    }

    /// Blocks `C1`, `C2`, … in cluster order.
    pub fn clusters(clusters: &Clusters) -> Self {
        Self {
            labels: (1..=clusters.len()).map(|i| format!("C{i}")).collect(),
            block_of: clusters.assignment.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatGrid {
    pub symbol: Symbol,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// `None` when no probe falls into the cell.
    pub cells: Vec<Vec<Option<f64>>>,
    pub correct: Vec<Vec<usize>>,
    pub total: Vec<Vec<usize>>,
}

/// Cell `(r, c)`: over `f1` in row block `r` and `f2` in column block `c`,
/// the fraction of probes `[f2, f1, f1⁻¹(symbol)]` predicted as
/// `f2(symbol)`. The intermediate symbol is therefore always `symbol`.
pub fn compatibility_grid(
    predictions: &PredictionDump,
    functions: &FunctionSet,
    symbol: Symbol,
    rows: &Partition,
    cols: &Partition,
) -> CompatGrid {
    let (nr, nc) = (rows.len(), cols.len());
    let mut correct = vec![vec![0usize; nc]; nr];
    let mut total = vec![vec![0usize; nc]; nr];
    for t1 in functions.tables() {
        let f1 = t1.id();
        let input = t1.apply_inverse(symbol);
        for t2 in functions.tables() {
            let f2 = t2.id();
            let Some(pred) = predictions.prediction(f1, f2, input) else {
                continue;
            };
            let (r, c) = (rows.block_of[f1.index()], cols.block_of[f2.index()]);
            total[r][c] += 1;
            if pred == t2.apply(symbol) {
                correct[r][c] += 1;
            }
        }
    }
    let cells = correct
        .iter()
        .zip(&total)
        .map(|(cr, tr)| {
            cr.iter()
                .zip(tr)
                .map(|(&c, &t)| (t > 0).then(|| c as f64 / t as f64))
                .collect()
        })
        .collect();
    CompatGrid {
        symbol,
        row_labels: rows.labels.clone(),
        col_labels: cols.labels.clone(),
        cells,
        correct,
        total,
    }
}

/// Exhaustive `(f1, f2, input)` predictions of the exact composition.
pub fn oracle_predictions(functions: &FunctionSet) -> PredictionDump {
    let records = functions.tables().iter().flat_map(|t1| {
        functions.tables().iter().flat_map(move |t2| {
            (0..functions.num_symbols() as u32).map(move |s| super::dumps::PredictionRecord {
                f1: t1.id().0,
                f2: t2.id().0,
                input: s,
                pred: t2.apply(t1.apply(Symbol(s))).0,
            })
        })
    });
    PredictionDump::from_records(None, records).expect("distinct probes")
}
