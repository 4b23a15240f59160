//! Cosine-similarity matrices and threshold-graph clustering.

use serde::Serialize;

use super::dumps::RepresentationDump;
use crate::error::{Error, Result};
use crate::fnalg::{FunctionId, Symbol};

/// Pairwise cosine similarity between the representations of one output
/// symbol produced by different functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosineMatrix {
    pub symbol: Symbol,
    pub functions: Vec<FunctionId>,
    pub values: Vec<Vec<f64>>,
    /// Functions whose vector has zero norm; their off-diagonal entries are 0.
    pub zero_norm: Vec<FunctionId>,
}

pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        None
    } else {
        Some((dot / (na * nb)).clamp(-1.0, 1.0))
    }
}

pub fn cosine_matrix(dump: &RepresentationDump, symbol: Symbol) -> Result<CosineMatrix> {
    let functions = dump.functions();
    let vectors: Vec<&[f64]> = functions
        .iter()
        .map(|&f| {
            dump.get(f, symbol)
                .ok_or_else(|| Error::Dump(format!("no vector for ({f}, {symbol})")))
        })
        .collect::<Result<_>>()?;
    let n = vectors.len();
    let zero: Vec<bool> = vectors.iter().map(|v| v.iter().all(|&x| x == 0.0)).collect();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        values[i][i] = 1.0;
        for j in i + 1..n {
            let c = cosine(vectors[i], vectors[j]).unwrap_or(0.0);
            values[i][j] = c;
            values[j][i] = c;
        }
    }
    let zero_norm = functions
        .iter()
        .zip(&zero)
        .filter(|(_, &z)| z)
        .map(|(&f, _)| f)
        .collect();
    Ok(CosineMatrix {
        symbol,
        functions,
        values,
        zero_norm,
    })
}

/// Cluster labels per row plus member lists. Cluster 0 is the largest;
/// equal sizes are ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clusters {
    pub assignment: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Clusters {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the graph joining `i` and `j` when
/// `matrix[i][j] >= threshold`.
#[allow(clippy::needless_range_loop)]
pub fn detect_clusters(matrix: &[Vec<f64>], threshold: f64) -> Clusters {
    let n = matrix.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] >= threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut members: Vec<Vec<usize>> = groups.into_values().collect();
    members.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut assignment = vec![0; n];
    for (c, m) in members.iter().enumerate() {
        for &i in m {
            assignment[i] = c;
        }
    }
    Clusters { assignment, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::dumps::DumpMeta;
    use crate::config::Variant;

    fn dump_from(vectors: &[Vec<f64>]) -> RepresentationDump {
        let mut d = RepresentationDump::new(DumpMeta::new("t", Variant::R, 0, vectors[0].len()));
        for (f, v) in vectors.iter().enumerate() {
            d.insert(FunctionId(f as u32), Symbol(0), v.clone()).unwrap();
        }
        d
    }

    #[test]
    fn identical_vectors_give_all_ones() {
        let m = cosine_matrix(&dump_from(&vec![vec![0.3, -1.0, 2.0]; 4]), Symbol(0)).unwrap();
        for row in &m.values {
            for &v in row {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(detect_clusters(&m.values, 0.8).len(), 1);
    }

    #[test]
    fn orthogonal_blocks() {
        let vs = vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0], vec![0.0, 3.0], vec![0.0, 0.5]];
        let m = cosine_matrix(&dump_from(&vs), Symbol(0)).unwrap();
        assert_eq!(m.values[0][1], 1.0);
        assert_eq!(m.values[0][2], 0.0);
        let c = detect_clusters(&m.values, 0.8);
        assert_eq!(c.members, vec![vec![2, 3, 4], vec![0, 1]]);
        assert_eq!(c.assignment, vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn zero_vector_is_flagged() {
        let vs = vec![vec![1.0, 0.0], vec![0.0, 0.0]];
        let m = cosine_matrix(&dump_from(&vs), Symbol(0)).unwrap();
        assert_eq!(m.zero_norm, vec![FunctionId(1)]);
        assert_eq!(m.values[0][1], 0.0);
        assert_eq!(m.values[1][1], 1.0);
    }

    #[test]
    fn tie_broken_by_smallest_member() {
        let m = vec![
            vec![1.0, 0.0, 0.9, 0.0],
            vec![0.0, 1.0, 0.0, 0.9],
            vec![0.9, 0.0, 1.0, 0.0],
            vec![0.0, 0.9, 0.0, 1.0],
        ];
        assert_eq!(detect_clusters(&m, 0.8).members, vec![vec![0, 2], vec![1, 3]]);
    }
}
