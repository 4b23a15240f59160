//! Symbols, bijective unary functions and the ground-truth evaluator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{TaskConfig, Variant};
use crate::error::{Error, Result};
use crate::rng::SeededStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionId(pub u32);

impl FunctionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// Function group. Variants A and R use `Ga`/`Gb`; variant S uses the four
/// path/stage groups plus the overlap group `Go`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupId {
    Ga,
    Gb,
    Ga1,
    Ga2,
    Gb1,
    Gb2,
    Go,
}

/// The two paths of variant S.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    A,
    B,
}

impl Path {
    pub fn other(self) -> Path {
        match self {
            Path::A => Path::B,
            Path::B => Path::A,
        }
    }

    pub fn stage1(self) -> GroupId {
        match self {
            Path::A => GroupId::Ga1,
            Path::B => GroupId::Gb1,
        }
    }

    pub fn stage2(self) -> GroupId {
        match self {
            Path::A => GroupId::Ga2,
            Path::B => GroupId::Gb2,
        }
    }
}

impl GroupId {
    /// Groups of a variant in declaration order; ids are assigned to them in
    /// contiguous blocks following this order.
    pub fn for_variant(variant: Variant) -> &'static [GroupId] {
        match variant {
            Variant::A | Variant::R => &[GroupId::Ga, GroupId::Gb],
            Variant::S => &[
                GroupId::Ga1,
                GroupId::Ga2,
                GroupId::Gb1,
                GroupId::Gb2,
                GroupId::Go,
            ],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GroupId::Ga => "Ga",
            GroupId::Gb => "Gb",
            GroupId::Ga1 => "Ga1",
            GroupId::Ga2 => "Ga2",
            GroupId::Gb1 => "Gb1",
            GroupId::Gb2 => "Gb2",
            GroupId::Go => "Go",
        }
    }

    /// Path of a variant-S stage-1 group.
    pub fn stage1_path(self) -> Option<Path> {
        match self {
            GroupId::Ga1 => Some(Path::A),
            GroupId::Gb1 => Some(Path::B),
            _ => None,
        }
    }

    pub fn other_ar(self) -> Option<GroupId> {
        match self {
            GroupId::Ga => Some(GroupId::Gb),
            GroupId::Gb => Some(GroupId::Ga),
            _ => None,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Ga" => GroupId::Ga,
            "Gb" => GroupId::Gb,
            "Ga1" => GroupId::Ga1,
            "Ga2" => GroupId::Ga2,
            "Gb1" => GroupId::Gb1,
            "Gb2" => GroupId::Gb2,
            "Go" => GroupId::Go,
            other => return Err(Error::Table(format!("unknown group {other:?}"))),
        })
    }
}

/// A bijection over the symbol alphabet together with its group.
///
/// Serializes as `{"id": int, "group": string, "mapping": [int, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRecord", into = "TableRecord")]
pub struct FunctionTable {
    id: FunctionId,
    group: GroupId,
    mapping: Vec<Symbol>,
    inverse: Vec<Symbol>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    id: u32,
    group: GroupId,
    mapping: Vec<u32>,
}

impl TryFrom<TableRecord> for FunctionTable {
    type Error = Error;

    fn try_from(r: TableRecord) -> Result<Self> {
        FunctionTable::new(
            FunctionId(r.id),
            r.group,
            r.mapping.into_iter().map(Symbol).collect(),
        )
    }
}

impl From<FunctionTable> for TableRecord {
    fn from(t: FunctionTable) -> Self {
        TableRecord {
            id: t.id.0,
            group: t.group,
            mapping: t.mapping.into_iter().map(|s| s.0).collect(),
        }
    }
}

impl FunctionTable {
    /// Fails unless `mapping` is a permutation of `0..mapping.len()`.
    pub fn new(id: FunctionId, group: GroupId, mapping: Vec<Symbol>) -> Result<Self> {
        let n = mapping.len();
        if n == 0 {
            return Err(Error::Table(format!("{id}: empty mapping")));
        }
        let mut inverse = vec![None; n];
        for (s, &out) in mapping.iter().enumerate() {
            let slot = inverse.get_mut(out.index()).ok_or_else(|| {
                Error::Table(format!("{id}: image {out} outside alphabet of size {n}"))
            })?;
            if slot.is_some() {
                return Err(Error::Table(format!("{id}: symbol {out} is hit twice")));
            }
            *slot = Some(Symbol(s as u32));
        }
        let inverse = inverse.into_iter().map(|s| s.expect("bijective")).collect();
        Ok(Self {
            id,
            group,
            mapping,
            inverse,
        })
    }

    pub fn identity(id: FunctionId, group: GroupId, num_symbols: usize) -> Self {
        let mapping: Vec<Symbol> = (0..num_symbols as u32).map(Symbol).collect();
        Self {
            id,
            group,
            inverse: mapping.clone(),
            mapping,
        }
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn mapping(&self) -> &[Symbol] {
        &self.mapping
    }

    pub fn num_symbols(&self) -> usize {
        self.mapping.len()
    }

    /// `f(s)`. Panics when `s` is outside the alphabet.
    pub fn apply(&self, s: Symbol) -> Symbol {
        self.mapping[s.index()]
    }

    /// The unique `s` with `f(s) == s_out`.
    pub fn apply_inverse(&self, s_out: Symbol) -> Symbol {
        self.inverse[s_out.index()]
    }
}

/// An input symbol and the functions applied to it, first-applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Expression {
    pub input: Symbol,
    pub functions: Vec<FunctionId>,
}

impl Expression {
    pub fn new(input: Symbol, functions: Vec<FunctionId>) -> Self {
        Self { input, functions }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Folds `apply` over `expr.functions` starting from `expr.input`.
///
/// This is the label oracle for every generated example. Panics when a
/// function id has no table.
pub fn evaluate(expr: &Expression, tables: &[FunctionTable]) -> Symbol {
    expr.functions
        .iter()
        .fold(expr.input, |s, f| tables[f.index()].apply(s))
}

/// `(group, size)` blocks in id order for a validated config.
pub fn group_layout(config: &TaskConfig) -> Vec<(GroupId, usize)> {
    let groups = GroupId::for_variant(config.variant);
    match config.variant {
        Variant::A | Variant::R => {
            let half = config.num_functions / 2;
            groups.iter().map(|&g| (g, half)).collect()
        }
        Variant::S => {
            let sizes = config.path_group_sizes();
            groups
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, if g == GroupId::Go { config.go_size() } else { sizes[i] }))
                .collect()
        }
    }
}

/// Draws `num_functions` uniform random permutations and assigns groups in
/// contiguous id blocks.
pub fn build_functions(config: &TaskConfig, rng: &mut SeededStream) -> Result<Vec<FunctionTable>> {
    config.validate()?;
    let n = config.num_symbols;
    let mut tables = Vec::with_capacity(config.num_functions);
    for (group, size) in group_layout(config) {
        for _ in 0..size {
            let id = FunctionId(tables.len() as u32);
            let mut mapping: Vec<Symbol> = (0..n as u32).map(Symbol).collect();
            rng.shuffle(&mut mapping);
            tables.push(FunctionTable::new(id, group, mapping)?);
        }
    }
    debug_assert_eq!(tables.len(), config.num_functions);
    Ok(tables)
}

/// Function tables indexed by id, with per-group member lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSet {
    tables: Vec<FunctionTable>,
    num_symbols: usize,
    members: Vec<(GroupId, Vec<FunctionId>)>,
}

impl FunctionSet {
    /// Tables must be ordered by id (`tables[i].id() == i`) over one alphabet.
    pub fn new(tables: Vec<FunctionTable>) -> Result<Self> {
        let num_symbols = tables
            .first()
            .map(FunctionTable::num_symbols)
            .ok_or_else(|| Error::Table("no function tables".into()))?;
        let mut members: Vec<(GroupId, Vec<FunctionId>)> = Vec::new();
        for (i, t) in tables.iter().enumerate() {
            if t.id().index() != i {
                return Err(Error::Table(format!(
                    "table at position {i} has id {}",
                    t.id()
                )));
            }
            if t.num_symbols() != num_symbols {
                return Err(Error::Table(format!(
                    "{} maps {} symbols, expected {num_symbols}",
                    t.id(),
                    t.num_symbols()
                )));
            }
            match members.iter_mut().find(|(g, _)| *g == t.group()) {
                Some((_, ids)) => ids.push(t.id()),
                None => members.push((t.group(), vec![t.id()])),
            }
        }
        members.sort_by_key(|(g, _)| *g);
        Ok(Self {
            tables,
            num_symbols,
            members,
        })
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn num_functions(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, f: FunctionId) -> &FunctionTable {
        &self.tables[f.index()]
    }

    pub fn group_of(&self, f: FunctionId) -> GroupId {
        self.tables[f.index()].group()
    }

    /// Members of `group` in id order; empty when the group is absent.
    pub fn members(&self, group: GroupId) -> &[FunctionId] {
        self.members
            .iter()
            .find(|(g, _)| *g == group)
            .map(|(_, ids)| ids.as_slice())
            .unwrap_or(&[])
    }

    pub fn evaluate(&self, expr: &Expression) -> Symbol {
        evaluate(expr, &self.tables)
    }

    pub fn contains(&self, f: FunctionId) -> bool {
        f.index() < self.tables.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(mapping: &[u32]) -> FunctionTable {
        FunctionTable::new(
            FunctionId(0),
            GroupId::Ga,
            mapping.iter().copied().map(Symbol).collect(),
        )
        .unwrap()
    }

    #[test]
    fn apply_and_inverse_on_stated_table() {
        let t = table(&[1, 2, 0]);
        assert_eq!(t.apply(Symbol(2)), Symbol(0));
        assert_eq!(t.apply_inverse(Symbol(0)), Symbol(2));
        for s in 0..3 {
            assert_eq!(t.apply(t.apply_inverse(Symbol(s))), Symbol(s));
        }
    }

    #[test]
    fn identity_table() {
        let t = FunctionTable::identity(FunctionId(0), GroupId::Ga, 8);
        assert_eq!(t.apply(Symbol(3)), Symbol(3));
        assert_eq!(t.apply_inverse(Symbol(6)), Symbol(6));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(FunctionTable::new(FunctionId(0), GroupId::Ga, vec![Symbol(0), Symbol(0)]).is_err());
        assert!(FunctionTable::new(FunctionId(0), GroupId::Ga, vec![Symbol(2), Symbol(0)]).is_err());
        assert!(FunctionTable::new(FunctionId(0), GroupId::Ga, vec![]).is_err());
    }

    #[test]
    fn evaluate_single_and_identity() {
        let tables = vec![table(&[1, 2, 0])];
        let e = Expression::new(Symbol(1), vec![FunctionId(0)]);
        assert_eq!(evaluate(&e, &tables), Symbol(2));
        let ids: Vec<FunctionTable> = (0..3)
            .map(|i| FunctionTable::identity(FunctionId(i), GroupId::Ga, 4))
            .collect();
        let e = Expression::new(Symbol(3), vec![FunctionId(2), FunctionId(0), FunctionId(1)]);
        assert_eq!(evaluate(&e, &ids), Symbol(3));
    }

    #[test]
    fn default_a_layout() {
        let config = TaskConfig::new(Variant::A, 3);
        let tables = build_functions(&config, &mut SeededStream::new(3)).unwrap();
        assert_eq!(tables.len(), 32);
        for t in &tables {
            let expected = if t.id().0 < 16 { GroupId::Ga } else { GroupId::Gb };
            assert_eq!(t.group(), expected);
            let mut sorted = t.mapping().to_vec();
            sorted.sort();
            assert_eq!(sorted, (0..8).map(Symbol).collect::<Vec<_>>());
        }
    }

    #[test]
    fn single_symbol_alphabet_gives_identities() {
        let config = TaskConfig {
            num_symbols: 1,
            num_functions: 2,
            ..TaskConfig::new(Variant::A, 0)
        };
        let tables = build_functions(&config, &mut SeededStream::new(0)).unwrap();
        assert_eq!(tables.len(), 2);
        assert!(tables.iter().all(|t| t.mapping() == [Symbol(0)]));
    }

    #[test]
    fn staged_layout_blocks() {
        let config = TaskConfig::staged(8, 4, 1);
        let set = FunctionSet::new(build_functions(&config, &mut SeededStream::new(1)).unwrap()).unwrap();
        assert_eq!(set.members(GroupId::Ga1), (0..6).map(FunctionId).collect::<Vec<_>>());
        assert_eq!(set.members(GroupId::Ga2).len(), 6);
        assert_eq!(set.members(GroupId::Gb1).len(), 6);
        assert_eq!(set.members(GroupId::Gb2).len(), 6);
        assert_eq!(set.members(GroupId::Go), (24..32).map(FunctionId).collect::<Vec<_>>());
        assert!(set.members(GroupId::Ga).is_empty());
    }

    #[test]
    fn table_json_shape() {
        let t = FunctionTable::new(FunctionId(4), GroupId::Gb, vec![Symbol(1), Symbol(0)]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"id":4,"group":"Gb","mapping":[1,0]}"#);
        let back: FunctionTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<FunctionTable>(r#"{"id":0,"group":"Ga","mapping":[0,0]}"#).is_err());
    }
}
