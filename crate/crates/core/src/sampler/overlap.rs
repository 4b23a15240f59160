//! Per-function symbol sets of the overlap group `Go` (variant S).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::config::{TaskConfig, Variant};
use crate::error::{Error, Result};
use crate::fnalg::{FunctionId, Path, Symbol};
use crate::rng::SeededStream;

/// Symbols an overlap function accepts from each path's stage-1 output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapSets {
    pub function: FunctionId,
    pub a: Vec<Symbol>,
    pub b: Vec<Symbol>,
}

impl OverlapSets {
    pub fn for_path(&self, path: Path) -> &[Symbol] {
        match path {
            Path::A => &self.a,
            Path::B => &self.b,
        }
    }

    pub fn shared(&self) -> BTreeSet<Symbol> {
        let b: BTreeSet<_> = self.b.iter().copied().collect();
        self.a.iter().copied().filter(|s| b.contains(s)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapSpec {
    pub go_size: usize,
    pub shared_symbols: usize,
    pub sets: Vec<OverlapSets>,
    pub coverage_incomplete: bool,
}

impl OverlapSpec {
    /// Builds one `(S^f_a, S^f_b)` pair per member of `go_members`.
    ///
    /// Each pair shares exactly `shared_symbols` symbols, the remaining
    /// symbols are split evenly into a-only and b-only halves. When
    /// `go_size * shared_symbols >= num_symbols` the shared parts are taken
    /// as consecutive windows over one shuffled alphabet so that together
    /// they cover every symbol.
    pub fn build(
        config: &TaskConfig,
        go_members: &[FunctionId],
        rng: &mut SeededStream,
    ) -> Result<Self> {
        if config.variant != Variant::S {
            return Err(Error::Config("overlap sets only exist for variant S".into()));
        }
        let n = config.num_symbols;
        let x = config.shared_symbols();
        if x > n || !(n + x).is_multiple_of(2) {
            return Err(Error::Config(format!(
                "cannot split {n} symbols into two equal sets sharing {x}"
            )));
        }
        if go_members.len() != config.go_size() {
            return Err(Error::Config(format!(
                "expected {} overlap functions, got {}",
                config.go_size(),
                go_members.len()
            )));
        }
        let coverable = go_members.len() * x >= n;
        let mut window_order: Vec<u32> = (0..n as u32).collect();
        if coverable {
            rng.shuffle(&mut window_order);
        }

        let mut sets = Vec::with_capacity(go_members.len());
        for (j, &function) in go_members.iter().enumerate() {
            let shared: BTreeSet<u32> = if coverable {
                (0..x).map(|t| window_order[(j * x + t) % n]).collect()
            } else {
                let mut all: Vec<u32> = (0..n as u32).collect();
                rng.shuffle(&mut all);
                all.truncate(x);
                all.into_iter().collect()
            };
            let mut rest: Vec<u32> = (0..n as u32).filter(|s| !shared.contains(s)).collect();
            rng.shuffle(&mut rest);
            let half = rest.len() / 2;
            let mut a: Vec<Symbol> = shared.iter().chain(&rest[..half]).copied().map(Symbol).collect();
            let mut b: Vec<Symbol> = shared.iter().chain(&rest[half..]).copied().map(Symbol).collect();
            a.sort();
            b.sort();
            sets.push(OverlapSets { function, a, b });
        }
        let spec = Self {
            go_size: go_members.len(),
            shared_symbols: x,
            sets,
            coverage_incomplete: !coverable,
        };
        debug_assert!(spec.check(n).is_ok());
        Ok(spec)
    }

    pub fn sets_for(&self, f: FunctionId) -> Option<&OverlapSets> {
        self.sets.iter().find(|s| s.function == f)
    }

    /// May overlap function `f` consume `symbol` produced on `path`?
    pub fn admits(&self, f: FunctionId, path: Path, symbol: Symbol) -> bool {
        self.sets_for(f)
            .is_some_and(|s| s.for_path(path).binary_search(&symbol).is_ok())
    }

    /// Union over all overlap functions of their shared symbols.
    pub fn shared_union(&self) -> BTreeSet<Symbol> {
        self.sets.iter().flat_map(OverlapSets::shared).collect()
    }

    /// Checks the size, intersection, union and coverage invariants.
    pub fn check(&self, num_symbols: usize) -> std::result::Result<(), String> {
        let all: BTreeSet<Symbol> = (0..num_symbols as u32).map(Symbol).collect();
        if self.sets.len() != self.go_size {
            return Err(format!("{} sets for go_size {}", self.sets.len(), self.go_size));
        }
        for s in &self.sets {
            let a: BTreeSet<_> = s.a.iter().copied().collect();
            let b: BTreeSet<_> = s.b.iter().copied().collect();
            if a.len() != s.a.len() || b.len() != s.b.len() {
                return Err(format!("{}: repeated symbols", s.function));
            }
            if a.len() != b.len() {
                return Err(format!("{}: |S_a| = {} but |S_b| = {}", s.function, a.len(), b.len()));
            }
            let shared = a.intersection(&b).count();
            if shared != self.shared_symbols {
                return Err(format!(
                    "{}: {} shared symbols, expected {}",
                    s.function, shared, self.shared_symbols
                ));
            }
            let union: BTreeSet<_> = a.union(&b).copied().collect();
            if union != all {
                return Err(format!("{}: S_a and S_b do not cover the alphabet", s.function));
            }
        }
        let covered = self.shared_union() == all;
        if covered == self.coverage_incomplete {
            return Err(format!(
                "coverage_incomplete = {} but shared symbols {} the alphabet",
                self.coverage_incomplete,
                if covered { "cover" } else { "do not cover" }
            ));
        }
        Ok(())
    }
}
