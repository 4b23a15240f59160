//! Task variants, splits and the generator configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which sampling graph the task uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Alternating groups in training, same-group chains at test time.
    A,
    /// Same-group chains in training, alternating groups at test time.
    R,
    /// Staged two-step compositions with a shared overlap group.
    S,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::A, Variant::R, Variant::S];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::A => "A",
            Variant::R => "R",
            Variant::S => "S",
        };
        f.write_str(s)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "R" | "r" => Ok(Variant::R),
            "S" | "s" => Ok(Variant::S),
            other => Err(Error::Config(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Iid,
    Ood,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Iid, Split::Ood];

    /// Train and IID draw from the training sampling graph.
    pub fn uses_train_graph(self) -> bool {
        !matches!(self, Split::Ood)
    }

    /// Test splits are exact-deduplicated.
    pub fn deduplicated(self) -> bool {
        !matches!(self, Split::Train)
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Split::Train => "train.jsonl",
            Split::Iid => "iid.jsonl",
            Split::Ood => "ood.jsonl",
        }
    }

    pub(crate) fn stream_index(self) -> u64 {
        match self {
            Split::Train => 2,
            Split::Iid => 3,
            Split::Ood => 4,
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Split::Train => "train",
            Split::Iid => "iid",
            Split::Ood => "ood",
        };
        f.write_str(s)
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "iid" => Ok(Split::Iid),
            "ood" => Ok(Split::Ood),
            other => Err(Error::Config(format!("unknown split {other:?}"))),
        }
    }
}

/// Every knob of a generated task. `go_size` and `shared_symbols` are only
/// meaningful for variant S and must be `None` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    pub variant: Variant,
    pub num_symbols: usize,
    pub num_functions: usize,
    pub max_functions: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub go_size: Option<usize>,
    pub shared_symbols: Option<usize>,
    pub seed: u64,
}

pub const DEFAULT_NUM_SYMBOLS: usize = 8;
pub const DEFAULT_NUM_FUNCTIONS: usize = 32;
pub const DEFAULT_MAX_FUNCTIONS: usize = 6;
pub const DEFAULT_TRAIN_SIZE: usize = 300_000;
pub const DEFAULT_TEST_SIZE: usize = 1000;

impl Default for TaskConfig {
    fn default() -> Self {
        Self {
            variant: Variant::A,
            num_symbols: DEFAULT_NUM_SYMBOLS,
            num_functions: DEFAULT_NUM_FUNCTIONS,
            max_functions: DEFAULT_MAX_FUNCTIONS,
            train_size: DEFAULT_TRAIN_SIZE,
            test_size: DEFAULT_TEST_SIZE,
            go_size: None,
            shared_symbols: None,
            seed: 0,
        }
    }
}

impl TaskConfig {
    /// Default-sized config for variant A or R.
    pub fn new(variant: Variant, seed: u64) -> Self {
        Self {
            variant,
            seed,
            ..Self::default()
        }
    }

    /// Default-sized config for variant S.
    pub fn staged(go_size: usize, shared_symbols: usize, seed: u64) -> Self {
        Self {
            variant: Variant::S,
            go_size: Some(go_size),
            shared_symbols: Some(shared_symbols),
            seed,
            ..Self::default()
        }
    }

    pub fn go_size(&self) -> usize {
        self.go_size.unwrap_or(0)
    }

    pub fn shared_symbols(&self) -> usize {
        self.shared_symbols.unwrap_or(0)
    }

    pub fn split_size(&self, split: Split) -> usize {
        match split {
            Split::Train => self.train_size,
            Split::Iid | Split::Ood => self.test_size,
        }
    }

    /// Sizes of the path groups `Ga1, Ga2, Gb1, Gb2` of variant S. The
    /// remaining functions are split as evenly as possible; leftovers go to
    /// `Ga2`, then `Gb2`, then `Ga1`.
    pub fn path_group_sizes(&self) -> [usize; 4] {
        let rest = self.num_functions.saturating_sub(self.go_size());
        let mut sizes = [rest / 4; 4];
        for &i in [1, 3, 0].iter().take(rest % 4) {
            sizes[i] += 1;
        }
        sizes
    }

    /// Function counts a split may contain, ascending.
    pub fn lengths(&self, split: Split) -> Vec<usize> {
        match (self.variant, split) {
            (Variant::S, _) => (2..=self.max_functions).step_by(2).collect(),
            (_, Split::Ood) => (2..=self.max_functions).collect(),
            _ => (1..=self.max_functions).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.num_symbols == 0 {
            return fail("num_symbols must be at least 1".into());
        }
        if self.num_symbols > u32::MAX as usize || self.num_functions > u32::MAX as usize {
            return fail("alphabet or function count too large".into());
        }
        if self.max_functions == 0 {
            return fail("max_functions must be at least 1".into());
        }
        match self.variant {
            Variant::A | Variant::R => {
                if self.go_size.is_some() || self.shared_symbols.is_some() {
                    return fail(format!(
                        "go_size/shared_symbols only apply to variant S, not {}",
                        self.variant
                    ));
                }
                if self.num_functions < 2 || !self.num_functions.is_multiple_of(2) {
                    return fail(format!(
                        "variant {} needs an even number of functions (>= 2) to split into Ga/Gb, got {}",
                        self.variant, self.num_functions
                    ));
                }
                if self.max_functions < 2 {
                    return fail("max_functions must be at least 2 so the OOD split is non-empty".into());
                }
                let singles = self.num_functions * self.num_symbols;
                if self.train_size < singles {
                    return fail(format!(
                        "train_size {} is smaller than the {} mandatory single-function examples",
                        self.train_size, singles
                    ));
                }
            }
            Variant::S => {
                let (Some(go), Some(shared)) = (self.go_size, self.shared_symbols) else {
                    return fail("variant S requires go_size and shared_symbols".into());
                };
                if go > self.num_functions {
                    return fail(format!(
                        "go_size {go} exceeds num_functions {}",
                        self.num_functions
                    ));
                }
                let rest = self.num_functions - go;
                if rest < 4 {
                    return fail(format!(
                        "num_functions - go_size = {rest} leaves a path group empty (need at least 4)"
                    ));
                }
                if shared > self.num_symbols {
                    return fail(format!(
                        "shared_symbols {shared} exceeds num_symbols {}",
                        self.num_symbols
                    ));
                }
                if !(self.num_symbols + shared).is_multiple_of(2) {
                    return fail(format!(
                        "num_symbols + shared_symbols must be even, got {} + {shared}",
                        self.num_symbols
                    ));
                }
                if self.max_functions < 2 {
                    return fail("variant S needs max_functions >= 2".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setting() {
        let c = TaskConfig::default();
        assert_eq!(
            (c.num_symbols, c.num_functions, c.max_functions, c.train_size, c.test_size),
            (8, 32, 6, 300_000, 1000)
        );
        c.validate().unwrap();
    }

    #[test]
    fn staged_partition_arithmetic() {
        for go in 0..=28 {
            let c = TaskConfig::staged(go, 2, 0);
            c.validate().unwrap();
            let sizes = c.path_group_sizes();
            assert_eq!(sizes.iter().sum::<usize>() + go, 32);
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            assert!(sizes[1] >= sizes[0] && sizes[3] >= sizes[2]);
        }
        assert_eq!(TaskConfig::staged(2, 2, 0).path_group_sizes(), [7, 8, 7, 8]);
        assert_eq!(TaskConfig::staged(1, 2, 0).path_group_sizes(), [8, 8, 7, 8]);
        assert!(TaskConfig::staged(29, 2, 0).validate().is_err());
        assert!(TaskConfig::staged(32, 2, 0).validate().is_err());
        assert!(TaskConfig::staged(16, 3, 0).validate().is_err());
    }

    #[test]
    fn ar_rejects_overlap_knobs_and_odd_counts() {
        let mut c = TaskConfig::new(Variant::A, 0);
        c.go_size = Some(4);
        assert!(c.validate().is_err());
        let mut c = TaskConfig::new(Variant::R, 0);
        c.num_functions = 7;
        assert!(c.validate().is_err());
    }

    #[test]
    fn split_lengths() {
        let a = TaskConfig::new(Variant::A, 0);
        assert_eq!(a.lengths(Split::Train), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(a.lengths(Split::Ood), vec![2, 3, 4, 5, 6]);
        let s = TaskConfig::staged(8, 4, 0);
        assert_eq!(s.lengths(Split::Train), vec![2, 4, 6]);
        assert_eq!(s.lengths(Split::Ood), vec![2, 4, 6]);
    }
}
