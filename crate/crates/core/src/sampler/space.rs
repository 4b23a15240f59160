//! Size and enumeration of the distinct expressions a split can produce.

use crate::config::{Split, Variant};
use crate::fnalg::{Expression, FunctionId, FunctionSet, GroupId, Path, Symbol};

use super::{ar_alternates, stage2_candidates, OverlapSpec};

/// Group sequences an A/R split can produce at `length`.
fn ar_group_sequences(variant: Variant, split: Split, length: usize) -> Vec<Vec<GroupId>> {
    let alternate = ar_alternates(variant, split);
    let mut out = Vec::new();
    for start in [GroupId::Ga, GroupId::Gb] {
        let seq: Vec<GroupId> = (0..length)
            .map(|i| {
                if alternate && i % 2 == 1 {
                    start.other_ar().unwrap()
                } else {
                    start
                }
            })
            .collect();
        if !out.contains(&seq) {
            out.push(seq);
        }
    }
    out
}

fn ar_applicable(variant: Variant, split: Split, length: usize) -> bool {
    variant != Variant::S && length >= 1 && !(split == Split::Ood && length < 2)
}

fn s_applicable(variant: Variant, length: usize) -> bool {
    variant == Variant::S && length >= 2 && length.is_multiple_of(2)
}

/// Number of distinct expressions (input symbol included) of `length`
/// functions the split's sampler can produce. Saturates at `u128::MAX`.
pub fn count_expressions(
    variant: Variant,
    split: Split,
    length: usize,
    functions: &FunctionSet,
    overlap: Option<&OverlapSpec>,
) -> u128 {
    let n = functions.num_symbols() as u128;
    if ar_applicable(variant, split, length) {
        let per_input: u128 = ar_group_sequences(variant, split, length)
            .iter()
            .map(|seq| {
                seq.iter().fold(1u128, |acc, &g| {
                    acc.saturating_mul(functions.members(g).len() as u128)
                })
            })
            .fold(0u128, u128::saturating_add);
        return per_input.saturating_mul(n);
    }
    if !s_applicable(variant, length) {
        return 0;
    }
    let Some(overlap) = overlap else { return 0 };
    // ways[s] = number of prefixes ending in symbol s
    let mut ways = vec![1u128; functions.num_symbols()];
    for _ in 0..length / 2 {
        let mut next = vec![0u128; ways.len()];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for path in [Path::A, Path::B] {
                for &f in functions.members(path.stage1()) {
                    let mid = functions.table(f).apply(Symbol(s as u32));
                    for g in stage2_candidates(split, path, mid, functions, overlap) {
                        let out = functions.table(g).apply(mid).index();
                        next[out] = next[out].saturating_add(w);
                    }
                }
            }
        }
        ways = next;
    }
    ways.into_iter().fold(0u128, u128::saturating_add)
}

/// Every distinct expression counted by [`count_expressions`], in a fixed
/// order (input symbol outermost). Only call this for small spaces.
pub fn enumerate_expressions(
    variant: Variant,
    split: Split,
    length: usize,
    functions: &FunctionSet,
    overlap: Option<&OverlapSpec>,
) -> Vec<Expression> {
    let mut out = Vec::new();
    let inputs = (0..functions.num_symbols() as u32).map(Symbol);
    if ar_applicable(variant, split, length) {
        let sequences = ar_group_sequences(variant, split, length);
        for input in inputs {
            for seq in &sequences {
                let members: Vec<&[FunctionId]> = seq.iter().map(|&g| functions.members(g)).collect();
                cartesian(&members, &mut Vec::with_capacity(length), &mut |ids| {
                    out.push(Expression::new(input, ids.to_vec()));
                });
            }
        }
    } else if s_applicable(variant, length) {
        if let Some(overlap) = overlap {
            for input in inputs {
                staged(split, length / 2, input, input, functions, overlap, &mut Vec::new(), &mut out);
            }
        }
    }
    out
}

fn cartesian(choices: &[&[FunctionId]], prefix: &mut Vec<FunctionId>, emit: &mut impl FnMut(&[FunctionId])) {
    match choices.split_first() {
        None => emit(prefix),
        Some((first, rest)) => {
            for &f in *first {
                prefix.push(f);
                cartesian(rest, prefix, emit);
                prefix.pop();
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn staged(
    split: Split,
    pairs_left: usize,
    input: Symbol,
    current: Symbol,
    functions: &FunctionSet,
    overlap: &OverlapSpec,
    prefix: &mut Vec<FunctionId>,
    out: &mut Vec<Expression>,
) {
    if pairs_left == 0 {
        out.push(Expression::new(input, prefix.clone()));
        return;
    }
    for path in [Path::A, Path::B] {
        for &f in functions.members(path.stage1()) {
            let mid = functions.table(f).apply(current);
            for g in stage2_candidates(split, path, mid, functions, overlap) {
                prefix.extend([f, g]);
                let next = functions.table(g).apply(mid);
                staged(split, pairs_left - 1, input, next, functions, overlap, prefix, out);
                prefix.truncate(prefix.len() - 2);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TaskConfig;
    use crate::fnalg::build_functions;
    use crate::rng::SeededStream;

    fn set(config: &TaskConfig) -> (FunctionSet, Option<OverlapSpec>) {
        let mut rng = SeededStream::new(config.seed);
        let fs = FunctionSet::new(build_functions(config, &mut rng).unwrap()).unwrap();
        let o = (config.variant == Variant::S)
            .then(|| OverlapSpec::build(config, fs.members(GroupId::Go), &mut rng).unwrap());
        (fs, o)
    }

    #[test]
    fn tiny_alternating_spaces() {
        let config = TaskConfig {
            num_symbols: 2,
            num_functions: 2,
            ..TaskConfig::new(Variant::A, 0)
        };
        let (fs, _) = set(&config);
        // 2 inputs x 2 group orders x 1 function per group
        assert_eq!(count_expressions(Variant::A, Split::Train, 2, &fs, None), 4);
        assert_eq!(enumerate_expressions(Variant::A, Split::Train, 2, &fs, None).len(), 4);
        let config = TaskConfig {
            num_symbols: 2,
            num_functions: 4,
            ..TaskConfig::new(Variant::A, 0)
        };
        let (fs, _) = set(&config);
        assert_eq!(count_expressions(Variant::A, Split::Train, 2, &fs, None), 2 * 2 * 2 * 2);
        assert_eq!(enumerate_expressions(Variant::A, Split::Train, 2, &fs, None).len(), 16);
    }

    #[test]
    fn counts_match_enumeration() {
        for config in [
            TaskConfig { num_symbols: 3, num_functions: 6, ..TaskConfig::new(Variant::A, 1) },
            TaskConfig { num_symbols: 3, num_functions: 6, ..TaskConfig::new(Variant::R, 2) },
            TaskConfig { num_symbols: 4, num_functions: 10, ..TaskConfig::staged(2, 2, 3) },
            TaskConfig { num_symbols: 4, num_functions: 8, ..TaskConfig::staged(4, 0, 4) },
        ] {
            let (fs, o) = set(&config);
            for split in Split::ALL {
                for len in 1..=4 {
                    let listed = enumerate_expressions(config.variant, split, len, &fs, o.as_ref());
                    let mut dedup = listed.clone();
                    dedup.sort();
                    dedup.dedup();
                    assert_eq!(dedup.len(), listed.len());
                    assert_eq!(
                        count_expressions(config.variant, split, len, &fs, o.as_ref()),
                        listed.len() as u128,
                        "{:?} {split} len {len}",
                        config.variant
                    );
                }
            }
        }
    }

    #[test]
    fn singles_space_is_full_grid() {
        let config = TaskConfig::new(Variant::R, 0);
        let (fs, _) = set(&config);
        assert_eq!(count_expressions(Variant::R, Split::Train, 1, &fs, None), 256);
        assert_eq!(count_expressions(Variant::R, Split::Ood, 1, &fs, None), 0);
    }
}
