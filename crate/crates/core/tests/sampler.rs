mod common;

use std::collections::BTreeMap;

use ctlpp::dataset::Task;
use ctlpp::sampler::{is_train_legal, pattern_label, PatternLabel, SamplingGraph};
use ctlpp::{GroupId, SeededStream, Split, TaskConfig, Variant};

const DRAWS: usize = 10_000;

fn within_3_sigma(count: usize, n: usize, p: f64) -> bool {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= 3.0 * sd.max(1e-9)
}

fn small(variant: Variant) -> TaskConfig {
    TaskConfig { num_symbols: 4, num_functions: 8, train_size: 1000, test_size: 100, ..TaskConfig::new(variant, 8) }
}

#[test]
fn ar_group_sequences_follow_brute_force_distribution() {
    for variant in [Variant::A, Variant::R] {
        let task = Task::new(small(variant)).unwrap();
        let manifest = task.generate_split(Split::Train).unwrap().manifest;
        let graph = SamplingGraph::build(variant);
        for (split, train) in [(Split::Train, true), (Split::Ood, false)] {
            // Each walk of length 3 has the same number of expressions, so
            // the sampler should be uniform over them.
            let walks: Vec<Vec<GroupId>> = if train {
                common::graph_walks(&graph, 3, |m| m.usable_in_train())
            } else {
                common::graph_walks(&graph, 3, |m| m.usable_in_test())
            }
            .into_iter()
            .filter(|w| w.len() == 3)
            .collect();
            let mut rng = SeededStream::new(1);
            let mut seen: BTreeMap<Vec<GroupId>, usize> = BTreeMap::new();
            let mut inputs = [0usize; 4];
            for _ in 0..DRAWS {
                let e = task.sample(split, 3, &mut rng).unwrap();
                let g: Vec<GroupId> = e.functions.iter().map(|f| manifest.functions[f.index()].group()).collect();
                *seen.entry(g).or_default() += 1;
                inputs[e.input.index()] += 1;
            }
            assert!(seen.keys().all(|k| walks.contains(k)), "{variant} {split}: off-graph sequence");
            for w in &walks {
                let c = seen.get(w).copied().unwrap_or(0);
                assert!(within_3_sigma(c, DRAWS, 1.0 / walks.len() as f64), "{variant} {split} {w:?}: {c}");
            }
            for c in inputs {
                assert!(within_3_sigma(c, DRAWS, 0.25));
            }
        }
    }
}

#[test]
fn s_overlap_use_rate_matches_exact_probability() {
    let config = TaskConfig { num_symbols: 8, num_functions: 16, train_size: 1000, test_size: 100, ..TaskConfig::staged(4, 2, 21) };
    let task = Task::new(config).unwrap();
    let m = task.generate_split(Split::Iid).unwrap().manifest;
    let group = |g: GroupId| m.functions.iter().filter(|t| t.group() == g).collect::<Vec<_>>();
    let overlap = m.overlap.as_ref().unwrap();
    // P(stage 2 is an overlap function) for a single pair.
    let mut p = 0.0;
    for (stage1, stage2, a) in [(GroupId::Ga1, GroupId::Ga2, true), (GroupId::Gb1, GroupId::Gb2, false)] {
        let (s1, s2) = (group(stage1), group(stage2));
        for input in 0..8 {
            for f in &s1 {
                let mid = f.mapping()[input];
                let eligible = overlap
                    .sets
                    .iter()
                    .filter(|s| if a { s.a.contains(&mid) } else { s.b.contains(&mid) })
                    .count();
                p += 0.5 / 8.0 / s1.len() as f64 * eligible as f64 / (s2.len() + eligible) as f64;
            }
        }
    }
    let mut rng = SeededStream::new(2);
    let mut hits = 0;
    for _ in 0..DRAWS {
        let e = task.sample(Split::Train, 2, &mut rng).unwrap();
        if m.functions[e.functions[1].index()].group() == GroupId::Go {
            hits += 1;
        }
    }
    assert!(within_3_sigma(hits, DRAWS, p), "{hits} overlap uses, expected {:.1}", p * DRAWS as f64);
}

#[test]
fn checker_agrees_with_samplers_on_10k_draws() {
    for config in [
        small(Variant::A),
        small(Variant::R),
        TaskConfig { num_symbols: 4, num_functions: 12, train_size: 1000, test_size: 100, ..TaskConfig::staged(4, 2, 3) },
    ] {
        let task = Task::new(config.clone()).unwrap();
        let graph = SamplingGraph::build(config.variant);
        let mut rng = SeededStream::new(4);
        for split in Split::ALL {
            let lengths = config.lengths(split);
            for i in 0..DRAWS {
                let e = task.sample(split, lengths[i % lengths.len()], &mut rng).unwrap();
                let legal = is_train_legal(&e, task.functions(), &graph, task.overlap());
                assert_eq!(legal, split != Split::Ood, "{} {split}: {e:?}", config.variant);
                let expected = if legal { PatternLabel::TrainLegal } else { PatternLabel::OodLegal };
                assert_eq!(pattern_label(&e, task.functions(), &graph, task.overlap()), Some(expected));
            }
        }
    }
}

#[test]
fn go_size_zero_keeps_pairs_on_one_path() {
    let config = TaskConfig { train_size: 10_000, ..TaskConfig::staged(0, 0, 6) };
    let ds = Task::new(config).unwrap().generate_split(Split::Train).unwrap();
    for ex in &ds.examples {
        let g: Vec<GroupId> = ex.expression.functions.iter().map(|f| ds.manifest.functions[f.index()].group()).collect();
        for p in g.chunks(2) {
            assert!(matches!((p[0], p[1]), (GroupId::Ga1, GroupId::Ga2) | (GroupId::Gb1, GroupId::Gb2)), "{g:?}");
        }
    }
}

#[test]
fn ood_s_pairs_all_cross_paths() {
    let config = TaskConfig { num_symbols: 4, num_functions: 12, train_size: 1000, test_size: 2000, ..TaskConfig::staged(4, 2, 3) };
    let ds = Task::new(config).unwrap().generate_split(Split::Ood).unwrap();
    for ex in &ds.examples {
        for p in ex.expression.functions.chunks(2) {
            let g = (ds.manifest.functions[p[0].index()].group(), ds.manifest.functions[p[1].index()].group());
            assert!(matches!(g, (GroupId::Ga1, GroupId::Gb2) | (GroupId::Gb1, GroupId::Ga2)), "{g:?}");
        }
        assert!(ex.target.index() < 4);
    }
}
