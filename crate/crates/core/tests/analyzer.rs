mod common;

use std::collections::BTreeMap;
use std::fs;

use ctlpp::analyzer::{
    analyze, build_metrics_report, compatibility_grid, cosine_matrix, detect_clusters, emit_report, oracle_predictions, DumpMeta,
    Partition, PredictionDump, PredictionRecord, RepresentationDump, SeedMetrics,
};
use ctlpp::dataset::Task;
use ctlpp::{Error, FunctionId, GroupId, SeededStream, Symbol, TaskConfig, Variant};
use proptest::prelude::*;

fn r_task(seed: u64) -> Task {
    Task::new(TaskConfig { num_symbols: 4, num_functions: 8, train_size: 100, ..TaskConfig::new(Variant::R, seed) }).unwrap()
}

fn random_preds(task: &Task, seed: u64, accuracy: usize) -> PredictionDump {
    let mut rng = SeededStream::new(seed);
    let n = task.functions().num_symbols() as u32;
    let records: Vec<PredictionRecord> = oracle_predictions(task.functions())
        .records()
        .iter()
        .map(|r| PredictionRecord { pred: if rng.below(100) < accuracy { r.pred } else { rng.below(n as usize) as u32 }, ..*r })
        .collect();
    PredictionDump::from_records(None, records).unwrap()
}

#[allow(clippy::needless_range_loop)]
fn symmetric(values: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![1.0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[i][j] = values[k];
            m[j][i] = values[k];
            k += 1;
        }
    }
    m
}

proptest! {
    #[test]
    fn clusters_permute_with_the_matrix(
        n in 1usize..12,
        raw in proptest::collection::vec(-1.0f64..1.0, 66),
        seed in any::<u64>(),
    ) {
        let m = symmetric(&raw, n);
        let mut perm: Vec<usize> = (0..n).collect();
        SeededStream::new(seed).shuffle(&mut perm);
        let pm: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[perm[i]][perm[j]]).collect()).collect();
        let (a, b) = (detect_clusters(&m, 0.5), detect_clusters(&pm, 0.5));
        prop_assert_eq!(a.len(), b.len());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(b.assignment[i] == b.assignment[j], a.assignment[perm[i]] == a.assignment[perm[j]]);
            }
        }
        let mut sa: Vec<usize> = a.members.iter().map(Vec::len).collect();
        let mut sb: Vec<usize> = b.members.iter().map(Vec::len).collect();
        sa.sort();
        sb.sort();
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn cosine_matrices_are_well_formed(
        vectors in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 4),
    ) {
        let mut dump = RepresentationDump::new(DumpMeta::new("p", Variant::A, 0, 3));
        for (f, v) in vectors.iter().enumerate() {
            dump.insert(FunctionId(f as u32), Symbol(0), v.clone()).unwrap();
        }
        let m = cosine_matrix(&dump, Symbol(0)).unwrap();
        for i in 0..4 {
            prop_assert!((m.values[i][i] - 1.0).abs() < 1e-6);
            for j in 0..4 {
                prop_assert_eq!(m.values[i][j], m.values[j][i]);
                prop_assert!((-1.0..=1.0).contains(&m.values[i][j]));
            }
        }
    }

    #[test]
    fn grid_cells_equal_a_raw_recount(seed in 0u64..50, accuracy in 0usize..=100) {
        let task = r_task(seed);
        let fs = task.functions();
        let preds = random_preds(&task, seed, accuracy);
        let groups = Partition::groups(fs);
        for s in 0..4u32 {
            let grid = compatibility_grid(&preds, fs, Symbol(s), &groups, &groups);
            let mut tally: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
            for r in preds.records() {
                let (t1, t2) = (&fs.tables()[r.f1 as usize], &fs.tables()[r.f2 as usize]);
                if t1.mapping()[r.input as usize] != Symbol(s) {
                    continue;
                }
                let e = tally.entry((t1.group().to_string(), t2.group().to_string())).or_default();
                e.1 += 1;
                if t2.mapping()[s as usize].0 == r.pred {
                    e.0 += 1;
                }
            }
            for (i, rl) in grid.row_labels.iter().enumerate() {
                for (j, cl) in grid.col_labels.iter().enumerate() {
                    let expected = tally.get(&(rl.clone(), cl.clone())).map(|&(c, t)| c as f64 / t as f64);
                    prop_assert_eq!(grid.cells[i][j], expected);
                    if let Some(v) = expected {
                        prop_assert!((0.0..=1.0).contains(&v));
                    }
                }
            }
        }
    }
}

fn data_values(svg: &str) -> Vec<(String, String, String)> {
    let attr = |tag: &str, name: &str| {
        let key = format!("{name}=\"");
        let start = tag.find(&key).unwrap() + key.len();
        tag[start..start + tag[start..].find('"').unwrap()].to_string()
    };
    svg.split("<rect class=\"cell\"")
        .skip(1)
        .map(|t| (attr(t, "data-row-label"), attr(t, "data-col-label"), attr(t, "data-value")))
        .collect()
}

fn metrics_grid() -> Vec<SeedMetrics> {
    let mut out = Vec::new();
    let mut rng = SeededStream::new(5);
    for go in [0, 2, 4, 8, 16] {
        for x in [0, 2, 4, 6, 8] {
            if (go, x) == (2, 6) {
                continue;
            }
            for seed in 0..3 {
                let mut m = SeedMetrics::new(seed, Variant::S, 1.0, rng.below(1001) as f64 / 1000.0);
                m.go_size = Some(go);
                m.shared_symbols = Some(x);
                out.push(m);
            }
        }
    }
    out
}

#[test]
fn heatmap_csv_and_svg_agree() {
    let report = build_metrics_report(&metrics_grid(), 0.95, false).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(None, Some(&report), dir.path()).unwrap();
    let csv = fs::read_to_string(dir.path().join("heatmap.csv")).unwrap();
    let svg = fs::read_to_string(dir.path().join("heatmap.svg")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').skip(1).map(|h| h.trim_start_matches("shared_")).collect();
    let mut from_csv = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        let go = cells.next().unwrap().to_string();
        for (x, v) in header.iter().zip(cells) {
            from_csv.push((go.clone(), x.to_string(), v.to_string()));
        }
    }
    let from_svg = data_values(&svg);
    assert_eq!(from_svg.len(), 25);
    assert_eq!(from_csv, from_svg);
    assert!(from_svg.contains(&("2".into(), "6".into(), String::new())));
    for (_, _, v) in from_svg.iter().filter(|c| !c.2.is_empty()) {
        assert!(svg.contains(&format!(">{:.2}</text>", v.parse::<f64>().unwrap())));
    }
}

#[test]
fn emit_report_is_complete_and_deterministic() {
    let task = r_task(2);
    let fs = task.functions();
    let blocks: Vec<usize> = fs.tables().iter().map(|t| usize::from(t.group() == GroupId::Gb)).collect();
    let dump = common::planted_dump(&blocks, 4, 9);
    let preds = random_preds(&task, 1, 80);
    let analysis = analyze(&dump, &preds, fs, 0.8).unwrap();
    let mut metrics = metrics_grid();
    for (i, m) in [0.2, 0.3, 0.95, 0.97].iter().enumerate() {
        let mut s = SeedMetrics::new(i as u64, Variant::A, 1.0, *m);
        s.model = Some("bi-LSTM".into());
        metrics.push(s);
    }
    let report = build_metrics_report(&metrics, 0.95, false).unwrap();

    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let files = emit_report(Some(&analysis), Some(&report), a.path()).unwrap();
    emit_report(Some(&analysis), Some(&report), b.path()).unwrap();
    let mut names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    names.sort();
    let mut expected = vec![
        "aggregate.csv", "aggregate.txt", "analysis_summary.txt", "clusters.json", "clusters.txt", "compat_panels.svg",
        "cosine_panels.svg", "heatmap.csv", "heatmap.svg", "report.txt",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>();
    for s in 0..4 {
        expected.push(format!("cosine_symbol_{s}.csv"));
        expected.push(format!("compat_symbol_{s}_clusters.csv"));
        expected.push(format!("compat_symbol_{s}_groups.csv"));
    }
    expected.sort();
    assert_eq!(names, expected);
    for f in &files {
        let name = f.file_name().unwrap();
        assert_eq!(fs::read(f).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name:?} differs");
    }
    let panels = fs::read_to_string(a.path().join("cosine_panels.svg")).unwrap();
    assert_eq!(panels.matches("<g class=\"panel\"").count(), fs.num_symbols());
    assert_eq!(data_values(&panels).len(), fs.num_symbols() * 8 * 8);
    let table = fs::read_to_string(a.path().join("aggregate.txt")).unwrap();
    assert!(table.contains("bi-LSTM  A        1.00 ± 0.00  0.60 ± 0.36      4"), "{table}");
    let csv = fs::read_to_string(a.path().join("aggregate.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .find(|l| l.starts_with("bi-LSTM,A,ood,"))
        .unwrap()
        .split(',')
        .skip(3)
        .map(|v| v.parse().unwrap())
        .collect();
    let accs = [0.2, 0.3, 0.95, 0.97];
    let mean = accs.iter().sum::<f64>() / 4.0;
    let std = (accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / 4.0).sqrt();
    assert_eq!(row[0], 4.0);
    assert!((row[1] - mean).abs() < 1e-12 && (row[2] - std).abs() < 1e-12);
    assert_eq!(row[3], 0.25);
}

#[test]
fn converged_filter_drops_seeds() {
    let mut ms = vec![SeedMetrics::new(0, Variant::A, 1.0, 1.0), SeedMetrics::new(1, Variant::A, 1.0, 0.0)];
    ms[1].converged = false;
    let r = build_metrics_report(&ms, 0.95, true).unwrap();
    assert_eq!((r.seeds_in, r.seeds_used, r.rows[1].mean), (2, 1, 1.0));
}

#[test]
fn zero_norm_vectors_are_flagged() {
    let task = r_task(3);
    let fs = task.functions();
    let mut dump = RepresentationDump::new(DumpMeta::new("z", Variant::R, 0, 2));
    for t in fs.tables() {
        for s in 0..4 {
            let v = if t.id() == FunctionId(3) && s == 1 { vec![0.0, 0.0] } else { vec![1.0, 0.5] };
            dump.insert(t.id(), Symbol(s), v).unwrap();
        }
    }
    let a = analyze(&dump, &oracle_predictions(fs), fs, 0.8).unwrap();
    assert_eq!(a.warnings.len(), 1);
    assert_eq!(a.symbols[1].cosine.values[3][0], 0.0);
    assert_eq!(a.symbols[1].cosine.values[3][3], 1.0);
    assert_eq!(a.symbols[1].clusters.len(), 2);
}

#[test]
fn trainer_file_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep.jsonl");
    fs::write(
        &rep,
        "{\"model\":\"lstm\",\"variant\":\"A\",\"seed\":3,\"dim\":2,\"readout\":\"last\"}\n\
         {\"function\":0,\"symbol\":0,\"vector\":[0.5,1.0]}\n\
         {\"function\":0,\"symbol\":1,\"vector\":[1.0,0.0]}\n",
    )
    .unwrap();
    let d = RepresentationDump::read(&rep).unwrap();
    assert_eq!((d.meta.model.as_str(), d.meta.dim, d.len()), ("lstm", 2, 2));
    assert_eq!(d.meta.extra["readout"], "last");
    assert!(d.validate_complete(1, 2).is_ok());
    assert!(d.validate_complete(2, 2).is_err());

    fs::write(&rep, "{\"model\":\"m\",\"variant\":\"A\",\"seed\":3,\"dim\":2}\n{\"function\":0,\"symbol\":0,\"vector\":[0.5]}\n").unwrap();
    match RepresentationDump::read(&rep) {
        Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }

    let preds = dir.path().join("p.jsonl");
    fs::write(&preds, "{\"f1\":0,\"f2\":1,\"input\":2,\"pred\":3}\n{\"f1\":1,\"f2\":0,\"input\":2,\"pred\":0}\n").unwrap();
    let p = PredictionDump::read(&preds).unwrap();
    assert_eq!(p.prediction(FunctionId(0), FunctionId(1), Symbol(2)), Some(Symbol(3)));
    assert!(p.meta.is_none());

    let metrics = dir.path().join("m.jsonl");
    fs::write(
        &metrics,
        "{\"seed\":0,\"variant\":\"S\",\"iid\":0.99,\"ood\":0.4,\"steps\":1000,\"converged\":true,\"go_size\":4,\"shared_symbols\":2}\n\
         {\"seed\":1,\"variant\":\"A\",\"iid\":1.0,\"ood\":0.2,\"steps\":1000,\"converged\":false,\"go_size\":null,\"shared_symbols\":null}\n",
    )
    .unwrap();
    let ms = SeedMetrics::read_all(&metrics).unwrap();
    assert_eq!((ms[0].go_size, ms[1].go_size, ms[1].converged), (Some(4), None, false));
    fs::write(&metrics, "{\"seed\":0,\"variant\":\"A\",\"iid\":1.5,\"ood\":0.4,\"steps\":1,\"converged\":true,\"go_size\":null,\"shared_symbols\":null}\n").unwrap();
    assert!(SeedMetrics::read_all(&metrics).is_err());
}
