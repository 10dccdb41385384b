use qalbp::bench::{
    export_results, feasibility_ratio, import_results, run_suite_with, summarize, BinPolicy,
    ResultFormat, SolverKind,
};
use qalbp::instances::{
    first_fit_decreasing, fixture, generate_instance, l1_lower_bound, load_fixture_suite,
    load_instances, make_instance, save_instance, save_suite,
};
use qalbp::solvers::AnnealParams;

#[test]
fn instance_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("(7, 42)").unwrap();
    let one = dir.path().join("one.json");
    save_instance(&inst, &one).unwrap();
    assert_eq!(load_instances(&one).unwrap(), vec![inst]);

    let suite = load_fixture_suite();
    let all = dir.path().join("suite.json");
    save_suite(&suite, &all).unwrap();
    assert_eq!(load_instances(&all).unwrap(), suite);
}

#[test]
fn malformed_instance_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "capacity": 10, "weights": [11]}"#).unwrap();
    let err = load_instances(&path).unwrap_err();
    assert!(err.to_string().contains("item 0 exceeds capacity"), "{err}");
    std::fs::write(&path, "not json").unwrap();
    assert!(load_instances(&path).is_err());
}

#[test]
fn generated_instances_are_reproducible_and_in_range() {
    for seed in 0..50 {
        let a = generate_instance(10, 4, 10, 10, seed).unwrap();
        assert_eq!(a, generate_instance(10, 4, 10, 10, seed).unwrap());
        assert!(a.weights().iter().all(|&w| (4..=10).contains(&w)));
        let ffd = first_fit_decreasing(&a);
        assert!(ffd.is_valid(&a));
        assert!(ffd.num_bins() as u64 >= l1_lower_bound(&a));
    }
    assert_eq!(
        generate_instance(3, 7, 7, 10, 1).unwrap().weights(),
        &[7, 7, 7]
    );
    assert!(generate_instance(3, 8, 4, 10, 1).is_err());
    assert!(generate_instance(3, 4, 11, 10, 1).is_err());
}

#[test]
fn ffd_examples() {
    let inst = make_instance("t", &[4, 8, 6], 10).unwrap();
    let ffd = first_fit_decreasing(&inst);
    assert_eq!(ffd.num_bins(), 2);
    assert_eq!(ffd.bins, vec![vec![1], vec![2, 0]]);
    let wide = fixture("(6, 42)").unwrap();
    assert_eq!(first_fit_decreasing(&wide).num_bins(), 6);
}

fn quick_params(seed: u64) -> AnnealParams {
    AnnealParams {
        num_reads: 30,
        sweeps_per_read: 200,
        ..AnnealParams::with_seed(seed)
    }
}

#[test]
fn suite_run_is_reproducible_and_summarized() {
    let suite: Vec<_> = load_fixture_suite()
        .into_iter()
        .filter(|i| i.n() <= 4)
        .collect();
    let solvers = [SolverKind::Sa, SolverKind::ExactBpp, SolverKind::ExactQubo];
    let run = || run_suite_with(&suite, &solvers, &quick_params(4), BinPolicy::Ffd).unwrap();
    let a = run();
    let b = run();
    assert_eq!(a.len(), suite.len() * 3);
    let strip = |rs: &[qalbp::bench::SolveRecord]| {
        rs.iter()
            .map(|r| {
                (
                    r.instance_name.clone(),
                    r.solver,
                    r.bins_used,
                    r.feasible,
                    r.energy,
                    r.opt_gap,
                )
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));

    for r in a.iter().filter(|r| r.solver == SolverKind::ExactBpp) {
        assert!(r.feasible);
        assert_eq!(r.opt_gap, Some(0));
    }
    let ratios = feasibility_ratio(&a, SolverKind::ExactBpp).unwrap();
    assert_eq!(ratios.keys().copied().collect::<Vec<_>>(), vec![3, 4]);
    assert!(ratios.values().all(|&v| v == 1.0));
    let classes = summarize(&a, SolverKind::Sa).unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| c.instances == 5));
}

#[test]
fn results_round_trip_through_files() {
    let suite: Vec<_> = load_fixture_suite()
        .into_iter()
        .filter(|i| i.n() == 4)
        .collect();
    let records = run_suite_with(
        &suite,
        &[SolverKind::Sa, SolverKind::ExactBpp],
        &quick_params(1),
        BinPolicy::ItemCount,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (name, format) in [
        ("r.json", ResultFormat::Structured),
        ("r.csv", ResultFormat::Csv),
    ] {
        let path = dir.path().join(name);
        export_results(&records, &path, format).unwrap();
        let back = import_results(&path).unwrap();
        assert_eq!(back.len(), records.len(), "{name}");
        for (x, y) in back.iter().zip(&records) {
            assert_eq!(x.instance_name, y.instance_name);
            assert_eq!(x.solver, y.solver);
            assert_eq!(x.bins_used, y.bins_used);
            assert_eq!(x.feasible, y.feasible);
            assert_eq!(x.opt_gap, y.opt_gap);
        }
    }
}

#[test]
fn empty_suite_is_an_error() {
    assert!(run_suite_with(&[], &[SolverKind::Sa], &quick_params(0), BinPolicy::Ffd).is_err());
}
