use qalbp::formulation::{build_qubo, check_feasibility, decode, estimate_penalties, Qubo};
use qalbp::instances::{fixture, generate_instance, load_fixture_suite, make_instance, Instance};
use qalbp::solvers::{brute_force_qubo, simulated_annealing, solve_exact_bpp, AnnealParams};

fn qubo_of(inst: &Instance) -> Qubo {
    let p = estimate_penalties(inst, inst.n(), 0.9).unwrap();
    build_qubo(inst, &p, inst.n()).unwrap()
}

fn small_fixtures() -> Vec<Instance> {
    load_fixture_suite()
        .into_iter()
        .filter(|i| i.n() <= 4)
        .collect()
}

#[test]
fn brute_force_ground_state_is_optimal_packing() {
    for inst in small_fixtures() {
        let q = qubo_of(&inst);
        let (bits, energy) = brute_force_qubo(&q).unwrap();
        assert!((q.energy(&bits).unwrap() - energy).abs() < 1e-9);
        let a = decode(&bits, q.layout.unwrap()).unwrap();
        assert!(check_feasibility(&inst, &a).feasible, "{}", inst.name());
        let (opt, _) = solve_exact_bpp(&inst).unwrap();
        assert_eq!(a.bins_used, opt.num_bins(), "{}", inst.name());
    }
}

#[test]
fn three_item_ground_states() {
    // [4, 8, 8] and [5, 8, 6] admit no pair that fits in C = 10.
    let expected = [
        ("(3, 23)", 2),
        ("(3, 42)", 2),
        ("(3, 123)", 3),
        ("(3, 90)", 2),
        ("(3, 510)", 3),
    ];
    for (name, bins) in expected {
        let inst = fixture(name).unwrap();
        let q = qubo_of(&inst);
        assert_eq!(q.num_vars, 12);
        let (bits, _) = brute_force_qubo(&q).unwrap();
        let a = decode(&bits, q.layout.unwrap()).unwrap();
        assert!(check_feasibility(&inst, &a).feasible);
        assert_eq!(a.bins_used, bins, "{name}");
    }
}

#[test]
fn annealing_matches_brute_force_on_small_fixtures() {
    let mut equal = 0;
    let mut runs = 0;
    for inst in small_fixtures() {
        let q = qubo_of(&inst);
        let (_, ground) = brute_force_qubo(&q).unwrap();
        for seed in 0..10 {
            let best = simulated_annealing(&q, &AnnealParams::with_seed(seed))
                .unwrap()
                .best()
                .energy;
            assert!(best >= ground - 1e-9, "{} seed {seed}", inst.name());
            if (best - ground).abs() <= 1e-9 {
                equal += 1;
            }
            runs += 1;
        }
    }
    assert!(equal * 100 >= runs * 99, "{equal}/{runs}");
}

#[test]
fn annealing_never_beats_brute_force_on_random_qubos() {
    for seed in 0..20 {
        let inst = generate_instance(3, 1, 9, 10, seed).unwrap();
        let q = qubo_of(&inst);
        let (_, ground) = brute_force_qubo(&q).unwrap();
        let params = AnnealParams {
            num_reads: 20,
            sweeps_per_read: 50,
            ..AnnealParams::with_seed(seed)
        };
        let set = simulated_annealing(&q, &params).unwrap();
        for s in &set.samples {
            assert!(s.energy >= ground - 1e-9);
        }
    }
}

#[test]
fn annealing_is_independent_of_thread_count() {
    let q = qubo_of(&fixture("(6, 90)").unwrap());
    let params = AnnealParams {
        num_reads: 64,
        sweeps_per_read: 200,
        ..AnnealParams::with_seed(5)
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulated_annealing(&q, &params).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.total_reads(), 64);
    let again = run(1);
    assert_eq!(a.samples, again.samples);
}

#[test]
fn annealing_samples_are_sorted_and_consistent() {
    let q = qubo_of(&fixture("(5, 42)").unwrap());
    let params = AnnealParams {
        num_reads: 50,
        sweeps_per_read: 100,
        ..AnnealParams::with_seed(9)
    };
    let set = simulated_annealing(&q, &params).unwrap();
    assert!(set.samples.windows(2).all(|w| w[0].energy <= w[1].energy));
    for s in &set.samples {
        assert!((q.energy(&s.bits).unwrap() - s.energy).abs() <= 1e-9);
    }
    assert_eq!(set.best(), &set.samples[0]);
}

#[test]
fn five_item_fixture_anneals_to_optimum() {
    // Weights sum to 33 with C = 10, so four bins are necessary.
    let inst = fixture("(5, 23)").unwrap();
    let q = qubo_of(&inst);
    let (opt, _) = solve_exact_bpp(&inst).unwrap();
    assert_eq!(opt.num_bins(), 4);
    for seed in 1..=5 {
        let set = simulated_annealing(&q, &AnnealParams::with_seed(seed)).unwrap();
        let a = decode(&set.best().bits, q.layout.unwrap()).unwrap();
        assert!(check_feasibility(&inst, &a).feasible, "seed {seed}");
        assert_eq!(a.bins_used, 4, "seed {seed}");
    }
}

#[test]
fn exact_solver_examples() {
    assert_eq!(
        solve_exact_bpp(&fixture("(3, 23)").unwrap())
            .unwrap()
            .0
            .num_bins(),
        2
    );
    assert_eq!(
        solve_exact_bpp(&fixture("(6, 42)").unwrap())
            .unwrap()
            .0
            .num_bins(),
        6
    );
    let single = make_instance("full", &[10], 10).unwrap();
    assert_eq!(solve_exact_bpp(&single).unwrap().0.num_bins(), 1);
}

#[test]
fn exact_solver_handles_twenty_items() {
    let inst = generate_instance(20, 2, 7, 10, 3).unwrap();
    let (sol, _) = solve_exact_bpp(&inst).unwrap();
    assert!(sol.is_valid(&inst));
    assert!(sol.num_bins() as u64 >= qalbp::l1_lower_bound(&inst));
    let too_big = generate_instance(21, 2, 7, 10, 3).unwrap();
    assert!(solve_exact_bpp(&too_big).is_err());
}
