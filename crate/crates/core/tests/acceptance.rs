//! Acceptance criteria. Each test prints one `[PASS]` / `[FAIL]` line.
//!
//! Run with `cargo test -p qalbp --test acceptance -- --nocapture` to see the
//! report lines.

use std::sync::OnceLock;

use qalbp::bench::{run_suite, SolveRecord, SolverKind};
use qalbp::formulation::{
    build_qubo, count_variables, decode, direct_energy, estimate_penalties, first_n_exceeding,
    Formulation,
};
use qalbp::instances::{first_fit_decreasing, l1_lower_bound, load_fixture_suite, make_instance};
use qalbp::solvers::{brute_force_qubo, solve_exact_bpp, AnnealParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, title: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {title} ({detail})");
}

#[test]
fn c1_penalty_reproduction() {
    // The reported values are for w_min = 4, C = 10. Fixtures with a larger
    // minimum weight are held to the calibration identities instead.
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut worst_identity = 0.0f64;
    let mut reference = 0;
    for inst in load_fixture_suite() {
        let p = estimate_penalties(&inst, inst.n(), 0.9).unwrap();
        assert_eq!(p.theta, 2.0);
        assert_eq!(p.gamma, 1.0);
        let w = inst.min_weight() as f64;
        let c = inst.capacity() as f64;
        for (&l, &r) in p.lambda.iter().zip(&p.rho) {
            // overfilling by w_min costs exactly 1; a half-full bin costs 0
            worst_identity = worst_identity
                .max((w * l + w * w * r - 1.0).abs())
                .max((-(c / 2.0) * l + (c * c / 4.0) * r).abs());
        }
        if inst.min_weight() != 4 {
            continue;
        }
        reference += 1;
        for (&l, &r) in p.lambda.iter().zip(&p.rho) {
            worst.0 = worst.0.max((l - 0.1389).abs());
            worst.1 = worst.1.max((r - 0.0278).abs());
        }
        worst.2 = worst.2.max((p.delta - 0.15).abs());
    }
    let pass = reference > 0
        && worst.0 <= 1e-4
        && worst.1 <= 1e-4
        && worst.2 <= 1e-3
        && worst_identity <= 1e-12;
    report(
        1,
        "penalty reproduction",
        pass,
        &format!(
            "{reference} fixtures with w_min = 4: max |dlambda| = {:.2e}, |drho| = {:.2e}, \
             |ddelta| = {:.2e}; identity residual on all 40 = {worst_identity:.2e}",
            worst.0, worst.1, worst.2
        ),
    );
    assert!(pass);
}

#[test]
fn c2_expansion_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for inst in load_fixture_suite() {
        let m = inst.n();
        let p = estimate_penalties(&inst, m, 0.9).unwrap();
        let q = build_qubo(&inst, &p, m).unwrap();
        let layout = q.layout.unwrap();
        for _ in 0..1000 {
            let bits: Vec<bool> = (0..q.num_vars).map(|_| rng.gen()).collect();
            let a = decode(&bits, layout).unwrap();
            let diff = (q.energy(&bits).unwrap() - direct_energy(&inst, &p, &a)).abs();
            worst = worst.max(diff);
            checked += 1;
        }
    }
    let pass = worst <= 1e-9;
    report(
        2,
        "expansion correctness",
        pass,
        &format!("{checked} bitstrings, max |diff| = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c3_ground_state_feasibility() {
    let mut failures = Vec::new();
    let mut count = 0;
    for inst in load_fixture_suite().into_iter().filter(|i| i.n() <= 4) {
        let m = inst.n();
        let p = estimate_penalties(&inst, m, 0.9).unwrap();
        let q = build_qubo(&inst, &p, m).unwrap();
        assert!(q.num_vars <= 20);
        let (bits, _) = brute_force_qubo(&q).unwrap();
        let a = decode(&bits, q.layout.unwrap()).unwrap();
        let feasible = qalbp::check_feasibility(&inst, &a).feasible;
        let (opt, _) = solve_exact_bpp(&inst).unwrap();
        if !feasible || a.bins_used != opt.num_bins() {
            failures.push(format!(
                "{}: feasible={feasible} bins={} opt={}",
                inst.name(),
                a.bins_used,
                opt.num_bins()
            ));
        }
        count += 1;
    }
    let pass = count == 10 && failures.is_empty();
    report(
        3,
        "ground-state feasibility, n in {3, 4}",
        pass,
        &format!("{count} fixtures, failures: {failures:?}"),
    );
    assert!(pass);
}

const SA_SEEDS: [u64; 3] = [1, 2, 3];

/// SA and exact records for every fixture, once per seed, at default
/// parameters (1000 reads, 1000 sweeps). Shared by criteria 4 and 5.
fn sa_runs() -> &'static Vec<Vec<SolveRecord>> {
    static RUNS: OnceLock<Vec<Vec<SolveRecord>>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let suite = load_fixture_suite();
        SA_SEEDS
            .iter()
            .map(|&seed| {
                run_suite(
                    &suite,
                    &[SolverKind::Sa, SolverKind::ExactBpp],
                    &AnnealParams::with_seed(seed),
                )
                .unwrap()
            })
            .collect()
    })
}

fn sa_records(run: &[SolveRecord]) -> Vec<&SolveRecord> {
    run.iter().filter(|r| r.solver == SolverKind::Sa).collect()
}

#[test]
fn c4_sa_feasibility_ratio() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (seed, run) in SA_SEEDS.iter().zip(sa_runs()) {
        let sa = sa_records(run);
        assert_eq!(sa.len(), 40);
        let feasible = sa.iter().filter(|r| r.feasible).count();
        let infeasible: Vec<&str> = sa
            .iter()
            .filter(|r| !r.feasible)
            .map(|r| r.instance_name.as_str())
            .collect();
        pass &= feasible >= 38;
        detail.push(format!("seed {seed}: {feasible}/40 {infeasible:?}"));
    }
    report(4, "SA feasibility ratio >= 38/40", pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn c5_sa_solution_quality() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (seed, run) in SA_SEEDS.iter().zip(sa_runs()) {
        let sa = sa_records(run);
        let optimal = sa
            .iter()
            .filter(|r| r.feasible && r.opt_gap == Some(0))
            .count();
        let over = sa
            .iter()
            .filter(|r| r.opt_gap.unwrap() > 1)
            .map(|r| r.instance_name.as_str())
            .collect::<Vec<_>>();
        let off: Vec<String> = sa
            .iter()
            .filter(|r| !(r.feasible && r.opt_gap == Some(0)))
            .map(|r| format!("{}:{:+}", r.instance_name, r.opt_gap.unwrap()))
            .collect();
        pass &= optimal >= 36 && over.is_empty();
        detail.push(format!("seed {seed}: {optimal}/40 optimal, off {off:?}"));
    }
    report(
        5,
        "SA solution quality >= 36/40 optimal, never above opt + 1",
        pass,
        &detail.join("; "),
    );
    assert!(pass);
}

#[test]
fn c6_bounds_chain() {
    let mut pass = true;
    for inst in load_fixture_suite() {
        let l1 = l1_lower_bound(&inst) as usize;
        let (opt, _) = solve_exact_bpp(&inst).unwrap();
        let ffd = first_fit_decreasing(&inst);
        pass &= opt.is_valid(&inst) && l1 <= opt.num_bins() && opt.num_bins() <= ffd.num_bins();
    }
    let witness = make_instance("witness", &[9, 9, 9, 9, 7, 4], 10).unwrap();
    let (opt, _) = solve_exact_bpp(&witness).unwrap();
    let strict = l1_lower_bound(&witness) == 5 && opt.num_bins() == 6;
    pass &= strict;
    report(
        6,
        "bounds chain L1 <= OPT <= FFD",
        pass,
        &format!("40 fixtures, strict witness L1=5 OPT={}", opt.num_bins()),
    );
    assert!(pass);
}

#[test]
fn c7_variable_counts() {
    let mut pass = true;
    for n in 3..=10u64 {
        for c in [10u64, 15, 20] {
            let qal = count_variables(Formulation::QalBp, n, n, c);
            let pseudo = count_variables(Formulation::PseudoPolynomial, n, n, c);
            pass &= qal == n * (n + 1) && pseudo - qal == n * c;
        }
    }
    pass &= count_variables(Formulation::QalBp, 13, 13, 10) < 5640;
    let crossings: Vec<u64> = [10u64, 15, 20]
        .iter()
        .map(|&c| first_n_exceeding(Formulation::PseudoPolynomial, c, 5640))
        .collect();
    pass &= crossings.windows(2).all(|w| w[0] >= w[1]);
    report(
        7,
        "variable counts",
        pass,
        &format!("qal_bp(13) = 182, pseudo-polynomial crossings for C = 10/15/20: {crossings:?}"),
    );
    assert!(pass);
}

#[test]
fn c8_declared_not_reproducible() {
    // Hardware-bound results (absolute TTS, QPU feasibility, chain breaks,
    // physical qubit counts) have no desk-scale counterpart.
    println!("[PASS] criterion 8: hardware-bound results declared out of scope (covered by 2-6)");
}
