//! Cross-module invariants checked against exhaustive or independent
//! computations on small random instances.

use submax_core::objectives::modular::ModularObjective;
use submax_core::objectives::tabular::table2_objective;
use submax_core::solvers::ceil_log2;
use submax_core::synthetic::random_tabular;
use submax_core::{
    brute_force_robust_opt, greedy_baseline, greedy_removal, optimal_removal, optimal_removal_with,
    osu, partition_layout, pro, robust_value, run_subroutine, verify_beta_iterative, AdversaryKind,
    BranchBoundOptions, ElementId, ElementSet, GroundSet, Objective, Oracle, SubroutineSpec,
};

fn full_set(n: usize) -> ElementSet {
    ElementSet::from_ids(n, (0..n as u32).map(ElementId))
}

/// Exhaustive maximum of f over size-k subsets, by direct bitmask
/// enumeration (independent of the library's subset machinery).
fn exhaustive_opt(obj: &dyn Objective, k: usize) -> f64 {
    let n = obj.ground_size();
    let mut best = 0.0_f64;
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        best = best.max(obj.value(&ElementSet::from_mask(n, mask)));
    }
    best
}

/// Exhaustive minimum of f(S \ Z) over Z ⊆ S with |Z| <= tau.
fn exhaustive_min_removal(obj: &dyn Objective, s: &ElementSet, tau: usize) -> f64 {
    let n = obj.ground_size();
    let members = s.to_vec();
    let mut worst = f64::INFINITY;
    for mask in 0u64..(1 << members.len()) {
        if mask.count_ones() as usize > tau {
            continue;
        }
        let mut residual = s.clone();
        for (i, &e) in members.iter().enumerate() {
            if mask & (1 << i) != 0 {
                residual.remove(e);
            }
        }
        worst = worst.min(obj.value(&ElementSet::from_mask(n, residual.mask())));
    }
    worst
}

#[test]
fn oracle_contract_on_random_instances() {
    for seed in 0..25 {
        let n = 4 + (seed as usize % 7); // up to 10
        let obj = random_tabular(n, seed);
        let oracle = Oracle::new(&obj);
        assert_eq!(oracle.evaluate(&ElementSet::empty(n)).unwrap(), 0.0);
        for mask in 0u64..(1 << n) {
            let s = ElementSet::from_mask(n, mask);
            let fs = oracle.evaluate(&s).unwrap();
            assert!(fs >= 0.0);
            for e in 0..n as u32 {
                let e = ElementId(e);
                if s.contains(e) {
                    continue;
                }
                // Monotone...
                let ft = oracle.evaluate(&s.with(e)).unwrap();
                assert!(ft >= fs - 1e-9);
                // ... and the marginal query agrees with the difference.
                let gain = oracle.marginal_gain(e, &s).unwrap();
                assert!((gain - (ft - fs)).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn submodularity_of_generated_instances() {
    // f(e|S) >= f(e|T) for S ⊆ T, checked over all nested pairs.
    for seed in 0..10 {
        let n = 6;
        let obj = random_tabular(n, 100 + seed);
        let oracle = Oracle::new(&obj);
        for small in 0u64..(1 << n) {
            for big in 0u64..(1 << n) {
                if small & big != small {
                    continue;
                }
                let s = ElementSet::from_mask(n, small);
                let t = ElementSet::from_mask(n, big);
                for e in 0..n as u32 {
                    let e = ElementId(e);
                    if t.contains(e) {
                        continue;
                    }
                    let gs = oracle.marginal_gain(e, &s).unwrap();
                    let gt = oracle.marginal_gain(e, &t).unwrap();
                    assert!(
                        gs >= gt - 1e-9,
                        "seed {seed}: f({e}|{small:#b}) < f({e}|{big:#b})"
                    );
                }
            }
        }
    }
}

#[test]
fn conditioned_view_stays_monotone_submodular() {
    let obj = random_tabular(6, 7);
    let oracle = Oracle::new(&obj);
    let base = ElementSet::from_mask(6, 0b010010);
    let cond = oracle.conditional_view(&base).unwrap();
    assert_eq!(cond.value(&ElementSet::empty(6)), 0.0);
    for small in 0u64..(1 << 6) {
        let s = ElementSet::from_mask(6, small);
        let fs = cond.value(&s);
        assert!(fs >= -1e-12);
        for e in 0..6u32 {
            let e = ElementId(e);
            if s.contains(e) {
                continue;
            }
            let diff = cond.value(&s.with(e)) - fs;
            assert!(diff >= -1e-9);
            assert!((cond.gain(e, &s) - diff).abs() <= 1e-9);
        }
    }
}

#[test]
fn lazy_greedy_equals_naive_with_fewer_evals() {
    for seed in 0..40 {
        let n = 5 + (seed as usize % 6); // up to 10
        let obj = random_tabular(n, 200 + seed);
        let k = 1 + (seed as usize % n);
        let naive_oracle = Oracle::new(&obj);
        let lazy_oracle = Oracle::new(&obj);
        let ground = full_set(n);
        let naive = run_subroutine(&SubroutineSpec::Greedy, &naive_oracle, &ground, k).unwrap();
        let lazy = run_subroutine(&SubroutineSpec::LazyGreedy, &lazy_oracle, &ground, k).unwrap();
        assert_eq!(naive.elements, lazy.elements, "seed {seed}");
        assert_eq!(naive.prefix_values, lazy.prefix_values, "seed {seed}");
        let naive_evals = naive_oracle.counts().marginal_evals;
        let lazy_evals = lazy_oracle.counts().marginal_evals;
        assert!(
            lazy_evals <= naive_evals,
            "seed {seed}: {lazy_evals} > {naive_evals}"
        );
        let expected: u64 = (0..k).map(|i| (n - i) as u64).sum();
        assert_eq!(naive_evals, expected);
        assert!(naive_evals <= (n * k) as u64);
    }
}

#[test]
fn greedy_certifies_beta_one_and_thresholding_its_epsilon() {
    for seed in 0..20 {
        let n = 5 + (seed as usize % 5);
        let obj = random_tabular(n, 300 + seed);
        let oracle = Oracle::new(&obj);
        let ground = full_set(n);
        let k = 1 + (seed as usize % n);
        let greedy = run_subroutine(&SubroutineSpec::Greedy, &oracle, &ground, k).unwrap();
        assert_eq!(
            verify_beta_iterative(&greedy, &oracle, &ground, 1.0).unwrap(),
            None,
            "seed {seed}"
        );
        for epsilon in [0.1, 0.3] {
            let spec = SubroutineSpec::Thresholding { epsilon };
            let sol = run_subroutine(&spec, &oracle, &ground, k).unwrap();
            assert_eq!(sol.len(), k);
            assert_eq!(
                verify_beta_iterative(&sol, &oracle, &ground, spec.beta().unwrap()).unwrap(),
                None,
                "seed {seed}, eps {epsilon}"
            );
        }
    }
}

#[test]
fn greedy_prefixes_meet_their_guarantee() {
    // f(A_l) >= (1 - e^{-l/k}) OPT(k) with exhaustive OPT.
    for seed in 0..30 {
        let n = 5 + (seed as usize % 6); // up to 10
        let k = 1 + (seed as usize % 4); // up to 4
        let obj = random_tabular(n, 400 + seed);
        let oracle = Oracle::new(&obj);
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full_set(n), k).unwrap();
        let opt = exhaustive_opt(&obj, k);
        for l in 1..=k {
            let bound = submax_core::near_greedy_prefix_bound(l, k, 1.0, opt);
            assert!(
                sol.prefix_values[l - 1] >= bound - 1e-9,
                "seed {seed}, l={l}: {} < {bound}",
                sol.prefix_values[l - 1]
            );
        }
    }
}

#[test]
fn optimal_adversary_is_exhaustively_exact() {
    for seed in 0..25 {
        let n = 6 + (seed as usize % 5); // up to 10
        let obj = random_tabular(n, 500 + seed);
        let oracle = Oracle::new(&obj);
        // Use the greedy solution as a representative removal target.
        let k = 3 + (seed as usize % (n - 2));
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full_set(n), k).unwrap();
        let s = sol.to_set(n);
        for tau in 0..=3.min(k) {
            let exact = exhaustive_min_removal(&obj, &s, tau);
            let bb = optimal_removal(&oracle, &s, tau).unwrap();
            assert_eq!(bb.residual_value, exact, "seed {seed}, tau {tau}");
            assert!(bb.removed.is_subset(&s));
            assert!(bb.removed.len() <= tau);
            // The returned removal reproduces its residual.
            let recompute = oracle.evaluate(&s.minus(&bb.removed)).unwrap();
            assert!((recompute - bb.residual_value).abs() <= 1e-12);
            // Greedy removal is feasible, hence no better.
            let greedy = greedy_removal(&oracle, &s, tau).unwrap();
            assert!(greedy.residual_value >= bb.residual_value - 1e-12);
        }
    }
}

#[test]
fn pruning_never_changes_the_residual() {
    for seed in 0..15 {
        let n = 8;
        let obj = random_tabular(n, 600 + seed);
        let oracle = Oracle::new(&obj);
        let s = ElementSet::from_mask(n, 0b11101110);
        for tau in 1..=3 {
            let pruned = optimal_removal_with(
                &oracle,
                &s,
                tau,
                BranchBoundOptions {
                    pruning: true,
                    ..Default::default()
                },
            )
            .unwrap();
            let unpruned = optimal_removal_with(
                &oracle,
                &s,
                tau,
                BranchBoundOptions {
                    pruning: false,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(
                pruned.residual_value, unpruned.residual_value,
                "seed {seed}"
            );
            assert!(pruned.nodes_explored.unwrap() <= unpruned.nodes_explored.unwrap());
        }
    }
}

#[test]
fn robust_value_is_monotone_in_tau() {
    let obj = random_tabular(8, 77);
    let oracle = Oracle::new(&obj);
    let s = ElementSet::from_mask(8, 0b10111011);
    let mut last = f64::INFINITY;
    for tau in 0..=s.len() {
        let v = robust_value(&oracle, &s, tau, AdversaryKind::Optimal).unwrap();
        assert!(v <= last + 1e-12, "tau {tau}");
        last = v;
    }
    assert_eq!(last, 0.0);
}

#[test]
fn brute_force_dominates_every_solver_output() {
    for seed in 0..10 {
        let n = 8;
        let k = 4;
        let tau = 2;
        let obj = random_tabular(n, 700 + seed);
        let oracle = Oracle::new(&obj);
        let ground = GroundSet::new(n).unwrap();
        let (_, opt_value) = brute_force_robust_opt(&oracle, k, tau).unwrap();
        let spec = SubroutineSpec::Greedy;
        for sol in [
            greedy_baseline(&oracle, &ground, k, &spec).unwrap(),
            pro(&oracle, &ground, k, tau, 1, &spec).unwrap(),
            osu(&oracle, &ground, k, tau, 1, &spec).unwrap(),
        ] {
            let v = robust_value(&oracle, &sol.selected, tau, AdversaryKind::Optimal).unwrap();
            assert!(
                opt_value >= v - 1e-12,
                "seed {seed}: brute force {opt_value} < solver {v}"
            );
        }
    }
}

/// Every partition keeps one bucket losing at most 2^i elements, for every
/// removal set of size <= tau.
#[test]
fn each_partition_keeps_a_lightly_hit_bucket() {
    for (tau, eta, k, n, seed) in [
        (2usize, 1usize, 6usize, 12usize, 1u64),
        (3, 1, 11, 14, 2),
        (4, 1, 12, 16, 3),
        (2, 2, 10, 14, 4),
    ] {
        let obj = random_tabular(n, 800 + seed);
        let oracle = Oracle::new(&obj);
        let ground = GroundSet::new(n).unwrap();
        let sol = pro(&oracle, &ground, k, tau, eta, &SubroutineSpec::Greedy).unwrap();
        let members = sol.selected.to_vec();
        let partitions = ceil_log2(tau) as usize + 1;
        for mask in 0u64..(1 << members.len()) {
            if mask.count_ones() as usize > tau {
                continue;
            }
            let mut removed = ElementSet::empty(n);
            for (i, &e) in members.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    removed.insert(e);
                }
            }
            for partition in 0..partitions {
                let light_bucket_exists = sol
                    .buckets
                    .iter()
                    .filter(|b| b.partition == partition)
                    .any(|b| {
                        let lost = b
                            .solution
                            .elements
                            .iter()
                            .filter(|e| removed.contains(**e))
                            .count();
                        lost <= (1 << partition)
                    });
                assert!(
                    light_bucket_exists,
                    "tau={tau} eta={eta} removal {mask:#b} hits every bucket of partition {partition} hard"
                );
            }
        }
    }
}

#[test]
fn layout_feasibility_is_sharp() {
    // partition_layout accepts exactly the (tau, k) pairs with s0 <= k.
    for tau in 1..=10usize {
        for eta in 1..=2usize {
            let s0: usize = (0..=ceil_log2(tau))
                .map(|i| {
                    let w = 1usize << i;
                    tau.div_ceil(w) * w * eta
                })
                .sum();
            assert!(partition_layout(tau, eta, s0).is_ok());
            assert!(partition_layout(tau, eta, s0 - 1).is_err());
        }
    }
}

#[test]
fn table2_robust_story_end_to_end() {
    // The counterexample in one place: greedy is fragile, the robust
    // solvers and the exhaustive optimum agree.
    let obj = table2_objective(10.0, 0.5).unwrap();
    let oracle = Oracle::new(&obj);
    let ground = GroundSet::new(3).unwrap();
    let spec = SubroutineSpec::Greedy;

    let greedy = greedy_baseline(&oracle, &ground, 2, &spec).unwrap();
    assert_eq!(
        robust_value(&oracle, &greedy.selected, 1, AdversaryKind::Optimal).unwrap(),
        0.5
    );

    let (opt_set, opt_value) = brute_force_robust_opt(&oracle, 2, 1).unwrap();
    assert_eq!(opt_set.to_vec(), vec![ElementId(0), ElementId(2)]);
    assert_eq!(opt_value, 9.0);

    for sol in [
        pro(&oracle, &ground, 2, 1, 1, &spec).unwrap(),
        osu(&oracle, &ground, 2, 1, 1, &spec).unwrap(),
    ] {
        assert_eq!(
            robust_value(&oracle, &sol.selected, 1, AdversaryKind::Optimal).unwrap(),
            9.0
        );
    }
}

#[test]
fn modular_robust_optimum_by_enumeration() {
    let obj = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
    let oracle = Oracle::new(&obj);
    let (s, v) = brute_force_robust_opt(&oracle, 2, 1).unwrap();
    assert_eq!(s.to_vec(), vec![ElementId(0), ElementId(1)]);
    assert_eq!(v, 2.0);
}
