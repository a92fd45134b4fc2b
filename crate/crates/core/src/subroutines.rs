//! Greedy-family subroutines `A(k', V')` producing ordered solutions:
//! naive greedy, lazy greedy, thresholding greedy and stochastic greedy.
//!
//! All variants break ties between equal marginal gains by picking the
//! smallest element id, so naive and lazy greedy return identical orders
//! and runs are reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};
use crate::oracle::Oracle;

/// Slack used when verifying the per-iteration near-greedy inequality.
pub const BETA_TOLERANCE: f64 = 1e-9;

/// Which subroutine to run, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubroutineSpec {
    /// Exact argmax greedy; one marginal query per remaining candidate per
    /// iteration.
    Greedy,
    /// Same output as `Greedy`, fewer queries via stale upper bounds.
    LazyGreedy,
    /// Decreasing-threshold greedy; `epsilon ∈ (0, 1)`.
    Thresholding { epsilon: f64 },
    /// Best element of a random candidate sample per iteration;
    /// `epsilon ∈ (0, 1)`, reproducible for a fixed `seed`.
    Stochastic { epsilon: f64, seed: u64 },
}

impl SubroutineSpec {
    /// The factor in the near-greedy guarantee each variant certifies:
    /// 1 for (lazy) greedy, `1/(1-ε)` for thresholding. Stochastic greedy
    /// certifies none.
    pub fn beta(&self) -> Option<f64> {
        match self {
            SubroutineSpec::Greedy | SubroutineSpec::LazyGreedy => Some(1.0),
            SubroutineSpec::Thresholding { epsilon } => Some(1.0 / (1.0 - epsilon)),
            SubroutineSpec::Stochastic { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SubroutineSpec::Thresholding { epsilon }
            | SubroutineSpec::Stochastic { epsilon, .. } => {
                if !(*epsilon > 0.0 && *epsilon < 1.0) {
                    return Err(Error::Config(format!(
                        "epsilon must lie in (0, 1), got {epsilon}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SubroutineSpec::Greedy => "greedy".into(),
            SubroutineSpec::LazyGreedy => "lazy_greedy".into(),
            SubroutineSpec::Thresholding { epsilon } => format!("thresholding(eps={epsilon})"),
            SubroutineSpec::Stochastic { epsilon, .. } => format!("stochastic(eps={epsilon})"),
        }
    }
}

/// The ordered output `(v_1, ..., v_l)` of a subroutine together with the
/// prefix objective values `f({v_1, ..., v_i})`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedSolution {
    pub elements: Vec<ElementId>,
    pub prefix_values: Vec<f64>,
}

impl OrderedSolution {
    fn empty() -> Self {
        OrderedSolution {
            elements: Vec::new(),
            prefix_values: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Final objective value `f(A_l)`; zero for the empty solution.
    pub fn value(&self) -> f64 {
        self.prefix_values.last().copied().unwrap_or(0.0)
    }

    pub fn to_set(&self, universe: usize) -> ElementSet {
        ElementSet::from_ids(universe, self.elements.iter().copied())
    }
}

/// Runs the chosen subroutine on `ground` with cardinality `k`, returning
/// exactly `k` elements. If every remaining candidate has zero gain the
/// solution is still filled to `k` (smallest ids first) so that callers
/// relying on exact bucket sizes stay consistent.
pub fn run_subroutine(
    spec: &SubroutineSpec,
    oracle: &Oracle,
    ground: &ElementSet,
    k: usize,
) -> Result<OrderedSolution> {
    spec.validate()?;
    if k > ground.len() {
        return Err(Error::Infeasible(format!(
            "cannot select {k} elements from a ground set of {}",
            ground.len()
        )));
    }
    if k == 0 {
        return Ok(OrderedSolution::empty());
    }
    match spec {
        SubroutineSpec::Greedy => naive_greedy(oracle, ground, k),
        SubroutineSpec::LazyGreedy => lazy_greedy(oracle, ground, k),
        SubroutineSpec::Thresholding { epsilon } => thresholding(oracle, ground, k, *epsilon),
        SubroutineSpec::Stochastic { epsilon, seed } => {
            stochastic(oracle, ground, k, *epsilon, *seed)
        }
    }
}

fn naive_greedy(oracle: &Oracle, ground: &ElementSet, k: usize) -> Result<OrderedSolution> {
    let mut candidates: Vec<ElementId> = ground.iter().collect();
    let mut selected = ElementSet::empty(oracle.ground_size());
    let mut solution = OrderedSolution::empty();
    let mut value = 0.0;
    for _ in 0..k {
        let mut best: Option<(f64, usize)> = None;
        for (pos, &e) in candidates.iter().enumerate() {
            let gain = oracle.marginal_gain(e, &selected)?;
            // Strict > keeps the smallest id among ties (ascending scan).
            if best.is_none_or(|(bg, _)| gain > bg) {
                best = Some((gain, pos));
            }
        }
        let (gain, pos) = best.expect("k <= |ground| guarantees a candidate");
        let e = candidates.remove(pos);
        selected.insert(e);
        value += gain;
        solution.elements.push(e);
        solution.prefix_values.push(value);
    }
    Ok(solution)
}

/// Heap entry ordered by (gain descending, id ascending).
struct Scored {
    gain: f64,
    id: ElementId,
    /// Number of selected elements when `gain` was computed; a popped entry
    /// whose generation is current needs no refresh.
    generation: usize,
}

impl PartialEq for Scored {
    fn eq(&self, other: &Self) -> bool {
        self.gain == other.gain && self.id == other.id
    }
}
impl Eq for Scored {}
impl PartialOrd for Scored {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .partial_cmp(&other.gain)
            .expect("marginal gains must not be NaN")
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn lazy_greedy(oracle: &Oracle, ground: &ElementSet, k: usize) -> Result<OrderedSolution> {
    let mut selected = ElementSet::empty(oracle.ground_size());
    let mut solution = OrderedSolution::empty();
    let mut value = 0.0;
    let mut heap = BinaryHeap::with_capacity(ground.len());
    for e in ground.iter() {
        heap.push(Scored {
            gain: oracle.marginal_gain(e, &selected)?,
            id: e,
            generation: 0,
        });
    }
    while solution.len() < k {
        let top = heap.pop().expect("heap holds all unselected candidates");
        let gain = if top.generation == solution.len() {
            top.gain
        } else {
            let refreshed = oracle.marginal_gain(top.id, &selected)?;
            let entry = Scored {
                gain: refreshed,
                id: top.id,
                generation: solution.len(),
            };
            // Stale bounds only overestimate, so if the refreshed entry
            // still beats the next head it is the true argmax.
            match heap.peek() {
                Some(next) if entry.cmp(next) == Ordering::Less => {
                    heap.push(entry);
                    continue;
                }
                _ => refreshed,
            }
        };
        selected.insert(top.id);
        value += gain;
        solution.elements.push(top.id);
        solution.prefix_values.push(value);
    }
    Ok(solution)
}

fn thresholding(
    oracle: &Oracle,
    ground: &ElementSet,
    k: usize,
    epsilon: f64,
) -> Result<OrderedSolution> {
    let candidates: Vec<ElementId> = ground.iter().collect();
    let mut selected = ElementSet::empty(oracle.ground_size());
    let mut solution = OrderedSolution::empty();
    let mut value = 0.0;

    let mut w_start = 0.0_f64;
    for &e in &candidates {
        w_start = w_start.max(oracle.marginal_gain(e, &selected)?);
    }
    let floor = epsilon / ground.len() as f64 * w_start;
    let mut w = w_start;
    while solution.len() < k && w >= floor && w > 0.0 {
        for &e in &candidates {
            if solution.len() == k {
                break;
            }
            if selected.contains(e) {
                continue;
            }
            let gain = oracle.marginal_gain(e, &selected)?;
            if gain >= w {
                selected.insert(e);
                value += gain;
                solution.elements.push(e);
                solution.prefix_values.push(value);
            }
        }
        w *= 1.0 - epsilon;
    }
    // Fill any remaining slots with exact greedy picks.
    while solution.len() < k {
        let mut best: Option<(f64, ElementId)> = None;
        for &e in &candidates {
            if selected.contains(e) {
                continue;
            }
            let gain = oracle.marginal_gain(e, &selected)?;
            if best.is_none_or(|(bg, _)| gain > bg) {
                best = Some((gain, e));
            }
        }
        let (gain, e) = best.expect("unselected candidates remain while len < k");
        selected.insert(e);
        value += gain;
        solution.elements.push(e);
        solution.prefix_values.push(value);
    }
    Ok(solution)
}

fn stochastic(
    oracle: &Oracle,
    ground: &ElementSet,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<OrderedSolution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample_size = ((ground.len() as f64 / k as f64) * (1.0 / epsilon).ln()).ceil() as usize;
    let sample_size = sample_size.max(1);

    let mut remaining: Vec<ElementId> = ground.iter().collect();
    let mut selected = ElementSet::empty(oracle.ground_size());
    let mut solution = OrderedSolution::empty();
    let mut value = 0.0;
    for _ in 0..k {
        let m = sample_size.min(remaining.len());
        let mut sampled: Vec<usize> =
            rand::seq::index::sample(&mut rng, remaining.len(), m).into_vec();
        // Ascending scan keeps the smallest-id tie break.
        sampled.sort_unstable();
        let mut best: Option<(f64, usize)> = None;
        for &pos in &sampled {
            let gain = oracle.marginal_gain(remaining[pos], &selected)?;
            if best.is_none_or(|(bg, _)| gain > bg) {
                best = Some((gain, pos));
            }
        }
        let (gain, pos) = best.expect("sample is non-empty");
        let e = remaining.remove(pos);
        selected.insert(e);
        value += gain;
        solution.elements.push(e);
        solution.prefix_values.push(value);
    }
    Ok(solution)
}

/// Checks the near-greedy property of an ordered solution: every step's
/// gain must be at least `1/beta` of the best marginal over `ground` at
/// that point, up to [`BETA_TOLERANCE`]. Returns `None` when the property
/// holds and the first violating step index otherwise. The maximum is
/// taken exhaustively, so this is for test-scale instances only.
pub fn verify_beta_iterative(
    solution: &OrderedSolution,
    oracle: &Oracle,
    ground: &ElementSet,
    beta: f64,
) -> Result<Option<usize>> {
    let mut prefix = ElementSet::empty(oracle.ground_size());
    let mut previous = 0.0;
    for (i, &e) in solution.elements.iter().enumerate() {
        let mut best = 0.0_f64;
        for v in ground.iter() {
            best = best.max(oracle.marginal_gain(v, &prefix)?);
        }
        prefix.insert(e);
        let current = oracle.evaluate(&prefix)?;
        if current - previous < best / beta - BETA_TOLERANCE {
            return Ok(Some(i));
        }
        previous = current;
    }
    Ok(None)
}

/// The guaranteed value of an `l`-step prefix of a near-greedy run against
/// the best `k`-element set: `(1 - e^(-l/(beta k))) * opt_value`.
pub fn near_greedy_prefix_bound(l: usize, k: usize, beta: f64, opt_value: f64) -> f64 {
    (1.0 - (-(l as f64) / (beta * k as f64)).exp()) * opt_value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::modular::ModularObjective;
    use crate::objectives::tabular::table2_objective;

    fn full(n: usize) -> ElementSet {
        ElementSet::from_ids(n, (0..n as u32).map(ElementId))
    }

    #[test]
    fn greedy_on_modular_picks_by_weight() {
        let obj = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
        let oracle = Oracle::new(&obj);
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(3), 2).unwrap();
        assert_eq!(sol.elements, vec![ElementId(0), ElementId(1)]);
        assert_eq!(sol.prefix_values, vec![3.0, 5.0]);
    }

    #[test]
    fn greedy_on_table2_selects_s1_s2() {
        let obj = table2_objective(10.0, 0.5).unwrap();
        let oracle = Oracle::new(&obj);
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(3), 2).unwrap();
        assert_eq!(sol.elements, vec![ElementId(0), ElementId(1)]);
        assert_eq!(sol.value(), 10.5);
    }

    #[test]
    fn greedy_on_reduced_ground_prefers_s3() {
        // f({s3}) = 9 > f({s2}) = 0.5 on the fresh function.
        let obj = table2_objective(10.0, 0.5).unwrap();
        let oracle = Oracle::new(&obj);
        let ground = ElementSet::from_ids(3, [ElementId(1), ElementId(2)]);
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &ground, 1).unwrap();
        assert_eq!(sol.elements, vec![ElementId(2)]);
        assert_eq!(sol.value(), 9.0);
    }

    #[test]
    fn k_zero_and_infeasible() {
        let obj = ModularObjective::new(vec![1.0, 2.0]).unwrap();
        let oracle = Oracle::new(&obj);
        let sol = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(2), 0).unwrap();
        assert!(sol.is_empty());
        assert!(matches!(
            run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(2), 3),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn zero_gains_still_fill_smallest_first() {
        let obj = ModularObjective::new(vec![0.0, 0.0, 5.0, 0.0]).unwrap();
        let oracle = Oracle::new(&obj);
        for spec in [SubroutineSpec::Greedy, SubroutineSpec::LazyGreedy] {
            let sol = run_subroutine(&spec, &oracle, &full(4), 3).unwrap();
            assert_eq!(sol.elements, vec![ElementId(2), ElementId(0), ElementId(1)]);
        }
    }

    #[test]
    fn naive_eval_count_is_sum_of_remaining() {
        let obj = ModularObjective::new(vec![5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        let oracle = Oracle::new(&obj);
        let n = 5;
        let k = 3;
        run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(n), k).unwrap();
        let expected: u64 = (0..k).map(|i| (n - i) as u64).sum();
        assert_eq!(oracle.counts().marginal_evals, expected);
    }

    #[test]
    fn lazy_matches_naive_on_table2() {
        let obj = table2_objective(10.0, 0.5).unwrap();
        let naive_oracle = Oracle::new(&obj);
        let lazy_oracle = Oracle::new(&obj);
        let naive = run_subroutine(&SubroutineSpec::Greedy, &naive_oracle, &full(3), 3).unwrap();
        let lazy = run_subroutine(&SubroutineSpec::LazyGreedy, &lazy_oracle, &full(3), 3).unwrap();
        assert_eq!(naive.elements, lazy.elements);
        assert_eq!(naive.prefix_values, lazy.prefix_values);
        assert!(lazy_oracle.counts().marginal_evals <= naive_oracle.counts().marginal_evals);
    }

    #[test]
    fn thresholding_respects_its_certificate() {
        let obj = table2_objective(10.0, 0.5).unwrap();
        let oracle = Oracle::new(&obj);
        let spec = SubroutineSpec::Thresholding { epsilon: 0.2 };
        let sol = run_subroutine(&spec, &oracle, &full(3), 2).unwrap();
        assert_eq!(sol.len(), 2);
        let check = Oracle::new(&obj);
        assert_eq!(
            verify_beta_iterative(&sol, &check, &full(3), spec.beta().unwrap()).unwrap(),
            None
        );
    }

    #[test]
    fn stochastic_is_reproducible() {
        let obj = ModularObjective::new((0..20).map(|i| i as f64 * 0.25).collect()).unwrap();
        let oracle = Oracle::new(&obj);
        let spec = SubroutineSpec::Stochastic {
            epsilon: 0.3,
            seed: 99,
        };
        let a = run_subroutine(&spec, &oracle, &full(20), 6).unwrap();
        let b = run_subroutine(&spec, &oracle, &full(20), 6).unwrap();
        assert_eq!(a, b);
        let other = run_subroutine(
            &SubroutineSpec::Stochastic {
                epsilon: 0.3,
                seed: 100,
            },
            &oracle,
            &full(20),
            6,
        )
        .unwrap();
        assert_eq!(other.len(), 6);
    }

    #[test]
    fn stochastic_stays_within_its_query_budget() {
        let n = 100;
        let k = 10;
        let epsilon = 0.2;
        let obj = ModularObjective::new((0..n).map(|i| (i % 13) as f64).collect()).unwrap();
        let oracle = Oracle::new(&obj);
        let spec = SubroutineSpec::Stochastic { epsilon, seed: 4 };
        let sol = run_subroutine(&spec, &oracle, &full(n), k).unwrap();
        assert_eq!(sol.len(), k);
        let sample_size = ((n as f64 / k as f64) * (1.0 / epsilon).ln()).ceil() as u64;
        let budget = k as u64 * sample_size;
        let evals = oracle.counts().marginal_evals;
        assert!(evals <= budget, "{evals} > {budget}");
        // Far below the full-scan count.
        let naive: u64 = (0..k).map(|i| (n - i) as u64).sum();
        assert!(evals < naive);
    }

    #[test]
    fn epsilon_out_of_range_rejected() {
        let obj = ModularObjective::new(vec![1.0, 2.0]).unwrap();
        let oracle = Oracle::new(&obj);
        for eps in [0.0, 1.0, -0.5, 1.5] {
            assert!(run_subroutine(
                &SubroutineSpec::Thresholding { epsilon: eps },
                &oracle,
                &full(2),
                1
            )
            .is_err());
        }
    }

    #[test]
    fn beta_check_flags_bad_first_pick() {
        let obj = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
        let oracle = Oracle::new(&obj);
        let bad = OrderedSolution {
            elements: vec![ElementId(2), ElementId(0)],
            prefix_values: vec![1.0, 4.0],
        };
        assert_eq!(
            verify_beta_iterative(&bad, &oracle, &full(3), 1.0).unwrap(),
            Some(0)
        );
        let good = run_subroutine(&SubroutineSpec::Greedy, &oracle, &full(3), 2).unwrap();
        assert_eq!(
            verify_beta_iterative(&good, &oracle, &full(3), 1.0).unwrap(),
            None
        );
    }

    #[test]
    fn prefix_bound_values() {
        // l = k, beta = 1: 1 - 1/e.
        let b = near_greedy_prefix_bound(4, 4, 1.0, 1.0);
        assert!((b - 0.6321205588285577).abs() < 1e-15);
        assert_eq!(near_greedy_prefix_bound(0, 4, 1.0, 1.0), 0.0);
        // l = 2k, beta = 2: same exponent.
        let c = near_greedy_prefix_bound(8, 4, 2.0, 1.0);
        assert!((c - b).abs() < 1e-15);
    }

    #[test]
    fn beta_of_specs() {
        assert_eq!(SubroutineSpec::Greedy.beta(), Some(1.0));
        assert_eq!(SubroutineSpec::LazyGreedy.beta(), Some(1.0));
        let t = SubroutineSpec::Thresholding { epsilon: 0.2 };
        assert!((t.beta().unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(
            SubroutineSpec::Stochastic {
                epsilon: 0.2,
                seed: 0
            }
            .beta(),
            None
        );
    }
}
