//! Adversaries: worst-case and greedy removals from a solution set, the
//! robust objective value, and a brute-force robust optimum for
//! verification.
//!
//! The optimal adversary minimizes `f(S \ Z)` over `|Z| <= tau` by
//! depth-first branch and bound. Finding that minimizer is a cardinality-
//! constrained submodular minimization, so exact search is intended for
//! desk scale only (roughly `|S| <= 60`, `tau <= 8`).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};
use crate::oracle::Oracle;

/// Default branch-and-bound node budget before giving up with the
/// incumbent attached.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryKind {
    Optimal,
    Greedy,
}

impl AdversaryKind {
    pub fn label(&self) -> &'static str {
        match self {
            AdversaryKind::Optimal => "optimal",
            AdversaryKind::Greedy => "greedy",
        }
    }
}

/// A removal set and the residual objective value it leaves behind.
#[derive(Clone, Debug)]
pub struct RemovalResult {
    pub removed: ElementSet,
    pub residual_value: f64,
    pub kind: AdversaryKind,
    /// Branch-and-bound node count; `None` for the greedy adversary.
    pub nodes_explored: Option<u64>,
}

/// Iteratively removes, `tau` times, the element whose removal hurts the
/// objective most (ties to the smallest id).
pub fn greedy_removal(oracle: &Oracle, s: &ElementSet, tau: usize) -> Result<RemovalResult> {
    if tau > s.len() {
        return Err(Error::Domain(format!(
            "cannot remove {tau} elements from a set of {}",
            s.len()
        )));
    }
    let mut current = s.clone();
    let mut removed = ElementSet::empty(s.universe_size());
    let mut residual = oracle.evaluate(&current)?;
    for _ in 0..tau {
        let mut best: Option<(f64, ElementId)> = None;
        for e in current.iter() {
            let value = oracle.evaluate(&current.without(e))?;
            if best.is_none_or(|(bv, _)| value < bv) {
                best = Some((value, e));
            }
        }
        let (value, e) = best.expect("tau <= |S| guarantees a candidate");
        current.remove(e);
        removed.insert(e);
        residual = value;
    }
    Ok(RemovalResult {
        removed,
        residual_value: residual,
        kind: AdversaryKind::Greedy,
        nodes_explored: None,
    })
}

/// Knobs for [`optimal_removal_with`]; the defaults match
/// [`optimal_removal`].
#[derive(Clone, Copy, Debug)]
pub struct BranchBoundOptions {
    pub pruning: bool,
    pub node_budget: u64,
}

impl Default for BranchBoundOptions {
    fn default() -> Self {
        BranchBoundOptions {
            pruning: true,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Search<'a, 'o> {
    oracle: &'a Oracle<'o>,
    order: Vec<ElementId>,
    opts: BranchBoundOptions,
    nodes: u64,
    budget_hit: bool,
    best_value: f64,
    best_removed: ElementSet,
}

impl Search<'_, '_> {
    /// Explores completions of the partial removal `removed` (already
    /// applied to `current`), deciding elements `order[idx..]` with
    /// `budget` removals left.
    fn dfs(
        &mut self,
        idx: usize,
        budget: usize,
        current: &mut ElementSet,
        removed: &mut ElementSet,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            self.budget_hit = true;
            return Ok(());
        }
        if budget == 0 || idx == self.order.len() {
            let value = self.oracle.evaluate(current)?;
            if value < self.best_value {
                self.best_value = value;
                self.best_removed = removed.clone();
            }
            return Ok(());
        }
        let pool = &self.order[idx..];
        if pool.len() <= budget {
            // Monotonicity: removing everything still allowed is the best
            // completion in this subtree.
            let mut leaf = current.clone();
            let mut leaf_removed = removed.clone();
            for &e in pool {
                leaf.remove(e);
                leaf_removed.insert(e);
            }
            let value = self.oracle.evaluate(&leaf)?;
            if value < self.best_value {
                self.best_value = value;
                self.best_removed = leaf_removed;
            }
            return Ok(());
        }
        if self.opts.pruning {
            // Lower bound on the residual of any completion: removing a set
            // R from A = current loses at most the sum of the |R| largest
            // marginals f(e | A \ pool), by submodularity.
            let mut base = current.clone();
            for &e in pool {
                base.remove(e);
            }
            let value_here = self.oracle.evaluate(current)?;
            let mut marginals = Vec::with_capacity(pool.len());
            for &e in pool {
                marginals.push(self.oracle.marginal_gain(e, &base)?);
            }
            marginals.sort_unstable_by(|a, b| b.partial_cmp(a).expect("gains are not NaN"));
            let worst_loss: f64 = marginals.iter().take(budget).sum();
            if value_here - worst_loss >= self.best_value {
                return Ok(());
            }
        }
        let e = self.order[idx];
        current.remove(e);
        removed.insert(e);
        self.dfs(idx + 1, budget - 1, current, removed)?;
        removed.remove(e);
        current.insert(e);
        if self.budget_hit {
            return Ok(());
        }
        self.dfs(idx + 1, budget, current, removed)
    }
}

/// Exact minimizer of `f(S \ Z)` over `Z ⊆ S`, `|Z| <= tau`, via branch
/// and bound seeded with the greedy adversary's removal.
pub fn optimal_removal(oracle: &Oracle, s: &ElementSet, tau: usize) -> Result<RemovalResult> {
    optimal_removal_with(oracle, s, tau, BranchBoundOptions::default())
}

pub fn optimal_removal_with(
    oracle: &Oracle,
    s: &ElementSet,
    tau: usize,
    opts: BranchBoundOptions,
) -> Result<RemovalResult> {
    if tau > s.len() {
        return Err(Error::Domain(format!(
            "cannot remove {tau} elements from a set of {}",
            s.len()
        )));
    }
    if tau == 0 {
        return Ok(RemovalResult {
            removed: ElementSet::empty(s.universe_size()),
            residual_value: oracle.evaluate(s)?,
            kind: AdversaryKind::Optimal,
            nodes_explored: Some(0),
        });
    }
    let incumbent = greedy_removal(oracle, s, tau)?;

    // Branch on high-impact elements first: decreasing f(e | S \ {e}),
    // ties to the smallest id.
    let mut order: Vec<(f64, ElementId)> = Vec::with_capacity(s.len());
    for e in s.iter() {
        order.push((oracle.marginal_gain(e, &s.without(e))?, e));
    }
    order.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("gains are not NaN")
            .then_with(|| a.1.cmp(&b.1))
    });

    let mut search = Search {
        oracle,
        order: order.into_iter().map(|(_, e)| e).collect(),
        opts,
        nodes: 0,
        budget_hit: false,
        best_value: incumbent.residual_value,
        best_removed: incumbent.removed,
    };
    let mut current = s.clone();
    let mut removed = ElementSet::empty(s.universe_size());
    search.dfs(0, tau, &mut current, &mut removed)?;
    let result = RemovalResult {
        removed: search.best_removed,
        residual_value: search.best_value,
        kind: AdversaryKind::Optimal,
        nodes_explored: Some(search.nodes),
    };
    if search.budget_hit {
        return Err(Error::AdversaryBudget {
            nodes_explored: search.nodes,
            incumbent: Box::new(result),
        });
    }
    Ok(result)
}

/// Residual value of `S` under the chosen adversary.
pub fn robust_value(
    oracle: &Oracle,
    s: &ElementSet,
    tau: usize,
    kind: AdversaryKind,
) -> Result<f64> {
    let result = match kind {
        AdversaryKind::Optimal => optimal_removal(oracle, s, tau)?,
        AdversaryKind::Greedy => greedy_removal(oracle, s, tau)?,
    };
    Ok(result.residual_value)
}

/// Limits for [`brute_force_robust_opt`]'s double enumeration.
pub const BRUTE_FORCE_MAX_GROUND: usize = 14;
pub const BRUTE_FORCE_MAX_K: usize = 6;

/// Exhaustively maximizes the robust objective: enumerates every size-`k`
/// subset, scores each by full enumeration of removals, and returns the
/// best set (lexicographically smallest among ties) with its robust value.
pub fn brute_force_robust_opt(oracle: &Oracle, k: usize, tau: usize) -> Result<(ElementSet, f64)> {
    let n = oracle.ground_size();
    if n > BRUTE_FORCE_MAX_GROUND || k > BRUTE_FORCE_MAX_K {
        return Err(Error::Resource(format!(
            "brute force limited to n <= {BRUTE_FORCE_MAX_GROUND}, k <= {BRUTE_FORCE_MAX_K}; \
             got n = {n}, k = {k}"
        )));
    }
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds ground size {n}")));
    }
    let mut best: Option<(ElementSet, f64)> = None;
    for combo in (0..n as u32).combinations(k) {
        let s = ElementSet::from_ids(n, combo.into_iter().map(ElementId));
        let members = s.to_vec();
        let mut worst = f64::INFINITY;
        for removal_mask in 0u64..(1 << members.len()) {
            if removal_mask.count_ones() as usize > tau {
                continue;
            }
            let mut residual_set = s.clone();
            for (i, &e) in members.iter().enumerate() {
                if removal_mask & (1 << i) != 0 {
                    residual_set.remove(e);
                }
            }
            worst = worst.min(oracle.evaluate(&residual_set)?);
        }
        // Strict > keeps the lexicographically first maximizer.
        if best.as_ref().is_none_or(|(_, bv)| worst > *bv) {
            best = Some((s, worst));
        }
    }
    Ok(best.expect("k <= n yields at least one candidate set"))
}
