//! The submodular-oracle evaluation contract shared by all solvers and
//! adversaries: full evaluations `f(S)`, marginal-gain queries `f(e|S)`,
//! conditioned views, and evaluation counting.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};

/// A normalized monotone submodular set function on `{0, ..., n-1}`.
///
/// Implementations return raw values and do not count queries; counting is
/// the wrapping [`Oracle`]'s job. `value` must satisfy `value(∅) = 0`.
pub trait Objective: Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, s: &ElementSet) -> f64;

    /// `f(S ∪ {e}) - f(S)` for `e ∉ S`. Override when it can be computed
    /// faster than two full evaluations.
    fn gain(&self, e: ElementId, s: &ElementSet) -> f64 {
        self.value(&s.with(e)) - self.value(s)
    }
}

/// Query counts for one solver or adversary run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub full_evals: u64,
    pub marginal_evals: u64,
}

/// Monotone counters for oracle queries, correct under concurrent
/// increments.
#[derive(Debug, Default)]
pub struct EvalCounter {
    full: AtomicU64,
    marginal: AtomicU64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn count_full(&self) {
        self.full.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    fn count_marginal(&self) {
        self.marginal.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> EvalCounts {
        EvalCounts {
            full_evals: self.full.load(Ordering::Relaxed),
            marginal_evals: self.marginal.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.full.store(0, Ordering::Relaxed);
        self.marginal.store(0, Ordering::Relaxed);
    }
}

/// A counting front-end over an [`Objective`].
///
/// Validates query arguments against the objective's ground set and counts
/// full vs marginal evaluations. Read-only sharing across threads is safe.
pub struct Oracle<'a> {
    objective: &'a dyn Objective,
    counter: EvalCounter,
}

impl<'a> Oracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Oracle {
            objective,
            counter: EvalCounter::new(),
        }
    }

    #[inline]
    pub fn ground_size(&self) -> usize {
        self.objective.ground_size()
    }

    fn check_set(&self, s: &ElementSet) -> Result<()> {
        if s.universe_size() != self.ground_size() {
            return Err(Error::Domain(format!(
                "set over universe of size {} queried against oracle with ground size {}",
                s.universe_size(),
                self.ground_size()
            )));
        }
        Ok(())
    }

    fn check_element(&self, e: ElementId) -> Result<()> {
        if e.index() >= self.ground_size() {
            return Err(Error::Domain(format!(
                "element {} out of range for ground size {}",
                e,
                self.ground_size()
            )));
        }
        Ok(())
    }

    /// `f(S)`. Counts one full evaluation.
    pub fn evaluate(&self, s: &ElementSet) -> Result<f64> {
        self.check_set(s)?;
        self.counter.count_full();
        Ok(self.objective.value(s))
    }

    /// `f(e|S) = f(S ∪ {e}) - f(S)`; zero when `e ∈ S`. Counts one
    /// marginal evaluation.
    pub fn marginal_gain(&self, e: ElementId, s: &ElementSet) -> Result<f64> {
        self.check_set(s)?;
        self.check_element(e)?;
        self.counter.count_marginal();
        if s.contains(e) {
            return Ok(0.0);
        }
        Ok(self.objective.gain(e, s))
    }

    /// The conditioned function `g(S) = f(S ∪ base) - f(base)`, which is
    /// normalized, monotone and submodular whenever `f` is. Wrap the result
    /// in a fresh [`Oracle`] to query it with counting.
    pub fn conditional_view(&self, base: &ElementSet) -> Result<Conditioned<'a>> {
        self.check_set(base)?;
        Ok(Conditioned::new(self.objective, base.clone()))
    }

    pub fn counts(&self) -> EvalCounts {
        self.counter.snapshot()
    }

    pub fn reset_counts(&self) {
        self.counter.reset();
    }
}

/// `g(S) = f(S ∪ base) - f(base)`.
pub struct Conditioned<'a> {
    inner: &'a dyn Objective,
    base: ElementSet,
    base_value: f64,
}

impl<'a> Conditioned<'a> {
    pub fn new(inner: &'a dyn Objective, base: ElementSet) -> Self {
        let base_value = inner.value(&base);
        Conditioned {
            inner,
            base,
            base_value,
        }
    }
}

impl Objective for Conditioned<'_> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        self.inner.value(&s.union(&self.base)) - self.base_value
    }

    fn gain(&self, e: ElementId, s: &ElementSet) -> f64 {
        if self.base.contains(e) {
            return 0.0;
        }
        let merged = s.union(&self.base);
        self.inner.gain(e, &merged)
    }
}
