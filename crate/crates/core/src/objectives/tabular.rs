//! Explicit tabular set functions for small universes, with construction-time
//! validation of normalization, monotonicity and submodularity.

use crate::error::{Error, Result};
use crate::ground::{ElementId, ElementSet};
use crate::oracle::Objective;

/// Largest universe for which a complete table is accepted.
pub const MAX_TABULAR_GROUND: usize = 20;

/// Slack allowed when validating monotonicity/submodularity of a table, to
/// absorb rounding in tables built from floating-point sums.
const VALIDATION_TOLERANCE: f64 = 1e-9;

/// A set function given by a complete table of `2^n` values, indexed by the
/// bit mask of the subset.
#[derive(Clone, Debug)]
pub struct TabularObjective {
    n: usize,
    values: Vec<f64>,
}

impl TabularObjective {
    /// Validates that the table is normalized, non-negative, monotone and
    /// submodular before accepting it.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        let table = Self::new_monotone(n, values)?;
        table.check_submodular()?;
        Ok(table)
    }

    /// Like [`TabularObjective::new`] but without the submodularity check:
    /// accepts any normalized non-negative monotone table.
    pub fn new_monotone(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_TABULAR_GROUND {
            return Err(Error::Config(format!(
                "tabular ground size must be in 1..={MAX_TABULAR_GROUND}, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::Config(format!(
                "table must hold 2^{n} = {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::Config(format!(
                "table is not normalized: f(∅) = {}",
                values[0]
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config(
                "table values must be finite and non-negative".into(),
            ));
        }
        for mask in 0u64..(1 << n) {
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let with_i = mask | (1 << i);
                if values[with_i as usize] < values[mask as usize] - VALIDATION_TOLERANCE {
                    return Err(Error::Config(format!(
                        "table is not monotone: f({with_i:#b}) < f({mask:#b})"
                    )));
                }
            }
        }
        Ok(TabularObjective { n, values })
    }

    /// Pairwise diminishing-returns check over the whole table.
    pub fn check_submodular(&self) -> Result<()> {
        let n = self.n;
        let values = &self.values;
        for mask in 0u64..(1 << n) {
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let with_i = mask | (1 << i);
                for j in (i + 1)..n {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let with_j = mask | (1 << j);
                    let with_ij = with_i | (1 << j);
                    let lhs = values[with_i as usize] + values[with_j as usize];
                    let rhs = values[with_ij as usize] + values[mask as usize];
                    if lhs < rhs - VALIDATION_TOLERANCE {
                        return Err(Error::Config(format!(
                            "table is not submodular at S={mask:#b}, i={i}, j={j}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn value_of_mask(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }
}

impl Objective for TabularObjective {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, s: &ElementSet) -> f64 {
        self.values[s.mask() as usize]
    }

    fn gain(&self, e: ElementId, s: &ElementSet) -> f64 {
        let mask = s.mask();
        self.values[(mask | (1 << e.0)) as usize] - self.values[mask as usize]
    }
}

/// The three-element function showing that greedy can be arbitrarily
/// non-robust: elements `(s1, s2, s3) = (0, 1, 2)` with
///
/// ```text
/// f({s1}) = n      f({s1,s2}) = n + ε
/// f({s2}) = ε      f({s1,s3}) = n
/// f({s3}) = n - 1  f({s2,s3}) = n
/// ```
///
/// The full set is not pinned by those rows; the only completion
/// consistent with monotonicity (`≥ n + ε`) and diminishing returns
/// (`f(s3 | {s1,s2}) ≤ f(s3 | {s1}) = 0`) is `n + ε`.
///
/// Requires `n ≥ 0` and `0 ≤ ε < n - 1`. The table is always normalized,
/// non-negative and monotone, but pairwise diminishing returns pins ε from
/// both sides: `f(s2 | ∅) = ε ≥ f(s2 | {s3}) = 1` forces `ε ≥ 1`, while
/// `f({s1,s3}) + f({s2,s3}) ≥ f({s1,s2,s3}) + f({s3})` reads
/// `2n ≥ 2n + ε - 1` and forces `ε ≤ 1`. The table is therefore
/// submodular exactly at `ε = 1` ([`TabularObjective::check_submodular`]
/// confirms). The whole stated range is accepted; greedy still selects
/// `{s1, s2}` for `k = 2` whenever `ε > 0`.
pub fn table2_objective(n_param: f64, eps_param: f64) -> Result<TabularObjective> {
    if !(n_param >= 0.0 && (0.0..n_param - 1.0).contains(&eps_param)) {
        return Err(Error::Config(format!(
            "need n ≥ 0 and ε ∈ [0, n-1), got n = {n_param}, ε = {eps_param}"
        )));
    }
    let n = n_param;
    let eps = eps_param;
    // Masks: s1 = bit 0, s2 = bit 1, s3 = bit 2.
    let values = vec![
        0.0,     // ∅
        n,       // {s1}
        eps,     // {s2}
        n + eps, // {s1,s2}
        n - 1.0, // {s3}
        n,       // {s1,s3}
        n,       // {s2,s3}
        n + eps, // {s1,s2,s3}
    ];
    TabularObjective::new_monotone(3, values)
}
