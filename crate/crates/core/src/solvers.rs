//! Robust solvers: the partitioned-robust (PRo) algorithm, the OSU
//! baseline, a plain greedy baseline, and the computable approximation
//! certificate.
//!
//! PRo builds a robust part `S0` out of `ceil(log2 tau) + 1` partitions,
//! where partition `i` holds `ceil(tau / 2^i)` buckets of `2^i * eta`
//! elements each. Every bucket is a fresh subroutine run on the not yet
//! selected ground set with the unconditioned objective; the remainder
//! `S1` fills the budget to `k`.

use crate::error::{Error, Result};
use crate::ground::{ElementSet, GroundSet};
use crate::oracle::Oracle;
use crate::subroutines::{run_subroutine, OrderedSolution, SubroutineSpec};

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: usize) -> u32 {
    debug_assert!(x >= 1);
    if x == 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// One partition of the robust part: how many buckets and how large.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    pub bucket_count: usize,
    pub bucket_size: usize,
}

/// The bucket structure of the robust part `S0` for given `tau` and `eta`.
#[derive(Clone, Debug)]
pub struct PartitionLayout {
    pub tau: usize,
    pub eta: usize,
    /// Indexed by partition `i = 0..=ceil(log2 tau)`; partition `i` holds
    /// `ceil(tau / 2^i)` buckets of `2^i * eta` elements.
    pub partitions: Vec<PartitionSpec>,
    /// Total robust-part size `sum_i ceil(tau / 2^i) * 2^i * eta`.
    pub s0_size: usize,
}

fn s0_size_for(tau: usize, eta: usize) -> usize {
    (0..=ceil_log2(tau))
        .map(|i| {
            let width = 1usize << i;
            tau.div_ceil(width) * width * eta
        })
        .sum()
}

/// Computes the exact bucket layout, failing with the maximal feasible
/// `tau` when the robust part would not fit within `k`.
pub fn partition_layout(tau: usize, eta: usize, k: usize) -> Result<PartitionLayout> {
    if tau < 1 {
        return Err(Error::Domain("tau must be at least 1".into()));
    }
    if eta < 1 {
        return Err(Error::Domain("eta must be at least 1".into()));
    }
    let s0_size = s0_size_for(tau, eta);
    if s0_size > k {
        let max_tau = (1..tau).rev().find(|&t| s0_size_for(t, eta) <= k);
        return Err(Error::Infeasible(match max_tau {
            Some(t) => format!(
                "robust part needs {s0_size} elements but k = {k}; \
                 maximal feasible tau for (k = {k}, eta = {eta}) is {t}"
            ),
            None => format!(
                "robust part needs {s0_size} elements but k = {k}; \
                 no tau >= 1 is feasible for (k = {k}, eta = {eta})"
            ),
        }));
    }
    let partitions = (0..=ceil_log2(tau))
        .map(|i| {
            let width = 1usize << i;
            PartitionSpec {
                bucket_count: tau.div_ceil(width),
                bucket_size: width * eta,
            }
        })
        .collect();
    Ok(PartitionLayout {
        tau,
        eta,
        partitions,
        s0_size,
    })
}

/// A bucket of the robust part together with where it sits in the layout.
#[derive(Clone, Debug)]
pub struct Bucket {
    pub partition: usize,
    pub index: usize,
    pub solution: OrderedSolution,
}

/// Output of a robust solver: `S = S0 ∪ S1` with the bucket breakdown of
/// the robust part.
#[derive(Clone, Debug)]
pub struct RobustSolution {
    pub selected: ElementSet,
    pub robust_part: ElementSet,
    pub remainder: ElementSet,
    pub buckets: Vec<Bucket>,
    pub raw_value: f64,
}

impl RobustSolution {
    pub fn size(&self) -> usize {
        self.selected.len()
    }
}

fn assemble(
    oracle: &Oracle,
    buckets: Vec<Bucket>,
    robust_part: ElementSet,
    remainder_solution: OrderedSolution,
) -> Result<RobustSolution> {
    let remainder = remainder_solution.to_set(oracle.ground_size());
    let selected = robust_part.union(&remainder);
    let raw_value = oracle.evaluate(&selected)?;
    Ok(RobustSolution {
        selected,
        robust_part,
        remainder,
        buckets,
        raw_value,
    })
}

fn check_budget(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::Domain(format!(
            "k = {k} exceeds ground set size {n}"
        )));
    }
    Ok(())
}

/// The partitioned-robust solver. For `tau = 0` this degenerates to a
/// single subroutine run of size `k`.
pub fn pro(
    oracle: &Oracle,
    ground: &GroundSet,
    k: usize,
    tau: usize,
    eta: usize,
    spec: &SubroutineSpec,
) -> Result<RobustSolution> {
    check_budget(k, ground.len())?;
    if tau == 0 {
        let s1 = run_subroutine(spec, oracle, &ground.universe(), k)?;
        return assemble(oracle, Vec::new(), ground.empty_set(), s1);
    }
    let layout = partition_layout(tau, eta, k)?;
    let mut remaining = ground.universe();
    let mut robust_part = ground.empty_set();
    let mut buckets = Vec::new();
    for (i, part) in layout.partitions.iter().enumerate() {
        for j in 0..part.bucket_count {
            let bucket = run_subroutine(spec, oracle, &remaining, part.bucket_size)?;
            for &e in &bucket.elements {
                remaining.remove(e);
                robust_part.insert(e);
            }
            buckets.push(Bucket {
                partition: i,
                index: j,
                solution: bucket,
            });
        }
    }
    let s1 = run_subroutine(spec, oracle, &remaining, k - layout.s0_size)?;
    assemble(oracle, buckets, robust_part, s1)
}

/// The uniform-bucket baseline: `tau` subroutine runs of `bucket_size`
/// elements each on the shrinking ground set, then a final run filling the
/// budget. The experimental default is `bucket_size = tau`, i.e. a robust
/// part of `tau^2` elements.
pub fn osu(
    oracle: &Oracle,
    ground: &GroundSet,
    k: usize,
    tau: usize,
    bucket_size: usize,
    spec: &SubroutineSpec,
) -> Result<RobustSolution> {
    check_budget(k, ground.len())?;
    if tau == 0 {
        let s1 = run_subroutine(spec, oracle, &ground.universe(), k)?;
        return assemble(oracle, Vec::new(), ground.empty_set(), s1);
    }
    if bucket_size < 1 {
        return Err(Error::Domain("bucket size must be at least 1".into()));
    }
    let robust_size = tau * bucket_size;
    if robust_size > k {
        return Err(Error::Infeasible(format!(
            "{tau} buckets of {bucket_size} need {robust_size} elements but k = {k}"
        )));
    }
    let mut remaining = ground.universe();
    let mut robust_part = ground.empty_set();
    let mut buckets = Vec::new();
    for j in 0..tau {
        let bucket = run_subroutine(spec, oracle, &remaining, bucket_size)?;
        for &e in &bucket.elements {
            remaining.remove(e);
            robust_part.insert(e);
        }
        buckets.push(Bucket {
            partition: 0,
            index: j,
            solution: bucket,
        });
    }
    let s1 = run_subroutine(spec, oracle, &remaining, k - robust_size)?;
    assemble(oracle, buckets, robust_part, s1)
}

/// Plain non-robust baseline: a single subroutine run over `V`.
pub fn greedy_baseline(
    oracle: &Oracle,
    ground: &GroundSet,
    k: usize,
    spec: &SubroutineSpec,
) -> Result<RobustSolution> {
    check_budget(k, ground.len())?;
    let s1 = run_subroutine(spec, oracle, &ground.universe(), k)?;
    assemble(oracle, Vec::new(), ground.empty_set(), s1)
}

/// The computable approximation certificate for a PRo run: the worst-case
/// fraction of the optimal robust value the returned set is guaranteed to
/// retain, together with the parameter conditions the guarantee assumes.
#[derive(Clone, Copy, Debug)]
pub struct BoundCertificate {
    pub k: usize,
    pub tau: usize,
    pub eta: f64,
    pub beta: f64,
    pub s0_size: usize,
    /// `P / (1 + P)` with
    /// `P = eta / (5 beta^3 ceil(log2 tau) + eta) * (1 - e^(-(k - s0)/(beta (k - tau))))`.
    pub factor: f64,
    /// `2 <= tau <= k / (3 eta (log2 k + 2))`.
    pub tau_condition: bool,
    /// `eta >= 4 (log2 k + 1)`.
    pub eta_condition: bool,
}

/// Evaluates the guarantee factor. `eta` is real-valued here so asymptotic
/// parameterizations can be inspected directly.
pub fn bound_certificate(
    k: usize,
    tau: usize,
    eta: f64,
    beta: f64,
    s0_size: usize,
) -> Result<BoundCertificate> {
    if tau < 1 {
        return Err(Error::Domain("certificate needs tau >= 1".into()));
    }
    if k <= tau {
        return Err(Error::Domain(format!(
            "certificate needs k > tau, got k = {k}, tau = {tau}"
        )));
    }
    if s0_size > k {
        return Err(Error::Domain(format!(
            "robust part of {s0_size} elements cannot fit in k = {k}"
        )));
    }
    if eta < 1.0 || beta < 1.0 || eta.is_nan() || beta.is_nan() {
        return Err(Error::Domain(format!(
            "certificate needs eta >= 1 and beta >= 1, got eta = {eta}, beta = {beta}"
        )));
    }
    let log_tau = f64::from(ceil_log2(tau));
    let attenuation = eta / (5.0 * beta.powi(3) * log_tau + eta);
    let exponent = (k - s0_size) as f64 / (beta * (k - tau) as f64);
    let p = attenuation * (1.0 - (-exponent).exp());
    let factor = p / (1.0 + p);
    let log2_k = (k as f64).log2();
    Ok(BoundCertificate {
        k,
        tau,
        eta,
        beta,
        s0_size,
        factor,
        tau_condition: tau >= 2 && tau as f64 <= k as f64 / (3.0 * eta * (log2_k + 2.0)),
        eta_condition: eta >= 4.0 * (log2_k + 1.0),
    })
}
