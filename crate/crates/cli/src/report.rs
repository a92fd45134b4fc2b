//! The guarantee landscape for a sweep: per (k, tau), the certificate
//! factor with its parameter conditions, plus both solvers' feasibility.

use std::fmt::Write as _;

use submax_core::error::Result;
use submax_core::solvers::{bound_certificate, partition_layout};

use crate::config::ExperimentConfig;

/// Renders the bound report for every (k, tau) pair of the config. Domain
/// errors (e.g. `k <= tau`) become report lines, never failures.
pub fn bound_report(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::new();
    let beta = cfg.subroutine.beta();
    writeln!(out, "subroutine: {}", cfg.subroutine.label()).unwrap();
    match beta {
        Some(b) => writeln!(out, "certified beta: {b}").unwrap(),
        None => writeln!(
            out,
            "certified beta: none for this subroutine; certificate shown with beta = 1"
        )
        .unwrap(),
    }
    let beta = beta.unwrap_or(1.0);
    writeln!(out, "eta: {}", cfg.eta).unwrap();
    for &k in &cfg.k_values {
        for &tau in &cfg.tau_values {
            writeln!(out, "k = {k}, tau = {tau}:").unwrap();
            let osu_bucket = cfg.osu_bucket_size.resolve(tau);
            if tau == 0 {
                writeln!(out, "  osu: degenerates to one plain run of size {k}").unwrap();
            } else if tau * osu_bucket <= k {
                writeln!(
                    out,
                    "  osu: feasible (robust part = {} of {k})",
                    tau * osu_bucket
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "  osu: infeasible ({tau} buckets of {osu_bucket} exceed k = {k})"
                )
                .unwrap();
            }
            if tau == 0 {
                writeln!(out, "  pro: degenerates to one plain run of size {k}").unwrap();
                writeln!(out, "  certificate: not applicable for tau = 0").unwrap();
                continue;
            }
            let s0_size = match partition_layout(tau, cfg.eta, k) {
                Ok(layout) => {
                    writeln!(
                        out,
                        "  pro: feasible (robust part = {} of {k}, {} partitions)",
                        layout.s0_size,
                        layout.partitions.len()
                    )
                    .unwrap();
                    layout.s0_size
                }
                Err(err) => {
                    writeln!(out, "  pro: {err}").unwrap();
                    continue;
                }
            };
            match bound_certificate(k, tau, cfg.eta as f64, beta, s0_size) {
                Ok(cert) => {
                    writeln!(out, "  certificate: factor = {:.6}", cert.factor).unwrap();
                    writeln!(
                        out,
                        "  conditions: 2 <= tau <= k/(3 eta (log2 k + 2)): {}; eta >= 4 (log2 k + 1): {}",
                        if cert.tau_condition { "met" } else { "not met" },
                        if cert.eta_condition { "met" } else { "not met" },
                    )
                    .unwrap();
                    if tau < 2 {
                        writeln!(out, "  note: the guarantee requires tau >= 2").unwrap();
                    }
                }
                Err(err) => {
                    writeln!(out, "  certificate: {err}").unwrap();
                }
            }
        }
    }
    Ok(out)
}
