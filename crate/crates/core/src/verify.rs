//! Regression harness: recompute every embedded fixture and diff.
//!
//! Deterministic and thread-count independent (all counting is exact
//! integer arithmetic; constants re-derive from the same formulas every
//! run). The full run includes the two τ = 24 lower-bound bases and takes
//! on the order of a minute.

use num_traits::ToPrimitive;

use crate::bounds::{
    floor_4dp, lower_bound_report, ratio_constants, ub_xi_const, ub_yi_const, ub_yseq_const,
    x0_analytic_const,
};
use crate::compat::CompatKind;
use crate::fixtures;
use crate::numtheory::SpfTable;
use crate::permanent::{count_permutations, Engine};
use crate::Result;

#[derive(Debug, Clone)]
pub struct VerifyItem {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl VerifyItem {
    fn check(name: impl Into<String>, expected: impl ToString, actual: impl ToString, pass: bool) -> Self {
        VerifyItem {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Recompute all embedded fixtures: the counts table for n ≤ 20 with
/// 4-decimal roots, every lower-bound table row, the four upper-bound
/// constants at k = 30, and the ratio constants.
pub fn run_verify(table: &SpfTable) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();

    // counts and roots, fast tier
    for &(n, div_count, div_root, lcm_count, lcm_root) in fixtures::TABLE1 {
        if n > fixtures::TABLE1_FAST_MAX_N {
            break;
        }
        let lcm_count = lcm_count.expect("lcm column present for n ≤ 20");
        let lcm_root = lcm_root.expect("lcm column present for n ≤ 20");
        for (kind, count, root) in [
            (CompatKind::Div, div_count, div_root),
            (CompatKind::Lcm, lcm_count, lcm_root),
        ] {
            let r = count_permutations(kind, n, Engine::Auto)?;
            let count_ok = r.count.to_u64() == Some(count);
            report.items.push(VerifyItem::check(
                format!("counts n={n} {kind}"),
                count,
                &r.count,
                count_ok,
            ));
            let root_ok = (r.nth_root - root).abs() < 5e-5;
            report.items.push(VerifyItem::check(
                format!("root n={n} {kind}"),
                format!("{root:.4}"),
                format!("{:.4}", r.nth_root),
                root_ok,
            ));
        }
    }

    // lower-bound table, all rows
    for &(b, c_alpha, exp_ca, cd_alpha, exp_cd) in fixtures::TABLE2 {
        let r = lower_bound_report(table, b)?;
        let pass = close(r.c_alpha, c_alpha, fixtures::TABLE2_CONST_TOL)
            && close(r.cd_alpha, cd_alpha, fixtures::TABLE2_CONST_TOL)
            && r.exp_c_alpha == exp_ca
            && r.exp_cd_alpha == exp_cd;
        report.items.push(VerifyItem::check(
            format!("lower-bound b={b}"),
            format!("{c_alpha:.6}/{exp_ca:.4}/{cd_alpha:.6}/{exp_cd:.4}"),
            format!(
                "{:.6}/{:.4}/{:.6}/{:.4}",
                r.c_alpha,
                floor_4dp(r.c_alpha.exp()),
                r.cd_alpha,
                floor_4dp(r.cd_alpha.exp())
            ),
            pass,
        ));
    }

    // upper-bound constants at k = 30
    let (yseq, xi, yi) = fixtures::UB_SERIES_K30;
    let tol = fixtures::UB_SERIES_TOL_K30;
    for (name, expected, actual) in [
        ("upper yseq k=30", yseq, ub_yseq_const(30)),
        ("upper xi k=30", xi, ub_xi_const(30)),
        ("upper yi k=30", yi, ub_yi_const(30)),
    ] {
        report.items.push(VerifyItem::check(
            name,
            format!("{expected:.4}"),
            format!("{actual:.6}"),
            close(actual, expected, tol),
        ));
    }
    let x0 = x0_analytic_const(table, 30)?;
    report.items.push(VerifyItem::check(
        "upper x0 k=30",
        format!("{:.4}", fixtures::X0_ANALYTIC_K30),
        format!("{x0:.6}"),
        close(x0, fixtures::X0_ANALYTIC_K30, fixtures::X0_ANALYTIC_TOL),
    ));
    let total = ub_yseq_const(30) + ub_xi_const(30) + ub_yi_const(30) + x0;
    let (lo, hi) = fixtures::TOTAL_ANALYTIC_K30;
    report.items.push(VerifyItem::check(
        "upper total k=30",
        format!("[{lo:.4}, {hi:.4}]"),
        format!("{total:.6}"),
        (lo..=hi).contains(&total),
    ));

    // ratio constants
    match ratio_constants(table) {
        Ok(r) => {
            report.items.push(VerifyItem::check(
                "ratio density",
                format!("> {}", fixtures::RATIO_DENSITY_RHS),
                format!("{:.6}", r.density_lhs),
                r.density_lhs > fixtures::RATIO_DENSITY_RHS,
            ));
            report.items.push(VerifyItem::check(
                "ratio constant",
                format!("> {}", fixtures::RATIO_C_MIN),
                format!("{:.6}", r.c),
                r.c > fixtures::RATIO_C_MIN,
            ));
        }
        Err(e) => {
            report
                .items
                .push(VerifyItem::check("ratio constants", "hold", e, false));
        }
    }

    Ok(report)
}
