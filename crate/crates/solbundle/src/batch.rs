//! Batch sweeps: enumerate SL(2,ℤ) monodromies in a box, verify each, and
//! stream deterministic per-bundle summaries.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::Monodromy;
use crate::verify::{verify_bundle, VerifyOptions};

/// All SL(2,ℤ) matrices with entries in [−bound, bound] and
/// 2 < |trace| ≤ trace_max, in lexicographic (a,b,c,d) order.
pub fn enumerate_sol_matrices(bound: i64, trace_max: i64) -> Vec<[i64; 4]> {
    assert!(bound >= 0 && trace_max >= 0, "batch bounds must be non-negative");
    let mut out = Vec::new();
    let trace_ok = |a: i64, d: i64| {
        let t = (a as i128 + d as i128).abs();
        t > 2 && t <= trace_max as i128
    };
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                if a == 0 {
                    // bc = -1, d free
                    if b as i128 * c as i128 == -1 {
                        for d in -bound..=bound {
                            if trace_ok(a, d) {
                                out.push([a, b, c, d]);
                            }
                        }
                    }
                } else {
                    // a d = 1 + b c
                    let rhs = 1 + b as i128 * c as i128;
                    if rhs % a as i128 == 0 {
                        let d = rhs / a as i128;
                        if let Ok(d) = i64::try_from(d) {
                            if d.abs() <= bound && trace_ok(a, d) {
                                out.push([a, b, c, d]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchStatus {
    Pass,
    Fail,
    Degenerate,
    Error,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub trace: i64,
    pub n: u64,
    pub sign: i8,
    pub r: u64,
    pub shape_r: u64,
    pub shape_s: u64,
    pub parity: String,
    pub rank: usize,
    pub invertibles: usize,
    pub twodims: usize,
    pub h1_z2_dim: u32,
    pub d_squared: String,
    pub det_s_zero: bool,
    pub fusion_edge_case: bool,
    pub status: BatchStatus,
    /// Failed check names, `;`-separated (comma-free for CSV).
    pub failed_checks: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BatchAggregate {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    pub error: usize,
}

pub fn batch_row(entries: [i64; 4], epsilon: i8, max_n: u64) -> BatchRow {
    let [a, b, c, d] = entries;
    let error_row = |msg: &str| BatchRow {
        a,
        b,
        c,
        d,
        trace: (a as i128 + d as i128) as i64,
        n: 0,
        sign: 0,
        r: 0,
        shape_r: 0,
        shape_s: 0,
        parity: String::new(),
        rank: 0,
        invertibles: 0,
        twodims: 0,
        h1_z2_dim: 0,
        d_squared: String::new(),
        det_s_zero: false,
        fusion_edge_case: false,
        status: BatchStatus::Error,
        failed_checks: msg.replace(',', ";"),
    };

    let m = match Monodromy::new(a, b, c, d) {
        Ok(m) => m,
        Err(e) => return error_row(&e.to_string()),
    };
    let opts = VerifyOptions { epsilon, conjugate_by: None, max_n };
    let outcome = catch_unwind(AssertUnwindSafe(|| verify_bundle(&m, &opts)));
    let report = match outcome {
        Ok(Ok(report)) => report,
        Ok(Err(e)) => return error_row(&e.to_string()),
        Err(_) => return error_row("panic during verification"),
    };

    let status = if report.summary.degenerate {
        BatchStatus::Degenerate
    } else if report.passed {
        BatchStatus::Pass
    } else {
        BatchStatus::Fail
    };
    let failed: Vec<&str> = report
        .failed_checks()
        .iter()
        .map(|c| c.name.as_str())
        .collect();
    BatchRow {
        a,
        b,
        c,
        d,
        trace: report.summary.trace,
        n: report.summary.n,
        sign: report.summary.sign,
        r: report.summary.r,
        shape_r: report.summary.group_shape[0],
        shape_s: report.summary.group_shape[1],
        parity: parity_compact(&report.summary.parity),
        rank: report.summary.rank,
        invertibles: report.summary.invertible_count,
        twodims: report.summary.twodim_count,
        h1_z2_dim: report.summary.h1_z2_dim,
        d_squared: report.summary.d_squared.clone(),
        det_s_zero: report.summary.det_s_zero,
        fusion_edge_case: report.summary.fusion_edge_case,
        status,
        failed_checks: failed.join(";"),
    }
}

fn parity_compact(display: &str) -> String {
    display
        .chars()
        .filter(|c| *c == 'o' || *c == 'e')
        .collect()
}

/// Runs the sweep. Bundles are processed in parallel but emitted in the
/// deterministic enumeration order.
pub fn run_batch(bound: i64, trace_max: i64, epsilon: i8, max_n: u64) -> (Vec<BatchRow>, BatchAggregate) {
    let matrices = enumerate_sol_matrices(bound, trace_max);
    let rows: Vec<BatchRow> = matrices
        .par_iter()
        .map(|&entries| batch_row(entries, epsilon, max_n))
        .collect();
    let mut agg = BatchAggregate { total: rows.len(), ..Default::default() };
    for row in &rows {
        match row.status {
            BatchStatus::Pass => agg.pass += 1,
            BatchStatus::Fail => agg.fail += 1,
            BatchStatus::Degenerate => agg.degenerate += 1,
            BatchStatus::Error => agg.error += 1,
        }
    }
    (rows, agg)
}

pub const CSV_HEADER: &str = "a,b,c,d,trace,n,sign,r,shape_r,shape_s,parity,rank,invertibles,twodims,h1_z2_dim,d_squared,det_s_zero,fusion_edge_case,status,failed_checks";

pub fn row_to_csv(row: &BatchRow) -> String {
    let status = match row.status {
        BatchStatus::Pass => "pass",
        BatchStatus::Fail => "fail",
        BatchStatus::Degenerate => "degenerate",
        BatchStatus::Error => "error",
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.a,
        row.b,
        row.c,
        row.d,
        row.trace,
        row.n,
        row.sign,
        row.r,
        row.shape_r,
        row.shape_s,
        row.parity,
        row.rank,
        row.invertibles,
        row.twodims,
        row.h1_z2_dim,
        row.d_squared,
        row.det_s_zero,
        row.fusion_edge_case,
        status,
        row.failed_checks
    )
}
