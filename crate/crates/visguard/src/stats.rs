//! Per-polygon decomposition and solver statistics, with an aligned text
//! table and a CSV emitter that share one row formatter.

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{build_dual, decompose};
use crate::epsnet::{bg_solve_from, Eps};
use crate::epsnet::{kk::KkNetFinder, RandomNetFinder};
use crate::geom::PolygonWithHoles;
use crate::rangespace::range_space_from;
use crate::solvers::{exact_guards_capped, greedy_guards};
use crate::visibility::WindowKind;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct MethodStat {
    pub size: usize,
    pub millis: f64,
}

#[derive(Debug)]
pub struct StatsReport {
    pub name: String,
    pub n: usize,
    pub h: usize,
    pub windows_left: usize,
    pub windows_right: usize,
    pub windows_trans: usize,
    pub crossings: usize,
    pub cells: usize,
    pub sinks: usize,
    /// cells / ((h+1) n^3)
    pub cell_ratio: f64,
    /// sinks / ((h+1)^2 n^2)
    pub sink_ratio: f64,
    pub greedy: MethodStat,
    pub bg: MethodStat,
    /// Absent when n exceeds the oracle cap.
    pub exact: Option<MethodStat>,
    /// Absent when the polygon has holes.
    pub kk: Option<MethodStat>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

pub fn compute_stats(
    name: &str,
    poly: &PolygonWithHoles,
    seed: u64,
    oracle_cap: usize,
    eps_start: Eps,
) -> Result<StatsReport> {
    let n = poly.vertex_count();
    let h = poly.hole_count();
    let decomp = decompose(poly)?;
    let dual = build_dual(&decomp)?;
    let rs = range_space_from(&decomp, &dual)?;

    let mut windows_left = 0;
    let mut windows_right = 0;
    let mut windows_trans = 0;
    for w in decomp.windows() {
        match w.kind {
            WindowKind::Left => windows_left += 1,
            WindowKind::Right => windows_right += 1,
            WindowKind::Trans => windows_trans += 1,
        }
    }

    let cells = decomp.cell_count();
    let sinks = dual.sinks().len();
    if !(cells >= sinks && sinks >= 1) {
        return Err(Error::Inconsistent(format!(
            "{name}: {cells} cells but {sinks} sinks"
        )));
    }

    let greedy = {
        let (gs, millis) = timed(|| greedy_guards(&rs));
        MethodStat { size: gs.guards.len(), millis }
    };

    let bg = {
        let mut finder = RandomNetFinder::new(h);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sol, millis) = timed(|| bg_solve_from(&rs, &mut finder, eps_start, &mut rng));
        let sol = sol?;
        MethodStat { size: sol.guards.guards.len(), millis }
    };

    let exact = if n <= oracle_cap {
        let (gs, millis) = timed(|| exact_guards_capped(&rs, oracle_cap));
        Some(MethodStat { size: gs?.guards.len(), millis })
    } else {
        None
    };

    let kk = if h == 0 {
        let kk_start = if eps_start.neg_log2() < 2 { Eps::pow2(2) } else { eps_start };
        let mut finder = KkNetFinder::new(poly)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sol, millis) = timed(|| bg_solve_from(&rs, &mut finder, kk_start, &mut rng));
        let sol = sol?;
        Some(MethodStat { size: sol.guards.guards.len(), millis })
    } else {
        None
    };

    let nf = n as f64;
    let hf = h as f64;
    Ok(StatsReport {
        name: name.to_string(),
        n,
        h,
        windows_left,
        windows_right,
        windows_trans,
        crossings: decomp.crossing_count(),
        cells,
        sinks,
        cell_ratio: cells as f64 / ((hf + 1.0) * nf * nf * nf),
        sink_ratio: sinks as f64 / ((hf + 1.0) * (hf + 1.0) * nf * nf),
        greedy,
        bg,
        exact,
        kk,
    })
}

pub const COLUMNS: [&str; 19] = [
    "name", "n", "h", "wl", "wr", "wt", "k", "cells", "sinks", "cell_ratio", "sink_ratio",
    "greedy", "greedy_ms", "bg", "bg_ms", "exact", "exact_ms", "kk", "kk_ms",
];

fn method_cells(m: Option<&MethodStat>) -> [String; 2] {
    match m {
        Some(m) => [m.size.to_string(), format!("{:.2}", m.millis)],
        None => [String::new(), String::new()],
    }
}

fn row_cells(r: &StatsReport) -> Vec<String> {
    let mut row = vec![
        r.name.clone(),
        r.n.to_string(),
        r.h.to_string(),
        r.windows_left.to_string(),
        r.windows_right.to_string(),
        r.windows_trans.to_string(),
        r.crossings.to_string(),
        r.cells.to_string(),
        r.sinks.to_string(),
        format!("{:.6}", r.cell_ratio),
        format!("{:.6}", r.sink_ratio),
    ];
    row.extend(method_cells(Some(&r.greedy)));
    row.extend(method_cells(Some(&r.bg)));
    row.extend(method_cells(r.exact.as_ref()));
    row.extend(method_cells(r.kk.as_ref()));
    row
}

/// Space-aligned table, one row per report, headed by `COLUMNS`.
pub fn table(reports: &[StatsReport]) -> String {
    let mut rows: Vec<Vec<String>> = vec![COLUMNS.iter().map(|s| s.to_string()).collect()];
    rows.extend(reports.iter().map(row_cells));
    let mut widths = vec![0usize; COLUMNS.len()];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                line.push_str(&format!("{:<width$}", cell, width = widths[i]));
            } else {
                line.push_str(&format!("{:>width$}", cell, width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// CSV with the same header, rows, and cell formatting as `table`.
pub fn csv(reports: &[StatsReport]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        out.push_str(&row_cells(r).join(","));
        out.push('\n');
    }
    out
}
