//! The checker on the real line.

use super::{Horizons, RealFailure, RealVerdict, RealWitness, Stage, Trace, Verdict};
use crate::error::Result;
use crate::rational::Rational;
use crate::realsets::{Cell, Grid, IntervalUnion, OpenInterval, Tri};

/// The window `(1/l)(i/n + (j-1)/(n k), i/n + j/(n k))`.
pub fn gap_window(n: u32, k: u32, l: u32, i: i64, j: u32) -> OpenInterval {
    let d = (l as i64) * (n as i64) * (k as i64);
    let c = i * k as i64 + j as i64 - 1;
    OpenInterval::finite(Rational::new(c, d), Rational::new(c + 1, d))
}

/// The block `(1/l)(i/n, (i+1)/n)`.
pub fn block_window(n: u32, l: u32, i: i64) -> OpenInterval {
    let d = l as i64 * n as i64;
    OpenInterval::finite(Rational::new(i, d), Rational::new(i + 1, d))
}

enum Block {
    Gap(u32),
    Full,
    Undecided,
}

fn block(grid: &Grid, i: i64, k: u32) -> Block {
    for j in 1..=k {
        match grid.cell(i * k as i64 + j as i64 - 1) {
            Cell::Empty => return Block::Gap(j),
            Cell::Unknown => return Block::Undecided,
            Cell::Occupied => {}
        }
    }
    Block::Full
}

fn record(trace: &mut Trace, l: u32, m: u64, grid: &Grid) {
    let cells: Vec<u8> = grid
        .cells()
        .iter()
        .map(|c| match c {
            Cell::Empty => 0,
            Cell::Occupied => 1,
            Cell::Unknown => 2,
        })
        .collect();
    trace.record(&[&l.to_le_bytes(), &m.to_le_bytes(), &cells]);
}

/// Dispersion of the open set `g` at `x`.
pub fn check_dispersion_r(g: &IntervalUnion, x: &Rational, h: &Horizons) -> Result<RealVerdict> {
    check_dispersion_r_traced(g, x, h, &mut Trace::new())
}

/// Density at `x` of a set whose complement has regular open kernel
/// `complement_kernel`.
pub fn check_density_r(complement_kernel: &IntervalUnion, x: &Rational, h: &Horizons) -> Result<RealVerdict> {
    check_dispersion_r(complement_kernel, x, h)
}

pub fn check_dispersion_r_traced(
    g: &IntervalUnion,
    x: &Rational,
    h: &Horizons,
    trace: &mut Trace,
) -> Result<RealVerdict> {
    h.validate()?;
    let g = g.translate(x);
    let cone = g.conical_tail();
    let inconclusive = |reason: String| Ok(Verdict::Inconclusive { horizons: h.clone(), reason });
    let mut stages = Vec::new();
    let mut exact = true;
    // a later n may still refute after an undecided one
    let mut pending: Option<String> = None;

    for n in 1..=h.n_max {
        let mut found = None;
        let mut every_k_refuted = true;
        let mut reason = None;
        let mut last_failures = Vec::new();
        for k in 1..=h.k_max {
            let m = n as u64 * k as u64;
            let last_k = k == h.k_max;
            let mut witnesses = Vec::new();
            let mut failing = Vec::new();
            let mut undecided = false;
            let mut cached: Option<Grid> = None;
            for l in k + 1..=h.l_max {
                let grid = match cone {
                    Some(c) if l as u64 >= c.l0 => {
                        cached.get_or_insert_with(|| g.grid_occupancy(l as u64, m)).clone()
                    }
                    _ => g.grid_occupancy(l as u64, m),
                };
                record(trace, l, m, &grid);
                let mut first_full = None;
                for i in -(n as i64)..n as i64 {
                    match block(&grid, i, k) {
                        Block::Gap(j) => witnesses.push(RealWitness { l, i, j }),
                        Block::Full => {
                            first_full.get_or_insert(i);
                        }
                        Block::Undecided => undecided = true,
                    }
                }
                if let Some(i) = first_full {
                    failing.push(RealFailure { l, i });
                    if failing.len() >= h.refute_min as usize && !last_k {
                        break;
                    }
                }
            }
            if failing.is_empty() {
                if undecided {
                    reason = Some(format!(
                        "undecided cells at n={n}, k={k}: {}",
                        g.lazy().map(|t| format!("lazy family near {}", t.accumulation())).unwrap_or_default()
                    ));
                    every_k_refuted = false;
                    break;
                }
                found = Some(Stage { n, k, witnesses });
                break;
            }
            if failing.len() < h.refute_min as usize {
                every_k_refuted = false;
            }
            if last_k {
                last_failures = failing;
            }
        }
        match found {
            Some(stage) => {
                exact &= cone.is_some_and(|c| c.l0 <= h.l_max as u64);
                stages.push(stage);
            }
            None if every_k_refuted && g.closure_contains(&Rational::zero()) != Tri::No => {
                let exact = refutation_is_exact(&g, n, &last_failures);
                return Ok(Verdict::Refuted { n0: n, witnesses: last_failures, exact });
            }
            None if every_k_refuted => {
                pending.get_or_insert(format!(
                    "every k <= {} fails at n={n}, but x lies outside the closure, so the least k exceeds k_max",
                    h.k_max
                ));
            }
            None => {
                pending.get_or_insert(reason.unwrap_or_else(|| {
                    format!(
                        "no k <= {} works at n={n}, but some k fails at fewer than {} values of l <= {}",
                        h.k_max, h.refute_min, h.l_max
                    )
                }));
            }
        }
    }
    if let Some(reason) = pending {
        return inconclusive(reason);
    }
    Ok(Verdict::Verified { stages, exact })
}

/// A refutation holds for every `k` when some failing block is dense in
/// `g` at a scale from which the dilation pattern repeats forever.
fn refutation_is_exact(g: &IntervalUnion, n: u32, failures: &[RealFailure]) -> bool {
    let threshold = match (g.conical_tail(), g.self_similar_threshold()) {
        (Some(c), _) => c.l0,
        (None, Some((_, l_star))) => l_star,
        (None, None) => return false,
    };
    let Ok(exterior) = g.complement_kernel() else {
        return false;
    };
    failures
        .iter()
        .filter(|f| f.l as u64 >= threshold)
        .any(|f| exterior.intersects(&block_window(n, f.l, f.i)) == Tri::No)
}
