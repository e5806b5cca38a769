//! Both directions of turning the combinatorial condition into sequences:
//! extracting a subsequence along which every block keeps a fixed gap, and
//! extracting the block that fails infinitely often from a refutation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::real::{check_dispersion_r, gap_window};
use super::{Horizons, RealVerdict, Verdict};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::realsets::{Cell, IntervalUnion, Tri};
use crate::sequence::SequenceDescriptor;

/// Stage `n` of the construction: the certified `k`, the surviving terms,
/// and the gap index frozen for each block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionStage {
    pub n: u32,
    pub k: u32,
    pub survivors: Vec<u64>,
    pub frozen: Vec<(i64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub r: Vec<u64>,
    pub stages: Vec<ExtractionStage>,
}

/// Inductively thins `seq` (sampled up to `l_max`) so that at stage `n` each
/// block `i` has one gap `j_i` that is empty at every surviving scale, and
/// takes `r_n` as the first survivor.
pub fn extract_subsequence(g: &IntervalUnion, seq: &SequenceDescriptor, h: &Horizons) -> Result<Extraction> {
    let verdict = check_dispersion_r(g, &Rational::zero(), h)?;
    let Verdict::Verified { stages, .. } = verdict else {
        return Err(Error::Precondition(format!(
            "extraction needs a verified point, the checker answered {}",
            verdict.label()
        )));
    };
    let mut pool = seq.terms_upto(h.l_max as u64)?;
    let mut r: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for st in &stages {
        let (n, k) = (st.n, st.k);
        let floor = r.last().copied().unwrap_or(0).max(k as u64);
        pool.retain(|&l| l > floor);
        let grids: BTreeMap<u64, Vec<Cell>> = pool
            .iter()
            .map(|&l| (l, g.grid_occupancy(l, n as u64 * k as u64).cells().to_vec()))
            .collect();
        let mut frozen = Vec::new();
        for i in -(n as i64)..n as i64 {
            let offset = ((i + n as i64) * k as i64) as usize;
            let best = (1..=k)
                .map(|j| {
                    let hits = pool.iter().filter(|l| grids[l][offset + j as usize - 1] == Cell::Empty).count();
                    (hits, std::cmp::Reverse(j))
                })
                .max()
                .expect("k >= 1");
            let j = best.1 .0;
            pool.retain(|l| grids[l][offset + j as usize - 1] == Cell::Empty);
            frozen.push((i, j));
        }
        let Some(&first) = pool.first() else {
            return Err(Error::Inconclusive(format!("subsequence exhausted at stage n={n} below l_max={}", h.l_max)));
        };
        r.push(first);
        out.push(ExtractionStage { n, k, survivors: pool.clone(), frozen });
    }
    // the frozen gaps of stage n stay empty at every later r_m
    for (idx, st) in out.iter().enumerate() {
        for &rm in &r[idx..] {
            for &(i, j) in &st.frozen {
                if g.intersects(&gap_window(st.n, st.k, rm as u32, i, j)) != Tri::No {
                    return Err(Error::Replay(format!(
                        "frozen gap (n={}, i={i}, j={j}) meets the set at r={rm}",
                        st.n
                    )));
                }
            }
        }
    }
    Ok(Extraction { r, stages: out })
}

/// The block index occurring most often among the failures (smallest on
/// ties) and the scales at which it fails.
pub fn refutation_to_witnesses(g: &IntervalUnion, verdict: &RealVerdict, h: &Horizons) -> Result<(i64, Vec<u32>)> {
    let Verdict::Refuted { n0, witnesses, .. } = verdict else {
        return Err(Error::Precondition(format!("expected a refutation, got {}", verdict.label())));
    };
    if witnesses.len() < h.refute_min as usize {
        return Err(Error::Inconclusive(format!(
            "refutation lists {} scales, fewer than {}",
            witnesses.len(),
            h.refute_min
        )));
    }
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for w in witnesses {
        *counts.entry(w.i).or_default() += 1;
    }
    let i0 = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&i, _)| i)
        .expect("nonempty");
    let ls: Vec<u32> = witnesses.iter().filter(|w| w.i == i0).map(|w| w.l).collect();
    for &l in &ls {
        for j in 1..=h.k_max {
            if !g.intersects(&gap_window(*n0, h.k_max, l, i0, j)).is_yes() {
                return Err(Error::Replay(format!("cell j={j} of block i0={i0} is empty at l={l}")));
            }
        }
    }
    Ok((i0, ls))
}
