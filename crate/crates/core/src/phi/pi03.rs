//! The density points of `A` as `⋂_n ⋃_k C_{n,k}` with each `C_{n,k}` a
//! finite intersection of finite unions of closed avoidance sets.

use serde::{Deserialize, Serialize};

use super::RealPresentation;
use crate::density::Horizons;
use crate::error::{Error, Result};
use crate::rational::{Bound, Rational};
use crate::realsets::{ClosedInterval, ClosedIntervalUnion, IntervalUnion};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi03Layer {
    pub n: u32,
    pub k: u32,
    pub closed_intervals: ClosedIntervalUnion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi03Presentation {
    pub n_max: u32,
    pub k_max: u32,
    pub l_max: u32,
    pub layers: Vec<Pi03Layer>,
}

impl Pi03Presentation {
    pub fn layer(&self, n: u32, k: u32) -> Option<&ClosedIntervalUnion> {
        self.layers.iter().find(|l| l.n == n && l.k == k).map(|l| &l.closed_intervals)
    }

    /// Membership in `⋂_n ⋃_k C_{n,k}`.
    pub fn contains(&self, x: &Rational) -> bool {
        (1..=self.n_max).all(|n| self.layers.iter().any(|l| l.n == n && l.closed_intervals.contains(x)))
    }
}

/// `⋃_j E_{n,k,l,i,j}`: the shifts `x` for which some cell of block `i` at
/// scale `1/l` misses `u − x`. A cell `(x + a, x + a + w)` misses the open
/// set `u` exactly when it fits inside one closed gap `[g1, g2]` of `u`, that
/// is when `x ∈ [g1 − a, g2 − a − w]`.
pub fn block_avoidance_set(u: &IntervalUnion, n: u32, k: u32, l: u32, i: i64) -> Result<ClosedIntervalUnion> {
    if !u.is_finite() {
        return Err(Error::Unsupported("avoidance set of a lazy family".into()));
    }
    let d = l as i64 * n as i64 * k as i64;
    let w = Rational::new(1, d);
    let a = |j: i64| Rational::new(i * k as i64 + j - 1, d);
    let gaps = ClosedIntervalUnion::complement_of_open(u.intervals());
    let mut parts = Vec::new();
    for g in gaps.parts() {
        let len = match (&g.lo, &g.hi) {
            (Bound::Finite(lo), Bound::Finite(hi)) => Some(hi - lo),
            _ => None,
        };
        let fits = |times: i64| len.as_ref().is_none_or(|len| *len >= &w * &Rational::from_integer(times));
        let part = |first: i64, last: i64| {
            ClosedInterval::new(g.lo.shift(&-a(last)), g.hi.shift(&-(&a(first) + &w)))
        };
        if fits(2) {
            parts.push(part(1, k as i64));
        } else if fits(1) {
            parts.extend((1..=k as i64).map(|j| part(j, j)));
        }
    }
    Ok(ClosedIntervalUnion::from_parts(parts))
}

/// Every layer `C_{n,k}` for `n <= n_max`, `k <= k_max`, with `l` truncated
/// to `(k, l_max]`.
pub fn pi03_presentation(a: &RealPresentation, h: &Horizons) -> Result<Pi03Presentation> {
    h.validate()?;
    if !a.base.is_finite() {
        return Err(Error::Unsupported("the presentation needs a finite base".into()));
    }
    let u = a.base.complement_kernel()?;
    let mut layers = Vec::new();
    for n in 1..=h.n_max {
        for k in 1..=h.k_max {
            let mut c = ClosedIntervalUnion::full();
            'scales: for l in k + 1..=h.l_max {
                for i in -(n as i64)..n as i64 {
                    c = c.intersection(&block_avoidance_set(&u, n, k, l, i)?);
                    if c.is_empty() {
                        break 'scales;
                    }
                }
            }
            layers.push(Pi03Layer { n, k, closed_intervals: c });
        }
    }
    Ok(Pi03Presentation { n_max: h.n_max, k_max: h.k_max, l_max: h.l_max, layers })
}
