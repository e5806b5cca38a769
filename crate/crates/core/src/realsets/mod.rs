//! Exact presentations of open subsets of the real line.
//!
//! An [`IntervalUnion`] is a finite sorted list of open intervals with
//! rational (or infinite) endpoints, optionally joined with one catalogued
//! infinite family from [`lazy`]. Every query on a finite union is exact;
//! lazy queries are exact except when an enumeration budget runs out close
//! to the family's accumulation point, in which case they answer
//! [`Tri::Unknown`] with the horizon that produced it.

mod closed;
mod grid;
pub mod lazy;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use closed::{ClosedInterval, ClosedIntervalUnion};
pub use grid::{cell_window, Cell, Grid};
pub use lazy::{LazyKind, LazyTail, ScaledSequence, WidthRule};

use crate::error::{Error, Result};
use crate::rational::{Bound, Rational};

/// Three-valued answer of a possibly horizon-bounded query.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unknown(String),
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            (Tri::Unknown(h), _) | (_, Tri::Unknown(h)) => Tri::Unknown(h),
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Tri::Yes)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    pub lo: Bound,
    pub hi: Bound,
}

impl OpenInterval {
    pub fn new(lo: Bound, hi: Bound) -> Result<OpenInterval> {
        if lo >= hi || lo == Bound::PosInf || hi == Bound::NegInf {
            return Err(Error::MalformedInterval { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(OpenInterval { lo, hi })
    }

    /// Panics unless `lo < hi`.
    pub fn finite(lo: Rational, hi: Rational) -> OpenInterval {
        assert!(lo < hi, "empty interval ({lo}, {hi})");
        OpenInterval { lo: Bound::Finite(lo), hi: Bound::Finite(hi) }
    }

    pub fn full() -> OpenInterval {
        OpenInterval { lo: Bound::NegInf, hi: Bound::PosInf }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.less_than(x) && self.hi.greater_than(x)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn meets(&self, other: &OpenInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    fn shifted(&self, x: &Rational) -> OpenInterval {
        OpenInterval { lo: self.lo.shift(x), hi: self.hi.shift(x) }
    }

    fn scaled(&self, alpha: &Rational) -> OpenInterval {
        if alpha.is_positive() {
            OpenInterval { lo: self.lo.scale_pos(alpha), hi: self.hi.scale_pos(alpha) }
        } else {
            let a = alpha.abs();
            OpenInterval { lo: self.hi.scale_pos(&a).negate(), hi: self.lo.scale_pos(&a).negate() }
        }
    }
}

impl fmt::Debug for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl Serialize for OpenInterval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.lo, &self.hi).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OpenInterval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(Bound, Bound)>::deserialize(deserializer)?;
        OpenInterval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Local shape of an open set around `0`: within `(-1/l0, 1/l0)` the set is
/// one of `∅`, a left half, a right half, both halves, or a full
/// neighbourhood, so every dilation at scale `1/l` with `l >= l0` sees the
/// same picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConicalTail {
    pub l0: u64,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct IntervalUnion {
    #[serde(rename = "intervals")]
    finite: Vec<OpenInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lazy: Option<LazyTail>,
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.finite).finish()?;
        if let Some(l) = &self.lazy {
            write!(f, " ∪ {l:?}")?;
        }
        Ok(())
    }
}

/// Sorted, disjoint union; abutting intervals stay separate.
pub fn normalize(intervals: Vec<OpenInterval>) -> Result<IntervalUnion> {
    for iv in &intervals {
        if iv.lo >= iv.hi {
            return Err(Error::MalformedInterval { lo: iv.lo.to_string(), hi: iv.hi.to_string() });
        }
    }
    Ok(IntervalUnion { finite: merge(intervals, false), lazy: None })
}

fn merge(mut intervals: Vec<OpenInterval>, join_abutting: bool) -> Vec<OpenInterval> {
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
    let mut out: Vec<OpenInterval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo < last.hi || (join_abutting && iv.lo == last.hi) => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion::default()
    }

    pub fn full() -> IntervalUnion {
        IntervalUnion { finite: vec![OpenInterval::full()], lazy: None }
    }

    pub fn single(iv: OpenInterval) -> IntervalUnion {
        IntervalUnion { finite: vec![iv], lazy: None }
    }

    pub fn from_lazy(tail: LazyTail) -> IntervalUnion {
        IntervalUnion { finite: Vec::new(), lazy: Some(tail) }
    }

    /// A finite part joined with a catalogued family. The finite part may
    /// touch the family's hull only at its accumulation point.
    pub fn with_lazy(finite: Vec<OpenInterval>, tail: LazyTail) -> Result<IntervalUnion> {
        let base = normalize(finite)?;
        let (hlo, hhi) = tail.hull();
        let acc = tail.accumulation().clone();
        for iv in &base.finite {
            let below = if acc == hlo {
                !iv.hi.greater_than(&hlo)
            } else {
                iv.hi.less_than(&hlo)
            };
            let above = if acc == hhi {
                !iv.lo.less_than(&hhi)
            } else {
                iv.lo.greater_than(&hhi)
            };
            if !(below || above) {
                return Err(Error::Unsupported(format!(
                    "finite component {iv:?} meets the hull [{hlo}, {hhi}] of a lazy family"
                )));
            }
        }
        Ok(IntervalUnion { finite: base.finite, lazy: Some(tail) })
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.finite
    }

    pub fn lazy(&self) -> Option<&LazyTail> {
        self.lazy.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.lazy.is_none()
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.lazy.is_none()
    }

    pub fn union(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let mut finite = self.finite.clone();
        finite.extend(other.finite.iter().cloned());
        match (&self.lazy, &other.lazy) {
            (None, None) => normalize(finite),
            (Some(t), None) | (None, Some(t)) => IntervalUnion::with_lazy(finite, t.clone()),
            (Some(_), Some(_)) => {
                Err(Error::Unsupported("union of two lazy families".into()))
            }
        }
    }

    /// Intersection of two finite unions.
    pub fn intersection(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        if !self.is_finite() || !other.is_finite() {
            return Err(Error::Unsupported("intersection needs finite unions".into()));
        }
        let (a, b) = (&self.finite, &other.finite);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.clone().max(b[j].lo.clone());
            let hi = a[i].hi.clone().min(b[j].hi.clone());
            if lo < hi {
                out.push(OpenInterval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(IntervalUnion { finite: out, lazy: None })
    }

    /// `int(cl(S))`.
    pub fn regular_open_kernel(&self) -> IntervalUnion {
        // Lazy members never abut one another and the constructor keeps the
        // finite part off their hull, so only the finite part can change.
        IntervalUnion { finite: merge(self.finite.clone(), true), lazy: self.lazy.clone() }
    }

    /// `{αt : t ∈ S}`.
    pub fn scale(&self, alpha: &Rational) -> Result<IntervalUnion> {
        if alpha.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut finite: Vec<_> = self.finite.iter().map(|iv| iv.scaled(alpha)).collect();
        if alpha.is_negative() {
            finite.reverse();
        }
        Ok(IntervalUnion { finite, lazy: self.lazy.as_ref().map(|t| t.scaled(alpha)) })
    }

    /// `S − x = {t − x : t ∈ S}`.
    pub fn translate(&self, x: &Rational) -> IntervalUnion {
        let shift = -x;
        IntervalUnion {
            finite: self.finite.iter().map(|iv| iv.shifted(&shift)).collect(),
            lazy: self.lazy.as_ref().map(|t| t.shifted(&shift)),
        }
    }

    /// Does `S` meet the open interval?
    pub fn intersects(&self, window: &OpenInterval) -> Tri {
        let idx = self.finite.partition_point(|iv| iv.hi <= window.lo);
        let finite = Tri::from_bool(self.finite.get(idx).is_some_and(|iv| iv.meets(window)));
        match &self.lazy {
            None => finite,
            Some(_) if finite.is_yes() => Tri::Yes,
            Some(t) => t.intersects(window),
        }
    }

    pub fn contains(&self, x: &Rational) -> Tri {
        let idx = self.finite.partition_point(|iv| !iv.hi.greater_than(x));
        let finite = Tri::from_bool(self.finite.get(idx).is_some_and(|iv| iv.contains(x)));
        match &self.lazy {
            Some(t) if !finite.is_yes() => t.contains(x),
            _ => finite,
        }
    }

    pub fn closure_contains(&self, x: &Rational) -> Tri {
        let idx = self.finite.partition_point(|iv| iv.hi.less_than(x));
        let finite = Tri::from_bool(
            self.finite.get(idx).is_some_and(|iv| !iv.lo.greater_than(x) && !iv.hi.less_than(x)),
        );
        match &self.lazy {
            Some(t) if !finite.is_yes() => t.closure_contains(x),
            _ => finite,
        }
    }

    /// The finite endpoints of the finite part.
    pub fn endpoints(&self) -> Vec<Rational> {
        self.finite
            .iter()
            .flat_map(|iv| [iv.lo.finite().cloned(), iv.hi.finite().cloned()])
            .flatten()
            .collect()
    }

    /// Closure of a finite union as a closed interval union.
    pub fn closure(&self) -> Result<ClosedIntervalUnion> {
        if !self.is_finite() {
            return Err(Error::Unsupported("closure of a lazy family".into()));
        }
        Ok(ClosedIntervalUnion::from_parts(
            self.finite
                .iter()
                .map(|iv| ClosedInterval::new(iv.lo.clone(), iv.hi.clone()))
                .collect(),
        ))
    }

    /// The exterior `ℝ ∖ cl(S)`, which is the regular open kernel of the
    /// complement of `S`.
    pub fn complement_kernel(&self) -> Result<IntervalUnion> {
        let mut closed: Vec<OpenInterval> = merge(self.finite.clone(), true);
        let inner = match &self.lazy {
            None => None,
            Some(t) => {
                let (hlo, hhi) = t.hull();
                // the hull is a closed block of the closure
                closed.push(OpenInterval::finite(hlo.clone(), hhi.clone()));
                Some(t.with_kind(t.kind.inner_exterior()))
            }
        };
        let closed = merge(closed, true);
        let mut gaps = Vec::with_capacity(closed.len() + 1);
        let mut cursor = Bound::NegInf;
        for iv in &closed {
            if cursor < iv.lo {
                gaps.push(OpenInterval { lo: cursor.clone(), hi: iv.lo.clone() });
            }
            cursor = iv.hi.clone();
        }
        if cursor < Bound::PosInf {
            gaps.push(OpenInterval { lo: cursor, hi: Bound::PosInf });
        }
        match inner {
            None => Ok(IntervalUnion { finite: gaps, lazy: None }),
            Some(t) => IntervalUnion::with_lazy(gaps, t),
        }
    }

    /// Whether `self ⊆ other` for finite unions.
    pub fn is_subset(&self, other: &IntervalUnion) -> Result<bool> {
        Ok(self.intersection(other)? == *self)
    }

    /// A finite union that contains (`over = true`) or is contained in
    /// (`over = false`) this set, differing from it only inside the
    /// `eta`-ball around the lazy family's accumulation point.
    pub fn finite_approx(&self, eta: &Rational, over: bool) -> Result<IntervalUnion> {
        let Some(t) = &self.lazy else {
            return Ok(self.clone());
        };
        let mut parts = self.finite.clone();
        parts.extend(t.members_outside(eta)?);
        if over {
            parts.extend(t.members_straddling(eta)?);
            let acc = t.accumulation();
            parts.push(OpenInterval::finite(acc - eta, acc + eta));
        }
        normalize(parts)
    }

    /// Local conical structure at `0`, available when no lazy family
    /// accumulates at or contains `0` in its hull.
    pub fn conical_tail(&self) -> Option<ConicalTail> {
        let zero = Rational::zero();
        let mut ends = self.endpoints();
        if let Some(t) = &self.lazy {
            let (lo, hi) = t.hull();
            if lo <= zero && zero <= hi {
                return None;
            }
            ends.extend([lo, hi]);
        }
        let nearest = ends.into_iter().filter(|e| !e.is_zero()).map(|e| e.abs()).min();
        let l0 = match nearest {
            None => 1,
            Some(d) => d.recip().ceil_i64()?.max(1) as u64,
        };
        let radius = Rational::new(1, l0 as i64);
        let left = self
            .intersects(&OpenInterval::finite(-&radius, zero.clone()))
            .is_yes();
        let right = self.intersects(&OpenInterval::finite(zero, radius)).is_yes();
        Some(ConicalTail { l0, left, right })
    }

    /// For a set that near `0` is a constant-width lazy family with ratio
    /// `1/N` accumulating at `0`, the least `l*` such that `l·S` and
    /// `N·l·S` agree on `(-1, 1)` for every `l >= l*`; the dilation
    /// pattern then recurs at every power of `N`.
    pub fn self_similar_threshold(&self) -> Option<(u64, u64)> {
        let t = self.lazy.as_ref()?;
        if !t.offset.is_zero() {
            return None;
        }
        let seq = match &t.kind {
            LazyKind::Components(s) | LazyKind::Gaps(s) => s,
        };
        if !matches!(seq.width, WidthRule::Const(_)) || !seq.ratio.numer().eq(&1.into()) {
            return None;
        }
        let n = Rational::from_integer(seq.ratio.recip().floor_i64()?);
        let near = &t.kind.member(0).0 * &(&n * &t.factor.abs());
        let mut l_star = near.recip().ceil_i64()?.max(1);
        if let Some(d) = self.endpoints().into_iter().map(|e| e.abs()).min() {
            if d.is_zero() {
                return None;
            }
            l_star = l_star.max(d.recip().ceil_i64()?);
        }
        Some((n.floor_i64()? as u64, l_star as u64))
    }
}

/// `E = {x : (U − x) ∩ (a, b) = ∅}` for a finite open `U` and bounded window,
/// computed as the complement of `⋃ (u_i − b, v_i − a)`.
pub fn closed_avoidance_set(u: &IntervalUnion, window: &OpenInterval) -> Result<ClosedIntervalUnion> {
    if !u.is_finite() {
        return Err(Error::Unsupported("avoidance set of a lazy family".into()));
    }
    let (Bound::Finite(a), Bound::Finite(b)) = (&window.lo, &window.hi) else {
        return Err(Error::UnboundedWindow);
    };
    let shadows: Vec<OpenInterval> = u
        .finite
        .iter()
        .map(|iv| OpenInterval { lo: iv.lo.shift(&-b), hi: iv.hi.shift(&-a) })
        .collect();
    Ok(ClosedIntervalUnion::complement_of_open(&merge(shadows, false)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> OpenInterval {
        OpenInterval::finite(r(a.0, a.1), r(b.0, b.1))
    }

    fn union(ivs: &[((i64, i64), (i64, i64))]) -> IntervalUnion {
        normalize(ivs.iter().map(|&(a, b)| iv(a, b)).collect()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(union(&[((0, 1), (2, 1)), ((1, 1), (3, 1))]), union(&[((0, 1), (3, 1))]));
        let abut = union(&[((1, 1), (2, 1)), ((0, 1), (1, 1))]);
        assert_eq!(abut.intervals().len(), 2);
        assert_eq!(abut.contains(&r(1, 1)), Tri::No);
        assert!(normalize(vec![]).unwrap().is_empty());
        assert!(OpenInterval::new(Bound::Finite(r(1, 1)), Bound::Finite(r(1, 1))).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = union(&[((0, 1), (1, 1)), ((1, 1), (2, 1))]).regular_open_kernel();
        assert_eq!(k, union(&[((0, 1), (2, 1))]));
        let s = union(&[((0, 1), (1, 1)), ((2, 1), (3, 1))]);
        assert_eq!(s.regular_open_kernel(), s);
        assert!(IntervalUnion::empty().regular_open_kernel().is_empty());
    }

    #[test]
    fn scale_examples() {
        let s = union(&[((1, 1), (2, 1))]);
        assert_eq!(s.scale(&r(3, 1)).unwrap(), union(&[((3, 1), (6, 1))]));
        assert_eq!(s.scale(&r(-1, 1)).unwrap(), union(&[((-2, 1), (-1, 1))]));
        assert_eq!(s.scale(&r(0, 1)), Err(Error::ZeroScale));
    }

    #[test]
    fn translate_examples() {
        assert_eq!(union(&[((0, 1), (1, 1))]).translate(&r(1, 2)), union(&[((-1, 2), (1, 2))]));
        assert!(IntervalUnion::empty().translate(&r(5, 1)).is_empty());
        let bumps = union(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]);
        assert_eq!(bumps.translate(&r(-1, 1)), union(&[((0, 1), (1, 2)), ((3, 2), (2, 1))]));
    }

    #[test]
    fn intersects_is_exact_on_open_ends() {
        assert_eq!(union(&[((0, 1), (1, 1))]).intersects(&iv((1, 1), (2, 1))), Tri::No);
        assert_eq!(union(&[((0, 1), (1, 1))]).intersects(&iv((1, 2), (2, 1))), Tri::Yes);
    }

    #[test]
    fn avoidance_examples() {
        let e = closed_avoidance_set(&union(&[((0, 1), (1, 1))]), &iv((-1, 2), (1, 2))).unwrap();
        let want = ClosedIntervalUnion::from_parts(vec![
            ClosedInterval::new(Bound::NegInf, Bound::Finite(r(-1, 2))),
            ClosedInterval::new(Bound::Finite(r(3, 2)), Bound::PosInf),
        ]);
        assert_eq!(e, want);
        let e = closed_avoidance_set(&IntervalUnion::empty(), &iv((0, 1), (1, 1))).unwrap();
        assert!(e.is_full());
        let e = closed_avoidance_set(&union(&[((-3, 1), (-2, 1))]), &iv((0, 1), (1, 1))).unwrap();
        let want = ClosedIntervalUnion::from_parts(vec![
            ClosedInterval::new(Bound::NegInf, Bound::Finite(r(-4, 1))),
            ClosedInterval::new(Bound::Finite(r(-2, 1)), Bound::PosInf),
        ]);
        assert_eq!(e, want);
        let unbounded = OpenInterval::new(Bound::NegInf, Bound::Finite(r(0, 1))).unwrap();
        assert_eq!(closed_avoidance_set(&IntervalUnion::empty(), &unbounded), Err(Error::UnboundedWindow));
    }

    #[test]
    fn complement_kernel_of_removable_point() {
        let a = union(&[((0, 1), (1, 1)), ((1, 1), (2, 1))]);
        let c = a.complement_kernel().unwrap();
        let want = normalize(vec![
            OpenInterval::new(Bound::NegInf, Bound::Finite(r(0, 1))).unwrap(),
            OpenInterval::new(Bound::Finite(r(2, 1)), Bound::PosInf).unwrap(),
        ])
        .unwrap();
        assert_eq!(c, want);
        assert_eq!(IntervalUnion::full().complement_kernel().unwrap(), IntervalUnion::empty());
        assert_eq!(IntervalUnion::empty().complement_kernel().unwrap(), IntervalUnion::full());
    }

    #[test]
    fn conical_tail_of_unit_interval() {
        let t = union(&[((0, 1), (1, 1))]).conical_tail().unwrap();
        assert_eq!(t, ConicalTail { l0: 1, left: false, right: true });
        let t = union(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]).conical_tail().unwrap();
        assert_eq!(t, ConicalTail { l0: 2, left: false, right: false });
    }
}
