use serde::{Deserialize, Serialize};

use super::OpenInterval;
use crate::rational::{Bound, Rational};

/// `[lo, hi]`, with infinite ends meaning the side is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedInterval {
    pub lo: Bound,
    pub hi: Bound,
}

impl ClosedInterval {
    pub fn new(lo: Bound, hi: Bound) -> ClosedInterval {
        debug_assert!(lo <= hi);
        ClosedInterval { lo, hi }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        !self.lo.greater_than(x) && !self.hi.less_than(x)
    }
}

/// A finite union of closed intervals, kept sorted, disjoint, and maximal:
/// consecutive members are separated by a gap of positive length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClosedIntervalUnion {
    parts: Vec<ClosedInterval>,
}

impl ClosedIntervalUnion {
    pub fn empty() -> Self {
        ClosedIntervalUnion { parts: Vec::new() }
    }

    pub fn full() -> Self {
        ClosedIntervalUnion { parts: vec![ClosedInterval::new(Bound::NegInf, Bound::PosInf)] }
    }

    pub fn from_parts(mut parts: Vec<ClosedInterval>) -> Self {
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut out: Vec<ClosedInterval> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        ClosedIntervalUnion { parts: out }
    }

    /// Complement of a sorted, pairwise-disjoint list of open intervals.
    /// Abutting members leave their shared endpoint as a singleton.
    pub fn complement_of_open(open: &[OpenInterval]) -> Self {
        let mut parts = Vec::with_capacity(open.len() + 1);
        let mut cursor = Bound::NegInf;
        for iv in open {
            if iv.lo != Bound::NegInf {
                parts.push(ClosedInterval::new(cursor.clone(), iv.lo.clone()));
            }
            cursor = iv.hi.clone();
        }
        if cursor != Bound::PosInf {
            parts.push(ClosedInterval::new(cursor, Bound::PosInf));
        }
        ClosedIntervalUnion::from_parts(parts)
    }

    pub fn parts(&self) -> &[ClosedInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        matches!(self.parts.as_slice(), [p] if p.lo == Bound::NegInf && p.hi == Bound::PosInf)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let idx = self.parts.partition_point(|p| p.hi.less_than(x));
        self.parts.get(idx).is_some_and(|p| p.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        ClosedIntervalUnion::from_parts(parts)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.parts, &other.parts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.clone().max(b[j].lo.clone());
            let hi = a[i].hi.clone().min(b[j].hi.clone());
            if lo <= hi {
                out.push(ClosedInterval::new(lo, hi));
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        ClosedIntervalUnion { parts: out }
    }

    /// `self ⊆ other` as point sets.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.intersection(other) == *self
    }
}

impl Serialize for ClosedIntervalUnion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.parts.len()))?;
        for p in &self.parts {
            seq.serialize_element(&[p.lo.to_string(), p.hi.to_string()])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ClosedIntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<(Bound, Bound)> = Vec::deserialize(deserializer)?;
        let mut parts = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            if lo > hi {
                return Err(serde::de::Error::custom("closed interval with lo > hi"));
            }
            parts.push(ClosedInterval::new(lo, hi));
        }
        Ok(ClosedIntervalUnion::from_parts(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(p: i64, q: i64) -> Bound {
        Bound::Finite(Rational::new(p, q))
    }

    #[test]
    fn touching_parts_merge() {
        let u = ClosedIntervalUnion::from_parts(vec![
            ClosedInterval::new(fin(2, 1), fin(3, 1)),
            ClosedInterval::new(fin(0, 1), fin(2, 1)),
        ]);
        assert_eq!(u.parts().len(), 1);
    }

    #[test]
    fn complement_keeps_shared_endpoint() {
        let open = vec![
            OpenInterval::finite(Rational::new(0, 1), Rational::new(1, 1)),
            OpenInterval::finite(Rational::new(1, 1), Rational::new(2, 1)),
        ];
        let c = ClosedIntervalUnion::complement_of_open(&open);
        assert!(c.contains(&Rational::new(1, 1)));
        assert!(!c.contains(&Rational::new(1, 2)));
        assert_eq!(c.parts().len(), 3);
    }

    #[test]
    fn intersection_of_points() {
        let a = ClosedIntervalUnion::from_parts(vec![ClosedInterval::new(fin(0, 1), fin(1, 1))]);
        let b = ClosedIntervalUnion::from_parts(vec![ClosedInterval::new(fin(1, 1), fin(2, 1))]);
        let c = a.intersection(&b);
        assert_eq!(c.parts(), &[ClosedInterval::new(fin(1, 1), fin(1, 1))]);
    }
}
