//! Catalogued infinite families of open intervals accumulating at a single
//! point.
//!
//! A family is described in base coordinates, where it lives in `(0, top]`
//! and accumulates only at `0` from the right, and is placed on the line by
//! an affine map `t = offset + factor * y`.

use serde::{Deserialize, Serialize};

use super::{OpenInterval, Tri};
use crate::error::{Error, Result};
use crate::rational::{Bound, Rational};

/// Default number of family members a single query may enumerate before it
/// answers `Unknown`.
pub const DEFAULT_BUDGET: usize = 4096;

/// Relative width `w(m)` of the `m`-th component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthRule {
    /// `w(m) = r`
    Const(Rational),
    /// `w(m) = r / m`
    InvM(Rational),
}

impl WidthRule {
    fn at(&self, m: u32) -> Rational {
        match self {
            WidthRule::Const(r) => r.clone(),
            WidthRule::InvM(r) => r / &Rational::from(m as i64),
        }
    }
}

/// Components `(c q^m, c q^m (1 + w(m)))` for `m >= start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScaledSequence {
    pub scale: Rational,
    pub ratio: Rational,
    pub start: u32,
    pub width: WidthRule,
}

impl ScaledSequence {
    pub fn new(scale: Rational, ratio: Rational, start: u32, width: WidthRule) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Unsupported(format!("sequence family: {msg}")));
        if !scale.is_positive() {
            return bad("scale must be positive");
        }
        if !ratio.is_positive() || ratio >= Rational::one() {
            return bad("ratio must lie in (0, 1)");
        }
        let (r, w) = match &width {
            WidthRule::Const(r) => (r, r.clone()),
            WidthRule::InvM(r) => {
                if start == 0 {
                    return bad("1/m widths need start >= 1");
                }
                (r, r / &Rational::from(start as i64 + 1))
            }
        };
        if !r.is_positive() {
            return bad("relative widths must be positive");
        }
        // hi(m+1) < lo(m) for every m >= start; the widest next component is
        // at m = start + 1.
        if &ratio * &(Rational::one() + w) >= Rational::one() {
            return bad("consecutive components overlap or abut");
        }
        Ok(ScaledSequence { scale, ratio, start, width })
    }

    pub fn lo(&self, m: u32) -> Rational {
        &self.scale * &self.ratio.pow(m)
    }

    pub fn hi(&self, m: u32) -> Rational {
        self.lo(m) * (Rational::one() + self.width.at(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LazyKind {
    /// The components of the sequence.
    Components(ScaledSequence),
    /// The bounded gaps `(hi(m+1), lo(m))` between consecutive components.
    Gaps(ScaledSequence),
}

impl LazyKind {
    /// The `idx`-th member in decreasing order, base coordinates.
    pub fn member(&self, idx: u32) -> (Rational, Rational) {
        match self {
            LazyKind::Components(s) => {
                let m = s.start + idx;
                (s.lo(m), s.hi(m))
            }
            LazyKind::Gaps(s) => {
                let m = s.start + idx;
                (s.hi(m + 1), s.lo(m))
            }
        }
    }

    pub fn top(&self) -> Rational {
        self.member(0).1
    }

    /// The family of open gaps of this one inside its hull `(0, top)`.
    pub fn inner_exterior(&self) -> LazyKind {
        match self {
            LazyKind::Components(s) => LazyKind::Gaps(s.clone()),
            LazyKind::Gaps(s) => {
                let mut s = s.clone();
                s.start += 1;
                LazyKind::Components(s)
            }
        }
    }
}

/// A catalogued family placed on the line by `t = offset + factor * y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LazyTail {
    pub kind: LazyKind,
    pub offset: Rational,
    pub factor: Rational,
    pub budget: usize,
}

impl LazyTail {
    pub fn new(kind: LazyKind) -> LazyTail {
        LazyTail { kind, offset: Rational::zero(), factor: Rational::one(), budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> LazyTail {
        self.budget = budget;
        self
    }

    /// The single accumulation point.
    pub fn accumulation(&self) -> &Rational {
        &self.offset
    }

    fn to_world(&self, y: &Rational) -> Rational {
        &self.offset + &(&self.factor * y)
    }

    fn to_base(&self, t: &Rational) -> Rational {
        &(t - &self.offset) / &self.factor
    }

    fn bound_to_base(&self, b: &Bound) -> Bound {
        match b {
            Bound::Finite(t) => Bound::Finite(self.to_base(t)),
            inf if self.factor.is_positive() => inf.clone(),
            inf => inf.negate(),
        }
    }

    /// Closed hull `[lo, hi]` of the family on the line.
    pub fn hull(&self) -> (Rational, Rational) {
        let a = self.offset.clone();
        let b = self.to_world(&self.kind.top());
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn shifted(&self, x: &Rational) -> LazyTail {
        LazyTail { offset: &self.offset + x, ..self.clone() }
    }

    pub fn scaled(&self, alpha: &Rational) -> LazyTail {
        LazyTail {
            offset: &self.offset * alpha,
            factor: &self.factor * alpha,
            ..self.clone()
        }
    }

    pub fn with_kind(&self, kind: LazyKind) -> LazyTail {
        LazyTail { kind, ..self.clone() }
    }

    /// World-coordinate member intervals, largest base first.
    pub fn world_member(&self, idx: u32) -> OpenInterval {
        let (a, b) = self.kind.member(idx);
        let (a, b) = (self.to_world(&a), self.to_world(&b));
        if a < b {
            OpenInterval::finite(a, b)
        } else {
            OpenInterval::finite(b, a)
        }
    }

    fn horizon(&self) -> String {
        format!(
            "enumeration budget {} exhausted near accumulation point {}",
            self.budget, self.offset
        )
    }

    /// Does the family meet the open window?
    pub fn intersects(&self, window: &OpenInterval) -> Tri {
        let (mut u, mut v) = (self.bound_to_base(&window.lo), self.bound_to_base(&window.hi));
        if self.factor.is_negative() {
            std::mem::swap(&mut u, &mut v);
        }
        let zero = Rational::zero();
        if !v.greater_than(&zero) {
            return Tri::No;
        }
        let u = match u {
            Bound::Finite(u) if u.is_positive() => u,
            _ => return Tri::Yes,
        };
        for idx in 0..self.budget as u32 {
            let (a, b) = self.kind.member(idx);
            if b <= u {
                return Tri::No;
            }
            if v.greater_than(&a) {
                return Tri::Yes;
            }
        }
        Tri::Unknown(self.horizon())
    }

    pub fn contains(&self, t: &Rational) -> Tri {
        let y = self.to_base(t);
        if !y.is_positive() {
            return Tri::No;
        }
        for idx in 0..self.budget as u32 {
            let (a, b) = self.kind.member(idx);
            if b <= y {
                return Tri::No;
            }
            if a < y {
                return Tri::Yes;
            }
        }
        Tri::Unknown(self.horizon())
    }

    pub fn closure_contains(&self, t: &Rational) -> Tri {
        let y = self.to_base(t);
        if y.is_zero() {
            return Tri::Yes;
        }
        if y.is_negative() {
            return Tri::No;
        }
        for idx in 0..self.budget as u32 {
            let (a, b) = self.kind.member(idx);
            if b < y {
                return Tri::No;
            }
            if a <= y {
                return Tri::Yes;
            }
        }
        Tri::Unknown(self.horizon())
    }

    /// Members lying entirely outside the `eta`-ball around the accumulation
    /// point, in world coordinates.
    pub fn members_outside(&self, eta: &Rational) -> Result<Vec<OpenInterval>> {
        let eta_base = eta / &self.factor.abs();
        let mut out = Vec::new();
        for idx in 0..self.budget as u32 {
            let (a, _) = self.kind.member(idx);
            if a < eta_base {
                return Ok(out);
            }
            out.push(self.world_member(idx));
        }
        Err(Error::Inconclusive(self.horizon()))
    }

    /// Members overlapping the `eta`-ball, plus the ball itself, are what
    /// [`members_outside`](Self::members_outside) leaves out.
    pub fn members_straddling(&self, eta: &Rational) -> Result<Vec<OpenInterval>> {
        let eta_base = eta / &self.factor.abs();
        let mut out = Vec::new();
        for idx in 0..self.budget as u32 {
            let (a, b) = self.kind.member(idx);
            if b <= eta_base {
                return Ok(out);
            }
            if a < eta_base {
                out.push(self.world_member(idx));
            }
        }
        Err(Error::Inconclusive(self.horizon()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn vanishing() -> LazyTail {
        let s = ScaledSequence::new(r(1, 1), r(1, 2), 1, WidthRule::InvM(r(1, 1))).unwrap();
        LazyTail::new(LazyKind::Components(s))
    }

    #[test]
    fn rejects_overlapping_sequence() {
        assert!(ScaledSequence::new(r(1, 1), r(1, 2), 0, WidthRule::Const(r(1, 1))).is_err());
        assert!(ScaledSequence::new(r(1, 1), r(1, 2), 0, WidthRule::InvM(r(1, 1))).is_err());
    }

    #[test]
    fn vanishing_members() {
        let f = vanishing();
        assert_eq!(f.kind.member(0), (r(1, 2), r(1, 1)));
        assert_eq!(f.kind.member(1), (r(1, 4), r(3, 8)));
        assert_eq!(f.kind.member(2), (r(1, 8), r(1, 6)));
    }

    #[test]
    fn small_budget_is_unknown_near_accumulation() {
        let f = vanishing().with_budget(5);
        let w = OpenInterval::finite(r(11, 10 << 20), r(19, 10 << 20));
        assert!(matches!(f.intersects(&w), Tri::Unknown(_)));
        assert_eq!(vanishing().intersects(&w), Tri::No);
    }

    #[test]
    fn negative_factor_mirrors() {
        let f = vanishing().scaled(&r(-1, 1));
        assert_eq!(f.intersects(&OpenInterval::finite(r(-3, 4), r(-5, 8))), Tri::Yes);
        assert_eq!(f.intersects(&OpenInterval::finite(r(0, 1), r(1, 1))), Tri::No);
        assert_eq!(f.contains(&r(-3, 4)), Tri::Yes);
        assert_eq!(f.hull(), (r(-1, 1), r(0, 1)));
    }
}
