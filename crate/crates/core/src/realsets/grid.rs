//! Occupancy of the uniform grid `(c/m, (c+1)/m)`, `c = -m..m-1`, on
//! `(-1, 1)` by a dilated set `l·S`.

use super::{IntervalUnion, OpenInterval};
use crate::rational::{Bound, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Empty,
    Occupied,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    m: i64,
    cells: Vec<Cell>,
}

impl Grid {
    fn new(m: u64) -> Grid {
        Grid { m: m as i64, cells: vec![Cell::Empty; 2 * m as usize] }
    }

    pub fn resolution(&self) -> u64 {
        self.m as u64
    }

    /// Status of cell `c`, `-m <= c < m`.
    pub fn cell(&self, c: i64) -> Cell {
        self.cells[(c + self.m) as usize]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Cells meeting the open interval `(lo, hi)`.
    fn range(&self, lo: &Bound, hi: &Bound) -> Option<(i64, i64)> {
        let m = Rational::from_integer(self.m);
        let first = match lo {
            Bound::NegInf => -self.m,
            Bound::Finite(x) => (x * &m).floor_i64().unwrap_or(i64::MAX).max(-self.m),
            Bound::PosInf => return None,
        };
        let last = match hi {
            Bound::PosInf => self.m - 1,
            Bound::Finite(x) => (x * &m).ceil_i64().unwrap_or(i64::MIN).saturating_sub(1).min(self.m - 1),
            Bound::NegInf => return None,
        };
        (first <= last).then_some((first, last))
    }

    fn mark(&mut self, lo: &Bound, hi: &Bound, value: Cell) {
        if let Some((a, b)) = self.range(lo, hi) {
            for c in a..=b {
                let slot = &mut self.cells[(c + self.m) as usize];
                match (*slot, value) {
                    (Cell::Occupied, _) => {}
                    (_, Cell::Occupied) => *slot = Cell::Occupied,
                    (Cell::Empty, v) => *slot = v,
                    _ => {}
                }
            }
        }
    }

    fn all_occupied(&self, lo: &Bound, hi: &Bound) -> bool {
        match self.range(lo, hi) {
            None => true,
            Some((a, b)) => (a..=b).all(|c| self.cell(c) == Cell::Occupied),
        }
    }
}

/// The window `(c/(l m), (c+1)/(l m))` whose dilation by `l` is cell `c`.
pub fn cell_window(l: u64, m: u64, c: i64) -> OpenInterval {
    let d = (l * m) as i64;
    OpenInterval::finite(Rational::new(c, d), Rational::new(c + 1, d))
}

impl IntervalUnion {
    /// Which grid cells `l·S` meets. A cell is `Unknown` only when the lazy
    /// family's enumeration budget ran out before the cell was decided.
    pub fn grid_occupancy(&self, l: u64, m: u64) -> Grid {
        let mut grid = Grid::new(m);
        let ell = Rational::from_integer(l as i64);
        for iv in &self.finite {
            grid.mark(&iv.lo.scale_pos(&ell), &iv.hi.scale_pos(&ell), Cell::Occupied);
        }
        let Some(tail) = &self.lazy else {
            return grid;
        };
        let acc = tail.accumulation() * &ell;
        let right = tail.factor.is_positive();
        // every neighbourhood of the accumulation point meets the family on
        // the side where the family lies
        let mr = &acc * &Rational::from_integer(m as i64);
        let c = if right { mr.floor_i64() } else { mr.ceil_i64().map(|c| c - 1) };
        if let Some(c) = c {
            grid.mark(
                &Bound::Finite(Rational::new(c, m as i64)),
                &Bound::Finite(Rational::new(c + 1, m as i64)),
                Cell::Occupied,
            );
        }
        let mut rest = (Bound::Finite(acc.clone()), Bound::Finite(acc.clone()));
        for idx in 0..tail.budget as u32 {
            let member = tail.world_member(idx);
            let (lo, hi) = (member.lo.scale_pos(&ell), member.hi.scale_pos(&ell));
            grid.mark(&lo, &hi, Cell::Occupied);
            rest = if right {
                (Bound::Finite(acc.clone()), lo)
            } else {
                (hi, Bound::Finite(acc.clone()))
            };
            if grid.all_occupied(&rest.0, &rest.1) {
                return grid;
            }
        }
        grid.mark(&rest.0, &rest.1, Cell::Unknown);
        grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::{normalize, LazyKind, LazyTail, ScaledSequence, Tri, WidthRule};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn agrees_with_intersects(s: &IntervalUnion, l: u64, m: u64) {
        let g = s.grid_occupancy(l, m);
        for c in -(m as i64)..m as i64 {
            let expected = match s.intersects(&cell_window(l, m, c)) {
                Tri::Yes => Cell::Occupied,
                Tri::No => Cell::Empty,
                Tri::Unknown(_) => Cell::Unknown,
            };
            assert_eq!(g.cell(c), expected, "cell {c} at l={l}, m={m} for {s:?}");
        }
    }

    #[test]
    fn finite_union_matches_window_queries() {
        let s = normalize(vec![
            OpenInterval::finite(r(-1, 1), r(-1, 2)),
            OpenInterval::finite(r(1, 3), r(1, 2)),
        ])
        .unwrap();
        for l in 1..6 {
            for m in [1, 3, 4, 7] {
                agrees_with_intersects(&s, l, m);
            }
        }
    }

    #[test]
    fn lazy_families_match_window_queries() {
        let geo = ScaledSequence::new(r(1, 1), r(1, 10), 1, WidthRule::Const(r(1, 1))).unwrap();
        let van = ScaledSequence::new(r(1, 1), r(1, 2), 1, WidthRule::InvM(r(1, 1))).unwrap();
        for seq in [geo, van] {
            for kind in [LazyKind::Components(seq.clone()), LazyKind::Gaps(seq.clone())] {
                let base = IntervalUnion::from_lazy(LazyTail::new(kind));
                for s in [base.clone(), base.scale(&r(-1, 1)).unwrap(), base.translate(&r(1, 7))] {
                    for (l, m) in [(1, 5), (3, 12), (100, 9), (257, 32)] {
                        agrees_with_intersects(&s, l, m);
                    }
                }
            }
        }
    }
}
