//! The lower density operator on sets `A = G △ E` with `G` open and `E` a
//! finite set of points. Since `E` is meager, `Φ(A)` depends on `G` alone
//! through the regular open kernel of the complement.

mod axioms;
mod pi03;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::Serialize;

use crate::cantorsets::{BitWord, CantorPoint, CylTree};
use crate::density::cantor::CantorChecker;
use crate::density::real::check_dispersion_r_traced;
use crate::density::{
    CantorFailure, CantorWitness, Horizons, RealFailure, RealWitness, Trace, Verdict, POLICY_VERSION,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::realsets::{IntervalUnion, Tri};

pub use axioms::{axioms_suite, AxiomCheck, AxiomsReport, Violation};
pub use pi03::{block_avoidance_set, pi03_presentation, Pi03Layer, Pi03Presentation};

/// `base △ toggles`, with `base` open and `toggles` pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BairePresentation<B, P> {
    pub base: B,
    pub toggles: Vec<P>,
}

impl<B, P: PartialEq> BairePresentation<B, P> {
    pub fn new(base: B) -> Self {
        BairePresentation { base, toggles: Vec::new() }
    }

    pub fn with_toggles(base: B, toggles: Vec<P>) -> Result<Self>
    where
        P: fmt::Display,
    {
        for (idx, p) in toggles.iter().enumerate() {
            if toggles[..idx].contains(p) {
                return Err(Error::Parse(format!("point {p} toggled twice")));
            }
        }
        Ok(BairePresentation { base, toggles })
    }

    pub fn is_toggled(&self, x: &P) -> bool {
        self.toggles.contains(x)
    }
}

pub type RealPresentation = BairePresentation<IntervalUnion, Rational>;
pub type CantorPresentation = BairePresentation<CylTree, CantorPoint>;
pub type Presentation<S> = BairePresentation<<S as Space>::Set, <S as Space>::Point>;

/// Outcome of one density check, reduced to what the harnesses compare.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub verdict: &'static str,
    pub exact: bool,
    pub trace: String,
}

impl Evaluation {
    pub fn is_verified(&self) -> bool {
        self.verdict == "verified"
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == "refuted"
    }
}

/// The operations the harnesses need from a space.
pub trait Space {
    type Set: Clone + Eq + Hash;
    type Point: Clone + PartialEq + fmt::Display;
    type Witness;
    type Failure;
    type Grid: fmt::Display;
    const NAME: &'static str;

    fn empty() -> Self::Set;
    fn full() -> Self::Set;
    /// Regular open kernel of the complement of an open set.
    fn complement_kernel(open: &Self::Set) -> Result<Self::Set>;
    fn contains(open: &Self::Set, x: &Self::Point) -> Tri;
    fn closure_contains(open: &Self::Set, x: &Self::Point) -> Tri;
    fn intersection(a: &Self::Set, b: &Self::Set) -> Result<Self::Set>;
    fn grid_points(grid: &Self::Grid) -> Result<Vec<Self::Point>>;
    fn check(kernel: &Self::Set, x: &Self::Point, h: &Horizons) -> Result<Verdict<Self::Witness, Self::Failure>>;
    /// Density checks against `kernel` at every point, in order.
    fn evaluate(kernel: &Self::Set, points: &[Self::Point], h: &Horizons) -> Result<Vec<Evaluation>>;

    /// Membership in `base △ toggles`.
    fn member(a: &Presentation<Self>, x: &Self::Point) -> Tri {
        match Self::contains(&a.base, x) {
            Tri::Yes => Tri::from_bool(!a.is_toggled(x)),
            Tri::No => Tri::from_bool(a.is_toggled(x)),
            unknown => unknown,
        }
    }
}

pub struct Real;
pub struct Cantor;

/// `lo, lo + step, ..., hi`, written `lo:hi:step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealGrid {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
}

impl Default for RealGrid {
    fn default() -> Self {
        RealGrid { lo: Rational::from_integer(-2), hi: Rational::from_integer(2), step: Rational::new(1, 32) }
    }
}

impl RealGrid {
    pub fn points(&self) -> Result<Vec<Rational>> {
        if !self.step.is_positive() || self.lo > self.hi {
            return Err(Error::Parse(format!("empty grid {self}")));
        }
        let mut out = Vec::new();
        let mut x = self.lo.clone();
        while x <= self.hi {
            out.push(x.clone());
            x = &x + &self.step;
        }
        Ok(out)
    }
}

impl fmt::Display for RealGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for RealGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::Parse(format!("expected lo:hi:step, got `{s}`")));
        };
        let grid = RealGrid { lo: lo.trim().parse()?, hi: hi.trim().parse()?, step: step.trim().parse()? };
        grid.points()?;
        Ok(grid)
    }
}

/// Every eventually periodic point with `|pre| <= max_pre` and
/// `|period| <= max_period`, written `max_pre:max_period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CantorGrid {
    pub max_pre: usize,
    pub max_period: usize,
}

impl Default for CantorGrid {
    fn default() -> Self {
        CantorGrid { max_pre: 4, max_period: 2 }
    }
}

impl fmt::Display for CantorGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.max_pre, self.max_period)
    }
}

impl FromStr for CantorGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected max_pre:max_period, got `{s}`"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let grid = CantorGrid {
            max_pre: a.trim().parse().map_err(|_| bad())?,
            max_period: b.trim().parse().map_err(|_| bad())?,
        };
        if grid.max_period == 0 {
            return Err(bad());
        }
        Ok(grid)
    }
}

impl Space for Real {
    type Set = IntervalUnion;
    type Point = Rational;
    type Witness = RealWitness;
    type Failure = RealFailure;
    type Grid = RealGrid;
    const NAME: &'static str = "r";

    fn empty() -> IntervalUnion {
        IntervalUnion::empty()
    }

    fn full() -> IntervalUnion {
        IntervalUnion::full()
    }

    fn complement_kernel(open: &IntervalUnion) -> Result<IntervalUnion> {
        open.complement_kernel()
    }

    fn contains(open: &IntervalUnion, x: &Rational) -> Tri {
        open.contains(x)
    }

    fn closure_contains(open: &IntervalUnion, x: &Rational) -> Tri {
        open.closure_contains(x)
    }

    fn intersection(a: &IntervalUnion, b: &IntervalUnion) -> Result<IntervalUnion> {
        a.intersection(b)
    }

    fn grid_points(grid: &RealGrid) -> Result<Vec<Rational>> {
        grid.points()
    }

    fn check(kernel: &IntervalUnion, x: &Rational, h: &Horizons) -> Result<Verdict<RealWitness, RealFailure>> {
        check_dispersion_r_traced(kernel, x, h, &mut Trace::new())
    }

    fn evaluate(kernel: &IntervalUnion, points: &[Rational], h: &Horizons) -> Result<Vec<Evaluation>> {
        points
            .iter()
            .map(|x| {
                let mut trace = Trace::new();
                let v = check_dispersion_r_traced(kernel, x, h, &mut trace)?;
                Ok(Evaluation { verdict: v.label(), exact: v.is_exact(), trace: trace.digest() })
            })
            .collect()
    }
}

impl Space for Cantor {
    type Set = CylTree;
    type Point = CantorPoint;
    type Witness = CantorWitness;
    type Failure = CantorFailure;
    type Grid = CantorGrid;
    const NAME: &'static str = "cantor";

    fn empty() -> CylTree {
        CylTree::empty()
    }

    fn full() -> CylTree {
        CylTree::full()
    }

    fn complement_kernel(open: &CylTree) -> Result<CylTree> {
        Ok(open.exterior())
    }

    fn contains(open: &CylTree, x: &CantorPoint) -> Tri {
        Tri::from_bool(open.contains(x))
    }

    fn closure_contains(open: &CylTree, x: &CantorPoint) -> Tri {
        Tri::from_bool(open.closure_contains(x))
    }

    fn intersection(a: &CylTree, b: &CylTree) -> Result<CylTree> {
        Ok(a.intersection(b))
    }

    fn grid_points(grid: &CantorGrid) -> Result<Vec<CantorPoint>> {
        Ok(CantorPoint::enumerate(grid.max_pre, grid.max_period))
    }

    fn check(kernel: &CylTree, x: &CantorPoint, h: &Horizons) -> Result<Verdict<CantorWitness, CantorFailure>> {
        Ok(CantorChecker::new(kernel, h)?.check(x).0)
    }

    fn evaluate(kernel: &CylTree, points: &[CantorPoint], h: &Horizons) -> Result<Vec<Evaluation>> {
        let mut checker = CantorChecker::new(kernel, h)?;
        Ok(points
            .iter()
            .map(|x| {
                let (verdict, exact, trace) = checker.summary(x);
                Evaluation { verdict, exact, trace }
            })
            .collect())
    }
}

/// Whether `x` is a density point of `a`.
pub fn phi_point<S: Space>(
    a: &Presentation<S>,
    x: &S::Point,
    h: &Horizons,
) -> Result<Verdict<S::Witness, S::Failure>> {
    S::check(&S::complement_kernel(&a.base)?, x, h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridEntry {
    pub point: String,
    pub member: Tri,
    pub verdict: &'static str,
    pub exact: bool,
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub space: &'static str,
    pub grid: String,
    pub horizons: Horizons,
    pub policy: &'static str,
    pub entries: Vec<GridEntry>,
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
}

impl GridReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,member,verdict,exact\n");
        for e in &self.entries {
            let member = match &e.member {
                Tri::Yes => "yes",
                Tri::No => "no",
                Tri::Unknown(_) => "unknown",
            };
            out.push_str(&format!("{},{member},{},{}\n", e.point, e.verdict, e.exact));
        }
        out
    }

    /// Points whose verdict is `verified`.
    pub fn verified_points(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.verdict == "verified").map(|e| e.point.as_str()).collect()
    }
}

pub fn phi_grid<S: Space>(a: &Presentation<S>, grid: &S::Grid, h: &Horizons) -> Result<GridReport> {
    let points = S::grid_points(grid)?;
    let evals = S::evaluate(&S::complement_kernel(&a.base)?, &points, h)?;
    let entries: Vec<GridEntry> = points
        .iter()
        .zip(evals)
        .map(|(x, e)| GridEntry {
            point: x.to_string(),
            member: S::member(a, x),
            verdict: e.verdict,
            exact: e.exact,
            trace: e.trace,
        })
        .collect();
    let count = |label: &str| entries.iter().filter(|e| e.verdict == label).count();
    Ok(GridReport {
        space: S::NAME,
        grid: grid.to_string(),
        horizons: h.clone(),
        policy: POLICY_VERSION,
        verified: count("verified"),
        refuted: count("refuted"),
        inconclusive: count("inconclusive"),
        entries,
    })
}

/// `Φ(A)` for a clopen `A` of depth at most `cantor_depth`, assembled from the
/// cylinders of that depth whose two constant tails are both density points.
pub fn phi_clopen(a: &CylTree, h: &Horizons) -> Result<CylTree> {
    let depth = a.depth().ok_or(Error::NotClopen)?;
    if depth > h.cantor_depth as usize {
        return Err(Error::Precondition(format!("clopen depth {depth} exceeds cantor_depth {}", h.cantor_depth)));
    }
    let kernel = a.exterior();
    let mut checker = CantorChecker::new(&kernel, h)?;
    let mut kept = Vec::new();
    for w in BitWord::all(depth) {
        let mut verified = [false; 2];
        for bit in 0..2u8 {
            let x = CantorPoint::new(w.clone(), BitWord::from_bits(vec![bit]))?;
            verified[bit as usize] = match checker.summary(&x).0 {
                "verified" => true,
                "refuted" => false,
                _ => return Err(Error::Inconclusive(format!("no verdict at {x}"))),
            };
        }
        if verified[0] != verified[1] {
            return Err(Error::Replay(format!("cylinder {w} is split by the operator")));
        }
        if verified[0] {
            kept.push(w);
        }
    }
    CylTree::from_antichain(&kept)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub space: &'static str,
    pub points: usize,
    pub violations: Vec<Violation>,
    pub unresolved: Vec<String>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `G ⊆ Φ(G) ⊆ cl(G)` at every point.
pub fn sandwich_check<S: Space>(g: &S::Set, points: &[S::Point], h: &Horizons) -> Result<SandwichReport> {
    let evals = S::evaluate(&S::complement_kernel(g)?, points, h)?;
    let mut violations = Vec::new();
    let mut unresolved = Vec::new();
    for (x, e) in points.iter().zip(&evals) {
        let inside = S::contains(g, x);
        if e.verdict == "inconclusive" {
            unresolved.push(x.to_string());
            continue;
        }
        if inside == Tri::Yes && !e.is_verified() {
            violations.push(Violation::at(x, format!("in G but {}", e.verdict)));
        }
        if e.is_verified() {
            match S::closure_contains(g, x) {
                Tri::No => violations.push(Violation::at(x, "verified outside cl(G)".into())),
                Tri::Unknown(_) => unresolved.push(x.to_string()),
                Tri::Yes => {}
            }
        }
    }
    Ok(SandwichReport { space: S::NAME, points: points.len(), violations, unresolved })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyAnswer {
    pub answer: Tri,
    pub witness: Option<String>,
}

/// Whether `A ⊆ Φ(A)` on the sampled points of `A`.
pub fn topology_membership<S: Space>(
    a: &Presentation<S>,
    sample: &[S::Point],
    h: &Horizons,
) -> Result<TopologyAnswer> {
    let kernel = S::complement_kernel(&a.base)?;
    let mut unknown = None;
    for x in sample {
        match S::member(a, x) {
            Tri::No => continue,
            Tri::Unknown(reason) => {
                unknown.get_or_insert(format!("membership of {x} undecided: {reason}"));
                continue;
            }
            Tri::Yes => {}
        }
        let v = S::check(&kernel, x, h)?;
        match v {
            Verdict::Refuted { .. } => {
                return Ok(TopologyAnswer { answer: Tri::No, witness: Some(x.to_string()) });
            }
            Verdict::Verified { exact: true, .. } => {}
            Verdict::Verified { .. } => {
                unknown.get_or_insert(format!("{x} verified only up to l_max={}", h.l_max));
            }
            Verdict::Inconclusive { reason, .. } => {
                unknown.get_or_insert(format!("{x}: {reason}"));
            }
        }
    }
    let answer = match unknown {
        Some(reason) => Tri::Unknown(reason),
        None => Tri::Yes,
    };
    Ok(TopologyAnswer { answer, witness: None })
}
