//! The lower density operator axioms, checked pointwise on a grid:
//! (i) `Φ(∅) = ∅` and `Φ(X) = X`, (ii) perturbing `A` by a meager set leaves
//! every query unchanged, (iii) `A △ Φ(A)` avoids the grid outside the
//! perturbation and the boundary, (iv) `Φ(A ∩ B) = Φ(A) ∩ Φ(B)`, and
//! monotonicity.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Evaluation, Presentation, Space};
use crate::density::{Horizons, POLICY_VERSION};
use crate::error::Result;
use crate::realsets::Tri;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub case: String,
    pub point: String,
    pub detail: String,
}

impl Violation {
    pub(super) fn at(x: &impl fmt::Display, detail: String) -> Violation {
        Violation { case: String::new(), point: x.to_string(), detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub cases: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomsReport {
    pub space: &'static str,
    pub horizons: Horizons,
    pub policy: &'static str,
    pub seed: u64,
    pub family: usize,
    pub grid: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations.is_empty())
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

struct Evaluator<'a, S: Space> {
    points: &'a [S::Point],
    h: &'a Horizons,
    cache: HashMap<S::Set, Rc<Vec<Evaluation>>>,
}

impl<'a, S: Space> Evaluator<'a, S> {
    fn of_open(&mut self, base: &S::Set) -> Result<Rc<Vec<Evaluation>>> {
        if let Some(e) = self.cache.get(base) {
            return Ok(e.clone());
        }
        let e = Rc::new(S::evaluate(&S::complement_kernel(base)?, self.points, self.h)?);
        self.cache.insert(base.clone(), e.clone());
        Ok(e)
    }
}

/// Runs every axiom over `family` and the points of the grid. Axiom (ii)
/// draws `perturbations` random finite sets of grid points from a seeded
/// stream.
pub fn axioms_suite<S: Space>(
    family: &[Presentation<S>],
    points: &[S::Point],
    h: &Horizons,
    seed: u64,
    perturbations: usize,
) -> Result<AxiomsReport> {
    let mut ev = Evaluator::<S> { points, h, cache: HashMap::new() };
    let mut checks = Vec::new();

    let mut trivial = AxiomCheck { axiom: "i", cases: 2, violations: Vec::new() };
    for (name, set, expect) in [("empty", S::empty(), "refuted"), ("full", S::full(), "verified")] {
        for (x, e) in points.iter().zip(ev.of_open(&set)?.iter()) {
            if e.verdict != expect {
                trivial.violations.push(case(name, x, format!("expected {expect}, got {}", e.verdict)));
            }
        }
    }
    checks.push(trivial);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturbed = Vec::new();
    let mut meager = AxiomCheck { axiom: "ii", cases: 0, violations: Vec::new() };
    if !family.is_empty() && !points.is_empty() {
        for idx in 0..perturbations {
            let a = family.choose(&mut rng).expect("nonempty family");
            let size = rng.gen_range(1..=3.min(points.len()));
            let mut toggles: Vec<S::Point> = Vec::new();
            for x in points.choose_multiple(&mut rng, size) {
                let x = x.clone();
                if a.toggles.contains(&x) {
                    continue;
                }
                toggles.push(x);
            }
            let mut b = a.clone();
            b.toggles.extend(toggles);
            let fresh = S::evaluate(&S::complement_kernel(&b.base)?, points, h)?;
            let base = ev.of_open(&a.base)?;
            for (x, (e, f)) in points.iter().zip(base.iter().zip(&fresh)) {
                if e != f {
                    meager.violations.push(case(&format!("perturbation {idx}"), x, "query trace changed".into()));
                }
            }
            meager.cases += 1;
            perturbed.push(b);
        }
    }
    checks.push(meager);

    let mut shadow = AxiomCheck { axiom: "iii", cases: 0, violations: Vec::new() };
    for (idx, a) in family.iter().chain(&perturbed).enumerate() {
        shadow.cases += 1;
        let evals = ev.of_open(&a.base)?;
        for (x, e) in points.iter().zip(evals.iter()) {
            if a.is_toggled(x) {
                continue;
            }
            let boundary = S::closure_contains(&a.base, x) == Tri::Yes && S::contains(&a.base, x) == Tri::No;
            if boundary {
                continue;
            }
            let differs = match S::member(a, x) {
                Tri::Yes => !e.is_verified(),
                Tri::No => !e.is_refuted(),
                Tri::Unknown(_) => e.verdict != "inconclusive",
            };
            if differs {
                shadow.violations.push(case(&format!("set {idx}"), x, format!("membership differs from {}", e.verdict)));
            }
        }
    }
    checks.push(shadow);

    let mut meet = AxiomCheck { axiom: "iv", cases: 0, violations: Vec::new() };
    let mut monotone = AxiomCheck { axiom: "monotone", cases: 0, violations: Vec::new() };
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let (a, b) = (&family[i].base, &family[j].base);
            let c = S::intersection(a, b)?;
            let (ea, eb, ec) = (ev.of_open(a)?, ev.of_open(b)?, ev.of_open(&c)?);
            meet.cases += 1;
            for (p, x) in points.iter().enumerate() {
                if ec[p].is_verified() != (ea[p].is_verified() && eb[p].is_verified()) {
                    meet.violations.push(case(
                        &format!("pair ({i}, {j})"),
                        x,
                        format!("meet {} but sides {} and {}", ec[p].verdict, ea[p].verdict, eb[p].verdict),
                    ));
                }
            }
            for (small, large, es, el) in [(i, j, &ea, &eb), (j, i, &eb, &ea)] {
                if c != family[small].base {
                    continue;
                }
                monotone.cases += 1;
                for (p, x) in points.iter().enumerate() {
                    if es[p].is_verified() && !el[p].is_verified() {
                        monotone.violations.push(case(
                            &format!("{small} ⊆ {large}"),
                            x,
                            "verified for the subset only".into(),
                        ));
                    }
                }
            }
        }
    }
    checks.push(meet);
    checks.push(monotone);

    Ok(AxiomsReport {
        space: S::NAME,
        horizons: h.clone(),
        policy: POLICY_VERSION,
        seed,
        family: family.len(),
        grid: points.len(),
        checks,
    })
}

fn case(name: &str, x: &impl fmt::Display, detail: String) -> Violation {
    Violation { case: name.to_string(), point: x.to_string(), detail }
}
