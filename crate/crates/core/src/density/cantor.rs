//! The checker on the Cantor space.
//!
//! The states reached by reading `x|l` are eventually periodic in `l`, so the
//! checker knows exactly when the range `(k, l_max]` already shows every
//! state that larger `l` can reach; such verdicts are stamped exact.

use std::collections::HashMap;
use std::rc::Rc;

use super::{CantorFailure, CantorVerdict, CantorWitness, Horizons, Stage, Trace, Verdict};
use crate::cantorsets::{BitWord, CantorPoint, CylStatus, CylTree};
use crate::error::{Error, Result};

/// The states after `x|l` for `l = 0..=l_max`, and the start and length of
/// the cycle that the pairs (state, lasso position) eventually enter.
struct Orbit {
    states: Vec<usize>,
    cycle_start: usize,
    period: usize,
}

impl Orbit {
    fn new(tree: &CylTree, x: &CantorPoint, l_max: usize) -> Orbit {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = vec![tree.root()];
        let (mut cycle_start, mut period) = (None, 0);
        let mut l = 0;
        loop {
            let (q, pos) = (states[l], x.position(l));
            if cycle_start.is_none() {
                if let Some(&first) = seen.get(&(q, pos)) {
                    cycle_start = Some(first);
                    period = l - first;
                } else {
                    seen.insert((q, pos), l);
                }
            }
            if cycle_start.is_some() && l >= l_max {
                break;
            }
            states.push(tree.step(q, x.bit(l)));
            l += 1;
        }
        Orbit { states, cycle_start: cycle_start.expect("finite automaton"), period }
    }
}

/// Lexicographically least `t` of length `k` with `walk(q, t)` empty, given
/// `dist[q] <= k`.
fn least_gap_word(tree: &CylTree, dist: &[Option<usize>], mut q: usize, k: u32) -> BitWord {
    let mut t = BitWord::new();
    for remaining in (0..k as usize).rev() {
        let zero = tree.step(q, 0);
        let bit = if dist[zero].is_some_and(|d| d <= remaining) { 0 } else { 1 };
        t.push(bit);
        q = tree.step(q, bit);
    }
    t
}

/// Dispersion of the open set presented by `tree` at `x`.
pub fn check_dispersion_cantor(tree: &CylTree, x: &CantorPoint, h: &Horizons) -> Result<CantorVerdict> {
    check_dispersion_cantor_traced(tree, x, h, &mut Trace::new())
}

/// Density at `x` of a set whose complement has regular open kernel
/// `complement_kernel`.
pub fn check_density_cantor(complement_kernel: &CylTree, x: &CantorPoint, h: &Horizons) -> Result<CantorVerdict> {
    check_dispersion_cantor(complement_kernel, x, h)
}

pub fn check_dispersion_cantor_traced(
    tree: &CylTree,
    x: &CantorPoint,
    h: &Horizons,
    trace: &mut Trace,
) -> Result<CantorVerdict> {
    h.validate()?;
    let dist = tree.distance_to_empty();
    let orbit = Orbit::new(tree, x, h.l_max as usize);
    let mut v = run(tree, &dist, &orbit.states, h, trace);
    let exact = exactness(tree, &dist, &orbit, &v, h);
    stamp(&mut v, exact);
    Ok(v)
}

/// Repeated checks against one tree. The queries at `x` depend on `x` only
/// through the states read along `x|l`, so points sharing that sequence
/// share one search; only the exactness stamp is recomputed per point.
pub struct CantorChecker<'a> {
    tree: &'a CylTree,
    dist: Vec<Option<usize>>,
    h: Horizons,
    memo: HashMap<Vec<usize>, Rc<(CantorVerdict, String)>>,
}

impl<'a> CantorChecker<'a> {
    pub fn new(tree: &'a CylTree, h: &Horizons) -> Result<Self> {
        h.validate()?;
        Ok(CantorChecker { tree, dist: tree.distance_to_empty(), h: h.clone(), memo: HashMap::new() })
    }

    /// The verdict label, its exactness and the digest of the query trace.
    pub fn summary(&mut self, x: &CantorPoint) -> (&'static str, bool, String) {
        let (orbit, found) = self.search(x);
        let exact = exactness(self.tree, &self.dist, &orbit, &found.0, &self.h);
        (found.0.label(), exact, found.1.clone())
    }

    /// The verdict and the digest of its query trace.
    pub fn check(&mut self, x: &CantorPoint) -> (CantorVerdict, String) {
        let (orbit, found) = self.search(x);
        let mut v = found.0.clone();
        let exact = exactness(self.tree, &self.dist, &orbit, &v, &self.h);
        stamp(&mut v, exact);
        (v, found.1.clone())
    }

    fn search(&mut self, x: &CantorPoint) -> (Orbit, Rc<(CantorVerdict, String)>) {
        let l_max = self.h.l_max as usize;
        let orbit = Orbit::new(self.tree, x, l_max);
        let (tree, dist, h) = (self.tree, &self.dist, &self.h);
        let found = self
            .memo
            .entry(orbit.states[..=l_max].to_vec())
            .or_insert_with(|| {
                let mut trace = Trace::new();
                let v = run(tree, dist, &orbit.states, h, &mut trace);
                Rc::new((v, trace.digest()))
            })
            .clone();
        (orbit, found)
    }
}

fn stamp(v: &mut CantorVerdict, value: bool) {
    match v {
        Verdict::Verified { exact, .. } | Verdict::Refuted { exact, .. } => *exact = value,
        Verdict::Inconclusive { .. } => {}
    }
}

/// A verified stage is exact once the whole cycle of the orbit lies in
/// `(k, l_max]`. A refutation is exact when some state on the cycle never
/// reaches an empty cylinder after some word of length `n0`.
fn exactness(tree: &CylTree, dist: &[Option<usize>], orbit: &Orbit, v: &CantorVerdict, h: &Horizons) -> bool {
    match v {
        Verdict::Verified { stages, .. } => stages.iter().all(|st| {
            let first = orbit.cycle_start.max(st.k as usize + 1);
            first + orbit.period <= h.l_max as usize + 1
        }),
        Verdict::Refuted { n0, .. } => (orbit.cycle_start..orbit.cycle_start + orbit.period).any(|l| {
            BitWord::all(*n0 as usize).any(|s| dist[tree.walk(orbit.states[l], &s)].is_none())
        }),
        Verdict::Inconclusive { .. } => false,
    }
}

fn run(tree: &CylTree, dist: &[Option<usize>], states: &[usize], h: &Horizons, trace: &mut Trace) -> CantorVerdict {
    let mut stages = Vec::new();
    // a later n may still refute after an undecided one
    let mut pending: Option<String> = None;

    for n in 1..=h.n_max {
        let words: Vec<BitWord> = BitWord::all(n as usize).collect();
        let mut found = None;
        let mut every_k_refuted = true;
        let mut last_failures = Vec::new();
        for k in 1..=h.k_max {
            let last_k = k == h.k_max;
            let mut witnesses = Vec::new();
            let mut failing = Vec::new();
            for l in k + 1..=h.l_max {
                let q = states[l as usize];
                let mut first_fail = None;
                for s in &words {
                    let qs = tree.walk(q, s);
                    let d = dist[qs].map_or(u64::MAX, |d| d as u64);
                    trace.record(&[&l.to_le_bytes(), &k.to_le_bytes(), s.bits(), &d.to_le_bytes()]);
                    if d <= k as u64 {
                        witnesses.push(CantorWitness { l, s: s.clone(), t: least_gap_word(tree, dist, qs, k) });
                    } else if first_fail.is_none() {
                        first_fail = Some(s.clone());
                    }
                }
                if let Some(s) = first_fail {
                    failing.push(CantorFailure { l, s });
                    if failing.len() >= h.refute_min as usize && !last_k {
                        break;
                    }
                }
            }
            if failing.is_empty() {
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
            Some(stage) => stages.push(stage),
            None if every_k_refuted => {
                return Verdict::Refuted { n0: n, witnesses: last_failures, exact: false };
            }
            None => {
                pending.get_or_insert(format!(
                    "no k <= {} works at n={n}, but some k fails at fewer than {} values of l <= {}",
                    h.k_max, h.refute_min, h.l_max
                ));
            }
        }
    }
    if let Some(reason) = pending {
        return Verdict::Inconclusive { horizons: h.clone(), reason };
    }
    Verdict::Verified { stages, exact: false }
}

/// Checks every witness of a stage against the raw cylinder statuses of
/// `tree`, and that the stage covers every `(l, s)` with `l` in `(k, l_max]`.
pub fn validate_stage(stage: &Stage<CantorWitness>, tree: &CylTree, x: &CantorPoint, l_max: u32) -> Result<()> {
    let mut expected = Vec::new();
    for l in stage.k + 1..=l_max {
        for s in BitWord::all(stage.n as usize) {
            expected.push((l, s));
        }
    }
    let got: Vec<(u32, BitWord)> = stage.witnesses.iter().map(|w| (w.l, w.s.clone())).collect();
    if got != expected {
        return Err(Error::Replay(format!(
            "stage n={} k={} does not cover every (l, s) with l in ({}, {l_max}]",
            stage.n, stage.k, stage.k
        )));
    }
    for w in &stage.witnesses {
        if w.t.len() != stage.k as usize {
            return Err(Error::Replay(format!("witness t={} at l={} has length != k={}", w.t, w.l, stage.k)));
        }
        let word = x.prefix(w.l as usize).concat(&w.s).concat(&w.t);
        if tree.cylinder_status(&word) != CylStatus::Empty {
            return Err(Error::Replay(format!("cylinder U({word}) meets the set (n={}, l={})", stage.n, w.l)));
        }
    }
    Ok(())
}

/// Builds the stage `(n, k' + k'')` for `A ∩ B` from a stage `(n, k')` of
/// `A` and a stage `(n + k', k'')` of `B`, with witnesses `t' t''`, and
/// re-validates it against `int cl(Ã^c ∪ B̃^c)`.
pub fn compose_intersection_certificate(
    stage_a: &Stage<CantorWitness>,
    stage_b: &Stage<CantorWitness>,
    a_complement_kernel: &CylTree,
    b_complement_kernel: &CylTree,
    x: &CantorPoint,
    h: &Horizons,
) -> Result<Stage<CantorWitness>> {
    if stage_b.n != stage_a.n + stage_a.k {
        return Err(Error::Precondition(format!(
            "second stage must be at n + k' = {}, got {}",
            stage_a.n + stage_a.k,
            stage_b.n
        )));
    }
    let k = stage_a.k + stage_b.k;
    if k >= h.l_max {
        return Err(Error::Precondition(format!("composed k={k} leaves no l <= l_max={}", h.l_max)));
    }
    let a_map: HashMap<(u32, &BitWord), &BitWord> =
        stage_a.witnesses.iter().map(|w| ((w.l, &w.s), &w.t)).collect();
    let b_map: HashMap<(u32, &BitWord), &BitWord> =
        stage_b.witnesses.iter().map(|w| ((w.l, &w.s), &w.t)).collect();
    let mut witnesses = Vec::new();
    for l in k + 1..=h.l_max {
        for s in BitWord::all(stage_a.n as usize) {
            let missing = || Error::Precondition(format!("no witness for l={l} in a component certificate"));
            let t1 = *a_map.get(&(l, &s)).ok_or_else(missing)?;
            let s2 = s.concat(t1);
            let t2 = *b_map.get(&(l, &s2)).ok_or_else(missing)?;
            let t = t1.concat(t2);
            witnesses.push(CantorWitness { l, s, t });
        }
    }
    let composed = Stage { n: stage_a.n, k, witnesses };
    let c = a_complement_kernel.union(b_complement_kernel).regular_open_kernel();
    validate_stage(&composed, &c, x, h.l_max)
        .map_err(|e| Error::Replay(format!("composed certificate failed to re-validate: {e}")))?;
    Ok(composed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn tree(words: &[&str]) -> CylTree {
        let ws: Vec<BitWord> = words.iter().map(|s| w(s)).collect();
        CylTree::from_antichain(&ws).unwrap()
    }

    fn small() -> Horizons {
        Horizons { n_max: 3, k_max: 6, l_max: 24, ..Horizons::default() }
    }

    #[test]
    fn dispersion_examples() {
        let zero = CantorPoint::zero();
        let v = check_dispersion_cantor(&tree(&["10"]), &zero, &small()).unwrap();
        assert!(v.is_verified() && v.is_exact(), "{v:?}");
        let v = check_dispersion_cantor(&CylTree::full(), &zero, &small()).unwrap();
        assert!(matches!(v, Verdict::Refuted { n0: 1, exact: true, .. }));
        let v = check_dispersion_cantor(&CylTree::empty(), &zero, &small()).unwrap();
        let Verdict::Verified { stages, .. } = v else { panic!() };
        assert!(stages.iter().all(|s| s.k == 1));
    }

    #[test]
    fn density_examples() {
        let u1 = tree(&["1"]);
        let ck = u1.exterior();
        let ones = CantorPoint::constant(1);
        assert!(check_density_cantor(&ck, &ones, &small()).unwrap().is_verified());
        let v = check_density_cantor(&ck, &CantorPoint::zero(), &small()).unwrap();
        assert!(matches!(v, Verdict::Refuted { n0: 1, .. }));
        let v = check_density_cantor(&CylTree::empty(), &ones, &small()).unwrap();
        assert!(v.is_verified());
    }

    #[test]
    fn verified_stages_replay() {
        let t = tree(&["0110", "111"]);
        let x = CantorPoint::new(w("01"), w("0")).unwrap();
        let h = small();
        if let Verdict::Verified { stages, .. } = check_dispersion_cantor(&t, &x, &h).unwrap() {
            for s in &stages {
                validate_stage(s, &t, &x, h.l_max).unwrap();
            }
        }
    }

    #[test]
    fn composition_against_kernel_of_union() {
        let h = Horizons { n_max: 8, k_max: 6, l_max: 24, ..Horizons::default() };
        let zero = CantorPoint::zero();
        let (a, b) = (tree(&["110"]), tree(&["111"]));
        let va = check_dispersion_cantor(&a, &zero, &h).unwrap();
        let vb = check_dispersion_cantor(&b, &zero, &h).unwrap();
        let (Verdict::Verified { stages: sa, .. }, Verdict::Verified { stages: sb, .. }) = (va, vb) else {
            panic!()
        };
        let stage_a = &sa[0];
        let stage_b = sb.iter().find(|s| s.n == stage_a.n + stage_a.k).unwrap();
        let c = compose_intersection_certificate(stage_a, stage_b, &a, &b, &zero, &h).unwrap();
        assert_eq!(c.k, stage_a.k + stage_b.k);
        validate_stage(&c, &tree(&["11"]), &zero, h.l_max).unwrap();
        let bad = Stage { n: stage_a.n + 1 + stage_a.k, ..stage_b.clone() };
        assert!(matches!(
            compose_intersection_certificate(stage_a, &bad, &a, &b, &zero, &h),
            Err(Error::Precondition(_))
        ));
    }
}
