//! Certificate documents and their standalone replay.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::cantor::validate_stage;
use super::real::gap_window;
use super::{
    CantorFailure, CantorWitness, Horizons, RealFailure, RealWitness, Stage, Verdict, POLICY_VERSION,
};
use crate::cantorsets::{BitWord, CantorPoint, CylStatus, CylTree};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::realsets::{IntervalUnion, Tri};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation<F> {
    pub n0: u32,
    pub witnesses: Vec<F>,
}

/// A verdict together with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate<W, F> {
    pub space: String,
    pub point: String,
    pub horizons: Horizons,
    pub policy: String,
    pub verdict: String,
    pub stages: Vec<Stage<W>>,
    pub refutation: Option<Refutation<F>>,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub type RealCertificate = Certificate<RealWitness, RealFailure>;
pub type CantorCertificate = Certificate<CantorWitness, CantorFailure>;

impl<W: Clone, F: Clone> Certificate<W, F> {
    pub fn new(space: &str, point: String, horizons: &Horizons, verdict: &Verdict<W, F>) -> Self {
        let (stages, refutation, reason) = match verdict {
            Verdict::Verified { stages, .. } => (stages.clone(), None, None),
            Verdict::Refuted { n0, witnesses, .. } => {
                (Vec::new(), Some(Refutation { n0: *n0, witnesses: witnesses.clone() }), None)
            }
            Verdict::Inconclusive { reason, .. } => (Vec::new(), None, Some(reason.clone())),
        };
        Certificate {
            space: space.into(),
            point,
            horizons: horizons.clone(),
            policy: POLICY_VERSION.into(),
            verdict: verdict.label().into(),
            stages,
            refutation,
            exact: verdict.is_exact(),
            reason,
        }
    }

    pub fn to_verdict(&self) -> Result<Verdict<W, F>> {
        match (self.verdict.as_str(), &self.refutation) {
            ("verified", None) => Ok(Verdict::Verified { stages: self.stages.clone(), exact: self.exact }),
            ("refuted", Some(r)) => {
                Ok(Verdict::Refuted { n0: r.n0, witnesses: r.witnesses.clone(), exact: self.exact })
            }
            ("inconclusive", None) => Ok(Verdict::Inconclusive {
                horizons: self.horizons.clone(),
                reason: self.reason.clone().unwrap_or_default(),
            }),
            (v, _) => Err(Error::Replay(format!("inconsistent verdict `{v}`"))),
        }
    }
}

fn check_stage_ns<W>(stages: &[Stage<W>], n_max: u32) -> Result<()> {
    let ns: Vec<u32> = stages.iter().map(|s| s.n).collect();
    if ns != (1..=n_max).collect::<Vec<_>>() {
        return Err(Error::Replay(format!("stages {ns:?} do not cover n = 1..={n_max}")));
    }
    Ok(())
}

fn check_refutation_shape<L: Copy + Ord>(ls: &[L], k_max: L, refute_min: u32) -> Result<()> {
    if ls.len() < refute_min as usize {
        return Err(Error::Replay(format!("refutation lists {} values of l, fewer than {refute_min}", ls.len())));
    }
    if ls.windows(2).any(|w| w[0] >= w[1]) || ls.first().is_some_and(|&l| l <= k_max) {
        return Err(Error::Replay("refutation values of l must be increasing and exceed k_max".into()));
    }
    Ok(())
}

/// Replays every recorded emptiness query against the raw set `g`.
pub fn replay_real(cert: &RealCertificate, g: &IntervalUnion) -> Result<()> {
    if cert.space != "r" {
        return Err(Error::Replay(format!("expected space `r`, got `{}`", cert.space)));
    }
    let h = &cert.horizons;
    h.validate()?;
    let x: Rational = cert.point.parse()?;
    let g = g.translate(&x);
    match cert.to_verdict()? {
        Verdict::Verified { stages, .. } => {
            check_stage_ns(&stages, h.n_max)?;
            for st in &stages {
                let (n, k) = (st.n, st.k);
                if k < 1 || k > h.k_max {
                    return Err(Error::Replay(format!("stage n={n} has k={k} outside 1..={}", h.k_max)));
                }
                let keys: Vec<(u32, i64)> = st.witnesses.iter().map(|w| (w.l, w.i)).collect();
                let expected: Vec<(u32, i64)> =
                    (k + 1..=h.l_max).flat_map(|l| (-(n as i64)..n as i64).map(move |i| (l, i))).collect();
                if keys != expected {
                    return Err(Error::Replay(format!("stage n={n} does not cover every (l, i)")));
                }
                for w in &st.witnesses {
                    if w.j < 1 || w.j > k {
                        return Err(Error::Replay(format!("j={} out of range at n={n}", w.j)));
                    }
                    if g.intersects(&gap_window(n, k, w.l, w.i, w.j)) != Tri::No {
                        return Err(Error::Replay(format!(
                            "window for (n={n}, k={k}, l={}, i={}, j={}) meets the set",
                            w.l, w.i, w.j
                        )));
                    }
                }
            }
            Ok(())
        }
        Verdict::Refuted { n0, witnesses, .. } => {
            let ls: Vec<u32> = witnesses.iter().map(|w| w.l).collect();
            check_refutation_shape(&ls, h.k_max, h.refute_min)?;
            for f in &witnesses {
                if f.i < -(n0 as i64) || f.i >= n0 as i64 {
                    return Err(Error::Replay(format!("block i={} out of range", f.i)));
                }
                for j in 1..=h.k_max {
                    if !g.intersects(&gap_window(n0, h.k_max, f.l, f.i, j)).is_yes() {
                        return Err(Error::Replay(format!("(l={}, i={}) has an empty cell j={j}", f.l, f.i)));
                    }
                }
            }
            Ok(())
        }
        Verdict::Inconclusive { .. } => Ok(()),
    }
}

/// Whether every extension of `w` by `k` bits meets the set, explored through
/// cylinder statuses.
fn all_extensions_meet(tree: &CylTree, w: &BitWord, k: u32) -> bool {
    fn go(tree: &CylTree, q: usize, k: u32, memo: &mut HashMap<(usize, u32), bool>) -> bool {
        match tree.state_status(q) {
            CylStatus::Empty => return false,
            CylStatus::Covered => return true,
            CylStatus::Mixed if k == 0 => return true,
            CylStatus::Mixed => {}
        }
        if let Some(&v) = memo.get(&(q, k)) {
            return v;
        }
        let v = go(tree, tree.step(q, 0), k - 1, memo) && go(tree, tree.step(q, 1), k - 1, memo);
        memo.insert((q, k), v);
        v
    }
    go(tree, tree.walk(tree.root(), w), k, &mut HashMap::new())
}

/// Replays every recorded cylinder query against the raw tree.
pub fn replay_cantor(cert: &CantorCertificate, tree: &CylTree) -> Result<()> {
    if cert.space != "cantor" {
        return Err(Error::Replay(format!("expected space `cantor`, got `{}`", cert.space)));
    }
    let h = &cert.horizons;
    h.validate()?;
    let x: CantorPoint = cert.point.parse()?;
    match cert.to_verdict()? {
        Verdict::Verified { stages, .. } => {
            check_stage_ns(&stages, h.n_max)?;
            for st in &stages {
                if st.k < 1 || st.k > h.k_max {
                    return Err(Error::Replay(format!("stage n={} has k={} out of range", st.n, st.k)));
                }
                validate_stage(st, tree, &x, h.l_max)?;
            }
            Ok(())
        }
        Verdict::Refuted { n0, witnesses, .. } => {
            let ls: Vec<u32> = witnesses.iter().map(|w| w.l).collect();
            check_refutation_shape(&ls, h.k_max, h.refute_min)?;
            for f in &witnesses {
                if f.s.len() != n0 as usize {
                    return Err(Error::Replay(format!("word s={} is not of length n0={n0}", f.s)));
                }
                let w = x.prefix(f.l as usize).concat(&f.s);
                if !all_extensions_meet(tree, &w, h.k_max) {
                    return Err(Error::Replay(format!("(l={}, s={}) has an empty extension", f.l, f.s)));
                }
            }
            Ok(())
        }
        Verdict::Inconclusive { .. } => Ok(()),
    }
}
