//! The sequence definition of dispersion at finite resolution, used to
//! cross-check the combinatorial checker in both directions.
//!
//! `0` is a dispersion point of `G` when every increasing sequence has a
//! subsequence `(r_s)` along which `limsup ((-1,1) ∩ r_s G)` is meager. The
//! oracle truncates the limsup to finitely many terms and tests nowhere
//! density (or density, for the converse) at a fixed resolution.

use serde::{Serialize, Serializer};

use crate::density::{
    check_dispersion_r, extract_subsequence, refutation_to_witnesses, Horizons, RealVerdict, Verdict,
};
use crate::error::{Error, Result};
use crate::rational::{Bound, Rational};
use crate::realsets::{normalize, ClosedInterval, ClosedIntervalUnion, IntervalUnion, OpenInterval};
use crate::sequence::SequenceDescriptor;

/// Tails `T_p = ⋃_{k=p}^{K} (n_k G) ∩ (-1, 1)` for `p = 1..=P` and their
/// intersection. Terms beyond `K` are not seen, so each `T_p` may be
/// smaller than the true tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimsupApprox {
    pub p: u32,
    pub k: u32,
    pub tails: Vec<IntervalUnion>,
    pub intersection: IntervalUnion,
}

fn unit() -> OpenInterval {
    OpenInterval::finite(Rational::from_integer(-1), Rational::one())
}

/// Requires a finite union; lazy families are first replaced by a finite
/// approximation (see [`cross_validate`]).
pub fn limsup_truncated(g: &IntervalUnion, seq: &SequenceDescriptor, p: u32, k: u32) -> Result<LimsupApprox> {
    if !g.is_finite() {
        return Err(Error::Unsupported("limsup of a lazy family; approximate it first".into()));
    }
    if p > k || p < 1 {
        return Err(Error::Precondition(format!("need 1 <= P <= K, got P={p}, K={k}")));
    }
    let terms = first_terms(seq, k as usize)?;
    let window = IntervalUnion::single(unit());
    let dilated: Vec<IntervalUnion> = terms
        .iter()
        .map(|&t| g.scale(&Rational::from_integer(t as i64))?.intersection(&window))
        .collect::<Result<_>>()?;
    let mut tails = Vec::with_capacity(p as usize);
    for start in 0..p as usize {
        let parts: Vec<OpenInterval> = dilated[start..].iter().flat_map(|d| d.intervals().to_vec()).collect();
        tails.push(normalize(parts)?);
    }
    let mut intersection = tails[0].clone();
    for t in &tails[1..] {
        intersection = intersection.intersection(t)?;
    }
    Ok(LimsupApprox { p, k, tails, intersection })
}

fn first_terms(seq: &SequenceDescriptor, count: usize) -> Result<Vec<u64>> {
    if let SequenceDescriptor::Explicit { terms } = seq {
        seq.validate()?;
        if terms.len() < count {
            return Err(Error::Precondition(format!("sequence has {} terms, {count} needed", terms.len())));
        }
        return Ok(terms[..count].to_vec());
    }
    let mut bound = count as u64;
    loop {
        let t = seq.terms_upto(bound)?;
        if t.len() >= count {
            return Ok(t[..count].to_vec());
        }
        bound = bound.saturating_mul(4);
    }
}

/// Closed pieces of `[-1, 1] ∖ w`.
fn gaps_in_unit(w: &IntervalUnion) -> ClosedIntervalUnion {
    let closed_unit = ClosedIntervalUnion::from_parts(vec![ClosedInterval::new(
        Bound::Finite(Rational::from_integer(-1)),
        Bound::Finite(Rational::one()),
    )]);
    ClosedIntervalUnion::complement_of_open(w.intervals()).intersection(&closed_unit)
}

fn length(c: &ClosedInterval) -> Rational {
    match (&c.lo, &c.hi) {
        (Bound::Finite(a), Bound::Finite(b)) => b - a,
        _ => unreachable!("pieces of [-1, 1] are bounded"),
    }
}

/// Every window `[a, a + eps] ⊆ [-1, 1]` contains an open interval of length
/// `delta` missing `w`.
pub fn nowhere_dense_at_resolution(w: &IntervalUnion, eps: &Rational, delta: &Rational) -> Result<bool> {
    if !delta.is_positive() || delta >= eps {
        return Err(Error::Precondition("need 0 < delta < eps".into()));
    }
    if !w.is_finite() {
        return Err(Error::Unsupported("resolution check of a lazy family".into()));
    }
    // a gap [g1, g2] serves exactly the window starts a in [g1 - eps + delta, g2 - delta]
    let starts: Vec<ClosedInterval> = gaps_in_unit(w)
        .parts()
        .iter()
        .filter(|g| length(g) >= *delta)
        .map(|g| {
            let (g1, g2) = (g.lo.finite().unwrap(), g.hi.finite().unwrap());
            ClosedInterval::new(Bound::Finite(&(g1 - eps) + delta), Bound::Finite(g2 - delta))
        })
        .collect();
    let needed = ClosedIntervalUnion::from_parts(vec![ClosedInterval::new(
        Bound::Finite(Rational::from_integer(-1)),
        Bound::Finite(&Rational::one() - eps),
    )]);
    Ok(needed.is_subset(&ClosedIntervalUnion::from_parts(starts)))
}

/// Every `T_p`, `p <= P`, meets every open subwindow of length `eps`.
pub fn density_evidence_in_window(
    g: &IntervalUnion,
    seq: &SequenceDescriptor,
    window: &OpenInterval,
    p: u32,
    k: u32,
    eps: &Rational,
) -> Result<bool> {
    let (Bound::Finite(a), Bound::Finite(b)) = (&window.lo, &window.hi) else {
        return Err(Error::UnboundedWindow);
    };
    if a < &Rational::from_integer(-1) || b > &Rational::one() {
        return Err(Error::Precondition("window must lie in (-1, 1)".into()));
    }
    let approx = limsup_truncated(g, seq, p, k)?;
    let win = ClosedIntervalUnion::from_parts(vec![ClosedInterval::new(window.lo.clone(), window.hi.clone())]);
    Ok(approx.tails.iter().all(|t| {
        ClosedIntervalUnion::complement_of_open(t.intervals())
            .intersection(&win)
            .parts()
            .iter()
            .all(|gap| length(gap) < *eps)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    Inconclusive,
}

impl Serialize for Agreement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Agreement::Agree => serializer.serialize_bool(true),
            Agreement::Disagree => serializer.serialize_bool(false),
            Agreement::Inconclusive => serializer.serialize_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub eps: Rational,
    pub delta: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub verdict_checker: String,
    pub oracle_branch: String,
    pub agreement: Agreement,
    pub horizons: Horizons,
    pub resolution: Resolution,
    /// The subsequence (verified branch) or scale list (refuted branch) used.
    pub sequence: Vec<u64>,
    pub tail_index: u32,
    pub terms: u32,
    /// `i0` and its block, refuted branch only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<(i64, OpenInterval)>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub verdict: Option<RealVerdict>,
}

/// Runs the checker at `x` and tests its verdict against the sequence
/// definition: a verified point must give a nowhere dense truncated limsup
/// along the extracted subsequence, a refuted one must give density in the
/// failing block along the failing scales.
pub fn cross_validate(g: &IntervalUnion, x: &Rational, h: &Horizons, seq: &SequenceDescriptor) -> Result<OracleReport> {
    h.validate()?;
    let g = g.translate(x);
    let verdict = check_dispersion_r(&g, &Rational::zero(), h)?;
    let mut report = OracleReport {
        verdict_checker: verdict.label().into(),
        oracle_branch: "none".into(),
        agreement: Agreement::Inconclusive,
        horizons: h.clone(),
        resolution: Resolution { eps: h.eps.clone(), delta: h.delta.clone() },
        sequence: Vec::new(),
        tail_index: 0,
        terms: 0,
        block: None,
        notes: vec!["finite-horizon evidence: the limsup is truncated to finitely many terms".into()],
        verdict: None,
    };
    match &verdict {
        Verdict::Verified { stages, .. } => {
            report.oracle_branch = "nowhere_dense".into();
            let extraction = extract_subsequence(&g, seq, h)?;
            let mut r = extraction.r.clone();
            let last = extraction.stages.last().expect("n_max >= 1");
            let r_last = *r.last().expect("n_max >= 1");
            r.extend(last.survivors.iter().copied().filter(|&t| t > r_last));
            let p = h.n_max;
            let k = r.len() as u32;
            let max_term = *r.last().unwrap();
            let approx_g = approximate(&g, &h.delta, max_term, true)?;
            let seq_r = SequenceDescriptor::Explicit { terms: r.clone() };
            let approx = limsup_truncated(&approx_g, &seq_r, p, k)?;
            let tail = approx.tails.last().expect("P >= 1");
            report.sequence = r;
            report.tail_index = p;
            report.terms = k;
            if nowhere_dense_at_resolution(tail, &h.eps, &h.delta)? {
                report.agreement = Agreement::Agree;
            } else {
                // the frozen gaps guarantee one gap of width 1/(n k) per
                // block of width 1/n; test at that native resolution
                let k_last = stages.last().map(|s| s.k).unwrap_or(1);
                let eps = Rational::new(2, h.n_max as i64);
                let delta = Rational::new(1, (h.n_max * k_last) as i64);
                let native = nowhere_dense_at_resolution(tail, &eps, &delta)?;
                report.notes.push(format!(
                    "not nowhere dense at eps={}, delta={}; at the native resolution eps={eps}, delta={delta}: {}",
                    h.eps,
                    h.delta,
                    if native { "nowhere dense" } else { "not nowhere dense" }
                ));
                report.agreement = if native { Agreement::Inconclusive } else { Agreement::Disagree };
            }
        }
        Verdict::Refuted { n0, .. } => {
            report.oracle_branch = "density_evidence".into();
            let (i0, ls) = refutation_to_witnesses(&g, &verdict, h)?;
            let n0 = *n0 as i64;
            let window = OpenInterval::finite(Rational::new(i0, n0), Rational::new(i0 + 1, n0));
            let terms: Vec<u64> = ls.iter().map(|&l| l as u64).collect();
            let max_term = *terms.last().expect("refutation is nonempty");
            let approx_g = approximate(&g, &h.delta, max_term, false)?;
            let k = terms.len() as u32;
            let p = k.div_ceil(2);
            let seq_l = SequenceDescriptor::Explicit { terms: terms.clone() };
            let dense = density_evidence_in_window(&approx_g, &seq_l, &window, p, k, &h.eps)?;
            report.sequence = terms;
            report.tail_index = p;
            report.terms = k;
            report.block = Some((i0, window));
            report.agreement = if dense { Agreement::Agree } else { Agreement::Disagree };
        }
        Verdict::Inconclusive { reason, .. } => {
            report.notes.push(format!("checker inconclusive: {reason}"));
        }
    }
    report.verdict = Some(verdict);
    Ok(report)
}

/// A finite stand-in for a lazy family whose dilations by at most
/// `max_term` differ from the true set only within `delta/4` of the
/// accumulation point: a superset (`over`) or a subset.
fn approximate(g: &IntervalUnion, delta: &Rational, max_term: u64, over: bool) -> Result<IntervalUnion> {
    if g.is_finite() {
        return Ok(g.clone());
    }
    let eta = delta / &Rational::from_integer(4 * max_term as i64);
    g.finite_approx(&eta, over)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn set(ivs: &[((i64, i64), (i64, i64))]) -> IntervalUnion {
        normalize(ivs.iter().map(|&(a, b)| OpenInterval::finite(r(a.0, a.1), r(b.0, b.1))).collect()).unwrap()
    }

    #[test]
    fn limsup_examples() {
        let a = limsup_truncated(&set(&[((1, 2), (1, 1))]), &SequenceDescriptor::Identity, 1, 4).unwrap();
        assert_eq!(a.tails[0], set(&[((1, 2), (1, 1))]));
        let e = limsup_truncated(&IntervalUnion::empty(), &SequenceDescriptor::Identity, 2, 3).unwrap();
        assert!(e.tails.iter().all(IntervalUnion::is_empty));
        let full = limsup_truncated(&set(&[((-1, 1), (1, 1))]), &SequenceDescriptor::Identity, 2, 3).unwrap();
        for t in &full.tails {
            assert_eq!(*t, set(&[((-1, 1), (1, 1))]));
        }
    }

    #[test]
    fn limsup_tails_decrease() {
        let g = set(&[((1, 7), (1, 5)), ((-1, 3), (-1, 4))]);
        let a = limsup_truncated(&g, &SequenceDescriptor::Identity, 5, 12).unwrap();
        for w in a.tails.windows(2) {
            assert!(w[1].is_subset(&w[0]).unwrap());
        }
        assert_eq!(a.intersection, a.tails[4]);
    }

    #[test]
    fn nowhere_dense_examples() {
        let (e, d) = (r(1, 4), r(1, 8));
        assert!(nowhere_dense_at_resolution(&IntervalUnion::empty(), &e, &d).unwrap());
        assert!(!nowhere_dense_at_resolution(&set(&[((1, 2), (1, 1))]), &e, &d).unwrap());
        // components of length 1/64 every 1/8 leave gaps of 7/64 >= 1/16
        let parts: Vec<((i64, i64), (i64, i64))> = (-8..8).map(|c| ((8 * c, 64), (8 * c + 1, 64))).collect();
        assert!(nowhere_dense_at_resolution(&set(&parts), &e, &r(1, 16)).unwrap());
        assert!(!nowhere_dense_at_resolution(&set(&parts), &e, &r(1, 8)).unwrap());
    }

    #[test]
    fn density_evidence_examples() {
        let eps = r(1, 64);
        let w = OpenInterval::finite(r(0, 1), r(1, 2));
        let id = SequenceDescriptor::Identity;
        assert!(density_evidence_in_window(&set(&[((0, 1), (1, 1))]), &id, &w, 4, 64, &eps).unwrap());
        assert!(!density_evidence_in_window(&IntervalUnion::empty(), &id, &w, 4, 64, &eps).unwrap());
        let bumps = set(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]);
        assert!(!density_evidence_in_window(&bumps, &id, &w, 4, 64, &eps).unwrap());
    }

    #[test]
    fn cross_validation_examples() {
        let h = Horizons { n_max: 2, k_max: 8, l_max: 48, ..Horizons::default() };
        let id = SequenceDescriptor::Identity;
        for g in [
            set(&[((0, 1), (1, 1))]),
            set(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]),
            IntervalUnion::empty(),
        ] {
            let rep = cross_validate(&g, &r(0, 1), &h, &id).unwrap();
            assert_eq!(rep.agreement, Agreement::Agree, "{rep:?}");
        }
    }
}
