//! Set-description documents.
//!
//! A document is a JSON object with a `space` (`"r"` or `"cantor"`), a
//! `kind`, the parameters of that kind, and an optional list of `toggles`:
//! points whose membership is flipped.
//!
//! On the real line:
//! - `finite`: `"intervals": [["p/q", "r/s"], ...]`, ends may be `"-inf"`/`"inf"`.
//! - `geometric`: components `(a q^m, b q^m)` for `m >= start`, with
//!   `"q"`, `"relative": [a, b]` and optional `"start"` (default 1).
//! - `sequence`: components `(c ρ^m, c ρ^m (1 + w(m)))` for `m >= start`, with
//!   `"scale"`, `"ratio"`, `"start"` and `"width": {"const": r}` or
//!   `{"inv_m": r}` for `w(m) = r / m`.
//!
//! Both lazy kinds accept `"offset"` and `"factor"`, placing the family by
//! `t = offset + factor y`.
//!
//! On the Cantor space:
//! - `antichain`: `"words": ["01", ...]`.
//! - `co-point`: `"point": {"pre": "...", "period": "..."}`.
//! - `periodic-rule`: `⋃_m ⋃_a U(period^m a)` from `"period"` and `"words"`.
//!
//! `combinator` documents apply `"op"` to the documents in `"args"`:
//! `union`, `intersection` (Cantor, or finite on the line), `scale` and
//! `translate` (line only, by `"by"`), and `complement-kernel`.

use serde::Deserialize;

use crate::cantorsets::{BitWord, CantorPoint, CylTree};
use crate::error::{Error, Result};
use crate::phi::{CantorPresentation, RealPresentation};
use crate::rational::Rational;
use crate::realsets::{normalize, IntervalUnion, LazyKind, LazyTail, OpenInterval, ScaledSequence, WidthRule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDocument {
    Real(RealPresentation),
    Cantor(CantorPresentation),
}

impl SetDocument {
    pub fn space(&self) -> &'static str {
        match self {
            SetDocument::Real(_) => "r",
            SetDocument::Cantor(_) => "cantor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: Option<String>,
    pub description: Option<String>,
    pub set: SetDocument,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointValue {
    Text(String),
    Cantor { pre: String, period: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    space: String,
    kind: String,
    name: Option<String>,
    description: Option<String>,
    intervals: Option<Vec<OpenInterval>>,
    q: Option<Rational>,
    relative: Option<(Rational, Rational)>,
    scale: Option<Rational>,
    ratio: Option<Rational>,
    start: Option<u32>,
    width: Option<WidthRule>,
    offset: Option<Rational>,
    factor: Option<Rational>,
    words: Option<Vec<BitWord>>,
    period: Option<BitWord>,
    point: Option<PointValue>,
    op: Option<String>,
    args: Option<Vec<Raw>>,
    by: Option<Rational>,
    toggles: Option<Vec<PointValue>>,
}

/// Parses a document. Syntax and type errors carry the line and column.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let set = match raw.space.as_str() {
        "r" => {
            let toggles = raw.toggles.iter().flatten().map(real_point).collect::<Result<Vec<_>>>()?;
            SetDocument::Real(RealPresentation::with_toggles(real_set(&raw)?, toggles)?)
        }
        "cantor" => {
            let toggles = raw.toggles.iter().flatten().map(cantor_point).collect::<Result<Vec<_>>>()?;
            SetDocument::Cantor(CantorPresentation::with_toggles(cantor_set(&raw)?, toggles)?)
        }
        other => return Err(Error::Parse(format!("unknown space `{other}`, expected `r` or `cantor`"))),
    };
    Ok(Document { name: raw.name, description: raw.description, set })
}

fn real_point(p: &PointValue) -> Result<Rational> {
    match p {
        PointValue::Text(s) => s.parse(),
        PointValue::Cantor { .. } => Err(Error::Parse("expected a rational point".into())),
    }
}

fn cantor_point(p: &PointValue) -> Result<CantorPoint> {
    match p {
        PointValue::Cantor { pre, period } => CantorPoint::new(pre.parse()?, period.parse()?),
        PointValue::Text(s) => s.parse(),
    }
}

fn need<'a, T>(field: &'a Option<T>, name: &str, kind: &str) -> Result<&'a T> {
    field.as_ref().ok_or_else(|| Error::Parse(format!("`{kind}` document needs `{name}`")))
}

fn args<'a>(raw: &'a Raw, space: &str) -> Result<&'a [Raw]> {
    let args = need(&raw.args, "args", "combinator")?;
    if args.is_empty() {
        return Err(Error::Parse("combinator needs at least one argument".into()));
    }
    if let Some(a) = args.iter().find(|a| a.space != space) {
        return Err(Error::Parse(format!("combinator mixes spaces `{space}` and `{}`", a.space)));
    }
    if args.iter().any(|a| a.toggles.is_some()) {
        return Err(Error::Parse("toggles are only allowed at the top level".into()));
    }
    Ok(args)
}

fn placed(raw: &Raw, kind: LazyKind) -> Result<IntervalUnion> {
    let mut tail = LazyTail::new(kind);
    if let Some(f) = &raw.factor {
        if f.is_zero() {
            return Err(Error::ZeroScale);
        }
        tail = tail.scaled(f);
    }
    if let Some(o) = &raw.offset {
        tail = tail.shifted(o);
    }
    Ok(IntervalUnion::from_lazy(tail))
}

fn real_set(raw: &Raw) -> Result<IntervalUnion> {
    let kind = raw.kind.as_str();
    match kind {
        "finite" => normalize(need(&raw.intervals, "intervals", kind)?.clone()),
        "geometric" => {
            let q = need(&raw.q, "q", kind)?;
            let (a, b) = need(&raw.relative, "relative", kind)?;
            if !a.is_positive() || a >= b {
                return Err(Error::Parse("`relative` needs 0 < a < b".into()));
            }
            let width = WidthRule::Const(&(b / a) - &Rational::one());
            let seq = ScaledSequence::new(a.clone(), q.clone(), raw.start.unwrap_or(1), width)?;
            placed(raw, LazyKind::Components(seq))
        }
        "sequence" => {
            let seq = ScaledSequence::new(
                need(&raw.scale, "scale", kind)?.clone(),
                need(&raw.ratio, "ratio", kind)?.clone(),
                raw.start.unwrap_or(1),
                need(&raw.width, "width", kind)?.clone(),
            )?;
            placed(raw, LazyKind::Components(seq))
        }
        "combinator" => {
            let args = args(raw, "r")?;
            let sets = args.iter().map(real_set).collect::<Result<Vec<_>>>()?;
            let op = need(&raw.op, "op", kind)?.as_str();
            match (op, sets.as_slice()) {
                ("union", _) => sets[1..].iter().try_fold(sets[0].clone(), |acc, s| acc.union(s)),
                ("intersection", _) => sets[1..].iter().try_fold(sets[0].clone(), |acc, s| acc.intersection(s)),
                ("scale", [s]) => s.scale(need(&raw.by, "by", op)?),
                ("translate", [s]) => Ok(s.translate(&-need(&raw.by, "by", op)?.clone())),
                ("complement-kernel", [s]) => {
                    if !s.is_finite() {
                        return Err(Error::Unsupported("complement-kernel needs a finite union".into()));
                    }
                    s.complement_kernel()
                }
                ("scale" | "translate" | "complement-kernel", _) => {
                    Err(Error::Parse(format!("`{op}` takes exactly one argument")))
                }
                _ => Err(Error::Parse(format!("unknown combinator `{op}`"))),
            }
        }
        other => Err(Error::Parse(format!("unknown kind `{other}` on the real line"))),
    }
}

fn cantor_set(raw: &Raw) -> Result<CylTree> {
    let kind = raw.kind.as_str();
    match kind {
        "antichain" => CylTree::from_antichain(need(&raw.words, "words", kind)?),
        "co-point" => Ok(CylTree::co_point(&cantor_point(need(&raw.point, "point", kind)?)?)),
        "periodic-rule" => CylTree::periodic_rule(need(&raw.period, "period", kind)?, need(&raw.words, "words", kind)?),
        "combinator" => {
            let args = args(raw, "cantor")?;
            let sets = args.iter().map(cantor_set).collect::<Result<Vec<_>>>()?;
            let op = need(&raw.op, "op", kind)?.as_str();
            match (op, sets.as_slice()) {
                ("union", _) => Ok(sets[1..].iter().fold(sets[0].clone(), |acc, s| acc.union(s))),
                ("intersection", _) => Ok(sets[1..].iter().fold(sets[0].clone(), |acc, s| acc.intersection(s))),
                ("complement-kernel", [s]) => Ok(s.exterior()),
                ("translate", [s]) => Ok(s.translate(&cantor_point(need(&raw.point, "point", op)?)?)),
                ("complement-kernel" | "translate", _) => {
                    Err(Error::Parse(format!("`{op}` takes exactly one argument")))
                }
                _ => Err(Error::Parse(format!("unknown combinator `{op}`"))),
            }
        }
        other => Err(Error::Parse(format!("unknown kind `{other}` on the Cantor space"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realsets::Tri;

    fn real(text: &str) -> RealPresentation {
        match parse_document(text).unwrap().set {
            SetDocument::Real(p) => p,
            other => panic!("{other:?}"),
        }
    }

    fn cantor(text: &str) -> CantorPresentation {
        match parse_document(text).unwrap().set {
            SetDocument::Cantor(p) => p,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_with_toggles() {
        let p = real(r#"{"space":"r","kind":"finite","intervals":[["1","2"],["0","1"]],"toggles":["1/2"]}"#);
        assert_eq!(p.base.intervals().len(), 2);
        assert_eq!(p.toggles, vec![Rational::new(1, 2)]);
        let p = real(r#"{"space":"r","kind":"finite","intervals":[["-inf","0"]]}"#);
        assert_eq!(p.base.contains(&Rational::from_integer(-5)), Tri::Yes);
    }

    #[test]
    fn lazy_kinds() {
        let g = real(r#"{"space":"r","kind":"geometric","q":"1/10","relative":["1/2","1"]}"#);
        assert_eq!(g.base.contains(&Rational::new(3, 40)), Tri::Yes);
        assert_eq!(g.base.contains(&Rational::new(3, 20)), Tri::No);
        let v = real(r#"{"space":"r","kind":"sequence","scale":"1","ratio":"1/2","start":1,"width":{"inv_m":"1"}}"#);
        assert_eq!(v.base.contains(&Rational::new(5, 16)), Tri::Yes);
        assert_eq!(v.base.contains(&Rational::new(7, 16)), Tri::No);
        let m = real(r#"{"space":"r","kind":"geometric","q":"1/10","relative":["1/2","1"],"factor":"-1","offset":"1"}"#);
        assert_eq!(m.base.contains(&Rational::new(37, 40)), Tri::Yes);
    }

    #[test]
    fn combinators() {
        let p = real(
            r#"{"space":"r","kind":"combinator","op":"translate","by":"1","args":[
                {"space":"r","kind":"finite","intervals":[["0","1"]]}]}"#,
        );
        assert_eq!(p.base.contains(&Rational::new(3, 2)), Tri::Yes);
        let p = real(
            r#"{"space":"r","kind":"combinator","op":"complement-kernel","args":[
                {"space":"r","kind":"finite","intervals":[["0","1"],["1","2"]]}]}"#,
        );
        assert_eq!(p.base.intervals().len(), 2);
        assert_eq!(p.base.contains(&Rational::from_integer(1)), Tri::No);
        let c = cantor(
            r#"{"space":"cantor","kind":"combinator","op":"union","args":[
                {"space":"cantor","kind":"antichain","words":["00"]},
                {"space":"cantor","kind":"antichain","words":["01"]}]}"#,
        );
        assert_eq!(c.base, CylTree::from_antichain(&["0".parse().unwrap()]).unwrap());
    }

    #[test]
    fn cantor_kinds() {
        let c = cantor(r#"{"space":"cantor","kind":"co-point","point":{"pre":"","period":"0"},"toggles":[{"pre":"1","period":"0"}]}"#);
        assert!(!c.base.contains(&CantorPoint::zero()));
        assert_eq!(c.toggles.len(), 1);
        let r = cantor(r#"{"space":"cantor","kind":"periodic-rule","period":"0","words":["1"]}"#);
        assert_eq!(r.base, CylTree::co_point(&CantorPoint::zero()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_document("{\"space\":\"r\",\n \"kind\": 3}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_document(r#"{"space":"r","kind":"finite","intervals":[["1","0"]]}"#).unwrap_err();
        assert!(e.to_string().contains("column"), "{e}");
        assert!(parse_document(r#"{"space":"r","kind":"finite"}"#).is_err());
        assert!(parse_document(r#"{"space":"cantor","kind":"antichain","words":["0","01"]}"#).is_err());
        assert!(parse_document(r#"{"space":"r","kind":"finite","intervals":[],"extra":1}"#).is_err());
        assert!(parse_document(r#"{"space":"r","kind":"finite","intervals":[],"toggles":["1","1"]}"#).is_err());
    }
}
