//! One function per subcommand; each returns the process exit status.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use baire_density::cantorsets::{CantorPoint, CylTree};
use baire_density::density::certificate::{CantorCertificate, RealCertificate};
use baire_density::density::{
    check_dispersion_cantor, check_dispersion_r, extract_subsequence, replay_cantor, replay_real, Certificate,
    Horizons, Verdict,
};
use baire_density::document::SetDocument;
use baire_density::library::FAMILIES;
use baire_density::oracle::{cross_validate, Agreement};
use baire_density::phi::{
    axioms_suite, phi_grid, phi_point, pi03_presentation, Cantor, CantorGrid, CantorPresentation, Real, RealGrid,
    RealPresentation, Space,
};
use baire_density::sequence::SequenceDescriptor;
use baire_density::Rational;
use serde_json::{json, Value};

use crate::output::{emit, emit_text, envelope, load, space_of, Input};
use crate::{Command, Common, SpaceArg};

pub fn run(command: Command, common: &Common) -> Result<u8> {
    let h = common.horizons()?;
    match command {
        Command::Check { set, point, density } => check(common, &h, &set, &point, density),
        Command::Oracle { set, point, seq } => oracle(common, &h, &set, &point, &seq),
        Command::Axioms { set, grid, perturbations } => axioms(common, &h, &set, grid.as_deref(), perturbations),
        Command::Phi { set, grid, csv } => phi(common, &h, &set, grid.as_deref(), csv),
        Command::Pi03 { set, grid } => pi03(common, &h, &set, grid.as_deref()),
        Command::Extract { set, point, seq } => extract(common, &h, &set, &point, &seq),
        Command::Validate { cert, set } => validate(common, &h, &cert, &set),
    }
}

fn exit_for<W, F>(v: &Verdict<W, F>) -> u8 {
    match v {
        Verdict::Verified { .. } => 0,
        Verdict::Refuted { .. } => 1,
        Verdict::Inconclusive { .. } => 2,
    }
}

fn real_only<'a>(input: &'a Input, command: &str) -> Result<&'a RealPresentation> {
    match &input.document.set {
        SetDocument::Real(p) => Ok(p),
        SetDocument::Cantor(_) => bail!("`{command}` covers the real line only"),
    }
}

fn sequence(text: &str) -> Result<SequenceDescriptor> {
    if let Ok(seq) = text.parse() {
        return Ok(seq);
    }
    if !Path::new(text).is_file() {
        bail!("`{text}` is neither a sequence descriptor nor a file");
    }
    let terms = fs::read_to_string(text)?
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().with_context(|| format!("bad term `{t}` in {text}")))
        .collect::<Result<Vec<_>>>()?;
    let seq = SequenceDescriptor::Explicit { terms };
    seq.validate()?;
    Ok(seq)
}

fn check(common: &Common, h: &Horizons, set: &str, point: &str, density: bool) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let mode = if density { "density" } else { "dispersion" };
    let (cert, code) = match &input.document.set {
        SetDocument::Real(p) => {
            let x: Rational = point.parse()?;
            let g = if density { p.base.complement_kernel()? } else { p.base.clone() };
            let v = check_dispersion_r(&g, &x, h)?;
            (serde_json::to_value(Certificate::new("r", x.to_string(), h, &v))?, exit_for(&v))
        }
        SetDocument::Cantor(p) => {
            let x: CantorPoint = point.parse()?;
            let g = if density { p.base.exterior() } else { p.base.clone() };
            let v = check_dispersion_cantor(&g, &x, h)?;
            (serde_json::to_value(Certificate::new("cantor", x.to_string(), h, &v))?, exit_for(&v))
        }
    };
    emit(common, &envelope("check", common, h, &[&input], json!({"mode": mode, "certificate": cert})))?;
    Ok(code)
}

fn oracle(common: &Common, h: &Horizons, set: &str, point: &str, seq: &str) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let p = real_only(&input, "oracle")?;
    let report = cross_validate(&p.base, &point.parse()?, h, &sequence(seq)?)?;
    let code = match report.agreement {
        Agreement::Agree => 0,
        Agreement::Disagree => 1,
        Agreement::Inconclusive => 2,
    };
    emit(common, &envelope("oracle", common, h, &[&input], serde_json::to_value(&report)?))?;
    Ok(code)
}

fn axioms(common: &Common, h: &Horizons, sets: &[String], grid: Option<&str>, perturbations: usize) -> Result<u8> {
    let inputs = sets.iter().map(|s| load(s)).collect::<Result<Vec<_>>>()?;
    let space = match (common.space, inputs.first()) {
        (_, Some(first)) => space_of(common, first)?,
        (Some(s), None) => s,
        (None, None) => SpaceArg::Cantor,
    };
    for i in &inputs {
        if space_of(common, i)? != space {
            bail!("axioms needs every family member in one space");
        }
    }
    let report = match space {
        SpaceArg::Cantor => {
            let family: Vec<CantorPresentation> = if inputs.is_empty() {
                if h.cantor_depth > 3 {
                    bail!("the exhaustive clopen family needs --depth at most 3");
                }
                CylTree::all_clopen(h.cantor_depth as usize).into_iter().map(CantorPresentation::new).collect()
            } else {
                inputs
                    .iter()
                    .map(|i| match &i.document.set {
                        SetDocument::Cantor(p) => p.clone(),
                        SetDocument::Real(_) => unreachable!("checked above"),
                    })
                    .collect()
            };
            let grid: CantorGrid = grid.map(str::parse).transpose()?.unwrap_or_default();
            axioms_suite::<Cantor>(&family, &Cantor::grid_points(&grid)?, h, common.seed, perturbations)?
        }
        SpaceArg::R => {
            let family: Vec<RealPresentation> = if inputs.is_empty() {
                FAMILIES
                    .iter()
                    .filter_map(|f| match f.document().ok()?.set {
                        SetDocument::Real(p) if p.base.is_finite() => Some(p),
                        _ => None,
                    })
                    .collect()
            } else {
                inputs.iter().map(|i| real_only(i, "axioms").cloned()).collect::<Result<_>>()?
            };
            let grid: RealGrid = grid.map(str::parse).transpose()?.unwrap_or_default();
            axioms_suite::<Real>(&family, &Real::grid_points(&grid)?, h, common.seed, perturbations)?
        }
    };
    let passed = report.passed();
    let refs: Vec<&Input> = inputs.iter().collect();
    emit(common, &envelope("axioms", common, h, &refs, serde_json::to_value(&report)?))?;
    Ok(if passed { 0 } else { 1 })
}

fn phi(common: &Common, h: &Horizons, set: &str, grid: Option<&str>, csv: bool) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let report = match &input.document.set {
        SetDocument::Real(p) => phi_grid::<Real>(p, &grid.map(str::parse).transpose()?.unwrap_or_default(), h)?,
        SetDocument::Cantor(p) => phi_grid::<Cantor>(p, &grid.map(str::parse).transpose()?.unwrap_or_default(), h)?,
    };
    if csv {
        let header = format!(
            "# input={} sha256={} seed={} policy={} horizons={}\n",
            input.label,
            input.sha256,
            common.seed,
            report.policy,
            serde_json::to_string(h)?
        );
        emit_text(common, &(header + &report.to_csv()))?;
    } else {
        emit(common, &envelope("phi", common, h, &[&input], serde_json::to_value(&report)?))?;
    }
    Ok(0)
}

fn pi03(common: &Common, h: &Horizons, set: &str, grid: Option<&str>) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let p = real_only(&input, "pi03")?;
    let presentation = pi03_presentation(p, h)?;
    let grid: RealGrid = grid.map(str::parse).transpose()?.unwrap_or_default();
    let mut mismatches = Vec::new();
    let points = grid.points()?;
    for x in &points {
        if presentation.contains(x) != phi_point::<Real>(p, x, h)?.is_verified() {
            mismatches.push(x.to_string());
        }
    }
    let equivalent = mismatches.is_empty();
    let result = json!({
        "presentation": presentation,
        "equivalence": {
            "grid": grid.to_string(),
            "points": points.len(),
            "equivalent": equivalent,
            "mismatches": mismatches,
        },
    });
    emit(common, &envelope("pi03", common, h, &[&input], result))?;
    Ok(if equivalent { 0 } else { 1 })
}

fn extract(common: &Common, h: &Horizons, set: &str, point: &str, seq: &str) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let p = real_only(&input, "extract")?;
    let x: Rational = point.parse()?;
    let seq = sequence(seq)?;
    let extraction = extract_subsequence(&p.base.translate(&x), &seq, h)?;
    let result = json!({"point": x, "sequence": seq.to_string(), "extraction": extraction});
    emit(common, &envelope("extract", common, h, &[&input], result))?;
    Ok(0)
}

fn validate(common: &Common, h: &Horizons, cert: &Path, set: &str) -> Result<u8> {
    let input = load(set)?;
    space_of(common, &input)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let (mode, body) = match value.get("result") {
        Some(result) => (
            result.get("mode").and_then(Value::as_str).unwrap_or("dispersion").to_string(),
            result.get("certificate").cloned().context("the report holds no certificate")?,
        ),
        None => ("dispersion".to_string(), value),
    };
    let density = match mode.as_str() {
        "dispersion" => false,
        "density" => true,
        other => bail!("unknown mode `{other}`"),
    };
    let outcome = match &input.document.set {
        SetDocument::Real(p) => {
            let cert: RealCertificate = serde_json::from_value(body)?;
            let g = if density { p.base.complement_kernel()? } else { p.base.clone() };
            replay_real(&cert, &g)
        }
        SetDocument::Cantor(p) => {
            let cert: CantorCertificate = serde_json::from_value(body)?;
            let g = if density { p.base.exterior() } else { p.base.clone() };
            replay_cantor(&cert, &g)
        }
    };
    let result = match &outcome {
        Ok(()) => json!({"valid": true, "mode": mode}),
        Err(e) => json!({"valid": false, "mode": mode, "error": e.to_string()}),
    };
    emit(common, &envelope("validate", common, h, &[&input], result))?;
    Ok(if outcome.is_ok() { 0 } else { 1 })
}
