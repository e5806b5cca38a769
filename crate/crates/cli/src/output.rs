//! Loading inputs and writing reports.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use baire_density::density::{Horizons, POLICY_VERSION};
use baire_density::document::{parse_document, Document};
use baire_density::library;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Common, SpaceArg};

pub struct Input {
    pub label: String,
    pub sha256: String,
    pub document: Document,
}

/// Reads a set document from a path, or a shipped family named `lib:NAME`.
pub fn load(set: &str) -> Result<Input> {
    let text = match set.strip_prefix("lib:") {
        Some(name) => library::family(name)?.source.to_string(),
        None => fs::read_to_string(set).with_context(|| format!("reading {set}"))?,
    };
    let document = parse_document(&text).with_context(|| format!("in {set}"))?;
    Ok(Input { label: set.to_string(), sha256: hex::encode(Sha256::digest(text.as_bytes())), document })
}

/// The space of `input`, checked against `--space` when given.
pub fn space_of(common: &Common, input: &Input) -> Result<SpaceArg> {
    let found = match input.document.set.space() {
        "r" => SpaceArg::R,
        _ => SpaceArg::Cantor,
    };
    if common.space.is_some_and(|s| s != found) {
        bail!("{} is a `{}` document", input.label, input.document.set.space());
    }
    Ok(found)
}

pub fn envelope(command: &str, common: &Common, h: &Horizons, inputs: &[&Input], result: Value) -> Value {
    let inputs: Vec<Value> = inputs.iter().map(|i| json!({"path": i.label, "sha256": i.sha256})).collect();
    json!({
        "command": command,
        "inputs": inputs,
        "seed": common.seed,
        "horizons": h,
        "policy": POLICY_VERSION,
        "result": result,
    })
}

pub fn emit(common: &Common, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(common, &text)
}

pub fn emit_text(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().with_context(|| format!("{} is not a file path", path.display()))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}
