use std::fs;

use anyhow::{Context, Result};
use modlab_core::{parse, Formula, Frame, LiteralSet, Model, Relation, Var};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn json(arg: &str, field: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("--{field}: cannot read {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("--{field}: malformed JSON"))
}

pub fn decode<T: DeserializeOwned>(value: Value, field: &str) -> Result<T> {
    serde_json::from_value(value).with_context(|| format!("{field}: invalid structure"))
}

pub fn load<T: DeserializeOwned>(arg: &str, field: &str) -> Result<T> {
    decode(json(arg, field)?, &format!("--{field}"))
}

pub fn frame(arg: &str, field: &str) -> Result<Frame> {
    load(arg, field)
}

pub fn model(arg: &str, field: &str) -> Result<Model> {
    load(arg, field)
}

/// A model, or a frame read as a model with the empty valuation.
pub fn frame_or_model(arg: &str, field: &str) -> Result<Model> {
    let v = json(arg, field)?;
    if v.get("frame").is_some() {
        decode(v, &format!("--{field}"))
    } else {
        Ok(Model::bare(decode(v, &format!("--{field}"))?))
    }
}

pub fn relation(arg: &str, field: &str) -> Result<Relation> {
    load(arg, field)
}

pub fn tau(arg: &str, field: &str) -> Result<LiteralSet> {
    load(arg, field)
}

pub fn formula(text: &str, field: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("--{field}"))
}

pub fn vars(names: &[String]) -> Result<Vec<Var>> {
    names
        .iter()
        .map(|n| Var::new(n).map_err(|e| anyhow::anyhow!("--p: {e}")))
        .collect()
}
