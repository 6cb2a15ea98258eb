//! Reading inputs and writing outputs in the formats shared by all subcommands.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;
use wassvar::Space;

/// Parses `--space`: either a JSON space object or a shorthand such as
/// `euclidean:2`, `sphere:2:6.283`, `hyperbolic:2`, `cylinder:1` or `balloon:1:1`.
pub fn parse_space(text: &str) -> Result<Space> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).context("parsing --space JSON");
    }
    let parts: Vec<&str> = text.split(':').collect();
    let num = |i: usize| -> Result<f64> {
        parts
            .get(i)
            .with_context(|| format!("space shorthand {text:?} is missing a parameter"))?
            .parse::<f64>()
            .with_context(|| format!("bad number in {text:?}"))
    };
    let dim = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .with_context(|| format!("space shorthand {text:?} is missing a dimension"))?
            .parse::<usize>()
            .with_context(|| format!("bad dimension in {text:?}"))
    };
    let space = match parts[0] {
        "euclidean" | "r" => Space::euclidean(dim(1)?),
        "sphere" | "s" => Space::sphere(dim(1)?, num(2)?),
        "hyperbolic" | "h" => match parts.len() {
            2 => Space::hyperbolic(dim(1)?),
            _ => Space::hyperbolic_with_radius(dim(1)?, num(2)?),
        },
        "cylinder" | "flat_cylinder" => Space::flat_cylinder(num(1)?),
        "balloon" | "balloon_string" => Space::balloon_string(num(1)?, num(2)?),
        other => bail!("unknown space kind {other:?}"),
    };
    Ok(space?)
}

pub fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Adds `"space"` to every measure object that lacks one, and rejects one
/// that names a different space from `--space`.
fn fill_space(v: &mut Value, space: &Value) -> Result<()> {
    match v {
        Value::Object(map) => {
            if map.contains_key("atoms") && map.contains_key("weights") {
                match map.get("space") {
                    None => {
                        map.insert("space".into(), space.clone());
                    }
                    Some(own) => {
                        let a: Space = serde_json::from_value(own.clone())?;
                        let b: Space = serde_json::from_value(space.clone())?;
                        if a != b {
                            bail!("input space {a} differs from --space {b}");
                        }
                    }
                }
            }
            for child in map.values_mut() {
                fill_space(child, space)?;
            }
        }
        Value::Array(items) => {
            for child in items {
                fill_space(child, space)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Reads a JSON document, filling in missing measure spaces from `--space`.
pub fn read_json<T: DeserializeOwned>(path: &Path, space: Option<&Space>) -> Result<T> {
    let text = read_text(path)?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(s) = space {
        fill_space(&mut v, &serde_json::to_value(s)?)?;
    }
    serde_json::from_value(v).with_context(|| format!("interpreting {}", path.display()))
}

/// Writes to `--out` or standard output.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
