//! `key=value` configuration files merged into the argument list.
//!
//! Each key becomes a trailing `--key value` unless the same flag is already
//! on the command line, so flags always win over the file. `true` turns a key into a
//! bare switch and `false` drops it.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key=value, got {line:?}", i + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::usage(format!("config line {}: invalid key {k:?}", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn has_flag(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&with_eq)
    })
}

/// Appends config-file flags that are not already given on the command line.
pub fn merge_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entries = parse_config(&text)?;

    let mut merged = args.clone();
    for (key, value) in entries {
        if has_flag(&args, &key) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                merged.push(format!("--{key}").into());
                merged.push(value.into());
            }
        }
    }
    Ok(merged)
}
