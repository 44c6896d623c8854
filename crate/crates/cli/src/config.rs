//! `--config path`: a JSON object whose keys mirror long flags.
//!
//! A `command` key names the subcommand when the command line does not.
//! `true` turns a switch on, `false` and `null` leave it off, and an array
//! supplies several values. Values from the file are placed before those on
//! the command line, so the command line wins.

use std::fs;

use serde_json::Value;

/// Removes `--config` from `args` and splices in the file's flags.
pub fn expand(args: Vec<String>, subcommands: &[String]) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_owned());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("reading {path}: {e}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("parsing {path}: {e}"))?;
    let Value::Object(map) = doc else {
        return Err(format!("{path}: expected a JSON object"));
    };

    let mut command = None;
    let mut flags = Vec::new();
    for (key, value) in map {
        if key == "command" {
            command = Some(value.as_str().ok_or("config: command must be a string")?.to_owned());
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                flags.push(flag);
                for v in items {
                    flags.push(scalar(&key, v)?);
                }
            }
            v => {
                flags.push(flag);
                flags.push(scalar(&key, v)?);
            }
        }
    }

    let at = rest.iter().position(|a| subcommands.contains(a));
    let mut out = Vec::with_capacity(rest.len() + flags.len() + 1);
    match (at, command) {
        (Some(i), _) => {
            out.extend_from_slice(&rest[..=i]);
            out.extend(flags);
            out.extend_from_slice(&rest[i + 1..]);
        }
        (None, Some(cmd)) => {
            out.extend(rest);
            out.push(cmd);
            out.extend(flags);
        }
        (None, None) => {
            out.extend(rest);
            out.extend(flags);
        }
    }
    Ok(out)
}

fn scalar(key: &str, v: Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(format!("config: unsupported value for {key:?}")),
    }
}
