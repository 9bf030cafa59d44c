//! `--config` files: one `key = value` per line, keys named like the long
//! flags. Flags given on the command line take precedence.

use std::ffi::OsString;
use std::fs;

#[derive(Debug)]
pub struct ConfigError(pub String);

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

fn has_flag(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.strip_prefix(flag).is_some_and(|rest| rest.starts_with('='))
    })
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {} is not key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(ConfigError(format!("config line {} has an invalid key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Appends the config entries to `args` as long flags.
pub fn merge(mut args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    for (key, value) in parse(&text)? {
        let flag = format!("--{key}");
        if has_flag(&args, &flag) {
            continue;
        }
        match value.as_str() {
            "true" => args.push(flag.into()),
            "false" => {}
            _ => {
                args.push(flag.into());
                args.push(value.into());
            }
        }
    }
    Ok(args)
}
