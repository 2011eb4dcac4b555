//! Reproducibility manifests written beside every output.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Cli;

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Rebuilds a complete command line from the parsed arguments. Every option
/// is spelled out, defaults included, so the line does not depend on the
/// defaults of whichever version replays it.
pub fn resolved_argv(cli: &Cli) -> Result<Vec<String>> {
    let mut argv = vec!["--seed".to_string(), cli.seed.to_string(), "--jobs".into(), cli.jobs.to_string()];
    let Value::Object(command) = serde_json::to_value(&cli.command)? else {
        bail!("unexpected command encoding");
    };
    let (name, fields) = command.into_iter().next().context("empty command")?;
    argv.push(name);
    let Value::Object(fields) = fields else {
        bail!("unexpected argument encoding");
    };
    for (key, value) in fields {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => argv.push(flag),
            Value::Array(items) => {
                for item in items {
                    argv.push(flag.clone());
                    argv.push(scalar(item)?);
                }
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other)?);
            }
        }
    }
    Ok(argv)
}

fn scalar(v: Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s,
        Value::Number(n) => n.to_string(),
        other => bail!("cannot spell {other} as a flag value"),
    })
}

pub fn write_manifest(output: &Path, cli: &Cli, extra: impl Serialize) -> Result<()> {
    let manifest = json!({
        "tool": "kwbench",
        "version": env!("CARGO_PKG_VERSION"),
        "argv": resolved_argv(cli)?,
        "config": cli,
        "summary": extra,
    });
    let path = manifest_path(output);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
