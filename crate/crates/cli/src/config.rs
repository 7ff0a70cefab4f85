//! `--config PATH` support. Each `key = value` line becomes `--key=value`,
//! spliced in front of the user's own flags so the user's flags win.

use std::fs;

use clap::{ArgAction, Command};

pub fn expand_config(cmd: &Command, args: Vec<String>) -> Result<Vec<String>, String> {
    let mut config_path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    rest.extend(iter.next());
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            config_path = Some(iter.next().ok_or("--config needs a path")?);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config_path = Some(path.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config_path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;

    // Subcommand path is the run of leading non-flag tokens.
    let depth = rest[1..].iter().take_while(|a| !a.starts_with('-')).count();
    let mut sub = cmd;
    for name in &rest[1..=depth] {
        match sub.find_subcommand(name) {
            Some(s) => sub = s,
            None => break,
        }
    }

    let mut injected = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| format!("{path}:{}: expected `key = value`", i + 1))?;
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key) && key != "config")
            .ok_or_else(|| {
                format!(
                    "{path}:{}: unknown key `{key}` for `{}`",
                    i + 1,
                    sub.get_name()
                )
            })?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value {
                "true" => injected.push(format!("--{key}")),
                "false" => {}
                _ => return Err(format!("{path}:{}: `{key}` expects true or false", i + 1)),
            }
        } else {
            injected.push(format!("--{key}={value}"));
        }
    }

    let mut out = Vec::with_capacity(rest.len() + injected.len());
    out.extend(rest[..=depth].iter().cloned());
    out.extend(injected);
    out.extend(rest[depth + 1..].iter().cloned());
    Ok(out)
}
