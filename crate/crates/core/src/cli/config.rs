//! Flat `key = value` run files. Every key is a long flag of the subcommand;
//! the special key `command` names the subcommand. Flags given on the command
//! line win over the file.

use std::path::Path;

use crate::error::{Error, Result};

pub const COMMANDS: [&str; 8] = [
    "disk-ref",
    "annulus-ref",
    "solve",
    "sweep",
    "crossings",
    "asymptotics",
    "capacity",
    "quarter",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub command: Option<String>,
    /// `(key, value)` in file order, keys normalised to flag spelling.
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ConfigFile::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value, got {raw:?}", no + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse(format!("line {}: empty key", no + 1)));
            }
            if key == "command" {
                out.command = Some(value);
            } else {
                let key = if key == "M" { key } else { key.to_lowercase() };
                out.entries.push((key, value));
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Entries as command-line tokens. `true`/`false` values toggle flags.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = Vec::new();
        for (k, v) in &self.entries {
            let flag = if k == "M" || k == "m" { "-M".to_string() } else { format!("--{k}") };
            match v.as_str() {
                "true" => args.push(flag),
                "false" => {}
                _ => {
                    args.push(flag);
                    args.push(v.clone());
                }
            }
        }
        args
    }
}

/// Splices the run file named by `--config` into `argv` right after the
/// subcommand, so explicit flags that follow take precedence.
pub fn merge_args(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = Some(
                argv.get(i + 1)
                    .cloned()
                    .ok_or_else(|| Error::validation("--config needs a path"))?,
            );
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let file = ConfigFile::load(Path::new(&path))?;
    let mut out = argv;
    let pos = out.iter().skip(1).position(|a| COMMANDS.contains(&a.as_str())).map(|p| p + 1);
    let insert_at = match (pos, &file.command) {
        (Some(p), Some(c)) if out[p] != *c => {
            return Err(Error::validation(format!(
                "run file is for `{c}` but the command line asks for `{}`",
                out[p]
            )))
        }
        (Some(p), _) => p + 1,
        (None, Some(c)) => {
            out.insert(1.min(out.len()), c.clone());
            2.min(out.len())
        }
        (None, None) => return Ok(out),
    };
    let extra = file.to_args();
    out.splice(insert_at..insert_at, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let c = ConfigFile::parse("command = sweep\n# comment\nn = 3\nr1 = auto  # inline\nM=60\nplot = true\njobs=false\n")
            .unwrap();
        assert_eq!(c.command.as_deref(), Some("sweep"));
        assert_eq!(c.to_args(), ["--n", "3", "--r1", "auto", "-M", "60", "--plot"]);
        assert!(matches!(ConfigFile::parse("oops"), Err(Error::Parse(_))));
    }
}
