//! Flat `key = value` experiment files. Keys are long flag names, so a
//! file line `sigma = 3` acts like `--sigma 3` placed before the command
//! line flags (which therefore win).

use std::path::Path;

use anyhow::{bail, Context, Result};

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`", i + 1);
        };
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() || k.contains(char::is_whitespace) {
            bail!("line {}: bad key `{k}`", i + 1);
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let kv = parse("# run\na = surd:-1,1,5,2\n\n--sigma=3 # trailing\neps = 1e-3,1e-4\n").unwrap();
        assert_eq!(kv[0], ("a".into(), "surd:-1,1,5,2".into()));
        assert_eq!(kv[1], ("sigma".into(), "3".into()));
        assert_eq!(kv[2].1, "1e-3,1e-4");
        assert!(parse("nonsense").is_err());
    }
}
