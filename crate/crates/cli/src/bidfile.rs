//! Bid files: one rational per line, blank lines and `#` comments skipped.
//! A JSON object with a `bids` array (as written by `psi --format json`) or a
//! bare JSON array is accepted too.

use std::io::Read;
use std::path::Path;

use prauction_core::{BidProfile, Rational};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn parse_rational(text: &str) -> CliResult<Rational> {
    text.trim()
        .parse()
        .map_err(|e| CliError::Input(format!("bad rational {text:?}: {e}")))
}

pub fn read_source(path: &Path) -> CliResult<String> {
    let mut buf = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut buf)?;
    } else {
        buf = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(buf)
}

pub fn parse_bids(text: &str) -> CliResult<BidProfile> {
    let trimmed = text.trim_start();
    let bids = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed)?;
        let list = match &v {
            Value::Array(items) => items,
            Value::Object(map) => map
                .get("bids")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::Input("JSON input has no \"bids\" array".into()))?,
            _ => unreachable!(),
        };
        list.iter()
            .map(|item| match item {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                other => Err(CliError::Input(format!("bid {other} is not a number"))),
            })
            .collect::<CliResult<Vec<_>>>()?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(parse_rational)
            .collect::<CliResult<Vec<_>>>()?
    };
    Ok(BidProfile::new(bids)?)
}

pub fn read_bids(path: &Path) -> CliResult<BidProfile> {
    parse_bids(&read_source(path)?)
}

pub fn format_bids(profile: &BidProfile) -> String {
    let mut out = String::new();
    for b in profile.bids() {
        out.push_str(&b.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let p = parse_bids("# defender\n1/10\n\n0.2  # decimal\n3/10\n2/5\n").unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.total(), &Rational::one());
        assert_eq!(parse_bids(&format_bids(&p)).unwrap(), p);
    }

    #[test]
    fn json_formats() {
        let p = parse_bids(r#"{"n": 2, "bids": ["1/3", "2/3"]}"#).unwrap();
        assert_eq!(p.total(), &Rational::one());
        let q = parse_bids(r#"["1/3", 0.5]"#).unwrap();
        assert_eq!(q.len(), 2);
        assert!(parse_bids(r#"{"n": 2}"#).is_err());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_bids("1/0\n"), Err(CliError::Input(_))));
        assert!(matches!(parse_bids("abc\n"), Err(CliError::Input(_))));
        assert!(parse_bids("-1\n").is_err());
        assert!(parse_bids("\n# nothing\n").is_err());
    }
}
