//! Plain-text file formats.
//!
//! Degree distributions: one `degree probability` pair per line, `#` starts a
//! comment. Code graphs: a `K M seed` header, then one line per check node
//! listing its (0-based) source indices. Both round-trip exactly; floats are
//! written with the shortest representation that parses back to the same value.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use slt_core::codec::CodecError;
use slt_core::degree_dist::{self, DistError};
use slt_core::{NodeDegreeDistribution, SltCode};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Distribution(#[from] DistError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_distribution(text: &str) -> Result<NodeDegreeDistribution, FormatError> {
    let mut pairs = Vec::new();
    for (no, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(d), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(no, "expected `degree probability`"));
        };
        let degree: usize = d
            .parse()
            .map_err(|_| parse_err(no, format!("bad degree `{d}`")))?;
        let prob: f64 = p
            .parse()
            .map_err(|_| parse_err(no, format!("bad probability `{p}`")))?;
        pairs.push((degree, prob));
    }
    Ok(NodeDegreeDistribution::new(&pairs)?)
}

pub fn format_distribution(d: &NodeDegreeDistribution) -> String {
    let mut out = String::new();
    for (degree, prob) in d.iter() {
        writeln!(out, "{degree} {prob}").unwrap();
    }
    out
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A preset name (`omega1`, `omega2`, `omega3`) or a path to a distribution file.
pub fn load_distribution(name_or_path: &str) -> Result<NodeDegreeDistribution, FormatError> {
    match degree_dist::preset(name_or_path) {
        Some(d) => Ok(d),
        None => parse_distribution(&read(Path::new(name_or_path))?),
    }
}

pub fn parse_code(text: &str) -> Result<SltCode, FormatError> {
    let mut lines = content_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `K M seed` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(no, "header must be `K M seed`"));
    }
    let k: usize = fields[0].parse().map_err(|_| parse_err(no, "bad K"))?;
    let m: usize = fields[1].parse().map_err(|_| parse_err(no, "bad M"))?;
    let seed: u64 = fields[2].parse().map_err(|_| parse_err(no, "bad seed"))?;
    let mut checks = Vec::with_capacity(m);
    for (no, line) in lines {
        let nbrs = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(no, format!("bad index `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        checks.push(nbrs);
    }
    if checks.len() != m {
        return Err(parse_err(
            0,
            format!("header says {m} checks, found {}", checks.len()),
        ));
    }
    Ok(SltCode::from_neighbors(k, checks, seed)?)
}

pub fn format_code(code: &SltCode) -> String {
    let mut out = format!("{} {} {}\n", code.k(), code.m(), code.seed());
    for nbrs in code.checks() {
        let line: Vec<String> = nbrs.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_code(path: &Path) -> Result<SltCode, FormatError> {
    parse_code(&read(path)?)
}

/// Bits written as `0`/`1` characters; whitespace and commas are ignored.
pub fn parse_bits(text: &str) -> Result<Vec<u8>, FormatError> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(parse_err(
                1,
                format!("unexpected character `{other}` in bit string"),
            )),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

/// Whitespace- or comma-separated reals.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, FormatError> {
    let mut out = Vec::new();
    for (no, line) in content_lines(text) {
        for tok in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            out.push(
                tok.parse()
                    .map_err(|_| parse_err(no, format!("bad number `{tok}`")))?,
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_text() {
        let text = "# d_c = 20\n5 0.7361\n20 0.2639  # tail\n\n";
        let d = parse_distribution(text).unwrap();
        assert_eq!(d, degree_dist::preset("omega1").unwrap());
        assert_eq!(parse_distribution(&format_distribution(&d)).unwrap(), d);
        assert!(matches!(
            parse_distribution("5 0.5\n20 0.4\n"),
            Err(FormatError::Distribution(DistError::NonNormalized { .. }))
        ));
        assert!(matches!(
            parse_distribution("5\n"),
            Err(FormatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_distribution("x 1.0\n"),
            Err(FormatError::Parse { .. })
        ));
    }

    #[test]
    fn presets_resolve_by_name() {
        assert!(load_distribution("omega3").is_ok());
        assert!(matches!(
            load_distribution("/no/such/file"),
            Err(FormatError::Io { .. })
        ));
    }

    #[test]
    fn code_text() {
        let omega = degree_dist::preset("omega1").unwrap();
        let code = SltCode::build(50, 80, &omega, 123).unwrap();
        let text = format_code(&code);
        assert!(text.starts_with("50 80 123\n"));
        assert_eq!(parse_code(&text).unwrap(), code);
        assert!(parse_code("4 2 0\n0 1\n").is_err());
        assert!(parse_code("4 1 0\n0 9\n").is_err());
        assert!(parse_code("").is_err());
    }

    #[test]
    fn bits_and_reals() {
        assert_eq!(parse_bits("10 11\n0").unwrap(), vec![1, 0, 1, 1, 0]);
        assert!(parse_bits("102").is_err());
        assert_eq!(format_bits(&[1, 0, 1]), "101");
        assert_eq!(
            parse_reals("1.5 -2\n3e-1, 4").unwrap(),
            vec![1.5, -2.0, 0.3, 4.0]
        );
        assert!(parse_reals("1.5 abc").is_err());
    }
}
