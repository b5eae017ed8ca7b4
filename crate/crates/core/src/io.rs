//! Plain-text formats.
//!
//! `.cplx`: one facet per line, vertex labels separated by whitespace; `#`
//! starts a comment. The canonical form sorts labels within a line and the
//! lines themselves.
//!
//! `.smap`: a header `map <domain-file> -> <codomain-file>` (paths relative
//! to the map file), then one `v w` pair per line.
//!
//! Contiguity chains: `steps: m` followed by `m + 1` map lines, each a
//! `;`-separated list of `v w` pairs. Distance certificates wrap such chains
//! in `piece` and `witness` blocks.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex};
use crate::contiguity::ContiguitySequence;
use crate::distance::SdCertificate;
use crate::error::{Error, ParseError, Result};
use crate::label::VertexLabel;
use crate::map::SimplicialMap;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Lines with comments stripped, paired with 1-based line numbers; blank
/// lines are dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn label(line: usize, token: &str) -> Result<VertexLabel, ParseError> {
    token
        .parse()
        .map_err(|e| ParseError::new(line, format!("{e}")))
}

pub fn parse_complex_str(text: &str) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for (line, l) in content_lines(text) {
        let f = l
            .split_whitespace()
            .map(|t| label(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        facets.push(f);
    }
    if facets.is_empty() {
        return Err(ParseError::new(0, "no facets").into());
    }
    SimplicialComplex::build(facets)
}

pub fn parse_complex(path: &Path) -> Result<SimplicialComplex> {
    parse_complex_str(&read(path)?)
}

pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut lines: Vec<String> = k
        .facet_simplices()
        .iter()
        .map(|s| {
            s.vertices()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn pair(line: usize, text: &str) -> Result<(VertexLabel, VertexLabel), ParseError> {
    let mut it = text.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(v), Some(w), None) => Ok((label(line, v)?, label(line, w)?)),
        _ => Err(ParseError::new(line, format!("expected `vertex image`, got {text:?}"))),
    }
}

/// Map body (pairs only) against known complexes; lines are numbered from
/// `first_line`.
pub fn parse_map_body(
    text: &str,
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
) -> Result<SimplicialMap> {
    let mut pairs = Vec::new();
    for (line, l) in content_lines(text) {
        pairs.push(pair(line, l)?);
    }
    SimplicialMap::new(domain, codomain, &pairs)
}

/// Header of a `.smap` file: the two complex paths as written.
pub fn parse_map_header(text: &str) -> Result<(PathBuf, PathBuf, usize)> {
    let (line, head) = content_lines(text)
        .next()
        .ok_or_else(|| ParseError::new(0, "empty map file"))?;
    let rest = head
        .strip_prefix("map ")
        .ok_or_else(|| ParseError::new(line, "expected `map <domain> -> <codomain>`"))?;
    let (d, c) = rest
        .split_once("->")
        .ok_or_else(|| ParseError::new(line, "expected `->` in map header"))?;
    let (d, c) = (d.trim(), c.trim());
    if d.is_empty() || c.is_empty() {
        return Err(ParseError::new(line, "missing complex path in map header").into());
    }
    Ok((d.into(), c.into(), line))
}

/// Parses a `.smap` file together with the complexes its header names.
pub fn parse_map(path: &Path) -> Result<SimplicialMap> {
    let text = read(path)?;
    let (d, c, header) = parse_map_header(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let domain = Arc::new(parse_complex(&base.join(d))?);
    let codomain = Arc::new(parse_complex(&base.join(c))?);
    let body: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i < header { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    parse_map_body(&body, domain, codomain)
}

pub fn write_map(f: &SimplicialMap, domain_file: &str, codomain_file: &str) -> String {
    let mut out = format!("map {domain_file} -> {codomain_file}\n");
    for (v, w) in f.assignment() {
        out.push_str(&format!("{v} {w}\n"));
    }
    out
}

fn map_line(f: &SimplicialMap) -> String {
    f.assignment()
        .iter()
        .map(|(v, w)| format!("{v} {w}"))
        .collect::<Vec<_>>()
        .join("; ")
}

fn parse_map_line(
    line: usize,
    text: &str,
    domain: &Arc<SimplicialComplex>,
    codomain: &Arc<SimplicialComplex>,
) -> Result<SimplicialMap> {
    let pairs = text
        .split(';')
        .map(|p| pair(line, p))
        .collect::<Result<Vec<_>, _>>()?;
    SimplicialMap::new(domain.clone(), codomain.clone(), &pairs)
}

pub fn write_sequence(seq: &ContiguitySequence) -> String {
    let mut out = format!("steps: {}\n", seq.step_count());
    for m in seq.maps() {
        out.push_str(&map_line(m));
        out.push('\n');
    }
    out
}

type Lines<'a> = std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>;

fn expect<'a>(lines: &mut Lines<'a>, what: &str) -> Result<(usize, &'a str)> {
    lines
        .next()
        .ok_or_else(|| ParseError::new(0, format!("unexpected end of input, expected {what}")).into())
}

fn read_sequence(
    lines: &mut Lines<'_>,
    domain: &Arc<SimplicialComplex>,
    codomain: &Arc<SimplicialComplex>,
) -> Result<ContiguitySequence> {
    let (line, head) = expect(lines, "`steps: m`")?;
    let m: usize = head
        .strip_prefix("steps:")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| ParseError::new(line, "expected `steps: m`"))?;
    let mut maps = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        let (line, l) = expect(lines, "a map line")?;
        maps.push(parse_map_line(line, l, domain, codomain)?);
    }
    ContiguitySequence::new(maps)
}

pub fn parse_sequence(
    text: &str,
    domain: &Arc<SimplicialComplex>,
    codomain: &Arc<SimplicialComplex>,
) -> Result<ContiguitySequence> {
    let mut lines: Lines = (Box::new(content_lines(text)) as Box<dyn Iterator<Item = _>>).peekable();
    let seq = read_sequence(&mut lines, domain, codomain)?;
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(line, "trailing content").into());
    }
    Ok(seq)
}

pub fn write_certificate(cert: &SdCertificate) -> String {
    let mut out = format!("value {}\npieces {}\n", cert.value, cert.pieces.len());
    for (k, piece) in cert.pieces.iter().enumerate() {
        out.push_str(&format!("piece {k}\n"));
        for s in piece {
            let labels: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("facet {}\n", labels.join(" ")));
        }
        for (i, seq) in cert.witnesses.get(k).into_iter().flatten().enumerate() {
            out.push_str(&format!("witness {i}\n"));
            out.push_str(&write_sequence(seq));
        }
    }
    out
}

/// Parses a certificate for maps into `codomain`. Witness maps are read
/// against the subcomplex generated by their piece's facets.
pub fn parse_certificate(text: &str, codomain: &Arc<SimplicialComplex>) -> Result<SdCertificate> {
    let mut lines: Lines = (Box::new(content_lines(text)) as Box<dyn Iterator<Item = _>>).peekable();
    let number = |lines: &mut Lines<'_>, key: &str| -> Result<usize> {
        let (line, l) = expect(lines, key)?;
        l.strip_prefix(key)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| ParseError::new(line, format!("expected `{key} <n>`")).into())
    };
    let value = number(&mut lines, "value")?;
    let count = number(&mut lines, "pieces")?;
    let mut pieces = Vec::with_capacity(count);
    let mut witnesses = Vec::with_capacity(count);
    for k in 0..count {
        let idx = number(&mut lines, "piece")?;
        if idx != k {
            return Err(ParseError::new(0, format!("piece {idx} out of order")).into());
        }
        let mut facets = Vec::new();
        while let Some(&(line, l)) = lines.peek() {
            let Some(rest) = l.strip_prefix("facet ") else { break };
            lines.next();
            let vs = rest
                .split_whitespace()
                .map(|t| label(line, t))
                .collect::<Result<Vec<_>, _>>()?;
            facets.push(Simplex::new(vs).map_err(|_| ParseError::new(line, "empty facet"))?);
        }
        let mut chains = Vec::new();
        if !facets.is_empty() {
            let sub = Arc::new(SimplicialComplex::build(
                facets.iter().map(|s| s.vertices().to_vec()).collect(),
            )?);
            while lines.peek().is_some_and(|(_, l)| l.starts_with("witness")) {
                lines.next();
                chains.push(read_sequence(&mut lines, &sub, codomain)?);
            }
        }
        pieces.push(facets);
        witnesses.push(chains);
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(line, "trailing content").into());
    }
    Ok(SdCertificate {
        pieces,
        witnesses,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let text = "# whiskered cycle\nv1 v0\nv2 v1\nv1 v3\n\nv3 v2  # last\n";
        let k = parse_complex_str(text).unwrap();
        let canon = write_complex(&k);
        assert_eq!(canon, "v0 v1\nv1 v2\nv1 v3\nv2 v3\n");
        assert_eq!(write_complex(&parse_complex_str(&canon).unwrap()), canon);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_complex_str("# nothing\n\n"), Err(Error::Parse(_))));
        match parse_complex_str("a b\nc (d\n") {
            Err(Error::Parse(e)) => assert_eq!(e.line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_map_header("mapping a -> b"), Err(Error::Parse(_))));
    }

    #[test]
    fn map_body_and_missing_vertex() {
        let k = Arc::new(parse_complex_str("a b\nb c\n").unwrap());
        let f = parse_map_body("a a\nb b\nc b\n", k.clone(), k.clone()).unwrap();
        assert_eq!(f.images(), &[0, 1, 1]);
        assert!(matches!(
            parse_map_body("a a\nb b\n", k.clone(), k.clone()),
            Err(Error::MissingVertex(_))
        ));
        assert!(matches!(
            parse_map_body("a a\nb c\nc a\n", k.clone(), k),
            Err(Error::NotSimplicial(_))
        ));
    }

    #[test]
    fn sequence_round_trip() {
        let k = Arc::new(parse_complex_str("a b c\n").unwrap());
        let id = SimplicialMap::identity(&k);
        let c = SimplicialMap::constant(&k, &k, &"a".into()).unwrap();
        let seq = ContiguitySequence::new(vec![id, c]).unwrap();
        let text = write_sequence(&seq);
        assert!(text.starts_with("steps: 1\n"));
        assert_eq!(parse_sequence(&text, &k, &k).unwrap(), seq);
    }
}
