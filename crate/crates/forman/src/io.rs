//! Plain-text input formats. `#` starts a comment; blank lines are ignored.
//!
//! * `.top`: header `TOP <vertex_count> <top_count>`, an optional line
//!   `F0 <value>...` with one value per vertex, then one top simplex per line.
//! * `.pts`: one point per line, all with the same number of coordinates.
//! * `.edg`: one edge per line, two vertex indices.
//!
//! A filtration file holds one value per vertex, whitespace separated.

use std::fmt::Write as _;
use std::path::Path;

use forman_core::{IaStarComplex, Simplex, Vertex};

use crate::error::{AppError, AppResult};

/// Parsed `.top` file.
#[derive(Debug, Clone, PartialEq)]
pub struct TopFile {
    pub vertex_count: usize,
    pub tops: Vec<Simplex>,
    pub f0: Option<Vec<f64>>,
}

pub fn read_file(path: &Path) -> AppResult<String> {
    std::fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> AppResult<()> {
    std::fs::write(path, contents).map_err(|source| AppError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Non-empty content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn integer(line: usize, token: &str) -> AppResult<u64> {
    token
        .parse()
        .map_err(|_| AppError::parse(line, "expected integer"))
}

fn real(line: usize, token: &str) -> AppResult<f64> {
    let x: f64 = token
        .parse()
        .map_err(|_| AppError::parse(line, "expected number"))?;
    if !x.is_finite() {
        return Err(AppError::parse(line, "expected finite number"));
    }
    Ok(x)
}

fn vertex(line: usize, token: &str) -> AppResult<Vertex> {
    let v = integer(line, token)?;
    Vertex::try_from(v).map_err(|_| AppError::parse(line, "vertex index too large"))
}

pub fn parse_top(text: &str) -> AppResult<TopFile> {
    let mut lines = content_lines(text).peekable();
    let (line, header) = lines
        .next()
        .ok_or_else(|| AppError::parse(1, "missing TOP header"))?;
    if header.len() != 3 || header[0] != "TOP" {
        return Err(AppError::parse(
            line,
            "expected header \"TOP <vertex_count> <top_count>\"",
        ));
    }
    let vertex_count = integer(line, header[1])? as usize;
    let top_count = integer(line, header[2])? as usize;

    let mut f0 = None;
    if let Some((line, tokens)) = lines.peek() {
        if tokens[0] == "F0" {
            let values = tokens[1..]
                .iter()
                .map(|t| real(*line, t))
                .collect::<AppResult<Vec<f64>>>()?;
            if values.len() != vertex_count {
                return Err(AppError::parse(
                    *line,
                    format!("expected {vertex_count} F0 values, found {}", values.len()),
                ));
            }
            f0 = Some(values);
            lines.next();
        }
    }

    let mut tops = Vec::with_capacity(top_count);
    let mut last_line = line;
    for (line, tokens) in lines {
        last_line = line;
        let vs = tokens
            .iter()
            .map(|t| vertex(line, t))
            .collect::<AppResult<Vec<Vertex>>>()?;
        if let Some(&v) = vs.iter().find(|&&v| v as usize >= vertex_count) {
            return Err(AppError::parse(
                line,
                format!("vertex {v} out of range (vertex count {vertex_count})"),
            ));
        }
        let s = Simplex::new(vs).map_err(|e| AppError::parse(line, e.to_string()))?;
        tops.push(s);
    }
    if tops.len() != top_count {
        return Err(AppError::parse(
            last_line,
            format!(
                "header declares {top_count} top simplices, found {}",
                tops.len()
            ),
        ));
    }
    Ok(TopFile {
        vertex_count,
        tops,
        f0,
    })
}

pub fn parse_points(text: &str) -> AppResult<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (line, tokens) in content_lines(text) {
        let p = tokens
            .iter()
            .map(|t| real(line, t))
            .collect::<AppResult<Vec<f64>>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(AppError::parse(
                    line,
                    format!("expected {} coordinates, found {}", first.len(), p.len()),
                ));
            }
        }
        points.push(p);
    }
    Ok(points)
}

/// Edges plus the implied vertex count (largest index + 1).
pub fn parse_edges(text: &str) -> AppResult<(usize, Vec<(Vertex, Vertex)>)> {
    let mut edges = Vec::new();
    let mut n = 0usize;
    for (line, tokens) in content_lines(text) {
        if tokens.len() != 2 {
            return Err(AppError::parse(
                line,
                format!("expected 2 vertex indices, found {}", tokens.len()),
            ));
        }
        let (a, b) = (vertex(line, tokens[0])?, vertex(line, tokens[1])?);
        if a == b {
            return Err(AppError::parse(line, format!("self-loop on vertex {a}")));
        }
        n = n.max(a.max(b) as usize + 1);
        edges.push((a, b));
    }
    Ok((n, edges))
}

pub fn parse_f0(text: &str) -> AppResult<Vec<f64>> {
    let mut out = Vec::new();
    for (line, tokens) in content_lines(text) {
        for t in tokens {
            out.push(real(line, t)?);
        }
    }
    Ok(out)
}

/// Canonical `.top` text. The `F0` line is written only when some value
/// differs from the vertex index.
pub fn format_top(complex: &IaStarComplex) -> String {
    let mut out = format!("TOP {} {}\n", complex.vertex_count(), complex.tops().len());
    let f0 = complex.f0();
    if f0.iter().enumerate().any(|(i, &x)| x != i as f64) {
        out.push_str("F0");
        for x in f0 {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    for t in complex.tops() {
        out.push_str(&join(t.vertices()));
        out.push('\n');
    }
    out
}

pub(crate) fn join(vs: &[Vertex]) -> String {
    let mut out = String::new();
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_round_trip() {
        let text = "# wedge\nTOP 5 3\n0 1 2\n1 2 3 # shared edge\n\n3 4\n";
        let parsed = parse_top(text).unwrap();
        assert_eq!(parsed.vertex_count, 5);
        assert_eq!(parsed.tops.len(), 3);
        assert_eq!(parsed.f0, None);
        let (k, _) = IaStarComplex::build(5, parsed.tops, None).unwrap();
        assert_eq!(format_top(&k), "TOP 5 3\n0 1 2\n1 2 3\n3 4\n");
    }

    #[test]
    fn top_with_f0() {
        let parsed = parse_top("TOP 3 1\nF0 2 0.5 1\n2 0 1\n").unwrap();
        assert_eq!(parsed.f0, Some(vec![2.0, 0.5, 1.0]));
        assert_eq!(parsed.tops[0].vertices(), &[0, 1, 2]);
        let (k, _) = IaStarComplex::build(3, parsed.tops, parsed.f0).unwrap();
        assert_eq!(format_top(&k), "TOP 3 1\nF0 2 0.5 1\n0 1 2\n");
    }

    #[test]
    fn top_errors() {
        let msg = |t: &str| parse_top(t).unwrap_err().to_string();
        assert_eq!(msg("TOP 3 1\n0 x\n"), "line 2: expected integer");
        assert_eq!(
            msg("TOP 3 2\n0 1\n"),
            "line 2: header declares 2 top simplices, found 1"
        );
        assert_eq!(
            msg("TOP 3 1\n0 5\n"),
            "line 2: vertex 5 out of range (vertex count 3)"
        );
        assert_eq!(msg("TOP 3 1\n0 0\n"), "line 2: degenerate simplex");
        assert_eq!(
            msg("TOP 3 1\nF0 1 2\n0 1\n"),
            "line 2: expected 3 F0 values, found 2"
        );
        assert!(msg("").starts_with("line 1: missing"));
        assert!(msg("TOPS 1 1\n0\n").starts_with("line 1: expected header"));
    }

    #[test]
    fn edges() {
        assert_eq!(
            parse_edges("0 1\n1 2\n").unwrap(),
            (3, vec![(0, 1), (1, 2)])
        );
        assert_eq!(
            parse_edges("0 x\n").unwrap_err().to_string(),
            "line 1: expected integer"
        );
        assert!(parse_edges("0 1 2\n").is_err());
        assert!(parse_edges("3 3\n").is_err());
    }

    #[test]
    fn points() {
        let pts = parse_points("0 0\n1 0 # right\n0 1\n").unwrap();
        assert_eq!(pts, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(
            parse_points("0 0\n1\n").unwrap_err().to_string(),
            "line 2: expected 2 coordinates, found 1"
        );
        assert_eq!(
            parse_points("0 nan\n").unwrap_err().to_string(),
            "line 1: expected finite number"
        );
        assert_eq!(
            parse_points("0 a\n").unwrap_err().to_string(),
            "line 1: expected number"
        );
    }

    #[test]
    fn filtration() {
        assert_eq!(parse_f0("1 2\n# c\n3\n").unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
