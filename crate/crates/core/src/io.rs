//! Plain-text knot and mesh files.
//!
//! Knot file: line 1 holds the degree `m`, line 2 whitespace-separated
//! values. Strictly increasing values are breakpoints and get clamped; a
//! full vector whose end values repeat `m+1` times is taken as is.
//!
//! Mesh file: two lines, the `X` and `Y` breakpoints.

use std::fmt::Write as _;
use std::path::Path;

use crate::bivariate::TensorMesh;
use crate::error::{Error, Result};
use crate::splinecore::{KnotLayout, KnotSequence};

fn numbers(line: &str, what: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{tok}' in {what}")))
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Knots from a degree and a list of values (breakpoints or a full clamped
/// vector).
pub fn knots_from_values(m: usize, values: &[f64]) -> Result<KnotSequence> {
    let n = values.len();
    let clamped_ends = n > 2 * (m + 1)
        && values[..=m].iter().all(|&v| v == values[0])
        && values[n - m - 1..].iter().all(|&v| v == values[n - 1]);
    if clamped_ends && m > 0 {
        KnotSequence::from_knots(m, values.to_vec(), KnotLayout::Clamped)
    } else {
        KnotSequence::clamped(m, values)
    }
}

pub fn parse_knots(text: &str) -> Result<KnotSequence> {
    let mut lines = content_lines(text);
    let m_line = lines
        .next()
        .ok_or_else(|| Error::Parse("knot file is empty".into()))?;
    let m: usize = m_line
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree '{m_line}'")))?;
    let values = numbers(
        lines
            .next()
            .ok_or_else(|| Error::Parse("knot file lacks the knot line".into()))?,
        "knot line",
    )?;
    if lines.next().is_some() {
        return Err(Error::Parse("knot file has extra lines".into()));
    }
    knots_from_values(m, &values)
}

/// Writes the full knot vector so that reading it back is lossless.
pub fn format_knots(ks: &KnotSequence) -> String {
    let mut out = format!("{}\n", ks.degree());
    let vals: Vec<String> = ks.knots().iter().map(|v| format!("{v:.16e}")).collect();
    let _ = writeln!(out, "{}", vals.join(" "));
    out
}

pub fn parse_mesh(text: &str) -> Result<TensorMesh> {
    let lines: Vec<&str> = content_lines(text).collect();
    if lines.len() != 2 {
        return Err(Error::Parse(format!(
            "mesh file needs exactly two lines, found {}",
            lines.len()
        )));
    }
    TensorMesh::new(numbers(lines[0], "X line")?, numbers(lines[1], "Y line")?)
}

pub fn format_mesh(mesh: &TensorMesh) -> String {
    let line = |v: &[f64]| v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ");
    format!("{}\n{}\n", line(mesh.x()), line(mesh.y()))
}

pub fn read_knots(path: &Path) -> Result<KnotSequence> {
    parse_knots(&read(path)?)
}

pub fn read_mesh(path: &Path) -> Result<TensorMesh> {
    parse_mesh(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoints_are_clamped() {
        let ks = parse_knots("2\n0 0.5 1\n").unwrap();
        assert_eq!(ks.knots(), &[0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn round_trip() {
        let ks = parse_knots("# cubic\n3\n0 0.1 0.35 1\n").unwrap();
        let again = parse_knots(&format_knots(&ks)).unwrap();
        assert_eq!(ks.knots(), again.knots());
        let mesh = parse_mesh("0 1 3\n0 2 2.5 4\n").unwrap();
        assert_eq!(parse_mesh(&format_mesh(&mesh)).unwrap(), mesh);
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "x\n0 1", "2\n", "2\n0 a 1", "2\n1 0", "2\n0 1\n3"] {
            assert!(parse_knots(bad).is_err(), "{bad:?}");
        }
        assert!(parse_mesh("0 1\n").is_err());
        assert!(parse_mesh("0 1\n1 0\n").is_err());
    }
}
