//! Text formats for functions and distributions.
//!
//! Function file:
//!
//! ```text
//! grid 2 3 3
//! 5
//! 1
//! 3/2
//! ...
//! ```
//!
//! The header gives the dimension and extents; values follow one per line in
//! row-major order (last coordinate fastest), each an integer or `p/q`.
//!
//! Distribution file: a `dist m` header, then `m` lines of coordinates followed
//! by a weight. Blank lines and lines starting with `#` are ignored by both
//! readers.

use std::io::{BufRead, Write};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::grid::{GridDomain, GridFunction, GridPoint};
use crate::scalar::ExactScalar;

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| line.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

pub fn read_function<R: BufRead>(reader: R) -> Result<GridFunction> {
    let mut lines = content_lines(reader);
    let (hline, header) = lines.next().ok_or_else(|| format_err(1, "empty function file"))??;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("grid") {
        return Err(format_err(hline, "expected header `grid d n1 ... nd`"));
    }
    let d: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err(hline, "missing dimension"))?;
    let dims: Vec<usize> = tokens
        .map(|t| t.parse().map_err(|_| format_err(hline, format!("bad extent `{t}`"))))
        .collect::<Result<_>>()?;
    if dims.len() != d {
        return Err(format_err(hline, format!("dimension {d} but {} extents", dims.len())));
    }
    let domain = GridDomain::new(dims).map_err(|e| format_err(hline, e.to_string()))?;
    let mut values = Vec::with_capacity(domain.len());
    for line in lines {
        let (no, text) = line?;
        let v: ExactScalar = text
            .trim()
            .parse()
            .map_err(|e: Error| format_err(no, e.to_string()))?;
        values.push(v);
    }
    if values.len() != domain.len() {
        return Err(format_err(
            0,
            format!("expected {} values, found {}", domain.len(), values.len()),
        ));
    }
    GridFunction::new(domain, values)
}

pub fn write_function<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    let dims = f.domain().dims();
    write!(out, "grid {}", dims.len())?;
    for n in dims {
        write!(out, " {n}")?;
    }
    writeln!(out)?;
    for v in f.values() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// Reads a distribution; points are checked against `domain` when given.
pub fn read_distribution<R: BufRead>(
    reader: R,
    domain: Option<&GridDomain>,
) -> Result<DiscreteDistribution> {
    let mut lines = content_lines(reader);
    let (hline, header) = lines.next().ok_or_else(|| format_err(1, "empty distribution file"))??;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("dist") {
        return Err(format_err(hline, "expected header `dist m`"));
    }
    let m: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err(hline, "missing support size"))?;
    let mut support = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for line in lines {
        let (no, text) = line?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let (weight, coords) = tokens
            .split_last()
            .filter(|(_, c)| !c.is_empty())
            .ok_or_else(|| format_err(no, "expected coordinates followed by a weight"))?;
        let coords: Vec<i64> = coords
            .iter()
            .map(|t| t.parse().map_err(|_| format_err(no, format!("bad coordinate `{t}`"))))
            .collect::<Result<_>>()?;
        if let Some(d) = domain {
            if coords.len() != d.dimension() {
                return Err(format_err(no, "coordinate count does not match the domain"));
            }
        }
        let w: ExactScalar = weight.parse().map_err(|e: Error| format_err(no, e.to_string()))?;
        support.push(GridPoint::new(coords));
        weights.push(w);
    }
    if support.len() != m {
        return Err(format_err(0, format!("expected {m} support points, found {}", support.len())));
    }
    DiscreteDistribution::new(support, weights, domain)
}

pub fn write_distribution<W: Write>(d: &DiscreteDistribution, mut out: W) -> Result<()> {
    writeln!(out, "dist {}", d.support().len())?;
    for (p, w) in d.support().iter().zip(d.weights()) {
        for c in p.coords() {
            write!(out, "{c} ")?;
        }
        writeln!(out, "{w}")?;
    }
    Ok(())
}
