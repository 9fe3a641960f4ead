//! Text formats: point clouds, distance matrices, relations, subsets,
//! complexes, vertex maps, ladders and degree lists.
//!
//! Blank lines and lines starting with `#` are skipped by every line-based
//! format. Errors carry 1-based line numbers.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::space::{geometric_scales, point_set, Entourage, MetricCloud, PointSet};

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Most points or vertices any file may describe.
pub const MAX_POINTS: usize = crate::generate::MAX_POINTS;

/// Most faces a complex file may expand to below its dimension cap.
pub const MAX_FACES: u64 = 10_000_000;

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    let i = tok.parse::<usize>().map_err(|_| Error::parse(line, format!("expected a vertex index, found {tok:?}")))?;
    if i >= MAX_POINTS {
        return Err(Error::parse(line, format!("index {i} above the limit {}", MAX_POINTS - 1)));
    }
    Ok(i)
}

/// Faces of dimension at most `max_dim` in a `k`-vertex simplex, saturating.
fn face_count(k: usize, max_dim: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for j in 1..=k.min(max_dim + 1) {
        c = c.saturating_mul((k + 1 - j) as u64) / j as u64;
        total = total.saturating_add(c);
    }
    total
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok.trim().parse().map_err(|_| Error::parse(line, format!("expected a number, found {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

/// Rows of a headerless CSV of reals. A first row with no numeric field is
/// taken as a header and skipped.
fn csv_rows(text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rows.is_empty() && k == 0 && rec.iter().all(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rows.len() == MAX_POINTS {
            return Err(Error::parse(line, format!("more than {MAX_POINTS} rows")));
        }
        let row = rec.iter().map(|f| parse_real(f, line)).collect::<Result<Vec<_>>>()?;
        rows.push((line, row));
    }
    Ok(rows)
}

/// Point cloud from CSV, one point per row, all rows of equal arity.
pub fn parse_points_csv(text: &str) -> Result<MetricCloud> {
    let rows = csv_rows(text)?;
    let Some((_, first)) = rows.first() else {
        return Err(Error::invalid("point file contains no points"));
    };
    let arity = first.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != arity) {
        return Err(Error::parse(*line, format!("expected {arity} coordinates, found {}", r.len())));
    }
    MetricCloud::from_coordinates(rows.into_iter().map(|(_, r)| r).collect())
}

/// Distance matrix from CSV; symmetry and the diagonal are validated.
pub fn parse_distance_matrix(text: &str) -> Result<MetricCloud> {
    let rows = csv_rows(text)?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::invalid("distance matrix is empty"));
    }
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::parse(*line, format!("expected {n} entries, found {}", r.len())));
    }
    MetricCloud::from_distance_matrix(rows.into_iter().map(|(_, r)| r).collect())
}

/// A relation read from `i j` lines.
#[derive(Clone, Debug)]
pub struct ParsedRelation {
    pub entourage: Entourage,
    pub warnings: Vec<String>,
}

/// Relation from `i j` lines; the diagonal is implicit and missing reverse
/// pairs are added with a warning. The carrier is `0..n`, or `0..=max index`.
pub fn parse_relation(text: &str, n: Option<usize>) -> Result<ParsedRelation> {
    let mut pairs = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(line, format!("expected \"i j\", found {l:?}")));
        }
        let (i, j) = (parse_index(toks[0], line)?, parse_index(toks[1], line)?);
        if let Some(n) = n {
            if i >= n || j >= n {
                return Err(Error::parse(line, format!("index out of range for {n} points")));
            }
        }
        pairs.push((i, j));
    }
    let n = match n {
        Some(n) => n,
        None => pairs.iter().map(|&(i, j)| i.max(j) + 1).max().ok_or_else(|| Error::invalid("relation is empty"))?,
    };
    let (entourage, added) = Entourage::from_pairs(n, pairs)?;
    let warnings = if added { vec!["relation was not symmetric; reverse pairs added".to_string()] } else { Vec::new() };
    Ok(ParsedRelation { entourage, warnings })
}

/// Subset of `0..n`, one index per line.
pub fn parse_subset(text: &str, n: usize) -> Result<PointSet> {
    let mut idx = Vec::new();
    for (line, l) in content_lines(text) {
        let i = parse_index(l, line)?;
        if i >= n {
            return Err(Error::parse(line, format!("index {i} out of range for {n} points")));
        }
        idx.push(i);
    }
    point_set(n, idx)
}

/// Complex from one maximal simplex per line. The vertex count is
/// `vertex_count` or one more than the largest index.
pub fn parse_complex(text: &str, vertex_count: Option<usize>, max_dim: usize) -> Result<SimplicialComplex> {
    let mut simplices = Vec::new();
    let mut faces = 0u64;
    for (line, l) in content_lines(text) {
        let mut s = l.split_whitespace().map(|t| parse_index(t, line)).collect::<Result<Vec<_>>>()?;
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse(line, "repeated vertex in a simplex"));
        }
        if let Some(n) = vertex_count {
            if s.iter().any(|&v| v >= n) {
                return Err(Error::parse(line, format!("vertex out of range for {n} vertices")));
            }
        }
        faces = faces.saturating_add(face_count(s.len(), max_dim));
        if faces > MAX_FACES {
            return Err(Error::parse(line, format!("complex expands to more than {MAX_FACES} faces")));
        }
        simplices.push(s);
    }
    let n = vertex_count.unwrap_or_else(|| simplices.iter().flatten().map(|&v| v + 1).max().unwrap_or(0));
    SimplicialComplex::from_simplices(n, &simplices, max_dim)
}

/// Maximal simplices, one per line, in lexicographic order.
pub fn export_complex(cx: &SimplicialComplex) -> String {
    let mut out = String::new();
    for s in cx.maximal_simplices() {
        let words: Vec<String> = s.iter().map(usize::to_string).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

/// Vertex map from `i j` lines, one per source vertex.
pub fn parse_vertex_map(text: &str, source: usize, target: usize) -> Result<Vec<usize>> {
    let mut map = vec![None; source];
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(line, format!("expected \"i j\", found {l:?}")));
        }
        let (i, j) = (parse_index(toks[0], line)?, parse_index(toks[1], line)?);
        if i >= source || j >= target {
            return Err(Error::parse(line, format!("pair ({i}, {j}) out of range for {source} → {target} points")));
        }
        if map[i].replace(j).is_some() {
            return Err(Error::parse(line, format!("vertex {i} mapped twice")));
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, j)| j.ok_or_else(|| Error::invalid(format!("vertex {i} has no image"))))
        .collect()
}

/// Geometric ladder `start:ratio:count`.
pub fn parse_ladder_spec(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("ladder spec {spec:?} is not start:ratio:count")));
    }
    let start = parse_real(parts[0], 1).map_err(|_| Error::invalid(format!("bad ladder start {:?}", parts[0])))?;
    let ratio = parse_real(parts[1], 1).map_err(|_| Error::invalid(format!("bad ladder ratio {:?}", parts[1])))?;
    let count: usize = parts[2].trim().parse().map_err(|_| Error::invalid(format!("bad ladder count {:?}", parts[2])))?;
    if count > 10_000 {
        return Err(Error::invalid("ladder count above 10000"));
    }
    geometric_scales(start, ratio, count)
}

/// Explicit scales `a,b,c`, strictly decreasing.
pub fn parse_scales(spec: &str) -> Result<Vec<f64>> {
    let scales = spec
        .split(',')
        .map(|t| parse_real(t, 1).map_err(|_| Error::invalid(format!("bad scale {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if scales.iter().any(|&s| s <= 0.0) {
        return Err(Error::invalid("scales must be positive"));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("scales must be strictly decreasing"));
    }
    Ok(scales)
}

/// Degrees as `0,1,2` or a range `0-2`.
pub fn parse_degrees(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid(format!("bad degree list {spec:?}"));
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once('-') {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b || b > 64 {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            let d: usize = part.parse().map_err(|_| bad())?;
            if d > 64 {
                return Err(bad());
            }
            out.push(d);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
