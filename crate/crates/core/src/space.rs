//! Finite models of uniform spaces: point clouds, entourages, ladders of
//! entourages and covers, with the refinement and star operations on them.
//!
//! Carriers are always index sets `0..n`. Subsets are [`FixedBitSet`]s over
//! the carrier.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack applied when comparing a distance against a scale, so that
/// chords computed through `sin`/`cos` still land on the closed side of ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Subset of a carrier `0..n`.
pub type PointSet = FixedBitSet;

/// Builds a [`PointSet`] of capacity `n` from indices.
pub fn point_set(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<PointSet> {
    let mut set = FixedBitSet::with_capacity(n);
    for i in indices {
        if i >= n {
            return Err(Error::invalid(format!("point {i} outside carrier of size {n}")));
        }
        set.insert(i);
    }
    Ok(set)
}

pub fn full_set(n: usize) -> PointSet {
    let mut set = FixedBitSet::with_capacity(n);
    set.insert_range(..);
    set
}

pub(crate) fn set_indices(set: &PointSet) -> Vec<usize> {
    set.ones().collect()
}

pub(crate) fn close_within(d: f64, eps: f64) -> bool {
    d <= eps + TIE_TOLERANCE * eps.max(1.0)
}

/// A finite point set with a metric, given either by coordinates or by an
/// explicit distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricCloud {
    n: usize,
    coords: Option<Vec<Vec<f64>>>,
    dist: Vec<f64>,
}

impl MetricCloud {
    /// Euclidean cloud; the distance matrix is derived from the coordinates.
    pub fn from_coordinates(coords: Vec<Vec<f64>>) -> Result<Self> {
        let n = coords.len();
        if let Some(first) = coords.first() {
            let arity = first.len();
            if arity == 0 {
                return Err(Error::invalid("points need at least one coordinate"));
            }
            for (i, p) in coords.iter().enumerate() {
                if p.len() != arity {
                    return Err(Error::invalid(format!(
                        "point {i} has {} coordinates, expected {arity}",
                        p.len()
                    )));
                }
                if p.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
                }
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(MetricCloud { n, coords: Some(coords), dist })
    }

    /// Cloud given by a full distance matrix, validated for symmetry, zero
    /// diagonal and non-negative finite entries.
    pub fn from_distance_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "distance matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid(format!("distance ({i},{j}) = {d} is not a non-negative real")));
                }
                if i == j && d != 0.0 {
                    return Err(Error::invalid(format!("diagonal entry ({i},{i}) is {d}, expected 0")));
                }
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if (a - b).abs() > TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::invalid(format!("distance matrix is not symmetric at ({i},{j})")));
                }
                let m = 0.5 * (a + b);
                dist[i * n + j] = m;
                dist[j * n + i] = m;
            }
        }
        Ok(MetricCloud { n, coords: None, dist })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn coordinates(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest positive pairwise distance, `None` when all points coincide.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.dist.iter().copied().filter(|&d| d > 0.0).reduce(f64::min)
    }

    /// Largest distance from a point to its nearest neighbour: the scale at
    /// which the cloud becomes connected by single steps is at least this.
    pub fn nearest_neighbour_gap(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != i)
                    .map(|j| self.distance(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    /// Restriction of the metric to the listed points, in the listed order.
    pub fn subcloud(&self, indices: &[usize]) -> Result<MetricCloud> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::invalid(format!("point {bad} outside cloud of size {}", self.n)));
        }
        match &self.coords {
            Some(c) => MetricCloud::from_coordinates(indices.iter().map(|&i| c[i].clone()).collect()),
            None => MetricCloud::from_distance_matrix(
                indices
                    .iter()
                    .map(|&i| indices.iter().map(|&j| self.distance(i, j)).collect())
                    .collect(),
            ),
        }
    }

    /// `max_x min_{s ∈ sample} d(x, s)` over this cloud.
    pub fn covering_radius(&self, sample: &[usize]) -> Result<f64> {
        if sample.is_empty() {
            return Err(Error::invalid("covering radius of an empty sample"));
        }
        if let Some(&bad) = sample.iter().find(|&&i| i >= self.n) {
            return Err(Error::invalid(format!("point {bad} outside cloud of size {}", self.n)));
        }
        Ok((0..self.n)
            .map(|x| sample.iter().map(|&s| self.distance(x, s)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max))
    }

    pub fn distance_rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }
}

/// A reflexive symmetric relation on `0..n`, stored as dense bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entourage {
    rows: Vec<FixedBitSet>,
}

impl Entourage {
    /// Validates reflexivity and symmetry of the given rows.
    pub fn from_rows(rows: Vec<FixedBitSet>) -> Result<Self> {
        let n = rows.len();
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("relation row {x} has width {}, expected {n}", row.len())));
            }
            if !row.contains(x) {
                return Err(Error::invalid(format!("relation is not reflexive at {x}")));
            }
            if let Some(y) = row.ones().find(|&y| !rows[y].contains(x)) {
                return Err(Error::invalid(format!("relation is not symmetric at ({x},{y})")));
            }
        }
        Ok(Entourage { rows })
    }

    /// Symmetric reflexive closure of the listed pairs. The flag reports
    /// whether symmetrization had to add any pair.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<(Self, bool)> {
        let mut rows = Entourage::identity(n).rows;
        let mut listed = Vec::new();
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::invalid(format!("pair ({x},{y}) outside carrier of size {n}")));
            }
            rows[x].insert(y);
            listed.push((x, y));
        }
        let mut added = false;
        for (x, y) in listed {
            if !rows[y].contains(x) {
                rows[y].insert(x);
                added = true;
            }
        }
        Ok((Entourage { rows }, added))
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|x| {
                let mut r = FixedBitSet::with_capacity(n);
                r.insert(x);
                r
            })
            .collect();
        Entourage { rows }
    }

    pub fn complete(n: usize) -> Self {
        Entourage { rows: (0..n).map(|_| full_set(n)).collect() }
    }

    pub fn carrier_size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// `U[x] = { y : (x, y) ∈ U }`.
    pub fn ball(&self, x: usize) -> Result<&PointSet> {
        self.rows
            .get(x)
            .ok_or_else(|| Error::invalid(format!("point {x} outside carrier of size {}", self.rows.len())))
    }

    pub(crate) fn row(&self, x: usize) -> &PointSet {
        &self.rows[x]
    }

    pub fn is_subset(&self, other: &Entourage) -> bool {
        self.rows.len() == other.rows.len() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// Relational square `U ∘ U`.
    pub fn square(&self) -> Entourage {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = row.clone();
                for y in row.ones() {
                    out.union_with(&self.rows[y]);
                }
                out
            })
            .collect();
        Entourage { rows }
    }

    pub fn intersection(&self, other: &Entourage) -> Result<Entourage> {
        if self.rows.len() != other.rows.len() {
            return Err(Error::invalid("entourages live on different carriers"));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.intersect_with(b);
                r
            })
            .collect();
        Ok(Entourage { rows })
    }

    /// Off-diagonal pairs `(x, y)` with `x < y`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.ones().filter(move |&y| y > x).map(move |y| (x, y)))
            .collect()
    }
}

/// Basic entourage `{ (x, y) : d(x, y) ≤ eps }` of the metric uniformity.
pub fn entourage_from_metric(cloud: &MetricCloud, eps: f64) -> Result<Entourage> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid(format!("scale must be a positive real, got {eps}")));
    }
    let n = cloud.len();
    let rows = (0..n)
        .map(|x| {
            let mut r = FixedBitSet::with_capacity(n);
            for y in 0..n {
                if close_within(cloud.distance(x, y), eps) {
                    r.insert(y);
                }
            }
            r
        })
        .collect();
    Ok(Entourage { rows })
}

/// A finite descending chain of entourages. Rung 0 is the coarsest.
#[derive(Clone, Debug)]
pub struct EntourageLadder {
    scales: Vec<f64>,
    entourages: Vec<Entourage>,
}

impl EntourageLadder {
    pub fn new(scales: Vec<f64>, entourages: Vec<Entourage>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::invalid("a ladder needs at least one rung"));
        }
        if scales.len() != entourages.len() {
            return Err(Error::invalid("ladder needs exactly one entourage per scale"));
        }
        validate_scales(&scales)?;
        let n = entourages[0].carrier_size();
        for (k, pair) in entourages.windows(2).enumerate() {
            if pair[1].carrier_size() != n {
                return Err(Error::invalid("ladder entourages live on different carriers"));
            }
            if !pair[1].is_subset(&pair[0]) {
                return Err(Error::invalid(format!("ladder is not monotone between rungs {k} and {}", k + 1)));
            }
        }
        Ok(EntourageLadder { scales, entourages })
    }

    pub fn from_metric(cloud: &MetricCloud, scales: &[f64]) -> Result<Self> {
        validate_scales(scales)?;
        let entourages = scales
            .iter()
            .map(|&eps| entourage_from_metric(cloud, eps))
            .collect::<Result<Vec<_>>>()?;
        EntourageLadder::new(scales.to_vec(), entourages)
    }

    /// One-rung ladder around an explicit relation; the scale is a label.
    pub fn single(entourage: Entourage) -> Self {
        EntourageLadder { scales: vec![1.0], entourages: vec![entourage] }
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn carrier_size(&self) -> usize {
        self.entourages[0].carrier_size()
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn scale(&self, rung: usize) -> f64 {
        self.scales[rung]
    }

    pub fn entourage(&self, rung: usize) -> &Entourage {
        &self.entourages[rung]
    }

    pub fn entourages(&self) -> &[Entourage] {
        &self.entourages
    }
}

fn validate_scales(scales: &[f64]) -> Result<()> {
    if let Some(bad) = scales.iter().find(|s| !s.is_finite() || **s <= 0.0) {
        return Err(Error::invalid(format!("scale {bad} is not a positive real")));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("ladder scales must be strictly decreasing"));
    }
    Ok(())
}

/// `count` scales `start, start·ratio, start·ratio², …`.
pub fn geometric_scales(start: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !start.is_finite() || start <= 0.0 {
        return Err(Error::invalid(format!("ladder start must be positive, got {start}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!("ladder ratio must lie in (0,1), got {ratio}")));
    }
    if count == 0 {
        return Err(Error::invalid("ladder needs at least one rung"));
    }
    Ok((0..count).map(|k| start * ratio.powi(k as i32)).collect())
}

/// A cover of `0..n` by non-empty members, stored canonically: members sorted
/// by their index lists, duplicates removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    carrier: usize,
    members: Vec<PointSet>,
}

impl Cover {
    pub fn new(carrier: usize, members: Vec<PointSet>) -> Result<Self> {
        let cover = Cover::canonical(carrier, members)?;
        let mut union = FixedBitSet::with_capacity(carrier);
        for m in &cover.members {
            union.union_with(m);
        }
        if union.count_ones(..) != carrier {
            let missing = (0..carrier).find(|&x| !union.contains(x)).unwrap_or(0);
            return Err(Error::invalid(format!("members do not cover point {missing}")));
        }
        Ok(cover)
    }

    pub fn from_indices(carrier: usize, members: &[Vec<usize>]) -> Result<Self> {
        let sets = members
            .iter()
            .map(|m| point_set(carrier, m.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Cover::new(carrier, sets)
    }

    fn canonical(carrier: usize, members: Vec<PointSet>) -> Result<Self> {
        let mut keyed = Vec::with_capacity(members.len());
        for m in members {
            let idx = set_indices(&m);
            if idx.is_empty() {
                return Err(Error::invalid("cover members must be non-empty"));
            }
            let m = if m.len() == carrier { m } else { point_set(carrier, idx.iter().copied())? };
            keyed.push((idx, m));
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        Ok(Cover { carrier, members: keyed.into_iter().map(|(_, m)| m).collect() })
    }

    /// Every point in its own member.
    pub fn singletons(carrier: usize) -> Self {
        let members = (0..carrier)
            .map(|x| {
                let mut m = FixedBitSet::with_capacity(carrier);
                m.insert(x);
                m
            })
            .collect();
        Cover { carrier, members }
    }

    /// The one-member cover `{carrier}`.
    pub fn trivial(carrier: usize) -> Self {
        let members = if carrier == 0 { Vec::new() } else { vec![full_set(carrier)] };
        Cover { carrier, members }
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn member_indices(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(set_indices).collect()
    }

    /// Preimage cover `{ f⁻¹(V) : V ∈ self }` along `map: 0..m → 0..carrier`.
    pub fn pullback(&self, map: &[usize]) -> Result<Cover> {
        if let Some(&bad) = map.iter().find(|&&y| y >= self.carrier) {
            return Err(Error::invalid(format!("map value {bad} outside carrier of size {}", self.carrier)));
        }
        let m = map.len();
        let members = self
            .members
            .iter()
            .map(|v| point_set(m, (0..m).filter(|&x| v.contains(map[x]))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|s| !s.is_clear())
            .collect();
        Cover::new(m, members)
    }
}

fn same_carrier(a: &Cover, b: &Cover) -> Result<()> {
    if a.carrier != b.carrier {
        return Err(Error::invalid(format!(
            "covers live on carriers of size {} and {}",
            a.carrier, b.carrier
        )));
    }
    Ok(())
}

/// `fine` refines `coarse`: each member of `fine` sits inside a member of `coarse`.
pub fn is_refinement(coarse: &Cover, fine: &Cover) -> Result<bool> {
    same_carrier(coarse, fine)?;
    Ok(fine.members.iter().all(|v| coarse.members.iter().any(|u| v.is_subset(u))))
}

/// `𝒰 ∨ 𝒱`: all non-empty pairwise intersections.
pub fn join_cover(u: &Cover, v: &Cover) -> Result<Cover> {
    same_carrier(u, v)?;
    let mut members = Vec::with_capacity(u.members.len() * v.members.len());
    for a in &u.members {
        for b in &v.members {
            let mut m = a.clone();
            m.intersect_with(b);
            if !m.is_clear() {
                members.push(m);
            }
        }
    }
    Cover::new(u.carrier, members)
}

/// `{ U[x] : x }`, duplicates removed.
pub fn ball_cover(entourage: &Entourage) -> Cover {
    let n = entourage.carrier_size();
    Cover::canonical(n, entourage.rows.clone()).expect("balls are non-empty subsets of the carrier")
}

/// `cov` is refined by the ball cover of `entourage`.
pub fn is_uniform_cover(cov: &Cover, entourage: &Entourage) -> Result<bool> {
    is_refinement(cov, &ball_cover(entourage))
}

/// `St(A, 𝒰)`: union of the members meeting `A`.
pub fn star(a: &PointSet, cov: &Cover) -> PointSet {
    let mut out = FixedBitSet::with_capacity(cov.carrier);
    for m in &cov.members {
        if !m.is_disjoint(a) {
            out.union_with(m);
        }
    }
    out
}

/// `fine` star-refines `coarse`: each member star `St(V, fine)` sits inside a
/// member of `coarse`.
pub fn is_star_refinement(coarse: &Cover, fine: &Cover) -> Result<bool> {
    same_carrier(coarse, fine)?;
    Ok(fine
        .members
        .iter()
        .map(|v| star(v, fine))
        .all(|s| coarse.members.iter().any(|u| s.is_subset(u))))
}

/// Finite-prefix check of a normal sequence: each cover is star-refined by
/// its successor.
pub fn is_normal_ladder(covers: &[Cover]) -> Result<bool> {
    if covers.is_empty() {
        return Err(Error::invalid("normal-ladder check needs at least one cover"));
    }
    for pair in covers.windows(2) {
        if !is_star_refinement(&pair[0], &pair[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a strong-containment search over a ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrongContainment {
    pub rung: usize,
    pub scale: f64,
}

/// Coarsest rung whose ball-cover star of `a` stays inside `b`.
pub fn strong_containment(a: &PointSet, b: &PointSet, ladder: &EntourageLadder) -> Option<StrongContainment> {
    (0..ladder.len())
        .find(|&k| star(a, &ball_cover(ladder.entourage(k))).is_subset(b))
        .map(|rung| StrongContainment { rung, scale: ladder.scale(rung) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> MetricCloud {
        MetricCloud::from_coordinates(points.iter().map(|&p| vec![p]).collect()).unwrap()
    }

    fn set(n: usize, idx: &[usize]) -> PointSet {
        point_set(n, idx.iter().copied()).unwrap()
    }

    fn cover(n: usize, m: &[&[usize]]) -> Cover {
        Cover::from_indices(n, &m.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn metric_entourage_on_a_line() {
        let c = line(&[0.0, 1.0, 2.0]);
        let u = entourage_from_metric(&c, 1.0).unwrap();
        assert_eq!(u.pairs(), vec![(0, 1), (1, 2)]);
        assert!((0..3).all(|x| u.contains(x, x)));
        assert_eq!(entourage_from_metric(&c, 0.5).unwrap(), Entourage::identity(3));
        assert_eq!(entourage_from_metric(&c, 2.0).unwrap(), Entourage::complete(3));
        assert!(entourage_from_metric(&c, 0.0).is_err());
        assert!(entourage_from_metric(&c, f64::NAN).is_err());
        assert!(entourage_from_metric(&c, -1.0).is_err());
    }

    #[test]
    fn balls() {
        let c = line(&[0.0, 1.0, 2.0]);
        let u = entourage_from_metric(&c, 1.0).unwrap();
        assert_eq!(set_indices(u.ball(1).unwrap()), vec![0, 1, 2]);
        assert_eq!(set_indices(Entourage::identity(3).ball(2).unwrap()), vec![2]);
        assert_eq!(set_indices(Entourage::complete(3).ball(0).unwrap()), vec![0, 1, 2]);
        assert!(u.ball(3).is_err());
    }

    #[test]
    fn refinement_examples() {
        let u = cover(3, &[&[0, 1], &[1, 2]]);
        assert!(is_refinement(&u, &Cover::singletons(3)).unwrap());
        assert!(!is_refinement(&Cover::singletons(3), &cover(3, &[&[0, 1], &[2]])).unwrap());
        assert!(is_refinement(&u, &u).unwrap());
        assert!(is_refinement(&u, &Cover::singletons(4)).is_err());
    }

    #[test]
    fn join_examples() {
        let u = cover(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(join_cover(&u, &Cover::trivial(3)).unwrap(), u);
        let a = cover(3, &[&[0, 1], &[2]]);
        let b = cover(3, &[&[0], &[1, 2]]);
        assert_eq!(join_cover(&a, &b).unwrap(), Cover::singletons(3));
        assert_eq!(join_cover(&u, &u).unwrap().member_indices(), vec![vec![0, 1], vec![1], vec![1, 2]]);
    }

    #[test]
    fn ball_cover_examples() {
        assert_eq!(ball_cover(&Entourage::identity(3)), Cover::singletons(3));
        assert_eq!(ball_cover(&Entourage::complete(3)), Cover::trivial(3));
        let u = entourage_from_metric(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        assert_eq!(ball_cover(&u).member_indices(), vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
    }

    #[test]
    fn uniform_cover_examples() {
        let u = entourage_from_metric(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        assert!(is_uniform_cover(&Cover::trivial(3), &u).unwrap());
        assert!(is_uniform_cover(&Cover::singletons(3), &Entourage::identity(3)).unwrap());
        assert!(!is_uniform_cover(&Cover::singletons(3), &u).unwrap());
    }

    #[test]
    fn star_examples() {
        let u = entourage_from_metric(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        let bc = ball_cover(&u);
        assert!(star(&set(3, &[]), &bc).is_clear());
        assert_eq!(set_indices(&star(&set(3, &[1]), &bc)), vec![0, 1, 2]);
        assert_eq!(set_indices(&star(&set(3, &[2]), &Cover::trivial(3))), vec![0, 1, 2]);
    }

    #[test]
    fn star_refinement_examples() {
        let u = entourage_from_metric(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        let bc = ball_cover(&u);
        // Stars of singletons in the singleton cover are singletons, which fit in balls.
        assert!(is_star_refinement(&bc, &Cover::singletons(3)).unwrap());
        // The reverse direction fails: St({0,1}, balls) is the whole line.
        assert!(!is_star_refinement(&Cover::singletons(3), &bc).unwrap());
        assert!(is_star_refinement(&Cover::trivial(3), &bc).unwrap());
        assert!(is_star_refinement(&Cover::trivial(3), &Cover::trivial(3)).unwrap());
    }

    #[test]
    fn normal_ladder_examples() {
        let u = entourage_from_metric(&line(&[0.0, 1.0, 2.0]), 1.0).unwrap();
        let bc = ball_cover(&u);
        assert!(is_normal_ladder(std::slice::from_ref(&bc)).unwrap());
        assert!(is_normal_ladder(&[Cover::trivial(3), Cover::trivial(3)]).unwrap());
        assert!(is_normal_ladder(&[bc.clone(), Cover::singletons(3)]).unwrap());
        assert!(!is_normal_ladder(&[Cover::singletons(3), bc]).unwrap());
        assert!(is_normal_ladder(&[]).is_err());
    }

    #[test]
    fn strong_containment_examples() {
        let c = line(&(0..=10).map(f64::from).collect::<Vec<_>>());
        let ladder = EntourageLadder::from_metric(&c, &[2.0, 1.0]).unwrap();
        let a = set(11, &[0, 1, 2, 3]);
        let b = set(11, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(strong_containment(&a, &b, &ladder), Some(StrongContainment { rung: 1, scale: 1.0 }));
        assert_eq!(strong_containment(&a, &a, &ladder), None);
        assert_eq!(strong_containment(&set(11, &[]), &a, &ladder).map(|s| s.rung), Some(0));
    }

    #[test]
    fn ladder_validation() {
        let c = line(&[0.0, 1.0, 2.0]);
        assert!(EntourageLadder::from_metric(&c, &[1.0, 2.0]).is_err());
        assert!(EntourageLadder::from_metric(&c, &[1.0, 1.0]).is_err());
        assert!(EntourageLadder::from_metric(&c, &[]).is_err());
        let bad = EntourageLadder::new(vec![2.0, 1.0], vec![Entourage::identity(3), Entourage::complete(3)]);
        assert!(bad.is_err());
    }

    #[test]
    fn distance_matrix_validation() {
        assert!(MetricCloud::from_distance_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(MetricCloud::from_distance_matrix(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(MetricCloud::from_distance_matrix(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(MetricCloud::from_distance_matrix(vec![vec![0.0, 1.0]]).is_err());
        let c = MetricCloud::from_distance_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(c.diameter(), 1.0);
    }

    #[test]
    fn relation_symmetrization() {
        let (u, added) = Entourage::from_pairs(3, [(0, 1)]).unwrap();
        assert!(added);
        assert!(u.contains(1, 0));
        let (_, added) = Entourage::from_pairs(3, [(0, 1), (1, 0)]).unwrap();
        assert!(!added);
        assert!(Entourage::from_pairs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn covering_radius_of_half_sample() {
        let c = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(c.covering_radius(&[0, 2]).unwrap(), 1.0);
        assert_eq!(c.covering_radius(&[0, 1, 2, 3]).unwrap(), 0.0);
    }
}
