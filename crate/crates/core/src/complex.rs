//! Vietoris complexes `V(X, Y, R)` and their relative pairs.
//!
//! Every complex here is the downward closure of a family of *generating
//! sets*: the witness sets `{a : a R b}` of a Vietoris complex, the members of
//! a cover, or the maximal simplices of a loaded complex. Simplices are
//! enumerated up to `max_dim`; membership of larger vertex sets is still
//! decided exactly against the generating sets.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::space::{set_indices, Cover, Entourage, PointSet};

/// Sorted, duplicate-free vertex list.
pub type Simplex = Vec<u32>;

pub const DEFAULT_MAX_DIM: usize = 3;

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    max_dim: usize,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    generators: Vec<PointSet>,
    truncated: bool,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.max_dim == other.max_dim && self.faces == other.faces
    }
}

impl SimplicialComplex {
    pub fn empty(vertex_count: usize, max_dim: usize) -> Self {
        SimplicialComplex::from_generators(vertex_count, Vec::new(), max_dim)
    }

    /// Downward closure of `generators`, enumerated up to `max_dim`.
    ///
    /// Simplices are grown by appending a larger vertex to a smaller simplex
    /// while some generating set still contains the whole candidate, so each
    /// simplex is produced once and every level comes out sorted.
    pub fn from_generators(vertex_count: usize, generators: Vec<PointSet>, max_dim: usize) -> Self {
        let generators = maximal_sets(vertex_count, generators);
        let truncated = generators.iter().any(|g| g.count_ones(..) > max_dim + 1);

        let mut faces: Vec<Vec<Simplex>> = Vec::with_capacity(max_dim + 1);
        let mut union = FixedBitSet::with_capacity(vertex_count);
        for g in &generators {
            union.union_with(g);
        }
        let mut level: Vec<(Simplex, Vec<u32>)> = union
            .ones()
            .map(|v| {
                let owners = (0..generators.len() as u32)
                    .filter(|&g| generators[g as usize].contains(v))
                    .collect();
                (vec![v as u32], owners)
            })
            .collect();

        for dim in 0..=max_dim {
            if level.is_empty() {
                break;
            }
            let last_level = dim == max_dim;
            let mut next = Vec::new();
            if !last_level {
                let mut candidates = FixedBitSet::with_capacity(vertex_count);
                for (simplex, owners) in &level {
                    candidates.clear();
                    for &g in owners {
                        candidates.union_with(&generators[g as usize]);
                    }
                    let top = *simplex.last().expect("simplices are non-empty") as usize;
                    for w in candidates.ones().filter(|&w| w > top) {
                        let sub_owners: Vec<u32> =
                            owners.iter().copied().filter(|&g| generators[g as usize].contains(w)).collect();
                        let mut s = simplex.clone();
                        s.push(w as u32);
                        next.push((s, sub_owners));
                    }
                }
            }
            faces.push(level.into_iter().map(|(s, _)| s).collect());
            level = next;
        }

        let index = faces
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { vertex_count, max_dim, faces, index, generators, truncated }
    }

    /// Downward closure of explicit simplices, capped at `max_dim`.
    pub fn from_simplices(vertex_count: usize, simplices: &[Vec<usize>], max_dim: usize) -> Result<Self> {
        let mut gens = Vec::with_capacity(simplices.len());
        for s in simplices {
            if s.is_empty() {
                continue;
            }
            let mut set = FixedBitSet::with_capacity(vertex_count);
            for &v in s {
                if v >= vertex_count {
                    return Err(Error::invalid(format!("vertex {v} outside range 0..{vertex_count}")));
                }
                if set.put(v) {
                    return Err(Error::invalid(format!("simplex {s:?} repeats vertex {v}")));
                }
            }
            gens.push(set);
        }
        Ok(SimplicialComplex::from_generators(vertex_count, gens, max_dim))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Whether simplices above `max_dim` exist but were not enumerated.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Highest dimension with a stored simplex, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().rposition(|l| !l.is_empty())
    }

    /// The stored `dim`-simplices in lexicographic order.
    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.faces.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn total_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, simplex: &[u32]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        self.index.get(dim)?.get(simplex).copied()
    }

    /// Whether the (sorted or unsorted) vertex set spans a simplex, in any
    /// dimension.
    pub fn contains(&self, vertices: &[u32]) -> bool {
        if vertices.is_empty() {
            return true;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() <= self.max_dim + 1 {
            return self.index_of(&sorted).is_some();
        }
        self.contains_set(&sorted)
    }

    fn contains_set(&self, sorted: &[u32]) -> bool {
        if sorted.iter().any(|&v| v as usize >= self.vertex_count) {
            return false;
        }
        self.generators.iter().any(|g| sorted.iter().all(|&v| g.contains(v as usize)))
    }

    /// Maximal generating sets; the complex is their downward closure.
    pub fn generators(&self) -> &[PointSet] {
        &self.generators
    }

    /// Maximal simplices as sorted index lists in lexicographic order.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.generators.iter().map(set_indices).collect();
        out.sort();
        out
    }

    /// Every simplex (in every dimension) of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.vertex_count == other.vertex_count
            && self.generators.iter().all(|g| other.generators.iter().any(|h| g.is_subset(h)))
    }

    /// Alternating sum of stored simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }
}

/// Drops empty sets and sets contained in another; the survivors are sorted
/// by their index lists.
fn maximal_sets(vertex_count: usize, sets: Vec<PointSet>) -> Vec<PointSet> {
    let mut keyed: Vec<(Vec<usize>, PointSet)> = sets
        .into_iter()
        .map(|mut s| {
            s.grow(vertex_count);
            (set_indices(&s), s)
        })
        .filter(|(k, _)| !k.is_empty())
        .collect();
    // Larger sets first so each candidate only needs checking against kept ones.
    keyed.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    keyed.dedup_by(|a, b| a.0 == b.0);
    let mut kept: Vec<(Vec<usize>, PointSet)> = Vec::new();
    for (k, s) in keyed {
        if !kept.iter().any(|(_, t)| s.is_subset(t)) {
            kept.push((k, s));
        }
    }
    kept.sort_by(|a, b| a.0.cmp(&b.0));
    kept.into_iter().map(|(_, s)| s).collect()
}

/// A complex together with a subcomplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplexPair {
    total: SimplicialComplex,
    sub: SimplicialComplex,
}

impl SimplicialComplexPair {
    pub fn new(total: SimplicialComplex, sub: SimplicialComplex) -> Result<Self> {
        if total.max_dim != sub.max_dim {
            return Err(Error::invalid("pair members were built with different dimension caps"));
        }
        if !sub.is_subcomplex_of(&total) {
            return Err(Error::invalid("second complex is not a subcomplex of the first"));
        }
        Ok(SimplicialComplexPair { total, sub })
    }

    /// `(K, ∅)`.
    pub fn absolute(total: SimplicialComplex) -> Self {
        let sub = SimplicialComplex::empty(total.vertex_count, total.max_dim);
        SimplicialComplexPair { total, sub }
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sub(&self) -> &SimplicialComplex {
        &self.sub
    }

    pub fn max_dim(&self) -> usize {
        self.total.max_dim
    }
}

/// `V(X, Y, R)` restricted to `points ⊆ X`, with witnesses `0..witness_count`.
///
/// Witnesses are scanned in ascending order.
pub fn vietoris_complex(
    carrier: usize,
    points: &PointSet,
    witness_count: usize,
    related: impl Fn(usize, usize) -> bool,
    max_dim: usize,
) -> SimplicialComplex {
    let gens = (0..witness_count)
        .map(|b| {
            let mut g = FixedBitSet::with_capacity(carrier);
            for a in points.ones().filter(|&a| a < carrier) {
                if related(a, b) {
                    g.insert(a);
                }
            }
            g
        })
        .collect();
    SimplicialComplex::from_generators(carrier, gens, max_dim)
}

/// `X_U = V(X, X, U)`.
pub fn entourage_complex(entourage: &Entourage, max_dim: usize) -> SimplicialComplex {
    let n = entourage.carrier_size();
    let gens = (0..n).map(|b| entourage.row(b).clone()).collect();
    SimplicialComplex::from_generators(n, gens, max_dim)
}

/// `(X_U, A_U)` with `A_U = V(A, X, U ∩ (A × X))`: subsets of `A` that share
/// a witness anywhere in `X`.
pub fn vietoris_pair(a: &PointSet, entourage: &Entourage, max_dim: usize) -> Result<SimplicialComplexPair> {
    let n = entourage.carrier_size();
    if a.ones().any(|x| x >= n) {
        return Err(Error::invalid("subset is not contained in the carrier"));
    }
    let total = entourage_complex(entourage, max_dim);
    let sub_gens = (0..n)
        .map(|b| {
            let mut g = entourage.row(b).clone();
            g.intersect_with(a);
            g
        })
        .collect();
    let sub = SimplicialComplex::from_generators(n, sub_gens, max_dim);
    Ok(SimplicialComplexPair { total, sub })
}

/// `V(X, 𝒰, ∈)` restricted to `points`: subsets of `points` inside a member.
pub fn cover_vietoris_complex(points: &PointSet, cov: &Cover, max_dim: usize) -> SimplicialComplex {
    let n = cov.carrier_size();
    let gens = cov
        .members()
        .iter()
        .map(|m| {
            let mut g = m.clone();
            g.intersect_with(points);
            g
        })
        .collect();
    SimplicialComplex::from_generators(n, gens, max_dim)
}

/// `(X_𝒰, A_𝒰)` with `A_𝒰 = V(A, 𝒰, ∈)`. For a ball cover this coincides
/// with [`vietoris_pair`] of the same entourage.
pub fn cover_vietoris_pair(a: &PointSet, cov: &Cover, max_dim: usize) -> SimplicialComplexPair {
    let all = crate::space::full_set(cov.carrier_size());
    let total = cover_vietoris_complex(&all, cov, max_dim);
    let sub = cover_vietoris_complex(a, cov, max_dim);
    SimplicialComplexPair { total, sub }
}
