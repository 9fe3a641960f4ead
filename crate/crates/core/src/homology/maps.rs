use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{HomMatrix, PairHomology, Ring};
use crate::complex::{Simplex, SimplicialComplex, SimplicialComplexPair};
use crate::error::{Error, Result};
use crate::space::set_indices;

/// A vertex map certified to send simplices to simplices and sub into sub.
#[derive(Clone, Debug)]
pub struct SimplicialMapChecked<'a> {
    source: &'a SimplicialComplexPair,
    target: &'a SimplicialComplexPair,
    vertex_map: Vec<u32>,
}

impl<'a> SimplicialMapChecked<'a> {
    pub fn source(&self) -> &'a SimplicialComplexPair {
        self.source
    }

    pub fn target(&self) -> &'a SimplicialComplexPair {
        self.target
    }

    pub fn vertex_map(&self) -> &[u32] {
        &self.vertex_map
    }

    /// Image vertex set of a simplex, sorted and deduplicated.
    pub fn image(&self, simplex: &[u32]) -> Simplex {
        image_of(&self.vertex_map, simplex)
    }

    /// `other ∘ self`, re-certified against the given pairs.
    pub fn then<'b>(&self, other: &SimplicialMapChecked<'b>) -> Result<SimplicialMapChecked<'b>>
    where
        'a: 'b,
    {
        let map: Vec<usize> = self.vertex_map.iter().map(|&v| other.vertex_map[v as usize] as usize).collect();
        check_simplicial(&map, self.source, other.target)
    }
}

fn image_of(map: &[u32], simplex: &[u32]) -> Simplex {
    let mut out: Simplex = simplex.iter().map(|&v| map[v as usize]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn to_u32_map(map: &[usize], source: usize, target: usize) -> Result<Vec<u32>> {
    if map.len() != source {
        return Err(Error::invalid(format!("vertex map has {} entries, source has {source} vertices", map.len())));
    }
    map.iter()
        .map(|&v| {
            if v < target {
                Ok(v as u32)
            } else {
                Err(Error::invalid(format!("vertex map sends a vertex to {v}, target has {target} vertices")))
            }
        })
        .collect()
}

fn first_violation(cx: &SimplicialComplex, target: &SimplicialComplex, map: &[u32]) -> Option<Simplex> {
    // Faces of a generator map to faces of its image, so generators suffice.
    cx.generators().iter().find_map(|g| {
        let s: Simplex = set_indices(g).into_iter().map(|v| v as u32).collect();
        (!s.is_empty() && !target.contains(&image_of(map, &s))).then_some(s)
    })
}

/// Certify `vertex_map` as a simplicial map of pairs `source → target`.
pub fn check_simplicial<'a>(
    vertex_map: &[usize],
    source: &'a SimplicialComplexPair,
    target: &'a SimplicialComplexPair,
) -> Result<SimplicialMapChecked<'a>> {
    let map = to_u32_map(vertex_map, source.total().vertex_count(), target.total().vertex_count())?;
    if let Some(simplex) = first_violation(source.total(), target.total(), &map) {
        return Err(Error::NotSimplicial { simplex, in_sub: false });
    }
    if let Some(simplex) = first_violation(source.sub(), target.sub(), &map) {
        return Err(Error::NotSimplicial { simplex, in_sub: true });
    }
    Ok(SimplicialMapChecked { source, target, vertex_map: map })
}

/// Outcome of a contiguity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contiguity {
    pub contiguous: bool,
    /// A source simplex with `f(σ) ∪ g(σ)` not a target simplex.
    pub witness: Option<Simplex>,
    /// Whether the witness was found in the sub complex.
    pub in_sub: bool,
}

/// `f` and `g` are contiguous iff `f(σ) ∪ g(σ)` is a simplex of the target
/// for every source simplex, and of the target sub for every sub simplex.
pub fn contiguity_check(f: &SimplicialMapChecked<'_>, g: &SimplicialMapChecked<'_>) -> Result<Contiguity> {
    if !same_pair(f.source, g.source) || !same_pair(f.target, g.target) {
        return Err(Error::invalid("maps have different sources or targets"));
    }
    let both: Vec<(&SimplicialComplex, &SimplicialComplex, bool)> = vec![
        (f.source.total(), f.target.total(), false),
        (f.source.sub(), f.target.sub(), true),
    ];
    for (cx, target, in_sub) in both {
        for gen in cx.generators() {
            let s: Simplex = set_indices(gen).into_iter().map(|v| v as u32).collect();
            if s.is_empty() {
                continue;
            }
            let mut u = f.image(&s);
            u.extend(g.image(&s));
            u.sort_unstable();
            u.dedup();
            if !target.contains(&u) {
                return Ok(Contiguity { contiguous: false, witness: Some(s), in_sub });
            }
        }
    }
    Ok(Contiguity { contiguous: true, witness: None, in_sub: false })
}

fn same_pair(a: &SimplicialComplexPair, b: &SimplicialComplexPair) -> bool {
    std::ptr::eq(a, b) || a == b
}

/// Sign of the permutation sorting `v` (entries distinct).
fn sort_sign(v: &[u32]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Push a relative chain of the source forward along the vertex map.
/// Degenerate images and images inside the target sub vanish.
pub(crate) fn push_chain(
    f: &SimplicialMapChecked<'_>,
    hs: &PairHomology,
    ht: &PairHomology,
    degree: usize,
    chain: &[(u32, BigInt)],
) -> Result<Vec<(u32, BigInt)>> {
    let src_total = hs.pair().total();
    let tgt_total = ht.pair().total();
    let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
    for (r, c) in chain {
        let s = &src_total.simplices(degree)[hs.cells().cells[degree][*r as usize]];
        let img: Vec<u32> = s.iter().map(|&v| f.vertex_map[v as usize]).collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != img.len() {
            continue;
        }
        let Some(t) = ht.cells().rel_index(tgt_total, &sorted) else {
            if tgt_total.index_of(&sorted).is_none() {
                return Err(Error::internal("image simplex missing from the target complex"));
            }
            continue;
        };
        *acc.entry(t).or_insert_with(BigInt::zero) += c * sort_sign(&img);
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// Matrix of `H_degree(f)` in the stored bases of `hs` (source) and `ht`.
pub fn induced_map(
    f: &SimplicialMapChecked<'_>,
    hs: &PairHomology,
    ht: &PairHomology,
    degree: usize,
) -> Result<HomMatrix> {
    if hs.ring() != ht.ring() {
        return Err(Error::invalid("homologies use different rings"));
    }
    if !same_pair(hs.pair(), f.source) || !same_pair(ht.pair(), f.target) {
        return Err(Error::internal("homology bases do not belong to the map's source and target"));
    }
    let col_orders = hs.orders(degree)?;
    let row_orders = ht.orders(degree)?;
    let mut entries = vec![vec![0i64; col_orders.len()]; row_orders.len()];
    for g in 0..col_orders.len() {
        let chain = hs.generator_chain(degree, g)?;
        let image = push_chain(f, hs, ht, degree, &chain)?;
        let coords = ht.coordinates(degree, &image)?;
        if coords.len() != row_orders.len() {
            return Err(Error::internal("coordinate vector length differs from the target basis"));
        }
        for (i, c) in coords.into_iter().enumerate() {
            entries[i][g] = c.to_i64().ok_or(Error::Overflow)?;
        }
    }
    HomMatrix::new(hs.ring(), entries, row_orders, col_orders)
}

/// Compute both homologies and the induced matrix in one degree.
pub fn induced_map_fresh(f: &SimplicialMapChecked<'_>, degree: usize, ring: Ring) -> Result<HomMatrix> {
    let hs = PairHomology::compute(f.source, ring, &[degree])?;
    let ht = PairHomology::compute(f.target, ring, &[degree])?;
    induced_map(f, &hs, &ht, degree)
}
