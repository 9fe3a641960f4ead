//! Sparse column reduction over `Z/p`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Sparse vector sorted by row, coefficients in `1..p`.
pub(crate) type SparseCol = Vec<(u32, u32)>;

const NONE: u32 = u32::MAX;

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

pub(crate) fn from_signed(c: i64, p: u32) -> u32 {
    c.rem_euclid(p as i64) as u32
}

/// `a - c·b`.
pub(crate) fn sub_scaled(a: &[(u32, u32)], c: u32, b: &[(u32, u32)], p: u32) -> SparseCol {
    let neg = (p - c % p) % p;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = mul_mod(b[j].1, neg, p);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = ((a[i].1 as u64 + mul_mod(b[j].1, neg, p) as u64) % p as u64) as u32;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn scale(a: &mut [(u32, u32)], c: u32, p: u32) {
    for e in a.iter_mut() {
        e.1 = mul_mod(e.1, c, p);
    }
}

/// Result of reducing the columns of one boundary matrix.
pub(crate) struct Reduction {
    /// Reduced non-zero columns, keyed by pivot row; pivot coefficient is 1.
    pub by_pivot: HashMap<u32, SparseCol>,
    /// For columns that reduced to zero: the column combination `V_j`, whose
    /// largest entry is `j` with coefficient 1.
    pub cycles: Vec<(u32, SparseCol)>,
}

/// Left-to-right reduction with pivot = largest row index.
///
/// With `track`, the column operations are recorded so that zero columns
/// yield kernel vectors. With `max_rank`, reduction stops once that many
/// pivots exist: the remaining columns must then reduce to zero.
pub(crate) fn reduce(
    rows: usize,
    columns: impl Iterator<Item = SparseCol>,
    p: u32,
    track: bool,
    max_rank: Option<usize>,
) -> Reduction {
    let mut owner = vec![NONE; rows];
    let mut reduced: Vec<SparseCol> = Vec::new();
    let mut ops: Vec<SparseCol> = Vec::new();
    let mut cycles = Vec::new();
    for (j, mut col) in columns.enumerate() {
        if !track && max_rank.is_some_and(|m| reduced.len() >= m) {
            break;
        }
        let mut v: SparseCol = if track { vec![(j as u32, 1)] } else { Vec::new() };
        while let Some(&(r, c)) = col.last() {
            let k = owner[r as usize];
            if k == NONE {
                break;
            }
            col = sub_scaled(&col, c, &reduced[k as usize], p);
            if track {
                v = sub_scaled(&v, c, &ops[k as usize], p);
            }
        }
        match col.last() {
            None => {
                if track {
                    cycles.push((j as u32, v));
                }
            }
            Some(&(r, c)) => {
                let inv = inv_mod(c, p);
                scale(&mut col, inv, p);
                if track {
                    scale(&mut v, inv, p);
                    ops.push(v);
                }
                owner[r as usize] = reduced.len() as u32;
                reduced.push(col);
            }
        }
    }

    let by_pivot = reduced
        .into_iter()
        .map(|c| (c.last().expect("non-zero column").0, c))
        .collect();
    Reduction { by_pivot, cycles }
}

/// Echelon data for `Z_p / B_p` over a field.
#[derive(Clone, Debug)]
pub(crate) struct FieldBasis {
    pub p: u32,
    pub boundary: HashMap<u32, SparseCol>,
    pub generators: Vec<SparseCol>,
    pub gen_by_pivot: HashMap<u32, usize>,
}

impl FieldBasis {
    /// Generators are the kernel vectors `V_j` whose leading simplex `j` is
    /// not the pivot of any reduced boundary; together with the reduced
    /// boundaries they have pairwise distinct pivots.
    pub fn new(p: u32, kernel: Vec<(u32, SparseCol)>, boundary: HashMap<u32, SparseCol>) -> Self {
        let mut generators = Vec::new();
        let mut gen_by_pivot = HashMap::new();
        for (j, v) in kernel {
            if !boundary.contains_key(&j) {
                gen_by_pivot.insert(j, generators.len());
                generators.push(v);
            }
        }
        FieldBasis { p, boundary, generators, gen_by_pivot }
    }

    /// Coordinates of a cycle in the generator basis, modulo boundaries.
    pub fn coordinates(&self, cycle: SparseCol) -> Result<Vec<u32>> {
        let p = self.p;
        let mut coords = vec![0u32; self.generators.len()];
        let mut z = cycle;
        while let Some(&(r, c)) = z.last() {
            if let Some(b) = self.boundary.get(&r) {
                z = sub_scaled(&z, c, b, p);
            } else if let Some(&g) = self.gen_by_pivot.get(&r) {
                coords[g] = (coords[g] + c) % p;
                z = sub_scaled(&z, c, &self.generators[g], p);
            } else {
                return Err(Error::internal(format!("chain with leading cell {r} is not a cycle")));
            }
        }
        Ok(coords)
    }
}

/// Rank of a dense matrix over `Z/p`.
pub(crate) fn rank_mod(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_multiple_of(p) {
                let f = m[r][col];
                for c in 0..ncols {
                    let sub = mul_mod(f, m[rank][c], p);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_small_primes() {
        for p in [2u32, 3, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    #[test]
    fn sub_scaled_cancels() {
        let a = vec![(0, 1), (2, 2)];
        assert_eq!(sub_scaled(&a, 1, &a, 3), vec![]);
        assert_eq!(sub_scaled(&a, 2, &[(1, 1)], 3), vec![(0, 1), (1, 1), (2, 2)]);
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank_mod(&[vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod(&[vec![1, 1], vec![1, 2]], 3), 2);
        assert_eq!(rank_mod(&[vec![0, 0]], 5), 0);
    }
}
