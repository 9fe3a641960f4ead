//! Simplicial homology of pairs over `Z/2`, `Z/p` and `Z`, with induced maps
//! of simplicial maps and a contiguity check.
//!
//! Over a field the boundary matrices are reduced column by column (pivot =
//! largest row); over `Z` the Smith normal form of the boundary matrices is
//! taken with arbitrary-precision entries. Either way a [`PairHomology`]
//! keeps enough echelon data to express any relative cycle in its stored
//! generator basis, which is what induced-map matrices are built from.

mod field;
mod integer;
mod maps;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, SimplicialComplexPair};
use crate::error::{Error, Result};
use field::{FieldBasis, SparseCol};

pub use maps::{check_simplicial, contiguity_check, induced_map, induced_map_fresh, Contiguity, SimplicialMapChecked};
pub use matrix::HomMatrix;

/// Coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Ring {
    #[default]
    Z2,
    /// `Z/p` for a prime `p`.
    Zp(u32),
    Z,
}

impl Ring {
    pub fn zp(p: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not a prime")));
        }
        Ok(if p == 2 { Ring::Z2 } else { Ring::Zp(p) })
    }

    /// Characteristic of the field, `None` for `Z`.
    pub fn modulus(&self) -> Option<u32> {
        match *self {
            Ring::Z2 => Some(2),
            Ring::Zp(p) => Some(p),
            Ring::Z => None,
        }
    }

    pub fn is_field(&self) -> bool {
        self.modulus().is_some()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z2 => f.write_str("z2"),
            Ring::Zp(p) => write!(f, "zp:{p}"),
            Ring::Z => f.write_str("z"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "z2" => Ok(Ring::Z2),
            "z" => Ok(Ring::Z),
            _ => match s.strip_prefix("zp:") {
                Some(p) => Ring::zp(p.parse().map_err(|_| Error::invalid(format!("bad prime in ring {s:?}")))?),
                None => Err(Error::invalid(format!("unknown ring {s:?}; expected z2, zp:P or z"))),
            },
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A chain as `(simplex, coefficient)` pairs.
pub type ChainReport = Vec<(Simplex, i64)>;

/// Homology of one degree: rank, torsion and cycle representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub ring: Ring,
    pub betti: usize,
    /// Prime-power orders of the torsion summands (empty over a field).
    pub torsion: Vec<u64>,
    /// Free generators first, then one generator per invariant factor.
    pub generators: Vec<ChainReport>,
    /// 0 for a free generator, else the order of the torsion generator.
    pub generator_orders: Vec<u64>,
}

impl HomologyGroup {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// The simplices of `total` not in `sub`, per dimension, with index maps.
#[derive(Clone, Debug)]
pub(crate) struct RelativeCells {
    cells: Vec<Vec<usize>>,
    rel_of: Vec<Vec<u32>>,
}

const EXCLUDED: u32 = u32::MAX;

impl RelativeCells {
    fn new(pair: &SimplicialComplexPair) -> Self {
        let total = pair.total();
        let mut cells = Vec::new();
        let mut rel_of = Vec::new();
        for d in 0..=total.max_dim() {
            let mut keep = Vec::new();
            let mut map = vec![EXCLUDED; total.count(d)];
            for (i, s) in total.simplices(d).iter().enumerate() {
                if pair.sub().index_of(s).is_none() {
                    map[i] = keep.len() as u32;
                    keep.push(i);
                }
            }
            cells.push(keep);
            rel_of.push(map);
        }
        RelativeCells { cells, rel_of }
    }

    pub fn count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    fn simplex<'a>(&self, total: &'a SimplicialComplex, d: usize, rel: usize) -> &'a Simplex {
        &total.simplices(d)[self.cells[d][rel]]
    }

    /// Relative index of a sorted simplex, `None` if absent or in the sub.
    pub fn rel_index(&self, total: &SimplicialComplex, simplex: &[u32]) -> Option<u32> {
        let d = simplex.len().checked_sub(1)?;
        let i = total.index_of(simplex)?;
        let r = self.rel_of[d][i];
        (r != EXCLUDED).then_some(r)
    }

    /// Signed boundary of relative cell `rel` in dimension `d`, sorted by row.
    fn boundary(&self, total: &SimplicialComplex, d: usize, rel: usize) -> Vec<(u32, i64)> {
        if d == 0 {
            return Vec::new();
        }
        let s = self.simplex(total, d, rel);
        let mut out = Vec::with_capacity(s.len());
        let mut face = Vec::with_capacity(s.len() - 1);
        for skip in 0..s.len() {
            face.clear();
            face.extend(s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v));
            if let Some(r) = self.rel_index(total, &face) {
                out.push((r, if skip % 2 == 0 { 1 } else { -1 }));
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

#[derive(Clone, Debug)]
enum Basis {
    Field(FieldBasis),
    Integer(IntegerBasis),
}

/// `H_p = Z_p / B_p` over `Z` via two Smith normal forms.
#[derive(Clone, Debug)]
struct IntegerBasis {
    /// Left inverse of the kernel basis (`k × n_p`): cycle ↦ kernel coordinates.
    left_inverse: integer::Mat,
    /// Row transform of the boundary-coordinate matrix (`k × k`).
    p: integer::Mat,
    /// For each output coordinate: source index in `P·L·z` and its order (0 = free).
    slots: Vec<(usize, BigInt)>,
}

#[derive(Clone, Debug)]
struct DegreeHomology {
    group: HomologyGroup,
    basis: Basis,
}

/// Homology of a pair in a set of degrees, with coordinate bases.
#[derive(Clone, Debug)]
pub struct PairHomology {
    ring: Ring,
    pair: SimplicialComplexPair,
    cells: RelativeCells,
    degrees: BTreeMap<usize, DegreeHomology>,
}

/// Degree `p` needs the `(p+1)`-simplices unless nothing was cut off.
pub fn check_degree(cx: &SimplicialComplex, degree: usize) -> Result<()> {
    if degree + 1 > cx.max_dim() && cx.is_truncated() {
        return Err(Error::NotComputed { degree, max_dim: cx.max_dim() });
    }
    Ok(())
}

impl PairHomology {
    pub fn compute(pair: &SimplicialComplexPair, ring: Ring, degrees: &[usize]) -> Result<Self> {
        for &d in degrees {
            check_degree(pair.total(), d)?;
        }
        let cells = RelativeCells::new(pair);
        let mut out = PairHomology { ring, pair: pair.clone(), cells, degrees: BTreeMap::new() };
        let mut wanted: Vec<usize> = degrees.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        for d in wanted {
            let dh = match ring.modulus() {
                Some(p) => out.field_degree(d, p)?,
                None => out.integer_degree(d)?,
            };
            out.degrees.insert(d, dh);
        }
        Ok(out)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn pair(&self) -> &SimplicialComplexPair {
        &self.pair
    }

    pub fn group(&self, degree: usize) -> Result<&HomologyGroup> {
        self.degrees
            .get(&degree)
            .map(|d| &d.group)
            .ok_or_else(|| Error::invalid(format!("degree {degree} was not requested")))
    }

    pub fn groups(&self) -> impl Iterator<Item = &HomologyGroup> {
        self.degrees.values().map(|d| &d.group)
    }

    pub(crate) fn cells(&self) -> &RelativeCells {
        &self.cells
    }

    fn boundary_col_mod(&self, d: usize, rel: usize, p: u32) -> SparseCol {
        self.cells
            .boundary(self.pair.total(), d, rel)
            .into_iter()
            .map(|(r, c)| (r, field::from_signed(c, p)))
            .collect()
    }

    fn field_degree(&self, d: usize, p: u32) -> Result<DegreeHomology> {
        let n_d = self.cells.count(d);
        let n_below = if d == 0 { 0 } else { self.cells.count(d - 1) };
        let kernel = field::reduce(
            n_below,
            (0..n_d).map(|j| self.boundary_col_mod(d, j, p)),
            p,
            true,
            None,
        );
        let kernel_dim = kernel.cycles.len();
        let image = field::reduce(
            n_d,
            (0..self.cells.count(d + 1)).map(|j| self.boundary_col_mod(d + 1, j, p)),
            p,
            false,
            Some(kernel_dim),
        );
        let basis = FieldBasis::new(p, kernel.cycles, image.by_pivot);
        let generators = basis
            .generators
            .iter()
            .map(|g| self.chain_report(d, g.iter().map(|&(r, c)| (r, c as i64))))
            .collect::<Vec<_>>();
        let betti = generators.len();
        let group = HomologyGroup {
            degree: d,
            ring: self.ring,
            betti,
            torsion: Vec::new(),
            generator_orders: vec![0; betti],
            generators,
        };
        Ok(DegreeHomology { group, basis: Basis::Field(basis) })
    }

    fn dense_boundary(&self, d: usize) -> integer::Mat {
        let rows = if d == 0 { 0 } else { self.cells.count(d - 1) };
        let cols = self.cells.count(d);
        let mut m = integer::zeros(rows, cols);
        for j in 0..cols {
            for (r, c) in self.cells.boundary(self.pair.total(), d, j) {
                m[r as usize][j] = BigInt::from(c);
            }
        }
        m
    }

    fn integer_degree(&self, d: usize) -> Result<DegreeHomology> {
        let n_d = self.cells.count(d);
        let n_below = if d == 0 { 0 } else { self.cells.count(d - 1) };
        let n_above = self.cells.count(d + 1);

        // Kernel basis K (columns) and its left inverse L (rows).
        let (kernel, left_inverse) = if n_below == 0 || n_d == 0 {
            (integer::identity(n_d), integer::identity(n_d))
        } else {
            let s = integer::smith(self.dense_boundary(d), n_below, n_d, false, true);
            let r = s.rank();
            let q = s.q.expect("column transform requested");
            let q_inv = s.q_inv.expect("column transform requested");
            let kernel: integer::Mat = (r..n_d).map(|c| q.iter().map(|row| row[c].clone()).collect()).collect();
            let left: integer::Mat = q_inv[r..].to_vec();
            (kernel, left)
        };
        let k = kernel.len();

        // Boundaries in kernel coordinates: M = L · ∂_{d+1}.
        let (diag, p, p_inv) = if n_above == 0 || k == 0 {
            (Vec::new(), integer::identity(k), integer::identity(k))
        } else {
            let m = integer::matmul(&left_inverse, &self.dense_boundary(d + 1), n_d, n_above);
            let s = integer::smith(m, k, n_above, true, false);
            (s.diag, s.p.expect("row transform requested"), s.p_inv.expect("row transform requested"))
        };

        let mut free = Vec::new();
        let mut tors = Vec::new();
        for i in 0..k {
            match diag.get(i) {
                Some(di) if di.is_one() => {}
                Some(di) => tors.push((i, di.clone())),
                None => free.push((i, BigInt::zero())),
            }
        }
        let slots: Vec<(usize, BigInt)> = free.into_iter().chain(tors).collect();

        let mut generators = Vec::with_capacity(slots.len());
        let mut generator_orders = Vec::with_capacity(slots.len());
        for (i, order) in &slots {
            // Column i of K · P⁻¹.
            let mut chain = vec![BigInt::zero(); n_d];
            for (kc, kvec) in kernel.iter().enumerate() {
                let c = &p_inv[kc][*i];
                if c.is_zero() {
                    continue;
                }
                for (x, kv) in chain.iter_mut().zip(kvec) {
                    if !kv.is_zero() {
                        *x += c * kv;
                    }
                }
            }
            let entries = chain
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(r, c)| c.to_i64().map(|c| (r as u32, c)).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            generators.push(self.chain_report(d, entries.into_iter()));
            generator_orders.push(order.to_u64().ok_or(Error::Overflow)?);
        }
        let mut torsion = Vec::new();
        for (_, order) in slots.iter().filter(|(_, o)| !o.is_zero()) {
            for pp in integer::prime_powers(order) {
                torsion.push(pp.to_u64().ok_or(Error::Overflow)?);
            }
        }
        torsion.sort_unstable();
        let betti = generator_orders.iter().filter(|&&o| o == 0).count();
        let group = HomologyGroup { degree: d, ring: Ring::Z, betti, torsion, generators, generator_orders };
        Ok(DegreeHomology { group, basis: Basis::Integer(IntegerBasis { left_inverse, p, slots }) })
    }

    fn chain_report(&self, d: usize, entries: impl Iterator<Item = (u32, i64)>) -> ChainReport {
        let total = self.pair.total();
        let mut out: ChainReport = entries.map(|(r, c)| (self.cells.simplex(total, d, r as usize).clone(), c)).collect();
        out.sort();
        out
    }

    /// Coordinates of a relative `degree`-cycle (given over relative cell
    /// indices, integer coefficients) in the stored generator basis.
    pub(crate) fn coordinates(&self, degree: usize, chain: &[(u32, BigInt)]) -> Result<Vec<BigInt>> {
        let dh = self
            .degrees
            .get(&degree)
            .ok_or_else(|| Error::internal(format!("degree {degree} has no basis")))?;
        self.check_cycle(degree, chain)?;
        match &dh.basis {
            Basis::Field(b) => {
                let p = b.p;
                let big_p = BigInt::from(p);
                let mut col: SparseCol = chain
                    .iter()
                    .filter_map(|(r, c)| {
                        let v = ((c % &big_p) + &big_p) % &big_p;
                        let v = v.to_u32().expect("reduced below p");
                        (v != 0).then_some((*r, v))
                    })
                    .collect();
                col.sort_unstable_by_key(|e| e.0);
                Ok(b.coordinates(col)?.into_iter().map(BigInt::from).collect())
            }
            Basis::Integer(b) => {
                let n = self.cells.count(degree);
                let mut z = vec![BigInt::zero(); n];
                for (r, c) in chain {
                    z[*r as usize] += c;
                }
                let kc = integer::matvec(&b.left_inverse, &z);
                let pc = integer::matvec(&b.p, &kc);
                Ok(b
                    .slots
                    .iter()
                    .map(|(i, order)| {
                        if order.is_zero() {
                            pc[*i].clone()
                        } else {
                            ((&pc[*i] % order) + order) % order
                        }
                    })
                    .collect())
            }
        }
    }

    fn check_cycle(&self, degree: usize, chain: &[(u32, BigInt)]) -> Result<()> {
        if degree == 0 {
            return Ok(());
        }
        let total = self.pair.total();
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (r, c) in chain {
            for (row, s) in self.cells.boundary(total, degree, *r as usize) {
                *acc.entry(row).or_insert_with(BigInt::zero) += c * s;
            }
        }
        let nonzero = match self.ring.modulus() {
            Some(p) => acc.values().any(|v| !(v % BigInt::from(p)).is_zero()),
            None => acc.values().any(|v| !v.is_zero()),
        };
        if nonzero {
            return Err(Error::internal(format!("chain pushed into degree {degree} is not a relative cycle")));
        }
        Ok(())
    }

    /// Generator `g` of `degree` as a relative chain.
    pub(crate) fn generator_chain(&self, degree: usize, g: usize) -> Result<Vec<(u32, BigInt)>> {
        let group = self.group(degree)?;
        let total = self.pair.total();
        group.generators[g]
            .iter()
            .map(|(s, c)| {
                self.cells
                    .rel_index(total, s)
                    .map(|r| (r, BigInt::from(*c)))
                    .ok_or_else(|| Error::internal("generator simplex missing from relative cells"))
            })
            .collect()
    }

    /// Orders of the generators of `degree` (0 = free).
    pub(crate) fn orders(&self, degree: usize) -> Result<Vec<u64>> {
        Ok(self.group(degree)?.generator_orders.clone())
    }
}

/// Absolute homology of `cx` in one degree.
pub fn homology(cx: &SimplicialComplex, degree: usize, ring: Ring) -> Result<HomologyGroup> {
    relative_homology(&SimplicialComplexPair::absolute(cx.clone()), degree, ring)
}

/// Homology of `C(total) / C(sub)` in one degree.
pub fn relative_homology(pair: &SimplicialComplexPair, degree: usize, ring: Ring) -> Result<HomologyGroup> {
    let h = PairHomology::compute(pair, ring, &[degree])?;
    Ok(h.group(degree)?.clone())
}

/// Boundary matrix of `pair` in `degree` as signed integer entries, rows
/// indexed by relative `(degree-1)`-cells.
pub fn boundary_matrix(pair: &SimplicialComplexPair, degree: usize) -> Vec<Vec<i64>> {
    let cells = RelativeCells::new(pair);
    let rows = if degree == 0 { 0 } else { cells.count(degree - 1) };
    let cols = cells.count(degree);
    let mut m = vec![vec![0i64; cols]; rows];
    for j in 0..cols {
        for (r, c) in cells.boundary(pair.total(), degree, j) {
            m[r as usize][j] = c;
        }
    }
    m
}

/// Betti numbers of the absolute complex in degrees `0..=top`.
pub fn betti_numbers(cx: &SimplicialComplex, ring: Ring, top: usize) -> Result<Vec<usize>> {
    let degrees: Vec<usize> = (0..=top).collect();
    let h = PairHomology::compute(&SimplicialComplexPair::absolute(cx.clone()), ring, &degrees)?;
    Ok(h.groups().map(|g| g.betti).collect())
}
