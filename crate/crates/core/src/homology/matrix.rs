use num_bigint::BigInt;
use serde::Serialize;

use super::{field, integer, Ring};
use crate::error::{Error, Result};

/// Largest torsion subgroup enumerated by [`HomMatrix::is_invertible`].
const TORSION_ENUM_LIMIT: u64 = 1 << 20;

/// Matrix of a homomorphism between homology groups, columns indexed by the
/// source generators and rows by the target generators.
///
/// Over `Z` a generator of order `n > 0` spans a `Z/n` summand, and the
/// entries of its row are reduced mod `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomMatrix {
    pub ring: Ring,
    pub entries: Vec<Vec<i64>>,
    pub row_orders: Vec<u64>,
    pub col_orders: Vec<u64>,
}

impl HomMatrix {
    /// Build from raw entries, normalising every entry into its canonical range.
    pub fn new(ring: Ring, entries: Vec<Vec<i64>>, row_orders: Vec<u64>, col_orders: Vec<u64>) -> Result<Self> {
        if entries.len() != row_orders.len() || entries.iter().any(|r| r.len() != col_orders.len()) {
            return Err(Error::invalid("matrix shape does not match generator orders"));
        }
        let mut m = HomMatrix { ring, entries, row_orders, col_orders };
        m.normalise();
        Ok(m)
    }

    pub fn identity(ring: Ring, orders: &[u64]) -> Self {
        let n = orders.len();
        let entries = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        HomMatrix { ring, entries, row_orders: orders.to_vec(), col_orders: orders.to_vec() }
    }

    pub fn zero(ring: Ring, row_orders: &[u64], col_orders: &[u64]) -> Self {
        HomMatrix {
            ring,
            entries: vec![vec![0; col_orders.len()]; row_orders.len()],
            row_orders: row_orders.to_vec(),
            col_orders: col_orders.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.row_orders.len()
    }

    pub fn cols(&self) -> usize {
        self.col_orders.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows() == self.cols()
            && self.entries.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
    }

    fn normalise(&mut self) {
        let p = self.ring.modulus();
        for (row, &order) in self.entries.iter_mut().zip(&self.row_orders) {
            let m = match p {
                Some(p) => Some(p as i64),
                None if order > 0 => Some(order as i64),
                None => None,
            };
            if let Some(m) = m {
                for x in row.iter_mut() {
                    *x = x.rem_euclid(m);
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &HomMatrix) -> Result<HomMatrix> {
        if self.ring != other.ring || self.cols() != other.rows() || self.col_orders != other.row_orders {
            return Err(Error::invalid("matrices are not composable"));
        }
        let mut entries = vec![vec![0i64; other.cols()]; self.rows()];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for k in 0..self.cols() {
                    acc += self.entries[i][k] as i128 * other.entries[k][j] as i128;
                }
                *out = match self.ring.modulus() {
                    Some(p) => acc.rem_euclid(p as i128) as i64,
                    None if self.row_orders[i] > 0 => acc.rem_euclid(self.row_orders[i] as i128) as i64,
                    None => i64::try_from(acc).map_err(|_| Error::Overflow)?,
                };
            }
        }
        HomMatrix::new(self.ring, entries, self.row_orders.clone(), other.col_orders.clone())
    }

    fn free_block(&self) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..self.rows()).filter(|&i| self.row_orders[i] == 0).collect();
        let cols = (0..self.cols()).filter(|&j| self.col_orders[j] == 0).collect();
        (rows, cols)
    }

    /// Rank over the field, or over `Q` of the free block for `Z`.
    pub fn rank(&self) -> usize {
        match self.ring.modulus() {
            Some(p) => {
                let rows: Vec<Vec<u32>> =
                    self.entries.iter().map(|r| r.iter().map(|&x| field::from_signed(x, p)).collect()).collect();
                field::rank_mod(&rows, p)
            }
            None => {
                let (rows, cols) = self.free_block();
                let m: integer::Mat =
                    rows.iter().map(|&i| cols.iter().map(|&j| BigInt::from(self.entries[i][j])).collect()).collect();
                integer::rank_rational(&m)
            }
        }
    }

    /// Whether the homomorphism is an isomorphism.
    ///
    /// Over `Z` this requires equal generator orders, a unimodular free block
    /// and a bijective torsion block (torsion never maps to free rows). The
    /// torsion block is checked by enumeration, refused beyond 2^20 elements.
    pub fn is_invertible(&self) -> Result<bool> {
        if self.rows() != self.cols() {
            return Ok(false);
        }
        if self.ring.is_field() {
            return Ok(self.rank() == self.rows());
        }
        let mut ro = self.row_orders.clone();
        let mut co = self.col_orders.clone();
        ro.sort_unstable();
        co.sort_unstable();
        if ro != co {
            return Ok(false);
        }
        let (rows, cols) = self.free_block();
        let free: integer::Mat =
            rows.iter().map(|&i| cols.iter().map(|&j| BigInt::from(self.entries[i][j])).collect()).collect();
        let det = integer::determinant(&free);
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Ok(false);
        }
        let trows: Vec<usize> = (0..self.rows()).filter(|&i| self.row_orders[i] > 0).collect();
        let tcols: Vec<usize> = (0..self.cols()).filter(|&j| self.col_orders[j] > 0).collect();
        let mut size: u64 = 1;
        for &j in &tcols {
            size = size.saturating_mul(self.col_orders[j]);
            if size > TORSION_ENUM_LIMIT {
                return Err(Error::invalid("torsion subgroup too large to check invertibility"));
            }
        }
        // An endomorphism of a finite group is bijective iff its kernel is trivial.
        let mut x = vec![0u64; tcols.len()];
        for _ in 1..size {
            for (k, &j) in tcols.iter().enumerate() {
                x[k] += 1;
                if x[k] < self.col_orders[j] {
                    break;
                }
                x[k] = 0;
            }
            let in_kernel = trows.iter().all(|&i| {
                let o = self.row_orders[i] as i128;
                let s: i128 = tcols.iter().zip(&x).map(|(&j, &xv)| self.entries[i][j] as i128 * xv as i128).sum();
                s.rem_euclid(o) == 0
            });
            if in_kernel {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
