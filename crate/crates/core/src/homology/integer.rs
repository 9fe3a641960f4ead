//! Smith normal form over `Z` with arbitrary-precision entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type Mat = Vec<Vec<BigInt>>;

pub(crate) fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub(crate) fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub(crate) fn matmul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); cols];
            for (k, x) in row.iter().enumerate().take(inner) {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

pub(crate) fn matvec(a: &Mat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// `P · A · Q = D` with `D` diagonal, `d₀ | d₁ | …`, all positive.
pub(crate) struct Smith {
    pub diag: Vec<BigInt>,
    pub p: Option<Mat>,
    pub p_inv: Option<Mat>,
    pub q: Option<Mat>,
    pub q_inv: Option<Mat>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Tracker {
    rows: usize,
    cols: usize,
    p: Option<Mat>,
    p_inv: Option<Mat>,
    q: Option<Mat>,
    q_inv: Option<Mat>,
}

impl Tracker {
    /// row_i += c · row_j on A.
    fn row_add(&mut self, a: &mut Mat, i: usize, j: usize, c: &BigInt) {
        let (src, dst) = split_pair(a, j, i);
        axpy(dst, c, src);
        if let Some(p) = &mut self.p {
            let (src, dst) = split_pair(p, j, i);
            axpy(dst, c, src);
        }
        if let Some(pi) = &mut self.p_inv {
            // P⁻¹ ← P⁻¹ E⁻¹: column j -= c · column i.
            for row in pi.iter_mut().take(self.rows) {
                if !row[i].is_zero() {
                    let d = c * &row[i];
                    row[j] -= d;
                }
            }
        }
    }

    fn row_swap(&mut self, a: &mut Mat, i: usize, j: usize) {
        a.swap(i, j);
        if let Some(p) = &mut self.p {
            p.swap(i, j);
        }
        if let Some(pi) = &mut self.p_inv {
            for row in pi.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn row_negate(&mut self, a: &mut Mat, i: usize) {
        negate(&mut a[i]);
        if let Some(p) = &mut self.p {
            negate(&mut p[i]);
        }
        if let Some(pi) = &mut self.p_inv {
            for row in pi.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    /// col_i += c · col_j on A.
    fn col_add(&mut self, a: &mut Mat, i: usize, j: usize, c: &BigInt) {
        for row in a.iter_mut() {
            if !row[j].is_zero() {
                let d = c * &row[j];
                row[i] += d;
            }
        }
        if let Some(q) = &mut self.q {
            for row in q.iter_mut().take(self.cols) {
                if !row[j].is_zero() {
                    let d = c * &row[j];
                    row[i] += d;
                }
            }
        }
        if let Some(qi) = &mut self.q_inv {
            // Q⁻¹ ← E⁻¹ Q⁻¹: row j -= c · row i.
            let (src, dst) = split_pair(qi, i, j);
            axpy(dst, &-c, src);
        }
    }

    fn col_swap(&mut self, a: &mut Mat, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(q) = &mut self.q {
            for row in q.iter_mut() {
                row.swap(i, j);
            }
        }
        if let Some(qi) = &mut self.q_inv {
            qi.swap(i, j);
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn axpy(dst: &mut [BigInt], c: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

/// Borrow row `src` immutably and row `dst` mutably.
fn split_pair(m: &mut Mat, src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

/// Smith normal form of a `rows × cols` matrix, with the requested transforms.
///
/// The pivot at each step is a non-zero entry of minimal absolute value in
/// the remaining block.
pub(crate) fn smith(mut a: Mat, rows: usize, cols: usize, want_p: bool, want_q: bool) -> Smith {
    let mut t = Tracker {
        rows,
        cols,
        p: want_p.then(|| identity(rows)),
        p_inv: want_p.then(|| identity(rows)),
        q: want_q.then(|| identity(cols)),
        q_inv: want_q.then(|| identity(cols)),
    };
    let mut diag = Vec::new();
    for s in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_entry(&a, s, rows, cols) else {
                return finish(diag, t);
            };
            if pi != s {
                t.row_swap(&mut a, s, pi);
            }
            if pj != s {
                t.col_swap(&mut a, s, pj);
            }
            let mut clean = true;
            for i in (s + 1)..rows {
                if !a[i][s].is_zero() {
                    let q = -(&a[i][s] / &a[s][s]);
                    t.row_add(&mut a, i, s, &q);
                    clean &= a[i][s].is_zero();
                }
            }
            for j in (s + 1)..cols {
                if !a[s][j].is_zero() {
                    let q = -(&a[s][j] / &a[s][s]);
                    t.col_add(&mut a, j, s, &q);
                    clean &= a[s][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let piv = a[s][s].clone();
            let bad_row = ((s + 1)..rows).find(|&i| ((s + 1)..cols).any(|j| !a[i][j].is_multiple_of(&piv)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    t.row_add(&mut a, s, i, &one);
                }
                None => break,
            }
        }
        if a[s][s].is_negative() {
            t.row_negate(&mut a, s);
        }
        diag.push(a[s][s].clone());
    }
    finish(diag, t)
}

fn finish(diag: Vec<BigInt>, t: Tracker) -> Smith {
    Smith { diag, p: t.p, p_inv: t.p_inv, q: t.q, q_inv: t.q_inv }
}

fn min_entry(a: &Mat, s: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().take(rows).skip(s) {
        for (j, x) in row.iter().enumerate().take(cols).skip(s) {
            if x.is_zero() {
                continue;
            }
            if x.magnitude().is_one() {
                return Some((i, j));
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Rank over `Q` by fraction-free elimination.
pub(crate) fn rank_rational(m: &Mat) -> usize {
    let mut m = m.clone();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let (a, b) = (m[rank][col].clone(), m[r][col].clone());
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            for c in 0..ncols {
                let v = &m[r][c] * &fa - &m[rank][c] * &fb;
                m[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by Bareiss elimination.
pub(crate) fn determinant(m: &Mat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Prime-power decomposition of a positive integer.
pub(crate) fn prime_powers(d: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut n = d.abs();
    let mut f = BigInt::from(2);
    while &f * &f <= n {
        if n.is_multiple_of(&f) {
            let mut pp = BigInt::one();
            while n.is_multiple_of(&f) {
                n /= &f;
                pp *= &f;
            }
            out.push(pp);
        }
        f += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check(a: &Mat, r: usize, c: usize) -> Vec<i64> {
        let s = smith(a.clone(), r, c, true, true);
        let (p, q) = (s.p.as_ref().unwrap(), s.q.as_ref().unwrap());
        let d = matmul(&matmul(p, a, r, c), q, c, c);
        for i in 0..r {
            for j in 0..c {
                let expect = if i == j && i < s.rank() { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(d[i][j], expect, "entry ({i},{j})");
            }
        }
        assert_eq!(matmul(p, s.p_inv.as_ref().unwrap(), r, r), identity(r));
        assert_eq!(matmul(q, s.q_inv.as_ref().unwrap(), c, c), identity(c));
        for w in s.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s.diag.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn classic_examples() {
        assert_eq!(check(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3, 3), vec![2, 6, 12]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 3]]), 2, 2), vec![1, 6]);
        assert_eq!(check(&m(&[&[0, 0], &[0, 0]]), 2, 2), Vec::<i64>::new());
        assert_eq!(check(&m(&[&[4], &[6]]), 2, 1), vec![2]);
    }

    #[test]
    fn rank_and_determinant() {
        assert_eq!(rank_rational(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_rational(&m(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]])), BigInt::from(5));
    }

    #[test]
    fn prime_power_split() {
        let pp: Vec<i64> = prime_powers(&BigInt::from(360)).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(pp, vec![8, 9, 5]);
    }
}
