//! Exact integer matrices and Smith normal form.
//!
//! All entries are arbitrary-precision (`BigInt`); nothing here ever
//! rounds.  The sizes involved are small (hundreds of rows at most), so
//! the classical reduction with explicit transform matrices is entirely
//! adequate and keeps the code auditable.
//!
//! Conventions:
//! * matrices are dense, row-major;
//! * `smith(a)` returns `(u, d, v)` with `u * a * v = d`, `u` and `v`
//!   unimodular and `d` diagonal with nonnegative entries satisfying
//!   `d[0] | d[1] | …`;
//! * column vectors are `n x 1` matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[BigInt]) -> Self {
        IMat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    /// Apply this matrix to a column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = BigInt::zero();
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() && !v[j].is_zero() {
                    acc += &self[(i, j)] * &v[j];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IMat) -> IMat {
        assert_eq!(self.rows, other.rows);
        let mut out = IMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `u * a * v = d` with unimodular `u`, `v`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
    /// Number of nonzero diagonal entries of `d`.
    pub rank: usize,
}

impl Snf {
    /// The invariant factors (nonzero diagonal entries).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Compute the Smith normal form of `a`.
pub fn smith(a: &IMat) -> Snf {
    let mut d = a.clone();
    let mut u = IMat::identity(a.rows);
    let mut v = IMat::identity(a.cols);
    let n = a.rows.min(a.cols);

    let mut t = 0;
    while t < n {
        // Find a pivot of minimal absolute value in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if !d[(i, j)].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[(i, j)].abs() < d[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row t and column t; repeat because reductions can refill.
        loop {
            let mut again = false;
            for i in (t + 1)..d.rows {
                if !d[(i, t)].is_zero() {
                    let q = -(&d[(i, t)] / &d[(t, t)]);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        // Remainder smaller than the pivot: swap up and restart.
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        again = true;
                    }
                }
            }
            for j in (t + 1)..d.cols {
                if !d[(t, j)].is_zero() {
                    let q = -(&d[(t, j)] / &d[(t, t)]);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }

        // Enforce the divisibility chain: if some later entry is not a
        // multiple of d[t][t], fold its column into column t and redo.
        let mut redo = false;
        'outer: for i in (t + 1)..d.rows {
            for j in (t + 1)..d.cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    let one = BigInt::one();
                    d.add_col(t, j, &one);
                    v.add_col(t, j, &one);
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue; // re-run elimination at the same t
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let rank = (0..n).take_while(|&i| !d[(i, i)].is_zero()).count();
    Snf { u, d, v, rank }
}

/// Solve `a * x = b` over the integers; `b` has one column per right-hand
/// side.  Returns `None` when some system has no integral solution.
pub fn solve(a: &IMat, b: &IMat) -> Option<IMat> {
    assert_eq!(a.rows, b.rows, "dimension mismatch in solve");
    let s = smith(a);
    let ub = s.u.mul(b);
    let mut y = IMat::zero(a.cols, b.cols);
    for c in 0..b.cols {
        for i in 0..a.rows {
            if i < s.rank {
                let (q, r) = ub[(i, c)].div_rem(&s.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                y[(i, c)] = q;
            } else if !ub[(i, c)].is_zero() {
                return None;
            }
        }
    }
    Some(s.v.mul(&y))
}

/// Basis of the integer kernel `{x : a x = 0}`, one column per basis
/// vector.  The basis spans a direct summand of `Z^cols`, so rational and
/// integral kernel membership coincide for vectors in its span.
pub fn kernel_basis(a: &IMat) -> IMat {
    let s = smith(a);
    let mut out = IMat::zero(a.cols, a.cols - s.rank);
    for (k, j) in (s.rank..a.cols).enumerate() {
        for i in 0..a.cols {
            out[(i, k)] = s.v[(i, j)].clone();
        }
    }
    out
}

/// Rank of an integer matrix.
pub fn rank(a: &IMat) -> usize {
    smith(a).rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn smith_small_known() {
        // A classic example: invariant factors 1, 2.
        let a = IMat::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = smith(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        let f = s.invariant_factors();
        assert_eq!(f[0], bi(2));
        assert_eq!(f[1], bi(2));
        assert_eq!(f[2], bi(156));
        // d[0] | d[1] | d[2]
        assert!((&f[1] % &f[0]).is_zero());
        assert!((&f[2] % &f[1]).is_zero());
    }

    #[test]
    fn smith_transforms_are_unimodular() {
        let a = IMat::from_i64_rows(&[vec![6, 10], vec![15, 25], vec![0, 7]]);
        let s = smith(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        // u and v unimodular: their SNFs are identities of full rank.
        let su = smith(&s.u);
        assert_eq!(su.rank, s.u.rows);
        assert!(su.invariant_factors().iter().all(|x| x == &bi(1)));
        let sv = smith(&s.v);
        assert_eq!(sv.rank, s.v.rows);
        assert!(sv.invariant_factors().iter().all(|x| x == &bi(1)));
    }

    #[test]
    fn solve_exact_and_unsolvable() {
        let a = IMat::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let b = IMat::col_vec(&[bi(4), bi(9)]);
        let x = solve(&a, &b).expect("solvable");
        assert_eq!(a.mul(&x), b);

        let b2 = IMat::col_vec(&[bi(1), bi(9)]); // 2x = 1 has no integer solution
        assert!(solve(&a, &b2).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let a = IMat::from_i64_rows(&[vec![1, 2, 3]]);
        let b = IMat::col_vec(&[bi(6)]);
        let x = solve(&a, &b).expect("solvable");
        assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn kernel_is_exact() {
        let a = IMat::from_i64_rows(&[vec![1, 1, 1], vec![0, 2, 2]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols, 1);
        assert!(a.mul(&k).is_zero());
        // The kernel of this matrix is spanned by (0, 1, -1).
        let g = k.col(0);
        assert!(g[0].is_zero());
        assert_eq!(g[1].abs(), bi(1));
        assert_eq!(g[2], -g[1].clone());
    }

    #[test]
    fn rank_of_rectangular() {
        let a = IMat::from_i64_rows(&[vec![1, 2], vec![2, 4], vec![3, 6]]);
        assert_eq!(rank(&a), 1);
        assert_eq!(rank(&IMat::identity(5)), 5);
        assert_eq!(rank(&IMat::zero(3, 4)), 0);
    }
}
