//! Dense linear algebra over exact rationals and floats.

use crate::rational::{to_f64, Q};
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar type usable by the elimination and projection routines.
pub trait Field:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn fzero() -> Self;
    fn fone() -> Self;
    /// Exact zero test for rationals, absolute threshold for floats.
    fn negligible(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn from_q(x: &Q) -> Self;
}

impl Field for Q {
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fone() -> Self {
        One::one()
    }
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        to_f64(&self.abs())
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
}

pub const F64_PIVOT_EPS: f64 = 1e-12;

impl Field for f64 {
    fn fzero() -> Self {
        0.0
    }
    fn fone() -> Self {
        1.0
    }
    fn negligible(&self) -> bool {
        self.abs() <= F64_PIVOT_EPS
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_q(x: &Q) -> Self {
        to_f64(x)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best = None;
        let mut best_mag = 0.0;
        for (i, row) in m.iter().enumerate().skip(r) {
            if !row[c].negligible() {
                let mag = row[c].magnitude();
                if best.is_none() || mag > best_mag {
                    best = Some(i);
                    best_mag = mag;
                }
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = F::fone() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].negligible() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let v = m[r][k].clone();
                    m[i][k] = m[i][k].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank of a family of rational vectors.
pub fn rank_q(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = vectors.to_vec();
    rank_in_place(&mut m)
}

fn rank_in_place(m: &mut [Vec<Q>]) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn independent_q(vectors: &[Vec<Q>]) -> bool {
    rank_q(vectors) == vectors.len()
}

/// Indices of a greedy maximal independent subfamily, in input order.
pub fn greedy_basis(vectors: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        chosen.push(v.clone());
        if rank_q(&chosen) == chosen.len() {
            idx.push(i);
        } else {
            chosen.pop();
        }
    }
    idx
}

/// Basis of `{x : A x = 0}` for `A` given by rows over `n` columns.
pub fn nullspace<F: Field>(rows: &[Vec<F>], n: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::fzero(); n];
            v[f] = F::fone();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` for square or overdetermined consistent systems; `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], n: usize) -> Option<Vec<F>> {
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![F::fzero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][n].clone();
    }
    Some(x)
}

/// Coefficients expressing `v` in terms of `vectors` (exact), if possible.
pub fn express_q(vectors: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let d = v.len();
    let a: Vec<Vec<Q>> = (0..d).map(|i| vectors.iter().map(|w| w[i].clone()).collect()).collect();
    solve(&a, v, vectors.len())
}

/// Numerical rank via Householder QR with column pivoting.
/// Columns are the given vectors; `tol` is relative to the largest column norm.
pub fn rank_f64(vectors: &[Vec<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = vectors[0].len();
    let n = vectors.len();
    let mut a: Vec<Vec<f64>> = vectors.to_vec();
    let col_norm = |c: &Vec<f64>, from: usize| c[from..].iter().map(|x| x * x).sum::<f64>();
    let max_norm = a.iter().map(|c| col_norm(c, 0).sqrt()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return 0;
    }
    let thresh = tol * max_norm;
    let mut rank = 0;
    for k in 0..n.min(m) {
        let (p, pn) = (k..n)
            .map(|j| (j, col_norm(&a[j], k)))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pn.sqrt() <= thresh {
            break;
        }
        a.swap(k, p);
        let alpha = -a[k][k].signum() * pn.sqrt();
        let alpha = if alpha == 0.0 { -pn.sqrt() } else { alpha };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|x| x * x).sum();
        if vn > 0.0 {
            for col in a.iter_mut().skip(k) {
                let s: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum::<f64>() * 2.0 / vn;
                for (i, vi) in v.iter().enumerate() {
                    col[k + i] -= s * vi;
                }
            }
        }
        rank += 1;
    }
    rank
}
