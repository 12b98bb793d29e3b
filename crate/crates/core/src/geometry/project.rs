use super::{Polyhedron, RowKind};
use crate::error::{Error, Result};
use crate::linalg::{rref, solve, Field};
use crate::rational::{to_f64, Q};

fn dotf<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::fzero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn rank_of<F: Field>(rows: &[&Vec<F>]) -> usize {
    let mut m: Vec<Vec<F>> = rows.iter().map(|r| (*r).clone()).collect();
    rref(&mut m).len()
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Euclidean projection onto `{<c,z> <= a (Le), <c,z> = a (Eq)}` by active-set enumeration.
/// Returns the projection and the squared distance; `None` if the set is empty.
pub fn project_rows<F: Field>(rows: &[(Vec<F>, F, RowKind)], y: &[F], tol: F) -> Option<(Vec<F>, F)> {
    let d = y.len();
    let mut eq_sel: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.2 == RowKind::Eq {
            let mut cand: Vec<&Vec<F>> = eq_sel.iter().map(|&j| &rows[j].0).collect();
            cand.push(&r.0);
            if rank_of(&cand) == cand.len() {
                eq_sel.push(i);
            }
        }
    }
    let ineq: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].2 == RowKind::Le).collect();
    let feasible = |z: &[F]| {
        rows.iter().all(|(c, a, kind)| {
            let e = dotf(c, z) - a.clone();
            match kind {
                RowKind::Le => e <= tol,
                RowKind::Eq => e <= tol && -e <= tol,
            }
        })
    };
    let kmax = d.saturating_sub(eq_sel.len()).min(ineq.len());
    for size in 0..=kmax {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let mut act: Vec<usize> = eq_sel.clone();
            act.extend(comb.iter().map(|&k| ineq[k]));
            let a_rows: Vec<&Vec<F>> = act.iter().map(|&i| &rows[i].0).collect();
            if rank_of(&a_rows) == act.len() {
                let gram: Vec<Vec<F>> =
                    a_rows.iter().map(|ri| a_rows.iter().map(|rj| dotf(ri, rj)).collect()).collect();
                let rhs: Vec<F> = act.iter().map(|&i| dotf(&rows[i].0, y) - rows[i].1.clone()).collect();
                if let Some(w) = solve(&gram, &rhs, act.len()) {
                    let multipliers_ok = w[eq_sel.len()..].iter().all(|wi| -wi.clone() <= tol);
                    if multipliers_ok {
                        let mut z = y.to_vec();
                        for (wi, r) in w.iter().zip(&a_rows) {
                            for (zk, rk) in z.iter_mut().zip(r.iter()) {
                                *zk = zk.clone() - wi.clone() * rk.clone();
                            }
                        }
                        if feasible(&z) {
                            let diff: Vec<F> = y.iter().zip(&z).map(|(a, b)| a.clone() - b.clone()).collect();
                            let sq = dotf(&diff, &diff);
                            return Some((z, sq));
                        }
                    }
                }
            }
            if size == 0 || !next_combination(&mut comb, ineq.len()) {
                break;
            }
        }
    }
    None
}

/// Exact projection onto a polyhedron; the distance is rounded to `f64`.
pub fn project(c: &Polyhedron, y: &[Q]) -> Result<(Vec<Q>, f64)> {
    if y.len() != c.dim {
        return Err(Error::Dimension { expected: c.dim, got: y.len() });
    }
    let rows: Vec<(Vec<Q>, Q, RowKind)> = c.rows.iter().map(|r| (r.normal.clone(), r.rhs.clone(), r.kind)).collect();
    let (z, sq) = project_rows(&rows, y, Q::from_integer(0.into())).ok_or(Error::EmptySet)?;
    Ok((z, to_f64(&sq).sqrt()))
}

/// Floating-point projection; boxes are clamped directly.
pub fn project_f64(c: &Polyhedron, y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if y.len() != c.dim {
        return Err(Error::Dimension { expected: c.dim, got: y.len() });
    }
    if c.is_axis_aligned() {
        let mut lo = vec![f64::NEG_INFINITY; c.dim];
        let mut hi = vec![f64::INFINITY; c.dim];
        for r in &c.rows {
            let k = r.normal.iter().position(|x| !num_traits::Zero::is_zero(x)).unwrap();
            let bound = to_f64(&(&r.rhs / &r.normal[k]));
            let positive = num_traits::Signed::is_positive(&r.normal[k]);
            match (r.kind, positive) {
                (RowKind::Eq, _) => {
                    lo[k] = lo[k].max(bound);
                    hi[k] = hi[k].min(bound);
                }
                (RowKind::Le, true) => hi[k] = hi[k].min(bound),
                (RowKind::Le, false) => lo[k] = lo[k].max(bound),
            }
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::EmptySet);
        }
        let z: Vec<f64> = y.iter().enumerate().map(|(k, v)| v.clamp(lo[k], hi[k])).collect();
        let dist = y.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        return Ok((z, dist));
    }
    let rows = c.rows_f64();
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (z, sq) = project_rows(&rows, y, 1e-10 * scale).ok_or(Error::EmptySet)?;
    Ok((z, sq.max(0.0).sqrt()))
}
