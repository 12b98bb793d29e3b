//! Sign-constrained linear dependence certificates.

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank_q};
use crate::lp::{Cmp, Lp, VarKind};
use crate::rational::{q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Sign requirement on one coefficient of a dependence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coef {
    Free,
    /// Strictly positive.
    Positive,
    /// Strictly negative.
    Negative,
    /// Nonzero of either sign.
    NonZero,
}

/// Finds `c` with `Σ c_k v_k = 0` obeying the sign requirements.
/// Strict requirements are met with `|c_k| >= 1` by homogeneity; with no strict entry a
/// nonzero solution is required instead.
pub fn signed_dependence(vectors: &[Vec<Q>], coefs: &[Coef]) -> Option<Vec<Q>> {
    assert_eq!(vectors.len(), coefs.len());
    let n = vectors.len();
    if n == 0 {
        return None;
    }
    let d = vectors[0].len();
    if coefs.iter().all(|c| *c == Coef::Free) {
        let cols: Vec<Vec<Q>> = (0..d).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
        return nullspace(&cols, n).into_iter().next();
    }
    let nonzero: Vec<usize> = (0..n).filter(|&k| coefs[k] == Coef::NonZero).collect();
    for mask in 0u64..(1u64 << nonzero.len()) {
        let mut lp = Lp::new(vec![VarKind::Free; n]);
        for i in 0..d {
            lp.row(vectors.iter().map(|v| v[i].clone()).collect(), Cmp::Eq, Q::zero());
        }
        for (k, c) in coefs.iter().enumerate() {
            match c {
                Coef::Free => {}
                Coef::Positive => {
                    lp.bound(k, Cmp::Ge, q(1));
                }
                Coef::Negative => {
                    lp.bound(k, Cmp::Le, q(-1));
                }
                Coef::NonZero => {
                    let bit = nonzero.iter().position(|&z| z == k).unwrap();
                    if mask >> bit & 1 == 0 {
                        lp.bound(k, Cmp::Ge, q(1));
                    } else {
                        lp.bound(k, Cmp::Le, q(-1));
                    }
                }
            }
        }
        if let Some(x) = lp.feasible_point() {
            return Some(x);
        }
    }
    None
}

/// Nonzero point of `{x : A_eq x = 0, A_le x <= 0, x_k >= 0 for nonneg k}`, if any.
pub fn nonzero_in_cone(n: usize, nonneg: &[bool], eqs: &[Vec<Q>], les: &[Vec<Q>]) -> Option<Vec<Q>> {
    for k in 0..n {
        for sign in [1i64, -1] {
            if sign < 0 && nonneg[k] {
                continue;
            }
            let kinds: Vec<VarKind> = nonneg.iter().map(|&p| if p { VarKind::NonNeg } else { VarKind::Free }).collect();
            let mut lp = Lp::new(kinds);
            for r in eqs {
                lp.row(r.clone(), Cmp::Eq, Q::zero());
            }
            for r in les {
                lp.row(r.clone(), Cmp::Le, Q::zero());
            }
            if sign > 0 {
                lp.bound(k, Cmp::Ge, q(1));
            } else {
                lp.bound(k, Cmp::Le, q(-1));
            }
            if let Some(x) = lp.feasible_point() {
                return Some(x);
            }
        }
    }
    None
}

/// Positive-linear dependence of `({v_i}, {u_j})`: nonzero `(α >= 0, β)` with `Σ α v + Σ β u = 0`.
pub fn positive_linear_dependent(signed: &[Vec<Q>], free: &[Vec<Q>]) -> Option<(Vec<Q>, Vec<Q>)> {
    let all: Vec<&Vec<Q>> = signed.iter().chain(free).collect();
    if all.is_empty() {
        return None;
    }
    let n = all.len();
    let d = all[0].len();
    let eqs: Vec<Vec<Q>> = (0..d).map(|i| all.iter().map(|v| v[i].clone()).collect()).collect();
    let nonneg: Vec<bool> = (0..n).map(|k| k < signed.len()).collect();
    nonzero_in_cone(n, &nonneg, &eqs, &[]).map(|x| (x[..signed.len()].to_vec(), x[signed.len()..].to_vec()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reduced {
    pub base_coeffs: Vec<Q>,
    /// Indices into the extras that survive, with their coefficients.
    pub kept: Vec<(usize, Q)>,
}

/// Rewrites `v = Σ a_i base_i + Σ α_j extra_j` so that the base together with the kept extras is
/// linearly independent and every kept `α_j` keeps its original sign.
pub fn caratheodory_reduce(v: &[Q], base: &[Vec<Q>], extras: &[(Vec<Q>, Q)]) -> Result<Reduced> {
    if !base.is_empty() && rank_q(base) != base.len() {
        return Err(Error::Invalid("base vectors are linearly dependent".into()));
    }
    let d = v.len();
    let mut combo = vec![Q::zero(); d];
    for (e, a) in extras {
        for (c, x) in combo.iter_mut().zip(e) {
            *c += a * x;
        }
    }
    let rest: Vec<Q> = v.iter().zip(&combo).map(|(a, b)| a - b).collect();
    let mut a = if base.is_empty() {
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("coefficients do not reproduce the vector".into()));
        }
        vec![]
    } else {
        crate::linalg::express_q(base, &rest)
            .ok_or_else(|| Error::Invalid("coefficients do not reproduce the vector".into()))?
    };
    let mut kept: Vec<(usize, Q)> = extras.iter().enumerate().filter(|(_, e)| !e.1.is_zero()).map(|(i, e)| (i, e.1.clone())).collect();
    loop {
        let mut fam: Vec<Vec<Q>> = base.to_vec();
        fam.extend(kept.iter().map(|(i, _)| extras[*i].0.clone()));
        if rank_q(&fam) == fam.len() {
            break;
        }
        let cols: Vec<Vec<Q>> = (0..d).map(|r| fam.iter().map(|f| f[r].clone()).collect()).collect();
        let mut gamma = nullspace(&cols, fam.len()).into_iter().next().expect("dependent family has a null vector");
        let nb = base.len();
        if !kept.iter().enumerate().any(|(k, (_, al))| (&gamma[nb + k] * al).is_positive()) {
            gamma = gamma.into_iter().map(|x| -x).collect();
        }
        let mut t: Option<Q> = None;
        for (k, (_, al)) in kept.iter().enumerate() {
            let g = &gamma[nb + k];
            if (g * al).is_positive() {
                let ratio = al / g;
                if t.as_ref().map_or(true, |cur| ratio < *cur) {
                    t = Some(ratio);
                }
            }
        }
        let t = t.expect("some extra coefficient is reducible");
        for (i, ai) in a.iter_mut().enumerate() {
            *ai -= &t * &gamma[i];
        }
        for (k, entry) in kept.iter_mut().enumerate() {
            entry.1 -= &t * &gamma[nb + k];
        }
        kept.retain(|(_, al)| !al.is_zero());
    }
    Ok(Reduced { base_coeffs: a, kept })
}
