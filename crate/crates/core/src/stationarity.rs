//! Mordukhovich stationarity certificates.

use crate::cq::BranchChoice;
use crate::disjunctive::{limiting_member, limiting_nc};
use crate::error::{Error, Result};
use crate::geometry::dd_vrep_to_hrep;
use crate::lp::{Cmp, Lp, VarKind};
use crate::model::{cartesian, Program, FEASIBILITY_TOL};
use crate::rational::{add, norm2_f64, scale, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MStatCertificate {
    #[serde(with = "crate::rational::serde_qvec")]
    pub lambda_g: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub lambda_h: Vec<Q>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub eta: Vec<Vec<Q>>,
    /// Stratum of the limiting normal cone holding each `η̄_i`.
    pub branch: Vec<BranchChoice>,
    /// Euclidean norm of `∇f + Σ λ_g ∇g + Σ λ_h ∇h + Σ ∇Φᵀη̄`.
    pub residual: f64,
}

impl MStatCertificate {
    fn combination(&self, p: &Program, x: &[Q]) -> Result<Vec<Q>> {
        let d = p.dim();
        let f = p.objective.as_ref().ok_or_else(|| Error::Invalid("program has no objective".into()))?;
        let mut s = f.gradient(d).eval(x);
        for (g, l) in p.g.iter().zip(&self.lambda_g) {
            s = add(&s, &scale(&g.gradient(d).eval(x), l));
        }
        for (h, l) in p.h.iter().zip(&self.lambda_h) {
            s = add(&s, &scale(&h.gradient(d).eval(x), l));
        }
        for (b, e) in p.blocks.iter().zip(&self.eta) {
            s = add(&s, &b.map.jacobian().transpose_apply(x, e));
        }
        Ok(s)
    }

    /// Residual within `1e-9`, signs, complementarity with inactive `g`, and limiting-cone membership.
    pub fn verify(&self, p: &Program, x: &[Q]) -> Result<bool> {
        if norm2_f64(&self.combination(p, x)?) > 1e-9 {
            return Ok(false);
        }
        let active = p.active_inequalities(x, FEASIBILITY_TOL)?;
        for (i, l) in self.lambda_g.iter().enumerate() {
            if l.is_negative() || (!l.is_zero() && !active.contains(&i)) {
                return Ok(false);
            }
        }
        for (b, e) in p.blocks.iter().zip(&self.eta) {
            if !limiting_member(&b.set, &b.map.eval(x), e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// First certificate found over the strata combinations, if `x̄` is M-stationary.
pub fn check_mstationary(p: &Program, x: &[Q]) -> Result<Option<MStatCertificate>> {
    Ok(search(p, x, false)?.into_iter().next())
}

/// One certificate per strata combination that admits one.
pub fn all_certificates(p: &Program, x: &[Q]) -> Result<Vec<MStatCertificate>> {
    search(p, x, true)
}

fn search(p: &Program, x: &[Q], all: bool) -> Result<Vec<MStatCertificate>> {
    p.validate()?;
    let f = p.objective.as_ref().ok_or_else(|| Error::Invalid("program has no objective".into()))?;
    let r = p.residual_at(x)?;
    if r.total > FEASIBILITY_TOL {
        return Err(Error::Infeasible { violation: r.total });
    }
    let d = p.dim();
    let active = p.active_inequalities(x, FEASIBILITY_TOL)?;
    let (ng, nh) = (active.len(), p.h.len());
    let ps: Vec<usize> = p.blocks.iter().map(|b| b.set.dim).collect();
    let nvar = ng + nh + ps.iter().sum::<usize>();
    let mut cols: Vec<Vec<Q>> = active.iter().map(|&i| p.g[i].gradient(d).eval(x)).collect();
    cols.extend(p.h.iter().map(|h| h.gradient(d).eval(x)));
    let jacs: Vec<Vec<Vec<Q>>> = p.blocks.iter().map(|b| b.map.jacobian().eval(x)).collect();
    let grad_f = f.gradient(d).eval(x);
    let mut strata = Vec::new();
    for b in &p.blocks {
        strata.push(limiting_nc(&b.set, &b.map.eval(x))?.strata);
    }
    let choices: Vec<Vec<usize>> = strata.iter().map(|s| (0..s.len()).collect()).collect();
    let mut kinds = vec![VarKind::NonNeg; ng];
    kinds.extend(vec![VarKind::Free; nvar - ng]);
    let mut out = Vec::new();
    for combo in cartesian(&choices) {
        let mut lp = Lp::new(kinds.clone());
        for r in 0..d {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
            for j in &jacs {
                row.extend(j.iter().map(|jr| jr[r].clone()));
            }
            lp.row(row, Cmp::Eq, -grad_f[r].clone());
        }
        let mut off = ng + nh;
        for (b, &s) in combo.iter().enumerate() {
            let h = dd_vrep_to_hrep(&strata[b][s].cone);
            let embed = |v: &Vec<Q>| {
                let mut row = vec![Q::zero(); nvar];
                for (k, a) in v.iter().enumerate() {
                    row[off + k] = a.clone();
                }
                row
            };
            for a in &h.ineqs {
                lp.row(embed(a), Cmp::Le, Q::zero());
            }
            for e in &h.eqs {
                lp.row(embed(e), Cmp::Eq, Q::zero());
            }
            off += ps[b];
        }
        let Some(z) = lp.feasible_point() else { continue };
        let mut lambda_g = vec![Q::zero(); p.g.len()];
        for (k, &i) in active.iter().enumerate() {
            lambda_g[i] = z[k].clone();
        }
        let mut eta = Vec::new();
        let mut off = ng + nh;
        for &pi in &ps {
            eta.push(z[off..off + pi].to_vec());
            off += pi;
        }
        let branch = combo
            .iter()
            .enumerate()
            .map(|(b, &s)| {
                let c = &strata[b][s].cone;
                BranchChoice { rays: c.rays.clone(), lines: c.lines.clone() }
            })
            .collect();
        let mut cert = MStatCertificate { lambda_g, lambda_h: z[ng..ng + nh].to_vec(), eta, branch, residual: 0.0 };
        cert.residual = norm2_f64(&cert.combination(p, x)?);
        out.push(cert);
        if !all {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use crate::rational::qvec;

    fn prog(text: &str) -> Program {
        parse_model(text).unwrap().into_program().unwrap()
    }

    #[test]
    fn complementarity_origin_is_stationary() {
        let p = prog("vars: x1, x2\nobjective: x1 + x2\nblocks:\n map: x1; x2\n set: omega_E\n");
        let c = check_mstationary(&p, &qvec(&[0, 0])).unwrap().unwrap();
        assert_eq!(c.eta[0], qvec(&[-1, -1]));
        assert!(c.verify(&p, &qvec(&[0, 0])).unwrap());
    }

    #[test]
    fn equality_multiplier() {
        let p = prog("vars: x1\nobjective: x1\nh: x1\n");
        let c = check_mstationary(&p, &qvec(&[0])).unwrap().unwrap();
        assert_eq!(c.lambda_h, qvec(&[-1]));
    }

    #[test]
    fn switching_origin_is_not_stationary() {
        let p = prog("vars: x1, x2\nobjective: x1 + x2\nblocks:\n map: x1; x2\n set: omega_S\n");
        assert!(check_mstationary(&p, &qvec(&[0, 0])).unwrap().is_none());
    }
}
