//! Independent re-evaluation of stored witnesses.

use super::{CheckConfig, Member, MultiplierCandidate, Witness, WitnessKind};
use crate::disjunctive::{active_pieces, limiting_member};
use crate::error::{Error, Result};
use crate::geometry::normal_cone;
use crate::linalg::{rank_f64, rank_q};
use crate::model::Program;
use crate::rational::{add, is_zero_vec, scale, to_f64, Q};
use num_traits::{Signed, Zero};

fn member_vector(p: &Program, m: &Member, x: &[Q]) -> Vec<Q> {
    let d = p.dim();
    match m {
        Member::G { index, choice } => {
            if choice.is_empty() {
                p.g[*index].gradient(d).eval(x)
            } else {
                choice.clone()
            }
        }
        Member::H { index } => p.h[*index].gradient(d).eval(x),
        Member::Phi { block, beta, .. } => p.blocks[*block].map.jacobian().transpose_apply(x, beta),
    }
}

fn rank_of(vs: &[Vec<Q>], config: &CheckConfig) -> usize {
    match config.rank {
        super::RankMode::Exact => rank_q(vs),
        super::RankMode::Float { tol } => {
            let f: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().map(to_f64).collect()).collect();
            rank_f64(&f, tol)
        }
    }
}

/// `signed` requires `λ_g >= 0`; span witnesses leave inequality multipliers free.
fn equation_holds(p: &Program, xbar: &[Q], c: &MultiplierCandidate, signed: bool) -> bool {
    let mut sum = vec![Q::zero(); p.dim()];
    for (m, k) in c.members.iter().zip(&c.coefficients) {
        sum = add(&sum, &scale(&member_vector(p, m, xbar), k));
    }
    let nonzero = c.coefficients.iter().any(|k| !k.is_zero());
    is_zero_vec(&sum) && nonzero && (!signed || c.lambda_g.iter().all(|l| !l.is_negative()))
}

/// Recomputes the witness from the program alone and reports whether it still certifies failure.
pub fn replay(p: &Program, xbar: &[Q], w: &Witness, config: &CheckConfig) -> Result<bool> {
    let p = match &w.partition {
        Some(part) => p.subsystem(part)?,
        None => p.clone(),
    };
    let center: Vec<Vec<Q>> = w.members.iter().map(|m| member_vector(&p, m, xbar)).collect();
    if let Some(c) = &w.candidate {
        if !equation_holds(&p, xbar, c, w.kind != WitnessKind::SpanMultiplier) {
            return Ok(false);
        }
    }
    match w.kind {
        WitnessKind::Multiplier => {
            let c = w.candidate.as_ref().ok_or_else(|| Error::Invalid("multiplier witness without candidate".into()))?;
            for (b, eta) in c.eta.iter().enumerate() {
                let y = p.blocks[b].map.eval(xbar);
                if !limiting_member(&p.blocks[b].set, &y, eta)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        WitnessKind::SpanMultiplier => {
            let c = w.candidate.as_ref().ok_or_else(|| Error::Invalid("multiplier witness without candidate".into()))?;
            for (b, eta) in c.eta.iter().enumerate() {
                let block = &p.blocks[b];
                let y = block.map.eval(xbar);
                let mut span = Vec::new();
                for r in active_pieces(&block.set, &y, 0.0)? {
                    let nc = normal_cone(&block.set.pieces[r], &y)?;
                    span.extend(nc.rays.iter().chain(&nc.lines).cloned());
                }
                let before = rank_q(&span);
                span.push(eta.clone());
                if rank_q(&span) != before {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        WitnessKind::Independent | WitnessKind::RankChange => {
            let at_center = rank_of(&center, config);
            if at_center != w.center_rank || w.radii.len() != w.ranks.len() || w.radii.is_empty() {
                return Ok(false);
            }
            for (r, &stored) in w.radii.iter().zip(&w.ranks) {
                let x = add(xbar, &scale(&w.direction, r));
                let vs: Vec<Vec<Q>> = w.members.iter().map(|m| member_vector(&p, m, &x)).collect();
                let rank = rank_of(&vs, config);
                let broken = match w.kind {
                    WitnessKind::Independent => rank == vs.len(),
                    _ => rank != at_center,
                };
                if rank != stored || !broken {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
