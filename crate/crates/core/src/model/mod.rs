//! Programs with disjunctive constraints `g(x) <= 0, h(x) = 0, Φ_i(x) ∈ Γ_i`.

mod format;

pub use format::{parse_model, ModelFile};

use crate::disjunctive::{active_pieces, nearest_piece, DisjunctiveSet};
use crate::error::{Error, Result};
use crate::expr::{Expr, VectorFunc};
use crate::geometry::project_f64;
use crate::rational::{to_f64, Q};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub map: VectorFunc,
    pub set: DisjunctiveSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub vars: Vec<String>,
    pub g: Vec<Expr>,
    pub h: Vec<Expr>,
    pub blocks: Vec<Block>,
    pub objective: Option<Expr>,
}

/// One piece index per block.
pub type Partition = Vec<usize>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualNorm {
    #[default]
    L1,
    L2,
    Linf,
}

impl ResidualNorm {
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            ResidualNorm::L1 => v.iter().map(|x| x.abs()).fold(0.0, |s, x| s + x),
            ResidualNorm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            ResidualNorm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub g_plus_norm: f64,
    pub h_norm: f64,
    pub gamma_dists: Vec<f64>,
    pub total: f64,
}

pub const FEASIBILITY_TOL: f64 = 1e-9;

impl Program {
    pub fn new(vars: Vec<String>) -> Self {
        Program { vars, g: vec![], h: vec![], blocks: vec![], objective: None }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        let exprs = self.g.iter().chain(&self.h).chain(self.objective.iter());
        for e in exprs {
            if e.arity() > d {
                return Err(Error::Dimension { expected: d, got: e.arity() });
            }
        }
        for b in &self.blocks {
            if b.map.input_dim != d || b.map.components.iter().any(|c| c.arity() > d) {
                return Err(Error::Dimension { expected: d, got: b.map.input_dim });
            }
            if b.map.output_dim() != b.set.dim {
                return Err(Error::Dimension { expected: b.set.dim, got: b.map.output_dim() });
            }
        }
        Ok(())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: n });
        }
        Ok(())
    }

    pub fn residual(&self, x: &[f64], norm: ResidualNorm) -> Result<Residual> {
        self.check_dim(x.len())?;
        let gp: Vec<f64> = self.g.iter().map(|g| g.eval_f64(x).max(0.0)).collect();
        let hv: Vec<f64> = self.h.iter().map(|h| h.eval_f64(x)).collect();
        let gamma_dists: Vec<f64> =
            self.blocks.iter().map(|b| crate::disjunctive::distance(&b.set, &b.map.eval_f64(x))).collect();
        let g_plus_norm = norm.apply(&gp);
        let h_norm = norm.apply(&hv);
        let total = g_plus_norm + h_norm + gamma_dists.iter().fold(0.0, |s, x| s + x);
        Ok(Residual { g_plus_norm, h_norm, gamma_dists, total })
    }

    pub fn residual_at(&self, x: &[Q]) -> Result<Residual> {
        self.residual(&x.iter().map(to_f64).collect::<Vec<_>>(), ResidualNorm::L1)
    }

    pub fn is_feasible(&self, x: &[Q], tol: f64) -> Result<bool> {
        self.check_dim(x.len())?;
        let r = self.residual_at(x)?;
        Ok(r.total <= tol)
    }

    /// Indices with `g_i(x) >= -tol`.
    pub fn active_inequalities(&self, x: &[Q], tol: f64) -> Result<Vec<usize>> {
        self.check_dim(x.len())?;
        Ok(self
            .g
            .iter()
            .enumerate()
            .filter(|(_, g)| to_f64(&g.eval(x)) >= -tol)
            .map(|(i, _)| i)
            .collect())
    }

    /// All partitions whose pieces contain `Φ_i(x)`, in lexicographic order.
    pub fn admissible_partitions(&self, x: &[Q]) -> Result<Vec<Partition>> {
        self.check_dim(x.len())?;
        let mut choices = Vec::new();
        for b in &self.blocks {
            let act = active_pieces(&b.set, &b.map.eval(x), 0.0)?;
            if act.is_empty() {
                return Err(Error::Infeasible { violation: crate::disjunctive::distance(&b.set, &b.map.eval_f64(&crate::rational::vec_to_f64(x))) });
            }
            choices.push(act);
        }
        Ok(cartesian(&choices))
    }

    /// The program with every `Γ_i` replaced by the chosen piece.
    pub fn subsystem(&self, partition: &[usize]) -> Result<Program> {
        if partition.len() != self.blocks.len() {
            return Err(Error::Dimension { expected: self.blocks.len(), got: partition.len() });
        }
        let mut p = self.clone();
        for (b, &r) in p.blocks.iter_mut().zip(partition) {
            let piece = b.set.pieces.get(r).ok_or_else(|| Error::Invalid(format!("no piece {r}")))?.clone();
            b.set = DisjunctiveSet::single(piece);
        }
        Ok(p)
    }

    /// Nearest piece per block, lowest index on ties.
    pub fn nearest_partition(&self, x: &[f64]) -> Result<Partition> {
        self.check_dim(x.len())?;
        self.blocks
            .iter()
            .map(|b| nearest_piece(&b.set, &b.map.eval_f64(x)).map(|(r, _)| r).ok_or(Error::EmptySet))
            .collect()
    }

    /// `Σ_i d_{C_{P_i}}(Φ_i(x))`.
    pub fn partition_distance(&self, x: &[f64], partition: &[usize]) -> Result<f64> {
        let mut s = 0.0;
        for (b, &r) in self.blocks.iter().zip(partition) {
            s += project_f64(&b.set.pieces[r], &b.map.eval_f64(x))?.1;
        }
        Ok(s)
    }
}

pub(crate) fn cartesian(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for &v in c {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}
