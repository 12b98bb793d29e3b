//! Polyhedra, finitely generated cones, and conversions between the two descriptions.

mod cone;
mod dd;
mod project;

pub use cone::{cone_combination, cone_member, ConeGenerators};
pub use dd::{dd_hrep_to_vrep, dd_vrep_to_hrep, HRep};
pub use project::{project, project_f64, project_rows};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{dot, is_zero_vec, to_f64, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowKind {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Row {
    #[serde(with = "crate::rational::serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub rhs: Q,
    pub kind: RowKind,
}

impl Row {
    pub fn le(normal: Vec<Q>, rhs: Q) -> Row {
        Row { normal, rhs, kind: RowKind::Le }
    }

    pub fn eq(normal: Vec<Q>, rhs: Q) -> Row {
        Row { normal, rhs, kind: RowKind::Eq }
    }

    /// `<c, x> - alpha`.
    pub fn excess(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) - &self.rhs
    }

    fn violation(&self, x: &[Q]) -> Q {
        let e = self.excess(x);
        match self.kind {
            RowKind::Le if e.is_positive() => e,
            RowKind::Le => Q::zero(),
            RowKind::Eq => e.abs(),
        }
    }
}

/// `{y : <c_j, y> <= alpha_j (Le) or = alpha_j (Eq)}` with nonzero normals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub rows: Vec<Row>,
}

impl Polyhedron {
    pub fn new(dim: usize, rows: Vec<Row>) -> Result<Self> {
        for r in &rows {
            if r.normal.len() != dim {
                return Err(Error::Dimension { expected: dim, got: r.normal.len() });
            }
            if is_zero_vec(&r.normal) {
                return Err(Error::Invalid("polyhedron row with zero normal".into()));
            }
        }
        Ok(Polyhedron { dim, rows })
    }

    /// Whole space.
    pub fn universe(dim: usize) -> Self {
        Polyhedron { dim, rows: Vec::new() }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.rows.iter().all(|r| r.violation(x).is_zero())
    }

    pub fn max_violation(&self, x: &[Q]) -> Q {
        self.rows.iter().map(|r| r.violation(x)).max().unwrap_or_else(Q::zero)
    }

    pub fn rows_f64(&self) -> Vec<(Vec<f64>, f64, RowKind)> {
        self.rows
            .iter()
            .map(|r| (r.normal.iter().map(to_f64).collect(), to_f64(&r.rhs), r.kind))
            .collect()
    }

    /// True when every row has a single nonzero coordinate.
    pub fn is_axis_aligned(&self) -> bool {
        self.rows.iter().all(|r| r.normal.iter().filter(|c| !c.is_zero()).count() == 1)
    }
}

/// Indices of inequality rows active at `x`; equality rows are always active and not listed.
pub fn active_set(c: &Polyhedron, x: &[Q], tol: &Q) -> Result<Vec<usize>> {
    if x.len() != c.dim {
        return Err(Error::Dimension { expected: c.dim, got: x.len() });
    }
    let viol = c.max_violation(x);
    if viol > *tol {
        return Err(Error::Infeasible { violation: to_f64(&viol) });
    }
    Ok(c.rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RowKind::Le && r.excess(x).abs() <= *tol)
        .map(|(i, _)| i)
        .collect())
}

/// Normal cone of `c` at a feasible `x`.
pub fn normal_cone(c: &Polyhedron, x: &[Q]) -> Result<ConeGenerators> {
    let active = active_set(c, x, &Q::zero())?;
    let rays = active.iter().map(|&j| c.rows[j].normal.clone()).collect();
    let lines = c.rows.iter().filter(|r| r.kind == RowKind::Eq).map(|r| r.normal.clone()).collect();
    Ok(ConeGenerators::canonical(c.dim, rays, lines))
}

/// Exact rank of rational vectors.
pub fn rank(vectors: &[Vec<Q>]) -> usize {
    linalg::rank_q(vectors)
}

/// Numerical rank with tolerance relative to the largest column norm.
pub fn rank_f64(vectors: &[Vec<f64>], tol: f64) -> usize {
    linalg::rank_f64(vectors, tol)
}
