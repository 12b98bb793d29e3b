//! Complementarity, vanishing and switching constraints as two-dimensional orthogonal blocks.

mod checks;
mod cones;

pub use checks::{check_mpec_prcpld, check_mpec_rcpld, check_mpsc_rcpld, check_mpvc_prcpld, check_mpvc_rcpld, check_ortho};
pub use cones::{admissible_multiplier, omega_nc};

use crate::disjunctive::DisjunctiveSet;
use crate::error::{Error, Result};
use crate::expr::{Expr, VectorFunc};
use crate::model::{Block, Program, FEASIBILITY_TOL};
use crate::rational::{q, to_f64, Q};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrthoKind {
    Mpec,
    Mpvc,
    Mpsc,
}

impl OrthoKind {
    pub fn set(self) -> DisjunctiveSet {
        match self {
            OrthoKind::Mpec => DisjunctiveSet::omega_e(),
            OrthoKind::Mpvc => DisjunctiveSet::omega_v(),
            OrthoKind::Mpsc => DisjunctiveSet::omega_s(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrthoKind::Mpec => "mpec",
            OrthoKind::Mpvc => "mpvc",
            OrthoKind::Mpsc => "mpsc",
        }
    }
}

/// Index class of one pair `(G_i(x̄), H_i(x̄))`; signs are written G first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndexClass {
    ZeroPlus,
    ZeroZero,
    PlusZero,
    MinusZero,
    MinusPlus,
    /// Switching: `G = 0 ≠ H`.
    OnlyG,
    /// Switching: `G ≠ 0 = H`.
    OnlyH,
    /// Switching: `G = H = 0`.
    Both,
}

impl IndexClass {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexClass::ZeroPlus => "0+",
            IndexClass::ZeroZero => "00",
            IndexClass::PlusZero => "+0",
            IndexClass::MinusZero => "-0",
            IndexClass::MinusPlus => "-+",
            IndexClass::OnlyG => "G",
            IndexClass::OnlyH => "H",
            IndexClass::Both => "GH",
        }
    }

    pub fn biactive(self) -> bool {
        matches!(self, IndexClass::ZeroZero | IndexClass::Both)
    }
}

impl fmt::Display for IndexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoIndexSets {
    pub kind: OrthoKind,
    pub classes: Vec<IndexClass>,
    /// Pairs with `|G_i|` or `|H_i|` in `(tol, 10 tol]`, whose class would change under a
    /// slightly larger tolerance.
    pub sensitive: Vec<usize>,
}

impl OrthoIndexSets {
    pub fn members(&self, class: IndexClass) -> Vec<usize> {
        self.classes.iter().enumerate().filter(|(_, c)| **c == class).map(|(i, _)| i).collect()
    }

    pub fn notes(&self) -> Vec<String> {
        self.sensitive
            .iter()
            .map(|i| format!("pair {i} is within 10x the tolerance of a class boundary"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthoProgram {
    pub vars: Vec<String>,
    pub g: Vec<Expr>,
    pub h: Vec<Expr>,
    pub big_g: Vec<Expr>,
    pub big_h: Vec<Expr>,
    pub kind: OrthoKind,
    pub objective: Option<Expr>,
}

impl OrthoProgram {
    pub fn new(vars: &[&str], kind: OrthoKind, big_g: Vec<Expr>, big_h: Vec<Expr>) -> Self {
        OrthoProgram {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            g: vec![],
            h: vec![],
            big_g,
            big_h,
            kind,
            objective: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn pairs(&self) -> usize {
        self.big_g.len()
    }

    /// One block `(G_i, H_i) ∈ Ω` per pair, valid at every point.
    pub fn to_global_program(&self) -> Program {
        let d = self.dim();
        let blocks = self
            .big_g
            .iter()
            .zip(&self.big_h)
            .map(|(gi, hi)| Block { map: VectorFunc::new(vec![gi.clone(), hi.clone()], d), set: self.kind.set() })
            .collect();
        Program { vars: self.vars.clone(), g: self.g.clone(), h: self.h.clone(), blocks, objective: self.objective.clone() }
    }

    fn check_feasible(&self, x: &[Q], tol: f64) -> Result<()> {
        if self.big_g.len() != self.big_h.len() {
            return Err(Error::Invalid("G and H lists differ in length".into()));
        }
        let r = self.to_global_program().residual_at(x)?;
        if r.total > tol {
            return Err(Error::Infeasible { violation: r.total });
        }
        Ok(())
    }
}

fn sign_tol(v: f64, tol: f64) -> i8 {
    if v.abs() <= tol {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Classifies every pair by the signs of `G_i(x̄)` and `H_i(x̄)`, values within `tol` counting as zero.
pub fn classify(p: &OrthoProgram, xbar: &[Q], tol: f64) -> Result<OrthoIndexSets> {
    p.check_feasible(xbar, tol.max(FEASIBILITY_TOL))?;
    let mut classes = Vec::with_capacity(p.pairs());
    let mut sensitive = Vec::new();
    for (i, (gi, hi)) in p.big_g.iter().zip(&p.big_h).enumerate() {
        let gv = to_f64(&gi.eval(xbar));
        let hv = to_f64(&hi.eval(xbar));
        if [gv, hv].iter().any(|v| v.abs() > tol && v.abs() <= 10.0 * tol) {
            sensitive.push(i);
        }
        let s = (sign_tol(gv, tol), sign_tol(hv, tol));
        let class = match (p.kind, s) {
            (OrthoKind::Mpec, (0, 1)) => IndexClass::ZeroPlus,
            (OrthoKind::Mpec, (0, 0)) => IndexClass::ZeroZero,
            (OrthoKind::Mpec, (1, 0)) => IndexClass::PlusZero,
            (OrthoKind::Mpvc, (1, 0)) => IndexClass::PlusZero,
            (OrthoKind::Mpvc, (0, 0)) => IndexClass::ZeroZero,
            (OrthoKind::Mpvc, (0, 1)) => IndexClass::ZeroPlus,
            (OrthoKind::Mpvc, (-1, 0)) => IndexClass::MinusZero,
            (OrthoKind::Mpvc, (-1, 1)) => IndexClass::MinusPlus,
            (OrthoKind::Mpsc, (0, 0)) => IndexClass::Both,
            (OrthoKind::Mpsc, (0, _)) => IndexClass::OnlyG,
            (OrthoKind::Mpsc, (_, 0)) => IndexClass::OnlyH,
            _ => return Err(Error::Infeasible { violation: gv.abs().min(hv.abs()) }),
        };
        classes.push(class);
    }
    Ok(OrthoIndexSets { kind: p.kind, classes, sensitive })
}

/// Local reformulation at `x̄`: sign-determined pairs become equalities or inequalities and only
/// biactive pairs keep an `Ω` block.
pub fn to_generic(p: &OrthoProgram, xbar: &[Q]) -> Result<Program> {
    let sets = classify(p, xbar, FEASIBILITY_TOL)?;
    let d = p.dim();
    let mut g = p.g.clone();
    let mut h = p.h.clone();
    let mut blocks = Vec::new();
    for (i, class) in sets.classes.iter().enumerate() {
        let (gi, hi) = (&p.big_g[i], &p.big_h[i]);
        match (p.kind, class) {
            (OrthoKind::Mpec, IndexClass::ZeroPlus) | (OrthoKind::Mpsc, IndexClass::OnlyG) => h.push(gi.clone()),
            (OrthoKind::Mpec | OrthoKind::Mpvc, IndexClass::PlusZero) | (OrthoKind::Mpsc, IndexClass::OnlyH) => {
                h.push(hi.clone())
            }
            (OrthoKind::Mpvc, IndexClass::ZeroPlus) => g.push(gi.clone()),
            (OrthoKind::Mpvc, IndexClass::MinusZero) => g.push(Expr::linear_combination(&[q(-1)], &[hi.clone()])),
            (OrthoKind::Mpvc, IndexClass::MinusPlus) => {}
            (_, c) if c.biactive() => {
                blocks.push(Block { map: VectorFunc::new(vec![gi.clone(), hi.clone()], d), set: p.kind.set() })
            }
            _ => unreachable!("classify yields only classes of the program's kind"),
        }
    }
    Ok(Program { vars: p.vars.clone(), g, h, blocks, objective: p.objective.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_list;
    use crate::rational::qvec;

    pub(crate) fn ortho(kind: OrthoKind, vars: &[&str], g: &str, h: &str, big_g: &str, big_h: &str) -> OrthoProgram {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let parse = |s: &str| if s.trim().is_empty() { vec![] } else { parse_list(s, &names).unwrap() };
        OrthoProgram {
            vars: names.clone(),
            g: parse(g),
            h: parse(h),
            big_g: parse(big_g),
            big_h: parse(big_h),
            kind,
            objective: None,
        }
    }

    #[test]
    fn classification_examples() {
        let e = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1", "x2");
        assert_eq!(classify(&e, &qvec(&[0, 0]), 1e-9).unwrap().classes, vec![IndexClass::ZeroZero]);
        assert_eq!(classify(&e, &qvec(&[1, 0]), 1e-9).unwrap().members(IndexClass::PlusZero), vec![0]);
        assert!(matches!(classify(&e, &qvec(&[1, 1]), 1e-9), Err(Error::Infeasible { .. })));
        let v = ortho(OrthoKind::Mpvc, &["x1", "x2"], "", "", "x1", "x2");
        assert_eq!(classify(&v, &qvec(&[-1, 0]), 1e-9).unwrap().members(IndexClass::MinusZero), vec![0]);
        let s = ortho(OrthoKind::Mpsc, &["x1", "x2"], "", "", "x1", "x2");
        assert_eq!(classify(&s, &qvec(&[0, -2]), 1e-9).unwrap().classes, vec![IndexClass::OnlyG]);
    }

    #[test]
    fn sensitivity_flag() {
        let e = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1", "x2");
        let x = vec![crate::rational::qf(1, 200_000_000), q(0)];
        let sets = classify(&e, &x, 1e-9).unwrap();
        assert_eq!(sets.sensitive, vec![0]);
        assert_eq!(sets.classes, vec![IndexClass::PlusZero]);
    }

    #[test]
    fn reformulation_examples() {
        let e = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1", "x2");
        let r = to_generic(&e, &qvec(&[0, 3])).unwrap();
        assert!(r.blocks.is_empty());
        assert_eq!(r.h, vec![e.big_g[0].clone()]);
        let s = ortho(OrthoKind::Mpsc, &["x1", "x2"], "", "", "x1", "x2");
        let r = to_generic(&s, &qvec(&[0, 0])).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].set, DisjunctiveSet::omega_s());
        let v = ortho(OrthoKind::Mpvc, &["x1", "x2", "x3"], "", "", "x1; x2; -1", "x2; x1; x3");
        let r = to_generic(&v, &qvec(&[0, 0, 1])).unwrap();
        assert_eq!(r.blocks.len(), 2);
        assert!(r.g.is_empty() && r.h.is_empty());
    }
}
