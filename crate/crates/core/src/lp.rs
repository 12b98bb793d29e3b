//! Exact two-phase simplex over rationals with Bland's anti-cycling rule.

use crate::rational::Q;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Free,
    NonNeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Lp {
    vars: Vec<VarKind>,
    rows: Vec<(Vec<Q>, Cmp, Q)>,
    objective: Option<Vec<Q>>,
    maximize: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Q]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

impl Lp {
    pub fn new(vars: Vec<VarKind>) -> Self {
        Lp { vars, rows: Vec::new(), objective: None, maximize: false }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn row(&mut self, coeffs: Vec<Q>, cmp: Cmp, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars.len());
        self.rows.push((coeffs, cmp, rhs));
        self
    }

    /// Single-variable bound `x_k cmp rhs`.
    pub fn bound(&mut self, k: usize, cmp: Cmp, rhs: Q) -> &mut Self {
        let mut c = vec![Q::zero(); self.vars.len()];
        c[k] = Q::one();
        self.row(c, cmp, rhs)
    }

    /// Objective to minimize.
    pub fn minimize(&mut self, c: Vec<Q>) -> &mut Self {
        assert_eq!(c.len(), self.vars.len());
        self.objective = Some(c);
        self.maximize = false;
        self
    }

    pub fn maximize(&mut self, c: Vec<Q>) -> &mut Self {
        self.minimize(c.into_iter().map(|x| -x).collect());
        self.maximize = true;
        self
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        let mut lp = self.clone();
        lp.objective = None;
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn solve(&self) -> LpOutcome {
        match Tableau::build(self).run(self) {
            LpOutcome::Optimal { x, value } if self.maximize => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }
}

struct Tableau {
    t: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
    n_struct: usize,
    col_of_var: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &Lp) -> Self {
        let mut col_of_var = Vec::new();
        let mut n = 0;
        for kind in &lp.vars {
            match kind {
                VarKind::NonNeg => {
                    col_of_var.push((n, None));
                    n += 1;
                }
                VarKind::Free => {
                    col_of_var.push((n, Some(n + 1)));
                    n += 2;
                }
            }
        }
        let n_slack = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_struct = n + n_slack;
        let m = lp.rows.len();
        let ncols = n_struct + m;
        let mut t = Vec::with_capacity(m);
        let mut slack = n;
        for (i, (coeffs, cmp, rhs)) in lp.rows.iter().enumerate() {
            let mut row = vec![Q::zero(); ncols + 1];
            for (k, c) in coeffs.iter().enumerate() {
                let (p, mneg) = col_of_var[k];
                row[p] = c.clone();
                if let Some(mc) = mneg {
                    row[mc] = -c.clone();
                }
            }
            match cmp {
                Cmp::Le => {
                    row[slack] = Q::one();
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            row[ncols] = rhs.clone();
            if rhs.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n_struct + i] = Q::one();
            t.push(row);
        }
        let mut obj = vec![Q::zero(); ncols + 1];
        for row in &t {
            for j in 0..n_struct {
                obj[j] -= &row[j];
            }
            obj[ncols] -= &row[ncols];
        }
        let basis = (0..m).map(|i| n_struct + i).collect();
        Tableau { t, obj, basis, ncols, n_struct, col_of_var }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.t[r][c];
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Returns false if unbounded.
    fn simplex(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.ncols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn run(mut self, lp: &Lp) -> LpOutcome {
        self.simplex(self.n_struct);
        if self.obj[self.ncols].is_negative() {
            return LpOutcome::Infeasible;
        }
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] >= self.n_struct {
                match (0..self.n_struct).find(|&j| !self.t[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.t.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let mut cost = vec![Q::zero(); self.ncols];
        if let Some(c) = &lp.objective {
            for (k, ck) in c.iter().enumerate() {
                let (p, mneg) = self.col_of_var[k];
                cost[p] = ck.clone();
                if let Some(mc) = mneg {
                    cost[mc] = -ck.clone();
                }
            }
        }
        let mut obj = vec![Q::zero(); self.ncols + 1];
        obj[..self.ncols].clone_from_slice(&cost);
        for (i, row) in self.t.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() {
                for (x, v) in obj.iter_mut().zip(row) {
                    *x -= cb * v;
                }
            }
        }
        self.obj = obj;
        if !self.simplex(self.n_struct) {
            return LpOutcome::Unbounded;
        }
        let mut col_val = vec![Q::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.t[i][self.ncols].clone();
        }
        let x: Vec<Q> = self
            .col_of_var
            .iter()
            .map(|&(p, mneg)| match mneg {
                Some(mc) => &col_val[p] - &col_val[mc],
                None => col_val[p].clone(),
            })
            .collect();
        let value = match &lp.objective {
            Some(c) => c.iter().zip(&x).fold(Q::zero(), |a, (ci, xi)| a + ci * xi),
            None => Q::zero(),
        };
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn small_maximization() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  -> (8/5, 6/5)
        let mut lp = Lp::new(vec![VarKind::NonNeg; 2]);
        lp.row(vec![q(1), q(2)], Cmp::Le, q(4))
            .row(vec![q(3), q(1)], Cmp::Le, q(6))
            .maximize(vec![q(1), q(1)]);
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![qf(8, 5), qf(6, 5)]);
                assert_eq!(value, qf(14, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(vec![VarKind::Free]);
        lp.bound(0, Cmp::Ge, q(1)).bound(0, Cmp::Le, q(0));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = Lp::new(vec![VarKind::Free]);
        lp.bound(0, Cmp::Ge, q(1)).maximize(vec![q(1)]);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        let mut lp = Lp::new(vec![VarKind::Free, VarKind::Free]);
        lp.row(vec![q(1), q(1)], Cmp::Eq, q(-3))
            .row(vec![q(1), q(-1)], Cmp::Eq, q(1))
            .minimize(vec![q(0), q(0)]);
        assert_eq!(lp.solve().point().unwrap(), &[q(-1), q(-2)]);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(vec![VarKind::NonNeg; 2]);
        lp.row(vec![q(1), q(1)], Cmp::Eq, q(1))
            .row(vec![q(2), q(2)], Cmp::Eq, q(2))
            .minimize(vec![q(1), q(0)]);
        assert_eq!(lp.solve().point().unwrap(), &[q(0), q(1)]);
    }
}
