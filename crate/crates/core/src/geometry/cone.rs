use crate::linalg::{greedy_basis, rank_q};
use crate::lp::{Cmp, Lp, VarKind};
use crate::rational::{fmt_vec, is_zero_vec, neg, primitive, primitive_line, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// `cone(rays) + span(lines)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeGenerators {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_qmat")]
    pub rays: Vec<Vec<Q>>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub lines: Vec<Vec<Q>>,
    /// Whether `rays ∪ lines` is linearly independent.
    pub independent: bool,
}

impl ConeGenerators {
    pub fn zero(dim: usize) -> Self {
        ConeGenerators { dim, rays: vec![], lines: vec![], independent: true }
    }

    /// Reduces arbitrary generators: lineality is moved into `lines`, redundant rays are dropped,
    /// vectors become primitive integer vectors in lexicographic order.
    pub fn canonical(dim: usize, rays: Vec<Vec<Q>>, lines: Vec<Vec<Q>>) -> Self {
        let mut lines: Vec<Vec<Q>> = lines.iter().filter(|l| !is_zero_vec(l)).map(|l| primitive_line(l)).collect();
        let mut rays: Vec<Vec<Q>> = rays.iter().filter(|r| !is_zero_vec(r)).map(|r| primitive(r)).collect();
        rays.sort();
        rays.dedup();
        let full = ConeGenerators { dim, rays: rays.clone(), lines: lines.clone(), independent: false };
        let (lineal, pointed): (Vec<_>, Vec<_>) = rays.into_iter().partition(|r| full.contains(&neg(r)));
        lines.extend(lineal.iter().map(|r| primitive_line(r)));
        let basis = greedy_basis(&lines);
        let mut lines: Vec<Vec<Q>> = basis.into_iter().map(|i| lines[i].clone()).collect();
        lines.sort();
        let mut rays = pointed;
        let mut i = 0;
        while i < rays.len() {
            let r = rays.remove(i);
            let rest = ConeGenerators { dim, rays: rays.clone(), lines: lines.clone(), independent: false };
            if !rest.contains(&r) {
                rays.insert(i, r);
                i += 1;
            }
        }
        Self::from_parts(dim, rays, lines)
    }

    /// Trusts that the generators are already minimal.
    pub(crate) fn from_parts(dim: usize, rays: Vec<Vec<Q>>, lines: Vec<Vec<Q>>) -> Self {
        let mut rays: Vec<Vec<Q>> = rays.iter().map(|r| primitive(r)).collect();
        let mut lines: Vec<Vec<Q>> = lines.iter().map(|l| primitive_line(l)).collect();
        rays.sort();
        rays.dedup();
        lines.sort();
        let mut all = rays.clone();
        all.extend(lines.iter().cloned());
        let independent = rank_q(&all) == all.len();
        ConeGenerators { dim, rays, lines, independent }
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        cone_member(self, v)
    }

    pub fn generators(&self) -> Vec<Vec<Q>> {
        let mut all = self.rays.clone();
        all.extend(self.lines.iter().cloned());
        all
    }

    pub fn subset_of(&self, other: &ConeGenerators) -> bool {
        self.rays.iter().all(|r| other.contains(r))
            && self.lines.iter().all(|l| other.contains(l) && other.contains(&neg(l)))
    }

    /// Equality of the generated sets, by mutual inclusion.
    pub fn same_cone(&self, other: &ConeGenerators) -> bool {
        self.dim == other.dim && self.subset_of(other) && other.subset_of(self)
    }

    pub fn describe(&self) -> String {
        let rays: Vec<String> = self.rays.iter().map(|r| fmt_vec(r)).collect();
        let lines: Vec<String> = self.lines.iter().map(|l| fmt_vec(l)).collect();
        match (rays.is_empty(), lines.is_empty()) {
            (true, true) => "{0}".into(),
            (false, true) => format!("cone{{{}}}", rays.join(", ")),
            (true, false) => format!("span{{{}}}", lines.join(", ")),
            (false, false) => format!("cone{{{}}} + span{{{}}}", rays.join(", "), lines.join(", ")),
        }
    }
}

/// Nonnegative ray coefficients and free line coefficients representing `v`, if any.
pub fn cone_combination(k: &ConeGenerators, v: &[Q]) -> Option<(Vec<Q>, Vec<Q>)> {
    if is_zero_vec(v) {
        return Some((vec![Q::zero(); k.rays.len()], vec![Q::zero(); k.lines.len()]));
    }
    let nr = k.rays.len();
    let mut kinds = vec![VarKind::NonNeg; nr];
    kinds.extend(vec![VarKind::Free; k.lines.len()]);
    let mut lp = Lp::new(kinds);
    for (i, vi) in v.iter().enumerate() {
        let row: Vec<Q> = k.rays.iter().chain(k.lines.iter()).map(|g| g[i].clone()).collect();
        lp.row(row, Cmp::Eq, vi.clone());
    }
    let x = lp.feasible_point()?;
    Some((x[..nr].to_vec(), x[nr..].to_vec()))
}

/// Exact membership `v ∈ cone(rays) + span(lines)`.
pub fn cone_member(k: &ConeGenerators, v: &[Q]) -> bool {
    cone_combination(k, v).is_some()
}
