//! Admissible generator subsets `A = A^I ∪ A^E` of a limiting normal cone.

use crate::disjunctive::LimitingGenerators;
use crate::geometry::{dd_vrep_to_hrep, ConeGenerators, HRep};
use crate::linalg::independent_q;
use crate::lp::{Cmp, Lp, VarKind};
use crate::rational::{q, Q};
use num_traits::Zero;

/// One generator: a ray (`A^I`) or a line (`A^E`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub vector: Vec<Q>,
    pub line: bool,
}

/// Generators of a limiting cone and every nonempty linearly independent subset `A`
/// with `cone(A^I) + span(A^E)` inside the cone.
#[derive(Clone, Debug)]
pub struct BranchSet {
    pub dim: usize,
    pub generators: Vec<Generator>,
    pub options: Vec<Vec<usize>>,
}

impl BranchSet {
    pub fn new(nc: &LimitingGenerators) -> Self {
        let mut generators: Vec<Generator> = nc.rays.iter().map(|r| Generator { vector: r.clone(), line: false }).collect();
        generators.extend(nc.lines.iter().map(|l| Generator { vector: l.clone(), line: true }));
        let hreps: Vec<HRep> = nc.strata.iter().map(|s| dd_vrep_to_hrep(&s.cone)).collect();
        let cones = nc.cones();
        let mut options = Vec::new();
        let n = generators.len();
        let mut subset = Vec::new();
        grow(&generators, nc.dim, 0, n, &mut subset, &mut |s: &[usize]| {
            let k = span_cone(nc.dim, &generators, s);
            if cones.iter().any(|c| k.subset_of(c)) || covered(&k, &hreps) {
                options.push(s.to_vec());
            }
        });
        options.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        BranchSet { dim: nc.dim, generators, options }
    }

    pub fn cone(&self, option: usize) -> ConeGenerators {
        span_cone(self.dim, &self.generators, &self.options[option])
    }
}

fn grow(gens: &[Generator], dim: usize, from: usize, n: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    for k in from..n {
        cur.push(k);
        let vs: Vec<Vec<Q>> = cur.iter().map(|&i| gens[i].vector.clone()).collect();
        if independent_q(&vs) {
            visit(cur);
            if cur.len() < dim {
                grow(gens, dim, k + 1, n, cur, visit);
            }
        }
        cur.pop();
    }
}

fn span_cone(dim: usize, gens: &[Generator], subset: &[usize]) -> ConeGenerators {
    let rays = subset.iter().filter(|&&i| !gens[i].line).map(|&i| gens[i].vector.clone()).collect();
    let lines = subset.iter().filter(|&&i| gens[i].line).map(|&i| gens[i].vector.clone()).collect();
    ConeGenerators::canonical(dim, rays, lines)
}

/// Exact test `k ⊆ ∪ strata` by splitting `k` along the complement of each stratum in turn.
pub fn covered(k: &ConeGenerators, strata: &[HRep]) -> bool {
    region_covered(k, &mut Vec::new(), strata)
}

fn region_covered(k: &ConeGenerators, strict: &mut Vec<Vec<Q>>, strata: &[HRep]) -> bool {
    if !region_nonempty(k, strict) {
        return true;
    }
    let Some((first, rest)) = strata.split_first() else {
        return false;
    };
    let mut outside: Vec<Vec<Q>> = first.ineqs.clone();
    for e in &first.eqs {
        outside.push(e.clone());
        outside.push(e.iter().map(|x| -x).collect());
    }
    for a in outside {
        strict.push(a);
        let ok = region_covered(k, strict, rest);
        strict.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Whether some `x ∈ k` has `a·x > 0` for every strict row (all of `k` when there are none).
fn region_nonempty(k: &ConeGenerators, strict: &[Vec<Q>]) -> bool {
    if strict.is_empty() {
        return true;
    }
    let mut kinds = vec![VarKind::NonNeg; k.rays.len()];
    kinds.extend(vec![VarKind::Free; k.lines.len()]);
    let gens: Vec<&Vec<Q>> = k.rays.iter().chain(&k.lines).collect();
    if gens.is_empty() {
        return false;
    }
    let mut lp = Lp::new(kinds);
    for a in strict {
        let row: Vec<Q> = gens.iter().map(|g| g.iter().zip(a).fold(Q::zero(), |s, (x, y)| s + x * y)).collect();
        lp.row(row, Cmp::Ge, q(1));
    }
    lp.feasible_point().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunctive::{limiting_nc, DisjunctiveSet};
    use crate::rational::qvec;

    #[test]
    fn omega_e_options_at_origin() {
        let nc = limiting_nc(&DisjunctiveSet::omega_e(), &qvec(&[0, 0])).unwrap();
        let b = BranchSet::new(&nc);
        let sets: Vec<Vec<Vec<Q>>> =
            b.options.iter().map(|o| o.iter().map(|&i| b.generators[i].vector.clone()).collect()).collect();
        assert!(sets.contains(&vec![qvec(&[-1, 0]), qvec(&[0, -1])]));
        assert!(!sets.contains(&vec![qvec(&[1, 0]), qvec(&[0, 1])]));
        for s in &sets {
            assert!(s.len() <= 2);
        }
    }

    #[test]
    fn covering_across_two_strata() {
        let a = ConeGenerators::canonical(2, vec![qvec(&[1, 0]), qvec(&[0, 1])], vec![]);
        let b = ConeGenerators::canonical(2, vec![qvec(&[0, 1]), qvec(&[-1, 1])], vec![]);
        let k = ConeGenerators::canonical(2, vec![qvec(&[1, 0]), qvec(&[-1, 1])], vec![]);
        let h = vec![dd_vrep_to_hrep(&a), dd_vrep_to_hrep(&b)];
        assert!(covered(&k, &h));
        let wide = ConeGenerators::canonical(2, vec![qvec(&[1, 0]), qvec(&[-1, 0])], vec![]);
        assert!(!covered(&wide, &h[..1]));
        assert!(!covered(&ConeGenerators::canonical(2, vec![qvec(&[1, -1])], vec![]), &h));
    }
}
