//! Finite unions of convex polyhedra and their regular and limiting normal cones.

mod closed_form;
mod strata;

pub use closed_form::closed_form_nc;
pub use strata::{limiting_member, limiting_nc, LimitingGenerators, Stratum};

use crate::error::{Error, Result};
use crate::geometry::{dd_hrep_to_vrep, dd_vrep_to_hrep, normal_cone, project, project_f64, ConeGenerators, Polyhedron, Row};
use crate::rational::{q, unit, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetTag {
    Generic,
    BoxPair,
    OmegaE,
    OmegaV,
    OmegaS,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DisjunctiveSet {
    pub dim: usize,
    pub pieces: Vec<Polyhedron>,
    pub tag: SetTag,
}

/// Closed interval with optional infinite ends.
pub type Interval = (Option<Q>, Option<Q>);

impl DisjunctiveSet {
    pub fn new(dim: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Invalid("a disjunctive set needs at least one piece".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.dim != dim) {
            return Err(Error::Dimension { expected: dim, got: p.dim });
        }
        Ok(DisjunctiveSet { dim, pieces, tag: SetTag::Generic })
    }

    pub fn single(piece: Polyhedron) -> Self {
        DisjunctiveSet { dim: piece.dim, pieces: vec![piece], tag: SetTag::Generic }
    }

    /// Complementarity set `{y1 >= 0, y2 >= 0, y1 y2 = 0}`.
    pub fn omega_e() -> Self {
        let c1 = Polyhedron::new(2, vec![Row::le(vec![q(-1), q(0)], q(0)), Row::eq(vec![q(0), q(1)], q(0))]).unwrap();
        let c2 = Polyhedron::new(2, vec![Row::eq(vec![q(1), q(0)], q(0)), Row::le(vec![q(0), q(-1)], q(0))]).unwrap();
        DisjunctiveSet { dim: 2, pieces: vec![c1, c2], tag: SetTag::OmegaE }
    }

    /// Vanishing set `{y2 >= 0, y1 y2 <= 0}` as `(R_- x R_+) ∪ (R x {0})`.
    pub fn omega_v() -> Self {
        let c1 = Polyhedron::new(2, vec![Row::le(vec![q(1), q(0)], q(0)), Row::le(vec![q(0), q(-1)], q(0))]).unwrap();
        let c2 = Polyhedron::new(2, vec![Row::eq(vec![q(0), q(1)], q(0))]).unwrap();
        DisjunctiveSet { dim: 2, pieces: vec![c1, c2], tag: SetTag::OmegaV }
    }

    /// Switching set `{y1 y2 = 0}` as `(R x {0}) ∪ ({0} x R)`.
    pub fn omega_s() -> Self {
        let c1 = Polyhedron::new(2, vec![Row::eq(vec![q(0), q(1)], q(0))]).unwrap();
        let c2 = Polyhedron::new(2, vec![Row::eq(vec![q(1), q(0)], q(0))]).unwrap();
        DisjunctiveSet { dim: 2, pieces: vec![c1, c2], tag: SetTag::OmegaS }
    }

    /// Union of boxes, one interval per coordinate.
    pub fn boxes(boxes: &[Vec<Interval>]) -> Result<Self> {
        let dim = boxes.first().map_or(0, Vec::len);
        let mut pieces = Vec::new();
        for b in boxes {
            if b.len() != dim {
                return Err(Error::Dimension { expected: dim, got: b.len() });
            }
            let mut rows = Vec::new();
            for (k, (lo, hi)) in b.iter().enumerate() {
                match (lo, hi) {
                    (Some(l), Some(h)) if l == h => rows.push(Row::eq(unit(dim, k), l.clone())),
                    (Some(l), Some(h)) if l > h => return Err(Error::Invalid("empty interval".into())),
                    _ => {
                        if let Some(l) = lo {
                            rows.push(Row::le(crate::rational::neg(&unit(dim, k)), -l.clone()));
                        }
                        if let Some(h) = hi {
                            rows.push(Row::le(unit(dim, k), h.clone()));
                        }
                    }
                }
            }
            pieces.push(Polyhedron::new(dim, rows)?);
        }
        let mut set = DisjunctiveSet::new(dim, pieces)?;
        if dim == 2 && boxes.len() == 2 {
            set.tag = SetTag::BoxPair;
        }
        Ok(set)
    }

    pub fn contains(&self, y: &[Q]) -> bool {
        self.pieces.iter().any(|p| p.contains(y))
    }
}

/// Pieces within distance `tol` of `x` (exact membership when `tol` is zero).
pub fn active_pieces(set: &DisjunctiveSet, x: &[Q], tol: f64) -> Result<Vec<usize>> {
    if x.len() != set.dim {
        return Err(Error::Dimension { expected: set.dim, got: x.len() });
    }
    let mut out = Vec::new();
    for (r, p) in set.pieces.iter().enumerate() {
        let inside = if tol == 0.0 {
            p.contains(x)
        } else {
            matches!(project(p, x), Ok((_, d)) if d <= tol)
        };
        if inside {
            out.push(r);
        }
    }
    Ok(out)
}

/// Intersection of finitely many cones of the same dimension.
pub fn intersect_cones(dim: usize, cones: &[ConeGenerators]) -> ConeGenerators {
    match cones {
        [] => ConeGenerators::canonical(dim, vec![], (0..dim).map(|k| unit(dim, k)).collect()),
        [one] => one.clone(),
        _ => {
            let mut h = dd_vrep_to_hrep(&cones[0]);
            for c in &cones[1..] {
                h = h.meet(&dd_vrep_to_hrep(c));
            }
            dd_hrep_to_vrep(&h)
        }
    }
}

/// Regular normal cone: intersection of the normal cones of the pieces containing `x`.
pub fn regular_nc(set: &DisjunctiveSet, x: &[Q]) -> Result<ConeGenerators> {
    let active = active_pieces(set, x, 0.0)?;
    if active.is_empty() {
        let viol = set.pieces.iter().map(|p| p.max_violation(x)).min().unwrap_or_else(Q::zero);
        return Err(Error::Infeasible { violation: crate::rational::to_f64(&viol) });
    }
    let cones: Vec<ConeGenerators> =
        active.iter().map(|&r| normal_cone(&set.pieces[r], x)).collect::<Result<_>>()?;
    Ok(intersect_cones(set.dim, &cones))
}

/// Euclidean distance from `y` to the set (minimum over pieces).
pub fn distance(set: &DisjunctiveSet, y: &[f64]) -> f64 {
    set.pieces
        .iter()
        .filter_map(|p| project_f64(p, y).ok().map(|(_, d)| d))
        .fold(f64::INFINITY, f64::min)
}

/// Piece index attaining the distance, lowest index on ties.
pub fn nearest_piece(set: &DisjunctiveSet, y: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (r, p) in set.pieces.iter().enumerate() {
        if let Ok((_, d)) = project_f64(p, y) {
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((r, d));
            }
        }
    }
    best
}

pub(crate) fn sign_of(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec};

    pub(crate) fn twin_cones() -> DisjunctiveSet {
        let c1 = Polyhedron::new(
            3,
            vec![Row::le(qvec(&[-1, 0, 0]), q(0)), Row::le(qvec(&[0, 1, 0]), q(0)), Row::le(qvec(&[0, 0, -1]), q(0))],
        )
        .unwrap();
        let c2 = Polyhedron::new(
            3,
            vec![Row::le(vec![qf(1, 2), qf(-1, 2), qf(1, 2)], q(0)), Row::le(vec![qf(-1, 2), q(1), q(-1)], q(0))],
        )
        .unwrap();
        DisjunctiveSet::new(3, vec![c1, c2]).unwrap()
    }

    #[test]
    fn active_pieces_examples() {
        let e = DisjunctiveSet::omega_e();
        assert_eq!(active_pieces(&e, &qvec(&[0, 0]), 0.0).unwrap(), vec![0, 1]);
        assert_eq!(active_pieces(&e, &qvec(&[1, 0]), 0.0).unwrap(), vec![0]);
        assert_eq!(active_pieces(&twin_cones(), &qvec(&[0, 0, 0]), 0.0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn regular_cones() {
        let r = regular_nc(&twin_cones(), &qvec(&[0, 0, 0])).unwrap();
        assert_eq!(r.rays, vec![qvec(&[-1, 2, -2]), qvec(&[0, 1, -1])]);
        assert!(r.lines.is_empty());
        let e = regular_nc(&DisjunctiveSet::omega_e(), &qvec(&[0, 0])).unwrap();
        assert_eq!(e.rays, vec![qvec(&[-1, 0]), qvec(&[0, -1])]);
    }

    #[test]
    fn distances() {
        assert!((distance(&DisjunctiveSet::omega_e(), &[1.0, 1.0]) - 1.0).abs() < 1e-12);
        assert!((distance(&DisjunctiveSet::omega_v(), &[2.0, 3.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn box_shorthand_matches_omega_e() {
        let b = DisjunctiveSet::boxes(&[
            vec![(Some(q(0)), None), (Some(q(0)), Some(q(0)))],
            vec![(Some(q(0)), Some(q(0))), (Some(q(0)), None)],
        ])
        .unwrap();
        assert_eq!(b.tag, SetTag::BoxPair);
        for y in [[0, 0], [1, 0], [0, 2], [1, 1], [-1, 0]] {
            assert_eq!(b.contains(&qvec(&y)), DisjunctiveSet::omega_e().contains(&qvec(&y)));
        }
    }
}
