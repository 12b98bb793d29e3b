use super::{active_pieces, intersect_cones, sign_of, DisjunctiveSet};
use crate::error::{Error, Result};
use crate::geometry::{ConeGenerators, RowKind};
use crate::lp::{Cmp, Lp, VarKind};
use crate::rational::{add, dot, norm1, primitive, primitive_line, q, scale, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// One local piece of the limiting normal cone: the regular normal cone shared by a realizable cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(with = "crate::rational::serde_qvec")]
    pub point: Vec<Q>,
    pub occupied: Vec<usize>,
    pub cone: ConeGenerators,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitingGenerators {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_qmat")]
    pub rays: Vec<Vec<Q>>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub lines: Vec<Vec<Q>>,
    pub strata: Vec<Stratum>,
}

impl LimitingGenerators {
    pub fn contains(&self, v: &[Q]) -> bool {
        self.strata.iter().any(|s| s.cone.contains(v))
    }

    pub fn cones(&self) -> Vec<ConeGenerators> {
        self.strata.iter().map(|s| s.cone.clone()).collect()
    }
}

struct LocalRow {
    piece: usize,
    plane: usize,
    orient: i8,
    kind: RowKind,
    normal: Vec<Q>,
}

struct Search<'a> {
    dim: usize,
    planes: Vec<Vec<Q>>,
    rows: Vec<LocalRow>,
    pieces: &'a [usize],
    found: Vec<(Vec<i8>, Vec<Q>)>,
}

impl Search<'_> {
    fn realize(&self, signs: &[i8]) -> Option<Vec<Q>> {
        let mut lp = Lp::new(vec![VarKind::Free; self.dim]);
        for (h, &s) in self.planes.iter().zip(signs) {
            match s {
                0 => lp.row(h.clone(), Cmp::Eq, Q::zero()),
                -1 => lp.row(h.clone(), Cmp::Le, -Q::one()),
                _ => lp.row(h.clone(), Cmp::Ge, Q::one()),
            };
        }
        lp.feasible_point()
    }

    fn piece_possible(&self, piece: usize, signs: &[i8]) -> bool {
        self.rows.iter().filter(|r| r.piece == piece && r.plane < signs.len()).all(|r| {
            let s = signs[r.plane] * r.orient;
            match r.kind {
                RowKind::Eq => s == 0,
                RowKind::Le => s <= 0,
            }
        })
    }

    fn dfs(&mut self, signs: &mut Vec<i8>) {
        if !self.pieces.iter().any(|&p| self.piece_possible(p, signs)) {
            return;
        }
        let Some(d) = self.realize(signs) else { return };
        if signs.len() == self.planes.len() {
            self.found.push((signs.clone(), d));
            return;
        }
        for s in [0i8, -1, 1] {
            signs.push(s);
            self.dfs(signs);
            signs.pop();
        }
    }
}

/// Radius within which rows inactive at `xbar` stay inactive and inactive pieces stay out of reach.
fn safe_radius(set: &DisjunctiveSet, xbar: &[Q], active: &[usize]) -> Q {
    let mut delta: Option<Q> = None;
    let mut update = |v: Q| {
        if delta.as_ref().map_or(true, |d| v < *d) {
            delta = Some(v);
        }
    };
    for (r, p) in set.pieces.iter().enumerate() {
        if active.contains(&r) {
            for row in &p.rows {
                let slack = -row.excess(xbar);
                if row.kind == RowKind::Le && slack.is_positive() {
                    update(slack / norm1(&row.normal));
                }
            }
        } else {
            let worst = p
                .rows
                .iter()
                .map(|row| {
                    let e = row.excess(xbar);
                    let v = if row.kind == RowKind::Eq { e.abs() } else { e };
                    v / norm1(&row.normal)
                })
                .max()
                .unwrap_or_else(Q::zero);
            if worst.is_positive() {
                update(worst);
            }
        }
    }
    delta.unwrap_or_else(Q::one) / q(2)
}

/// Limiting normal cone at `xbar` as a union of regular normal cones over the realizable local strata.
pub fn limiting_nc(set: &DisjunctiveSet, xbar: &[Q]) -> Result<LimitingGenerators> {
    let active = active_pieces(set, xbar, 0.0)?;
    if active.is_empty() {
        return Err(Error::Invalid("point is not in the set".into()));
    }
    let mut planes: Vec<Vec<Q>> = Vec::new();
    let mut rows = Vec::new();
    for &r in &active {
        for row in &set.pieces[r].rows {
            if row.kind == RowKind::Le && !row.excess(xbar).is_zero() {
                continue;
            }
            let canon = primitive_line(&row.normal);
            let plane = match planes.iter().position(|p| *p == canon) {
                Some(i) => i,
                None => {
                    planes.push(canon.clone());
                    planes.len() - 1
                }
            };
            let orient = sign_of(&dot(&row.normal, &canon));
            rows.push(LocalRow { piece: r, plane, orient, kind: row.kind, normal: row.normal.clone() });
        }
    }
    let mut search = Search { dim: set.dim, planes, rows, pieces: &active, found: Vec::new() };
    search.dfs(&mut Vec::new());
    let delta = safe_radius(set, xbar, &active);

    let mut strata: Vec<Stratum> = Vec::new();
    for (signs, d) in &search.found {
        let occupied: Vec<usize> = active.iter().copied().filter(|&p| search.piece_possible(p, signs)).collect();
        if occupied.is_empty() {
            continue;
        }
        let cones: Vec<ConeGenerators> = occupied
            .iter()
            .map(|&p| {
                let mut rays = Vec::new();
                let mut lines = Vec::new();
                for r in search.rows.iter().filter(|r| r.piece == p && signs[r.plane] == 0) {
                    match r.kind {
                        RowKind::Le => rays.push(r.normal.clone()),
                        RowKind::Eq => lines.push(r.normal.clone()),
                    }
                }
                ConeGenerators::canonical(set.dim, rays, lines)
            })
            .collect();
        let cone = intersect_cones(set.dim, &cones);
        if strata.iter().any(|s| s.cone.same_cone(&cone)) {
            continue;
        }
        let n = norm1(d);
        let point = if n.is_zero() { xbar.to_vec() } else { add(xbar, &scale(d, &(&delta / (q(2) * n)))) };
        strata.push(Stratum { point, occupied, cone });
    }
    strata.sort_by(|a, b| (&a.cone.rays, &a.cone.lines).cmp(&(&b.cone.rays, &b.cone.lines)));

    let mut rays: Vec<Vec<Q>> = Vec::new();
    let mut lines: Vec<Vec<Q>> = Vec::new();
    for s in &strata {
        rays.extend(s.cone.rays.iter().map(|r| primitive(r)));
        lines.extend(s.cone.lines.iter().map(|l| primitive_line(l)));
    }
    rays.sort();
    rays.dedup();
    lines.sort();
    lines.dedup();
    Ok(LimitingGenerators { dim: set.dim, rays, lines, strata })
}

/// Membership in the limiting normal cone at `xbar`.
pub fn limiting_member(set: &DisjunctiveSet, xbar: &[Q], v: &[Q]) -> Result<bool> {
    Ok(limiting_nc(set, xbar)?.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunctive::{regular_nc, tests::twin_cones};
    use crate::rational::qvec;

    #[test]
    fn twin_cones_limiting_generators() {
        let l = limiting_nc(&twin_cones(), &qvec(&[0, 0, 0])).unwrap();
        let all: Vec<Vec<Q>> = l.rays.iter().chain(&l.lines).cloned().collect();
        let expected = [[-1, 0, 0], [-1, 2, -2], [0, 0, -1], [0, 1, -1], [0, 1, 0], [1, -1, 1]];
        assert_eq!(all, expected.iter().map(|v| qvec(v)).collect::<Vec<_>>());
        assert!(l.lines.is_empty());
    }

    #[test]
    fn omega_e_origin() {
        let e = DisjunctiveSet::omega_e();
        let l = limiting_nc(&e, &qvec(&[0, 0])).unwrap();
        assert_eq!(l.rays, vec![qvec(&[-1, 0]), qvec(&[0, -1])]);
        assert_eq!(l.lines, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
        assert_eq!(l.strata.len(), 3);
        assert!(l.contains(&qvec(&[-1, -1])));
        assert!(!l.contains(&qvec(&[1, 1])));
    }

    #[test]
    fn omega_s_origin() {
        let s = DisjunctiveSet::omega_s();
        assert!(limiting_member(&s, &qvec(&[0, 0]), &qvec(&[3, 0])).unwrap());
        assert!(!limiting_member(&s, &qvec(&[0, 0]), &qvec(&[1, 1])).unwrap());
    }

    #[test]
    fn representative_points_reproduce_strata() {
        for (set, x) in [(twin_cones(), qvec(&[0, 0, 0])), (DisjunctiveSet::omega_v(), qvec(&[0, 0]))] {
            let l = limiting_nc(&set, &x).unwrap();
            for s in &l.strata {
                assert!(regular_nc(&set, &s.point).unwrap().same_cone(&s.cone));
            }
        }
    }
}
