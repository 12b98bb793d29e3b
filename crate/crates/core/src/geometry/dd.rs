use super::ConeGenerators;
use crate::linalg::{nullspace, rank_q};
use crate::rational::{dot, scale, sub, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Homogeneous H-representation `{v : <a, v> <= 0 (ineqs), <b, v> = 0 (eqs)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_qmat")]
    pub ineqs: Vec<Vec<Q>>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub eqs: Vec<Vec<Q>>,
}

impl HRep {
    pub fn contains(&self, v: &[Q]) -> bool {
        self.ineqs.iter().all(|a| !dot(a, v).is_positive()) && self.eqs.iter().all(|b| dot(b, v).is_zero())
    }

    /// Intersection of two cones in H-form.
    pub fn meet(&self, other: &HRep) -> HRep {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        HRep { dim: self.dim, ineqs, eqs }
    }
}

struct Ray {
    v: Vec<Q>,
    tight: Vec<usize>,
}

/// Double description: generators of a homogeneous H-cone.
pub fn dd_hrep_to_vrep(h: &HRep) -> ConeGenerators {
    let d = h.dim;
    let mut lines: Vec<Vec<Q>> = nullspace(&h.eqs, d);
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed: Vec<Vec<Q>> = Vec::new();
    for c in &h.ineqs {
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let k = processed.len();
        if let Some(p) = lines.iter().position(|l| !dot(c, l).is_zero()) {
            let mut l = lines.remove(p);
            let mut cl = dot(c, &l);
            if cl.is_positive() {
                l = scale(&l, &-Q::from_integer(1.into()));
                cl = -cl;
            }
            for m in lines.iter_mut() {
                let f = dot(c, m) / &cl;
                if !f.is_zero() {
                    *m = sub(m, &scale(&l, &f));
                }
            }
            for r in rays.iter_mut() {
                let f = dot(c, &r.v) / &cl;
                if !f.is_zero() {
                    r.v = sub(&r.v, &scale(&l, &f));
                }
                r.tight.push(k);
            }
            rays.push(Ray { v: l, tight: (0..k).collect() });
        } else {
            let vals: Vec<Q> = rays.iter().map(|r| dot(c, &r.v)).collect();
            let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            let target = d as isize - lines.len() as isize - 2;
            let mut fresh = Vec::new();
            for &p in &plus {
                for &n in &minus {
                    let common: Vec<usize> =
                        rays[p].tight.iter().filter(|t| rays[n].tight.contains(t)).cloned().collect();
                    let mut m: Vec<Vec<Q>> = h.eqs.clone();
                    m.extend(common.iter().map(|&t| processed[t].clone()));
                    let adjacent = target >= 0 && rank_q(&m) as isize == target;
                    if adjacent {
                        let v = sub(&scale(&rays[n].v, &vals[p]), &scale(&rays[p].v, &vals[n]));
                        let mut tight = common;
                        tight.push(k);
                        fresh.push(Ray { v, tight });
                    }
                }
            }
            let mut kept = Vec::new();
            for (i, mut r) in rays.into_iter().enumerate() {
                if vals[i].is_zero() {
                    r.tight.push(k);
                    kept.push(r);
                } else if vals[i].is_negative() {
                    kept.push(r);
                }
            }
            kept.extend(fresh);
            rays = kept;
        }
        processed.push(c.clone());
    }
    ConeGenerators::from_parts(d, rays.into_iter().map(|r| r.v).collect(), lines)
}

/// H-representation via the polar cone.
pub fn dd_vrep_to_hrep(k: &ConeGenerators) -> HRep {
    let polar = dd_hrep_to_vrep(&HRep { dim: k.dim, ineqs: k.rays.clone(), eqs: k.lines.clone() });
    HRep { dim: k.dim, ineqs: polar.rays, eqs: polar.lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec, q};

    #[test]
    fn quadrant() {
        let g = dd_hrep_to_vrep(&HRep { dim: 2, ineqs: vec![qvec(&[1, 0]), qvec(&[0, 1])], eqs: vec![] });
        assert_eq!(g.rays, vec![qvec(&[-1, 0]), qvec(&[0, -1])]);
        assert!(g.lines.is_empty());
    }

    #[test]
    fn plane() {
        let g = dd_hrep_to_vrep(&HRep { dim: 3, ineqs: vec![], eqs: vec![qvec(&[0, 0, 1])] });
        assert!(g.rays.is_empty());
        assert_eq!(g.lines, vec![qvec(&[0, 1, 0]), qvec(&[1, 0, 0])]);
    }

    #[test]
    fn line_to_equality() {
        let k = ConeGenerators::canonical(2, vec![], vec![qvec(&[1, 0])]);
        let h = dd_vrep_to_hrep(&k);
        assert!(h.ineqs.is_empty());
        assert_eq!(h.eqs, vec![qvec(&[0, 1])]);
    }

    #[test]
    fn regular_cone_of_wedge_pair() {
        let n1 = ConeGenerators::canonical(3, vec![qvec(&[-1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[0, 0, -1])], vec![]);
        let n2 = ConeGenerators::canonical(3, vec![vec![qf(1, 2), qf(-1, 2), qf(1, 2)], vec![qf(-1, 2), q(1), q(-1)]], vec![]);
        let meet = dd_vrep_to_hrep(&n1).meet(&dd_vrep_to_hrep(&n2));
        let g = dd_hrep_to_vrep(&meet);
        assert_eq!(g.rays, vec![qvec(&[-1, 2, -2]), qvec(&[0, 1, -1])]);
    }

    #[test]
    fn pointed_cone_in_3d() {
        // square pyramid: |v1| <= -v3, |v2| <= -v3
        let h = HRep {
            dim: 3,
            ineqs: vec![qvec(&[1, 0, 1]), qvec(&[-1, 0, 1]), qvec(&[0, 1, 1]), qvec(&[0, -1, 1])],
            eqs: vec![],
        };
        let g = dd_hrep_to_vrep(&h);
        assert_eq!(g.rays.len(), 4);
        assert!(g.lines.is_empty());
    }
}
