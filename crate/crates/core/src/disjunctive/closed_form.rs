use super::{sign_of, SetTag};
use crate::geometry::ConeGenerators;
use crate::rational::{neg, unit, Q};

/// Strata of the limiting normal cone of the tagged 2-D sets, read from fixed tables.
/// Returns `None` for untagged sets or points outside the set.
pub fn closed_form_nc(tag: SetTag, y: &[Q]) -> Option<Vec<ConeGenerators>> {
    if y.len() != 2 {
        return None;
    }
    let e1 = unit(2, 0);
    let e2 = unit(2, 1);
    let cone = |rays: Vec<Vec<Q>>| ConeGenerators::from_parts(2, rays, vec![]);
    let span = |v: Vec<Q>| ConeGenerators::from_parts(2, vec![], vec![v]);
    let zero = ConeGenerators::zero(2);
    let s = (sign_of(&y[0]), sign_of(&y[1]));
    let strata = match tag {
        SetTag::OmegaE => match s {
            (0, 0) => vec![cone(vec![neg(&e1), neg(&e2)]), span(e2), span(e1)],
            (1, 0) => vec![span(e2)],
            (0, 1) => vec![span(e1)],
            _ => return None,
        },
        SetTag::OmegaV => match s {
            (0, 0) => vec![cone(vec![neg(&e2)]), span(e2), cone(vec![e1]), zero],
            (-1, 1) => vec![zero],
            (-1, 0) => vec![cone(vec![neg(&e2)]), zero],
            (0, 1) => vec![cone(vec![e1]), zero],
            (1, 0) => vec![span(e2)],
            _ => return None,
        },
        SetTag::OmegaS => match s {
            (0, 0) => vec![zero, span(e1), span(e2)],
            (_, 0) => vec![span(e2)],
            (0, _) => vec![span(e1)],
            _ => return None,
        },
        SetTag::Generic | SetTag::BoxPair => return None,
    };
    let mut strata = strata;
    strata.sort_by(|a, b| (&a.rays, &a.lines).cmp(&(&b.rays, &b.lines)));
    Some(strata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunctive::{limiting_nc, DisjunctiveSet};
    use crate::rational::{qf, qvec};

    fn same_strata(a: &[ConeGenerators], b: &[ConeGenerators]) -> bool {
        a.len() == b.len()
            && a.iter().all(|x| b.iter().any(|y| x.same_cone(y)))
            && b.iter().all(|y| a.iter().any(|x| x.same_cone(y)))
    }

    #[test]
    fn single_stratum_off_origin() {
        let s = closed_form_nc(SetTag::OmegaE, &qvec(&[1, 0])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].lines, vec![qvec(&[0, 1])]);
        assert!(closed_form_nc(SetTag::OmegaE, &qvec(&[1, 1])).is_none());
    }

    #[test]
    fn tables_match_generic_on_grid() {
        for set in [DisjunctiveSet::omega_e(), DisjunctiveSet::omega_v(), DisjunctiveSet::omega_s()] {
            for i in -4..=4 {
                for j in -4..=4 {
                    let y = vec![qf(i, 2), qf(j, 2)];
                    let closed = closed_form_nc(set.tag, &y);
                    assert_eq!(closed.is_some(), set.contains(&y));
                    if let Some(closed) = closed {
                        let generic = limiting_nc(&set, &y).unwrap().cones();
                        assert!(same_strata(&closed, &generic), "{:?} at {:?}", set.tag, y);
                    }
                }
            }
        }
    }
}
