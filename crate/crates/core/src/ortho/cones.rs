//! Closed-form normal cones of the two-dimensional `Ω` sets and the multiplier sign conditions.

use super::{IndexClass, OrthoKind};
use crate::disjunctive::{LimitingGenerators, Stratum};
use crate::error::{Error, Result};
use crate::geometry::ConeGenerators;
use crate::rational::{primitive, primitive_line, q, unit, Q};
use num_traits::{One, Signed, Zero};

/// Closed intervals that occur as coordinate factors of the boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Interval {
    Nonneg,
    Nonpos,
    Zero,
    Real,
}

/// One-dimensional cones: `{0}`, `R_+`, `R_-`, `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cone1 {
    Zero,
    Pos,
    Neg,
    Full,
}

impl Interval {
    fn contains(self, t: &Q) -> bool {
        match self {
            Interval::Nonneg => !t.is_negative(),
            Interval::Nonpos => !t.is_positive(),
            Interval::Zero => t.is_zero(),
            Interval::Real => true,
        }
    }

    fn normal(self, t: &Q) -> Cone1 {
        match self {
            Interval::Zero => Cone1::Full,
            Interval::Nonneg if t.is_zero() => Cone1::Neg,
            Interval::Nonpos if t.is_zero() => Cone1::Pos,
            _ => Cone1::Zero,
        }
    }
}

impl Cone1 {
    fn meet(self, other: Cone1) -> Cone1 {
        use Cone1::*;
        match (self, other) {
            (Full, c) | (c, Full) => c,
            (a, b) if a == b => a,
            _ => Zero,
        }
    }
}

fn boxes(kind: OrthoKind) -> [[Interval; 2]; 2] {
    use Interval::*;
    match kind {
        OrthoKind::Mpec => [[Nonneg, Zero], [Zero, Nonneg]],
        OrthoKind::Mpvc => [[Nonpos, Nonneg], [Real, Zero]],
        OrthoKind::Mpsc => [[Real, Zero], [Zero, Real]],
    }
}

fn occupied(kind: OrthoKind, y: &[Q]) -> Vec<usize> {
    (0..2).filter(|&r| boxes(kind)[r].iter().zip(y).all(|(iv, t)| iv.contains(t))).collect()
}

fn regular(kind: OrthoKind, y: &[Q], pieces: &[usize]) -> ConeGenerators {
    let mut rays = Vec::new();
    let mut lines = Vec::new();
    for k in 0..2 {
        let c = pieces.iter().fold(Cone1::Full, |acc, &r| acc.meet(boxes(kind)[r][k].normal(&y[k])));
        let e = unit(2, k);
        match c {
            Cone1::Zero => {}
            Cone1::Pos => rays.push(e),
            Cone1::Neg => rays.push(crate::rational::neg(&e)),
            Cone1::Full => lines.push(e),
        }
    }
    ConeGenerators::from_parts(2, rays, lines)
}

/// Limiting normal cone of `Ω` at `y` as the regular cones of the neighbouring cells,
/// using only the box structure of the two pieces.
pub fn omega_nc(kind: OrthoKind, y: &[Q]) -> Result<LimitingGenerators> {
    if y.len() != 2 {
        return Err(Error::Dimension { expected: 2, got: y.len() });
    }
    if occupied(kind, y).is_empty() {
        return Err(Error::Invalid("point is not in the set".into()));
    }
    let mut t = Q::one();
    for v in y.iter().filter(|v| !v.is_zero()) {
        if v.abs() < t {
            t = v.abs();
        }
    }
    let t = t / q(2);
    let mut strata: Vec<Stratum> = Vec::new();
    for o1 in [0i64, -1, 1] {
        for o2 in [0i64, -1, 1] {
            let point = vec![&y[0] + &t * q(o1), &y[1] + &t * q(o2)];
            let occ = occupied(kind, &point);
            if occ.is_empty() {
                continue;
            }
            let cone = regular(kind, &point, &occ);
            if !strata.iter().any(|s| s.cone == cone) {
                strata.push(Stratum { point, occupied: occ, cone });
            }
        }
    }
    strata.sort_by(|a, b| (&a.cone.rays, &a.cone.lines).cmp(&(&b.cone.rays, &b.cone.lines)));
    let mut rays: Vec<Vec<Q>> = strata.iter().flat_map(|s| s.cone.rays.iter().map(|r| primitive(r))).collect();
    let mut lines: Vec<Vec<Q>> = strata.iter().flat_map(|s| s.cone.lines.iter().map(|l| primitive_line(l))).collect();
    rays.sort();
    rays.dedup();
    lines.sort();
    lines.dedup();
    Ok(LimitingGenerators { dim: 2, rays, lines, strata })
}

/// Whether `(λ^G_i, λ^H_i)` satisfies the sign condition of its index class; `relaxed` selects
/// the piecewise variant.
pub fn admissible_multiplier(kind: OrthoKind, class: IndexClass, relaxed: bool, lg: &Q, lh: &Q) -> bool {
    use IndexClass::*;
    let (gz, hz) = (lg.is_zero(), lh.is_zero());
    match (kind, class) {
        (OrthoKind::Mpec, ZeroZero) if relaxed => !lg.is_positive() || !lh.is_positive(),
        (OrthoKind::Mpec, ZeroZero) => (lg.is_negative() && lh.is_negative()) || gz || hz,
        (OrthoKind::Mpec, ZeroPlus) | (OrthoKind::Mpsc, OnlyG) => hz,
        (OrthoKind::Mpec | OrthoKind::Mpvc, PlusZero) | (OrthoKind::Mpsc, OnlyH) => gz,
        (OrthoKind::Mpvc, ZeroZero) if relaxed => gz || (lg.is_positive() && !lh.is_positive()),
        (OrthoKind::Mpvc, ZeroZero) => (gz || hz) && !lg.is_negative(),
        (OrthoKind::Mpvc, ZeroPlus) => hz && !lg.is_negative(),
        (OrthoKind::Mpvc, MinusZero) => gz && !lh.is_positive(),
        (OrthoKind::Mpvc, MinusPlus) => gz && hz,
        (OrthoKind::Mpsc, Both) => gz || hz,
        _ => false,
    }
}
