//! Sampled sequences `x̄ + r_j d` and rank trends of gradient families along them.

use crate::expr::{Expr, VectorFunc};
use crate::linalg::rank_f64;
use crate::rational::{add, from_f64, qf, scale, to_f64, unit, Q};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceScheme {
    #[serde(with = "crate::rational::serde_q")]
    pub r0: Q,
    /// Radii `r0 * 2^-j` for `j = 0..=levels`.
    pub levels: usize,
    /// Random unit directions added to the `±e_k` axes.
    pub random_directions: usize,
    pub seed: u64,
    /// Dependence must hold for every `j >= tail_start`.
    pub tail_start: usize,
    /// Independence on this many trailing radii counts as a failing sequence.
    pub witness_run: usize,
}

impl Default for SequenceScheme {
    fn default() -> Self {
        SequenceScheme { r0: qf(1, 100), levels: 20, random_directions: 64, seed: 0, tail_start: 5, witness_run: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RankMode {
    Exact,
    Float { tol: f64 },
}

impl Default for RankMode {
    fn default() -> Self {
        RankMode::Exact
    }
}

impl SequenceScheme {
    pub fn radii(&self) -> Vec<Q> {
        let mut r = self.r0.clone();
        let half = qf(1, 2);
        (0..=self.levels)
            .map(|_| {
                let cur = r.clone();
                r = &r * &half;
                cur
            })
            .collect()
    }

    /// `+e_1, -e_1, ..., +e_d, -e_d`, then seeded random unit vectors (rational, within 1e-12 of unit length).
    pub fn directions(&self, dim: usize) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for k in 0..dim {
            out.push(unit(dim, k));
            out.push(scale(&unit(dim, k), &-Q::one()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        while out.len() < 2 * dim + self.random_directions && dim > 0 {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-6 {
                continue;
            }
            out.push(v.iter().map(|x| from_f64(x / n, 48)).collect());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum At {
    Center,
    Sample(usize, usize),
}

/// Outcome of one family along one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trend {
    /// Dependent (or rank-constant) on every radius of the tail.
    Stable,
    /// Independent (or rank-changed) on every trailing radius.
    Broken { ranks: Vec<usize> },
    Marginal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOutcome {
    Stable,
    Broken { direction: usize, ranks: Vec<usize> },
    Marginal { direction: usize },
}

const EMPTY_SUBGRADIENTS: &[Vec<Q>] = &[];

/// Gradient atoms evaluated lazily at the center and on the sample grid.
pub struct Engine<'h> {
    pub dim: usize,
    pub center: Vec<Q>,
    pub scheme: SequenceScheme,
    pub directions: Vec<Vec<Q>>,
    pub radii: Vec<Q>,
    rank_mode: RankMode,
    atoms: Vec<AtomFn>,
    ids: HashMap<AtomKey, usize>,
    cache: HashMap<(usize, At), Vec<Q>>,
    points: HashMap<At, Vec<Q>>,
    hook: Option<&'h dyn SubgradientHook>,
}

/// Supplies subgradient samples of inequality `i` at a point (for nonsmooth `g`).
pub trait SubgradientHook {
    fn subgradients(&self, i: usize, x: &[Q]) -> Vec<Vec<Q>>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum AtomKey {
    Smooth(Vec<Expr>),
    Sub(usize, Vec<Q>),
}

enum AtomFn {
    Smooth(VectorFunc),
    Sub(usize, Vec<Q>),
}

impl<'h> Engine<'h> {
    pub fn new(dim: usize, center: Vec<Q>, scheme: SequenceScheme, rank_mode: RankMode) -> Self {
        let directions = scheme.directions(dim);
        let radii = scheme.radii();
        Engine {
            dim,
            center,
            scheme,
            directions,
            radii,
            rank_mode,
            atoms: Vec::new(),
            ids: HashMap::new(),
            cache: HashMap::new(),
            points: HashMap::new(),
            hook: None,
        }
    }

    pub fn with_hook(mut self, hook: Option<&'h dyn SubgradientHook>) -> Self {
        self.hook = hook;
        self
    }

    /// Atom whose vector at `x` is `∇e(x)`.
    pub fn gradient_atom(&mut self, e: &Expr) -> usize {
        self.func_atom(&e.gradient(self.dim))
    }

    /// Atom whose vector at `x` is `f(x)`.
    pub fn func_atom(&mut self, f: &VectorFunc) -> usize {
        let key = AtomKey::Smooth(f.components.clone());
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        self.atoms.push(AtomFn::Smooth(f.clone()));
        self.ids.insert(key, self.atoms.len() - 1);
        self.atoms.len() - 1
    }

    /// Radius indices reported with a broken trend, smallest index first.
    pub fn witness_levels(&self) -> std::ops::RangeInclusive<usize> {
        let levels = self.scheme.levels;
        (levels + 1).saturating_sub(self.scheme.witness_run.max(1))..=levels
    }

    /// Atom following the hook's subgradient of `g_i` nearest to `choice`.
    pub fn subgradient_atom(&mut self, i: usize, choice: Vec<Q>) -> usize {
        let key = AtomKey::Sub(i, choice.clone());
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        self.atoms.push(AtomFn::Sub(i, choice));
        self.ids.insert(key, self.atoms.len() - 1);
        self.atoms.len() - 1
    }

    pub fn point(&mut self, at: At) -> Vec<Q> {
        if let Some(p) = self.points.get(&at) {
            return p.clone();
        }
        let p = match at {
            At::Center => self.center.clone(),
            At::Sample(d, j) => add(&self.center, &scale(&self.directions[d], &self.radii[j])),
        };
        self.points.insert(at, p.clone());
        p
    }

    pub fn vector(&mut self, atom: usize, at: At) -> Vec<Q> {
        if let Some(v) = self.cache.get(&(atom, at)) {
            return v.clone();
        }
        let x = self.point(at);
        let v = match &self.atoms[atom] {
            AtomFn::Smooth(grad) => grad.eval(&x),
            AtomFn::Sub(i, choice) => {
                let samples = self.hook.map_or(EMPTY_SUBGRADIENTS.to_vec(), |h| h.subgradients(*i, &x));
                nearest(&samples, choice).unwrap_or_else(|| choice.clone())
            }
        };
        self.cache.insert((atom, at), v.clone());
        v
    }

    pub fn vectors(&mut self, atoms: &[usize], at: At) -> Vec<Vec<Q>> {
        atoms.iter().map(|&a| self.vector(a, at)).collect()
    }

    pub fn rank(&mut self, atoms: &[usize], at: At) -> usize {
        let vs = self.vectors(atoms, at);
        match self.rank_mode {
            RankMode::Exact => crate::linalg::rank_q(&vs),
            RankMode::Float { tol } => {
                let f: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().map(to_f64).collect()).collect();
                rank_f64(&f, tol)
            }
        }
    }

    /// `broken(rank)` decides failure at one radius; radii are scanned from the smallest upward.
    fn trend(&mut self, atoms: &[usize], dir: usize, broken: &dyn Fn(usize) -> bool) -> Trend {
        let levels = self.scheme.levels;
        let run_start = *self.witness_levels().start();
        let lo = self.scheme.tail_start.min(run_start);
        let mut run_state: Option<bool> = None;
        let mut ranks = Vec::new();
        for j in (lo..=levels).rev() {
            let r = self.rank(atoms, At::Sample(dir, j));
            ranks.push(r);
            let b = broken(r);
            if j >= run_start {
                if *run_state.get_or_insert(b) != b {
                    return Trend::Marginal;
                }
                if j == run_start && b {
                    ranks.reverse();
                    return Trend::Broken { ranks };
                }
            } else if b {
                return Trend::Marginal;
            }
        }
        Trend::Stable
    }

    fn outcome(&mut self, atoms: &[usize], broken: &dyn Fn(usize) -> bool) -> FamilyOutcome {
        let mut marginal = None;
        for dir in 0..self.directions.len() {
            match self.trend(atoms, dir, broken) {
                Trend::Broken { ranks } => return FamilyOutcome::Broken { direction: dir, ranks },
                Trend::Marginal => {
                    marginal.get_or_insert(dir);
                }
                Trend::Stable => {}
            }
        }
        match marginal {
            Some(direction) => FamilyOutcome::Marginal { direction },
            None => FamilyOutcome::Stable,
        }
    }

    /// Stable means linearly dependent along every sampled sequence.
    pub fn dependence(&mut self, atoms: &[usize]) -> FamilyOutcome {
        let n = atoms.len();
        self.outcome(atoms, &|r| r == n)
    }

    /// Stable means the rank equals the rank at the center along every sampled sequence.
    pub fn constancy(&mut self, atoms: &[usize]) -> FamilyOutcome {
        let r0 = self.rank(atoms, At::Center);
        self.outcome(atoms, &|r| r != r0)
    }
}

fn nearest(samples: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    samples
        .iter()
        .map(|s| {
            let d: f64 = s.iter().zip(target).map(|(a, b)| (to_f64(a) - to_f64(b)).powi(2)).sum();
            (d, s)
        })
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(_, s)| s.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rational::qvec;

    #[test]
    fn directions_are_deterministic_and_unit() {
        let s = SequenceScheme::default();
        let a = s.directions(3);
        assert_eq!(a, s.directions(3));
        assert_eq!(a.len(), 6 + 64);
        for d in &a {
            let n: f64 = d.iter().map(|x| to_f64(x).powi(2)).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.radii()[1], qf(1, 200));
    }

    #[test]
    fn rank_jump_of_square() {
        let vars = vec!["x".to_string()];
        let mut e = Engine::new(1, qvec(&[0]), SequenceScheme::default(), RankMode::Exact);
        let a = e.gradient_atom(&parse("x^2", &vars).unwrap());
        assert!(matches!(e.constancy(&[a]), FamilyOutcome::Broken { direction: 0, .. }));
        let b = e.gradient_atom(&parse("x", &vars).unwrap());
        assert_eq!(e.constancy(&[b]), FamilyOutcome::Stable);
        assert_eq!(e.constancy(&[]), FamilyOutcome::Stable);
    }
}
