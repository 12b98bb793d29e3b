//! Empirical local error-bound moduli from sampled residuals and distance upper bounds.

use crate::error::{Error, Result};
use crate::expr::VectorFunc;
use crate::geometry::{project_rows, RowKind};
use crate::model::{cartesian, Partition, Program, Residual, ResidualNorm, FEASIBILITY_TOL};
use crate::rational::{to_f64, Q};
use num_traits::{FromPrimitive, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub iterations: usize,
    pub feasibility_tol: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { starts: 8, iterations: 200, feasibility_tol: FEASIBILITY_TOL }
    }
}

/// A feasible point and its distance from the query point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibleDistance {
    pub distance: f64,
    pub point: Vec<f64>,
    pub partition: Option<Partition>,
    pub exact: bool,
}

type Rows<F> = Vec<(Vec<F>, F, RowKind)>;

fn subsystem_affine(p: &Program, part: &[usize]) -> bool {
    p.g.iter().chain(&p.h).all(|e| e.degree() <= 1) && p.blocks.iter().all(|b| b.map.is_affine()) && part.len() == p.blocks.len()
}

/// Rows of the subsystem in `x`-space; needs affine data. `None` when a constant row is violated.
fn affine_rows(p: &Program, part: &[usize]) -> Option<Rows<Q>> {
    let d = p.dim();
    let mut rows = Vec::new();
    let push = |n: Vec<Q>, rhs: Q, kind: RowKind, rows: &mut Rows<Q>| -> bool {
        if n.iter().all(Zero::is_zero) {
            return match kind {
                RowKind::Le => !rhs.is_negative(),
                RowKind::Eq => rhs.is_zero(),
            };
        }
        rows.push((n, rhs, kind));
        true
    };
    for g in &p.g {
        let (a, c) = g.affine_parts(d)?;
        if !push(a, -c, RowKind::Le, &mut rows) {
            return None;
        }
    }
    for h in &p.h {
        let (a, c) = h.affine_parts(d)?;
        if !push(a, -c, RowKind::Eq, &mut rows) {
            return None;
        }
    }
    for (b, &r) in p.blocks.iter().zip(part) {
        let parts: Vec<(Vec<Q>, Q)> = b.map.components.iter().map(|c| c.affine_parts(d)).collect::<Option<_>>()?;
        for row in &b.set.pieces[r].rows {
            let mut n = vec![Q::zero(); d];
            let mut off = Q::zero();
            for (k, (a, c)) in parts.iter().enumerate() {
                for (nj, aj) in n.iter_mut().zip(a) {
                    *nj += &row.normal[k] * aj;
                }
                off += &row.normal[k] * c;
            }
            if !push(n, &row.rhs - off, row.kind, &mut rows) {
                return None;
            }
        }
    }
    Some(rows)
}

fn sub_violation(p: &Program, part: &[usize], z: &[f64]) -> f64 {
    let mut v: f64 = 0.0;
    for g in &p.g {
        v = v.max(g.eval_f64(z));
    }
    for h in &p.h {
        v = v.max(h.eval_f64(z).abs());
    }
    for (b, &r) in p.blocks.iter().zip(part) {
        let y = b.map.eval_f64(z);
        for (n, rhs, kind) in b.set.pieces[r].rows_f64() {
            let e: f64 = n.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() - rhs;
            v = v.max(match kind {
                RowKind::Le => e,
                RowKind::Eq => e.abs(),
            });
        }
    }
    v
}

/// Rows of the subsystem linearized at `z`; constant violated rows make it `None`.
fn linearized_rows(p: &Program, part: &[usize], z: &[f64], jacs: &[VectorFunc]) -> Option<Rows<f64>> {
    let d = p.dim();
    let mut rows = Vec::new();
    let mut push = |n: Vec<f64>, rhs: f64, kind: RowKind| -> bool {
        if n.iter().all(|x| x.abs() < 1e-14) {
            return match kind {
                RowKind::Le => rhs >= -1e-12,
                RowKind::Eq => rhs.abs() <= 1e-12,
            };
        }
        rows.push((n, rhs, kind));
        true
    };
    let dotz = |a: &[f64]| a.iter().zip(z).map(|(x, y)| x * y).sum::<f64>();
    for (e, kind) in p.g.iter().map(|g| (g, RowKind::Le)).chain(p.h.iter().map(|h| (h, RowKind::Eq))) {
        let a = e.gradient(d).eval_f64(z);
        let rhs = dotz(&a) - e.eval_f64(z);
        if !push(a, rhs, kind) {
            return None;
        }
    }
    for ((b, &r), jac) in p.blocks.iter().zip(part).zip(jacs) {
        let y = b.map.eval_f64(z);
        let j: Vec<Vec<f64>> = (0..b.map.output_dim())
            .map(|k| (0..d).map(|c| jac.components[k * d + c].eval_f64(z)).collect())
            .collect();
        for (n, rhs, kind) in b.set.pieces[r].rows_f64() {
            let mut a = vec![0.0; d];
            for (k, nk) in n.iter().enumerate() {
                for c in 0..d {
                    a[c] += nk * j[k][c];
                }
            }
            let ny: f64 = n.iter().zip(&y).map(|(x, w)| x * w).sum();
            let r_lin = rhs - ny + dotz(&a);
            if !push(a, r_lin, kind) {
                return None;
            }
        }
    }
    Some(rows)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn flat_jacobian(f: &VectorFunc) -> VectorFunc {
    let d = f.input_dim;
    let mut comps = Vec::new();
    for c in &f.components {
        for k in 0..d {
            comps.push(c.derivative(k));
        }
    }
    VectorFunc::new(comps, d)
}

/// Successive linearization: project `x` onto the subsystem linearized at the current iterate.
fn linearized_search(p: &Program, part: &[usize], x: &[f64], start: &[f64], budget: &Budget) -> Option<Vec<f64>> {
    let jacs: Vec<VectorFunc> = p.blocks.iter().map(|b| flat_jacobian(&b.map)).collect();
    let mut z = start.to_vec();
    for _ in 0..budget.iterations {
        if sub_violation(p, part, &z) <= budget.feasibility_tol * 1e-3 {
            break;
        }
        let rows = linearized_rows(p, part, &z, &jacs)?;
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let (next, _) = project_rows(&rows, x, 1e-10 * scale)?;
        let step = dist(&next, &z);
        z = next;
        if step < 1e-15 {
            break;
        }
    }
    (sub_violation(p, part, &z) <= budget.feasibility_tol).then_some(z)
}

/// Upper bound on the distance from `x` to the feasible set, minimized over all partitions.
/// `anchor` is a known feasible point used as a fallback start.
pub fn feasible_distance(p: &Program, x: &[f64], anchor: Option<&[f64]>, budget: &Budget, seed: u64) -> Result<FeasibleDistance> {
    if x.len() != p.dim() {
        return Err(Error::Dimension { expected: p.dim(), got: x.len() });
    }
    let xq: Vec<Q> = x.iter().map(|v| Q::from_f64(*v).expect("finite sample")).collect();
    if p.residual(x, ResidualNorm::L1)?.total <= budget.feasibility_tol * 1e-3 {
        return Ok(FeasibleDistance { distance: 0.0, point: x.to_vec(), partition: None, exact: true });
    }
    let mut best: Option<FeasibleDistance> = anchor.map(|a| FeasibleDistance { distance: dist(a, x), point: a.to_vec(), partition: None, exact: false });
    let choices: Vec<Vec<usize>> = p.blocks.iter().map(|b| (0..b.set.pieces.len()).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for part in cartesian(&choices) {
        let found = if subsystem_affine(p, &part) {
            affine_rows(p, &part).and_then(|rows| project_rows(&rows, &xq, Q::zero())).map(|(z, sq)| {
                (z.iter().map(to_f64).collect::<Vec<_>>(), to_f64(&sq).sqrt(), true)
            })
        } else {
            let spread = best.as_ref().map_or(1.0, |b| b.distance.max(1e-6));
            let mut local: Option<(Vec<f64>, f64, bool)> = None;
            for s in 0..budget.starts {
                let start: Vec<f64> = if s == 0 {
                    x.to_vec()
                } else if s == 1 && anchor.is_some() {
                    anchor.unwrap().to_vec()
                } else {
                    x.iter().map(|v| v + spread * Distribution::<f64>::sample(&StandardNormal, &mut rng) * rng.gen_range(0.1..1.0)).collect()
                };
                if let Some(z) = linearized_search(p, &part, x, &start, budget) {
                    let dz = dist(&z, x);
                    if local.as_ref().map_or(true, |l| dz < l.1) {
                        local = Some((z, dz, false));
                    }
                }
            }
            local
        };
        if let Some((z, dz, exact)) = found {
            if best.as_ref().map_or(true, |b| dz < b.distance) {
                best = Some(FeasibleDistance { distance: dz, point: z, partition: Some(part.clone()), exact });
            }
        }
    }
    best.ok_or_else(|| Error::Invalid("no feasible point found; supply an anchor".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: Vec<f64>,
    pub residual: Residual,
    pub distance: f64,
    /// `None` when the residual is below the division guard.
    pub ratio: Option<f64>,
    /// `|Σ_i d_{C_{P_i}}(Φ_i(x)) − Σ_i d_{Γ_i}(Φ_i(x))|` for the nearest-piece partition.
    pub partition_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub radius: f64,
    pub kappa_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBoundEstimate {
    pub radius: f64,
    pub samples_requested: usize,
    pub seed: u64,
    pub kappa_hat: f64,
    pub worst: Option<Sample>,
    pub excluded: usize,
    pub profile: Vec<ProfilePoint>,
    /// Radii at which the estimate grew by more than 10% after halving.
    pub flags: Vec<String>,
    pub samples: Vec<Sample>,
}

pub const RESIDUAL_GUARD: f64 = 1e-12;

fn draw(center: &[f64], eps: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let d = center.len();
    let mut pts = Vec::with_capacity(n + 2 * d);
    for k in 0..d {
        for s in [1.0, -1.0] {
            let mut x = center.to_vec();
            x[k] += s * eps / 2.0;
            pts.push(x);
        }
    }
    while pts.len() < n + 2 * d {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv < 1e-12 {
            continue;
        }
        let r = eps * rng.gen::<f64>().powf(1.0 / d as f64);
        pts.push(center.iter().zip(&v).map(|(c, x)| c + r * x / nv).collect());
    }
    pts
}

fn evaluate(p: &Program, x: &[f64], anchor: &[f64], budget: &Budget, seed: u64) -> Result<Sample> {
    let residual = p.residual(x, ResidualNorm::L1)?;
    let fd = feasible_distance(p, x, Some(anchor), budget, seed)?;
    let part = p.nearest_partition(x)?;
    let split = p.partition_distance(x, &part)?;
    let partition_gap = (split - residual.gamma_dists.iter().sum::<f64>()).abs();
    let ratio = (residual.total >= RESIDUAL_GUARD).then(|| fd.distance / residual.total);
    Ok(Sample { point: x.to_vec(), residual, distance: fd.distance, ratio, partition_gap })
}

fn kappa(samples: &[Sample]) -> (f64, Option<Sample>) {
    let mut best: Option<&Sample> = None;
    for s in samples {
        if let Some(r) = s.ratio {
            if best.map_or(true, |b| r > b.ratio.unwrap()) {
                best = Some(s);
            }
        }
    }
    (best.and_then(|b| b.ratio).unwrap_or(0.0), best.cloned())
}

/// Samples `n` points uniformly in the ball `B_eps(x̄)` plus `±eps/2` axis probes, then repeats at
/// `eps/2`, `eps/4`, `eps/8` for the profile.
pub fn estimate_error_bound(p: &Program, xbar: &[Q], eps: f64, n: usize, seed: u64) -> Result<ErrorBoundEstimate> {
    estimate_with_budget(p, xbar, eps, n, seed, &Budget::default())
}

pub fn estimate_with_budget(p: &Program, xbar: &[Q], eps: f64, n: usize, seed: u64, budget: &Budget) -> Result<ErrorBoundEstimate> {
    p.validate()?;
    let r = p.residual_at(xbar)?;
    if r.total > budget.feasibility_tol {
        return Err(Error::Infeasible { violation: r.total });
    }
    if !(eps > 0.0) {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    let center: Vec<f64> = xbar.iter().map(to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut profile = Vec::new();
    let mut main = Vec::new();
    for level in 0..4 {
        let e = eps / f64::from(1u32 << level);
        let pts = draw(&center, e, n, &mut rng);
        let mut samples = Vec::with_capacity(pts.len());
        for (i, x) in pts.iter().enumerate() {
            samples.push(evaluate(p, x, &center, budget, seed ^ ((level as u64) << 32) ^ i as u64)?);
        }
        profile.push(ProfilePoint { radius: e, kappa_hat: kappa(&samples).0 });
        if level == 0 {
            main = samples;
        }
    }
    let (kappa_hat, worst) = kappa(&main);
    let excluded = main.iter().filter(|s| s.ratio.is_none()).count();
    let flags = profile
        .windows(2)
        .filter(|w| w[1].kappa_hat > w[0].kappa_hat * 1.1)
        .map(|w| format!("estimate grows from {:.6} to {:.6} at radius {}", w[0].kappa_hat, w[1].kappa_hat, w[1].radius))
        .collect();
    Ok(ErrorBoundEstimate { radius: eps, samples_requested: n, seed, kappa_hat, worst, excluded, profile, flags, samples: main })
}

impl ErrorBoundEstimate {
    /// One row per sample: coordinates, residual parts, distance estimate, ratio.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let d = self.samples.first().map_or(0, |s| s.point.len());
        let mut header: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
        header.extend(["g_plus", "h_norm", "gamma_dist", "residual", "distance", "ratio"].map(String::from));
        out.write_record(&header).map_err(|e| Error::Invalid(e.to_string()))?;
        for s in &self.samples {
            let mut rec: Vec<String> = s.point.iter().map(|v| format!("{v}")).collect();
            rec.push(format!("{}", s.residual.g_plus_norm));
            rec.push(format!("{}", s.residual.h_norm));
            rec.push(format!("{}", s.residual.gamma_dists.iter().sum::<f64>()));
            rec.push(format!("{}", s.residual.total));
            rec.push(format!("{}", s.distance));
            rec.push(s.ratio.map_or(String::new(), |r| format!("{r}")));
            out.write_record(&rec).map_err(|e| Error::Invalid(e.to_string()))?;
        }
        out.flush().map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(())
    }
}
