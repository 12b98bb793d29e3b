//! Shared oracles and random corpora for the integration tests.
#![allow(dead_code)]

use mpdc::disjunctive::DisjunctiveSet;
use mpdc::expr::{parse, parse_list, VectorFunc};
use mpdc::geometry::{Polyhedron, Row};
use mpdc::model::{Block, Program};
use mpdc::ortho::{OrthoKind, OrthoProgram};
use mpdc::rational::{q, Q};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_vec(r: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vec<Q> {
    (0..dim).map(|_| q(r.gen_range(lo..=hi))).collect()
}

/// Row echelon form by plain Gaussian elimination; returns the rank.
pub fn echelon(mut m: Vec<Vec<Q>>) -> (usize, Vec<Vec<Q>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    (r, m)
}

pub fn oracle_rank(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        echelon(vs.to_vec()).0
    }
}

/// Kernel vector of the columns `vs`, assuming the kernel is one-dimensional.
fn circuit_kernel(vs: &[Vec<Q>]) -> Option<Vec<Q>> {
    let n = vs.len();
    let d = vs[0].len();
    let m: Vec<Vec<Q>> = (0..d).map(|i| vs.iter().map(|v| v[i].clone()).collect()).collect();
    let (_, e) = echelon(m);
    let mut pivots = Vec::new();
    for row in &e {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivots.push(c);
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return None;
    }
    let f = free[0];
    let mut x = vec![Q::zero(); n];
    x[f] = q(1);
    for (row, &pc) in e.iter().zip(&pivots) {
        x[pc] = -(&row[f] / &row[pc]);
    }
    Some(x)
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) <= max {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Circuit enumeration: a sign-constrained dependence exists iff some minimal dependent subfamily
/// has a kernel vector that is nonnegative on the signed members (conformal decomposition).
pub fn pld_oracle(signed: &[Vec<Q>], free: &[Vec<Q>]) -> bool {
    let all: Vec<Vec<Q>> = signed.iter().chain(free).cloned().collect();
    for s in subsets(all.len(), all.len()) {
        let fam: Vec<Vec<Q>> = s.iter().map(|&i| all[i].clone()).collect();
        if oracle_rank(&fam) + 1 != fam.len() {
            continue;
        }
        let Some(k) = circuit_kernel(&fam) else { continue };
        if k.iter().any(|x| x.is_zero()) {
            continue;
        }
        for sign in [q(1), q(-1)] {
            let ok = s.iter().zip(&k).all(|(&i, c)| i >= signed.len() || !(c * &sign).is_negative());
            if ok {
                return true;
            }
        }
    }
    false
}

/// Carathéodory oracle: `v` is a nonnegative combination of an independent subfamily of the rays
/// and the signed lines.
pub fn cone_oracle(rays: &[Vec<Q>], lines: &[Vec<Q>], v: &[Q]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let mut gens: Vec<Vec<Q>> = rays.to_vec();
    for l in lines {
        gens.push(l.clone());
        gens.push(l.iter().map(|x| -x).collect());
    }
    let d = v.len();
    for s in subsets(gens.len(), d) {
        let fam: Vec<Vec<Q>> = s.iter().map(|&i| gens[i].clone()).collect();
        if oracle_rank(&fam) != fam.len() {
            continue;
        }
        let mut cols = fam.clone();
        cols.push(v.to_vec());
        let Some(k) = circuit_kernel(&cols) else { continue };
        let t = &k[fam.len()];
        if t.is_zero() {
            continue;
        }
        if k[..fam.len()].iter().all(|c| !(c / t).is_positive()) {
            return true;
        }
    }
    false
}

fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Random polynomial with zero constant term, linear part in `[-2, 2]` and an optional quadratic term.
fn random_poly(r: &mut ChaCha8Rng, n: usize, quadratic: bool) -> String {
    let mut terms = Vec::new();
    for k in 1..=n {
        let c = r.gen_range(-2..=2);
        if c != 0 {
            terms.push(format!("{c}*x{k}"));
        }
    }
    if quadratic && r.gen_bool(0.6) {
        let (i, j) = (r.gen_range(1..=n), r.gen_range(1..=n));
        let c = [-1, 1, 2][r.gen_range(0..3)];
        terms.push(format!("{c}*x{i}*x{j}"));
    }
    if terms.is_empty() {
        terms.push(format!("x{}", r.gen_range(1..=n)));
    }
    terms.join(" + ")
}

fn random_piece(r: &mut ChaCha8Rng, p: usize) -> Polyhedron {
    let rows = r.gen_range(1..=p);
    let mut out = Vec::new();
    while out.len() < rows {
        let normal = small_vec(r, p, -1, 1);
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        if r.gen_bool(0.2) {
            out.push(Row::eq(normal, q(0)));
        } else {
            out.push(Row::le(normal, q(0)));
        }
    }
    Polyhedron::new(p, out).unwrap()
}

fn random_set(r: &mut ChaCha8Rng, p: usize) -> DisjunctiveSet {
    if p == 2 && r.gen_bool(0.3) {
        return match r.gen_range(0..3) {
            0 => DisjunctiveSet::omega_e(),
            1 => DisjunctiveSet::omega_v(),
            _ => DisjunctiveSet::omega_s(),
        };
    }
    let pieces = (0..2).map(|_| random_piece(r, p)).collect();
    DisjunctiveSet::new(p, pieces).unwrap()
}

/// Random affine/quadratic program in 2 or 3 variables with 1-2 blocks of size `<= max_p`,
/// feasible at the origin.
pub fn random_program(r: &mut ChaCha8Rng, max_p: usize) -> Program {
    let n = r.gen_range(2..=3);
    let vars = var_names(n);
    let mut p = Program::new(vars.clone());
    for _ in 0..r.gen_range(0..=2) {
        let body = random_poly(r, n, true);
        let text = if r.gen_bool(0.75) { body } else { format!("{body} - 1") };
        p.g.push(parse(&text, &vars).unwrap());
    }
    if r.gen_bool(0.5) {
        p.h.push(parse(&random_poly(r, n, true), &vars).unwrap());
    }
    for _ in 0..r.gen_range(1..=2) {
        let dim = r.gen_range(1..=max_p);
        let comps: Vec<String> = (0..dim).map(|_| random_poly(r, n, true)).collect();
        let map = VectorFunc::new(parse_list(&comps.join("; "), &vars).unwrap(), n);
        p.blocks.push(Block { map, set: random_set(r, dim) });
    }
    p
}

/// The corpus used by the implication and piecewise checks.
pub fn corpus(seed: u64, count: usize, max_p: usize) -> Vec<Program> {
    let mut r = rng(seed);
    (0..count).map(|_| random_program(&mut r, max_p)).collect()
}

/// Random orthogonal program at the origin: every pair `(G_i(0), H_i(0))` lies in the kind's set.
pub fn random_ortho(r: &mut ChaCha8Rng, kind: OrthoKind) -> OrthoProgram {
    let n = r.gen_range(2..=3);
    let vars = var_names(n);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let pairs = r.gen_range(1..=2);
    let mut gs = Vec::new();
    let mut hs = Vec::new();
    for _ in 0..pairs {
        let (a, b): (i64, i64) = match (kind, r.gen_range(0..4)) {
            (_, 0) => (0, 0),
            (OrthoKind::Mpec, 1) => (0, 1),
            (OrthoKind::Mpec, 2) => (1, 0),
            (OrthoKind::Mpvc, 1) => (0, 1),
            (OrthoKind::Mpvc, 2) => (-1, 0),
            (OrthoKind::Mpvc, _) => (-1, 1),
            (OrthoKind::Mpsc, 1) => (0, 2),
            (OrthoKind::Mpsc, 2) => (-1, 0),
            _ => (0, 0),
        };
        let cg = if a == 0 { String::new() } else { format!(" + {a}") };
        let ch = if b == 0 { String::new() } else { format!(" + {b}") };
        gs.push(format!("{}{cg}", random_poly(r, n, true)));
        hs.push(format!("{}{ch}", random_poly(r, n, true)));
    }
    let big_g = parse_list(&gs.join("; "), &vars).unwrap();
    let big_h = parse_list(&hs.join("; "), &vars).unwrap();
    let mut o = OrthoProgram::new(&refs, kind, big_g, big_h);
    if r.gen_bool(0.4) {
        o.g.push(parse(&random_poly(r, n, true), &vars).unwrap());
    }
    if r.gen_bool(0.3) {
        o.h.push(parse(&random_poly(r, n, false), &vars).unwrap());
    }
    o
}

pub fn ortho_corpus(seed: u64, kind: OrthoKind, count: usize) -> Vec<OrthoProgram> {
    let mut r = rng(seed);
    (0..count).map(|_| random_ortho(&mut r, kind)).collect()
}

pub fn origin(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

use mpdc::cq::{check, check_prcpld, check_rcpld, CheckConfig, CqName, SequenceScheme, Verdict};

/// Scheme shared by every check on the random corpora.
pub fn corpus_config() -> CheckConfig {
    CheckConfig { scheme: SequenceScheme { random_directions: 16, ..Default::default() }, ..Default::default() }
}

pub const IMPLICATIONS: [(CqName, CqName); 7] = [
    (CqName::Licq, CqName::Nnamcq),
    (CqName::Nnamcq, CqName::Cpld),
    (CqName::Cpld, CqName::Rcpld),
    (CqName::Crcq, CqName::Rcrcq),
    (CqName::Rcrcq, CqName::Ercpld),
    (CqName::Ercpld, CqName::Rcpld),
    (CqName::Crcq, CqName::Cpld),
];

/// Every `(stronger holds, weaker fails)` event over the programs, evaluated at the origin.
pub fn implication_violations(programs: &[Program], config: &CheckConfig) -> Vec<String> {
    let mut out = Vec::new();
    for (i, p) in programs.iter().enumerate() {
        let x = origin(p.dim());
        let mut verdicts = std::collections::HashMap::new();
        for name in CqName::ALL {
            if name != CqName::Prcpld {
                verdicts.insert(name, check(name, p, &x, config).unwrap().verdict);
            }
        }
        for (a, b) in IMPLICATIONS {
            if verdicts[&a] == Verdict::HoldsSampled && verdicts[&b] == Verdict::FailsWitnessed {
                out.push(format!("instance {i}: {a} holds, {b} fails"));
            }
        }
    }
    out
}

/// Instances with `PRCPLD` holding and `RCPLD` failing.
pub fn piecewise_gaps(programs: &[Program], config: &CheckConfig) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, p) in programs.iter().enumerate() {
        let x = origin(p.dim());
        let pr = check_prcpld(p, &x, config).unwrap().verdict;
        if pr == Verdict::HoldsSampled && check_rcpld(p, &x, config).unwrap().verdict == Verdict::FailsWitnessed {
            out.push(i);
        }
    }
    out
}

use mpdc::cq::{caratheodory_reduce, positive_linear_dependent};
use mpdc::geometry::{cone_member, ConeGenerators};

fn nonzero_vec(r: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vec<Q> {
    loop {
        let v = small_vec(r, dim, lo, hi);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn is_zero_combo(vs: &[Vec<Q>], c: &[Q]) -> bool {
    let d = vs.first().map_or(0, Vec::len);
    (0..d).all(|k| vs.iter().zip(c).fold(Q::zero(), |s, (v, a)| s + &v[k] * a).is_zero())
}

/// Disagreements between `positive_linear_dependent` and the circuit oracle, plus invalid certificates.
pub fn pld_disagreements(seed: u64, cases: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let dim = r.gen_range(1..=3);
        let total = r.gen_range(1..=4);
        let ns = r.gen_range(0..=total);
        let vs: Vec<Vec<Q>> = (0..total).map(|_| nonzero_vec(&mut r, dim, -2, 2)).collect();
        let (signed, free) = vs.split_at(ns);
        let expected = pld_oracle(signed, free);
        match positive_linear_dependent(signed, free) {
            Some((a, b)) => {
                let coefs: Vec<Q> = a.iter().chain(&b).cloned().collect();
                let valid = a.iter().all(|x| !x.is_negative()) && coefs.iter().any(|x| !x.is_zero()) && is_zero_combo(&vs, &coefs);
                if !expected || !valid {
                    bad.push(format!("case {case}: {signed:?} {free:?}"));
                }
            }
            None if expected => bad.push(format!("case {case}: missed {signed:?} {free:?}")),
            None => {}
        }
    }
    bad
}

pub fn cone_disagreements(seed: u64, cases: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let dim = r.gen_range(1..=3);
        let rays: Vec<Vec<Q>> = (0..r.gen_range(0..=4)).map(|_| nonzero_vec(&mut r, dim, -2, 2)).collect();
        let lines: Vec<Vec<Q>> = (0..r.gen_range(0..=1)).map(|_| nonzero_vec(&mut r, dim, -2, 2)).collect();
        let v = small_vec(&mut r, dim, -3, 3);
        let k = ConeGenerators::canonical(dim, rays.clone(), lines.clone());
        if cone_member(&k, &v) != cone_oracle(&rays, &lines, &v) {
            bad.push(format!("case {case}: {rays:?} {lines:?} {v:?}"));
        }
    }
    bad
}

/// Failures of reproduction, independence or sign preservation.
pub fn caratheodory_failures(seed: u64, cases: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut bad = Vec::new();
    let mut case = 0;
    while case < cases {
        let dim = r.gen_range(2..=4);
        let nb = r.gen_range(0..dim);
        let base: Vec<Vec<Q>> = (0..nb).map(|_| nonzero_vec(&mut r, dim, -2, 2)).collect();
        if oracle_rank(&base) != nb {
            continue;
        }
        case += 1;
        let extras: Vec<(Vec<Q>, Q)> = (0..r.gen_range(1..=5))
            .map(|_| {
                let c = loop {
                    let c = r.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                (nonzero_vec(&mut r, dim, -2, 2), q(c))
            })
            .collect();
        let a = small_vec(&mut r, nb, -2, 2);
        let mut v = vec![Q::zero(); dim];
        for (b, c) in base.iter().zip(&a) {
            for k in 0..dim {
                v[k] += &b[k] * c;
            }
        }
        for (e, c) in &extras {
            for k in 0..dim {
                v[k] += &e[k] * c;
            }
        }
        let red = match caratheodory_reduce(&v, &base, &extras) {
            Ok(red) => red,
            Err(e) => {
                bad.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let mut back = vec![Q::zero(); dim];
        for (b, c) in base.iter().zip(&red.base_coeffs) {
            for k in 0..dim {
                back[k] += &b[k] * c;
            }
        }
        for (j, c) in &red.kept {
            for k in 0..dim {
                back[k] += &extras[*j].0[k] * c;
            }
        }
        let mut fam = base.clone();
        fam.extend(red.kept.iter().map(|(j, _)| extras[*j].0.clone()));
        let signs = red.kept.iter().all(|(j, c)| !c.is_zero() && c.signum() == extras[*j].1.signum());
        if back != v || oracle_rank(&fam) != fam.len() || !signs {
            bad.push(format!("case {case}: base {base:?} extras {extras:?}"));
        }
    }
    bad
}
