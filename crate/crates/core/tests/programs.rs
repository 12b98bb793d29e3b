//! Program-level suites: partitions, witness replay, stationarity, orthogonal engines and distances.

mod common;

use common::*;
use mpdc::cq::{check, enumerate_multipliers, replay, BranchSet, CqName, Verdict};
use mpdc::disjunctive::DisjunctiveSet;
use mpdc::errorbound::{estimate_error_bound, feasible_distance, Budget};
use mpdc::expr::{parse, parse_list, VectorFunc};
use mpdc::geometry::project;
use mpdc::model::{Block, Program, ResidualNorm};
use mpdc::ortho::{admissible_multiplier, check_ortho, classify, omega_nc, to_generic, IndexClass, OrthoKind};
use mpdc::rational::{q, qf, qvec, to_f64, Q};
use mpdc::stationarity::{all_certificates, check_mstationary};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn origin_has_an_admissible_partition() {
    for p in corpus(31, 40, 3) {
        assert!(!p.admissible_partitions(&origin(p.dim())).unwrap().is_empty());
    }
}

#[test]
fn subsystem_points_are_feasible_for_the_program() {
    let mut r = rng(4);
    for set in [DisjunctiveSet::omega_e(), DisjunctiveSet::omega_v(), DisjunctiveSet::omega_s()] {
        let mut p = Program::new(vec!["x1".into(), "x2".into()]);
        p.blocks.push(Block { map: VectorFunc::identity(2), set: set.clone() });
        for _ in 0..50 {
            let y = vec![qf(r.gen_range(-8..=8), 4), qf(r.gen_range(-8..=8), 4)];
            for (k, piece) in set.pieces.iter().enumerate() {
                let (z, _) = project(piece, &y).unwrap();
                let sub = p.subsystem(&[k]).unwrap();
                assert!(sub.is_feasible(&z, 1e-12).unwrap());
                assert!(p.is_feasible(&z, 1e-12).unwrap());
            }
        }
    }
    for p in corpus(32, 20, 3) {
        for part in p.admissible_partitions(&origin(p.dim())).unwrap() {
            let sub = p.subsystem(&part).unwrap();
            for _ in 0..20 {
                let x: Vec<Q> = (0..p.dim()).map(|_| qf(r.gen_range(-3..=3), 8)).collect();
                if sub.is_feasible(&x, 1e-12).unwrap() {
                    assert!(p.is_feasible(&x, 1e-12).unwrap());
                }
            }
        }
    }
}

#[test]
fn nearest_partition_reproduces_the_set_distances() {
    let mut r = rng(5);
    for p in corpus(33, 30, 3) {
        for _ in 0..20 {
            let x: Vec<f64> = (0..p.dim()).map(|_| r.gen_range(-0.5..0.5)).collect();
            let part = p.nearest_partition(&x).unwrap();
            let whole: f64 = p.residual(&x, ResidualNorm::L1).unwrap().gamma_dists.iter().sum();
            let split: f64 = p.subsystem(&part).unwrap().residual(&x, ResidualNorm::L1).unwrap().gamma_dists.iter().sum();
            assert!((whole - split).abs() <= 1e-9, "{whole} vs {split}");
            assert!((p.partition_distance(&x, &part).unwrap() - whole).abs() <= 1e-9);
        }
    }
}

#[test]
fn failing_witnesses_replay_and_reports_repeat() {
    let cfg = corpus_config();
    let mut replayed = 0;
    for p in corpus(41, 14, 2) {
        let x = origin(p.dim());
        for name in CqName::ALL {
            let rep = check(name, &p, &x, &cfg).unwrap();
            if rep.verdict == Verdict::FailsWitnessed {
                let w = rep.witness.as_ref().expect("failing verdicts carry a witness");
                assert!(replay(&p, &x, w, &cfg).unwrap(), "{name} on {:?}", p);
                replayed += 1;
            }
            assert_eq!(rep, check(name, &p, &x, &cfg).unwrap());
        }
    }
    assert!(replayed > 0);
}

#[test]
fn specialized_and_generic_engines_agree() {
    let cfg = corpus_config();
    for (seed, kind) in [(51, OrthoKind::Mpec), (52, OrthoKind::Mpvc), (53, OrthoKind::Mpsc)] {
        for (i, o) in ortho_corpus(seed, kind, 20).iter().enumerate() {
            let x = origin(o.dim());
            let generic = to_generic(o, &x).unwrap();
            for cq in [CqName::Rcpld, CqName::Prcpld] {
                let Some(special) = check_ortho(o, &x, cq, &cfg) else { continue };
                let special = special.unwrap();
                let reference = check(cq, &generic, &x, &cfg).unwrap();
                assert_eq!(special.verdict, reference.verdict, "{kind:?} #{i} {cq}");
                if let Some(w) = &special.witness {
                    assert!(replay(&o.to_global_program(), &x, w, &cfg).unwrap(), "{kind:?} #{i} {cq}");
                }
            }
        }
    }
}

#[test]
fn switching_instances_coincide_with_specialization() {
    let cfg = corpus_config();
    for o in ortho_corpus(54, OrthoKind::Mpsc, 10) {
        let x = origin(o.dim());
        let a = check_ortho(&o, &x, CqName::Rcpld, &cfg).unwrap().unwrap().verdict;
        let b = check_ortho(&o, &x, CqName::Prcpld, &cfg).unwrap().unwrap().verdict;
        assert_eq!(a, b);
    }
}

#[test]
fn orthogonal_branch_families_are_axis_subsets() {
    let axes = [qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1]), qvec(&[0, -1])];
    for kind in [OrthoKind::Mpec, OrthoKind::Mpvc, OrthoKind::Mpsc] {
        for i in -2..=2 {
            for j in -2..=2 {
                let y = qvec(&[i, j]);
                let Ok(nc) = omega_nc(kind, &y) else { continue };
                let b = BranchSet::new(&nc);
                for opt in &b.options {
                    assert!(opt.len() <= 2);
                    for &g in opt {
                        assert!(axes.contains(&b.generators[g].vector), "{kind:?} {y:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn classification_matches_signs() {
    for kind in [OrthoKind::Mpec, OrthoKind::Mpvc, OrthoKind::Mpsc] {
        for o in ortho_corpus(55, kind, 20) {
            let x = origin(o.dim());
            let sets = classify(&o, &x, 1e-9).unwrap();
            for (i, class) in sets.classes.iter().enumerate() {
                let (g, h) = (o.big_g[i].eval(&x), o.big_h[i].eval(&x));
                assert_eq!(class.biactive(), g.is_zero() && h.is_zero(), "{kind:?} {class}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn relaxed_sign_conditions_contain_strict_ones(a in -20i64..=20, b in -20i64..=20, da in 1i64..=5, db in 1i64..=5) {
        let (lg, lh) = (qf(a, da), qf(b, db));
        for (kind, class) in [
            (OrthoKind::Mpec, IndexClass::ZeroZero),
            (OrthoKind::Mpvc, IndexClass::ZeroZero),
            (OrthoKind::Mpsc, IndexClass::Both),
        ] {
            if admissible_multiplier(kind, class, false, &lg, &lh) {
                prop_assert!(admissible_multiplier(kind, class, true, &lg, &lh));
            }
        }
    }
}

#[test]
fn enumerated_complementarity_multipliers_satisfy_relaxed_signs() {
    let cfg = corpus_config();
    for o in ortho_corpus(56, OrthoKind::Mpec, 20) {
        let x = origin(o.dim());
        let sets = classify(&o, &x, 1e-9).unwrap();
        let p = o.to_global_program();
        for cand in enumerate_multipliers(&p, &x, &cfg).unwrap() {
            for (i, class) in sets.classes.iter().enumerate() {
                let (lg, lh) = (&cand.eta[i][0], &cand.eta[i][1]);
                if admissible_multiplier(OrthoKind::Mpec, *class, false, lg, lh) {
                    assert!(admissible_multiplier(OrthoKind::Mpec, *class, true, lg, lh));
                }
            }
        }
    }
}

/// Membership in the limiting cone of each `Ω` at the origin, from the sign description.
fn origin_cone(kind: OrthoKind, a: &Q, b: &Q) -> bool {
    match kind {
        OrthoKind::Mpec => (a.is_negative() && b.is_negative()) || a.is_zero() || b.is_zero(),
        OrthoKind::Mpvc => a.is_zero() || (b.is_zero() && !a.is_negative()),
        OrthoKind::Mpsc => a.is_zero() || b.is_zero(),
    }
}

#[test]
fn stationarity_matches_the_unique_multiplier() {
    let mut r = rng(6);
    let vars = vec!["x1".to_string(), "x2".to_string()];
    let mut cases = 0;
    while cases < 50 {
        let m: Vec<i64> = (0..4).map(|_| r.gen_range(-2..=2)).collect();
        if m[0] * m[3] - m[1] * m[2] == 0 {
            continue;
        }
        cases += 1;
        let kind = [OrthoKind::Mpec, OrthoKind::Mpvc, OrthoKind::Mpsc][cases % 3];
        let eta = [q(r.gen_range(-2..=2)), q(r.gen_range(-2..=2))];
        let c = [-(&eta[0] * q(m[0]) + &eta[1] * q(m[2])), -(&eta[0] * q(m[1]) + &eta[1] * q(m[3]))];
        let mut p = Program::new(vars.clone());
        let map = parse_list(&format!("{}*x1 + {}*x2; {}*x1 + {}*x2", m[0], m[1], m[2], m[3]), &vars).unwrap();
        p.blocks.push(Block { map: VectorFunc::new(map, 2), set: kind.set() });
        p.objective = Some(parse(&format!("({})*x1 + ({})*x2", c[0], c[1]), &vars).unwrap());
        let x = qvec(&[0, 0]);
        let cert = check_mstationary(&p, &x).unwrap();
        assert_eq!(cert.is_some(), origin_cone(kind, &eta[0], &eta[1]), "{kind:?} {m:?} {eta:?}");
        for c in all_certificates(&p, &x).unwrap() {
            assert!(c.verify(&p, &x).unwrap());
            assert_eq!(c.eta[0], eta.to_vec());
        }
    }
}

#[test]
fn feasible_distance_returns_a_feasible_point() {
    let mut r = rng(7);
    for p in corpus(61, 15, 2) {
        for s in 0..5 {
            let x: Vec<f64> = (0..p.dim()).map(|_| r.gen_range(-0.05..0.05)).collect();
            let fd = feasible_distance(&p, &x, Some(&vec![0.0; p.dim()]), &Budget::default(), s).unwrap();
            let res = p.residual(&fd.point, ResidualNorm::L1).unwrap();
            assert!(res.total <= 1e-6, "residual {}", res.total);
            let d = x.iter().zip(&fd.point).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!((d - fd.distance).abs() <= 1e-9);
        }
    }
}

#[test]
fn halving_the_radius_does_not_grow_the_estimate_much() {
    let cfg = corpus_config();
    let mut flagged = Vec::new();
    for (i, p) in corpus(62, 8, 2).iter().enumerate() {
        let x = origin(p.dim());
        if check(CqName::Prcpld, p, &x, &cfg).unwrap().verdict != Verdict::HoldsSampled {
            continue;
        }
        let big = estimate_error_bound(p, &x, 0.1, 150, 1).unwrap().kappa_hat;
        let small = estimate_error_bound(p, &x, 0.05, 150, 1).unwrap().kappa_hat;
        if small > big * 1.1 {
            flagged.push((i, big, small));
        }
    }
    if !flagged.is_empty() {
        eprintln!("estimate grew after halving: {flagged:?}");
    }
}

#[test]
fn identity_complementarity_estimate_is_one() {
    let mut p = Program::new(vec!["x1".into(), "x2".into()]);
    p.blocks.push(Block { map: VectorFunc::identity(2), set: DisjunctiveSet::omega_e() });
    let est = estimate_error_bound(&p, &qvec(&[0, 0]), 0.1, 300, 3).unwrap();
    assert!((est.kappa_hat - 1.0).abs() <= 1e-6);
    assert!(est.samples.iter().all(|s| s.partition_gap <= 1e-9));
    let _ = to_f64(&q(0));
}
