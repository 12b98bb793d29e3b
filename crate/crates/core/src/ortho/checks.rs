//! Relaxed constant positive linear dependence for orthogonal programs from fixed sign tables.

use super::{classify, IndexClass, OrthoKind, OrthoProgram};
use crate::cq::{
    signed_dependence, At, BranchChoice, CheckConfig, Coef, CqName, CqReport, Engine, FamilyOutcome, Member,
    MultiplierCandidate, Verdict, Witness, WitnessKind,
};
use crate::error::{Error, Result};
use crate::linalg::greedy_basis;
use crate::rational::{neg, unit, Q};
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    G,
    H,
}

/// How a pair enters the local system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    None,
    Equality(Side),
    Inequality(Side, Coef),
    Biactive,
}

fn slot(kind: OrthoKind, class: IndexClass) -> Slot {
    use IndexClass::*;
    match (kind, class) {
        (OrthoKind::Mpec, ZeroPlus) | (OrthoKind::Mpsc, OnlyG) => Slot::Equality(Side::G),
        (OrthoKind::Mpec | OrthoKind::Mpvc, PlusZero) | (OrthoKind::Mpsc, OnlyH) => Slot::Equality(Side::H),
        (OrthoKind::Mpvc, ZeroPlus) => Slot::Inequality(Side::G, Coef::Positive),
        (OrthoKind::Mpvc, MinusZero) => Slot::Inequality(Side::H, Coef::Negative),
        (_, ZeroZero | Both) => Slot::Biactive,
        _ => Slot::None,
    }
}

/// Biactive branch options: a support and the sign patterns allowed on it.
type Options = Vec<(Vec<Side>, Vec<Vec<Coef>>)>;

fn biactive_options(kind: OrthoKind, relaxed: bool) -> Options {
    use Coef::*;
    let mut opts: Options = match kind {
        OrthoKind::Mpec | OrthoKind::Mpsc => vec![(vec![Side::G], vec![vec![NonZero]]), (vec![Side::H], vec![vec![NonZero]])],
        OrthoKind::Mpvc => vec![(vec![Side::G], vec![vec![Positive]]), (vec![Side::H], vec![vec![NonZero]])],
    };
    let both = match (kind, relaxed) {
        (OrthoKind::Mpec, false) => vec![vec![Negative, Negative]],
        (OrthoKind::Mpec, true) => vec![vec![Negative, NonZero], vec![NonZero, Negative]],
        (OrthoKind::Mpvc, true) => vec![vec![Positive, Negative]],
        _ => vec![],
    };
    if !both.is_empty() {
        opts.push((vec![Side::G, Side::H], both));
    }
    opts
}

#[derive(Clone)]
struct Entry {
    atom: usize,
    member: Member,
}

struct Plan<'a> {
    p: &'a OrthoProgram,
    config: &'a CheckConfig,
    engine: Engine<'static>,
    g: Vec<(Entry, Coef)>,
    eqs: Vec<Entry>,
    biactive: Vec<usize>,
    pair_atoms: Vec<[usize; 2]>,
    witnesses: Vec<Witness>,
    marginal: Option<String>,
    families: usize,
}

fn side_member(i: usize, s: Side, line: bool) -> Member {
    let k = if s == Side::G { 0 } else { 1 };
    Member::Phi { block: i, beta: unit(2, k), line }
}

impl<'a> Plan<'a> {
    fn new(p: &'a OrthoProgram, xbar: &[Q], config: &'a CheckConfig) -> Result<(Self, Vec<String>)> {
        let sets = classify(p, xbar, config.feasibility_tol)?;
        let d = p.dim();
        let mut engine = Engine::new(d, xbar.to_vec(), config.scheme.clone(), config.rank);
        let pair_atoms: Vec<[usize; 2]> =
            p.big_g.iter().zip(&p.big_h).map(|(gi, hi)| [engine.gradient_atom(gi), engine.gradient_atom(hi)]).collect();
        let global = p.to_global_program();
        let mut g = Vec::new();
        for i in global.active_inequalities(xbar, config.feasibility_tol)? {
            g.push((Entry { atom: engine.gradient_atom(&p.g[i]), member: Member::G { index: i, choice: vec![] } }, Coef::Positive));
        }
        let mut eqs: Vec<Entry> =
            p.h.iter().enumerate().map(|(i, h)| Entry { atom: engine.gradient_atom(h), member: Member::H { index: i } }).collect();
        let mut biactive = Vec::new();
        for (i, &class) in sets.classes.iter().enumerate() {
            let side_atom = |s: Side| pair_atoms[i][if s == Side::G { 0 } else { 1 }];
            match slot(p.kind, class) {
                Slot::None => {}
                Slot::Equality(s) => eqs.push(Entry { atom: side_atom(s), member: side_member(i, s, true) }),
                Slot::Inequality(s, c) => g.push((Entry { atom: side_atom(s), member: side_member(i, s, false) }, c)),
                Slot::Biactive => biactive.push(i),
            }
        }
        let plan = Plan { p, config, engine, g, eqs, biactive, pair_atoms, witnesses: vec![], marginal: None, families: 0 };
        Ok((plan, sets.notes()))
    }

    fn levels_witness(&self, kind: WitnessKind, members: Vec<Member>, cand: Option<MultiplierCandidate>, direction: usize, ranks: Vec<usize>, center_rank: usize) -> Witness {
        let levels: Vec<usize> = self.engine.witness_levels().collect();
        Witness {
            kind,
            members,
            candidate: cand,
            direction_index: Some(direction),
            direction: self.engine.directions[direction].clone(),
            radii: levels.iter().map(|&j| self.engine.radii[j].clone()).collect(),
            levels,
            ranks,
            center_rank,
            partition: None,
        }
    }

    /// Returns true when the search should stop.
    fn record(&mut self, outcome: FamilyOutcome, what: &str, make: impl FnOnce(&Self, usize, Vec<usize>) -> Witness) -> bool {
        match outcome {
            FamilyOutcome::Stable => false,
            FamilyOutcome::Broken { direction, ranks } => {
                let w = make(self, direction, ranks);
                self.witnesses.push(w);
                !self.config.all_witnesses
            }
            FamilyOutcome::Marginal { direction } => {
                self.marginal.get_or_insert_with(|| format!("{what} is marginal along direction {direction}"));
                false
            }
        }
    }

    fn rank_condition(&mut self) -> bool {
        let atoms: Vec<usize> = self.eqs.iter().map(|e| e.atom).collect();
        let members: Vec<Member> = self.eqs.iter().map(|e| e.member.clone()).collect();
        let center = self.engine.rank(&atoms, At::Center);
        let outcome = self.engine.constancy(&atoms);
        self.record(outcome, "rank of the equality gradients", |s, d, r| {
            s.levels_witness(WitnessKind::RankChange, members, None, d, r, center)
        })
    }

    fn candidate(&self, members: &[Member], coefficients: Vec<Q>) -> MultiplierCandidate {
        let mut lambda_g = vec![Q::zero(); self.p.g.len()];
        let mut lambda_h = vec![Q::zero(); self.p.h.len()];
        let mut eta = vec![vec![Q::zero(); 2]; self.p.pairs()];
        let mut branch: Vec<BranchChoice> = (0..self.p.pairs()).map(|_| BranchChoice { rays: vec![], lines: vec![] }).collect();
        for (m, c) in members.iter().zip(&coefficients) {
            match m {
                Member::G { index, .. } => lambda_g[*index] += c,
                Member::H { index } => lambda_h[*index] += c,
                Member::Phi { block, beta, line } => {
                    let k = if beta[0].is_zero() { 1 } else { 0 };
                    eta[*block][k] += c;
                    if *line {
                        branch[*block].lines.push(beta.clone());
                    } else if c.is_negative() {
                        branch[*block].rays.push(neg(beta));
                    } else {
                        branch[*block].rays.push(beta.clone());
                    }
                }
            }
        }
        MultiplierCandidate { lambda_g, lambda_h, eta, branch, members: members.to_vec(), coefficients }
    }

    fn dependence_search(&mut self, relaxed: bool) -> bool {
        let eq_atoms: Vec<usize> = self.eqs.iter().map(|e| e.atom).collect();
        let center = self.engine.vectors(&eq_atoms, At::Center);
        let basis: Vec<Entry> = greedy_basis(&center).into_iter().map(|k| self.eqs[k].clone()).collect();
        let opts = biactive_options(self.p.kind, relaxed);
        let mut count: usize = 1usize.checked_shl(self.g.len() as u32).unwrap_or(usize::MAX);
        for _ in &self.biactive {
            count = count.saturating_mul(opts.len() + 1);
        }
        if count > self.config.cap {
            return true;
        }
        let mut choices: Vec<Vec<Option<usize>>> = vec![vec![]];
        for _ in &self.biactive {
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    std::iter::once(None).chain((0..opts.len()).map(Some)).map(move |o| {
                        let mut c = c.clone();
                        c.push(o);
                        c
                    })
                })
                .collect();
        }
        for choice in &choices {
            for mask in 0u64..(1u64 << self.g.len()) {
                let mut atoms = Vec::new();
                let mut members = Vec::new();
                let mut fixed = Vec::new();
                for (k, (e, c)) in self.g.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        atoms.push(e.atom);
                        members.push(e.member.clone());
                        fixed.push(*c);
                    }
                }
                let mut alternatives: Vec<&Vec<Vec<Coef>>> = Vec::new();
                for (&i, o) in self.biactive.iter().zip(choice) {
                    let Some(o) = o else { continue };
                    for &s in &opts[*o].0 {
                        atoms.push(self.pair_atoms[i][if s == Side::G { 0 } else { 1 }]);
                        members.push(side_member(i, s, false));
                    }
                    alternatives.push(&opts[*o].1);
                }
                if atoms.is_empty() {
                    continue;
                }
                for e in &basis {
                    atoms.push(e.atom);
                    members.push(e.member.clone());
                }
                self.families += 1;
                let vs = self.engine.vectors(&atoms, At::Center);
                let Some(c) = first_dependence(&vs, &fixed, &alternatives, basis.len()) else { continue };
                let cand = self.candidate(&members, c);
                let outcome = self.engine.dependence(&atoms);
                let rank = self.engine.rank(&atoms, At::Center);
                if self.record(outcome, "dependence of a multiplier family", |s, d, r| {
                    s.levels_witness(WitnessKind::Independent, members, Some(cand), d, r, rank)
                }) {
                    return false;
                }
            }
        }
        false
    }

    fn report(self, cq: CqName, overflow: bool, mut notes: Vec<String>) -> CqReport {
        let verdict = if !self.witnesses.is_empty() {
            Verdict::FailsWitnessed
        } else if self.marginal.is_some() || overflow {
            Verdict::Inconclusive
        } else {
            Verdict::HoldsSampled
        };
        notes.insert(0, format!("{} specialization", self.p.kind.as_str()));
        if let Some(m) = self.marginal {
            notes.push(m);
        }
        if overflow {
            notes.push(format!("enumeration exceeds the cap of {} families", self.config.cap));
        }
        let mut ws = self.witnesses.into_iter();
        CqReport {
            cq,
            verdict,
            witness: ws.next(),
            extra_witnesses: ws.collect(),
            scheme: self.config.scheme.clone(),
            rank: self.config.rank,
            families_checked: self.families,
            notes,
        }
    }
}

/// Tries every combination of the per-pair sign alternatives; basis coefficients are free.
fn first_dependence(vs: &[Vec<Q>], fixed: &[Coef], alternatives: &[&Vec<Vec<Coef>>], free: usize) -> Option<Vec<Q>> {
    let mut combos: Vec<Vec<Coef>> = vec![fixed.to_vec()];
    for alts in alternatives {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                alts.iter().map(move |a| {
                    let mut c = c.clone();
                    c.extend(a.iter().copied());
                    c
                })
            })
            .collect();
    }
    combos.into_iter().find_map(|mut coefs| {
        coefs.extend(std::iter::repeat(Coef::Free).take(free));
        signed_dependence(vs, &coefs)
    })
}

fn run(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig, kind: OrthoKind, cq: CqName) -> Result<CqReport> {
    if p.kind != kind {
        return Err(Error::Invalid(format!("expected a {} program, got {}", kind.as_str(), p.kind.as_str())));
    }
    let (mut plan, notes) = Plan::new(p, xbar, config)?;
    let mut overflow = false;
    if !plan.rank_condition() {
        overflow = plan.dependence_search(cq == CqName::Prcpld);
    }
    Ok(plan.report(cq, overflow, notes))
}

pub fn check_mpec_rcpld(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    run(p, xbar, config, OrthoKind::Mpec, CqName::Rcpld)
}

pub fn check_mpec_prcpld(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    run(p, xbar, config, OrthoKind::Mpec, CqName::Prcpld)
}

pub fn check_mpvc_rcpld(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    run(p, xbar, config, OrthoKind::Mpvc, CqName::Rcpld)
}

pub fn check_mpvc_prcpld(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    run(p, xbar, config, OrthoKind::Mpvc, CqName::Prcpld)
}

/// Serves both the relaxed and the piecewise condition, which coincide for switching programs.
pub fn check_mpsc_rcpld(p: &OrthoProgram, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    run(p, xbar, config, OrthoKind::Mpsc, CqName::Rcpld)
}

/// Specialized check by name; `None` when the condition has no specialized path.
pub fn check_ortho(p: &OrthoProgram, xbar: &[Q], cq: CqName, config: &CheckConfig) -> Option<Result<CqReport>> {
    match cq {
        CqName::Rcpld | CqName::Prcpld => Some(run(p, xbar, config, p.kind, cq)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cq::{check_prcpld, check_rcpld, replay};
    use crate::ortho::tests::ortho;
    use crate::ortho::{admissible_multiplier, to_generic};
    use crate::rational::qvec;

    fn agree(p: &OrthoProgram, x: &[Q]) -> (Verdict, Verdict) {
        let c = CheckConfig::default();
        let generic = to_generic(p, x).unwrap();
        let r = check_ortho(p, x, CqName::Rcpld, &c).unwrap().unwrap();
        let pr = check_ortho(p, x, CqName::Prcpld, &c).unwrap().unwrap();
        assert_eq!(r.verdict, check_rcpld(&generic, x, &c).unwrap().verdict, "rcpld {:?}", p.kind);
        assert_eq!(pr.verdict, check_prcpld(&generic, x, &c).unwrap().verdict, "prcpld {:?}", p.kind);
        for w in r.witness.iter().chain(&pr.witness) {
            assert!(replay(&p.to_global_program(), x, w, &c).unwrap());
        }
        (r.verdict, pr.verdict)
    }

    #[test]
    fn identity_pairs_hold_vacuously() {
        for kind in [OrthoKind::Mpec, OrthoKind::Mpvc, OrthoKind::Mpsc] {
            let p = ortho(kind, &["x1", "x2"], "", "", "x1", "x2");
            assert_eq!(agree(&p, &qvec(&[0, 0])), (Verdict::HoldsSampled, Verdict::HoldsSampled));
            let r = check_ortho(&p, &qvec(&[0, 0]), CqName::Rcpld, &CheckConfig::default()).unwrap().unwrap();
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn curved_complementarity_fails() {
        let p = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1", "-x1 + x2^2");
        let x = qvec(&[0, 0]);
        assert_eq!(agree(&p, &x), (Verdict::FailsWitnessed, Verdict::FailsWitnessed));
        let r = check_mpec_rcpld(&p, &x, &CheckConfig::default()).unwrap();
        let cand = r.witness.unwrap().candidate.unwrap();
        assert!(cand.eta[0].iter().all(|v| v.is_negative()));
        assert!(admissible_multiplier(OrthoKind::Mpec, IndexClass::ZeroZero, false, &cand.eta[0][0], &cand.eta[0][1]));
        assert!(admissible_multiplier(OrthoKind::Mpec, IndexClass::ZeroZero, true, &cand.eta[0][0], &cand.eta[0][1]));
    }

    #[test]
    fn vanishing_with_equality_anchor() {
        let p = ortho(OrthoKind::Mpvc, &["x1", "x2"], "", "x1 - x2", "x1", "x2");
        assert_eq!(agree(&p, &qvec(&[0, 0])), (Verdict::HoldsSampled, Verdict::HoldsSampled));
    }

    #[test]
    fn no_biactive_pair_reduces_to_equalities() {
        let p = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1; x2", "x2 + 1; x2^2 - x1 + 2");
        let x = qvec(&[0, 0]);
        let sets = classify(&p, &x, 1e-9).unwrap();
        assert!(sets.members(IndexClass::ZeroZero).is_empty());
        assert_eq!(agree(&p, &x).0, Verdict::HoldsSampled);
        let q = ortho(OrthoKind::Mpec, &["x1", "x2"], "", "", "x1; x1 + x2^2", "1; 1");
        assert_eq!(agree(&q, &x).0, Verdict::FailsWitnessed);
    }

    #[test]
    fn vanishing_sign_lattice() {
        let p = ortho(OrthoKind::Mpvc, &["x1", "x2"], "x1 + x2^2 - 1", "", "x1 - 1; -x2", "x2; 1 + x1");
        let x = qvec(&[1, 0]);
        let sets = classify(&p, &x, 1e-9).unwrap();
        assert_eq!(sets.classes, vec![IndexClass::ZeroZero, IndexClass::ZeroPlus]);
        agree(&p, &x);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let p = ortho(OrthoKind::Mpsc, &["x1"], "", "", "x1", "1");
        assert!(check_mpec_rcpld(&p, &qvec(&[0]), &CheckConfig::default()).is_err());
        assert!(check_mpsc_rcpld(&p, &qvec(&[1]), &CheckConfig::default()).is_err());
    }
}
