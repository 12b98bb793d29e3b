use super::branch::BranchSet;
use super::family::{nonzero_in_cone, signed_dependence, Coef};
use super::sequence::{At, Engine, FamilyOutcome, RankMode, SequenceScheme, SubgradientHook};
use super::{BranchChoice, CheckConfig, CqName, CqReport, Member, MultiplierCandidate, Verdict, Witness, WitnessKind};
use crate::disjunctive::{active_pieces, limiting_nc, LimitingGenerators};
use crate::error::{Error, Result};
use crate::expr::{Expr, VectorFunc};
use crate::geometry::{dd_vrep_to_hrep, normal_cone};
use crate::linalg::{greedy_basis, nullspace};
use crate::model::Program;
use crate::rational::{add, scale, Q};
use num_traits::Zero;
#[cfg(test)]
use num_traits::Signed;

/// Rank of `{∇h_i}` at the base point against the sampled sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankConstancy {
    pub outcome: FamilyOutcome,
    pub rank_at_center: usize,
    /// `(direction, level, rank)` for every sample whose rank differs from the center rank.
    pub violations: Vec<(usize, usize, usize)>,
}

impl RankConstancy {
    pub fn constant_rank(&self) -> bool {
        self.outcome == FamilyOutcome::Stable
    }
}

pub fn rank_constancy(h_grads: &[VectorFunc], xbar: &[Q], scheme: &SequenceScheme, rank: RankMode) -> RankConstancy {
    let mut e = Engine::new(xbar.len(), xbar.to_vec(), scheme.clone(), rank);
    let atoms: Vec<usize> = h_grads.iter().map(|f| e.func_atom(f)).collect();
    let rank_at_center = e.rank(&atoms, At::Center);
    let outcome = e.constancy(&atoms);
    let mut violations = Vec::new();
    for d in 0..e.directions.len() {
        for j in 0..e.radii.len() {
            let r = e.rank(&atoms, At::Sample(d, j));
            if r != rank_at_center {
                violations.push((d, j, r));
            }
        }
    }
    RankConstancy { outcome, rank_at_center, violations }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    G,
    H,
    Ray,
    Line,
}

struct BlockCtx {
    limiting: LimitingGenerators,
    branches: BranchSet,
    /// Atom of `∇(βᵀΦ)` per generator.
    atoms: Vec<usize>,
}

/// One family: chosen subgradients, equality indices and one branch option (or none) per block.
#[derive(Clone, Debug)]
struct Spec {
    g: Vec<(usize, usize)>,
    h: Vec<usize>,
    blocks: Vec<Option<usize>>,
}

struct Family {
    atoms: Vec<usize>,
    members: Vec<Member>,
    roles: Vec<Role>,
}

pub(crate) struct Ctx<'a> {
    prog: &'a Program,
    config: &'a CheckConfig,
    engine: Engine<'a>,
    active_g: Vec<usize>,
    /// Atoms (and subgradients at the base point) per active inequality.
    g_choices: Vec<Vec<(usize, Vec<Q>)>>,
    h_atoms: Vec<usize>,
    blocks: Vec<BlockCtx>,
    hooked: bool,
}

#[derive(Default)]
struct Search {
    witnesses: Vec<Witness>,
    marginal: Option<String>,
    families: usize,
    overflow: bool,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(prog: &'a Program, xbar: &[Q], config: &'a CheckConfig, hook: Option<&'a dyn SubgradientHook>) -> Result<Self> {
        prog.validate()?;
        if xbar.len() != prog.dim() {
            return Err(Error::Dimension { expected: prog.dim(), got: xbar.len() });
        }
        let r = prog.residual_at(xbar)?;
        if r.total > config.feasibility_tol {
            return Err(Error::Infeasible { violation: r.total });
        }
        let dim = prog.dim();
        let mut engine = Engine::new(dim, xbar.to_vec(), config.scheme.clone(), config.rank).with_hook(hook);
        let active_g = prog.active_inequalities(xbar, config.feasibility_tol)?;
        let mut g_choices = Vec::new();
        for &i in &active_g {
            let choices = match hook {
                Some(h) => {
                    let subs = h.subgradients(i, xbar);
                    subs.into_iter().map(|v| (engine.subgradient_atom(i, v.clone()), v)).collect()
                }
                None => {
                    let a = engine.gradient_atom(&prog.g[i]);
                    vec![(a, engine.vector(a, At::Center))]
                }
            };
            g_choices.push(choices);
        }
        let h_atoms = prog.h.iter().map(|h| engine.gradient_atom(h)).collect();
        let mut blocks = Vec::new();
        for b in &prog.blocks {
            let y = b.map.eval(xbar);
            let limiting = limiting_nc(&b.set, &y)?;
            let branches = BranchSet::new(&limiting);
            let atoms = branches
                .generators
                .iter()
                .map(|g| engine.gradient_atom(&Expr::linear_combination(&g.vector, &b.map.components)))
                .collect();
            blocks.push(BlockCtx { limiting, branches, atoms });
        }
        Ok(Ctx { prog, config, engine, active_g, g_choices, h_atoms, blocks, hooked: hook.is_some() })
    }

    fn report(&self, cq: CqName, verdict: Verdict, search: Search, mut notes: Vec<String>) -> CqReport {
        if let Some(m) = search.marginal {
            notes.push(m);
        }
        if search.overflow {
            notes.push(format!("enumeration exceeds the cap of {} families", self.config.cap));
        }
        let mut ws = search.witnesses.into_iter();
        CqReport {
            cq,
            verdict,
            witness: ws.next(),
            extra_witnesses: ws.collect(),
            scheme: self.config.scheme.clone(),
            rank: self.config.rank,
            families_checked: search.families,
            notes,
        }
    }

    fn family(&self, spec: &Spec) -> Family {
        let mut f = Family { atoms: Vec::new(), members: Vec::new(), roles: Vec::new() };
        for &(k, c) in &spec.g {
            let (atom, v) = &self.g_choices[k][c];
            f.atoms.push(*atom);
            let choice = if self.hooked { v.clone() } else { Vec::new() };
            f.members.push(Member::G { index: self.active_g[k], choice });
            f.roles.push(Role::G);
        }
        for &i in &spec.h {
            f.atoms.push(self.h_atoms[i]);
            f.members.push(Member::H { index: i });
            f.roles.push(Role::H);
        }
        for (b, opt) in spec.blocks.iter().enumerate() {
            let Some(o) = opt else { continue };
            let bc = &self.blocks[b];
            for &gi in &bc.branches.options[*o] {
                let gen = &bc.branches.generators[gi];
                f.atoms.push(bc.atoms[gi]);
                f.members.push(Member::Phi { block: b, beta: gen.vector.clone(), line: gen.line });
                f.roles.push(if gen.line { Role::Line } else { Role::Ray });
            }
        }
        f
    }

    /// Visits every family formed from the given equality index sets; `None` when over the cap.
    fn specs(&self, h_sets: &[Vec<usize>]) -> Option<Vec<Spec>> {
        let mut count: usize = h_sets.len();
        for c in &self.g_choices {
            count = count.checked_mul(1 + c.len())?;
        }
        for b in &self.blocks {
            count = count.checked_mul(1 + b.branches.options.len())?;
        }
        if count > self.config.cap {
            return None;
        }
        let mut g_sets: Vec<Vec<(usize, usize)>> = vec![vec![]];
        for (k, c) in self.g_choices.iter().enumerate() {
            let mut next = Vec::new();
            for s in &g_sets {
                next.push(s.clone());
                for ci in 0..c.len() {
                    let mut t = s.clone();
                    t.push((k, ci));
                    next.push(t);
                }
            }
            g_sets = next;
        }
        let mut block_sets: Vec<Vec<Option<usize>>> = vec![vec![]];
        for b in &self.blocks {
            let mut next = Vec::new();
            for s in &block_sets {
                for o in std::iter::once(None).chain((0..b.branches.options.len()).map(Some)) {
                    let mut t = s.clone();
                    t.push(o);
                    next.push(t);
                }
            }
            block_sets = next;
        }
        let mut out = Vec::with_capacity(count);
        for bs in &block_sets {
            for gs in &g_sets {
                for hs in h_sets {
                    out.push(Spec { g: gs.clone(), h: hs.clone(), blocks: bs.clone() });
                }
            }
        }
        Some(out)
    }

    fn candidate(&self, fam: &Family, coefficients: Vec<Q>) -> MultiplierCandidate {
        let mut lambda_g = vec![Q::zero(); self.prog.g.len()];
        let mut lambda_h = vec![Q::zero(); self.prog.h.len()];
        let mut eta: Vec<Vec<Q>> = self.prog.blocks.iter().map(|b| vec![Q::zero(); b.set.dim]).collect();
        let mut branch: Vec<BranchChoice> =
            self.prog.blocks.iter().map(|_| BranchChoice { rays: vec![], lines: vec![] }).collect();
        for (m, c) in fam.members.iter().zip(&coefficients) {
            match m {
                Member::G { index, .. } => lambda_g[*index] += c,
                Member::H { index } => lambda_h[*index] += c,
                Member::Phi { block, beta, line } => {
                    eta[*block] = add(&eta[*block], &scale(beta, c));
                    if *line {
                        branch[*block].lines.push(beta.clone());
                    } else {
                        branch[*block].rays.push(beta.clone());
                    }
                }
            }
        }
        MultiplierCandidate { lambda_g, lambda_h, eta, branch, members: fam.members.clone(), coefficients }
    }

    fn sequence_witness(&self, kind: WitnessKind, fam: &Family, cand: Option<MultiplierCandidate>, direction: usize, ranks: Vec<usize>, center_rank: usize) -> Witness {
        let levels: Vec<usize> = self.engine.witness_levels().collect();
        Witness {
            kind,
            members: fam.members.clone(),
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

    fn h_basis(&mut self) -> Vec<usize> {
        let vs = self.engine.vectors(&self.h_atoms.clone(), At::Center);
        greedy_basis(&vs)
    }

    fn h_subsets(&self) -> Vec<Vec<usize>> {
        let m = self.prog.h.len();
        (0u64..(1u64 << m)).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect()).collect()
    }

    fn record_outcome(&self, search: &mut Search, outcome: FamilyOutcome, w: impl FnOnce(usize, Vec<usize>) -> Witness, what: &str) -> bool {
        match outcome {
            FamilyOutcome::Stable => false,
            FamilyOutcome::Broken { direction, ranks } => {
                search.witnesses.push(w(direction, ranks));
                !self.config.all_witnesses
            }
            FamilyOutcome::Marginal { direction } => {
                search.marginal.get_or_insert_with(|| format!("{what} is marginal along direction {direction}"));
                false
            }
        }
    }

    /// Condition (i) of the relaxed conditions; returns a failing witness or marginal note.
    fn h_rank_condition(&mut self, search: &mut Search) -> bool {
        let atoms = self.h_atoms.clone();
        let center = self.engine.rank(&atoms, At::Center);
        let outcome = self.engine.constancy(&atoms);
        let fam = Family {
            atoms: atoms.clone(),
            members: (0..atoms.len()).map(|index| Member::H { index }).collect(),
            roles: vec![Role::H; atoms.len()],
        };
        self.record_outcome(
            search,
            outcome,
            |d, r| self.sequence_witness(WitnessKind::RankChange, &fam, None, d, r, center),
            "rank of the equality gradients",
        )
    }

    /// Families admitting a sign-constrained dependence at the base point must stay dependent.
    fn dependence_search(&mut self, search: &mut Search, h_sets: &[Vec<usize>], sign: fn(Role) -> Coef, need_gphi: bool) {
        let Some(specs) = self.specs(h_sets) else {
            search.overflow = true;
            return;
        };
        for spec in specs {
            let fam = self.family(&spec);
            if fam.atoms.is_empty() || (need_gphi && fam.roles.iter().all(|r| *r == Role::H)) {
                continue;
            }
            search.families += 1;
            let coefs: Vec<Coef> = fam.roles.iter().map(|r| sign(*r)).collect();
            let vs = self.engine.vectors(&fam.atoms, At::Center);
            let Some(c) = signed_dependence(&vs, &coefs) else { continue };
            let cand = self.candidate(&fam, c);
            let outcome = self.engine.dependence(&fam.atoms);
            let center = self.engine.rank(&fam.atoms, At::Center);
            let stop = self.record_outcome(
                search,
                outcome,
                |d, r| self.sequence_witness(WitnessKind::Independent, &fam, Some(cand), d, r, center),
                "dependence of a multiplier family",
            );
            if stop {
                return;
            }
        }
    }

    fn constancy_search(&mut self, search: &mut Search, h_sets: &[Vec<usize>]) {
        let Some(specs) = self.specs(h_sets) else {
            search.overflow = true;
            return;
        };
        for spec in specs {
            let fam = self.family(&spec);
            if fam.atoms.is_empty() {
                continue;
            }
            search.families += 1;
            let center = self.engine.rank(&fam.atoms, At::Center);
            let outcome = self.engine.constancy(&fam.atoms);
            if self.record_outcome(
                search,
                outcome,
                |d, r| self.sequence_witness(WitnessKind::RankChange, &fam, None, d, r, center),
                "rank of a family",
            ) {
                return;
            }
        }
    }
}

fn verdict_of(search: &Search) -> Verdict {
    if !search.witnesses.is_empty() {
        Verdict::FailsWitnessed
    } else if search.marginal.is_some() || search.overflow {
        Verdict::Inconclusive
    } else {
        Verdict::HoldsSampled
    }
}

fn rcpld_sign(r: Role) -> Coef {
    match r {
        Role::G | Role::Ray => Coef::Positive,
        Role::H => Coef::Free,
        Role::Line => Coef::NonZero,
    }
}

fn cpld_sign(r: Role) -> Coef {
    match r {
        Role::G | Role::Ray => Coef::Positive,
        Role::H | Role::Line => Coef::NonZero,
    }
}

fn ercpld_sign(r: Role) -> Coef {
    match r {
        Role::G => Coef::Positive,
        Role::H => Coef::Free,
        Role::Ray | Role::Line => Coef::NonZero,
    }
}

fn rcpld_in(ctx: &mut Ctx) -> CqReport {
    let mut s = Search::default();
    let stop = ctx.h_rank_condition(&mut s);
    if !stop {
        let j = ctx.h_basis();
        ctx.dependence_search(&mut s, &[j], rcpld_sign, true);
    }
    let v = verdict_of(&s);
    ctx.report(CqName::Rcpld, v, s, vec![])
}

pub fn check_rcpld(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    Ok(rcpld_in(&mut Ctx::new(p, xbar, config, None)?))
}

pub fn check_ercpld(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let mut s = Search::default();
    if !ctx.h_rank_condition(&mut s) {
        let j = ctx.h_basis();
        ctx.dependence_search(&mut s, &[j], ercpld_sign, true);
    }
    let v = verdict_of(&s);
    Ok(ctx.report(CqName::Ercpld, v, s, vec![]))
}

pub fn check_cpld(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let mut s = Search::default();
    let hs = ctx.h_subsets();
    ctx.dependence_search(&mut s, &hs, cpld_sign, false);
    let v = verdict_of(&s);
    Ok(ctx.report(CqName::Cpld, v, s, vec![]))
}

pub fn check_crcq(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let mut s = Search::default();
    let hs = ctx.h_subsets();
    ctx.constancy_search(&mut s, &hs);
    let v = verdict_of(&s);
    Ok(ctx.report(CqName::Crcq, v, s, vec![]))
}

pub fn check_rcrcq(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let mut s = Search::default();
    let all: Vec<usize> = (0..p.h.len()).collect();
    ctx.constancy_search(&mut s, &[all]);
    let v = verdict_of(&s);
    Ok(ctx.report(CqName::Rcrcq, v, s, vec![]))
}

/// Relaxed condition on every subsystem selected by a partition through the base point.
pub fn check_prcpld(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    Ctx::new(p, xbar, config, None)?;
    let parts = p.admissible_partitions(xbar)?;
    let mut notes = Vec::new();
    let mut families = 0;
    let mut witnesses = Vec::new();
    let mut inconclusive = false;
    for part in &parts {
        let sub = p.subsystem(part)?;
        let r = rcpld_in(&mut Ctx::new(&sub, xbar, config, None)?);
        families += r.families_checked;
        match r.verdict {
            Verdict::FailsWitnessed => {
                for mut w in r.witness.into_iter().chain(r.extra_witnesses) {
                    w.partition = Some(part.clone());
                    witnesses.push(w);
                }
                if !config.all_witnesses {
                    break;
                }
            }
            Verdict::Inconclusive => {
                inconclusive = true;
                notes.extend(r.notes.iter().map(|n| format!("partition {part:?}: {n}")));
            }
            Verdict::HoldsSampled => {}
        }
    }
    let verdict = if !witnesses.is_empty() {
        Verdict::FailsWitnessed
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::HoldsSampled
    };
    notes.insert(0, format!("{} admissible partitions", parts.len()));
    let mut ws = witnesses.into_iter();
    Ok(CqReport {
        cq: CqName::Prcpld,
        verdict,
        witness: ws.next(),
        extra_witnesses: ws.collect(),
        scheme: config.scheme.clone(),
        rank: config.rank,
        families_checked: families,
        notes,
    })
}

/// Linear independence with `η̄_i` ranging over the sum of spans of the active pieces' normal cones.
pub fn check_licq(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let mut fam = Family { atoms: vec![], members: vec![], roles: vec![] };
    for (k, &i) in ctx.active_g.iter().enumerate() {
        fam.atoms.push(ctx.g_choices[k][0].0);
        fam.members.push(Member::G { index: i, choice: vec![] });
        fam.roles.push(Role::G);
    }
    for (i, &a) in ctx.h_atoms.iter().enumerate() {
        fam.atoms.push(a);
        fam.members.push(Member::H { index: i });
        fam.roles.push(Role::H);
    }
    for (b, block) in p.blocks.iter().enumerate() {
        let y = block.map.eval(xbar);
        let mut span = Vec::new();
        for r in active_pieces(&block.set, &y, 0.0)? {
            let nc = normal_cone(&block.set.pieces[r], &y)?;
            span.extend(nc.rays.iter().chain(&nc.lines).cloned());
        }
        for k in greedy_basis(&span) {
            let beta = span[k].clone();
            let atom = ctx.engine.gradient_atom(&Expr::linear_combination(&beta, &block.map.components));
            fam.atoms.push(atom);
            fam.members.push(Member::Phi { block: b, beta, line: true });
            fam.roles.push(Role::Line);
        }
    }
    let vs = ctx.engine.vectors(&fam.atoms, At::Center);
    let mut s = Search { families: 1, ..Default::default() };
    if !vs.is_empty() {
        let cols: Vec<Vec<Q>> = (0..p.dim()).map(|r| vs.iter().map(|v| v[r].clone()).collect()).collect();
        if let Some(c) = nullspace(&cols, vs.len()).into_iter().next() {
            let cand = ctx.candidate(&fam, c);
            s.witnesses.push(Witness {
                kind: WitnessKind::SpanMultiplier,
                members: fam.members.clone(),
                candidate: Some(cand),
                direction_index: None,
                direction: vec![],
                levels: vec![],
                radii: vec![],
                ranks: vec![],
                center_rank: crate::linalg::rank_q(&vs),
                partition: None,
            });
        }
    }
    let v = verdict_of(&s);
    let notes = if ctx.active_g.is_empty() { vec![] } else { vec!["inequality multipliers are sign-free".into()] };
    Ok(ctx.report(CqName::Licq, v, s, notes))
}

/// No nonzero abnormal multiplier with `λ_g >= 0` and `η̄_i` in the limiting normal cones.
pub fn check_nnamcq(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    let ctx = Ctx::new(p, xbar, config, None)?;
    let d = p.dim();
    let ng = ctx.active_g.len();
    let nh = p.h.len();
    let ps: Vec<usize> = p.blocks.iter().map(|b| b.set.dim).collect();
    let nvar = ng + nh + ps.iter().sum::<usize>();
    let mut combos: usize = 1;
    for b in &ctx.blocks {
        combos = combos.saturating_mul(b.limiting.strata.len().max(1));
    }
    let mut s = Search::default();
    if combos > config.cap {
        s.overflow = true;
        return Ok(ctx.report(CqName::Nnamcq, Verdict::Inconclusive, s, vec![]));
    }
    let mut grads: Vec<Vec<Q>> = ctx.g_choices.iter().map(|c| c[0].1.clone()).collect();
    grads.extend(p.h.iter().map(|h| h.gradient(d).eval(xbar)));
    let jacs: Vec<Vec<Vec<Q>>> = p.blocks.iter().map(|b| b.map.jacobian().eval(xbar)).collect();
    let hreps: Vec<Vec<crate::geometry::HRep>> =
        ctx.blocks.iter().map(|b| b.limiting.strata.iter().map(|s| dd_vrep_to_hrep(&s.cone)).collect()).collect();
    let choices: Vec<Vec<usize>> = hreps.iter().map(|h| (0..h.len()).collect()).collect();
    for combo in crate::model::cartesian(&choices) {
        s.families += 1;
        let mut eqs: Vec<Vec<Q>> = (0..d)
            .map(|r| {
                let mut row: Vec<Q> = grads.iter().map(|g| g[r].clone()).collect();
                for j in &jacs {
                    row.extend(j.iter().map(|jr| jr[r].clone()));
                }
                row
            })
            .collect();
        let mut les = Vec::new();
        let mut off = ng + nh;
        for (b, &st) in combo.iter().enumerate() {
            let h = &hreps[b][st];
            let embed = |v: &Vec<Q>| {
                let mut row = vec![Q::zero(); nvar];
                for (k, x) in v.iter().enumerate() {
                    row[off + k] = x.clone();
                }
                row
            };
            les.extend(h.ineqs.iter().map(embed));
            eqs.extend(h.eqs.iter().map(embed));
            off += ps[b];
        }
        let nonneg: Vec<bool> = (0..nvar).map(|k| k < ng).collect();
        if let Some(x) = nonzero_in_cone(nvar, &nonneg, &eqs, &les) {
            let mut lambda_g = vec![Q::zero(); p.g.len()];
            for (k, &i) in ctx.active_g.iter().enumerate() {
                lambda_g[i] = x[k].clone();
            }
            let mut eta = Vec::new();
            let mut off = ng + nh;
            for &pi in &ps {
                eta.push(x[off..off + pi].to_vec());
                off += pi;
            }
            let branch = combo
                .iter()
                .enumerate()
                .map(|(b, &st)| {
                    let c = &ctx.blocks[b].limiting.strata[st].cone;
                    BranchChoice { rays: c.rays.clone(), lines: c.lines.clone() }
                })
                .collect();
            let mut members: Vec<Member> = ctx.active_g.iter().map(|&index| Member::G { index, choice: vec![] }).collect();
            members.extend((0..nh).map(|index| Member::H { index }));
            let mut coefficients: Vec<Q> = x[..ng + nh].to_vec();
            for (b, e) in eta.iter().enumerate() {
                for (k, ek) in e.iter().enumerate() {
                    members.push(Member::Phi { block: b, beta: crate::rational::unit(ps[b], k), line: true });
                    coefficients.push(ek.clone());
                }
            }
            let cand = MultiplierCandidate { lambda_g, lambda_h: x[ng..ng + nh].to_vec(), eta, branch, members: members.clone(), coefficients };
            s.witnesses.push(Witness {
                kind: WitnessKind::Multiplier,
                members,
                candidate: Some(cand),
                direction_index: None,
                direction: vec![],
                levels: vec![],
                radii: vec![],
                ranks: vec![],
                center_rank: 0,
                partition: None,
            });
            if !config.all_witnesses {
                break;
            }
        }
    }
    let v = verdict_of(&s);
    Ok(ctx.report(CqName::Nnamcq, v, s, vec![]))
}

/// Every multiplier family found by the relaxed search at the base point.
pub fn enumerate_multipliers(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<Vec<MultiplierCandidate>> {
    let mut ctx = Ctx::new(p, xbar, config, None)?;
    let j = ctx.h_basis();
    let specs = ctx.specs(&[j]).ok_or(Error::CapExceeded(config.cap))?;
    let mut out = Vec::new();
    for spec in specs {
        let fam = ctx.family(&spec);
        if fam.roles.iter().all(|r| *r == Role::H) {
            continue;
        }
        let coefs: Vec<Coef> = fam.roles.iter().map(|r| rcpld_sign(*r)).collect();
        let vs = ctx.engine.vectors(&fam.atoms, At::Center);
        if let Some(c) = signed_dependence(&vs, &coefs) {
            out.push(ctx.candidate(&fam, c));
        }
    }
    Ok(out)
}

pub fn check(name: CqName, p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<CqReport> {
    match name {
        CqName::Licq => check_licq(p, xbar, config),
        CqName::Nnamcq => check_nnamcq(p, xbar, config),
        CqName::Crcq => check_crcq(p, xbar, config),
        CqName::Rcrcq => check_rcrcq(p, xbar, config),
        CqName::Cpld => check_cpld(p, xbar, config),
        CqName::Ercpld => check_ercpld(p, xbar, config),
        CqName::Rcpld => check_rcpld(p, xbar, config),
        CqName::Prcpld => check_prcpld(p, xbar, config),
    }
}

pub fn check_all(p: &Program, xbar: &[Q], config: &CheckConfig) -> Result<Vec<CqReport>> {
    CqName::ALL.iter().map(|&n| check(n, p, xbar, config)).collect()
}

/// The relaxed condition with inequality vectors drawn from a subgradient hook.
pub fn check_with_hook(p: &Program, xbar: &[Q], config: &CheckConfig, hook: &dyn SubgradientHook) -> Result<CqReport> {
    Ok(rcpld_in(&mut Ctx::new(p, xbar, config, Some(hook))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::{twin_cones, mpec_toy};
    use crate::model::parse_model;
    use crate::rational::{primitive, qvec};

    #[test]
    fn twin_cones_rcpld_fails_with_a3() {
        let p = twin_cones();
        let x = qvec(&[0, 0, 0]);
        let cfg = CheckConfig { all_witnesses: true, ..Default::default() };
        let r = check_rcpld(&p, &x, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::FailsWitnessed);
        let etas: Vec<Vec<Q>> = r
            .witness
            .iter()
            .chain(&r.extra_witnesses)
            .map(|w| primitive(&w.candidate.as_ref().unwrap().eta[0]))
            .collect();
        assert!(etas.contains(&qvec(&[0, 1, -1])), "{etas:?}");
        for w in r.witness.iter().chain(&r.extra_witnesses) {
            assert!(super::super::replay(&p, &x, w, &cfg).unwrap());
        }
    }

    #[test]
    fn twin_cones_prcpld_holds() {
        let r = check_prcpld(&twin_cones(), &qvec(&[0, 0, 0]), &CheckConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsSampled, "{:?}", r.notes);
    }

    #[test]
    fn rank_constancy_examples() {
        let p = twin_cones();
        let grads: Vec<VectorFunc> = p.h.iter().map(|h| h.gradient(3)).collect();
        let s = SequenceScheme::default();
        let rc = rank_constancy(&grads, &qvec(&[0, 0, 0]), &s, RankMode::Exact);
        assert!(rc.constant_rank());
        assert_eq!(rc.rank_at_center, 2);
        let sq = parse_model("vars: x\nh: x^2\n").unwrap().into_program().unwrap();
        let rc = rank_constancy(&[sq.h[0].gradient(1)], &qvec(&[0]), &s, RankMode::Exact);
        assert!(!rc.constant_rank());
        assert_eq!(rc.rank_at_center, 0);
        let rc = rank_constancy(&[], &qvec(&[0]), &s, RankMode::Exact);
        assert!(rc.constant_rank() && rc.rank_at_center == 0);
    }

    #[test]
    fn mpec_toy_is_vacuous_for_relaxed_conditions() {
        let p = mpec_toy();
        let x = qvec(&[0, 0]);
        let cfg = CheckConfig::default();
        assert_eq!(check_rcpld(&p, &x, &cfg).unwrap().verdict, Verdict::HoldsSampled);
        assert_eq!(check_nnamcq(&p, &x, &cfg).unwrap().verdict, Verdict::HoldsSampled);
        assert!(enumerate_multipliers(&p, &x, &cfg).unwrap().is_empty());
    }

    #[test]
    fn linear_equality_licq() {
        let p = parse_model("vars: x1, x2\nh: x1\n").unwrap().into_program().unwrap();
        let r = check_licq(&p, &qvec(&[0, 0]), &CheckConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsSampled);
    }

    #[test]
    fn twin_cones_candidates_include_known_multiplier() {
        let c = enumerate_multipliers(&twin_cones(), &qvec(&[0, 0, 0]), &CheckConfig::default()).unwrap();
        assert!(c.iter().any(|m| primitive(&m.eta[0]) == qvec(&[0, 1, -1]) && m.lambda_h[0] == m.lambda_h[1] && m.lambda_h[0].is_negative()));
    }

    #[test]
    fn infeasible_point_is_rejected() {
        assert!(matches!(check_rcpld(&twin_cones(), &qvec(&[1, 1, 1]), &CheckConfig::default()), Err(Error::Infeasible { .. })));
    }
}
