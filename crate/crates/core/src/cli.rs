//! Command-line driver. The binary forwards its arguments to [`run`].
//!
//! Exit codes: 0 when every requested condition holds, 1 when any fails with a witness, 2 when
//! any is inconclusive, 3 for usage, parse and input errors.

use crate::cq::{self, BranchSet, CheckConfig, CqName, CqReport, Member, RankMode, SequenceScheme, Verdict};
use crate::disjunctive::{limiting_nc, regular_nc};
use crate::error::{Error, Result};
use crate::errorbound::{estimate_error_bound, ErrorBoundEstimate};
use crate::linalg::express_q;
use crate::model::{parse_model, ModelFile, Program, FEASIBILITY_TOL};
use crate::ortho::{self, omega_nc, OrthoKind};
use crate::rational::{fmt_q, fmt_vec, parse_q, q, qvec, Q};
use crate::stationarity::all_certificates;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

const TWIN_CONES: &str = include_str!("../programs/twin_cones.prog");
const EXPECTED_TWIN_CONES: &str = include_str!("../expected/example-4.1.txt");
const EXPECTED_OMEGA_E: &str = include_str!("../expected/omega-e-cones.txt");

#[derive(Parser, Debug)]
#[command(name = "mpdc", version, about = "Normal cones, constraint qualifications and error bounds for disjunctive programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check constraint qualifications at a point.
    Check(CheckArgs),
    /// Regular or limiting normal cone of one block's set at Φ(x).
    NormalCone(ConeArgs),
    /// Search for M-stationarity multipliers.
    Mstat(PointArgs),
    /// Sampled local error-bound modulus.
    Errorbound(BoundArgs),
    /// Rerun a frozen worked example and compare with the committed report.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    pub file: PathBuf,
    /// Comma-separated rationals, e.g. `0,1/2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    #[arg(long, value_enum, default_value = "text", env = "MPDC_FORMAT")]
    pub format: Format,
    #[arg(long, default_value_t = FEASIBILITY_TOL, env = "MPDC_TOL_FEAS")]
    pub tol_feas: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    /// Use floating-point rank with this relative tolerance instead of exact rank.
    #[arg(long, env = "MPDC_TOL_RANK")]
    pub tol_rank: Option<f64>,
    #[arg(long, default_value = "1/100", env = "MPDC_RADIUS0")]
    pub radius0: String,
    #[arg(long, default_value_t = 20, env = "MPDC_LEVELS")]
    pub levels: usize,
    /// Random directions added to the coordinate axes.
    #[arg(long, default_value_t = 64, env = "MPDC_DIRECTIONS")]
    pub directions: usize,
    #[arg(long, default_value_t = 0, env = "MPDC_SEED")]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000, env = "MPDC_CAP")]
    pub cap: usize,
    /// Report every failing family instead of stopping at the first.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Comma-separated condition names; every condition when omitted.
    #[arg(long, value_delimiter = ',')]
    pub cq: Vec<String>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ConeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0)]
    pub block: usize,
    #[arg(long, conflicts_with = "regular")]
    pub limiting: bool,
    #[arg(long)]
    pub regular: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(short = 'n', long = "samples", default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0, env = "MPDC_SEED")]
    pub seed: u64,
    /// Write per-sample rows to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleId {
    #[value(name = "example-4.1")]
    TwinCones,
    #[value(name = "omega-e-cones")]
    OmegaECones,
}

#[derive(Args, Debug, Clone)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub example: ExampleId,
}

/// Exit code and the text written to stdout.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses arguments (the first is the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return Outcome { code, stdout: e.render().to_string() };
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { code: 3, stdout: format!("error: {e}\n") },
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let out = run(std::env::args_os());
    if out.code == 3 {
        eprint!("{}", out.stdout);
    } else {
        print!("{}", out.stdout);
        let _ = std::io::stdout().flush();
    }
    out.code
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Check(a) => cmd_check(a),
        Command::NormalCone(a) => cmd_normal_cone(a),
        Command::Mstat(a) => cmd_mstat(a),
        Command::Errorbound(a) => cmd_errorbound(a),
        Command::Reproduce(a) => cmd_reproduce(a.example),
    }
}

pub fn parse_point(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(|t| parse_q(t).ok_or_else(|| Error::Invalid(format!("bad coordinate `{}`", t.trim()))))
        .collect()
}

fn load(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

fn load_at(a: &PointArgs) -> Result<(ModelFile, Vec<Q>)> {
    if !(a.tol_feas > 0.0) {
        return Err(Error::Invalid("--tol-feas must be positive".into()));
    }
    let m = load(&a.file)?;
    let x = parse_point(&a.at)?;
    if x.len() != m.dim() {
        return Err(Error::Dimension { expected: m.dim(), got: x.len() });
    }
    Ok((m, x))
}

impl SchemeArgs {
    pub fn config(&self, tol_feas: f64) -> Result<CheckConfig> {
        let r0 = parse_q(&self.radius0).ok_or_else(|| Error::Invalid(format!("bad --radius0 `{}`", self.radius0)))?;
        if !r0.is_positive() {
            return Err(Error::Invalid("--radius0 must be positive".into()));
        }
        if self.levels == 0 {
            return Err(Error::Invalid("--levels must be at least 1".into()));
        }
        let rank = match self.tol_rank {
            Some(t) if t > 0.0 => RankMode::Float { tol: t },
            Some(_) => return Err(Error::Invalid("--tol-rank must be positive".into())),
            None => RankMode::Exact,
        };
        let defaults = SequenceScheme::default();
        let scheme = SequenceScheme {
            r0,
            levels: self.levels,
            random_directions: self.directions,
            seed: self.seed,
            tail_start: defaults.tail_start.min(self.levels),
            witness_run: defaults.witness_run.min(self.levels + 1),
        };
        Ok(CheckConfig { scheme, rank, cap: self.cap, feasibility_tol: tol_feas, all_witnesses: self.all })
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    schema: String,
    program: String,
    #[serde(with = "crate::rational::serde_qvec")]
    point: Vec<Q>,
    engine: &'a str,
    reports: Vec<CqReport>,
}

fn exit_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let mut code = 0;
    for v in verdicts {
        code = match (code, v) {
            (_, Verdict::FailsWitnessed) | (1, _) => 1,
            (_, Verdict::Inconclusive) | (2, _) => 2,
            _ => code,
        };
    }
    code
}

/// Reports for the requested conditions; orthogonal programs use the specialized checkers
/// where one exists and the local reformulation otherwise.
pub fn check_model(m: &ModelFile, x: &[Q], names: &[CqName], config: &CheckConfig) -> Result<(Vec<CqReport>, &'static str)> {
    match m {
        ModelFile::Generic(p) => Ok((names.iter().map(|&n| cq::check(n, p, x, config)).collect::<Result<_>>()?, "generic")),
        ModelFile::Ortho(o) => {
            let local = ortho::to_generic(o, x)?;
            let mut out = Vec::new();
            for &n in names {
                out.push(match ortho::check_ortho(o, x, n, config) {
                    Some(r) => r?,
                    None => cq::check(n, &local, x, config)?,
                });
            }
            Ok((out, "ortho"))
        }
    }
}

fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    let (m, x) = load_at(&a.point)?;
    let config = a.scheme.config(a.point.tol_feas)?;
    let names: Vec<CqName> = if a.cq.is_empty() {
        CqName::ALL.to_vec()
    } else {
        a.cq.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let (reports, engine) = check_model(&m, &x, &names, &config)?;
    let code = exit_code(reports.iter().map(|r| r.verdict));
    let stdout = match a.point.format {
        Format::Json => {
            let out = CheckOutput {
                schema: format!("mpdc.check/{SCHEMA_VERSION}"),
                program: a.point.file.display().to_string(),
                point: x.clone(),
                engine,
                reports,
            };
            json(&out)
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                s += &describe_report(r);
            }
            s
        }
    };
    Ok(Outcome { code, stdout })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn describe_member(m: &Member) -> String {
    match m {
        Member::G { index, .. } => format!("grad g{}", index + 1),
        Member::H { index } => format!("grad h{}", index + 1),
        Member::Phi { block, beta, .. } => format!("grad Phi{}^T {}", block + 1, fmt_vec(beta)),
    }
}

pub fn describe_report(r: &CqReport) -> String {
    let mut s = format!("{} {}\n", r.cq, r.verdict.as_str());
    if let Some(w) = &r.witness {
        let members: Vec<String> = w.members.iter().map(describe_member).collect();
        s += &format!("  family: {}\n", members.join(", "));
        if let Some(c) = &w.candidate {
            let coefs: Vec<String> = c.coefficients.iter().map(fmt_q).collect();
            s += &format!("  coefficients: {}\n", coefs.join(", "));
            for (b, e) in c.eta.iter().enumerate() {
                if e.iter().any(|v| !v.is_zero()) {
                    s += &format!("  eta{} = {}\n", b + 1, fmt_vec(e));
                }
            }
        }
        if let Some(part) = &w.partition {
            let p: Vec<String> = part.iter().map(|r| format!("C{}", r + 1)).collect();
            s += &format!("  subsystem: {}\n", p.join(", "));
        }
        if let Some(d) = w.direction_index {
            s += &format!("  direction {d}, levels {:?}, ranks {:?} (rank {} at the point)\n", w.levels, w.ranks, w.center_rank);
        }
    }
    for n in &r.notes {
        s += &format!("  note: {n}\n");
    }
    s
}

#[derive(Serialize)]
struct ConeOutput {
    schema: String,
    block: usize,
    #[serde(with = "crate::rational::serde_qvec")]
    y: Vec<Q>,
    kind: &'static str,
    regular: Option<crate::geometry::ConeGenerators>,
    limiting: Option<crate::disjunctive::LimitingGenerators>,
}

fn cmd_normal_cone(a: &ConeArgs) -> Result<Outcome> {
    let (m, x) = load_at(&a.point)?;
    let p = m.program();
    let b = p.blocks.get(a.block).ok_or_else(|| Error::Invalid(format!("no block {}", a.block)))?;
    let y = b.map.eval(&x);
    let (regular, limiting) = if a.limiting { (None, Some(limiting_nc(&b.set, &y)?)) } else { (Some(regular_nc(&b.set, &y)?), None) };
    let stdout = match a.point.format {
        Format::Json => json(&ConeOutput {
            schema: format!("mpdc.normal-cone/{SCHEMA_VERSION}"),
            block: a.block,
            y: y.clone(),
            kind: if a.limiting { "limiting" } else { "regular" },
            regular,
            limiting,
        }),
        Format::Text => {
            let mut s = format!("Phi{}(x) = {}\n", a.block + 1, fmt_vec(&y));
            if let Some(r) = regular {
                s += &format!("regular normal cone: {}\n", r.describe());
            }
            if let Some(l) = limiting {
                s += &describe_limiting(&l);
            }
            s
        }
    };
    Ok(Outcome { code: 0, stdout })
}

fn describe_limiting(l: &crate::disjunctive::LimitingGenerators) -> String {
    let rays: Vec<String> = l.rays.iter().map(|r| fmt_vec(r)).collect();
    let lines: Vec<String> = l.lines.iter().map(|r| fmt_vec(r)).collect();
    let mut s = format!("limiting generators: rays {{{}}} lines {{{}}}\n", rays.join(", "), lines.join(", "));
    for st in &l.strata {
        let occ: Vec<String> = st.occupied.iter().map(|r| format!("C{}", r + 1)).collect();
        s += &format!("  stratum at {} in {}: {}\n", fmt_vec(&st.point), occ.join(" ∩ "), st.cone.describe());
    }
    s
}

#[derive(Serialize)]
struct MstatOutput {
    schema: String,
    #[serde(with = "crate::rational::serde_qvec")]
    point: Vec<Q>,
    stationary: bool,
    certificates: Vec<crate::stationarity::MStatCertificate>,
}

fn cmd_mstat(a: &PointArgs) -> Result<Outcome> {
    let (m, x) = load_at(a)?;
    let p = m.program();
    let r = p.residual_at(&x)?;
    if r.total > a.tol_feas {
        return Err(Error::Infeasible { violation: r.total });
    }
    let certs = all_certificates(&p, &x)?;
    let code = if certs.is_empty() { 1 } else { 0 };
    let stdout = match a.format {
        Format::Json => json(&MstatOutput {
            schema: format!("mpdc.mstat/{SCHEMA_VERSION}"),
            point: x,
            stationary: !certs.is_empty(),
            certificates: certs,
        }),
        Format::Text => {
            if certs.is_empty() {
                "not M-stationary: no multipliers in any branch\n".into()
            } else {
                let mut s = format!("M-stationary: {} branch certificate(s)\n", certs.len());
                for c in &certs {
                    let lg: Vec<String> = c.lambda_g.iter().map(fmt_q).collect();
                    let lh: Vec<String> = c.lambda_h.iter().map(fmt_q).collect();
                    let eta: Vec<String> = c.eta.iter().map(|e| fmt_vec(e)).collect();
                    s += &format!("  lambda_g ({}) lambda_h ({}) eta [{}]\n", lg.join(", "), lh.join(", "), eta.join(", "));
                }
                s
            }
        }
    };
    Ok(Outcome { code, stdout })
}

#[derive(Serialize)]
struct BoundOutput<'a> {
    schema: String,
    #[serde(with = "crate::rational::serde_qvec")]
    point: Vec<Q>,
    estimate: &'a ErrorBoundEstimate,
}

fn cmd_errorbound(a: &BoundArgs) -> Result<Outcome> {
    let (m, x) = load_at(&a.point)?;
    if !(a.eps > 0.0) || a.samples == 0 {
        return Err(Error::Invalid("--eps must be positive and -n at least 1".into()));
    }
    let est = estimate_error_bound(&m.program(), &x, a.eps, a.samples, a.seed)?;
    if let Some(path) = &a.csv {
        let f = std::fs::File::create(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        est.write_csv(f)?;
    }
    let stdout = match a.point.format {
        Format::Json => {
            let mut slim = est.clone();
            slim.samples.clear();
            json(&BoundOutput { schema: format!("mpdc.errorbound/{SCHEMA_VERSION}"), point: x, estimate: &slim })
        }
        Format::Text => {
            let mut s = format!("kappa_hat = {:.6} (eps {}, {} samples, seed {})\n", est.kappa_hat, a.eps, est.samples_requested, est.seed);
            for pp in &est.profile {
                s += &format!("  radius {:.6}: {:.6}\n", pp.radius, pp.kappa_hat);
            }
            s += &format!("  excluded near-feasible samples: {}\n", est.excluded);
            for f in &est.flags {
                s += &format!("  flag: {f}\n");
            }
            s
        }
    };
    Ok(Outcome { code: 0, stdout })
}

/// Renders the reproduction report of a worked example.
pub fn reproduce_text(id: ExampleId) -> Result<String> {
    match id {
        ExampleId::TwinCones => twin_cones_report(),
        ExampleId::OmegaECones => omega_e_report(),
    }
}

fn cmd_reproduce(id: ExampleId) -> Result<Outcome> {
    let got = reproduce_text(id)?;
    let expected = match id {
        ExampleId::TwinCones => EXPECTED_TWIN_CONES,
        ExampleId::OmegaECones => EXPECTED_OMEGA_E,
    };
    if got == expected {
        Ok(Outcome { code: 0, stdout: format!("{got}matches the committed report\n") })
    } else {
        Ok(Outcome { code: 1, stdout: format!("{got}DIFFERS from the committed report:\n{expected}") })
    }
}

fn twin_cones_report() -> Result<String> {
    let p: Program = parse_model(TWIN_CONES)?.into_program()?;
    let x = qvec(&[0, 0, 0]);
    let d = p.dim();
    let mut s = String::from("system with h: R^3 -> R^2, Phi: R^3 -> R^3, Gamma = C1 ∪ C2, at (0, 0, 0)\n");
    let gh: Vec<Vec<Q>> = p.h.iter().map(|h| h.gradient(d).eval(&x)).collect();
    for (i, g) in gh.iter().enumerate() {
        s += &format!("grad h{}(0) = {}\n", i + 1, fmt_vec(g));
    }
    let jac = p.blocks[0].map.jacobian();
    let a3 = qvec(&[0, 1, -1]);
    let pa3 = jac.transpose_apply(&x, &a3);
    s += &format!("grad Phi(0)^T a3 = {}\n", fmt_vec(&pa3));
    let sum: Vec<Q> = (0..d).map(|k| -&gh[0][k] - &gh[1][k] + &pa3[k]).collect();
    s += &format!("-grad h1 - grad h2 + grad Phi^T a3 = {}\n", fmt_vec(&sum));
    let y = p.blocks[0].map.eval(&x);
    s += &format!("regular normal cone: {}\n", regular_nc(&p.blocks[0].set, &y)?.describe());
    s += &describe_limiting(&limiting_nc(&p.blocks[0].set, &y)?);
    let config = CheckConfig::default();
    for name in [CqName::Rcpld, CqName::Prcpld] {
        s += &describe_report(&cq::check(name, &p, &x, &config)?);
    }
    Ok(s)
}

fn omega_e_report() -> Result<String> {
    let mut s = String::new();
    let set = OrthoKind::Mpec.set();
    for y in [qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[0, 0])] {
        s += &format!("regular normal cone at {}: {}\n", fmt_vec(&y), regular_nc(&set, &y)?.describe());
    }
    let origin = qvec(&[0, 0]);
    let l = omega_nc(OrthoKind::Mpec, &origin)?;
    if !l.cones().iter().zip(limiting_nc(&set, &origin)?.cones()).all(|(a, b)| a.same_cone(&b)) {
        return Err(Error::Invalid("closed-form and generic limiting cones differ".into()));
    }
    s += "limiting normal cone at (0, 0):\n";
    for st in &l.strata {
        s += &format!("  {}\n", st.cone.describe());
    }
    let branches = BranchSet::new(&l);
    let cases = [
        ("(i)", qvec(&[-1, -1])),
        ("(ii)", qvec(&[0, 1])),
        ("(ii)", qvec(&[0, -1])),
        ("(iii)", qvec(&[1, 0])),
        ("(iii)", qvec(&[-1, 0])),
        ("(iv)", qvec(&[0, 0])),
    ];
    for (label, eta) in cases {
        let mut opts = Vec::new();
        for opt in &branches.options {
            let vs: Vec<Vec<Q>> = opt.iter().map(|&k| branches.generators[k].vector.clone()).collect();
            let Some(c) = express_q(&vs, &eta) else { continue };
            let strict = opt.iter().zip(&c).all(|(&k, c)| if branches.generators[k].line { !c.is_zero() } else { c > &q(0) });
            if strict {
                let part = |line: bool| {
                    let v: Vec<String> =
                        opt.iter().filter(|&&k| branches.generators[k].line == line).map(|&k| fmt_vec(&branches.generators[k].vector)).collect();
                    v.join(", ")
                };
                opts.push(format!("A^I = {{{}}}, A^E = {{{}}}", part(false), part(true)));
            }
        }
        if opts.is_empty() {
            opts.push("A^I = {}, A^E = {}".into());
        }
        s += &format!("case {label} eta = {}: {}\n", fmt_vec(&eta), opts.join(" or "));
    }
    Ok(s)
}
