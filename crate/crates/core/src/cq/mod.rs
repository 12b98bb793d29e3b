//! Constraint qualifications at a feasible point: multiplier enumeration, Carathéodory reduction,
//! positive linear dependence and sequence-sampled rank tests.

mod branch;
mod checks;
mod family;
mod replay;
mod sequence;

pub use branch::{covered, BranchSet, Generator};
pub use checks::{
    check, check_all, check_cpld, check_crcq, check_ercpld, check_licq, check_nnamcq, check_prcpld, check_rcpld,
    check_rcrcq, check_with_hook, enumerate_multipliers, rank_constancy, RankConstancy,
};
pub use family::{caratheodory_reduce, nonzero_in_cone, positive_linear_dependent, signed_dependence, Coef, Reduced};
pub use replay::replay;
pub use sequence::{At, Engine, FamilyOutcome, RankMode, SequenceScheme, SubgradientHook, Trend};

use crate::error::Error;
use crate::rational::Q;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    FailsWitnessed,
    HoldsSampled,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::FailsWitnessed => "FAILS_WITNESSED",
            Verdict::HoldsSampled => "HOLDS_SAMPLED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::HoldsSampled
    }

    pub fn fails(self) -> bool {
        self == Verdict::FailsWitnessed
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CqName {
    Licq,
    Nnamcq,
    Crcq,
    Rcrcq,
    Cpld,
    Ercpld,
    Rcpld,
    Prcpld,
}

impl CqName {
    pub const ALL: [CqName; 8] =
        [CqName::Licq, CqName::Nnamcq, CqName::Crcq, CqName::Rcrcq, CqName::Cpld, CqName::Ercpld, CqName::Rcpld, CqName::Prcpld];

    pub fn as_str(self) -> &'static str {
        match self {
            CqName::Licq => "licq",
            CqName::Nnamcq => "nnamcq",
            CqName::Crcq => "crcq",
            CqName::Rcrcq => "rcrcq",
            CqName::Cpld => "cpld",
            CqName::Ercpld => "ercpld",
            CqName::Rcpld => "rcpld",
            CqName::Prcpld => "prcpld",
        }
    }
}

impl fmt::Display for CqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CqName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        CqName::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Invalid(format!("unknown constraint qualification `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub scheme: SequenceScheme,
    pub rank: RankMode,
    /// Maximum number of families (or branch combinations) examined per check.
    pub cap: usize,
    pub feasibility_tol: f64,
    /// Keep searching after the first failing family and report every witness.
    pub all_witnesses: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            scheme: SequenceScheme::default(),
            rank: RankMode::Exact,
            cap: 10_000,
            feasibility_tol: crate::model::FEASIBILITY_TOL,
            all_witnesses: false,
        }
    }
}

/// A vector of a gradient family, evaluated at any point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Member {
    /// `∇g_index`, or the hook's subgradient nearest to `choice`.
    G {
        index: usize,
        #[serde(with = "crate::rational::serde_qvec", default, skip_serializing_if = "Vec::is_empty")]
        choice: Vec<Q>,
    },
    H { index: usize },
    /// `∇Φ_block(x)ᵀ beta`.
    Phi {
        block: usize,
        #[serde(with = "crate::rational::serde_qvec")]
        beta: Vec<Q>,
        line: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchChoice {
    #[serde(with = "crate::rational::serde_qmat")]
    pub rays: Vec<Vec<Q>>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub lines: Vec<Vec<Q>>,
}

impl BranchChoice {
    pub fn is_empty(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }
}

/// A nonzero solution of the multiplier equation at the base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierCandidate {
    #[serde(with = "crate::rational::serde_qvec")]
    pub lambda_g: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub lambda_h: Vec<Q>,
    #[serde(with = "crate::rational::serde_qmat")]
    pub eta: Vec<Vec<Q>>,
    pub branch: Vec<BranchChoice>,
    /// Members of the equation and their coefficients.
    pub members: Vec<Member>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub coefficients: Vec<Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// The family stays linearly independent along the sequence.
    Independent,
    /// The family's rank differs from its rank at the base point along the sequence.
    RankChange,
    /// A nonzero multiplier with `η̄_i` in the limiting normal cones.
    Multiplier,
    /// A nonzero multiplier with `η̄_i` in the sums of spans of the pieces' normal cones.
    SpanMultiplier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub members: Vec<Member>,
    pub candidate: Option<MultiplierCandidate>,
    pub direction_index: Option<usize>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub direction: Vec<Q>,
    pub levels: Vec<usize>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub radii: Vec<Q>,
    pub ranks: Vec<usize>,
    pub center_rank: usize,
    /// Set when the failure belongs to a subsystem.
    pub partition: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CqReport {
    pub cq: CqName,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_witnesses: Vec<Witness>,
    pub scheme: SequenceScheme,
    pub rank: RankMode,
    pub families_checked: usize,
    pub notes: Vec<String>,
}
