//! The machine-readable record of a run.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::algebraic::ConstantsSnapshot;
use crate::numerics::Ball;
use crate::reduction::ReductionResult;
use crate::search::{distinct_values, SolutionTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Constants,
    Heights,
    Stage1,
    Stage2,
    Reduction1,
    Intermediate,
    Reduction2,
    Search,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Constants => "constants",
            Stage::Heights => "heights",
            Stage::Stage1 => "stage1",
            Stage::Stage2 => "stage2",
            Stage::Reduction1 => "reduction1",
            Stage::Intermediate => "intermediate",
            Stage::Reduction2 => "reduction2",
            Stage::Search => "search",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum CertificateStatus {
    Proved,
    Failed { stage: Stage, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightsRecord {
    pub h_alpha: Ball,
    pub h_gamma: Ball,
    pub h_a: Ball,
    pub h_5a: Ball,
    /// `(1/3) log 31 + (1/2) log 5 + log F_n` for `n = 1, 2, 3`.
    pub h_sqrt5a_over_fn_small: Vec<Ball>,
    /// `(1/3) log 31 + (1/2) log 5`; with `log F_n <= (n-1) log gamma` it
    /// bounds `h(sqrt5 a / F_n)` for `n >= 4`.
    pub h_sqrt5a_offset: Ball,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage1Record {
    /// `A_1, A_2, A_3` for `(alpha, gamma, 5a)`.
    pub a_values: Vec<Ball>,
    /// Matveev's `C` for the first form.
    pub lambda1_coefficient: Ball,
    /// `(1 + log B) <= kappa log(n+k)` once `n + k >= 10^10`.
    pub kappa: Ball,
    /// `c_1` with `n log gamma < c_1 log(n+k)`.
    pub n_log_gamma_bound: Ball,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage2Record {
    /// `A_3 = a3_per_n * max(n, 3)`.
    pub a3_per_n: Ball,
    /// Matveev's `C` for the second form is this times `max(n,3) log gamma`.
    pub lambda2_coefficient: Ball,
    /// `c_2` with `k < c_2 max(n,3) log gamma log(n+k)`.
    pub k_coefficient: Ball,
    /// `c_1 c_2`, so `k < c_1 c_2 log^2(2k)`.
    pub combined_coefficient: Ball,
    pub k_raw_bound: Ball,
    #[serde_as(as = "DisplayFromStr")]
    pub absolute_k_bound: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub absolute_m_bound: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction1Record {
    #[serde(rename = "A")]
    pub a: Ball,
    pub result: ReductionResult,
    pub n_bound: u64,
    pub published_index: usize,
    pub matches_published_index: bool,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntermediateRecord {
    pub coefficient: Ball,
    pub l: u32,
    pub k_raw_bound: Ball,
    #[serde_as(as = "DisplayFromStr")]
    pub k_bound: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub m_bound: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub n: u64,
    pub result: ReductionResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction2Record {
    #[serde(rename = "A")]
    pub a: Ball,
    pub family: Vec<FamilyEntry>,
    pub min_epsilon: Ball,
    pub min_epsilon_n: u64,
    pub k_bound: u64,
    pub m_bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRanges {
    pub m_max: u64,
    pub n_max: u64,
    pub k_max: u64,
}

/// `computed <= published`, decided on enclosures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub computed: String,
    pub published: String,
    pub holds: bool,
}

/// An inequality used by the argument and certified during the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedFact {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub lambda1: Ball,
    pub lambda2: Ball,
    /// Both forms are certified nonzero.
    pub nonzero: bool,
    /// For solutions: both residuals are below their analytic bounds.
    pub within_bounds: Option<bool>,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub precision: u32,
    pub status: CertificateStatus,
    pub constants: Option<ConstantsSnapshot>,
    pub heights: Option<HeightsRecord>,
    pub stage1: Option<Stage1Record>,
    pub stage2: Option<Stage2Record>,
    pub reduction1: Option<Reduction1Record>,
    pub intermediate: Option<IntermediateRecord>,
    pub reduction2: Option<Reduction2Record>,
    pub search_ranges: Option<SearchRanges>,
    pub solutions: Vec<SolutionTriple>,
    pub facts: Vec<CheckedFact>,
    pub comparisons: Vec<Comparison>,
    pub spot_checks: Vec<SpotCheck>,
    pub assumptions: Vec<Assumption>,
}

impl Certificate {
    pub(crate) fn empty(precision: u32) -> Self {
        Certificate {
            precision,
            status: CertificateStatus::Proved,
            constants: None,
            heights: None,
            stage1: None,
            stage2: None,
            reduction1: None,
            intermediate: None,
            reduction2: None,
            search_ranges: None,
            solutions: Vec::new(),
            facts: Vec::new(),
            comparisons: Vec::new(),
            spot_checks: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn distinct_values(&self) -> Vec<BigInt> {
        distinct_values(&self.solutions)
    }

    pub fn squares(&self) -> Vec<BigInt> {
        let sq: Vec<SolutionTriple> = self
            .solutions
            .iter()
            .filter(|t| t.n == t.k)
            .cloned()
            .collect();
        distinct_values(&sq)
    }

    /// True iff the run completed and the solutions have exactly the values
    /// `1, 2, 3, 4, 6, 9, 13`. Always derived from `solutions`.
    pub fn verdict(&self) -> bool {
        let expected: Vec<BigInt> = [1, 2, 3, 4, 6, 9, 13].map(BigInt::from).to_vec();
        self.status == CertificateStatus::Proved
            && self.solutions.iter().all(SolutionTriple::verify)
            && self.distinct_values() == expected
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn all_comparisons_hold(&self) -> bool {
        self.comparisons.iter().all(|c| c.holds)
    }
}
