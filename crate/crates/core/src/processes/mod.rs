//! Factor of i.i.d. processes on the tree and the joint laws of their values
//! at two vertices.

mod gaussian;
mod graph;
mod joint;
mod listing;
mod local;
mod measurement;
mod rule;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use gaussian::{
    gaussian_cov, gaussian_sign_measure, loglog_slope, sample_signs, sign_corr, CovSeries, GaussianSignReport,
    GaussianSignSpec, DEFAULT_TAIL_CUTOFF, DEFAULT_TAIL_TOLERANCE,
};
pub use graph::{random_regular_graph, FiniteGraph};
pub use joint::{exact_joint, mc_joint, measure_rule, sample_pairs, PairRegion, DEFAULT_CONFIG_BUDGET};
pub use listing::{listing_finite_n_mi, listing_normalized_mi, ListingSetup};
pub use local::{
    check_coloring, check_sparse_set, sparse_coloring, sparse_coloring_with_cap, sparse_set_labeling,
    sparse_set_labeling_with_cap, Coloring, SparseSet, SparseSetCheck, DEFAULT_ROUND_CAP,
};
pub use measurement::{Context, MeasurementMethod, ProcessMeasurement, SCHEMA_VERSION};
pub use rule::{BlockFactorRule, LabeledTree};

/// The processes that can be selected by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    Identity,
    Majority,
    Parity,
    Listing,
    GaussianSign,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 5] = [
        ProcessKind::Identity,
        ProcessKind::Majority,
        ProcessKind::Parity,
        ProcessKind::Listing,
        ProcessKind::GaussianSign,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProcessKind::Identity => "identity",
            ProcessKind::Majority => "majority",
            ProcessKind::Parity => "parity",
            ProcessKind::Listing => "listing",
            ProcessKind::GaussianSign => "gaussian-sign",
        }
    }

    /// The block rule for the finite-label processes; `None` for listing and
    /// Gaussian signs, which have their own measurement routines.
    pub fn block_rule(&self, radius: usize, labels: usize) -> Result<Option<BlockFactorRule>> {
        Ok(match self {
            ProcessKind::Identity => Some(BlockFactorRule::identity(labels)?),
            ProcessKind::Majority => Some(BlockFactorRule::majority(radius)?),
            ProcessKind::Parity => Some(BlockFactorRule::parity(radius)?),
            ProcessKind::Listing | ProcessKind::GaussianSign => None,
        })
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|p| p.as_str()).collect();
                Error::InvalidInput(format!("unknown process {s:?}; expected one of {}", names.join(", ")))
            })
    }
}
