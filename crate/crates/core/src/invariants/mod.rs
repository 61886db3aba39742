//! Headline computations on top of [`crate::surgery`].

pub mod ambient;
pub mod domain;
pub mod hfk;
pub mod property_p;
pub mod zeta;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fcomplex::ComplexError;
use crate::surgery::SurgeryError;

pub use ambient::hf_hat_ambient;
pub use domain::TestDomain;
pub use hfk::{
    ahat_split_check, hfk_hat_dual, hfk_hat_dual_split, hfk_window, predicted_window,
    AhatSplitReport,
};
pub use property_p::{s3_pattern_check, S3PatternReport};
pub use zeta::{zeta_cone_plus, zeta_profile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("homology in class {class} changes between bounds {bound} and {wider}")]
    Unstable { class: i64, bound: i64, wider: i64 },
    #[error("{0}")]
    Precondition(String),
}

impl From<crate::dcone::CoefficientError> for InvariantError {
    fn from(e: crate::dcone::CoefficientError) -> Self {
        InvariantError::Surgery(e.into())
    }
}

/// Which construction produced the ranks of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    RationalCone,
    SplitRoute,
    AmbientLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub knot: String,
    pub p: i64,
    pub q: i64,
    /// Rank per class over the scanned window; classes outside it are zero.
    pub classes: BTreeMap<i64, usize>,
    pub stable: bool,
    pub provenance: Provenance,
    pub bound: i64,
}

impl HomologyReport {
    pub fn total_rank(&self) -> usize {
        self.classes.values().sum()
    }

    pub fn rank(&self, class: i64) -> usize {
        self.classes.get(&class).copied().unwrap_or(0)
    }

    /// Smallest and largest class of nonzero rank.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut nonzero = self.classes.iter().filter(|(_, &r)| r > 0).map(|(&s, _)| s);
        let first = nonzero.next()?;
        Some((first, nonzero.next_back().unwrap_or(first)))
    }
}
