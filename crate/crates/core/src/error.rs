use thiserror::Error;

use crate::cfk::CfkError;
use crate::dcone::CoefficientError;
use crate::fcomplex::ComplexError;
use crate::invariants::InvariantError;
use crate::surgery::SurgeryError;

/// Any failure raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Cfk(#[from] CfkError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}
