use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::engine::EngineError;
use crate::io::{FormatError, VerifyError};
use crate::oracle::OracleError;
use crate::polynomials::PolyError;
use crate::sequence::SequenceError;

/// Umbrella error for callers that drive several modules at once.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
