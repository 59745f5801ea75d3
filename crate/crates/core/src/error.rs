use crate::spectra::SpectraError;
use crate::{evolve::EvolveError, gates::GateError, operators::OperatorError, poly::PolyError};

/// Any failure surfaced by the pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Gate(#[from] GateError),
}
