//! End-to-end synthesis: ingest a problem, decompose it, process the factors
//! in rank order while accumulating Ω, and emit a replayable report.

mod cli;
mod problem;
mod report;
mod synth;
mod verify;

use thiserror::Error;

use crate::delta_invariants::DeltaError;
use crate::exact_linalg::LinalgError;
use crate::heisenberg_modules::ModuleError;
use crate::nilpotent_groups::NilpotentError;
use crate::symplectic::SymplecticError;

pub use cli::cli_main;
pub use problem::{Options, ProblemSpec, SCHEMA_VERSION};
pub use report::{FactorReport, FiniteFactorItem, HeisenbergStep, OmegaEntry, SynthesisReport};
pub use synth::{module_digest, omega_hat, processing_order, run_pipeline};
pub use verify::verify_report;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certificate `{check}` failed: {witness}")]
    Certificate { check: String, witness: String },
    #[error(transparent)]
    Nilpotent(#[from] NilpotentError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl PipelineError {
    pub(crate) fn certificate(check: impl Into<String>, witness: impl Into<String>) -> Self {
        PipelineError::Certificate {
            check: check.into(),
            witness: witness.into(),
        }
    }

    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::InvalidInput(_) => 2,
            _ => 1,
        }
    }
}
