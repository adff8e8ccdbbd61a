//! Pauli-rotation ansätze on a dense statevector, exact and shot-sampled
//! expectation values, depolarizing noise and CNOT accounting.

mod circuit;
mod noise;
mod statevector;

use thiserror::Error;

pub use circuit::{
    count_cnots, prepare_ansatz_state, AnsatzCircuit, CircuitDump, CircuitStats, Rotation, TermMode,
};
pub use noise::{sample_expectation, FrameTable, NoiseModel, NoisyEstimator, ShotConfig};
pub use statevector::{expectation, overlap, Observable, StateVector};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },
    #[error("generator {0} is not anti-Hermitian")]
    NotAntiHermitian(String),
    #[error("observable is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("noise probability {0} outside [0, 1]")]
    InvalidNoise(f64),
    #[error("shot count must be at least 1")]
    NoShots,
}
