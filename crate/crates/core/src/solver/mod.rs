//! VQE driver, exact diagonalization oracle and spin diagnostics.

mod optimize;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use optimize::{nelder_mead, spsa_minimize, Method, Minimum, OptimizerConfig, SpsaGains};

use crate::hamiltonian::{
    matrix_in_sector, parity_encode_operator, FermionOp, HamiltonianError, PauliSum, Sector,
};
use crate::partition::{SectorBasis, Subspace};
use crate::pool::ExcitationOperator;
use crate::simulator::{
    AnsatzCircuit, NoiseModel, NoisyEstimator, Observable, ShotConfig, SimError, StateVector,
    TermMode,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("matrix is not symmetric (deviation {0:e})")]
    Asymmetric(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Simulator(#[from] SimError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

/// Ascending eigenpairs of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct EdResult {
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
    /// `⟨S²⟩` per eigenvector, when computed.
    pub spin_squared: Vec<f64>,
}

impl EdResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// Fill `spin_squared` from the S² matrix in the same basis.
    pub fn with_spin(mut self, s2: &DMatrix<f64>) -> Self {
        self.spin_squared = (0..self.eigenvalues.len())
            .map(|i| {
                let v = self.eigenvectors.column(i);
                v.dot(&(s2 * v))
            })
            .collect();
        self
    }

    /// Largest `‖Hv − λv‖` over all pairs.
    pub fn max_residual(&self, matrix: &DMatrix<f64>) -> f64 {
        (0..self.eigenvalues.len())
            .map(|i| {
                let v = self.eigenvectors.column(i);
                (matrix * v - v * self.eigenvalues[i]).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn exact_diagonalize(matrix: &DMatrix<f64>) -> Result<EdResult, SolverError> {
    if !matrix.is_square() {
        return Err(SolverError::DimensionMismatch {
            expected: matrix.nrows(),
            found: matrix.ncols(),
        });
    }
    let asym = (matrix - matrix.transpose()).abs().max();
    if asym > 1e-10 {
        return Err(SolverError::Asymmetric(asym));
    }
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EdResult {
        eigenvalues,
        eigenvectors,
        spin_squared: Vec::new(),
    })
}

/// Total spin `S` with `S(S+1) = s2`, if it is an integer or half-integer
/// within `tol`.
pub fn spin_quantum_number(s2: f64, tol: f64) -> Option<f64> {
    if s2 < -tol {
        return None;
    }
    let s = (-1.0 + (1.0 + 4.0 * s2.max(0.0)).sqrt()) / 2.0;
    let half = (2.0 * s).round() / 2.0;
    ((half * (half + 1.0) - s2).abs() <= tol).then_some(half)
}

/// Parity-encoded `S²` on the reduced register of a sector.
pub fn spin_squared_operator(sector: Sector) -> Result<PauliSum, SolverError> {
    Ok(parity_encode_operator(&FermionOp::spin_squared(sector.n_orbitals), sector)?)
}

/// `S²` realized as a sector matrix.
pub fn spin_squared_matrix(basis: &SectorBasis) -> Result<DMatrix<f64>, SolverError> {
    Ok(matrix_in_sector(&spin_squared_operator(basis.sector)?, basis)?)
}

/// `⟨ψ|S²|ψ⟩` on the full register.
pub fn spin_squared_expectation(state: &StateVector, sector: Sector) -> Result<f64, SolverError> {
    let s2 = Observable::new(&spin_squared_operator(sector)?)?;
    Ok(s2.expectation(state)?)
}

/// `|⟨a|b⟩|²`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64, SolverError> {
    Ok(crate::simulator::overlap(a, b)?)
}

/// Place a sector (or subspace) coefficient vector on the full register.
pub fn embed_sector_vector(
    basis: &SectorBasis,
    members: Option<&Subspace>,
    coeffs: &DVector<f64>,
) -> Result<StateVector, SolverError> {
    let idx: Vec<usize> = match members {
        Some(s) => s.members.clone(),
        None => (0..basis.len()).collect(),
    };
    if idx.len() != coeffs.len() {
        return Err(SolverError::DimensionMismatch {
            expected: idx.len(),
            found: coeffs.len(),
        });
    }
    let mut psi = StateVector::basis(basis.n_qubits(), 0);
    psi.amps[0] = Complex64::default();
    for (k, &i) in idx.iter().enumerate() {
        psi.amps[basis.qubit(i).bits as usize] = Complex64::new(coeffs[k], 0.0);
    }
    Ok(psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Backend {
    Statevector,
    Sampled { shots: ShotConfig, noise: NoiseModel },
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Statevector => "sv",
            Backend::Sampled { .. } => "shots",
        }
    }
}

/// Qubit Hamiltonian prepared for repeated exact evaluation.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    pub hamiltonian: PauliSum,
    observable: Observable,
}

impl VqeProblem {
    pub fn new(hamiltonian: PauliSum) -> Result<Self, SolverError> {
        let observable = Observable::new(&hamiltonian)?;
        Ok(VqeProblem {
            hamiltonian,
            observable,
        })
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn energy(&self, circuit: &AnsatzCircuit, theta: &[f64]) -> Result<f64, SolverError> {
        Ok(self.observable.expectation(&circuit.prepare(theta)?)?)
    }

    /// Ground energy over the whole reduced register.
    pub fn register_ground_energy(&self) -> Result<f64, SolverError> {
        Ok(exact_diagonalize(&self.observable.to_dense())?.ground_energy())
    }
}

#[derive(Debug, Clone)]
pub struct VqeResult {
    /// Reported energy: exact on the statevector backend, sampled otherwise.
    pub energy: f64,
    /// Standard error of a sampled energy.
    pub stderr: Option<f64>,
    /// Noise-free energy at the optimal parameters.
    pub exact_energy: f64,
    pub theta: Vec<f64>,
    /// Final state on the statevector backend.
    pub state: Option<StateVector>,
    pub evaluations: usize,
    pub trial: usize,
}

/// Seed for stream `stream` of trial `trial` under a master seed.
pub fn derive_seed(master: u64, trial: usize, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((trial as u64) << 8) | stream);
    rng.next_u64()
}

/// Minimize `⟨ψ(θ)|H|ψ(θ)⟩` starting from `theta0` (zeros when `None`).
pub fn run_vqe(
    problem: &VqeProblem,
    circuit: &AnsatzCircuit,
    optimizer: &OptimizerConfig,
    backend: &Backend,
    theta0: Option<&[f64]>,
    trial: usize,
) -> Result<VqeResult, SolverError> {
    let start = match theta0 {
        Some(t) if t.len() == circuit.n_params => t.to_vec(),
        Some(t) => {
            return Err(SolverError::DimensionMismatch {
                expected: circuit.n_params,
                found: t.len(),
            })
        }
        None => vec![0.0; circuit.n_params],
    };
    match backend {
        Backend::Statevector => {
            let objective = |t: &[f64]| problem.energy(circuit, t).expect("validated dimensions");
            let (theta, evaluations) = match optimizer.method {
                Method::Simplex => {
                    let m = nelder_mead(objective, &start, 0.1, optimizer.simplex_tol, optimizer.max_evaluations);
                    (m.x, m.evaluations)
                }
                Method::Spsa => {
                    let cfg = OptimizerConfig {
                        seed: derive_seed(optimizer.seed, trial, 1),
                        ..*optimizer
                    };
                    (spsa_minimize(objective, &start, &cfg), 2 * optimizer.max_iterations)
                }
            };
            let state = circuit.prepare(&theta)?;
            let energy = problem.observable.expectation(&state)?;
            Ok(VqeResult {
                energy,
                stderr: None,
                exact_energy: energy,
                theta,
                state: Some(state),
                evaluations,
                trial,
            })
        }
        Backend::Sampled { shots, noise } => {
            let shot_cfg = ShotConfig {
                seed: derive_seed(shots.seed, trial, 2),
                ..*shots
            };
            let mut est = NoisyEstimator::new(circuit, &problem.hamiltonian, shot_cfg, *noise)?;
            let mut evaluations = 0;
            let mut failure = None;
            let mut objective = |t: &[f64]| {
                evaluations += 1;
                match est.estimate(t) {
                    Ok((e, _)) => e,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                }
            };
            let theta = match optimizer.method {
                Method::Spsa => {
                    let cfg = OptimizerConfig {
                        seed: derive_seed(optimizer.seed, trial, 1),
                        ..*optimizer
                    };
                    spsa_minimize(&mut objective, &start, &cfg)
                }
                Method::Simplex => {
                    nelder_mead(&mut objective, &start, 0.1, optimizer.simplex_tol, optimizer.max_evaluations).x
                }
            };
            if let Some(e) = failure {
                return Err(e.into());
            }
            let (energy, se) = est.estimate(&theta)?;
            Ok(VqeResult {
                energy,
                stderr: Some(se),
                exact_energy: problem.energy(circuit, &theta)?,
                theta,
                state: None,
                evaluations: evaluations + 1,
                trial,
            })
        }
    }
}

/// Grow the ansatz one operator at a time and solve at every prefix length
/// `1..=k_max`. With `warm_start` each solve begins at the previous optimum
/// extended by zero.
#[allow(clippy::too_many_arguments)]
pub fn add_operators_incrementally(
    problem: &VqeProblem,
    n_qubits: usize,
    initial: u64,
    ranked: &[ExcitationOperator],
    mode: TermMode,
    k_max: usize,
    optimizer: &OptimizerConfig,
    backend: &Backend,
    warm_start: bool,
    trial: usize,
) -> Result<Vec<VqeResult>, SolverError> {
    let k_max = k_max.min(ranked.len());
    let mut out: Vec<VqeResult> = Vec::with_capacity(k_max);
    let mut circuit = AnsatzCircuit::new(n_qubits, initial);
    for op in &ranked[..k_max] {
        circuit.push_excitation(op, mode)?;
        let start: Vec<f64> = match (warm_start, out.last()) {
            (true, Some(prev)) => {
                let mut t = prev.theta.clone();
                t.push(0.0);
                t
            }
            _ => vec![0.0; circuit.n_params],
        };
        out.push(run_vqe(problem, &circuit, optimizer, backend, Some(&start), trial)?);
    }
    Ok(out)
}

/// One row of a results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub molecule: String,
    pub r: f64,
    pub subspace: usize,
    pub k: usize,
    pub terms: TermMode,
    pub backend: String,
    /// `None` marks the aggregate over trials.
    pub trial: Option<usize>,
    pub energy: f64,
    pub ed_energy: f64,
    pub error: f64,
    pub s2: Option<f64>,
    pub overlap: Option<f64>,
    /// Spread over trials (aggregate rows) or shot standard error.
    pub std: Option<f64>,
}

pub const RESULTS_SCHEMA: &str = "# schema: shallow-vqe results v1";
pub const RESULTS_HEADER: &str =
    "molecule,r,subspace,k,terms,backend,trial,energy,ed_energy,error,s2,overlap,std";

impl ResultRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.10}")).unwrap_or_default();
        let terms = match self.terms {
            TermMode::Single => "single",
            TermMode::All => "all",
        };
        let trial = self.trial.map_or_else(|| "mean".to_string(), |t| t.to_string());
        format!(
            "{},{:.4},{},{},{},{},{},{:.10},{:.10},{:.10},{},{},{}",
            self.molecule,
            self.r,
            self.subspace,
            self.k,
            terms,
            self.backend,
            trial,
            self.energy,
            self.ed_energy,
            self.error,
            opt(self.s2),
            opt(self.overlap),
            opt(self.std)
        )
    }
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PauliString;

    fn eq5() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[
                -1.06, 0.0, 0.0, 0.18, 0.0, -1.84, 0.18, 0.0, 0.0, 0.18, -0.23, 0.0, 0.18, 0.0,
                0.0, -1.06,
            ],
        )
    }

    #[test]
    fn ed_on_rounded_h2() {
        let ed = exact_diagonalize(&eq5()).unwrap();
        // 2x2 block [[-1.84, 0.18], [0.18, -0.23]] closed form
        let (a, d, b): (f64, f64, f64) = (-1.84, -0.23, 0.18);
        let lo = (a + d) / 2.0 - (((a - d) / 2.0).powi(2) + b * b).sqrt();
        assert!((ed.ground_energy() - lo).abs() < 1e-12);
        assert!((ed.ground_energy() + 1.860).abs() < 0.005);
        assert!(ed.max_residual(&eq5()) < 1e-8);
    }

    #[test]
    fn ed_diagonal_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0]));
        assert_eq!(exact_diagonalize(&m).unwrap().eigenvalues, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn ed_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(exact_diagonalize(&m), Err(SolverError::Asymmetric(_))));
    }

    #[test]
    fn spin_numbers() {
        assert_eq!(spin_quantum_number(0.0, 1e-6), Some(0.0));
        assert_eq!(spin_quantum_number(0.75, 1e-6), Some(0.5));
        assert_eq!(spin_quantum_number(2.0, 1e-6), Some(1.0));
        assert_eq!(spin_quantum_number(6.0, 1e-6), Some(2.0));
        assert_eq!(spin_quantum_number(1.0, 1e-6), None);
    }

    /// Pauli form of the rounded H₂ matrix in the label-ordered basis.
    fn eq5_pauli() -> PauliSum {
        // diag (-1.06, -1.84, -0.23, -1.06) on |00>,|01>,|10>,|11>
        let d = [-1.06, -1.84, -0.23, -1.06];
        let c = |z: &str| -> f64 {
            (0..4)
                .map(|b: usize| {
                    let s = z.chars().rev().enumerate().fold(1.0, |acc, (q, ch)| {
                        if ch == 'Z' && (b >> q) & 1 == 1 {
                            -acc
                        } else {
                            acc
                        }
                    });
                    s * d[b]
                })
                .sum::<f64>()
                / 4.0
        };
        let r = |l: &str, v: f64| PauliString::from_label(l, Complex64::new(v, 0.0)).unwrap();
        // 0.18 (|00><11| + |01><10| + h.c.) = 0.09 (XX + YY) + 0.09 (XX − YY)
        PauliSum::from_terms(
            2,
            [
                r("II", c("II")),
                r("IZ", c("IZ")),
                r("ZI", c("ZI")),
                r("ZZ", c("ZZ")),
                r("XX", 0.18),
            ],
        )
    }

    #[test]
    fn h2_single_term_vqe_reaches_block_ground() {
        let problem = VqeProblem::new(eq5_pauli()).unwrap();
        let mut circuit = AnsatzCircuit::new(2, 0b01);
        circuit
            .push(PauliString::from_label("XY", Complex64::new(0.0, 1.0)).unwrap())
            .unwrap();
        let zero = run_vqe(&problem, &circuit, &OptimizerConfig::simplex(), &Backend::Statevector, None, 0).unwrap();
        assert!(zero.energy < -1.84);
        assert!((zero.energy + 1.8599).abs() < 1e-3, "{}", zero.energy);
        let e0 = problem.energy(&circuit, &[0.0]).unwrap();
        assert!((e0 + 1.84).abs() < 1e-12);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 1, 1));
        assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 0, 2));
        assert_eq!(derive_seed(7, 3, 1), derive_seed(7, 3, 1));
    }
}
