//! Qubit Hamiltonians: Pauli algebra, fermionic operators, the parity
//! encoding and realization of operators as sector matrices.

mod fermion;
mod parity;
mod pauli;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use fermion::{apply_ladders, FermionOp, Ladder};
pub use parity::{
    parity_encode_full, parity_encode_operator, parity_encode_state, reduce_two_qubits, FockState,
    QubitState, Sector,
};
pub use pauli::{pauli_multiply, Pauli, PauliString, PauliSum, DROP_TOL, MAX_QUBITS};

use crate::chem::IntegralSet;
use crate::partition::SectorBasis;

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("bad Pauli label {0:?}")]
    BadPauliLabel(String),
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitCountMismatch { expected: usize, found: usize },
    #[error("term {0} acts non-diagonally on a symmetry qubit")]
    MixesSymmetrySectors(String),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("integrals: {0}")]
    Integrals(String),
}

/// Qubit Hamiltonian of a closed-shell molecule in its (n/2, n/2) sector.
pub fn qubit_hamiltonian(ints: &IntegralSet, n_electrons: usize) -> Result<PauliSum, HamiltonianError> {
    let h = FermionOp::hamiltonian(ints)?;
    parity_encode_operator(&h, Sector::closed_shell(ints.n_orbitals, n_electrons))
}

/// Complex matrix `⟨b_i|op|b_j⟩` over the sector basis.
pub fn complex_matrix_in_sector(op: &PauliSum, basis: &SectorBasis) -> Result<DMatrix<Complex64>, HamiltonianError> {
    if op.n_qubits != basis.n_qubits() {
        return Err(HamiltonianError::QubitCountMismatch {
            expected: basis.n_qubits(),
            found: op.n_qubits,
        });
    }
    let n = basis.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (j, state) in basis.qubit_states().iter().enumerate() {
        for term in op.terms() {
            let (row, amp) = term.apply_to_basis(state.bits);
            if let Some(i) = basis.index_of(row) {
                m[(i, j)] += amp;
            }
        }
    }
    Ok(m)
}

/// Real symmetric matrix `H_ij = ⟨b_i|op|b_j⟩` of a Hermitian Pauli sum.
pub fn matrix_in_sector(op: &PauliSum, basis: &SectorBasis) -> Result<DMatrix<f64>, HamiltonianError> {
    let herm = op.hermiticity_error();
    if herm > 1e-10 {
        return Err(HamiltonianError::NotHermitian(herm));
    }
    let m = complex_matrix_in_sector(op, basis)?;
    let imag = m.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if imag > 1e-10 {
        return Err(HamiltonianError::NotHermitian(imag));
    }
    let re = m.map(|c| c.re);
    Ok((&re + re.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_sector;

    #[test]
    fn identity_sum_gives_identity_matrix() {
        let basis = enumerate_sector(3, 1, 2);
        let m = matrix_in_sector(&PauliSum::identity(4), &basis).unwrap();
        assert_eq!(m, DMatrix::identity(basis.len(), basis.len()));
    }

    #[test]
    fn non_hermitian_rejected() {
        let basis = enumerate_sector(2, 1, 1);
        let p = PauliSum::from_terms(
            2,
            [PauliString::from_label("XY", Complex64::new(0.0, 1.0)).unwrap()],
        );
        assert!(matches!(
            matrix_in_sector(&p, &basis),
            Err(HamiltonianError::NotHermitian(_))
        ));
    }
}
