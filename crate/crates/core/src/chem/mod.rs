//! Molecular integrals and the mean-field reference.
//!
//! Hydrogen clusters get native STO-3G integrals and an RHF solution; any
//! other system comes in through FCIDUMP with orbitals already fixed.

mod fcidump;
mod geometry;
mod integrals;
mod rhf;

use nalgebra::DMatrix;
use thiserror::Error;

pub use fcidump::{read_fcidump, write_fcidump};
pub use geometry::{atomic_number, Atom, Geometry, BOHR_ANGSTROM};
pub use integrals::{
    boys_f0, sto3g_integrals, transform_to_mo, IntegralSet, TwoBody, STO3G_H_COEFFS,
    STO3G_H_EXPONENTS,
};
pub use rhf::{commuting_involutions, run_rhf, Damping, RhfOptions, RhfResult};

/// 1 Hartree in eV.
pub const HARTREE_EV: f64 = 27.2114;

#[derive(Debug, Error)]
pub enum ChemError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("declared {declared} atoms but found {found}")]
    AtomCountMismatch { declared: usize, found: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("element {0} is not supported by the native integral path; use FCIDUMP")]
    UnsupportedElement(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("odd electron count {0} for a closed-shell calculation")]
    OddElectronCount(usize),
    #[error("{electrons} electrons do not fit in {orbitals} spatial orbitals")]
    TooManyElectrons { electrons: usize, orbitals: usize },
    #[error("SCF did not converge in {} iterations", .0.iterations)]
    ScfNotConverged(Box<RhfResult>),
    #[error("FCIDUMP line {line}: {message}")]
    Fcidump { line: usize, message: String },
    #[error("FCIDUMP line {line}: orbital index {index} exceeds NORB={norb}")]
    IndexOutOfRange { index: usize, norb: usize, line: usize },
    #[error("integrals are not symmetric (deviation {0:e})")]
    AsymmetricIntegrals(f64),
}

/// MO integrals for a hydrogen cluster together with the RHF solution that
/// defined the orbitals.
#[derive(Debug, Clone)]
pub struct MolecularIntegrals {
    pub mo: IntegralSet,
    pub rhf: RhfResult,
    pub n_electrons: usize,
}

/// Native path: STO-3G integrals, RHF (optionally warm-started from a nearby
/// geometry's density) and the AO→MO transform.
pub fn native_mo_integrals(
    geometry: &Geometry,
    warm_start: Option<&DMatrix<f64>>,
    options: &RhfOptions,
) -> Result<MolecularIntegrals, ChemError> {
    let ao = sto3g_integrals(geometry)?;
    let n_electrons = usize::try_from(geometry.n_electrons())
        .map_err(|_| ChemError::InvalidGeometry("negative electron count".into()))?;
    let rhf = run_rhf(
        &ao,
        n_electrons,
        warm_start,
        &geometry.symmetry_permutations(),
        options,
    )?;
    let mo = transform_to_mo(&ao, &rhf.mo_coefficients)?;
    Ok(MolecularIntegrals {
        mo,
        rhf,
        n_electrons,
    })
}

/// Dissociation scan with densities threaded forward in order of increasing
/// bond length. A point whose warm-started SCF stalls is redone from the
/// core guess. Results are returned in the caller's order.
pub fn native_scan(
    geometries: &[(f64, Geometry)],
    options: &RhfOptions,
) -> Result<Vec<MolecularIntegrals>, ChemError> {
    let mut order: Vec<usize> = (0..geometries.len()).collect();
    order.sort_by(|&a, &b| geometries[a].0.total_cmp(&geometries[b].0));
    let mut out: Vec<Option<MolecularIntegrals>> = vec![None; geometries.len()];
    let mut previous: Option<DMatrix<f64>> = None;
    for i in order {
        let mol = match native_mo_integrals(&geometries[i].1, previous.as_ref(), options) {
            Err(ChemError::ScfNotConverged(_)) if previous.is_some() => {
                native_mo_integrals(&geometries[i].1, None, options)?
            }
            other => other?,
        };
        previous = Some(mol.rhf.density_matrix.clone());
        out[i] = Some(mol);
    }
    Ok(out.into_iter().map(|m| m.expect("filled")).collect())
}
