//! Parity encoding with two-qubit reduction.
//!
//! Qubit `p` stores the parity of spin-orbitals `1..=p`. With spin-up
//! orbitals first, qubit `n_orb` holds `n_up mod 2` and qubit `2·n_orb` holds
//! `n_electrons mod 2`; both are replaced by their eigenvalues and dropped,
//! leaving `2·n_orb − 2` qubits.

use std::fmt;

use num_complex::Complex64;

use super::fermion::{FermionOp, Ladder};
use super::pauli::{PauliString, PauliSum};
use super::HamiltonianError;

/// Conserved (n_up, n_down) occupation sector over `n_orbitals` spatial orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector {
    pub n_orbitals: usize,
    pub n_up: usize,
    pub n_down: usize,
}

impl Sector {
    pub fn new(n_orbitals: usize, n_up: usize, n_down: usize) -> Self {
        Sector {
            n_orbitals,
            n_up,
            n_down,
        }
    }

    /// Closed-shell sector for an even electron count.
    pub fn closed_shell(n_orbitals: usize, n_electrons: usize) -> Self {
        Sector::new(n_orbitals, n_electrons / 2, n_electrons / 2)
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_orbitals
    }

    pub fn n_qubits(&self) -> usize {
        self.n_modes() - 2
    }
}

/// Spin-orbital occupations; bit `i` is `f_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub bits: u64,
    pub n_orbitals: usize,
}

impl FockState {
    pub fn new(bits: u64, n_orbitals: usize) -> Self {
        FockState { bits, n_orbitals }
    }

    pub fn from_occupations(n_orbitals: usize, up: &[usize], down: &[usize]) -> Self {
        let mut bits = 0;
        for &p in up {
            bits |= 1 << p;
        }
        for &p in down {
            bits |= 1 << (p + n_orbitals);
        }
        FockState { bits, n_orbitals }
    }

    pub fn n_up(&self) -> usize {
        (self.bits & ((1 << self.n_orbitals) - 1)).count_ones() as usize
    }

    pub fn n_down(&self) -> usize {
        (self.bits >> self.n_orbitals).count_ones() as usize
    }
}

impl fmt::Display for FockState {
    /// `|f_2N … f_1⟩`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..2 * self.n_orbitals)
            .rev()
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect();
        write!(f, "|{s}⟩")
    }
}

/// Computational basis state of the reduced register; bit `k` is `q_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitState {
    pub bits: u64,
    pub n_qubits: usize,
}

impl QubitState {
    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let n = label.len();
        let bits = u64::from_str_radix(label, 2).ok()?;
        Some(QubitState { bits, n_qubits: n })
    }
}

impl fmt::Display for QubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.label())
    }
}

/// Drop bits `n_orb - 1` and `2·n_orb - 1` and close the gaps.
fn drop_symmetry_bits(bits: u64, n_orb: usize) -> u64 {
    let low = bits & ((1u64 << (n_orb - 1)) - 1);
    let high = (bits >> n_orb) & ((1u64 << (n_orb - 1)) - 1);
    low | (high << (n_orb - 1))
}

/// Prefix-parity bits with the two symmetry qubits removed.
pub fn parity_encode_state(f: FockState) -> QubitState {
    let n_modes = 2 * f.n_orbitals;
    let mut parity = 0u64;
    let mut acc = 0u64;
    for i in 0..n_modes {
        acc ^= (f.bits >> i) & 1;
        parity |= acc << i;
    }
    QubitState {
        bits: drop_symmetry_bits(parity, f.n_orbitals),
        n_qubits: n_modes - 2,
    }
}

/// Parity image of a ladder operator on the full `2·n_orb` register:
/// `a†_j = ½ X_{>j} (X_j Z_{j−1} − i Y_j)`, `a_j = ½ X_{>j} (X_j Z_{j−1} + i Y_j)`.
fn encode_ladder(l: Ladder, n_modes: usize) -> PauliSum {
    let j = l.mode;
    let upper = if j + 1 < n_modes {
        ((1u64 << n_modes) - 1) & !((1u64 << (j + 1)) - 1)
    } else {
        0
    };
    let xj = 1u64 << j;
    let z_below = if j > 0 { 1u64 << (j - 1) } else { 0 };
    let half = Complex64::new(0.5, 0.0);
    let y_coeff = if l.dagger {
        Complex64::new(0.0, -0.5)
    } else {
        Complex64::new(0.0, 0.5)
    };
    PauliSum::from_terms(
        n_modes,
        [
            PauliString::new(n_modes, upper | xj, z_below, half),
            PauliString::new(n_modes, upper | xj, xj, y_coeff),
        ],
    )
}

/// Parity image on the full register without reduction.
pub fn parity_encode_full(op: &FermionOp) -> PauliSum {
    let n = op.n_modes;
    let mut out = Vec::new();
    for (c, ops) in op.terms() {
        let mut prod = PauliSum::from_terms(n, [PauliString::identity(n).with_coeff(*c)]);
        for l in ops {
            prod = prod.mul(&encode_ladder(*l, n));
            if prod.is_empty() {
                break;
            }
        }
        out.extend_from_slice(prod.terms());
    }
    PauliSum::from_terms(n, out)
}

/// Parity-encode a fermionic operator and remove the two symmetry qubits,
/// substituting `Z → (−1)^{n_up}` on qubit `n_orb` and
/// `Z → (−1)^{n_up + n_down}` on qubit `2·n_orb`.
pub fn parity_encode_operator(
    op: &FermionOp,
    sector: Sector,
) -> Result<PauliSum, HamiltonianError> {
    if op.n_modes != sector.n_modes() {
        return Err(HamiltonianError::QubitCountMismatch {
            expected: sector.n_modes(),
            found: op.n_modes,
        });
    }
    let full = parity_encode_full(op);
    reduce_two_qubits(&full, sector)
}

pub fn reduce_two_qubits(full: &PauliSum, sector: Sector) -> Result<PauliSum, HamiltonianError> {
    let n_orb = sector.n_orbitals;
    let up_bit = 1u64 << (n_orb - 1);
    let all_bit = 1u64 << (2 * n_orb - 1);
    let up_sign = if sector.n_up % 2 == 0 { 1.0 } else { -1.0 };
    let all_sign = if (sector.n_up + sector.n_down) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let n_red = sector.n_qubits();
    let mut out = Vec::with_capacity(full.len());
    for t in full.terms() {
        if t.x & (up_bit | all_bit) != 0 {
            return Err(HamiltonianError::MixesSymmetrySectors(t.label()));
        }
        let mut c = t.coeff;
        if t.z & up_bit != 0 {
            c *= up_sign;
        }
        if t.z & all_bit != 0 {
            c *= all_sign;
        }
        out.push(PauliString::new(
            n_red,
            drop_symmetry_bits(t.x, n_orb),
            drop_symmetry_bits(t.z, n_orb),
            c,
        ));
    }
    Ok(PauliSum::from_terms(n_red, out))
}
