use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::statevector::StateVector;
use super::SimError;
use crate::hamiltonian::PauliString;
use crate::pool::ExcitationOperator;

/// One factor `exp(θ_slot · weight · pauli)` with `pauli = ±i·P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    pub pauli: PauliString,
    pub weight: f64,
    pub slot: usize,
}

impl Rotation {
    /// Angle `φ` of `exp(iφP)` for parameter value `theta`.
    pub fn angle(&self, theta: f64) -> f64 {
        theta * self.weight * self.pauli.coeff.im
    }
}

/// Ordered product of Pauli rotations on a basis state. The first rotation
/// listed acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzCircuit {
    pub n_qubits: usize,
    pub initial: u64,
    pub rotations: Vec<Rotation>,
    pub n_params: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TermMode {
    /// One Pauli rotation per excitation.
    #[default]
    Single,
    /// Every Pauli term of each excitation, sharing one parameter.
    All,
}

impl AnsatzCircuit {
    pub fn new(n_qubits: usize, initial: u64) -> Self {
        AnsatzCircuit {
            n_qubits,
            initial,
            rotations: Vec::new(),
            n_params: 0,
        }
    }

    /// Append a rotation with its own parameter; `generator` must be anti-Hermitian.
    pub fn push(&mut self, generator: PauliString) -> Result<(), SimError> {
        let slot = self.n_params;
        self.push_shared(generator, slot)?;
        self.n_params += 1;
        Ok(())
    }

    fn push_shared(&mut self, generator: PauliString, slot: usize) -> Result<(), SimError> {
        if generator.n_qubits != self.n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.n_qubits,
                found: generator.n_qubits,
            });
        }
        if generator.coeff.re.abs() > 1e-12 || generator.coeff.im == 0.0 {
            return Err(SimError::NotAntiHermitian(generator.compact_label()));
        }
        let weight = generator.coeff.im.abs();
        let sign = generator.coeff.im.signum();
        self.rotations.push(Rotation {
            pauli: generator.with_coeff(Complex64::new(0.0, sign)),
            weight,
            slot,
        });
        Ok(())
    }

    /// Append one excitation in the given term mode.
    pub fn push_excitation(&mut self, op: &ExcitationOperator, mode: TermMode) -> Result<(), SimError> {
        match mode {
            TermMode::Single => self.push(op.selected_term),
            TermMode::All => {
                let slot = self.n_params;
                for t in op.qubit.terms() {
                    self.push_shared(*t, slot)?;
                }
                self.n_params += 1;
                Ok(())
            }
        }
    }

    pub fn from_excitations(
        n_qubits: usize,
        initial: u64,
        ops: &[ExcitationOperator],
        mode: TermMode,
    ) -> Result<Self, SimError> {
        let mut c = AnsatzCircuit::new(n_qubits, initial);
        for op in ops {
            c.push_excitation(op, mode)?;
        }
        Ok(c)
    }

    /// `U(θ)|ψ₀⟩`.
    pub fn prepare(&self, theta: &[f64]) -> Result<StateVector, SimError> {
        self.prepare_with_flips(theta, |_| false)
    }

    /// Like [`prepare`](Self::prepare) but with the angle of rotation `r`
    /// negated when `flipped(r)` holds.
    pub(crate) fn prepare_with_flips(
        &self,
        theta: &[f64],
        flipped: impl Fn(usize) -> bool,
    ) -> Result<StateVector, SimError> {
        if theta.len() != self.n_params {
            return Err(SimError::ParameterCount {
                expected: self.n_params,
                found: theta.len(),
            });
        }
        let mut psi = StateVector::basis(self.n_qubits, self.initial);
        for (r, rot) in self.rotations.iter().enumerate() {
            let phi = rot.angle(theta[rot.slot]);
            if phi != 0.0 {
                let phi = if flipped(r) { -phi } else { phi };
                psi.rotate(rot.pauli.x, rot.pauli.z, phi);
            }
        }
        Ok(psi)
    }

    pub fn stats(&self) -> CircuitStats {
        count_cnots(self)
    }

    pub fn dump(&self) -> CircuitDump {
        let stats = self.stats();
        CircuitDump {
            n_qubits: self.n_qubits,
            initial_state: (0..self.n_qubits)
                .rev()
                .map(|i| if (self.initial >> i) & 1 == 1 { '1' } else { '0' })
                .collect(),
            n_params: self.n_params,
            rotations: self
                .rotations
                .iter()
                .map(|r| {
                    let sign = if r.pauli.coeff.im < 0.0 { "-" } else { "" };
                    let w = if r.weight == 1.0 {
                        String::new()
                    } else {
                        format!("{}*", r.weight)
                    };
                    format!("R{}({sign}{w}{})", r.slot, r.pauli.compact_label())
                })
                .collect(),
            cnot_count: stats.cnot_count,
            rotation_count: stats.rotation_count,
        }
    }
}

/// `U(θ)|ψ₀⟩`.
pub fn prepare_ansatz_state(circuit: &AnsatzCircuit, theta: &[f64]) -> Result<StateVector, SimError> {
    circuit.prepare(theta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub cnot_count: usize,
    pub rotation_count: usize,
    pub weights: Vec<usize>,
}

impl CircuitStats {
    /// Number of rotations for each Pauli weight.
    pub fn weight_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &w in &self.weights {
            *h.entry(w).or_insert(0) += 1;
        }
        h
    }
}

/// CNOT staircase cost: `2(w − 1)` per rotation of weight `w`.
pub fn count_cnots(circuit: &AnsatzCircuit) -> CircuitStats {
    let weights: Vec<usize> = circuit.rotations.iter().map(|r| r.pauli.weight()).collect();
    CircuitStats {
        cnot_count: weights.iter().map(|w| 2 * w.saturating_sub(1)).sum(),
        rotation_count: weights.len(),
        weights,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDump {
    pub n_qubits: usize,
    pub initial_state: String,
    pub n_params: usize,
    pub rotations: Vec<String>,
    pub cnot_count: usize,
    pub rotation_count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(label: &str) -> PauliString {
        PauliString::from_label(label, Complex64::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn empty_and_zero_angles() {
        let c = AnsatzCircuit::new(2, 0b01);
        assert_eq!(c.prepare(&[]).unwrap(), StateVector::basis(2, 1));
        let mut c = AnsatzCircuit::new(2, 0b01);
        c.push(gen("XY")).unwrap();
        c.push(gen("IY")).unwrap();
        assert_eq!(c.prepare(&[0.0, 0.0]).unwrap(), StateVector::basis(2, 1));
        assert!(matches!(c.prepare(&[0.0]), Err(SimError::ParameterCount { .. })));
    }

    #[test]
    fn cnot_counts() {
        let mut c = AnsatzCircuit::new(2, 0);
        c.push(gen("IY")).unwrap();
        assert_eq!(c.stats().cnot_count, 0);
        let mut c = AnsatzCircuit::new(2, 0);
        c.push(gen("XY")).unwrap();
        assert_eq!(c.stats().cnot_count, 2);
        let mut c = AnsatzCircuit::new(6, 0);
        c.push(gen("YXXXXX")).unwrap();
        c.push(gen("IIIXXY")).unwrap();
        let s = c.stats();
        assert_eq!(s.cnot_count, 10 + 4);
        assert_eq!(s.weight_histogram().get(&6), Some(&1));
    }

    #[test]
    fn dump_lists_rotations() {
        let mut c = AnsatzCircuit::new(2, 0b01);
        c.push(gen("XY")).unwrap();
        let d = c.dump();
        assert_eq!(d.rotations, vec!["R0(X2Y1)"]);
        assert_eq!(d.initial_state, "01");
    }
}
