use std::collections::BTreeMap;

use num_complex::Complex64;

use super::SimError;
use crate::hamiltonian::{PauliString, PauliSum};

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Dense amplitudes over `2^n` computational basis states; index bit `k` is qubit `k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, bits: u64) -> Self {
        assert!(n_qubits < 30, "register too large for a dense state");
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[bits as usize] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if amps.len() != 1 << n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amps.len(),
            });
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, SimError> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `exp(θ·p)` for an anti-Hermitian string `p = i·w·P`, i.e.
    /// `cos(θw) + i sin(θw) P`.
    pub fn apply_pauli_exponential(&mut self, p: &PauliString, theta: f64) -> Result<(), SimError> {
        if p.n_qubits != self.n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.n_qubits,
                found: p.n_qubits,
            });
        }
        if p.coeff.re.abs() > 1e-12 {
            return Err(SimError::NotAntiHermitian(p.compact_label()));
        }
        self.rotate(p.x, p.z, theta * p.coeff.im);
        Ok(())
    }

    /// `exp(iφ P)` for the unit Pauli with masks `(x, z)`.
    pub(crate) fn rotate(&mut self, x: u64, z: u64, phi: f64) {
        let (c, s) = (phi.cos(), phi.sin());
        let base = I_POW[((x & z).count_ones() % 4) as usize] * Complex64::new(0.0, s);
        let x = x as usize;
        let z = z as usize;
        if x == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                *a *= Complex64::new(c, 0.0) + base * sign;
            }
            return;
        }
        let hi = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & hi != 0 {
                continue;
            }
            let b2 = b ^ x;
            // P|b⟩ = i^{x·z} (−1)^{z·b} |b ⊕ x⟩
            let s1 = if (z & b).count_ones() % 2 == 1 { -base } else { base };
            let s2 = if (z & b2).count_ones() % 2 == 1 { -base } else { base };
            let (a1, a2) = (self.amps[b], self.amps[b2]);
            self.amps[b] = a1 * c + s2 * a2;
            self.amps[b2] = a2 * c + s1 * a1;
        }
    }

    /// `⟨ψ|P|ψ⟩` for the unit Pauli with masks `(x, z)`.
    pub fn pauli_expectation(&self, x: u64, z: u64) -> f64 {
        let phase = I_POW[((x & z).count_ones() % 4) as usize];
        let (x, z) = (x as usize, z as usize);
        let mut acc = Complex64::default();
        for (b, a) in self.amps.iter().enumerate() {
            let v = self.amps[b ^ x].conj() * a;
            if (z & b).count_ones() % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        (acc * phase).re
    }
}

/// Squared overlap `|⟨a|b⟩|²`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Hermitian Pauli sum grouped by X-mask for fast expectation values and
/// matrix-vector products.
#[derive(Debug, Clone)]
pub struct Observable {
    pub n_qubits: usize,
    groups: Vec<(usize, Vec<Complex64>)>,
}

impl Observable {
    pub fn new(h: &PauliSum) -> Result<Self, SimError> {
        let herm = h.hermiticity_error();
        if herm > 1e-10 {
            return Err(SimError::NotHermitian(herm));
        }
        assert!(h.n_qubits < 30, "register too large for a dense state");
        let dim = 1usize << h.n_qubits;
        let mut by_x: BTreeMap<u64, Vec<&PauliString>> = BTreeMap::new();
        for t in h.terms() {
            by_x.entry(t.x).or_default().push(t);
        }
        let groups = by_x
            .into_iter()
            .map(|(x, terms)| {
                let mut d = vec![Complex64::default(); dim];
                for t in terms {
                    let c = t.coeff * I_POW[((t.x & t.z).count_ones() % 4) as usize];
                    let z = t.z as usize;
                    for (b, v) in d.iter_mut().enumerate() {
                        if (z & b).count_ones() % 2 == 1 {
                            *v -= c;
                        } else {
                            *v += c;
                        }
                    }
                }
                (x as usize, d)
            })
            .collect();
        Ok(Observable {
            n_qubits: h.n_qubits,
            groups,
        })
    }

    /// `⟨ψ|H|ψ⟩`; the imaginary part is checked and discarded.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64, SimError> {
        if psi.n_qubits != self.n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.n_qubits,
                found: psi.n_qubits,
            });
        }
        let mut acc = Complex64::default();
        for (x, d) in &self.groups {
            for (b, a) in psi.amps.iter().enumerate() {
                acc += psi.amps[b ^ x].conj() * d[b] * a;
            }
        }
        let norm = psi.norm().powi(2);
        if acc.im.abs() > 1e-10 * acc.norm().max(1.0) {
            return Err(SimError::NotHermitian(acc.im.abs()));
        }
        Ok(acc.re / norm)
    }

    /// `H|ψ⟩`.
    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let mut out = vec![Complex64::default(); psi.dim()];
        for (x, d) in &self.groups {
            for (b, a) in psi.amps.iter().enumerate() {
                out[b ^ x] += d[b] * a;
            }
        }
        StateVector {
            n_qubits: psi.n_qubits,
            amps: out,
        }
    }

    /// Dense matrix over the full register.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let dim = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for (x, d) in &self.groups {
            for (b, v) in d.iter().enumerate() {
                m[(b ^ x, b)] += v.re;
            }
        }
        m
    }
}

/// `⟨ψ|h|ψ⟩` for a Hermitian Pauli sum.
pub fn expectation(psi: &StateVector, h: &PauliSum) -> Result<f64, SimError> {
    Observable::new(h)?.expectation(psi)
}
