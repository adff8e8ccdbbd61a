//! Shot sampling with depolarizing gate noise via Pauli-frame trajectories.
//!
//! Every rotation `exp(iφP)` is compiled to basis changes, a CNOT ladder, an
//! `Rz` on the last support qubit and the mirrored gates. A Pauli error after
//! any gate is pushed to the end of the circuit: Clifford gates conjugate it,
//! and crossing an `Rz` it anticommutes with negates that rotation's angle.
//! A trajectory is therefore a set of negated angles plus a final Pauli,
//! which flips the measured sign when it anticommutes with the observable.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::circuit::AnsatzCircuit;
use super::statevector::StateVector;
use super::SimError;
use crate::hamiltonian::{Pauli, PauliString, PauliSum};

/// Depolarizing probabilities: with probability `p` the gate's qubits are
/// hit by a Pauli drawn uniformly from all `4^k` strings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
}

impl NoiseModel {
    pub const OFF: NoiseModel = NoiseModel { p1: 0.0, p2: 0.0 };

    pub fn new(p1: f64, p2: f64) -> Result<Self, SimError> {
        for p in [p1, p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SimError::InvalidNoise(p));
            }
        }
        Ok(NoiseModel { p1, p2 })
    }

    pub fn is_off(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }

    /// Probability of a non-identity error on a `k`-qubit gate.
    fn error_rate(&self, k: usize) -> f64 {
        let p = if k == 1 { self.p1 } else { self.p2 };
        p * (1.0 - 0.25f64.powi(k as i32))
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { p1: 1e-3, p2: 1e-2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotConfig {
    pub shots: usize,
    pub seed: u64,
}

impl Default for ShotConfig {
    fn default() -> Self {
        ShotConfig { shots: 1024, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gate {
    X(usize),
    H(usize),
    /// `H S†`, maps Y to Z.
    ToY(usize),
    /// `S H`, maps Z back to Y.
    FromY(usize),
    Cnot(usize, usize),
    Rz(usize, usize),
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::ToY(q) | Gate::FromY(q) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot(c, t) => vec![c, t],
        }
    }

    /// Conjugate a Pauli (x, z) through the gate; sign is irrelevant here.
    fn conjugate(&self, x: &mut u64, z: &mut u64) {
        let swap = |x: &mut u64, z: &mut u64, q: usize, f: fn(bool, bool) -> (bool, bool)| {
            let b = 1u64 << q;
            let (nx, nz) = f(*x & b != 0, *z & b != 0);
            *x = (*x & !b) | if nx { b } else { 0 };
            *z = (*z & !b) | if nz { b } else { 0 };
        };
        match *self {
            Gate::X(_) | Gate::Rz(..) => {}
            Gate::H(q) => swap(x, z, q, |a, b| (b, a)),
            // X→Y, Y→Z, Z→X
            Gate::ToY(q) => swap(x, z, q, |a, b| (a ^ b, a)),
            // Y→X, Z→Y, X→Z
            Gate::FromY(q) => swap(x, z, q, |a, b| (b, a ^ b)),
            Gate::Cnot(c, t) => {
                if *x >> c & 1 == 1 {
                    *x ^= 1 << t;
                }
                if *z >> t & 1 == 1 {
                    *z ^= 1 << c;
                }
            }
        }
    }
}

fn compile(circuit: &AnsatzCircuit) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..circuit.n_qubits)
        .filter(|q| circuit.initial >> q & 1 == 1)
        .map(Gate::X)
        .collect();
    for (r, rot) in circuit.rotations.iter().enumerate() {
        let p = &rot.pauli;
        let support: Vec<usize> = (0..p.n_qubits).filter(|&q| p.support() >> q & 1 == 1).collect();
        let Some(&last) = support.last() else {
            continue;
        };
        let basis: Vec<Gate> = support
            .iter()
            .filter_map(|&q| match p.get(q) {
                Pauli::X => Some(Gate::H(q)),
                Pauli::Y => Some(Gate::ToY(q)),
                _ => None,
            })
            .collect();
        let ladder: Vec<Gate> = support.windows(2).map(|w| Gate::Cnot(w[0], w[1])).collect();
        gates.extend(&basis);
        gates.extend(&ladder);
        gates.push(Gate::Rz(last, r));
        gates.extend(ladder.iter().rev());
        gates.extend(basis.iter().map(|g| match *g {
            Gate::ToY(q) => Gate::FromY(q),
            other => other,
        }));
    }
    gates
}

/// Effect of one error: rotations whose angle is negated and the final Pauli.
#[derive(Debug, Clone)]
struct Effect {
    flips: Vec<u64>,
    x: u64,
    z: u64,
}

#[derive(Debug, Clone)]
struct Site {
    rate: f64,
    /// One entry per non-identity Pauli on the gate's qubits.
    effects: Vec<Effect>,
}

/// Precomputed error propagation for one circuit structure.
#[derive(Debug, Clone)]
pub struct FrameTable {
    sites: Vec<Site>,
    words: usize,
    gate_count: usize,
}

impl FrameTable {
    pub fn new(circuit: &AnsatzCircuit, noise: &NoiseModel) -> Self {
        let gates = compile(circuit);
        let words = circuit.rotations.len().div_ceil(64).max(1);
        let mut sites = Vec::with_capacity(gates.len());
        for (g, gate) in gates.iter().enumerate() {
            let qs = gate.qubits();
            let rate = noise.error_rate(qs.len());
            let n_opts = 4usize.pow(qs.len() as u32);
            let effects = (1..n_opts)
                .map(|code| {
                    let (mut x, mut z) = (0u64, 0u64);
                    for (k, &q) in qs.iter().enumerate() {
                        let letter = (code >> (2 * k)) & 3;
                        if letter & 1 == 1 {
                            x |= 1 << q;
                        }
                        if letter & 2 == 2 {
                            z |= 1 << q;
                        }
                    }
                    let mut flips = vec![0u64; words];
                    for later in &gates[g + 1..] {
                        if let Gate::Rz(q, r) = *later {
                            if x >> q & 1 == 1 {
                                flips[r / 64] ^= 1 << (r % 64);
                            }
                        }
                        later.conjugate(&mut x, &mut z);
                    }
                    Effect { flips, x, z }
                })
                .collect();
            sites.push(Site { rate, effects });
        }
        FrameTable {
            sites,
            words,
            gate_count: gates.len(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gate_count
    }

    /// Probability that a shot runs the circuit without any error.
    pub fn clean_probability(&self) -> f64 {
        self.sites.iter().map(|s| 1.0 - s.rate).product()
    }

    fn classes(&self) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, s) in self.sites.iter().enumerate() {
            match out.iter_mut().find(|(r, _)| *r == s.rate) {
                Some((_, v)) => v.push(i),
                None => out.push((s.rate, vec![i])),
            }
        }
        out
    }
}

/// Reusable sampled estimator of `⟨H⟩` for one circuit and Hamiltonian.
#[derive(Debug, Clone)]
pub struct NoisyEstimator {
    circuit: AnsatzCircuit,
    terms: Vec<PauliString>,
    constant: f64,
    table: FrameTable,
    classes: Vec<(f64, Vec<usize>)>,
    noise: NoiseModel,
    shots: usize,
    rng: ChaCha8Rng,
}

impl NoisyEstimator {
    pub fn new(
        circuit: &AnsatzCircuit,
        h: &PauliSum,
        shots: ShotConfig,
        noise: NoiseModel,
    ) -> Result<Self, SimError> {
        if shots.shots == 0 {
            return Err(SimError::NoShots);
        }
        let herm = h.hermiticity_error();
        if herm > 1e-10 {
            return Err(SimError::NotHermitian(herm));
        }
        if h.n_qubits != circuit.n_qubits {
            return Err(SimError::DimensionMismatch {
                expected: circuit.n_qubits,
                found: h.n_qubits,
            });
        }
        let constant = h.terms().iter().filter(|t| t.is_identity()).map(|t| t.coeff.re).sum();
        let terms = h.terms().iter().filter(|t| !t.is_identity()).copied().collect();
        let table = FrameTable::new(circuit, &noise);
        let classes = table.classes();
        Ok(NoisyEstimator {
            circuit: circuit.clone(),
            terms,
            constant,
            table,
            classes,
            noise,
            shots: shots.shots,
            rng: ChaCha8Rng::seed_from_u64(shots.seed),
        })
    }

    /// Estimate and standard error of `⟨H⟩` at `theta`, measuring every term
    /// in its own batch of shots.
    pub fn estimate(&mut self, theta: &[f64]) -> Result<(f64, f64), SimError> {
        let ideal = self.circuit.prepare(theta)?;
        let mut cache: HashMap<Vec<u64>, StateVector> = HashMap::new();
        let p_clean = self.table.clean_probability();
        let q_meas = self.noise.error_rate(1);
        let shots = self.shots;
        let mut value = self.constant;
        let mut var = 0.0;
        let mut flips = Vec::new();
        for t in &self.terms {
            let m0 = ideal.pauli_expectation(t.x, t.z);
            let n_basis = (t.x).count_ones() as i32;
            // odd number of outcome flips from X/Y errors after the basis gates
            let damp = (1.0 - 4.0 * q_meas / 3.0).powi(n_basis);
            let n_clean = if p_clean >= 1.0 {
                shots
            } else {
                Binomial::new(shots as u64, p_clean).expect("valid").sample(&mut self.rng) as usize
            };
            let mut plus = Binomial::new(n_clean as u64, ((1.0 + m0 * damp) / 2.0).clamp(0.0, 1.0))
                .expect("valid")
                .sample(&mut self.rng) as usize;
            for _ in n_clean..shots {
                let (ex, ez) = loop {
                    if let Some(e) = sample_pattern(&self.table, &self.classes, &mut self.rng, &mut flips) {
                        break e;
                    }
                };
                let m = if flips.iter().all(|w| *w == 0) {
                    m0
                } else {
                    let psi = match cache.get(&flips) {
                        Some(s) => s,
                        None => {
                            let f = flips.clone();
                            let s = self
                                .circuit
                                .prepare_with_flips(theta, |r| f[r / 64] >> (r % 64) & 1 == 1)?;
                            cache.entry(flips.clone()).or_insert(s)
                        }
                    };
                    psi.pauli_expectation(t.x, t.z)
                };
                let anti = ((ex & t.z).count_ones() + (ez & t.x).count_ones()) % 2 == 1;
                let s = if anti { -1.0 } else { 1.0 };
                if self.rng.gen_bool(((1.0 + s * m * damp) / 2.0).clamp(0.0, 1.0)) {
                    plus += 1;
                }
            }
            let mean = (2.0 * plus as f64 - shots as f64) / shots as f64;
            let c = t.coeff.re;
            value += c * mean;
            var += c * c * (1.0 - mean * mean).max(0.0) / shots as f64;
        }
        Ok((value, var.sqrt()))
    }
}

/// Draw one error pattern into `flips`; `None` when no gate failed.
fn sample_pattern(
    t: &FrameTable,
    classes: &[(f64, Vec<usize>)],
    rng: &mut ChaCha8Rng,
    flips: &mut Vec<u64>,
) -> Option<(u64, u64)> {
    flips.clear();
    flips.resize(t.words, 0);
    let (mut x, mut z) = (0u64, 0u64);
    let mut any = false;
    for &(rate, ref idx) in classes {
        if rate <= 0.0 {
            continue;
        }
        let geo = (rate < 1.0).then(|| Geometric::new(rate).expect("valid rate"));
        let mut pos = 0usize;
        loop {
            let skip = geo.as_ref().map_or(0, |g| g.sample(rng) as usize);
            pos = match pos.checked_add(skip) {
                Some(p) if p < idx.len() => p,
                _ => break,
            };
            let site = &t.sites[idx[pos]];
            let e = &site.effects[rng.gen_range(0..site.effects.len())];
            for (w, f) in flips.iter_mut().zip(&e.flips) {
                *w ^= f;
            }
            x ^= e.x;
            z ^= e.z;
            any = true;
            pos += 1;
        }
    }
    any.then_some((x, z))
}

/// One-shot convenience wrapper around [`NoisyEstimator`].
pub fn sample_expectation(
    circuit: &AnsatzCircuit,
    theta: &[f64],
    h: &PauliSum,
    shots: ShotConfig,
    noise: NoiseModel,
) -> Result<(f64, f64), SimError> {
    NoisyEstimator::new(circuit, h, shots, noise)?.estimate(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn gen(label: &str) -> PauliString {
        PauliString::from_label(label, Complex64::new(0.0, 1.0)).unwrap()
    }

    fn conj_check(gate: Gate, from: &str, to: &str) {
        let p = PauliString::from_label(from, Complex64::new(1.0, 0.0)).unwrap();
        let (mut x, mut z) = (p.x, p.z);
        gate.conjugate(&mut x, &mut z);
        let q = PauliString::new(p.n_qubits, x, z, Complex64::new(1.0, 0.0));
        assert_eq!(q.label(), to, "{gate:?} on {from}");
    }

    #[test]
    fn conjugation_tables() {
        conj_check(Gate::H(0), "X", "Z");
        conj_check(Gate::H(0), "Y", "Y");
        conj_check(Gate::ToY(0), "Y", "Z");
        conj_check(Gate::ToY(0), "X", "Y");
        conj_check(Gate::ToY(0), "Z", "X");
        conj_check(Gate::FromY(0), "Z", "Y");
        conj_check(Gate::FromY(0), "Y", "X");
        // control is qubit 1 (rightmost letter), target qubit 2
        conj_check(Gate::Cnot(0, 1), "IX", "XX");
        conj_check(Gate::Cnot(0, 1), "ZI", "ZZ");
        conj_check(Gate::Cnot(0, 1), "XI", "XI");
    }

    #[test]
    fn compiled_rotation_structure() {
        let mut c = AnsatzCircuit::new(2, 0b01);
        c.push(gen("XY")).unwrap();
        let g = compile(&c);
        assert_eq!(
            g,
            vec![
                Gate::X(0),
                Gate::ToY(0),
                Gate::H(1),
                Gate::Cnot(0, 1),
                Gate::Rz(1, 0),
                Gate::Cnot(0, 1),
                Gate::FromY(0),
                Gate::H(1),
            ]
        );
    }

    #[test]
    fn z_string_on_basis_state_is_exact() {
        let c = AnsatzCircuit::new(3, 0b101);
        let h = PauliSum::from_text("1 ZIZ\n0.5 IZI\n").unwrap();
        let (e, se) = sample_expectation(&c, &[], &h, ShotConfig { shots: 100, seed: 1 }, NoiseModel::OFF).unwrap();
        assert_eq!(e, 1.0 + 0.5);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn error_before_rz_flips_angle() {
        let mut c = AnsatzCircuit::new(1, 0);
        c.push(gen("Y")).unwrap();
        let t = FrameTable::new(&c, &NoiseModel::new(0.1, 0.1).unwrap());
        // sites: ToY, Rz, FromY; an X error on the ToY site anticommutes with Z at Rz
        let x_err = &t.sites[0].effects[0];
        assert_eq!(x_err.flips[0], 1);
        let z_err = &t.sites[0].effects[1];
        assert_eq!(z_err.flips[0], 0);
    }
}
