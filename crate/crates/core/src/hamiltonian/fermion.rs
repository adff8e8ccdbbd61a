//! Second-quantized operators over spin-orbitals.
//!
//! Mode `p` (0-based) is spatial orbital `p` with spin up for `p < n_orb` and
//! spatial orbital `p - n_orb` with spin down otherwise. The annihilator `a_p`
//! acting on an occupation bit-string picks up `(-1)^(f_0 + … + f_{p-1})`.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use super::HamiltonianError;
use crate::chem::IntegralSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder { mode, dagger: false }
    }

    pub fn adjoint(self) -> Self {
        Ladder {
            dagger: !self.dagger,
            ..self
        }
    }
}

/// Apply a product of ladder operators (rightmost first) to an occupation
/// bit-string. Returns `None` if the state is annihilated.
pub fn apply_ladders(ops: &[Ladder], state: u64) -> Option<(u64, f64)> {
    let mut s = state;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = s & bit != 0;
        if occupied == op.dagger {
            return None;
        }
        if (s & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        s ^= bit;
    }
    Some((s, sign))
}

/// Linear combination of ladder-operator products.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOp {
    pub n_modes: usize,
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOp {
    pub fn zero(n_modes: usize) -> Self {
        FermionOp {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        let mut op = Self::zero(n_modes);
        op.push(Complex64::new(1.0, 0.0), Vec::new());
        op
    }

    pub fn term(n_modes: usize, coeff: Complex64, ops: Vec<Ladder>) -> Self {
        let mut op = Self::zero(n_modes);
        op.push(coeff, ops);
        op
    }

    pub fn push(&mut self, coeff: Complex64, ops: Vec<Ladder>) {
        assert!(
            ops.iter().all(|l| l.mode < self.n_modes),
            "mode index out of range"
        );
        self.terms.push((coeff, ops));
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn add(&self, other: &FermionOp) -> FermionOp {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: Complex64) -> FermionOp {
        FermionOp {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(|(k, o)| (k * c, o.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &FermionOp) -> FermionOp {
        let mut out = FermionOp::zero(self.n_modes);
        for (a, oa) in &self.terms {
            for (b, ob) in &other.terms {
                let mut ops = oa.clone();
                ops.extend_from_slice(ob);
                out.terms.push((a * b, ops));
            }
        }
        out
    }

    pub fn adjoint(&self) -> FermionOp {
        FermionOp {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| (c.conj(), ops.iter().rev().map(|l| l.adjoint()).collect()))
                .collect(),
        }
    }

    /// Canonical form: creators left of annihilators, each group in descending
    /// mode order, duplicates merged and zeros dropped.
    pub fn normal_ordered(&self) -> FermionOp {
        let mut acc: HashMap<Vec<Ladder>, Complex64> = HashMap::new();
        for (c, ops) in &self.terms {
            normal_order_into(*c, ops.clone(), &mut acc);
        }
        let mut terms: Vec<(Complex64, Vec<Ladder>)> = acc
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-12)
            .map(|(ops, c)| (c, ops))
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        FermionOp {
            n_modes: self.n_modes,
            terms,
        }
    }

    /// Largest coefficient difference between `self` and `other` after normal
    /// ordering both.
    pub fn distance(&self, other: &FermionOp) -> f64 {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
            .normal_ordered()
            .terms
            .iter()
            .map(|(c, _)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    /// Action on an occupation bit-string: list of `(state, amplitude)`.
    pub fn apply(&self, state: u64) -> Vec<(u64, Complex64)> {
        let mut acc: HashMap<u64, Complex64> = HashMap::new();
        for (c, ops) in &self.terms {
            if let Some((s, sign)) = apply_ladders(ops, state) {
                *acc.entry(s).or_default() += c * sign;
            }
        }
        let mut out: Vec<(u64, Complex64)> =
            acc.into_iter().filter(|(_, a)| a.norm() > 1e-14).collect();
        out.sort_by_key(|(s, _)| *s);
        out
    }

    /// The electronic Hamiltonian
    /// `Σ h_pq a†_pσ a_qσ + ½ Σ (ps|qr) a†_pσ a†_qλ a_rλ a_sσ + E_nuc`.
    pub fn hamiltonian(ints: &IntegralSet) -> Result<FermionOp, HamiltonianError> {
        ints.check_symmetry(1e-10)
            .map_err(|e| HamiltonianError::Integrals(e.to_string()))?;
        let n = ints.n_orbitals;
        let n_modes = 2 * n;
        let mut op = FermionOp::zero(n_modes);
        let real = |v: f64| Complex64::new(v, 0.0);
        if ints.e_nuclear != 0.0 {
            op.push(real(ints.e_nuclear), Vec::new());
        }
        for spin in 0..2 {
            let off = spin * n;
            for p in 0..n {
                for q in 0..n {
                    let h = ints.one_body[(p, q)];
                    if h != 0.0 {
                        op.push(
                            real(h),
                            vec![Ladder::create(p + off), Ladder::annihilate(q + off)],
                        );
                    }
                }
            }
        }
        for s1 in 0..2 {
            for s2 in 0..2 {
                let (o1, o2) = (s1 * n, s2 * n);
                for p in 0..n {
                    for q in 0..n {
                        if p + o1 == q + o2 {
                            continue;
                        }
                        for r in 0..n {
                            for s in 0..n {
                                if r + o2 == s + o1 {
                                    continue;
                                }
                                let v = ints.two_body.get(p, s, q, r);
                                if v == 0.0 {
                                    continue;
                                }
                                op.push(
                                    real(0.5 * v),
                                    vec![
                                        Ladder::create(p + o1),
                                        Ladder::create(q + o2),
                                        Ladder::annihilate(r + o2),
                                        Ladder::annihilate(s + o1),
                                    ],
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(op)
    }

    /// Total spin `S² = S₋S₊ + S_z(S_z + 1)` over `n_orb` spatial orbitals.
    pub fn spin_squared(n_orb: usize) -> FermionOp {
        let n_modes = 2 * n_orb;
        let one = Complex64::new(1.0, 0.0);
        let mut s_plus = FermionOp::zero(n_modes);
        let mut s_minus = FermionOp::zero(n_modes);
        let mut s_z = FermionOp::zero(n_modes);
        for p in 0..n_orb {
            let (up, down) = (p, p + n_orb);
            s_plus.push(one, vec![Ladder::create(up), Ladder::annihilate(down)]);
            s_minus.push(one, vec![Ladder::create(down), Ladder::annihilate(up)]);
            s_z.push(one * 0.5, vec![Ladder::create(up), Ladder::annihilate(up)]);
            s_z.push(one * -0.5, vec![Ladder::create(down), Ladder::annihilate(down)]);
        }
        let sz_plus_one = s_z.add(&FermionOp::identity(n_modes));
        s_minus
            .mul(&s_plus)
            .add(&s_z.mul(&sz_plus_one))
            .normal_ordered()
    }
}

fn normal_order_into(coeff: Complex64, mut ops: Vec<Ladder>, acc: &mut HashMap<Vec<Ladder>, Complex64>) {
    // insertion sort with anticommutation; contractions recurse
    let mut sign = 1.0;
    for i in 1..ops.len() {
        let mut j = i;
        while j > 0 {
            let (left, right) = (ops[j - 1], ops[j]);
            let out_of_order = match (left.dagger, right.dagger) {
                (false, true) => true,
                (true, false) => false,
                _ => left.mode < right.mode,
            };
            if !out_of_order {
                if left == right {
                    return; // a†a† or aa on the same mode
                }
                break;
            }
            if !left.dagger && right.dagger && left.mode == right.mode {
                // a_p a†_p = 1 - a†_p a_p
                let mut contracted = ops.clone();
                contracted.drain(j - 1..=j);
                normal_order_into(coeff * sign, contracted, acc);
            }
            ops.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    *acc.entry(ops).or_default() += coeff * sign;
}

impl fmt::Display for FermionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, ops) in &self.terms {
            write!(f, "({:+.6}{:+.6}i)", c.re, c.im)?;
            for l in ops {
                write!(f, " a{}{}", l.mode + 1, if l.dagger { "^" } else { "" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::TwoBody;
    use nalgebra::DMatrix;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn ladder_signs() {
        // a_2 on |f2 f1 f0> = |1 1 0>: one occupied mode below -> sign -1
        assert_eq!(apply_ladders(&[Ladder::annihilate(2)], 0b110), Some((0b010, -1.0)));
        assert_eq!(apply_ladders(&[Ladder::create(0)], 0b001), None);
        assert_eq!(apply_ladders(&[Ladder::create(0)], 0b110), Some((0b111, 1.0)));
    }

    #[test]
    fn anticommutator_normal_orders_to_identity() {
        let a = FermionOp::term(3, one(), vec![Ladder::annihilate(1), Ladder::create(1)]);
        let b = FermionOp::term(3, one(), vec![Ladder::create(1), Ladder::annihilate(1)]);
        let sum = a.add(&b).normal_ordered();
        assert_eq!(sum.terms().len(), 1);
        assert!(sum.terms()[0].1.is_empty());
        assert!((sum.terms()[0].0 - one()).norm() < 1e-14);
    }

    #[test]
    fn single_level_hamiltonian() {
        let eps = -0.7;
        let ints = IntegralSet {
            n_orbitals: 1,
            one_body: DMatrix::from_element(1, 1, eps),
            two_body: TwoBody::zeros(1),
            overlap: DMatrix::identity(1, 1),
            e_nuclear: 0.0,
            basis_label: "test".into(),
        };
        let h = FermionOp::hamiltonian(&ints).unwrap();
        let expected = FermionOp::zero(2)
            .add(&FermionOp::term(2, one() * eps, vec![Ladder::create(0), Ladder::annihilate(0)]))
            .add(&FermionOp::term(2, one() * eps, vec![Ladder::create(1), Ladder::annihilate(1)]));
        assert!(h.distance(&expected) < 1e-14);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let g = crate::chem::Geometry::h2(0.725);
        let mol =
            crate::chem::native_mo_integrals(&g, None, &crate::chem::RhfOptions::default()).unwrap();
        let h = FermionOp::hamiltonian(&mol.mo).unwrap();
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn spin_squared_on_simple_states() {
        let s2 = FermionOp::spin_squared(2);
        // closed shell |up0 down0>
        let closed = 0b0101;
        let out = s2.apply(closed);
        assert!(out.iter().all(|(_, a)| a.norm() < 1e-12));
        // |up0 up1> is a triplet component: S² = 2
        let triplet = 0b0011;
        let out = s2.apply(triplet);
        assert_eq!(out.len(), 1);
        assert!((out[0].1 - one() * 2.0).norm() < 1e-12);
    }
}
