//! Phased Pauli strings in X/Z bit-mask form.
//!
//! Qubit `k` (0-based bit `k`) is qubit `k + 1` in the usual `|q_n … q_1⟩`
//! notation; strings are printed with the highest qubit first.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use super::HamiltonianError;

pub const MAX_QUBITS: usize = 64;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self · other = i^k · result`.
    fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// Coefficient times a tensor product of Pauli letters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliString {
    pub n_qubits: usize,
    pub x: u64,
    pub z: u64,
    pub coeff: Complex64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn new(n_qubits: usize, x: u64, z: u64, coeff: Complex64) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliString {
            n_qubits,
            x,
            z,
            coeff,
        }
    }

    /// Build from `(qubit, letter)` pairs with 0-based qubit indices.
    pub fn from_letters(n_qubits: usize, letters: &[(usize, Pauli)], coeff: Complex64) -> Self {
        let mut s = Self::new(n_qubits, 0, 0, coeff);
        for &(q, p) in letters {
            s.set(q, p);
        }
        s
    }

    /// Parse a label written highest qubit first, e.g. `"XY"` = X₂Y₁.
    pub fn from_label(label: &str, coeff: Complex64) -> Result<Self, HamiltonianError> {
        let n = label.chars().count();
        let mut s = Self::new(n, 0, 0, coeff);
        for (k, ch) in label.chars().enumerate() {
            let q = n - 1 - k;
            let p = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(HamiltonianError::BadPauliLabel(other.to_string())),
            };
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, p: Pauli) {
        assert!(qubit < self.n_qubits);
        let (x, z) = p.bits();
        let m = 1u64 << qubit;
        self.x = if x { self.x | m } else { self.x & !m };
        self.z = if z { self.z | m } else { self.z & !m };
    }

    /// Letter pattern, ignoring the coefficient.
    pub fn key(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn with_coeff(&self, coeff: Complex64) -> Self {
        PauliString { coeff, ..*self }
    }

    /// True if the letter patterns commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn adjoint(&self) -> Self {
        self.with_coeff(self.coeff.conj())
    }

    /// Letters written highest qubit first.
    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|q| self.get(q).symbol())
            .collect()
    }

    /// Subscripted form listing only non-identity letters, e.g. `X2Y1`.
    pub fn compact_label(&self) -> String {
        let s: String = (0..self.n_qubits)
            .rev()
            .filter(|&q| self.get(q) != Pauli::I)
            .map(|q| format!("{}{}", self.get(q).symbol(), q + 1))
            .collect();
        if s.is_empty() {
            "I".into()
        } else {
            s
        }
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩` for a computational basis state `b`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u64, Complex64) {
        let k = ((self.x & self.z).count_ones() + 2 * (self.z & b).count_ones()) % 4;
        (b ^ self.x, self.coeff * I_POWERS[k as usize])
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        assert_eq!(self.n_qubits, rhs.n_qubits, "qubit count mismatch");
        let mut power = 0u8;
        let mut overlap = self.support() & rhs.support();
        while overlap != 0 {
            let q = overlap.trailing_zeros() as usize;
            overlap &= overlap - 1;
            let (k, _) = self.get(q).product(rhs.get(q));
            power += k;
        }
        PauliString {
            n_qubits: self.n_qubits,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            coeff: self.coeff * rhs.coeff * I_POWERS[(power % 4) as usize],
        }
    }
}

/// `a · b` as a single canonical Pauli string.
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> PauliString {
    *a * *b
}

fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

fn parse_coeff(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let inner = inner.strip_suffix('i')?;
        // split at the sign that starts the imaginary part (not an exponent sign)
        let bytes = inner.as_bytes();
        let split = (1..bytes.len()).rev().find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        })?;
        let re = inner[..split].parse().ok()?;
        let im = inner[split..].parse().ok()?;
        return Some(Complex64::new(re, im));
    }
    if let Some(im) = s.strip_suffix('i') {
        return im.parse().ok().map(|v| Complex64::new(0.0, v));
    }
    s.parse().ok().map(|v| Complex64::new(v, 0.0))
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_coeff(self.coeff), self.label())
    }
}

impl FromStr for PauliString {
    type Err = HamiltonianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let (Some(c), Some(letters), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(HamiltonianError::BadPauliLabel(s.to_string()));
        };
        let coeff = parse_coeff(c).ok_or_else(|| HamiltonianError::BadPauliLabel(s.to_string()))?;
        PauliString::from_label(letters, coeff)
    }
}

/// Sum of Pauli strings with distinct letter patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    pub n_qubits: usize,
    terms: Vec<PauliString>,
}

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const DROP_TOL: f64 = 1e-12;

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_terms(n_qubits, vec![PauliString::identity(n_qubits)])
    }

    /// Collect terms, merging duplicates and dropping zeros.
    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = PauliString>) -> Self {
        let mut acc: HashMap<(u64, u64), Complex64> = HashMap::new();
        for t in terms {
            assert_eq!(t.n_qubits, n_qubits, "qubit count mismatch");
            *acc.entry(t.key()).or_default() += t.coeff;
        }
        let mut terms: Vec<PauliString> = acc
            .into_iter()
            .filter(|(_, c)| c.norm() > DROP_TOL)
            .map(|((x, z), c)| PauliString::new(n_qubits, x, z, c))
            .collect();
        terms.sort_by_key(|t| (t.x, t.z));
        PauliSum { n_qubits, terms }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn simplify(self) -> Self {
        Self::from_terms(self.n_qubits, self.terms)
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        Self::from_terms(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn scale(&self, c: Complex64) -> PauliSum {
        Self::from_terms(
            self.n_qubits,
            self.terms.iter().map(|t| t.with_coeff(t.coeff * c)),
        )
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(*a * *b);
            }
        }
        Self::from_terms(self.n_qubits, out)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|t| t.adjoint()).collect(),
        }
    }

    /// Largest imaginary part of any coefficient; zero for a Hermitian sum.
    pub fn hermiticity_error(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.im.abs()).fold(0.0, f64::max)
    }

    /// Largest real part of any coefficient; zero for an anti-Hermitian sum.
    pub fn anti_hermiticity_error(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.re.abs()).fold(0.0, f64::max)
    }

    pub fn coefficient_of(&self, x: u64, z: u64) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.x == x && t.z == z)
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    /// Text form: one `coefficient letters` line per term.
    pub fn to_text(&self) -> String {
        self.terms.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<Self, HamiltonianError> {
        let terms: Vec<PauliString> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        let n = terms.first().map(|t| t.n_qubits).unwrap_or(0);
        if let Some(bad) = terms.iter().find(|t| t.n_qubits != n) {
            return Err(HamiltonianError::QubitCountMismatch {
                expected: n,
                found: bad.n_qubits,
            });
        }
        Ok(Self::from_terms(n, terms))
    }
}
