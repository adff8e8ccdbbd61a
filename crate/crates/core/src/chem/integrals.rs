//! One- and two-electron integrals over contracted s-type Gaussians.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::geometry::{atomic_number, Geometry};
use super::ChemError;

/// STO-3G hydrogen 1s (ζ = 1.24): primitive exponents in bohr⁻².
pub const STO3G_H_EXPONENTS: [f64; 3] = [3.425_250_91, 0.623_913_73, 0.168_855_40];
/// STO-3G hydrogen 1s contraction coefficients (for normalized primitives).
pub const STO3G_H_COEFFS: [f64; 3] = [0.154_328_97, 0.535_328_14, 0.444_634_54];

/// Dense four-index tensor of two-electron integrals in chemists' notation,
/// `(pq|rs) = ∫∫ φp(1)φq(1) r₁₂⁻¹ φr(2)φs(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBody {
    n: usize,
    data: Vec<f64>,
}

impl TwoBody {
    pub fn zeros(n: usize) -> Self {
        TwoBody {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.index(p, q, r, s)]
    }

    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let i = self.index(p, q, r, s);
        self.data[i] = value;
    }

    /// Set `(pq|rs)` and all its 8-fold permutation partners.
    pub fn set_symmetric(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.set(a, b, c, d, value);
        }
    }

    /// Largest deviation from the 8-fold permutational symmetry.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        for w in [
                            self.get(q, p, r, s),
                            self.get(p, q, s, r),
                            self.get(q, p, s, r),
                            self.get(r, s, p, q),
                            self.get(s, r, p, q),
                            self.get(r, s, q, p),
                            self.get(s, r, q, p),
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &TwoBody) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrals of the electronic Hamiltonian in some orbital basis (Hartree).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub n_orbitals: usize,
    /// h_pq, core (kinetic + nuclear attraction) integrals.
    pub one_body: DMatrix<f64>,
    pub two_body: TwoBody,
    /// Orbital overlap; identity for orthonormal (MO) bases.
    pub overlap: DMatrix<f64>,
    pub e_nuclear: f64,
    pub basis_label: String,
}

impl IntegralSet {
    /// Largest asymmetry of `h_pq`.
    pub fn one_body_asymmetry(&self) -> f64 {
        (&self.one_body - self.one_body.transpose()).amax()
    }

    pub fn check_symmetry(&self, tol: f64) -> Result<(), ChemError> {
        let a = self.one_body_asymmetry();
        let b = self.two_body.symmetry_error();
        if a > tol || b > tol {
            return Err(ChemError::AsymmetricIntegrals(a.max(b)));
        }
        Ok(())
    }
}

/// Boys function F₀(t) = ∫₀¹ exp(−t u²) du.
pub fn boys_f0(t: f64) -> f64 {
    if t < 0.0 {
        return f64::NAN;
    }
    if t < 30.0 {
        // F0(t) = e^{-t} Σ_k (2t)^k / (2k+1)!!, all terms positive.
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= 2.0 * t / (2.0 * k + 1.0);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        (-t).exp() * sum
    } else {
        // erf(√t) = 1 to below 1e-14 here.
        0.5 * (PI / t).sqrt()
    }
}

#[derive(Debug, Clone)]
struct ContractedS {
    center: [f64; 3],
    exponents: Vec<f64>,
    /// Coefficients including primitive and contraction normalization.
    coeffs: Vec<f64>,
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}

fn gaussian_product(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> [f64; 3] {
    let p = a + b;
    [
        (a * ra[0] + b * rb[0]) / p,
        (a * ra[1] + b * rb[1]) / p,
        (a * ra[2] + b * rb[2]) / p,
    ]
}

fn prim_overlap(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let p = a + b;
    (PI / p).powf(1.5) * (-a * b / p * dist2(ra, rb)).exp()
}

fn prim_kinetic(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    let r2 = dist2(ra, rb);
    mu * (3.0 - 2.0 * mu * r2) * (PI / p).powf(1.5) * (-mu * r2).exp()
}

fn prim_nuclear(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3], rc: &[f64; 3], z: f64) -> f64 {
    let p = a + b;
    let rp = gaussian_product(a, ra, b, rb);
    -2.0 * PI / p * z * (-a * b / p * dist2(ra, rb)).exp() * boys_f0(p * dist2(&rp, rc))
}

#[allow(clippy::too_many_arguments)]
fn prim_eri(
    a: f64,
    ra: &[f64; 3],
    b: f64,
    rb: &[f64; 3],
    c: f64,
    rc: &[f64; 3],
    d: f64,
    rd: &[f64; 3],
) -> f64 {
    let p = a + b;
    let q = c + d;
    let rp = gaussian_product(a, ra, b, rb);
    let rq = gaussian_product(c, rc, d, rd);
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
        * (-a * b / p * dist2(ra, rb) - c * d / q * dist2(rc, rd)).exp()
        * boys_f0(p * q / (p + q) * dist2(&rp, &rq))
}

impl ContractedS {
    fn sto3g_hydrogen(center: [f64; 3]) -> Self {
        let exponents = STO3G_H_EXPONENTS.to_vec();
        let mut coeffs: Vec<f64> = STO3G_H_EXPONENTS
            .iter()
            .zip(STO3G_H_COEFFS)
            .map(|(&a, d)| d * (2.0 * a / PI).powf(0.75))
            .collect();
        let mut f = ContractedS {
            center,
            exponents,
            coeffs: coeffs.clone(),
        };
        let norm = f.overlap(&f).sqrt();
        for c in &mut coeffs {
            *c /= norm;
        }
        f.coeffs = coeffs;
        f
    }

    fn pairs<'a>(&'a self, other: &'a ContractedS) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
        self.exponents
            .iter()
            .zip(&self.coeffs)
            .flat_map(move |(&a, &ca)| {
                other
                    .exponents
                    .iter()
                    .zip(&other.coeffs)
                    .map(move |(&b, &cb)| (a, b, ca * cb))
            })
    }

    fn overlap(&self, other: &ContractedS) -> f64 {
        self.pairs(other)
            .map(|(a, b, c)| c * prim_overlap(a, &self.center, b, &other.center))
            .sum()
    }

    fn kinetic(&self, other: &ContractedS) -> f64 {
        self.pairs(other)
            .map(|(a, b, c)| c * prim_kinetic(a, &self.center, b, &other.center))
            .sum()
    }

    fn nuclear(&self, other: &ContractedS, nuclei: &[([f64; 3], f64)]) -> f64 {
        self.pairs(other)
            .map(|(a, b, c)| {
                c * nuclei
                    .iter()
                    .map(|(rc, z)| prim_nuclear(a, &self.center, b, &other.center, rc, *z))
                    .sum::<f64>()
            })
            .sum()
    }
}

fn contracted_eri(f: [&ContractedS; 4]) -> f64 {
    let mut total = 0.0;
    for (a, b, cab) in f[0].pairs(f[1]) {
        for (c, d, ccd) in f[2].pairs(f[3]) {
            total += cab
                * ccd
                * prim_eri(
                    a,
                    &f[0].center,
                    b,
                    &f[1].center,
                    c,
                    &f[2].center,
                    d,
                    &f[3].center,
                );
        }
    }
    total
}

/// AO-basis integrals for an all-hydrogen geometry in STO-3G.
pub fn sto3g_integrals(geometry: &Geometry) -> Result<IntegralSet, ChemError> {
    if let Some(atom) = geometry.atoms.iter().find(|a| a.symbol != "H") {
        return Err(ChemError::UnsupportedElement(atom.symbol.clone()));
    }
    let basis: Vec<ContractedS> = geometry
        .atoms
        .iter()
        .map(|a| ContractedS::sto3g_hydrogen(a.position_bohr()))
        .collect();
    let nuclei: Vec<([f64; 3], f64)> = geometry
        .atoms
        .iter()
        .map(|a| (a.position_bohr(), atomic_number(&a.symbol).unwrap_or(1) as f64))
        .collect();
    let n = basis.len();
    let overlap = DMatrix::from_fn(n, n, |i, j| basis[i].overlap(&basis[j]));
    let one_body = DMatrix::from_fn(n, n, |i, j| {
        basis[i].kinetic(&basis[j]) + basis[i].nuclear(&basis[j], &nuclei)
    });
    let one_body = (&one_body + one_body.transpose()) * 0.5;
    let mut two_body = TwoBody::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + s {
                        continue;
                    }
                    let v = contracted_eri([&basis[p], &basis[q], &basis[r], &basis[s]]);
                    two_body.set_symmetric(p, q, r, s, v);
                }
            }
        }
    }
    Ok(IntegralSet {
        n_orbitals: n,
        one_body,
        two_body,
        overlap,
        e_nuclear: geometry.nuclear_repulsion(),
        basis_label: "sto-3g/ao".into(),
    })
}

/// Four-index transform of AO integrals into the orbital basis given by the
/// columns of `coefficients` (AO × MO).
pub fn transform_to_mo(
    integrals: &IntegralSet,
    coefficients: &DMatrix<f64>,
) -> Result<IntegralSet, ChemError> {
    let n_ao = integrals.n_orbitals;
    if coefficients.nrows() != n_ao {
        return Err(ChemError::DimensionMismatch {
            expected: n_ao,
            found: coefficients.nrows(),
        });
    }
    let m = coefficients.ncols();
    let c = coefficients;
    let one_body = c.transpose() * &integrals.one_body * c;
    let overlap = c.transpose() * &integrals.overlap * c;

    // Quarter transforms, one index at a time.
    let mut t1 = vec![0.0; m * n_ao * n_ao * n_ao];
    for p in 0..m {
        for mu in 0..n_ao {
            let cp = c[(mu, p)];
            if cp == 0.0 {
                continue;
            }
            for nu in 0..n_ao {
                for la in 0..n_ao {
                    for si in 0..n_ao {
                        t1[((p * n_ao + nu) * n_ao + la) * n_ao + si] +=
                            cp * integrals.two_body.get(mu, nu, la, si);
                    }
                }
            }
        }
    }
    let mut t2 = vec![0.0; m * m * n_ao * n_ao];
    for p in 0..m {
        for q in 0..m {
            for nu in 0..n_ao {
                let cq = c[(nu, q)];
                for la in 0..n_ao {
                    for si in 0..n_ao {
                        t2[((p * m + q) * n_ao + la) * n_ao + si] +=
                            cq * t1[((p * n_ao + nu) * n_ao + la) * n_ao + si];
                    }
                }
            }
        }
    }
    let mut t3 = vec![0.0; m * m * m * n_ao];
    for pq in 0..m * m {
        for r in 0..m {
            for la in 0..n_ao {
                let cr = c[(la, r)];
                for si in 0..n_ao {
                    t3[(pq * m + r) * n_ao + si] += cr * t2[(pq * n_ao + la) * n_ao + si];
                }
            }
        }
    }
    let mut two_body = TwoBody::zeros(m);
    for pq in 0..m * m {
        for r in 0..m {
            for s in 0..m {
                let mut v = 0.0;
                for si in 0..n_ao {
                    v += c[(si, s)] * t3[(pq * m + r) * n_ao + si];
                }
                two_body.data[(pq * m + r) * m + s] = v;
            }
        }
    }
    // Symmetrize away rounding noise so the 8-fold symmetry holds exactly.
    let mut sym = TwoBody::zeros(m);
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let avg = (two_body.get(p, q, r, s)
                        + two_body.get(q, p, r, s)
                        + two_body.get(p, q, s, r)
                        + two_body.get(q, p, s, r)
                        + two_body.get(r, s, p, q)
                        + two_body.get(s, r, p, q)
                        + two_body.get(r, s, q, p)
                        + two_body.get(s, r, q, p))
                        / 8.0;
                    sym.set(p, q, r, s, avg);
                }
            }
        }
    }
    Ok(IntegralSet {
        n_orbitals: m,
        one_body: (&one_body + one_body.transpose()) * 0.5,
        two_body: sym,
        overlap: (&overlap + overlap.transpose()) * 0.5,
        e_nuclear: integrals.e_nuclear,
        basis_label: integrals.basis_label.replace("/ao", "/mo"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boys_limits_and_crossover() {
        assert_eq!(boys_f0(0.0), 1.0);
        // Small-t Taylor expansion: 1 - t/3 + t²/10.
        let t = 1e-4;
        assert!((boys_f0(t) - (1.0 - t / 3.0 + t * t / 10.0)).abs() < 1e-13);
        // Both branches agree at the crossover.
        let below = {
            let t: f64 = 30.0 - 1e-12;
            boys_f0(t)
        };
        let above = boys_f0(30.0);
        assert!((below - above).abs() < 1e-12);
        // Numerical quadrature oracle at a moderate argument.
        let t = 2.5;
        let n = 20000;
        let h = 1.0 / n as f64;
        let simpson: f64 = (0..=n)
            .map(|k| {
                let u = k as f64 * h;
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * (-t * u * u).exp()
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((boys_f0(t) - simpson).abs() < 1e-12);
    }

    #[test]
    fn single_hydrogen_is_normalized() {
        let g = Geometry::new(vec![super::super::geometry::Atom::hydrogen([0.0; 3])], 0).unwrap();
        let ints = sto3g_integrals(&g).unwrap();
        assert!((ints.overlap[(0, 0)] - 1.0).abs() < 1e-10);
        assert_eq!(ints.e_nuclear, 0.0);
    }

    #[test]
    fn h2_reference_values() {
        let ints = sto3g_integrals(&Geometry::h2(0.725)).unwrap();
        assert!((ints.e_nuclear - BOHR / 0.725).abs() < 1e-10);
        assert!((ints.e_nuclear - 0.7299).abs() < 1e-4);
        assert!(ints.two_body.symmetry_error() < 1e-10);
        assert!(ints.one_body_asymmetry() < 1e-10);
        // (11|11) for the STO-3G hydrogen function is a textbook 0.7746 Hartree.
        assert!((ints.two_body.get(0, 0, 0, 0) - 0.7746).abs() < 1e-4);
    }

    const BOHR: f64 = super::super::geometry::BOHR_ANGSTROM;

    #[test]
    fn identity_transform_is_noop() {
        let ints = sto3g_integrals(&Geometry::h4_square(1.1)).unwrap();
        let eye = DMatrix::identity(4, 4);
        let out = transform_to_mo(&ints, &eye).unwrap();
        assert!(out.two_body.max_abs_diff(&ints.two_body) < 1e-14);
        assert!((&out.one_body - &ints.one_body).amax() < 1e-14);
    }

    #[test]
    fn transform_rejects_bad_shape() {
        let ints = sto3g_integrals(&Geometry::h2(0.7)).unwrap();
        let c = DMatrix::identity(3, 3);
        assert!(matches!(
            transform_to_mo(&ints, &c),
            Err(ChemError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_hydrogen() {
        let g = Geometry::parse_xyz("2\n\nLi 0 0 0\nH 0 0 1.6\n").unwrap();
        assert!(matches!(sto3g_integrals(&g), Err(ChemError::UnsupportedElement(_))));
    }
}
