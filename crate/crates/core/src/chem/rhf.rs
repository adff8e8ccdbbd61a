//! Closed-shell restricted Hartree–Fock.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::integrals::IntegralSet;
use super::ChemError;

/// How the new density is blended with the previous one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    /// Plain fixed-point iteration.
    Off,
    /// Switch to 0.5 mixing once the density change grows between iterations.
    Auto,
    /// Always keep this fraction of the previous density.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct RhfOptions {
    /// Convergence threshold on the largest density-matrix change.
    pub density_tol: f64,
    pub max_iterations: usize,
    pub damping: Damping,
    /// Orbital-energy window inside which orbitals count as degenerate and
    /// are re-oriented along the `symmetry` operators.
    pub degeneracy_tol: f64,
}

impl Default for RhfOptions {
    fn default() -> Self {
        RhfOptions {
            density_tol: 1e-8,
            max_iterations: 200,
            damping: Damping::Auto,
            degeneracy_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RhfResult {
    /// AO × MO coefficients, columns ordered by ascending orbital energy.
    pub mo_coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    pub density_matrix: DMatrix<f64>,
    pub e_total: f64,
    pub e_electronic: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Electronic energy after each iteration.
    pub energy_history: Vec<f64>,
}

/// Symmetric orthogonalization matrix S^{-1/2}.
fn inverse_sqrt(s: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

fn fock_matrix(ints: &IntegralSet, density: &DMatrix<f64>) -> DMatrix<f64> {
    let n = ints.n_orbitals;
    let eri = &ints.two_body;
    let mut fock = ints.one_body.clone();
    for mu in 0..n {
        for nu in 0..n {
            let mut g = 0.0;
            for la in 0..n {
                for si in 0..n {
                    let p = density[(la, si)];
                    if p == 0.0 {
                        continue;
                    }
                    g += p * (eri.get(mu, nu, si, la) - 0.5 * eri.get(mu, la, si, nu));
                }
            }
            fock[(mu, nu)] += g;
        }
    }
    (&fock + fock.transpose()) * 0.5
}

fn electronic_energy(ints: &IntegralSet, density: &DMatrix<f64>, fock: &DMatrix<f64>) -> f64 {
    0.5 * density.component_mul(&(&ints.one_body + fock)).sum()
}

/// Fix the arbitrary basis inside each block of degenerate orbitals by
/// diagonalizing a weighted sum of commuting orbital permutations, then fix
/// each orbital's sign so its largest coefficient is positive.
fn orient_orbitals(
    coefficients: &mut DMatrix<f64>,
    energies: &DVector<f64>,
    overlap: &DMatrix<f64>,
    symmetry: &[Vec<usize>],
    tol: f64,
) {
    let m = coefficients.ncols();
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && (energies[end] - energies[start]).abs() < tol {
            end += 1;
        }
        if end - start > 1 && !symmetry.is_empty() {
            let block = coefficients.columns(start, end - start).into_owned();
            let d = end - start;
            let mut rep = DMatrix::<f64>::zeros(d, d);
            for (k, perm) in symmetry.iter().enumerate() {
                let moved = DMatrix::from_fn(block.nrows(), d, |i, j| block[(perm_inv(perm, i), j)]);
                let r = block.transpose() * overlap * moved;
                rep += r * f64::powi(2.0, k as i32);
            }
            let rep = (&rep + rep.transpose()) * 0.5;
            let eig = SymmetricEigen::new(rep);
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let rotated = block * &eig.eigenvectors;
            for (slot, &o) in order.iter().enumerate() {
                coefficients.set_column(start + slot, &rotated.column(o));
            }
        }
        start = end;
    }
    for j in 0..m {
        let col = coefficients.column(j);
        let mut best = 0;
        for i in 0..col.len() {
            if col[i].abs() > col[best].abs() + 1e-9 {
                best = i;
            }
        }
        if col[best] < 0.0 {
            coefficients.column_mut(j).neg_mut();
        }
    }
}

fn perm_inv(perm: &[usize], i: usize) -> usize {
    perm.iter().position(|&p| p == i).unwrap_or(i)
}

/// Pick a set of mutually commuting involutions from a list of permutations
/// (greedy, in list order). Their joint sign patterns label orbitals by an
/// abelian subgroup.
pub fn commuting_involutions(perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let identity_like = |p: &[usize]| p.iter().enumerate().all(|(i, &x)| i == x);
    for p in perms {
        if identity_like(p) || !identity_like(&compose(p, p)) {
            continue;
        }
        if chosen.iter().all(|q| compose(p, q) == compose(q, p)) {
            // Skip products of already-chosen elements; they add no labels.
            let mut generated = vec![(0..p.len()).collect::<Vec<_>>()];
            for q in &chosen {
                let more: Vec<Vec<usize>> = generated.iter().map(|g| compose(g, q)).collect();
                generated.extend(more);
            }
            if !generated.iter().any(|g| g == p) {
                chosen.push(p.clone());
            }
        }
    }
    chosen
}

fn density_from(coefficients: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = coefficients.columns(0, n_occ);
    &occ * occ.transpose() * 2.0
}

/// Self-consistent field for `n_electrons` paired electrons.
///
/// `symmetry` holds atom permutations (one AO per atom) used to orient
/// degenerate orbitals; pass an empty slice when unknown. A `warm_start`
/// density replaces the core-Hamiltonian guess.
pub fn run_rhf(
    ints: &IntegralSet,
    n_electrons: usize,
    warm_start: Option<&DMatrix<f64>>,
    symmetry: &[Vec<usize>],
    options: &RhfOptions,
) -> Result<RhfResult, ChemError> {
    if n_electrons % 2 != 0 {
        return Err(ChemError::OddElectronCount(n_electrons));
    }
    let n = ints.n_orbitals;
    let n_occ = n_electrons / 2;
    if n_occ > n {
        return Err(ChemError::TooManyElectrons {
            electrons: n_electrons,
            orbitals: n,
        });
    }
    let x = inverse_sqrt(&ints.overlap);
    let labels = commuting_involutions(symmetry);

    let diagonalize = |fock: &DMatrix<f64>| -> (DMatrix<f64>, DVector<f64>) {
        let fp = x.transpose() * fock * &x;
        let eig = SymmetricEigen::new((&fp + fp.transpose()) * 0.5);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut c = DMatrix::zeros(n, n);
        for (slot, &i) in order.iter().enumerate() {
            c.set_column(slot, &(&x * eig.eigenvectors.column(i)));
        }
        orient_orbitals(&mut c, &energies, &ints.overlap, &labels, options.degeneracy_tol);
        (c, energies)
    };

    let mut density = match warm_start {
        Some(p) => {
            if p.nrows() != n || p.ncols() != n {
                return Err(ChemError::DimensionMismatch {
                    expected: n,
                    found: p.nrows(),
                });
            }
            p.clone()
        }
        None => density_from(&diagonalize(&ints.one_body).0, n_occ),
    };

    let mut mixing = match options.damping {
        Damping::Fixed(f) => f,
        _ => 0.0,
    };
    let mut last_change = f64::INFINITY;
    let mut history = Vec::new();
    let mut result = None;
    for iteration in 1..=options.max_iterations {
        let fock = fock_matrix(ints, &density);
        let e_elec = electronic_energy(ints, &density, &fock);
        history.push(e_elec);
        let (c, energies) = diagonalize(&fock);
        let fresh = density_from(&c, n_occ);
        let change = (&fresh - &density).amax();
        let next = &fresh * (1.0 - mixing) + &density * mixing;
        let converged = change < options.density_tol;
        if options.damping == Damping::Auto && mixing == 0.0 && change > last_change && iteration > 2
        {
            mixing = 0.5;
        }
        last_change = change;
        if converged || iteration == options.max_iterations {
            // Report the energy of the final (self-consistent) density.
            let fock = fock_matrix(ints, &fresh);
            let e_elec = electronic_energy(ints, &fresh, &fock);
            let (c, energies) = if converged { (c, energies) } else { diagonalize(&fock) };
            result = Some(RhfResult {
                mo_coefficients: c,
                orbital_energies: energies,
                density_matrix: fresh,
                e_total: e_elec + ints.e_nuclear,
                e_electronic: e_elec,
                converged,
                iterations: iteration,
                energy_history: history.clone(),
            });
            break;
        }
        density = next;
    }
    let result = result.expect("max_iterations >= 1");
    if result.converged {
        Ok(result)
    } else {
        Err(ChemError::ScfNotConverged(Box::new(result)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::geometry::Geometry;
    use crate::chem::integrals::sto3g_integrals;

    fn solve(g: &Geometry, damping: Damping) -> RhfResult {
        let ints = sto3g_integrals(g).unwrap();
        let opts = RhfOptions {
            damping,
            ..Default::default()
        };
        run_rhf(
            &ints,
            g.n_electrons() as usize,
            None,
            &g.symmetry_permutations(),
            &opts,
        )
        .unwrap()
    }

    #[test]
    fn h2_textbook_energy() {
        // STO-3G H2 near equilibrium (0.7414 Å): E_RHF ≈ -1.1167 Hartree.
        let r = solve(&Geometry::h2(0.7414), Damping::Auto);
        assert!(r.converged);
        assert!((r.e_total - (-1.1167)).abs() < 2e-4, "{}", r.e_total);
    }

    #[test]
    fn electron_count_and_idempotency() {
        for g in [Geometry::h2(0.725), Geometry::h4_square(1.2), Geometry::h6_hexagon(0.99)] {
            let ints = sto3g_integrals(&g).unwrap();
            let r = run_rhf(
                &ints,
                g.n_electrons() as usize,
                None,
                &g.symmetry_permutations(),
                &RhfOptions::default(),
            )
            .unwrap();
            let ps = &r.density_matrix * &ints.overlap;
            assert!((ps.trace() - g.n_electrons() as f64).abs() < 1e-8);
            // (PS)P = 2P for a closed-shell density.
            let psp = &ps * &r.density_matrix;
            assert!((psp - &r.density_matrix * 2.0).amax() < 1e-6);
        }
    }

    #[test]
    fn warm_start_at_fixed_point() {
        let g = Geometry::h4_chain(0.88);
        let ints = sto3g_integrals(&g).unwrap();
        let sym = g.symmetry_permutations();
        let first = run_rhf(&ints, 4, None, &sym, &RhfOptions::default()).unwrap();
        let again = run_rhf(&ints, 4, Some(&first.density_matrix), &sym, &RhfOptions::default())
            .unwrap();
        assert!(again.iterations <= 2, "{}", again.iterations);
        assert!((again.e_total - first.e_total).abs() < 1e-10);
    }

    #[test]
    fn energy_non_increasing_without_damping() {
        for g in [Geometry::h2(0.725), Geometry::h4_square(1.2), Geometry::h4_chain(0.88)] {
            let r = solve(&g, Damping::Off);
            for w in r.energy_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-10, "{:?}", r.energy_history);
            }
        }
    }

    #[test]
    fn odd_electrons_rejected() {
        let ints = sto3g_integrals(&Geometry::h2(0.7)).unwrap();
        assert!(matches!(
            run_rhf(&ints, 1, None, &[], &RhfOptions::default()),
            Err(ChemError::OddElectronCount(1))
        ));
    }

    #[test]
    fn non_convergence_reports_last_iterate() {
        let g = Geometry::h4_square(1.5);
        let ints = sto3g_integrals(&g).unwrap();
        let opts = RhfOptions {
            max_iterations: 1,
            density_tol: 1e-14,
            ..Default::default()
        };
        match run_rhf(&ints, 4, None, &[], &opts) {
            Err(ChemError::ScfNotConverged(last)) => {
                assert_eq!(last.iterations, 1);
                assert!(!last.converged);
            }
            other => panic!("{other:?}"),
        }
    }
}
