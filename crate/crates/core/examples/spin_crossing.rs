//! Scan square H₄ and report the two lowest levels of the subspace that
//! holds the ground state, with their total spin.

use shallow_vqe::chem::{native_mo_integrals, Geometry, RhfOptions, HARTREE_EV};
use shallow_vqe::hamiltonian::{matrix_in_sector, qubit_hamiltonian};
use shallow_vqe::partition::{cluster_graph, enumerate_sector, PartitionConfig};
use shallow_vqe::solver::{exact_diagonalize, spin_quantum_number, spin_squared_matrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs: Vec<f64> = (0..=24).map(|i| 0.6 + 0.025 * i as f64).collect();
    let geoms: Vec<(f64, Geometry)> = rs.iter().map(|&r| (r, Geometry::h4_square(r))).collect();
    let mols: Vec<_> = geoms.iter().map(|(_, g)| native_mo_integrals(g, None, &RhfOptions::default())).collect::<Result<_, _>>()?;
    let basis = enumerate_sector(4, 2, 2);
    let s2_full = spin_squared_matrix(&basis)?;
    println!("{:>6} {:>12} {:>4} {:>12} {:>4} {:>10}", "r", "E0", "S0", "E1", "S1", "gap (meV)");
    for (r, mol) in rs.iter().zip(&mols) {
        let h = qubit_hamiltonian(&mol.mo, 4)?;
        let m = matrix_in_sector(&h, &basis)?;
        let parts = cluster_graph(&m, &PartitionConfig::default());
        let mut best = None;
        for s in &parts {
            let ed = exact_diagonalize(&s.block(&m))?.with_spin(&s.block(&s2_full));
            if best.as_ref().map_or(true, |(e, _): &(f64, _)| ed.ground_energy() < *e) {
                best = Some((ed.ground_energy(), ed));
            }
        }
        let (_, ed) = best.expect("at least one subspace");
        let spin = |i: usize| spin_quantum_number(ed.spin_squared[i], 1e-6).unwrap_or(f64::NAN);
        println!(
            "{:>6.3} {:>12.6} {:>4} {:>12.6} {:>4} {:>10.2}",
            r,
            ed.eigenvalues[0],
            spin(0),
            ed.eigenvalues[1],
            spin(1),
            (ed.eigenvalues[1] - ed.eigenvalues[0]) * HARTREE_EV * 1000.0
        );
    }
    Ok(())
}
