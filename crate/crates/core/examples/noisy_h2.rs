//! H₂ under depolarizing noise and finite shots: single-term subspace
//! ansatz against the three-operator UCCSD ansatz, ten trials each.

use shallow_vqe::chem::{native_mo_integrals, Geometry, RhfOptions, HARTREE_EV};
use shallow_vqe::cli::closed_shell_bits;
use shallow_vqe::hamiltonian::qubit_hamiltonian;
use shallow_vqe::partition::enumerate_sector;
use shallow_vqe::pool::generate_uccsd_pool;
use shallow_vqe::simulator::{AnsatzCircuit, NoiseModel, ShotConfig, TermMode};
use shallow_vqe::solver::{mean_std, run_vqe, Backend, OptimizerConfig, VqeProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mol = native_mo_integrals(&Geometry::h2(0.725), None, &RhfOptions::default())?;
    let h = qubit_hamiltonian(&mol.mo, 2)?;
    let basis = enumerate_sector(2, 1, 1);
    let reference = basis.qubit(basis.index_of_fock(closed_shell_bits(2, 2)).expect("in sector")).bits;
    let problem = VqeProblem::new(h)?;
    let exact = problem.register_ground_energy()?;

    let pool = generate_uccsd_pool(2, 2)?;
    let ansatze = [
        ("single-term", AnsatzCircuit::from_excitations(2, reference, &pool[2..], TermMode::Single)?),
        ("full uccsd", AnsatzCircuit::from_excitations(2, reference, &pool, TermMode::All)?),
    ];
    let backend = Backend::Sampled {
        shots: ShotConfig { shots: 1024, seed: 7 },
        noise: NoiseModel::default(),
    };
    for (name, circuit) in &ansatze {
        let errors: Vec<f64> = (0..10)
            .map(|trial| {
                run_vqe(&problem, circuit, &OptimizerConfig::spsa(11), &backend, None, trial)
                    .map(|r| (r.energy - exact).abs() * HARTREE_EV * 1e3)
            })
            .collect::<Result<_, _>>()?;
        let (mean, std) = mean_std(&errors);
        let cnots = circuit.stats().cnot_count;
        println!("{name:>12}: {cnots:>2} CNOTs, mean |error| {mean:7.1} meV (std {std:.1})");
    }
    Ok(())
}
