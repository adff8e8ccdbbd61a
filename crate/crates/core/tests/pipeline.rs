use std::process::Command;

use shallow_vqe::chem::{native_mo_integrals, read_fcidump, write_fcidump, Geometry, RhfOptions};
use shallow_vqe::cli::{
    cmd_partition, cmd_vqe, results_csv, Prepared, RunConfig, SubspaceChoice,
};
use shallow_vqe::hamiltonian::{matrix_in_sector, qubit_hamiltonian};
use shallow_vqe::partition::{enumerate_sector, PartitionConfig};

#[test]
fn fcidump_round_trip_keeps_the_sector_matrix() {
    let mol = native_mo_integrals(&Geometry::h4_chain(0.88), None, &RhfOptions::default()).unwrap();
    let text = write_fcidump(&mol.mo, mol.n_electrons, 0.0);
    let (back, n_e) = read_fcidump(&text).unwrap();
    assert_eq!(n_e, 4);
    assert!((back.e_nuclear - mol.mo.e_nuclear).abs() < 1e-12);
    assert!(back.two_body.max_abs_diff(&mol.mo.two_body) < 1e-12);

    let basis = enumerate_sector(4, 2, 2);
    let a = matrix_in_sector(&qubit_hamiltonian(&mol.mo, 4).unwrap(), &basis).unwrap();
    let b = matrix_in_sector(&qubit_hamiltonian(&back, 4).unwrap(), &basis).unwrap();
    assert!((a - b).amax() < 1e-10);
}

#[test]
fn fcidump_and_native_paths_partition_alike() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h2.fcidump");
    let mol = native_mo_integrals(&Geometry::h2(0.725), None, &RhfOptions::default()).unwrap();
    std::fs::write(&path, write_fcidump(&mol.mo, 2, 1e-14)).unwrap();

    let native = cmd_partition(&RunConfig::default()).unwrap().remove(0);
    let file = cmd_partition(&RunConfig {
        molecule: format!("fcidump:{}", path.display()),
        ..RunConfig::default()
    })
    .unwrap()
    .remove(0);
    assert_eq!(native.report.dimensions(), file.report.dimensions());
    for (a, b) in native.block_ground_energies.iter().zip(&file.block_ground_energies) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn statevector_scan_csv_is_reproducible() {
    let c = RunConfig {
        r_range: Some("0.5:0.9:0.2".into()),
        ..RunConfig::default()
    };
    let first = results_csv(&cmd_vqe(&c).unwrap());
    let second = results_csv(&cmd_vqe(&c).unwrap());
    assert_eq!(first, second);
    assert_eq!(first.lines().count(), 2 + 3);
    assert!(first.starts_with("# schema:"));
}

#[test]
fn sampled_runs_repeat_under_a_seed() {
    let c = RunConfig {
        backend: shallow_vqe::cli::BackendKind::Shots,
        trials: 2,
        shots: 256,
        spsa_iterations: 20,
        seed: 4,
        ..RunConfig::default()
    };
    let a = cmd_vqe(&c).unwrap();
    let b = cmd_vqe(&c).unwrap();
    assert_eq!(results_csv(&a), results_csv(&b));
    // two trials and a mean row
    assert_eq!(a.len(), 3);
    assert!(a[2].trial.is_none() && a[2].std.is_some());
    let other = cmd_vqe(&RunConfig { seed: 5, ..c }).unwrap();
    assert_ne!(results_csv(&a), results_csv(&other));
}

#[test]
fn incremental_rows_do_not_rise_on_the_statevector() {
    let c = RunConfig {
        molecule: "h4-chain".into(),
        r: Some(0.88),
        incremental: true,
        k: Some(6),
        ..RunConfig::default()
    };
    let rows = cmd_vqe(&c).unwrap();
    assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
    for w in rows.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-9, "k={} rose", w[1].k);
    }
    for r in &rows {
        assert!(r.error >= -1e-9);
        let ov = r.overlap.unwrap();
        assert!((0.0..=1.0 + 1e-9).contains(&ov));
    }
}

#[test]
fn full_uccsd_from_the_closed_shell_reference_misses_the_square_ground_state() {
    use shallow_vqe::cli::closed_shell_bits;
    use shallow_vqe::pool::generate_uccsd_pool;
    use shallow_vqe::simulator::{AnsatzCircuit, TermMode};
    use shallow_vqe::solver::{run_vqe, Backend, OptimizerConfig, VqeProblem};

    let mol = native_mo_integrals(&Geometry::h4_square(1.2), None, &RhfOptions::default()).unwrap();
    let p = Prepared::from_integrals("h4-square".into(), 1.2, &mol.mo, 4, &PartitionConfig::default()).unwrap();
    let ground = p.block_ground.iter().copied().fold(f64::INFINITY, f64::min);
    let reference = p.basis.qubit(p.basis.index_of_fock(closed_shell_bits(4, 4)).unwrap()).bits;
    assert_eq!(reference, 0b001001);
    let pool = generate_uccsd_pool(4, 4).unwrap();
    let circuit = AnsatzCircuit::from_excitations(6, reference, &pool, TermMode::All).unwrap();
    let problem = VqeProblem::new(p.hamiltonian.clone()).unwrap();
    let r = run_vqe(&problem, &circuit, &OptimizerConfig::simplex(), &Backend::Statevector, None, 0).unwrap();
    assert!((r.energy - ground) * shallow_vqe::chem::HARTREE_EV > 0.043);
    let sub = p.select(SubspaceChoice::Auto).unwrap();
    assert!(!p.subspaces[sub].contains(p.basis.index_of(reference).unwrap()));
}

#[test]
fn binary_writes_partition_json_and_appends_results() {
    let bin = env!("CARGO_BIN_EXE_shallow-vqe");
    let out = Command::new(bin)
        .args(["partition", "--molecule", "h4-square", "--r", "1.2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json[0]["report"]["sector_dimension"], 36);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h2.csv");
    for r in ["0.7", "0.8"] {
        let status = Command::new(bin)
            .args(["vqe", "--molecule", "h2", "--r", r, "--out"])
            .arg(&csv)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("molecule,")).count(), 1);
    assert_eq!(text.lines().count(), 4);

    let bad = Command::new(bin).args(["vqe", "--trials", "0"]).output().unwrap();
    assert!(!bad.status.success());
}
