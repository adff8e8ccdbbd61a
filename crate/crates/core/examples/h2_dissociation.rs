//! H₂ dissociation curve from single-term VQE in the ground and excited
//! subspaces, printed next to exact diagonalization.

use shallow_vqe::cli::{cmd_vqe, RunConfig, SubspaceChoice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scan = |subspace| RunConfig {
        molecule: "h2".into(),
        r_range: Some("0.3:2.0:0.1".into()),
        subspace,
        ..RunConfig::default()
    };
    let ground = cmd_vqe(&scan(SubspaceChoice::Auto))?;
    let excited = cmd_vqe(&scan(SubspaceChoice::Excited))?;
    println!("{:>5} {:>13} {:>13} {:>13} {:>13}", "r", "E0 vqe", "E0 ed", "E1 vqe", "E1 ed");
    for (g, e) in ground.iter().zip(&excited) {
        println!(
            "{:>5.2} {:>13.8} {:>13.8} {:>13.8} {:>13.8}",
            g.r, g.energy, g.ed_energy, e.energy, e.ed_energy
        );
    }
    Ok(())
}
