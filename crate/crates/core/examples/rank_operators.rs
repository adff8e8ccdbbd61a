//! Rank the excitation operators that act inside the ground subspace and
//! show their single Pauli-string representatives.

use shallow_vqe::cli::{cmd_rank, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let molecule = std::env::args().nth(1).unwrap_or_else(|| "h4-square".into());
    let config = RunConfig {
        molecule,
        ..RunConfig::default()
    };
    let report = cmd_rank(&config)?;
    println!("{} of {} candidates selected", report.operators.len(), report.candidate_count);
    print!("{}", report.to_csv());
    Ok(())
}
