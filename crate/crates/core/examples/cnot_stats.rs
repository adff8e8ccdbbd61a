//! CNOT counts of the subspace ansätze against full UCCSD for H₆.

use shallow_vqe::cli::{cmd_stats, stats_csv, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig {
        molecule: "h6-hexagon".into(),
        r: Some(0.99),
        ..RunConfig::default()
    };
    let rows = cmd_stats(&config)?;
    print!("{}", stats_csv(&rows));
    let cnots = |name: &str| rows.iter().find(|r| r.ansatz == name).map(|r| r.cnots as f64);
    if let (Some(full), Some(single)) = (cnots("uccsd-all"), cnots("subspace-single")) {
        println!("reduction factor {:.1}", full / single);
    }
    Ok(())
}
