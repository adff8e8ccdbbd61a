//! Partition the half-filled sector of each hydrogen preset into
//! disconnected subspaces.

use shallow_vqe::cli::{cmd_partition, partition_table, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (molecule, r) in [("h2", 0.725), ("h4-square", 1.2), ("h4-chain", 0.88), ("h6-hexagon", 0.99)] {
        let config = RunConfig {
            molecule: molecule.into(),
            r: Some(r),
            ..RunConfig::default()
        };
        for out in cmd_partition(&config)? {
            println!("{}", partition_table(&out));
        }
    }
    Ok(())
}
