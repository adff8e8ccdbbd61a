pub mod chem;
pub mod hamiltonian;
pub mod partition;
pub mod pool;
pub mod simulator;
pub mod solver;
pub mod cli;
