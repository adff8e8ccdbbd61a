//! Conserved-quantum-number sectors and their split into Hamiltonian-connected
//! subspaces.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::{parity_encode_state, FockState, QubitState, Sector};

/// Ordered basis of one (n_up, n_down) sector, sorted by qubit label.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub sector: Sector,
    fock: Vec<FockState>,
    qubits: Vec<QubitState>,
    index: HashMap<u64, usize>,
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.fock.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fock.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.sector.n_qubits()
    }

    pub fn fock_states(&self) -> &[FockState] {
        &self.fock
    }

    pub fn qubit_states(&self) -> &[QubitState] {
        &self.qubits
    }

    pub fn fock(&self, i: usize) -> FockState {
        self.fock[i]
    }

    pub fn qubit(&self, i: usize) -> QubitState {
        self.qubits[i]
    }

    /// Position of a qubit label in the basis.
    pub fn index_of(&self, qubit_bits: u64) -> Option<usize> {
        self.index.get(&qubit_bits).copied()
    }

    pub fn index_of_fock(&self, fock_bits: u64) -> Option<usize> {
        self.index_of(parity_encode_state(FockState::new(fock_bits, self.sector.n_orbitals)).bits)
    }
}

fn combinations(n: usize, k: usize) -> Vec<u64> {
    (0u64..(1u64 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

/// All determinants with `n_up` spin-up and `n_down` spin-down electrons in
/// `n_orbitals` spatial orbitals, with their qubit labels.
pub fn enumerate_sector(n_orbitals: usize, n_up: usize, n_down: usize) -> SectorBasis {
    assert!(n_up <= n_orbitals && n_down <= n_orbitals, "occupation exceeds orbitals");
    assert!(n_orbitals >= 1 && 2 * n_orbitals <= 64, "unsupported orbital count");
    let sector = Sector::new(n_orbitals, n_up, n_down);
    let mut pairs: Vec<(FockState, QubitState)> = Vec::new();
    for down in combinations(n_orbitals, n_down) {
        for up in combinations(n_orbitals, n_up) {
            let f = FockState::new(up | (down << n_orbitals), n_orbitals);
            pairs.push((f, parity_encode_state(f)));
        }
    }
    pairs.sort_by_key(|(_, q)| q.bits);
    let index = pairs.iter().enumerate().map(|(i, (_, q))| (q.bits, i)).collect();
    let (fock, qubits) = pairs.into_iter().unzip();
    SectorBasis {
        sector,
        fock,
        qubits,
        index,
    }
}

/// A connected block of the sector graph, as sorted sector indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub members: Vec<usize>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// Position of a sector index within this subspace.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.members.binary_search(&index).ok()
    }

    /// The sub-block of a sector matrix on these members.
    pub fn block(&self, matrix: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| matrix[(self.members[i], self.members[j])])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionConfig {
    /// Edge threshold on |H_ij|, in Hartree.
    pub cutoff: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig { cutoff: 1e-6 }
    }
}

/// Split the sector into clusters of nodes linked by |H_ij| > cutoff.
///
/// Follows the pairwise assign-or-merge sweep: every linked pair either
/// opens a new cluster, joins one node to the other's cluster, or merges two
/// clusters. Nodes without links end up as singletons. Output is sorted by
/// (dimension, lowest member).
pub fn cluster_graph(matrix: &DMatrix<f64>, config: &PartitionConfig) -> Vec<Subspace> {
    assert!(config.cutoff > 0.0, "cutoff must be positive");
    let n = matrix.nrows();
    let mut node_cluster: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || matrix[(i, j)].abs() <= config.cutoff {
                continue;
            }
            match (node_cluster[i], node_cluster[j]) {
                (None, None) => {
                    clusters.push(vec![i, j]);
                    node_cluster[i] = Some(clusters.len() - 1);
                    node_cluster[j] = Some(clusters.len() - 1);
                }
                (None, Some(c)) => {
                    node_cluster[i] = Some(c);
                    clusters[c].push(i);
                }
                (Some(c), None) => {
                    node_cluster[j] = Some(c);
                    clusters[c].push(j);
                }
                (Some(a), Some(b)) if a != b => {
                    // merge b into a
                    let moved = std::mem::take(&mut clusters[b]);
                    for &k in &moved {
                        node_cluster[k] = Some(a);
                    }
                    clusters[a].extend(moved);
                }
                _ => {}
            }
        }
    }
    let mut out: Vec<Subspace> = clusters
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|mut members| {
            members.sort_unstable();
            Subspace { members }
        })
        .collect();
    for (i, c) in node_cluster.iter().enumerate() {
        if c.is_none() {
            out.push(Subspace { members: vec![i] });
        }
    }
    out.sort_by_key(|s| (s.dim(), s.members[0]));
    out
}

/// Member with the lowest diagonal element; near-ties go to the lowest index.
pub fn choose_initial_state(subspace: &Subspace, matrix: &DMatrix<f64>) -> usize {
    assert!(!subspace.members.is_empty(), "empty subspace");
    let mut best = subspace.members[0];
    for &i in &subspace.members[1..] {
        if matrix[(i, i)] < matrix[(best, best)] - 1e-10 {
            best = i;
        }
    }
    best
}

/// Index of the subspace containing a sector index.
pub fn subspace_of(subspaces: &[Subspace], index: usize) -> Option<usize> {
    subspaces.iter().position(|s| s.contains(index))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SubspaceReport {
    pub id: usize,
    pub dimension: usize,
    pub initial_state: String,
    pub initial_diagonal: f64,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartitionReport {
    pub sector_dimension: usize,
    pub n_qubits: usize,
    pub cutoff: f64,
    pub subspaces: Vec<SubspaceReport>,
}

impl PartitionReport {
    pub fn new(
        basis: &SectorBasis,
        matrix: &DMatrix<f64>,
        subspaces: &[Subspace],
        config: &PartitionConfig,
    ) -> Self {
        PartitionReport {
            sector_dimension: basis.len(),
            n_qubits: basis.n_qubits(),
            cutoff: config.cutoff,
            subspaces: subspaces
                .iter()
                .enumerate()
                .map(|(id, s)| {
                    let init = choose_initial_state(s, matrix);
                    SubspaceReport {
                        id,
                        dimension: s.dim(),
                        initial_state: basis.qubit(init).label(),
                        initial_diagonal: matrix[(init, init)],
                        members: s.members.iter().map(|&m| basis.qubit(m).label()).collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.dimension).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_sizes() {
        assert_eq!(enumerate_sector(2, 1, 1).len(), 4);
        assert_eq!(enumerate_sector(4, 2, 2).len(), 36);
        assert_eq!(enumerate_sector(6, 3, 3).len(), 400);
    }

    #[test]
    fn h2_basis_order_is_qubit_order() {
        let b = enumerate_sector(2, 1, 1);
        let labels: Vec<String> = b.qubit_states().iter().map(|q| q.label()).collect();
        assert_eq!(labels, ["00", "01", "10", "11"]);
        assert_eq!(b.fock(0).to_string(), "|0110⟩");
        assert_eq!(b.fock(1).to_string(), "|0101⟩");
    }

    #[test]
    fn diagonal_matrix_gives_singletons() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let parts = cluster_graph(&m, &PartitionConfig::default());
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|s| s.dim() == 1));
    }

    #[test]
    fn rounded_h2_matrix_splits_in_two() {
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                -1.06, 0.0, 0.0, 0.18, 0.0, -1.84, 0.18, 0.0, 0.0, 0.18, -0.23, 0.0, 0.18, 0.0,
                0.0, -1.06,
            ],
        );
        let parts = cluster_graph(&m, &PartitionConfig::default());
        assert_eq!(parts, vec![Subspace { members: vec![0, 3] }, Subspace { members: vec![1, 2] }]);
        // ground block: |01> has the lower diagonal
        assert_eq!(choose_initial_state(&parts[1], &m), 1);
        assert_eq!(choose_initial_state(&Subspace { members: vec![2] }, &m), 2);
    }
}
