use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use shallow_vqe::hamiltonian::{Pauli, PauliString};
use shallow_vqe::partition::{cluster_graph, PartitionConfig};
use shallow_vqe::pool::score;
use shallow_vqe::simulator::StateVector;

fn sparse_symmetric(max_dim: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -1.0f64..1.0), 0..2 * n).prop_map(move |entries| {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for (i, j, v) in entries {
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
            m
        })
    })
}

fn partition_sets(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = cluster_graph(m, &PartitionConfig::default())
        .into_iter()
        .map(|s| s.members)
        .collect();
    sets.sort();
    sets
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0u8..4, n).prop_map(move |letters| {
        let ps: Vec<(usize, Pauli)> = letters
            .iter()
            .enumerate()
            .map(|(q, &l)| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]))
            .collect();
        PauliString::from_letters(n, &ps, Complex64::new(1.0, 0.0))
    })
}

proptest! {
    #[test]
    fn clusters_cover_every_node_once(m in sparse_symmetric(40)) {
        let mut all: Vec<usize> = partition_sets(&m).concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m.nrows()).collect::<Vec<_>>());
    }

    #[test]
    fn clustering_commutes_with_relabeling(
        m in sparse_symmetric(30),
        seed in any::<u64>(),
    ) {
        let n = m.nrows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            perm.swap(i, (state % (i as u64 + 1)) as usize);
        }
        // permuted[(perm[i], perm[j])] = m[(i, j)]
        let mut permuted = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                permuted[(perm[i], perm[j])] = m[(i, j)];
            }
        }
        let mut mapped: Vec<Vec<usize>> = partition_sets(&m)
            .into_iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&i| perm[i]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        mapped.sort();
        prop_assert_eq!(mapped, partition_sets(&permuted));
    }

    #[test]
    fn score_scales_with_the_hamiltonian(
        e0 in -3.0f64..3.0,
        ei in -3.0f64..3.0,
        e0i in -1.0f64..1.0,
        lambda in 0.01f64..100.0,
    ) {
        let s = score(e0, ei, e0i);
        let scaled = score(lambda * e0, lambda * ei, lambda * e0i);
        prop_assert!(s >= 0.0 && s <= e0i.abs() + 1e-15);
        prop_assert!((scaled - lambda * s).abs() <= 1e-9 * (1.0 + scaled.abs()));
    }

    #[test]
    fn pauli_rotations_preserve_norm(
        p in arb_pauli(5),
        theta in -6.3f64..6.3,
        amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32),
    ) {
        let amps: Vec<Complex64> = amps.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let norm0: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm0 > 1e-3);
        let mut psi = StateVector::from_amplitudes(5, amps).unwrap();
        psi.apply_pauli_exponential(&p.with_coeff(Complex64::new(0.0, 1.0)), theta).unwrap();
        prop_assert!((psi.norm() - norm0).abs() < 1e-10);
    }
}
