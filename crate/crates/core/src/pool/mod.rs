//! Excitation-operator pools: the full UCCSD pool, subspace-confined
//! candidates, single-term Pauli representations and score ranking.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{
    apply_ladders, parity_encode_operator, FermionOp, HamiltonianError, Ladder, Pauli, PauliString,
    PauliSum, Sector,
};
use crate::partition::{SectorBasis, Subspace};

#[derive(Debug, Error)]
pub enum PoolError {
    #[error("odd electron count {0}")]
    OddElectronCount(usize),
    #[error("{electrons} electrons do not fit in {orbitals} orbitals")]
    TooManyElectrons { electrons: usize, orbitals: usize },
    #[error("initial state {0} is not a member of the subspace")]
    InitialNotInSubspace(usize),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcitationKind {
    Single,
    Double,
    Higher,
}

/// A unitarized excitation `U = T − T†` with `T = a†_c1 a†_c2 … a_a2 a_a1`.
#[derive(Debug, Clone)]
pub struct ExcitationOperator {
    /// Created modes, ascending (0-based).
    pub creators: Vec<usize>,
    /// Annihilated modes, ascending (0-based).
    pub annihilators: Vec<usize>,
    /// Overall sign of `T`; chosen so that `T|ψ₀⟩ = +|ψ_i⟩` for subspace candidates.
    pub sign: f64,
    pub fermion: FermionOp,
    /// Qubit image of `U`; anti-Hermitian.
    pub qubit: PauliSum,
    pub selected_term: PauliString,
    pub score: f64,
    /// Sector index reached from the initial state, for subspace candidates.
    pub target: Option<usize>,
    gauge: f64,
}

impl ExcitationOperator {
    /// Build `sign · (T − T†)` and its reduced parity image.
    pub fn new(
        creators: Vec<usize>,
        annihilators: Vec<usize>,
        sign: f64,
        sector: Sector,
    ) -> Result<Self, PoolError> {
        let mut creators = creators;
        let mut annihilators = annihilators;
        creators.sort_unstable();
        annihilators.sort_unstable();
        let n_modes = sector.n_modes();
        let fermion = excitation_generator(&creators, &annihilators, sign, n_modes);
        let qubit = parity_encode_operator(&fermion, sector)?;
        let gauge = term_gauge(sector);
        let selected_term = single_term_of(&qubit, sign * gauge);
        Ok(ExcitationOperator {
            creators,
            annihilators,
            sign,
            fermion,
            qubit,
            selected_term,
            score: 0.0,
            target: None,
            gauge,
        })
    }

    pub fn rank(&self) -> usize {
        self.creators.len()
    }

    pub fn kind(&self) -> ExcitationKind {
        match self.rank() {
            1 => ExcitationKind::Single,
            2 => ExcitationKind::Double,
            _ => ExcitationKind::Higher,
        }
    }

    /// The ladder product of `T`, leftmost first.
    pub fn ladders(&self) -> Vec<Ladder> {
        excitation_ladders(&self.creators, &self.annihilators)
    }

    /// 1-based index label such as `a†2 a†4 a3 a1`.
    pub fn indices_label(&self) -> String {
        self.ladders()
            .iter()
            .map(|l| {
                if l.dagger {
                    format!("a†{}", l.mode + 1)
                } else {
                    format!("a{}", l.mode + 1)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Ordering key used for lexicographic operator order and score ties.
    pub fn index_key(&self) -> (usize, Vec<usize>, Vec<usize>) {
        (self.rank(), self.annihilators.clone(), self.creators.clone())
    }
}

impl fmt::Display for ExcitationOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (score {:.6}, term {})", self.indices_label(), self.score, self.selected_term.compact_label())
    }
}

/// `a†_c1 … a†_ck a_ak … a_a1` for ascending `c` and `a`.
fn excitation_ladders(creators: &[usize], annihilators: &[usize]) -> Vec<Ladder> {
    creators
        .iter()
        .map(|&c| Ladder::create(c))
        .chain(annihilators.iter().rev().map(|&a| Ladder::annihilate(a)))
        .collect()
}

fn excitation_generator(creators: &[usize], annihilators: &[usize], sign: f64, n_modes: usize) -> FermionOp {
    let t = FermionOp::term(
        n_modes,
        Complex64::new(sign, 0.0),
        excitation_ladders(creators, annihilators),
    );
    t.add(&t.adjoint().scale(Complex64::new(-1.0, 0.0)))
}

/// Order used to pick one Pauli term: terms with a positive imaginary
/// coefficient first, then letters compared from qubit 1 upward with
/// `I < X < Y < Z`.
pub fn term_order(a: &PauliString, b: &PauliString) -> Ordering {
    let pos = |p: &PauliString| p.coeff.im > 0.0;
    pos(b).cmp(&pos(a)).then_with(|| {
        let rank = |p: Pauli| match p {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        };
        for q in 0..a.n_qubits {
            let c = rank(a.get(q)).cmp(&rank(b.get(q)));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    })
}

/// Orientation under which terms are ranked: `−1` when the up-spin count is
/// even. Together with [`term_order`] this picks `X₂Y₁` for the H₂ double
/// excitation and `Y₆X₅X₄X₃X₂X₁` for `a†₄a†₈a₅a₁` on H₄.
fn term_gauge(sector: Sector) -> f64 {
    if sector.n_up % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Terms are ranked on `orientation · qubit`, where `orientation` undoes the
/// phase fixed for a target state, so the choice depends only on the
/// excitation. The returned string keeps the orientation of `qubit`.
fn single_term_of(qubit: &PauliSum, orientation: f64) -> PauliString {
    let canonical = qubit.scale(Complex64::new(orientation, 0.0));
    let first = canonical
        .terms()
        .iter()
        .min_by(|a, b| term_order(a, b))
        .expect("nonempty qubit image");
    let phase = if first.coeff.im >= 0.0 { 1.0 } else { -1.0 };
    first.with_coeff(Complex64::new(0.0, phase * orientation))
}

/// One Pauli rotation generator standing in for the whole excitation:
/// the first term of the image under [`term_order`], rescaled to `±i`.
pub fn single_term_representation(op: &ExcitationOperator) -> PauliString {
    single_term_of(&op.qubit, op.sign * op.gauge)
}

/// Full closed-shell UCCSD pool over the reference with the lowest
/// `n_electrons / 2` orbitals doubly occupied. Singles, then same-spin
/// doubles, then opposite-spin doubles.
pub fn generate_uccsd_pool(n_electrons: usize, n_orbitals: usize) -> Result<Vec<ExcitationOperator>, PoolError> {
    if n_electrons % 2 != 0 {
        return Err(PoolError::OddElectronCount(n_electrons));
    }
    let n_occ = n_electrons / 2;
    if n_occ > n_orbitals {
        return Err(PoolError::TooManyElectrons {
            electrons: n_electrons,
            orbitals: n_orbitals,
        });
    }
    let sector = Sector::closed_shell(n_orbitals, n_electrons);
    let occ: Vec<usize> = (0..n_occ).collect();
    let virt: Vec<usize> = (n_occ..n_orbitals).collect();
    let mut pool = Vec::new();
    for spin in 0..2 {
        let off = spin * n_orbitals;
        for &i in &occ {
            for &a in &virt {
                pool.push(ExcitationOperator::new(vec![a + off], vec![i + off], 1.0, sector)?);
            }
        }
    }
    for spin in 0..2 {
        let off = spin * n_orbitals;
        for (x, &i) in occ.iter().enumerate() {
            for &j in &occ[x + 1..] {
                for (y, &a) in virt.iter().enumerate() {
                    for &b in &virt[y + 1..] {
                        pool.push(ExcitationOperator::new(
                            vec![a + off, b + off],
                            vec![i + off, j + off],
                            1.0,
                            sector,
                        )?);
                    }
                }
            }
        }
    }
    for &i in &occ {
        for &j in &occ {
            for &a in &virt {
                for &b in &virt {
                    pool.push(ExcitationOperator::new(
                        vec![a, b + n_orbitals],
                        vec![i, j + n_orbitals],
                        1.0,
                        sector,
                    )?);
                }
            }
        }
    }
    Ok(pool)
}

/// `M = 2(N/2)² + (N/2)(N/2 − 1) + (N/2)⁴`.
pub fn uccsd_count_formula(n_electrons: usize) -> usize {
    let n = n_electrons / 2;
    2 * n * n + n * n.saturating_sub(1) + n.pow(4)
}

/// For every other member `ψ_i` of the subspace, the excitation with
/// `T_i|ψ₀⟩ = +|ψ_i⟩`, unitarized. Ranks above two are kept here and dropped
/// by [`filter_operators`].
pub fn subspace_candidates(
    basis: &SectorBasis,
    subspace: &Subspace,
    initial: usize,
) -> Result<Vec<ExcitationOperator>, PoolError> {
    if !subspace.contains(initial) {
        return Err(PoolError::InitialNotInSubspace(initial));
    }
    let f0 = basis.fock(initial).bits;
    let mut out = Vec::new();
    for &m in &subspace.members {
        if m == initial {
            continue;
        }
        let fi = basis.fock(m).bits;
        let creators = bit_list(fi & !f0);
        let annihilators = bit_list(f0 & !fi);
        if creators.len() != annihilators.len() || creators.is_empty() {
            continue;
        }
        let ladders = excitation_ladders(&creators, &annihilators);
        let Some((state, sign)) = apply_ladders(&ladders, f0) else {
            continue;
        };
        debug_assert_eq!(state, fi);
        let mut op = ExcitationOperator::new(creators, annihilators, sign, basis.sector)?;
        op.target = Some(m);
        out.push(op);
    }
    Ok(out)
}

fn bit_list(mut bits: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

/// Whether `U` maps every subspace member into the span of the subspace.
pub fn preserves_subspace(op: &ExcitationOperator, basis: &SectorBasis, subspace: &Subspace) -> bool {
    subspace.members.iter().all(|&m| {
        op.fermion
            .apply(basis.fock(m).bits)
            .iter()
            .all(|(s, _)| basis.index_of_fock(*s).is_some_and(|i| subspace.contains(i)))
    })
}

/// Keep operators of rank at most two that leave the subspace invariant.
pub fn filter_operators(
    candidates: Vec<ExcitationOperator>,
    basis: &SectorBasis,
    subspace: &Subspace,
) -> Vec<ExcitationOperator> {
    candidates
        .into_iter()
        .filter(|op| op.rank() <= 2 && preserves_subspace(op, basis, subspace))
        .collect()
}

/// `s = min(|ε_0i|, ε_0i² / |ε_0 − ε_i|)`, with `|ε_0i|` when the diagonals coincide.
pub fn score(e0: f64, ei: f64, e0i: f64) -> f64 {
    let gap = (e0 - ei).abs();
    if gap == 0.0 {
        e0i.abs()
    } else {
        e0i.abs().min(e0i * e0i / gap)
    }
}

/// Attach scores from the sector matrix and sort by descending score; ties
/// fall back to [`sort_lexicographic`] order.
pub fn score_operators(
    mut candidates: Vec<ExcitationOperator>,
    matrix: &DMatrix<f64>,
    initial: usize,
) -> Vec<ExcitationOperator> {
    for op in &mut candidates {
        op.score = match op.target {
            Some(t) => score(matrix[(initial, initial)], matrix[(t, t)], matrix[(initial, t)]),
            None => 0.0,
        };
    }
    candidates.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.index_key().cmp(&b.index_key()))
    });
    candidates
}

/// Sort by rank, then annihilated modes, then created modes.
pub fn sort_lexicographic(ops: &mut [ExcitationOperator]) {
    ops.sort_by_key(|op| op.index_key());
}

/// Candidates, filtering and ranking for one subspace in one call.
pub fn ranked_operators(
    basis: &SectorBasis,
    subspace: &Subspace,
    initial: usize,
    matrix: &DMatrix<f64>,
) -> Result<(usize, Vec<ExcitationOperator>), PoolError> {
    let candidates = subspace_candidates(basis, subspace, initial)?;
    let n = candidates.len();
    let selected = filter_operators(candidates, basis, subspace);
    Ok((n, score_operators(selected, matrix, initial)))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PoolEntry {
    pub rank: usize,
    pub indices: String,
    pub kind: ExcitationKind,
    pub score: f64,
    pub term: String,
    pub weight: usize,
    pub cnots: usize,
    pub n_subterms: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PoolReport {
    pub candidate_count: usize,
    pub selected_count: usize,
    pub term_order: String,
    pub operators: Vec<PoolEntry>,
}

impl PoolReport {
    pub fn new(candidate_count: usize, ops: &[ExcitationOperator]) -> Self {
        PoolReport {
            candidate_count,
            selected_count: ops.len(),
            term_order: "oriented by excitation sign and n_up parity; positive imaginary coefficient first, then letters from qubit 1 up, I<X<Y<Z".into(),
            operators: ops
                .iter()
                .enumerate()
                .map(|(i, op)| {
                    let w = op.selected_term.weight();
                    PoolEntry {
                        rank: i + 1,
                        indices: op.indices_label(),
                        kind: op.kind(),
                        score: op.score,
                        term: op.selected_term.compact_label(),
                        weight: w,
                        cnots: 2 * w.saturating_sub(1),
                        n_subterms: op.qubit.len(),
                    }
                })
                .collect(),
        }
    }

    /// `rank,indices,score,term,weight` table.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("rank,indices,score,term,weight\n");
        for e in &self.operators {
            s.push_str(&format!("{},{},{:.10},{},{}\n", e.rank, e.indices, e.score, e.term, e.weight));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_sector;

    #[test]
    fn pool_sizes_small() {
        assert_eq!(generate_uccsd_pool(2, 2).unwrap().len(), 3);
        assert_eq!(generate_uccsd_pool(4, 4).unwrap().len(), 26);
        assert!(generate_uccsd_pool(3, 4).is_err());
    }

    #[test]
    fn formula_values() {
        assert_eq!(uccsd_count_formula(2), 3);
        assert_eq!(uccsd_count_formula(4), 26);
        assert_eq!(uccsd_count_formula(6), 105);
    }

    #[test]
    fn h4_double_single_term() {
        let op = ExcitationOperator::new(vec![7, 3], vec![0, 4], 1.0, Sector::new(4, 2, 2)).unwrap();
        assert_eq!(op.qubit.terms().len(), 8);
        assert_eq!(op.selected_term.compact_label(), "Y6X5X4X3X2X1");
        let flipped = ExcitationOperator::new(vec![7, 3], vec![0, 4], -1.0, Sector::new(4, 2, 2)).unwrap();
        assert_eq!(flipped.selected_term.compact_label(), "Y6X5X4X3X2X1");
        assert_eq!(flipped.selected_term.coeff, -op.selected_term.coeff);
    }

    #[test]
    fn h2_pool_images() {
        let pool = generate_uccsd_pool(2, 2).unwrap();
        let labels: Vec<String> = pool.iter().map(|p| p.selected_term.compact_label()).collect();
        assert_eq!(labels, ["Y1", "Y2", "X2Y1"]);
        for op in &pool {
            assert!(op.qubit.anti_hermiticity_error() < 1e-12);
            assert_eq!(op.selected_term.coeff.re, 0.0);
            assert_eq!(op.selected_term.coeff.im.abs(), 1.0);
        }
        assert_eq!(pool[0].qubit.terms()[0].coeff, Complex64::new(0.0, 1.0));
        assert_eq!(pool[2].indices_label(), "a†2 a†4 a3 a1");
    }

    #[test]
    fn score_examples() {
        assert!((score(-1.84, -0.23, 0.18) - 0.18f64.powi(2) / 1.61).abs() < 1e-12);
        assert_eq!(score(-1.0, -1.0, 0.1), 0.1);
        assert_eq!(score(-1.0, -1.0, -0.1), 0.1);
    }

    #[test]
    fn h2_subspace_candidate_is_double() {
        let basis = enumerate_sector(2, 1, 1);
        let ground = Subspace { members: vec![1, 2] };
        let c = subspace_candidates(&basis, &ground, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind(), ExcitationKind::Double);
        assert_eq!(c[0].target, Some(2));
        assert_eq!(c[0].selected_term.compact_label(), "X2Y1");
        let single = Subspace { members: vec![0] };
        assert_eq!(single_term_representation(&c[0]), c[0].selected_term);
        assert!(subspace_candidates(&basis, &single, 0).unwrap().is_empty());
    }

    #[test]
    fn term_order_prefers_positive() {
        let i = Complex64::new(0.0, 1.0);
        let a = PauliString::from_label("XY", i).unwrap();
        let b = PauliString::from_label("YX", -i).unwrap();
        assert_eq!(term_order(&a, &b), Ordering::Less);
        let c = PauliString::from_label("YX", i).unwrap();
        // qubit 1 decides: X < Y
        assert_eq!(term_order(&c, &a), Ordering::Less);
    }
}
