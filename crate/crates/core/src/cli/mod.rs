//! Pipeline front end: molecule presets in, partition/pool/result tables out.
//!
//! The binary only parses flags into a [`RunConfig`]; everything else lives
//! here so it can be driven from tests and examples as well.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chem::{
    native_mo_integrals, native_scan, read_fcidump, ChemError, Geometry, IntegralSet, RhfOptions,
};
use crate::hamiltonian::{matrix_in_sector, qubit_hamiltonian, HamiltonianError, PauliSum};
use crate::partition::{
    choose_initial_state, cluster_graph, enumerate_sector, PartitionConfig, PartitionReport,
    SectorBasis, Subspace,
};
use crate::pool::{
    generate_uccsd_pool, ranked_operators, sort_lexicographic, ExcitationOperator, PoolError,
    PoolReport,
};
use crate::simulator::{AnsatzCircuit, NoiseModel, ShotConfig, SimError, TermMode};
use crate::solver::{
    add_operators_incrementally, embed_sector_vector, exact_diagonalize, mean_std, overlap,
    run_vqe, spin_squared_expectation, Backend, EdResult, OptimizerConfig, ResultRow, SolverError,
    VqeProblem, VqeResult, RESULTS_HEADER, RESULTS_SCHEMA,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Chem(#[from] ChemError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Simulator(#[from] SimError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("subspace {0} has no selectable operators")]
    EmptyPool(usize),
}

/// Where the integrals come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Molecule {
    H2,
    H4Square,
    H4Chain,
    H6Hexagon,
    Xyz(PathBuf),
    Fcidump(PathBuf),
}

impl Molecule {
    pub fn name(&self) -> String {
        match self {
            Molecule::H2 => "h2".into(),
            Molecule::H4Square => "h4-square".into(),
            Molecule::H4Chain => "h4-chain".into(),
            Molecule::H6Hexagon => "h6-hexagon".into(),
            Molecule::Xyz(p) | Molecule::Fcidump(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".into()),
        }
    }

    /// Parametric geometry of a preset.
    pub fn geometry(&self, r: f64) -> Option<Geometry> {
        match self {
            Molecule::H2 => Some(Geometry::h2(r)),
            Molecule::H4Square => Some(Geometry::h4_square(r)),
            Molecule::H4Chain => Some(Geometry::h4_chain(r)),
            Molecule::H6Hexagon => Some(Geometry::h6_hexagon(r)),
            _ => None,
        }
    }

    /// Bond length used when none is given.
    pub fn default_r(&self) -> f64 {
        match self {
            Molecule::H2 => 0.725,
            Molecule::H4Square => 1.2,
            Molecule::H4Chain => 0.88,
            Molecule::H6Hexagon => 0.99,
            _ => 0.0,
        }
    }
}

impl FromStr for Molecule {
    type Err = CliError;

    /// `h2`, `h4-square`, `h4-chain`, `h6-hexagon`, `xyz:PATH` or `fcidump:PATH`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "h2" => Molecule::H2,
            "h4-square" => Molecule::H4Square,
            "h4-chain" => Molecule::H4Chain,
            "h6-hexagon" | "h6" => Molecule::H6Hexagon,
            _ => match s.split_once(':') {
                Some(("xyz", p)) => Molecule::Xyz(p.into()),
                Some(("fcidump", p)) => Molecule::Fcidump(p.into()),
                _ => return Err(CliError::Config(format!("unknown molecule {s:?}"))),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OperatorOrder {
    #[default]
    Score,
    Lex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Sv,
    Shots,
}

/// Which subspace to work in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceChoice {
    /// The subspace whose lowest eigenvalue is the sector ground energy.
    #[default]
    Auto,
    /// The subspace with the second-lowest block ground energy.
    Excited,
    /// A subspace by its position in the partition.
    Index(usize),
}

/// Every knob of a run. Deserializes from a JSON config file; missing keys
/// take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub molecule: String,
    pub r: Option<f64>,
    /// `start:stop:step` in Å, stop inclusive.
    pub r_range: Option<String>,
    pub subspace: SubspaceChoice,
    pub order: OperatorOrder,
    pub terms: TermMode,
    pub backend: BackendKind,
    pub shots: usize,
    pub noise: (f64, f64),
    pub trials: usize,
    pub seed: u64,
    /// Number of leading operators to use; all when absent.
    pub k: Option<usize>,
    pub incremental: bool,
    /// Start each prefix from zeros instead of the previous optimum.
    pub cold_start: bool,
    pub spsa_iterations: usize,
    pub cutoff: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let noise = NoiseModel::default();
        RunConfig {
            molecule: "h2".into(),
            r: None,
            r_range: None,
            subspace: SubspaceChoice::Auto,
            order: OperatorOrder::Score,
            terms: TermMode::Single,
            backend: BackendKind::Sv,
            shots: ShotConfig::default().shots,
            noise: (noise.p1, noise.p2),
            trials: 10,
            seed: 0,
            k: None,
            incremental: false,
            cold_start: false,
            spsa_iterations: 200,
            cutoff: PartitionConfig::default().cutoff,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn molecule(&self) -> Result<Molecule, CliError> {
        self.molecule.parse()
    }

    /// Bond lengths of the run, in ascending order for ranges.
    pub fn r_values(&self) -> Result<Vec<f64>, CliError> {
        let mol = self.molecule()?;
        if let Some(range) = &self.r_range {
            let parts: Vec<f64> = range
                .split(':')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Config(format!("bad r-range {range:?}")))?;
            let [a, b, step] = parts[..] else {
                return Err(CliError::Config(format!("r-range {range:?} needs start:stop:step")));
            };
            if !(step > 0.0) || !(a > 0.0) || b < a {
                return Err(CliError::Config(format!("invalid r-range {range:?}")));
            }
            if mol.geometry(a).is_none() {
                return Err(CliError::Config("r-range needs a parametric preset".into()));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            return Ok((0..=n).map(|i| a + step * i as f64).collect());
        }
        let r = self.r.unwrap_or_else(|| mol.default_r());
        if mol.geometry(1.0).is_some() && !(r > 0.0) {
            return Err(CliError::Config(format!("r must be positive, got {r}")));
        }
        Ok(vec![r])
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.molecule()?;
        self.r_values()?;
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.shots == 0 {
            return Err(CliError::Config("shots must be at least 1".into()));
        }
        NoiseModel::new(self.noise.0, self.noise.1)?;
        Ok(())
    }

    pub fn backend_for_run(&self) -> Result<Backend, CliError> {
        Ok(match self.backend {
            BackendKind::Sv => Backend::Statevector,
            BackendKind::Shots => Backend::Sampled {
                shots: ShotConfig {
                    shots: self.shots,
                    seed: self.seed,
                },
                noise: NoiseModel::new(self.noise.0, self.noise.1)?,
            },
        })
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        match self.backend {
            BackendKind::Sv => OptimizerConfig::simplex(),
            BackendKind::Shots => OptimizerConfig {
                max_iterations: self.spsa_iterations,
                ..OptimizerConfig::spsa(self.seed)
            },
        }
    }
}

/// Integrals turned into everything the commands need at one geometry.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub molecule: String,
    pub r: f64,
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub hamiltonian: PauliSum,
    pub basis: SectorBasis,
    pub matrix: DMatrix<f64>,
    pub subspaces: Vec<Subspace>,
    /// Lowest eigenvalue of each subspace block.
    pub block_ground: Vec<f64>,
}

impl Prepared {
    pub fn from_integrals(
        molecule: String,
        r: f64,
        ints: &IntegralSet,
        n_electrons: usize,
        config: &PartitionConfig,
    ) -> Result<Self, CliError> {
        if n_electrons % 2 != 0 {
            return Err(ChemError::OddElectronCount(n_electrons).into());
        }
        let n_orbitals = ints.n_orbitals;
        let hamiltonian = qubit_hamiltonian(ints, n_electrons)?;
        let basis = enumerate_sector(n_orbitals, n_electrons / 2, n_electrons / 2);
        let matrix = matrix_in_sector(&hamiltonian, &basis)?;
        let subspaces = cluster_graph(&matrix, config);
        let block_ground = subspaces
            .iter()
            .map(|s| exact_diagonalize(&s.block(&matrix)).map(|ed| ed.ground_energy()))
            .collect::<Result<_, _>>()?;
        Ok(Prepared {
            molecule,
            r,
            n_orbitals,
            n_electrons,
            hamiltonian,
            basis,
            matrix,
            subspaces,
            block_ground,
        })
    }

    /// Subspace ids sorted by block ground energy.
    fn by_energy(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.subspaces.len()).collect();
        ids.sort_by(|&a, &b| self.block_ground[a].total_cmp(&self.block_ground[b]).then(a.cmp(&b)));
        ids
    }

    pub fn select(&self, choice: SubspaceChoice) -> Result<usize, CliError> {
        let ids = self.by_energy();
        let pick = match choice {
            SubspaceChoice::Auto => ids.first().copied(),
            SubspaceChoice::Excited => ids.get(1).copied(),
            SubspaceChoice::Index(i) => (i < self.subspaces.len()).then_some(i),
        };
        pick.ok_or_else(|| CliError::Config(format!("no subspace for {choice:?}")))
    }

    pub fn initial_state(&self, subspace: usize) -> usize {
        choose_initial_state(&self.subspaces[subspace], &self.matrix)
    }

    pub fn subspace_ed(&self, subspace: usize) -> Result<EdResult, CliError> {
        Ok(exact_diagonalize(&self.subspaces[subspace].block(&self.matrix))?)
    }

    /// `(candidate count, ordered operators)` for a subspace.
    pub fn operators(
        &self,
        subspace: usize,
        order: OperatorOrder,
    ) -> Result<(usize, Vec<ExcitationOperator>), CliError> {
        let s = &self.subspaces[subspace];
        let (n, mut ops) = ranked_operators(&self.basis, s, self.initial_state(subspace), &self.matrix)?;
        if order == OperatorOrder::Lex {
            sort_lexicographic(&mut ops);
        }
        Ok((n, ops))
    }

    pub fn partition_report(&self, config: &PartitionConfig) -> PartitionReport {
        PartitionReport::new(&self.basis, &self.matrix, &self.subspaces, config)
    }
}

/// Build the problem at every bond length of the run. Ranges share RHF
/// densities along the scan; a single point starts from the core guess.
pub fn prepare(config: &RunConfig) -> Result<Vec<Prepared>, CliError> {
    config.validate()?;
    let mol = config.molecule()?;
    let name = mol.name();
    let pconf = PartitionConfig {
        cutoff: config.cutoff,
    };
    let rhf = RhfOptions::default();
    match &mol {
        Molecule::Fcidump(path) => {
            let text = read_file(path)?;
            let (ints, n_e) = read_fcidump(&text)?;
            Ok(vec![Prepared::from_integrals(name, 0.0, &ints, n_e, &pconf)?])
        }
        Molecule::Xyz(path) => {
            let g = Geometry::parse_xyz(&read_file(path)?)?;
            let m = native_mo_integrals(&g, None, &rhf)?;
            Ok(vec![Prepared::from_integrals(name, 0.0, &m.mo, m.n_electrons, &pconf)?])
        }
        _ => {
            let rs = config.r_values()?;
            let geoms: Vec<(f64, Geometry)> = rs
                .iter()
                .map(|&r| (r, mol.geometry(r).expect("parametric preset")))
                .collect();
            let mols = if geoms.len() == 1 {
                vec![native_mo_integrals(&geoms[0].1, None, &rhf)?]
            } else {
                native_scan(&geoms, &rhf)?
            };
            rs.iter()
                .zip(mols)
                .map(|(&r, m)| Prepared::from_integrals(name.clone(), r, &m.mo, m.n_electrons, &pconf))
                .collect()
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartitionOutput {
    pub molecule: String,
    pub r: f64,
    pub selected_subspace: usize,
    pub block_ground_energies: Vec<f64>,
    pub report: PartitionReport,
}

pub fn cmd_partition(config: &RunConfig) -> Result<Vec<PartitionOutput>, CliError> {
    let pconf = PartitionConfig {
        cutoff: config.cutoff,
    };
    prepare(config)?
        .into_iter()
        .map(|p| {
            Ok(PartitionOutput {
                molecule: p.molecule.clone(),
                r: p.r,
                selected_subspace: p.select(config.subspace)?,
                block_ground_energies: p.block_ground.clone(),
                report: p.partition_report(&pconf),
            })
        })
        .collect()
}

/// Plain-text table of a partition.
pub fn partition_table(out: &PartitionOutput) -> String {
    let mut s = format!(
        "{} r={:.4}: sector {} on {} qubits, subspaces {:?}\n",
        out.molecule,
        out.r,
        out.report.sector_dimension,
        out.report.n_qubits,
        out.report.dimensions()
    );
    for (sub, e) in out.report.subspaces.iter().zip(&out.block_ground_energies) {
        let mark = if sub.id == out.selected_subspace { "*" } else { " " };
        let _ = writeln!(
            s,
            "{mark} {:>3} dim {:>4}  initial |{}>  diag {:>12.6}  ground {:>12.6}",
            sub.id, sub.dimension, sub.initial_state, sub.initial_diagonal, e
        );
    }
    s
}

/// Ranked operator table for the selected subspace at the first bond length.
pub fn cmd_rank(config: &RunConfig) -> Result<PoolReport, CliError> {
    let prepared = prepare(config)?;
    let p = &prepared[0];
    let id = p.select(config.subspace)?;
    let (n, ops) = p.operators(id, config.order)?;
    if ops.is_empty() {
        return Err(CliError::EmptyPool(id));
    }
    Ok(PoolReport::new(n, &ops))
}

struct Target<'a> {
    p: &'a Prepared,
    subspace: usize,
    ed: EdResult,
}

fn row(
    t: &Target,
    config: &RunConfig,
    backend: &Backend,
    k: usize,
    trial: Option<usize>,
    res: &VqeResult,
) -> Result<ResultRow, CliError> {
    let ed_energy = t.ed.ground_energy();
    let (s2, ov) = match &res.state {
        Some(state) => {
            let ground = embed_sector_vector(&t.p.basis, Some(&t.p.subspaces[t.subspace]), &t.ed.vector(0))?;
            (
                Some(spin_squared_expectation(state, t.p.basis.sector)?),
                Some(overlap(state, &ground)?),
            )
        }
        None => (None, None),
    };
    Ok(ResultRow {
        molecule: t.p.molecule.clone(),
        r: t.p.r,
        subspace: t.subspace,
        k,
        terms: config.terms,
        backend: backend.label().into(),
        trial,
        energy: res.energy,
        ed_energy,
        error: res.energy - ed_energy,
        s2,
        overlap: ov,
        std: res.stderr,
    })
}

fn aggregate(rows: &[ResultRow]) -> ResultRow {
    let energies: Vec<f64> = rows.iter().map(|r| r.energy).collect();
    let (mean, std) = mean_std(&energies);
    let first = &rows[0];
    ResultRow {
        trial: None,
        energy: mean,
        error: mean - first.ed_energy,
        s2: None,
        overlap: None,
        std: Some(std),
        ..first.clone()
    }
}

/// VQE over every bond length (and every prefix length in incremental
/// mode). Sampled runs repeat `trials` times and append a mean row;
/// statevector runs are deterministic and run once.
pub fn cmd_vqe(config: &RunConfig) -> Result<Vec<ResultRow>, CliError> {
    let backend = config.backend_for_run()?;
    let optimizer = config.optimizer();
    let trials = match backend {
        Backend::Statevector => 1,
        Backend::Sampled { .. } => config.trials,
    };
    let mut out = Vec::new();
    for p in prepare(config)? {
        let subspace = p.select(config.subspace)?;
        let (_, ops) = p.operators(subspace, config.order)?;
        let k_max = config.k.unwrap_or(ops.len()).min(ops.len());
        let init = p.basis.qubit(p.initial_state(subspace)).bits;
        let problem = VqeProblem::new(p.hamiltonian.clone())?;
        let target = Target {
            ed: p.subspace_ed(subspace)?,
            p: &p,
            subspace,
        };
        let ks: Vec<usize> = if config.incremental {
            (1..=k_max).collect()
        } else {
            vec![k_max]
        };
        // Trials carry their own derived seeds, so running them in parallel
        // leaves the output unchanged.
        let runs: Vec<Vec<VqeResult>> = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<VqeResult>, CliError> {
                if config.incremental {
                    Ok(add_operators_incrementally(
                        &problem,
                        p.basis.n_qubits(),
                        init,
                        &ops,
                        config.terms,
                        k_max,
                        &optimizer,
                        &backend,
                        !config.cold_start,
                        trial,
                    )?)
                } else {
                    let circuit =
                        AnsatzCircuit::from_excitations(p.basis.n_qubits(), init, &ops[..k_max], config.terms)?;
                    Ok(vec![run_vqe(&problem, &circuit, &optimizer, &backend, None, trial)?])
                }
            })
            .collect::<Result<_, _>>()?;
        let mut per_k: Vec<Vec<ResultRow>> = vec![Vec::new(); ks.len()];
        for (trial, results) in runs.iter().enumerate() {
            for (slot, (res, &k)) in results.iter().zip(&ks).enumerate() {
                per_k[slot].push(row(&target, config, &backend, k, Some(trial), res)?);
            }
        }
        for rows in per_k {
            let agg = (rows.len() > 1).then(|| aggregate(&rows));
            out.extend(rows);
            out.extend(agg);
        }
    }
    Ok(out)
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut s = format!("{RESULTS_SCHEMA}\n{RESULTS_HEADER}\n");
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StatsRow {
    pub molecule: String,
    pub r: f64,
    pub ansatz: String,
    pub operators: usize,
    pub rotations: usize,
    pub cnots: usize,
    /// `weight:count` pairs.
    pub weights: String,
}

/// CNOT counts of the single-term subspace ansatz, the all-term subspace
/// ansatz and full UCCSD on the restricted reference.
pub fn cmd_stats(config: &RunConfig) -> Result<Vec<StatsRow>, CliError> {
    let prepared = prepare(config)?;
    let p = &prepared[0];
    let subspace = p.select(config.subspace)?;
    let (_, ops) = p.operators(subspace, config.order)?;
    let k = config.k.unwrap_or(ops.len()).min(ops.len());
    let ops = &ops[..k];
    let n_q = p.basis.n_qubits();
    let init = p.basis.qubit(p.initial_state(subspace)).bits;
    let pool = generate_uccsd_pool(p.n_electrons, p.n_orbitals)?;
    let reference = p
        .basis
        .index_of_fock(closed_shell_bits(p.n_orbitals, p.n_electrons))
        .map(|i| p.basis.qubit(i).bits)
        .unwrap_or(init);
    let rows = [
        ("subspace-single", ops, TermMode::Single, init),
        ("subspace-all", ops, TermMode::All, init),
        ("uccsd-all", &pool[..], TermMode::All, reference),
        ("uccsd-single", &pool[..], TermMode::Single, reference),
    ];
    rows.into_iter()
        .map(|(name, ops, mode, init)| {
            let stats = AnsatzCircuit::from_excitations(n_q, init, ops, mode)?.stats();
            Ok(StatsRow {
                molecule: p.molecule.clone(),
                r: p.r,
                ansatz: name.into(),
                operators: ops.len(),
                rotations: stats.rotation_count,
                cnots: stats.cnot_count,
                weights: stats
                    .weight_histogram()
                    .iter()
                    .map(|(w, c)| format!("{w}:{c}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            })
        })
        .collect()
}

/// Fock bits of the determinant with the lowest `n_electrons / 2` orbitals
/// doubly occupied.
pub fn closed_shell_bits(n_orbitals: usize, n_electrons: usize) -> u64 {
    let occ = (1u64 << (n_electrons / 2)) - 1;
    occ | (occ << n_orbitals)
}

pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut s = String::from("molecule,r,ansatz,operators,rotations,cnots,weights\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.4},{},{},{},{},{}",
            r.molecule, r.r, r.ansatz, r.operators, r.rotations, r.cnots, r.weights
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn molecule_names() {
        assert_eq!("h4-square".parse::<Molecule>().unwrap(), Molecule::H4Square);
        assert_eq!(
            "fcidump:/tmp/x.fcidump".parse::<Molecule>().unwrap(),
            Molecule::Fcidump("/tmp/x.fcidump".into())
        );
        assert!("lih".parse::<Molecule>().is_err());
    }

    #[test]
    fn r_range_is_inclusive() {
        let c = RunConfig {
            r_range: Some("0.5:1.0:0.25".into()),
            ..RunConfig::default()
        };
        let rs = c.r_values().unwrap();
        assert_eq!(rs.len(), 3);
        assert!((rs[2] - 1.0).abs() < 1e-12);
        let bad = RunConfig {
            r_range: Some("1:0.5:0.1".into()),
            ..RunConfig::default()
        };
        assert!(bad.r_values().is_err());
    }

    #[test]
    fn config_json_defaults_and_rejects_unknown() {
        let c = RunConfig::from_json(r#"{"molecule": "h4-chain", "terms": "all"}"#).unwrap();
        assert_eq!(c.terms, TermMode::All);
        assert_eq!(c.shots, 1024);
        assert!(RunConfig::from_json(r#"{"molcule": "h2"}"#).is_err());
    }

    #[test]
    fn validation() {
        let c = RunConfig {
            trials: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            r: Some(-1.0),
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn h2_partition_and_rank() {
        let c = RunConfig::default();
        let out = cmd_partition(&c).unwrap();
        assert_eq!(out[0].report.dimensions(), vec![2, 2]);
        let ground = &out[0].report.subspaces[out[0].selected_subspace];
        assert_eq!(ground.initial_state, "01");
        let pool = cmd_rank(&c).unwrap();
        assert_eq!(pool.operators.len(), 1);
        assert_eq!(pool.operators[0].term, "X2Y1");
    }

    #[test]
    fn closed_shell_reference() {
        assert_eq!(closed_shell_bits(2, 2), 0b0101);
        assert_eq!(closed_shell_bits(4, 4), 0b0011_0011);
    }
}
