use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use shallow_vqe::cli::{
    cmd_partition, cmd_rank, cmd_stats, cmd_vqe, partition_table, results_csv, stats_csv,
    BackendKind, OperatorOrder, RunConfig, SubspaceChoice,
};
use shallow_vqe::simulator::TermMode;

#[derive(Parser)]
#[command(name = "shallow-vqe", version, about = "Subspace-partitioned shallow VQE for hydrogen clusters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition the electron sector and print subspace dimensions.
    Partition(Flags),
    /// Rank the selected excitation operators of one subspace.
    Rank(Flags),
    /// Run VQE and write result rows.
    Vqe(Flags),
    /// Count CNOTs of the subspace and full UCCSD ansätze.
    Stats(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Score,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Terms {
    Single,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Sv,
    Shots,
}

#[derive(Args)]
struct Flags {
    /// JSON file with RunConfig fields; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// h2, h4-square, h4-chain, h6-hexagon, xyz:PATH or fcidump:PATH.
    #[arg(long)]
    molecule: Option<String>,
    /// Bond length in Å.
    #[arg(long)]
    r: Option<f64>,
    /// start:stop:step in Å.
    #[arg(long)]
    r_range: Option<String>,
    /// `auto` or a subspace index.
    #[arg(long)]
    subspace: Option<String>,
    /// Use the subspace with the second-lowest ground energy.
    #[arg(long)]
    excited: bool,
    #[arg(long, value_enum)]
    order: Option<Order>,
    #[arg(long, value_enum)]
    terms: Option<Terms>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long)]
    shots: Option<usize>,
    /// p1,p2 depolarizing rates.
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of leading operators.
    #[arg(long)]
    k: Option<usize>,
    /// Report every prefix length 1..=k.
    #[arg(long)]
    incremental: bool,
    /// Append to this file instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(m) = &self.molecule {
            c.molecule = m.clone();
        }
        if self.r.is_some() {
            c.r = self.r;
        }
        if self.r_range.is_some() {
            c.r_range = self.r_range.clone();
        }
        if let Some(s) = &self.subspace {
            c.subspace = match s.as_str() {
                "auto" => SubspaceChoice::Auto,
                n => SubspaceChoice::Index(n.parse().context("--subspace takes auto or an index")?),
            };
        }
        if self.excited {
            c.subspace = SubspaceChoice::Excited;
        }
        if let Some(o) = self.order {
            c.order = match o {
                Order::Score => OperatorOrder::Score,
                Order::Lex => OperatorOrder::Lex,
            };
        }
        if let Some(t) = self.terms {
            c.terms = match t {
                Terms::Single => TermMode::Single,
                Terms::All => TermMode::All,
            };
        }
        if let Some(b) = self.backend {
            c.backend = match b {
                BackendArg::Sv => BackendKind::Sv,
                BackendArg::Shots => BackendKind::Shots,
            };
        }
        if let Some(n) = &self.noise {
            let Some((a, b)) = n.split_once(',') else {
                bail!("--noise takes p1,p2");
            };
            c.noise = (a.trim().parse()?, b.trim().parse()?);
        }
        c.shots = self.shots.unwrap_or(c.shots);
        c.trials = self.trials.unwrap_or(c.trials);
        c.seed = self.seed.unwrap_or(c.seed);
        c.k = self.k.or(c.k);
        c.incremental |= self.incremental;
        c.out = self.out.clone().or(c.out);
        c.validate()?;
        Ok(c)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Partition(f) => {
            let c = f.resolve()?;
            let reports = cmd_partition(&c)?;
            for r in &reports {
                eprint!("{}", partition_table(r));
            }
            emit(&c.out, &(serde_json::to_string_pretty(&reports)? + "\n"))?;
        }
        Command::Rank(f) => {
            let c = f.resolve()?;
            emit(&c.out, &cmd_rank(&c)?.to_csv())?;
        }
        Command::Vqe(f) => {
            let c = f.resolve()?;
            let rows = cmd_vqe(&c)?;
            let mut text = results_csv(&rows);
            // Appending to an existing table keeps a single header.
            if c.out.as_ref().is_some_and(|p| p.metadata().is_ok_and(|m| m.len() > 0)) {
                text = text.lines().skip(2).map(|l| format!("{l}\n")).collect();
            }
            emit(&c.out, &text)?;
        }
        Command::Stats(f) => {
            let c = f.resolve()?;
            emit(&c.out, &stats_csv(&cmd_stats(&c)?))?;
        }
    }
    Ok(())
}
