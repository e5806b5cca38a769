//! Command-line front end. Exit status 0, 1 and 2 mirror verified, refuted
//! and inconclusive outcomes; 3 reports an error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use baire_density::density::Horizons;
use baire_density::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "baire-density", version, about = "Category density points on the real line and the Cantor space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Space of the input set; inferred from the document when omitted.
    #[arg(long, global = true, value_enum)]
    space: Option<SpaceArg>,
    /// JSON file with default horizons.
    #[arg(long, global = true, env = "BAIRE_DENSITY_HORIZONS")]
    horizons: Option<PathBuf>,
    #[arg(long, global = true)]
    n_max: Option<u32>,
    #[arg(long, global = true)]
    k_max: Option<u32>,
    #[arg(long, global = true)]
    l_max: Option<u32>,
    /// Depth of clopen Cantor sets.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Oracle resolution as `eps,delta`.
    #[arg(long, global = true)]
    resolution: Option<String>,
    /// Output file, written atomically; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    R,
    Cantor,
}

#[derive(Subcommand)]
enum Command {
    /// Dispersion (or density) of a set at a point, with a certificate.
    Check {
        /// Set document, or `lib:NAME` for a shipped family.
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Check density instead of dispersion.
        #[arg(long)]
        density: bool,
    },
    /// Cross-validates the checker against the sequence definition.
    Oracle {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        point: String,
        /// `identity`, `geometric:c,rho`, `explicit:a,b,...` or a file of terms.
        #[arg(long, default_value = "identity")]
        seq: String,
    },
    /// Runs the lower density operator axioms over a family.
    Axioms {
        /// Family members; all clopen sets of `--depth` on the Cantor space
        /// when omitted there.
        #[arg(long)]
        set: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 100)]
        perturbations: usize,
    },
    /// Evaluates the operator on a grid.
    Phi {
        #[arg(long)]
        set: String,
        /// `lo:hi:step` on the line, `max_pre:max_period` on the Cantor space.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long)]
        csv: bool,
    },
    /// Emits the layered closed-set presentation of the density points.
    Pi03 {
        #[arg(long)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Extracts a subsequence along which the dilates keep fixed gaps.
    Extract {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value = "identity")]
        seq: String,
    },
    /// Replays a certificate against a set document.
    Validate {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        set: String,
    },
}

impl Common {
    pub fn horizons(&self) -> anyhow::Result<Horizons> {
        let mut h = match &self.horizons {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => Horizons::default(),
        };
        if let Some(v) = self.n_max {
            h.n_max = v;
        }
        if let Some(v) = self.k_max {
            h.k_max = v;
        }
        if let Some(v) = self.l_max {
            h.l_max = v;
        }
        if let Some(v) = self.depth {
            h.cantor_depth = v;
        }
        if let Some(r) = &self.resolution {
            let (eps, delta) = r
                .split_once(',')
                .ok_or_else(|| anyhow::anyhow!("expected --resolution eps,delta, got `{r}`"))?;
            h.eps = eps.trim().parse::<Rational>()?;
            h.delta = delta.trim().parse::<Rational>()?;
        }
        h.validate()?;
        Ok(h)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match commands::run(cli.command, &cli.common) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
