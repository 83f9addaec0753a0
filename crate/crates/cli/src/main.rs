//! `stagger`: reproducible experiments on the Z2-staggered six-vertex model.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{parse_ini, Command, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "stagger", version, about = "Numerical lab for the Z2-staggered six-vertex / Temperley-Lieb model")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// INI-style `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Anisotropy γ in (0, π/2); accepts `pi/4`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,

    /// t = π/γ.
    #[arg(long, global = true)]
    t: Option<String>,

    /// Comma-separated block counts N (2N strands).
    #[arg(long, global = true)]
    sizes: Option<String>,

    /// Twist φ in radians, or `gamma`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    twist: Option<String>,

    /// Spectrum: Sz list. Bethe: root counts `r` or `r0,r1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    sector: Option<String>,

    /// Spectrum: even leg numbers k for the h_k fits.
    #[arg(long, global = true)]
    legs: Option<String>,

    /// Spectrum: number of lowest levels written per (N, Sz).
    #[arg(long, global = true)]
    levels: Option<String>,

    /// Bethe: explicit integers `I0 list;I1 list`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    integers: Option<String>,

    /// Bethe: also solve the XXZ reduction of a symmetric state.
    #[arg(long, global = true)]
    symmetric: bool,

    /// Partition: z, twisted or potts.
    #[arg(long, global = true)]
    function: Option<String>,

    /// Partition: `RE,IM`, each a number or `a:b:n`.
    #[arg(long = "tau-grid", global = true, allow_hyphen_values = true)]
    tau_grid: Option<String>,

    /// TBA: `a:b:n` (log-spaced) or a comma list of r = μR.
    #[arg(long = "r-grid", global = true)]
    r_grid: Option<String>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Exact spectra, central-charge and k-leg exponent fits.
    Spectrum,
    /// Bethe roots, energy and comparison with exact diagonalisation.
    Bethe,
    /// Torus partition functions on a τ grid.
    Partition,
    /// TBA ground-state energy flow.
    Tba,
}

impl Cli {
    fn flags(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let opts = [
            ("gamma", &self.gamma),
            ("t", &self.t),
            ("sizes", &self.sizes),
            ("twist", &self.twist),
            ("sector", &self.sector),
            ("legs", &self.legs),
            ("levels", &self.levels),
            ("integers", &self.integers),
            ("function", &self.function),
            ("tau_grid", &self.tau_grid),
            ("r_grid", &self.r_grid),
            ("format", &self.format),
        ];
        for (k, v) in opts {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        }
        if let Some(out) = &self.out {
            m.insert("out".into(), out.display().to_string());
        }
        if self.symmetric {
            m.insert("symmetric".into(), "true".into());
        }
        m
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let command = match cli.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Bethe => Command::Bethe,
        Cmd::Partition => Command::Partition,
        Cmd::Tba => Command::Tba,
    };
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_ini(&text)?
        }
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(command, file, cli.flags())?;
    let report = match command {
        Command::Spectrum => commands::spectrum(&cfg)?,
        Command::Bethe => commands::bethe(&cfg)?,
        Command::Partition => commands::partition(&cfg)?,
        Command::Tba => commands::tba(&cfg)?,
    };
    let text = report.render(&cfg);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    for c in &report.checks {
        eprintln!("{}", c.line());
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("stagger: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Numerical(_) => 1,
            })
        }
    }
}
