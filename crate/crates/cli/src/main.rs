use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fmq_core::io::{execute, Mode, RunConfig};

/// Frequency-modulated qubit dynamics: time series, sweeps and figure data
/// as CSV.
#[derive(Parser, Debug)]
#[command(name = "fmq", version, about)]
struct Cli {
    /// Run configuration (`key = value` lines with `[section]` headers).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override any configuration key, e.g. `--set rel_tol=1e-10`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-qubit amplitude, coherence, QFI and decay rate time series.
    Single,
    /// Two-qubit concurrence, discord and coherence time series.
    Pair,
    /// Non-Markovianity as a function of the modulation frequency.
    SweepNm,
    /// Time after which a resource stays below the threshold.
    Lifetime,
    /// Data behind a figure, one CSV per curve.
    Figure {
        /// Figure id such as fig5a; an unknown id lists the valid ones.
        id: String,
    },
}

/// Per-key overrides; each takes precedence over the file and `--set`.
#[derive(Args, Debug)]
struct Overrides {
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Two-qubit state family: psi or phi.
    #[arg(long, global = true)]
    kind: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t_max: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    dt_max: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    rel_tol: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    abs_tol: Option<String>,
    /// ode or volterra.
    #[arg(long, global = true)]
    backend: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    sample_every: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega_min: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega_max: Option<String>,
    #[arg(long, global = true)]
    omega_points: Option<String>,
    /// linear or log.
    #[arg(long, global = true)]
    omega_spacing: Option<String>,
    /// fixed or ratio.
    #[arg(long, global = true)]
    delta_rule: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta_ratio: Option<String>,
    /// auto, capped or forced.
    #[arg(long, global = true)]
    horizon: Option<String>,
    /// coherence, qfi, concurrence, discord or zeta2.
    #[arg(long, global = true)]
    quantity: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Output file, or directory for figures; stdout when omitted.
    #[arg(long, short, global = true)]
    output: Option<String>,
    /// Qubit relaxation time in seconds; adds a `t_seconds` column.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau_q: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> [(&'static str, &Option<String>); 26] {
        [
            ("lambda", &self.lambda),
            ("delta", &self.delta),
            ("omega", &self.omega),
            ("omega0", &self.omega0),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("kind", &self.kind),
            ("r", &self.r),
            ("mu", &self.mu),
            ("t_max", &self.t_max),
            ("dt_max", &self.dt_max),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("backend", &self.backend),
            ("sample_every", &self.sample_every),
            ("omega_min", &self.omega_min),
            ("omega_max", &self.omega_max),
            ("omega_points", &self.omega_points),
            ("omega_spacing", &self.omega_spacing),
            ("delta_rule", &self.delta_rule),
            ("delta_ratio", &self.delta_ratio),
            ("horizon", &self.horizon),
            ("quantity", &self.quantity),
            ("epsilon", &self.epsilon),
            ("path", &self.output),
            ("tau_q", &self.tau_q),
        ]
    }
}

fn build_config(cli: &Cli) -> fmq_core::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| fmq_core::Error::Io {
            path: path.clone(),
            source,
        })?;
        cfg.apply_text(&text)?;
    }
    let (mode, figure) = match &cli.command {
        Command::Single => (Mode::Single, None),
        Command::Pair => (Mode::Pair, None),
        Command::SweepNm => (Mode::SweepNm, None),
        Command::Lifetime => (Mode::Lifetime, None),
        Command::Figure { id } => (Mode::Figure, Some(id.clone())),
    };
    cfg.mode = mode;
    if figure.is_some() {
        cfg.figure = figure;
    }
    for item in &cli.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| fmq_core::Error::Config(format!("--set expects KEY=VALUE, got `{item}`")))?;
        cfg.set(key.trim(), value.trim())?;
    }
    for (key, value) in cli.overrides.pairs() {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|cfg| execute(&cfg, std::io::stdout().lock()));
    match result {
        Ok(files) => {
            for f in files {
                log::info!("wrote {}", f.display());
                eprintln!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
