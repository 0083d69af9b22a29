//! Run configuration, mode execution and CSV output.

mod config;
mod csv;
mod figures;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use config::{parse_config, DeltaRuleKind, LifetimeQuantity, Mode, RunConfig, Spacing};
pub use csv::{emit_csv, format_g, provenance_config, read_table, write_csv, Table, SIGNIFICANT_DIGITS};
pub use figures::{figure_curves, FigureCurve, FIGURE_IDS};

use crate::dynamics::{adiabatic_warnings, solve, AmplitudeTrajectory};
use crate::error::{Error, Result};
use crate::metrics::{decay_rate, density_matrix_from_amplitude, DEFAULT_GUARD};
use crate::sweep::{lifetime, nm_curve, Axis, SweepParam};
use crate::two_qubit::resource_time_series;

/// Column schema of each tabular mode, before the optional `t_seconds`.
pub fn columns(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::Single => &[
            "gamma_t",
            "re_C",
            "im_C",
            "coherence",
            "qfi",
            "phase_error",
            "gamma_of_t",
            "lamb_shift",
        ],
        Mode::Pair => &["gamma_t", "concurrence", "discord", "zeta2"],
        Mode::SweepNm => &["omega_over_gamma", "delta_over_gamma", "N"],
        Mode::Lifetime => &["epsilon", "lifetime", "horizon"],
        Mode::Figure => &[],
    }
}

/// Provenance notes written ahead of the configuration lines.
pub fn notes(cfg: &RunConfig) -> Vec<String> {
    let mut out = vec![format!("fmq {} {}", env!("CARGO_PKG_VERSION"), cfg.mode.name())];
    if let (Ok(p), Ok(d)) = (cfg.params(), cfg.drive()) {
        out.extend(adiabatic_warnings(&p, &d).into_iter().map(|w| format!("warning: {w}")));
    }
    out
}

fn trajectory(cfg: &RunConfig) -> Result<AmplitudeTrajectory> {
    solve(&cfg.params()?, &cfg.drive()?, &cfg.solver_config()?)
}

fn with_seconds(mut table: Table, cfg: &RunConfig) -> Table {
    if let Some(tau) = cfg.tau_q {
        table.columns.push("t_seconds".into());
        for row in &mut table.rows {
            row.push(row[0] * tau);
        }
    }
    table
}

fn single_table(cfg: &RunConfig) -> Result<Table> {
    let traj = trajectory(cfg)?;
    let init = cfg.initial_superposition()?;
    let rates = decay_rate(&traj, DEFAULT_GUARD);
    let mut table = Table::new(columns(Mode::Single).iter().copied());
    for (k, (t, c)) in traj.times().iter().zip(traj.amplitudes()).enumerate() {
        let z = c.norm();
        let f = z * z;
        let coherence = density_matrix_from_amplitude(&init, *c).l1_coherence();
        let phase_error = if f > 0.0 { 1.0 / f.sqrt() } else { f64::INFINITY };
        table.push(vec![
            *t,
            c.re,
            c.im,
            coherence,
            f,
            phase_error,
            rates.gamma_t[k],
            rates.lamb_shift[k],
        ]);
    }
    Ok(with_seconds(table, cfg))
}

fn pair_table(cfg: &RunConfig) -> Result<Table> {
    let traj = trajectory(cfg)?;
    let series = resource_time_series(&cfg.ewl()?, &traj)?;
    let mut table = Table::new(columns(Mode::Pair).iter().copied());
    for s in series {
        table.push(vec![s.t, s.concurrence, s.discord, s.zeta2]);
    }
    Ok(with_seconds(table, cfg))
}

fn omega_grid(cfg: &RunConfig) -> Result<Vec<f64>> {
    let missing = |k: &str| Error::Config(format!("`{k}` is required in sweep-nm mode"));
    let lo = cfg.omega_min.ok_or_else(|| missing("omega_min"))?;
    let hi = cfg.omega_max.ok_or_else(|| missing("omega_max"))?;
    let n = cfg.omega_points.ok_or_else(|| missing("omega_points"))?;
    let axis = match cfg.omega_spacing {
        Spacing::Linear => Axis::linear(SweepParam::Omega, lo, hi, n)?,
        Spacing::Log => Axis::log(SweepParam::Omega, lo, hi, n)?,
    };
    Ok(axis.values)
}

fn sweep_nm_table(cfg: &RunConfig) -> Result<Table> {
    let params = cfg.params()?;
    let omegas = omega_grid(cfg)?;
    let points = nm_curve(&params, cfg.delta_rule(), &omegas, &cfg.solver_config()?, cfg.horizon)?;
    let mut table = Table::new(columns(Mode::SweepNm).iter().copied());
    for p in points {
        table.push(vec![p.omega, p.delta, p.result.value]);
    }
    Ok(table)
}

fn lifetime_table(cfg: &RunConfig) -> Result<Table> {
    let traj = trajectory(cfg)?;
    let values: Vec<f64> = if cfg.quantity.is_two_qubit() {
        let series = resource_time_series(&cfg.ewl()?, &traj)?;
        series
            .iter()
            .map(|s| match cfg.quantity {
                LifetimeQuantity::Concurrence => s.concurrence,
                LifetimeQuantity::Discord => s.discord,
                _ => s.zeta2,
            })
            .collect()
    } else {
        let z = traj.magnitudes();
        match cfg.quantity {
            LifetimeQuantity::Qfi => z.iter().map(|x| x * x).collect(),
            _ => z,
        }
    };
    let lt = lifetime(traj.times(), &values, cfg.epsilon)?;
    let mut table = Table::new(columns(Mode::Lifetime).iter().copied());
    table.push(vec![cfg.epsilon, lt.as_f64(), lt.horizon]);
    Ok(table)
}

/// Evaluates a tabular mode.
pub fn run_table(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Single => single_table(cfg),
        Mode::Pair => pair_table(cfg),
        Mode::SweepNm => sweep_nm_table(cfg),
        Mode::Lifetime => lifetime_table(cfg),
        Mode::Figure => Err(Error::Config("figure mode produces several files; use run_figure".into())),
    }
}

/// Writes the run to `cfg.path`, or to `out` when no path is configured.
/// Returns the files written.
pub fn execute<W: Write>(cfg: &RunConfig, out: W) -> Result<Vec<PathBuf>> {
    if cfg.mode == Mode::Figure {
        let dir = cfg.path.clone().unwrap_or_else(|| PathBuf::from("."));
        return run_figure(cfg, &dir);
    }
    let table = run_table(cfg)?;
    let notes = notes(cfg);
    match &cfg.path {
        Some(path) => {
            emit_csv(path, cfg, &notes, &table)?;
            Ok(vec![path.clone()])
        }
        None => {
            write_csv(out, cfg, &notes, &table).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
            Ok(Vec::new())
        }
    }
}

/// Runs every curve of `cfg.figure` and writes `<dir>/<figid>_<curve>.csv`.
pub fn run_figure(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let id = cfg
        .figure
        .as_deref()
        .ok_or_else(|| Error::Config("`figure` is required in figure mode".into()))?;
    let curves = figure_curves(id, cfg)?;
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(curves.len());
    for curve in curves {
        log::info!("{id}: curve {}", curve.name);
        let table = run_table(&curve.config)?;
        let mut notes = notes(&curve.config);
        notes.push(format!("figure {id} curve {}", curve.name));
        let path = dir.join(format!("{id}_{}.csv", curve.name));
        emit_csv(&path, &curve.config, &notes, &table)?;
        written.push(path);
    }
    Ok(written)
}
