//! Line-oriented `key = value` run configuration with `[section]` headers.
//!
//! Keys are globally unique, so command-line overrides address them by bare
//! name through [`RunConfig::set`]. `#` starts a comment line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dynamics::{Backend, ModulationDrive, QubitCavityParams, SolverConfig, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::metrics::{HorizonMode, InitialSuperposition};
use crate::sweep::{DeltaRule, DEFAULT_LIFETIME_EPSILON};
use crate::two_qubit::{EwlKind, EwlParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Pair,
    SweepNm,
    Lifetime,
    Figure,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Single, Mode::Pair, Mode::SweepNm, Mode::Lifetime, Mode::Figure];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Pair => "pair",
            Mode::SweepNm => "sweep-nm",
            Mode::Lifetime => "lifetime",
            Mode::Figure => "figure",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected single, pair, sweep-nm, lifetime or figure)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    pub fn name(&self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRuleKind {
    Fixed,
    Ratio,
}

/// Series whose lifetime the `lifetime` mode reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LifetimeQuantity {
    Coherence,
    Qfi,
    Concurrence,
    Discord,
    Zeta2,
}

impl LifetimeQuantity {
    pub const ALL: [LifetimeQuantity; 5] = [
        LifetimeQuantity::Coherence,
        LifetimeQuantity::Qfi,
        LifetimeQuantity::Concurrence,
        LifetimeQuantity::Discord,
        LifetimeQuantity::Zeta2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LifetimeQuantity::Coherence => "coherence",
            LifetimeQuantity::Qfi => "qfi",
            LifetimeQuantity::Concurrence => "concurrence",
            LifetimeQuantity::Discord => "discord",
            LifetimeQuantity::Zeta2 => "zeta2",
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            LifetimeQuantity::Concurrence | LifetimeQuantity::Discord | LifetimeQuantity::Zeta2
        )
    }
}

/// A fully specified run. Optional fields are `None` when unset; which of
/// them are required depends on the mode (see [`RunConfig::validate`]).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub figure: Option<String>,

    pub lambda: Option<f64>,
    pub delta: f64,
    pub omega: f64,
    pub omega0: Option<f64>,

    pub alpha: Complex64,
    pub beta: Complex64,
    pub kind: EwlKind,
    pub r: f64,
    pub mu: Complex64,

    pub t_max: Option<f64>,
    pub dt_max: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub backend: Backend,
    pub sample_every: Option<f64>,

    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub omega_points: Option<usize>,
    pub omega_spacing: Spacing,
    pub delta_rule: DeltaRuleKind,
    pub delta_ratio: Option<f64>,
    pub horizon: HorizonMode,

    pub quantity: LifetimeQuantity,
    pub epsilon: f64,

    pub path: Option<PathBuf>,
    pub tau_q: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        RunConfig {
            mode: Mode::Single,
            figure: None,
            lambda: None,
            delta: 0.0,
            omega: 0.0,
            omega0: None,
            alpha: half,
            beta: half,
            kind: EwlKind::Psi,
            r: 1.0,
            mu: half,
            t_max: None,
            dt_max: None,
            rel_tol: DEFAULT_TOL,
            abs_tol: DEFAULT_TOL,
            backend: Backend::OdeReduction,
            sample_every: None,
            omega_min: None,
            omega_max: None,
            omega_points: None,
            omega_spacing: Spacing::Log,
            delta_rule: DeltaRuleKind::Fixed,
            delta_ratio: None,
            horizon: HorizonMode::Auto,
            quantity: LifetimeQuantity::Coherence,
            epsilon: DEFAULT_LIFETIME_EPSILON,
            path: None,
            tau_q: None,
        }
    }
}

/// Section of every key; `""` is the preamble before any header.
const KEYS: &[(&str, &str)] = &[
    ("", "mode"),
    ("", "figure"),
    ("physics", "lambda"),
    ("physics", "delta"),
    ("physics", "omega"),
    ("physics", "omega0"),
    ("state", "alpha"),
    ("state", "beta"),
    ("state", "kind"),
    ("state", "r"),
    ("state", "mu"),
    ("solver", "t_max"),
    ("solver", "dt_max"),
    ("solver", "rel_tol"),
    ("solver", "abs_tol"),
    ("solver", "backend"),
    ("solver", "sample_every"),
    ("sweep", "omega_min"),
    ("sweep", "omega_max"),
    ("sweep", "omega_points"),
    ("sweep", "omega_spacing"),
    ("sweep", "delta_rule"),
    ("sweep", "delta_ratio"),
    ("sweep", "horizon"),
    ("lifetime", "quantity"),
    ("lifetime", "epsilon"),
    ("output", "path"),
    ("output", "tau_q"),
];

const SECTIONS: &[&str] = &["physics", "state", "solver", "sweep", "lifetime", "output"];

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    cfg.apply_text(text)?;
    cfg.validate()?;
    Ok(cfg)
}

fn num(key: &str, value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("`{key}`: `{value}` is not a number"))?;
    if v.is_nan() {
        return Err(format!("`{key}`: NaN is not allowed"));
    }
    Ok(v)
}

fn complex(key: &str, value: &str) -> std::result::Result<Complex64, String> {
    Complex64::from_str(value).map_err(|_| format!("`{key}`: `{value}` is not a complex number (e.g. 0.6+0.8i)"))
}

impl RunConfig {
    /// Applies every `key = value` line of `text` on top of `self`. Errors
    /// carry the 1-based line number.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut section = "";
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::ConfigLine { line: line_no, message };
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("malformed section header `{line}`")))?
                    .trim();
                section = SECTIONS
                    .iter()
                    .find(|s| **s == name)
                    .ok_or_else(|| err(format!("unknown section `[{name}]`")))?;
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match KEYS.iter().find(|(_, k)| *k == key) {
                Some((s, _)) if *s == section => {}
                Some(("", _)) => {
                    return Err(err(format!("key `{key}` must appear before any section header")))
                }
                Some((s, _)) => return Err(err(format!("key `{key}` belongs in section [{s}]"))),
                None if section.is_empty() => return Err(err(format!("unknown key `{key}`"))),
                None => return Err(err(format!("unknown key `{key}` in section [{section}]"))),
            }
            self.set_inner(key, value).map_err(err)?;
        }
        Ok(())
    }

    /// Sets one key from its textual value, as a command-line override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_inner(key, value).map_err(Error::Config)
    }

    fn set_inner(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let opt = |v: &str| -> std::result::Result<Option<f64>, String> {
            if v.is_empty() || v == "none" {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        };
        match key {
            "mode" => self.mode = value.parse()?,
            "figure" => self.figure = Some(value.to_string()),
            "lambda" => self.lambda = opt(value)?,
            "delta" => self.delta = num(key, value)?,
            "omega" => self.omega = num(key, value)?,
            "omega0" => self.omega0 = opt(value)?,
            "alpha" => self.alpha = complex(key, value)?,
            "beta" => self.beta = complex(key, value)?,
            "kind" => self.kind = value.parse().map_err(|e: Error| e.to_string())?,
            "r" => self.r = num(key, value)?,
            "mu" => self.mu = complex(key, value)?,
            "t_max" => self.t_max = opt(value)?,
            "dt_max" => self.dt_max = opt(value)?,
            "rel_tol" => self.rel_tol = num(key, value)?,
            "abs_tol" => self.abs_tol = num(key, value)?,
            "backend" => self.backend = value.parse().map_err(|e: Error| e.to_string())?,
            "sample_every" => self.sample_every = opt(value)?,
            "omega_min" => self.omega_min = opt(value)?,
            "omega_max" => self.omega_max = opt(value)?,
            "omega_points" => {
                self.omega_points = Some(
                    value
                        .parse()
                        .map_err(|_| format!("`omega_points`: `{value}` is not a non-negative integer"))?,
                )
            }
            "omega_spacing" => {
                self.omega_spacing = match value {
                    "linear" => Spacing::Linear,
                    "log" => Spacing::Log,
                    _ => return Err(format!("`omega_spacing`: `{value}` is not linear or log")),
                }
            }
            "delta_rule" => {
                self.delta_rule = match value {
                    "fixed" => DeltaRuleKind::Fixed,
                    "ratio" => DeltaRuleKind::Ratio,
                    _ => return Err(format!("`delta_rule`: `{value}` is not fixed or ratio")),
                }
            }
            "delta_ratio" => self.delta_ratio = opt(value)?,
            "horizon" => self.horizon = value.parse().map_err(|e: Error| e.to_string())?,
            "quantity" => {
                self.quantity = LifetimeQuantity::ALL
                    .into_iter()
                    .find(|q| q.name() == value)
                    .ok_or_else(|| format!("`quantity`: `{value}` is not one of coherence, qfi, concurrence, discord, zeta2"))?
            }
            "epsilon" => self.epsilon = num(key, value)?,
            "path" => self.path = if value.is_empty() { None } else { Some(PathBuf::from(value)) },
            "tau_q" => self.tau_q = opt(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Checks required keys for the mode and every range invariant.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, why: String| Err(Error::Config(format!("`{key}` {why}")));
        let require = |key: &str, v: Option<f64>| match v {
            Some(_) => Ok(()),
            None => Err(Error::Config(format!("`{key}` is required in {} mode", self.mode.name()))),
        };
        if self.mode == Mode::Figure {
            if self.figure.is_none() {
                return Err(Error::Config("`figure` is required in figure mode".into()));
            }
        } else {
            require("lambda", self.lambda)?;
            require("t_max", self.t_max)?;
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return bad("lambda", format!("must be positive, got {l}"));
            }
        }
        for (key, v) in [("delta", self.delta), ("omega", self.omega)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(key, format!("must be non-negative, got {v}"));
            }
        }
        let positives = [
            ("omega0", self.omega0),
            ("t_max", self.t_max),
            ("dt_max", self.dt_max),
            ("sample_every", self.sample_every),
            ("omega_min", self.omega_min),
            ("omega_max", self.omega_max),
            ("tau_q", self.tau_q),
            ("rel_tol", Some(self.rel_tol)),
            ("abs_tol", Some(self.abs_tol)),
            ("epsilon", Some(self.epsilon)),
        ];
        for (key, v) in positives {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(key, format!("must be positive, got {v}"));
                }
            }
        }
        if let Some(k) = self.delta_ratio {
            if !(k >= 0.0 && k.is_finite()) {
                return bad("delta_ratio", format!("must be non-negative, got {k}"));
            }
        }
        if !(0.0..=1.0).contains(&self.r) {
            return bad("r", format!("must lie in [0, 1], got {}", self.r));
        }
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return bad("alpha", format!("and `beta` must satisfy |alpha|^2 + |beta|^2 = 1, got {norm}"));
        }
        if self.mu.norm_sqr() > 1.0 + 1e-12 {
            return bad("mu", format!("must satisfy |mu| <= 1, got {}", self.mu.norm()));
        }
        if self.mode == Mode::SweepNm {
            require("omega_min", self.omega_min)?;
            require("omega_max", self.omega_max)?;
            let n = self
                .omega_points
                .ok_or_else(|| Error::Config("`omega_points` is required in sweep-nm mode".into()))?;
            if n == 0 {
                return bad("omega_points", "must be at least 1".into());
            }
            let (lo, hi) = (self.omega_min.unwrap_or(0.0), self.omega_max.unwrap_or(0.0));
            if !(hi > lo) && n > 1 {
                return bad("omega_max", format!("must exceed omega_min ({hi} <= {lo})"));
            }
            if self.delta_rule == DeltaRuleKind::Ratio {
                require("delta_ratio", self.delta_ratio)?;
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<QubitCavityParams> {
        let lambda = self
            .lambda
            .ok_or_else(|| Error::Config("`lambda` is required".into()))?;
        let p = QubitCavityParams::new(lambda)?;
        match self.omega0 {
            Some(w) => p.with_omega0(w),
            None => Ok(p),
        }
    }

    pub fn drive(&self) -> Result<ModulationDrive> {
        ModulationDrive::new(self.delta, self.omega)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let t_max = self
            .t_max
            .ok_or_else(|| Error::Config("`t_max` is required".into()))?;
        let mut cfg = SolverConfig::for_problem(&self.params()?, &self.drive()?, t_max)
            .with_tolerances(self.rel_tol, self.abs_tol)
            .with_backend(self.backend);
        if let Some(dt) = self.dt_max {
            cfg = cfg.with_dt_max(dt);
        }
        if let Some(every) = self.sample_every {
            cfg = cfg.with_sampling(every);
        }
        Ok(cfg)
    }

    pub fn initial_superposition(&self) -> Result<InitialSuperposition> {
        InitialSuperposition::new(self.alpha, self.beta)
    }

    pub fn ewl(&self) -> Result<EwlParams> {
        EwlParams::new(self.kind, self.r, self.mu)
    }

    pub fn delta_rule(&self) -> DeltaRule {
        match self.delta_rule {
            DeltaRuleKind::Fixed => DeltaRule::Fixed(self.delta),
            DeltaRuleKind::Ratio => DeltaRule::Ratio(self.delta_ratio.unwrap_or(0.0)),
        }
    }

    /// Canonical text form; [`parse_config`] maps it back to `self`.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let f = |v: f64| format!("{v:?}");
        let c = |v: Complex64| format!("{}{:+?}i", f(v.re), v.im);
        let _ = writeln!(out, "mode = {}", self.mode.name());
        if let Some(fig) = &self.figure {
            let _ = writeln!(out, "figure = {fig}");
        }
        let mut section = |name: &str, entries: Vec<(&str, Option<String>)>| {
            let _ = writeln!(out, "[{name}]");
            for (k, v) in entries {
                if let Some(v) = v {
                    let _ = writeln!(out, "{k} = {v}");
                }
            }
        };
        section(
            "physics",
            vec![
                ("lambda", self.lambda.map(f)),
                ("delta", Some(f(self.delta))),
                ("omega", Some(f(self.omega))),
                ("omega0", self.omega0.map(f)),
            ],
        );
        section(
            "state",
            vec![
                ("alpha", Some(c(self.alpha))),
                ("beta", Some(c(self.beta))),
                ("kind", Some(self.kind.name().to_string())),
                ("r", Some(f(self.r))),
                ("mu", Some(c(self.mu))),
            ],
        );
        section(
            "solver",
            vec![
                ("t_max", self.t_max.map(f)),
                ("dt_max", self.dt_max.map(f)),
                ("rel_tol", Some(f(self.rel_tol))),
                ("abs_tol", Some(f(self.abs_tol))),
                ("backend", Some(self.backend.name().to_string())),
                ("sample_every", self.sample_every.map(f)),
            ],
        );
        section(
            "sweep",
            vec![
                ("omega_min", self.omega_min.map(f)),
                ("omega_max", self.omega_max.map(f)),
                ("omega_points", self.omega_points.map(|n| n.to_string())),
                ("omega_spacing", Some(self.omega_spacing.name().to_string())),
                (
                    "delta_rule",
                    Some(
                        match self.delta_rule {
                            DeltaRuleKind::Fixed => "fixed",
                            DeltaRuleKind::Ratio => "ratio",
                        }
                        .to_string(),
                    ),
                ),
                ("delta_ratio", self.delta_ratio.map(f)),
                ("horizon", Some(self.horizon.name().to_string())),
            ],
        );
        section(
            "lifetime",
            vec![
                ("quantity", Some(self.quantity.name().to_string())),
                ("epsilon", Some(f(self.epsilon))),
            ],
        );
        section(
            "output",
            vec![
                ("path", self.path.as_ref().map(|p| p.display().to_string())),
                ("tau_q", self.tau_q.map(f)),
            ],
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "mode = single\n[physics]\nlambda = 0.01\ndelta = 12.02415\nomega = 5\n[solver]\nt_max = 1000\n";

    #[test]
    fn minimal_single_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.mode, Mode::Single);
        assert_eq!(cfg.lambda, Some(0.01));
        assert_eq!(cfg.delta, 12.02415);
        assert_eq!(cfg.omega, 5.0);
        assert_eq!(cfg.t_max, Some(1000.0));
        assert_eq!(parse_config(&cfg.to_config_text()).unwrap(), cfg);
    }

    #[test]
    fn negative_lambda_names_the_key() {
        let err = parse_config(&MINIMAL.replace("lambda = 0.01", "lambda = -1")).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = "mode = single\n[physics]\nlambda = 1\nlamda = 2\n";
        match parse_config(text).unwrap_err() {
            Error::ConfigLine { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("lamda"));
            }
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(
            parse_config("[physics]\nt_max = 3\n"),
            Err(Error::ConfigLine { line: 2, .. })
        ));
        assert!(matches!(parse_config("[phys]\n"), Err(Error::ConfigLine { line: 1, .. })));
        assert!(matches!(
            parse_config("mode = single\n[physics]\nlambda = abc\n"),
            Err(Error::ConfigLine { line: 3, .. })
        ));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = RunConfig::default();
        cfg.apply_text(&MINIMAL.replace("omega = 5", "omega = 0.5")).unwrap();
        cfg.set("omega", "5").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.omega, 5.0);
        assert!(cfg.set("nonsense", "1").is_err());
    }

    #[test]
    fn required_keys_per_mode() {
        assert!(parse_config("mode = single\n[physics]\nlambda = 1\n").is_err());
        assert!(parse_config("mode = figure\n").is_err());
        assert!(parse_config("mode = figure\nfigure = fig3\n").is_ok());
        let sweep = "mode = sweep-nm\n[physics]\nlambda = 3\ndelta = 10\n[solver]\nt_max = 100\n[sweep]\nomega_min = 0.1\nomega_max = 10\nomega_points = 5\n";
        assert!(parse_config(sweep).is_ok());
        assert!(parse_config(&sweep.replace("omega_points = 5\n", "")).is_err());
        assert!(parse_config(&format!("{sweep}delta_rule = ratio\n")).is_err());
    }

    #[test]
    fn complex_and_enum_values_round_trip() {
        let text = "mode = pair\n[physics]\nlambda = 0.1\n[state]\nkind = phi\nr = 0.8\nmu = 0.6+0.0i\nalpha = 0.6\nbeta = 0-0.8i\n[solver]\nt_max = 10\nbackend = volterra\n[sweep]\nhorizon = capped\n[output]\npath = out dir/x.csv\ntau_q = 1e-7\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.kind, EwlKind::Phi);
        assert_eq!(cfg.beta, Complex64::new(0.0, -0.8));
        assert_eq!(cfg.backend, Backend::VolterraQuadrature);
        assert_eq!(cfg.path, Some(PathBuf::from("out dir/x.csv")));
        assert_eq!(parse_config(&cfg.to_config_text()).unwrap(), cfg);
    }
}
