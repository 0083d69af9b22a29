//! Parameter grids, threshold-crossing lifetimes and N(Ω) curves.
//!
//! Grid points are independent; they are evaluated on the rayon pool and
//! assembled by grid index, so tables never depend on scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{solve, ModulationDrive, QubitCavityParams, SolverConfig};
use crate::error::{Error, Result};
use crate::metrics::{coherence, non_markovianity, qfi, rates_from, HorizonMode, NonMarkovianityResult, DEFAULT_GUARD};
use crate::two_qubit::{resource_time_series, EwlKind, EwlParams};

/// Threshold below which a resource normalised to 1 counts as vanished.
pub const DEFAULT_LIFETIME_EPSILON: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    /// Time after which the series stays below the threshold.
    At(f64),
    /// The series is still at or above the threshold at the horizon.
    BeyondHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeResult {
    pub lifetime: Lifetime,
    pub horizon: f64,
}

impl LifetimeResult {
    pub fn time(&self) -> Option<f64> {
        match self.lifetime {
            Lifetime::At(t) => Some(t),
            Lifetime::BeyondHorizon => None,
        }
    }

    pub fn is_beyond_horizon(&self) -> bool {
        self.lifetime == Lifetime::BeyondHorizon
    }

    /// Lifetime as a number, `+∞` for the beyond-horizon sentinel.
    pub fn as_f64(&self) -> f64 {
        self.time().unwrap_or(f64::INFINITY)
    }
}

/// Last down-crossing of `epsilon`: the smallest `t*` with `value < ε` on
/// `(t*, horizon]`, linearly interpolated between samples. A series that
/// starts below the threshold has `t* = times[0]`.
pub fn lifetime(times: &[f64], values: &[f64], epsilon: f64) -> Result<LifetimeResult> {
    if times.is_empty() {
        return Err(Error::EmptySeries);
    }
    if times.len() != values.len() {
        return Err(Error::invalid(
            "series",
            format!("{} times but {} values", times.len(), values.len()),
        ));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times", "must be strictly increasing"));
    }
    let horizon = times[times.len() - 1];
    let lifetime = match values.iter().rposition(|v| !(*v < epsilon)) {
        None => Lifetime::At(times[0]),
        Some(k) if k == values.len() - 1 => Lifetime::BeyondHorizon,
        Some(k) => {
            let (t0, t1, v0, v1) = (times[k], times[k + 1], values[k], values[k + 1]);
            let frac = if v0.is_finite() { (v0 - epsilon) / (v0 - v1) } else { 1.0 };
            Lifetime::At(t0 + frac.clamp(0.0, 1.0) * (t1 - t0))
        }
    };
    Ok(LifetimeResult { lifetime, horizon })
}

/// How the modulation amplitude follows Ω along an N(Ω) curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaRule {
    Fixed(f64),
    /// `δ = ratio · Ω`.
    Ratio(f64),
}

impl DeltaRule {
    pub fn delta_at(&self, omega: f64) -> f64 {
        match *self {
            DeltaRule::Fixed(d) => d,
            DeltaRule::Ratio(k) => k * omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmPoint {
    pub omega: f64,
    pub delta: f64,
    pub result: NonMarkovianityResult,
}

/// One non-Markovianity evaluation per Ω. Each point uses its own step cap
/// from [`SolverConfig::max_step_for`] and the tolerances of `config`.
pub fn nm_curve(
    params: &QubitCavityParams,
    rule: DeltaRule,
    omegas: &[f64],
    config: &SolverConfig,
    mode: HorizonMode,
) -> Result<Vec<NmPoint>> {
    if let Some(w) = omegas.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::invalid("omega", format!("values must be positive, got {w}")));
    }
    if omegas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("omega", "values must be strictly increasing"));
    }
    omegas
        .par_iter()
        .map(|&omega| {
            let drive = ModulationDrive::new(rule.delta_at(omega), omega)?;
            let cfg = SolverConfig::for_problem(params, &drive, config.t_max)
                .with_tolerances(config.rel_tol, config.abs_tol);
            let result = non_markovianity(params, &drive, &cfg, mode)?;
            Ok(NmPoint {
                omega,
                delta: drive.delta,
                result,
            })
        })
        .collect()
}

/// Parameters a sweep axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepParam {
    Lambda,
    Delta,
    Omega,
    /// Sets `δ = value · Ω` after all other axes are applied.
    DeltaOverOmega,
    /// Werner mixing parameter `r` of the two-qubit state.
    R,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::Lambda,
        SweepParam::Delta,
        SweepParam::Omega,
        SweepParam::DeltaOverOmega,
        SweepParam::R,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Lambda => "lambda",
            SweepParam::Delta => "delta",
            SweepParam::Omega => "omega",
            SweepParam::DeltaOverOmega => "delta_over_omega",
            SweepParam::R => "r",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid("axis", format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("axis", format!("`{}` has no values", param.name())));
        }
        Ok(Axis { param, values })
    }

    /// `n` evenly spaced values from `start` to `end` inclusive.
    pub fn linear(param: SweepParam, start: f64, end: f64, n: usize) -> Result<Self> {
        Self::new(param, spaced(start, end, n, |x| x, |x| x)?)
    }

    /// `n` log-spaced values from `start` to `end` inclusive.
    pub fn log(param: SweepParam, start: f64, end: f64, n: usize) -> Result<Self> {
        if !(start > 0.0 && end > 0.0) {
            return Err(Error::invalid("axis", "log range endpoints must be positive"));
        }
        Self::new(param, spaced(start, end, n, f64::ln, f64::exp)?)
    }
}

fn spaced(start: f64, end: f64, n: usize, fwd: fn(f64) -> f64, inv: fn(f64) -> f64) -> Result<Vec<f64>> {
    if n == 0 || !start.is_finite() || !end.is_finite() {
        return Err(Error::invalid("axis", "range needs finite endpoints and n ≥ 1"));
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (fwd(start), fwd(end));
    Ok((0..n)
        .map(|k| match k {
            0 => start,
            k if k == n - 1 => end,
            k => inv(a + (b - a) * k as f64 / (n - 1) as f64),
        })
        .collect())
}

/// What each grid point evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Coherence,
    Qfi,
    GammaT,
    NonMarkovianity,
    TwoQubitResources,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Coherence,
        Quantity::Qfi,
        Quantity::GammaT,
        Quantity::NonMarkovianity,
        Quantity::TwoQubitResources,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Coherence => "coherence",
            Quantity::Qfi => "qfi",
            Quantity::GammaT => "gamma_t",
            Quantity::NonMarkovianity => "non_markovianity",
            Quantity::TwoQubitResources => "two_qubit_resources",
        }
    }

    /// Names of the values each row carries, in order.
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            Quantity::Coherence => &["lifetime", "final_coherence"],
            Quantity::Qfi => &["lifetime", "final_qfi"],
            Quantity::GammaT => &["min_gamma", "late_mean_gamma"],
            Quantity::NonMarkovianity => &["N", "truncation_time", "tail_bound"],
            Quantity::TwoQubitResources => &["lifetime_concurrence", "lifetime_discord", "lifetime_zeta2"],
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::invalid("quantity", format!("unknown quantity `{s}`")))
    }
}

/// Values shared by every grid point unless an axis overrides them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub lambda: f64,
    pub delta: f64,
    pub omega: f64,
    pub kind: EwlKind,
    pub r: f64,
    pub mu: Complex64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams {
            lambda: 1.0,
            delta: 0.0,
            omega: 0.0,
            kind: EwlKind::Psi,
            r: 1.0,
            mu: Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub fixed: FixedParams,
    pub quantity: Quantity,
    pub t_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub epsilon: f64,
    pub horizon: HorizonMode,
}

impl SweepSpec {
    pub fn new(axes: Vec<Axis>, fixed: FixedParams, quantity: Quantity, t_max: f64) -> Self {
        SweepSpec {
            axes,
            fixed,
            quantity,
            t_max,
            rel_tol: crate::dynamics::DEFAULT_TOL,
            abs_tol: crate::dynamics::DEFAULT_TOL,
            epsilon: DEFAULT_LIFETIME_EPSILON,
            horizon: HorizonMode::Capped,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::invalid("axes", "a sweep needs at least one axis"));
        }
        for (i, a) in self.axes.iter().enumerate() {
            if a.values.is_empty() {
                return Err(Error::invalid("axis", format!("`{}` has no values", a.param.name())));
            }
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(Error::invalid("axis", format!("`{}` appears twice", a.param.name())));
            }
        }
        if !(self.t_max > 0.0) {
            return Err(Error::invalid("t_max", format!("must be positive, got {}", self.t_max)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon", format!("must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of grid point `index`; the last axis varies fastest.
    pub fn point(&self, mut index: usize) -> Vec<(SweepParam, f64)> {
        let mut out = vec![(SweepParam::Lambda, 0.0); self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let n = axis.values.len();
            *slot = (axis.param, axis.values[index % n]);
            index /= n;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub point: Vec<(SweepParam, f64)>,
    /// One value per [`Quantity::columns`] entry, or the failure message.
    pub outcome: std::result::Result<Vec<f64>, String>,
}

/// Evaluates every grid point concurrently; per-point failures are kept in
/// their row. Rows are ordered by grid index.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok((0..spec.len())
        .into_par_iter()
        .map(|index| {
            let point = spec.point(index);
            let outcome = evaluate_point(spec, &point).map_err(|e| e.to_string());
            SweepRow { index, point, outcome }
        })
        .collect())
}

/// Evaluates a single grid point.
pub fn evaluate_point(spec: &SweepSpec, point: &[(SweepParam, f64)]) -> Result<Vec<f64>> {
    let mut p = spec.fixed;
    let mut ratio = None;
    for &(param, v) in point {
        match param {
            SweepParam::Lambda => p.lambda = v,
            SweepParam::Delta => p.delta = v,
            SweepParam::Omega => p.omega = v,
            SweepParam::DeltaOverOmega => ratio = Some(v),
            SweepParam::R => p.r = v,
        }
    }
    if let Some(k) = ratio {
        p.delta = k * p.omega;
    }
    let params = QubitCavityParams::new(p.lambda)?;
    let drive = ModulationDrive::new(p.delta, p.omega)?;
    let config = SolverConfig::for_problem(&params, &drive, spec.t_max).with_tolerances(spec.rel_tol, spec.abs_tol);

    if spec.quantity == Quantity::NonMarkovianity {
        let nm = non_markovianity(&params, &drive, &config, spec.horizon)?;
        return Ok(vec![nm.value, nm.truncation_time, nm.tail_bound]);
    }
    let traj = solve(&params, &drive, &config)?;
    let times = traj.times();
    let values = match spec.quantity {
        Quantity::Coherence => {
            let z = coherence(&traj);
            vec![lifetime(times, &z, spec.epsilon)?.as_f64(), z[z.len() - 1]]
        }
        Quantity::Qfi => {
            let f = qfi(&traj);
            vec![lifetime(times, &f, spec.epsilon)?.as_f64(), f[f.len() - 1]]
        }
        Quantity::GammaT => {
            let min_gamma = traj
                .amplitudes()
                .iter()
                .zip(traj.derivatives())
                .filter_map(|(c, dc)| rates_from(*c, *dc, DEFAULT_GUARD).map(|r| r.0))
                .fold(f64::INFINITY, f64::min);
            vec![min_gamma, late_mean_decay_rate(&traj.magnitudes(), times, 0.1)?]
        }
        Quantity::TwoQubitResources => {
            let ewl = EwlParams::new(p.kind, p.r, p.mu)?;
            let series = resource_time_series(&ewl, &traj)?;
            let col = |f: fn(&crate::two_qubit::TwoQubitSample) -> f64| series.iter().map(f).collect::<Vec<_>>();
            vec![
                lifetime(times, &col(|s| s.concurrence), spec.epsilon)?.as_f64(),
                lifetime(times, &col(|s| s.discord), spec.epsilon)?.as_f64(),
                lifetime(times, &col(|s| s.zeta2), spec.epsilon)?.as_f64(),
            ]
        }
        Quantity::NonMarkovianity => unreachable!("handled above"),
    };
    Ok(values)
}

/// Mean of `Γ(t)` over the final `fraction` of the series. Since
/// `Γ = -2 d ln|C|/dt` the mean is `(2/Δt) ln(|C(t₁)|/|C(t₂)|)`.
pub fn late_mean_decay_rate(magnitudes: &[f64], times: &[f64], fraction: f64) -> Result<f64> {
    if times.is_empty() || times.len() != magnitudes.len() {
        return Err(Error::EmptySeries);
    }
    let t_end = times[times.len() - 1];
    let t_start = t_end - fraction * (t_end - times[0]);
    let k = times.partition_point(|t| *t < t_start);
    if k + 1 >= times.len() {
        return Err(Error::invalid("fraction", "window contains fewer than two samples"));
    }
    let (a, b) = (magnitudes[k], magnitudes[magnitudes.len() - 1]);
    Ok(2.0 * (a / b).ln() / (t_end - times[k]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifetime_examples() {
        let t = [0.0, 1.0, 2.0, 3.0];
        assert!(lifetime(&t, &[0.5; 4], 0.01).unwrap().is_beyond_horizon());
        let r = lifetime(&t, &[1.0, 0.5, 0.0, 0.0], 0.25).unwrap();
        assert_eq!(r.time(), Some(1.5));
        assert_eq!(r.horizon, 3.0);
        // Revival above the threshold moves the lifetime to the last crossing.
        let r = lifetime(&t, &[1.0, 0.0, 0.5, 0.0], 0.25).unwrap();
        assert_eq!(r.time(), Some(2.5));
        assert_eq!(lifetime(&t, &[0.0; 4], 0.25).unwrap().time(), Some(0.0));
        assert!(matches!(lifetime(&[], &[], 0.1), Err(Error::EmptySeries)));
        assert!(lifetime(&t, &[1.0; 4], 0.0).is_err());
        assert!(lifetime(&[0.0, 0.0], &[1.0, 1.0], 0.1).is_err());
    }

    #[test]
    fn spaced_axes() {
        let a = Axis::log(SweepParam::Omega, 0.01, 100.0, 5).unwrap();
        let expect = [0.01, 0.1, 1.0, 10.0, 100.0];
        for (x, e) in a.values.iter().zip(expect) {
            assert!((x / e - 1.0).abs() < 1e-14);
        }
        assert_eq!(a.values[4], 100.0);
        let l = Axis::linear(SweepParam::R, 0.0, 1.0, 3).unwrap();
        assert_eq!(l.values, vec![0.0, 0.5, 1.0]);
        assert!(Axis::log(SweepParam::Omega, 0.0, 1.0, 3).is_err());
        assert!(Axis::new(SweepParam::R, vec![]).is_err());
    }

    #[test]
    fn grid_indexing_last_axis_fastest() {
        let spec = SweepSpec::new(
            vec![
                Axis::new(SweepParam::Lambda, vec![1.0, 2.0]).unwrap(),
                Axis::new(SweepParam::Omega, vec![5.0, 6.0, 7.0]).unwrap(),
            ],
            FixedParams::default(),
            Quantity::Coherence,
            10.0,
        );
        assert_eq!(spec.len(), 6);
        assert_eq!(spec.point(0), vec![(SweepParam::Lambda, 1.0), (SweepParam::Omega, 5.0)]);
        assert_eq!(spec.point(4), vec![(SweepParam::Lambda, 2.0), (SweepParam::Omega, 6.0)]);
    }

    #[test]
    fn late_mean_rate_of_pure_exponential() {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
        let mags: Vec<f64> = times.iter().map(|t| (-0.35 * t).exp()).collect();
        let g = late_mean_decay_rate(&mags, &times, 0.2).unwrap();
        assert!((g - 0.7).abs() < 1e-12);
    }

    #[test]
    fn nm_curve_rejects_bad_grids() {
        let params = QubitCavityParams::new(3.0).unwrap();
        let cfg = SolverConfig::for_problem(&params, &ModulationDrive::OFF, 100.0);
        assert!(nm_curve(&params, DeltaRule::Fixed(1.0), &[1.0, 0.5], &cfg, HorizonMode::Auto).is_err());
        assert!(nm_curve(&params, DeltaRule::Fixed(1.0), &[0.0, 0.5], &cfg, HorizonMode::Auto).is_err());
    }
}
