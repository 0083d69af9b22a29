//! Excited-state amplitude of a frequency-modulated qubit in a Lorentzian
//! cavity.
//!
//! All rates are in units of the spontaneous-emission rate `γ` and all
//! times are the scaled time `γt`. The single-excitation sector reduces to
//! one integro-differential equation for `C_e(t)`; with a Lorentzian kernel
//! it is equivalent to a two-variable linear ODE, which is what the
//! production backend integrates. A direct quadrature of the memory integral
//! and the undriven closed form serve as oracles.

mod closed_form;
mod rk;
mod trajectory;
mod volterra;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use closed_form::{closed_form_no_drive, closed_form_no_drive_derivative};
pub use rk::{AcceptedStep, DormandPrince, StepControl};
pub use trajectory::AmplitudeTrajectory;
pub use volterra::solve_amplitude_volterra;

/// Qubit/cavity rates. `gamma` is the unit of all rates and stays at 1
/// unless a caller deliberately rescales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitCavityParams {
    pub gamma: f64,
    pub lambda: f64,
    /// Qubit transition frequency, only used for the adiabatic-regime check.
    pub omega0: Option<f64>,
}

impl QubitCavityParams {
    pub fn new(lambda: f64) -> Result<Self> {
        let p = QubitCavityParams {
            gamma: 1.0,
            lambda,
            omega0: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_omega0(mut self, omega0: f64) -> Result<Self> {
        self.omega0 = Some(omega0);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("gamma", self.gamma)?;
        positive("lambda", self.lambda)?;
        if let Some(w0) = self.omega0 {
            positive("omega0", w0)?;
        }
        Ok(())
    }

    pub fn is_strong_coupling(&self) -> bool {
        self.lambda < self.gamma
    }

    pub fn is_weak_coupling(&self) -> bool {
        self.lambda > self.gamma
    }

    /// Kernel prefactor `γλ/2`.
    fn kernel_scale(&self) -> f64 {
        0.5 * self.gamma * self.lambda
    }
}

/// Sinusoidal modulation `δ cos(Ωt)` of the qubit frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationDrive {
    pub delta: f64,
    pub omega_m: f64,
}

impl ModulationDrive {
    pub const OFF: ModulationDrive = ModulationDrive {
        delta: 0.0,
        omega_m: 0.0,
    };

    pub fn new(delta: f64, omega_m: f64) -> Result<Self> {
        let d = ModulationDrive { delta, omega_m };
        d.validate()?;
        Ok(d)
    }

    /// Drive with `δ = j_{n,1} Ω`, i.e. sitting on the first zero of `J_n`.
    pub fn bessel_zero(order: u32, omega_m: f64) -> Result<Self> {
        let delta = crate::bessel::bessel_zero_amplitude(order, omega_m)?;
        Self::new(delta, omega_m)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("delta", self.delta)?;
        non_negative("omega_m", self.omega_m)
    }

    pub fn is_off(&self) -> bool {
        self.delta == 0.0
    }

    /// Accumulated phase `φ(t)`; see [`modulation_phase`].
    pub fn phase(&self, t: f64) -> f64 {
        modulation_phase(self, t)
    }
}

/// Accumulated modulation phase `(δ/Ω) sin(Ωt)`, with the `Ω → 0` limit `δt`.
pub fn modulation_phase(drive: &ModulationDrive, t: f64) -> f64 {
    if drive.delta == 0.0 {
        0.0
    } else if drive.omega_m == 0.0 {
        drive.delta * t
    } else {
        drive.delta / drive.omega_m * (drive.omega_m * t).sin()
    }
}

/// Messages for parameters outside the adiabatic regime `δ/ω₀, Ω/ω₀ ≪ 1`.
///
/// The model stays mathematically well defined there; the messages are
/// logged and returned, never raised.
pub fn adiabatic_warnings(params: &QubitCavityParams, drive: &ModulationDrive) -> Vec<String> {
    const LIMIT: f64 = 0.1;
    let mut out = Vec::new();
    if let Some(w0) = params.omega0 {
        if drive.delta / w0 > LIMIT {
            out.push(format!(
                "delta/omega0 = {:.3} > {LIMIT}: outside the adiabatic regime",
                drive.delta / w0
            ));
        }
        if drive.omega_m / w0 > LIMIT {
            out.push(format!(
                "omega/omega0 = {:.3} > {LIMIT}: outside the adiabatic regime",
                drive.omega_m / w0
            ));
        }
    }
    for w in &out {
        log::warn!("{w}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Adaptive Dormand–Prince on the exact two-variable reduction.
    #[default]
    OdeReduction,
    /// Direct product-trapezoidal quadrature of the memory integral.
    VolterraQuadrature,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::OdeReduction => "ode_reduction",
            Backend::VolterraQuadrature => "volterra_quadrature",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ode" | "ode_reduction" => Ok(Backend::OdeReduction),
            "volterra" | "volterra_quadrature" => Ok(Backend::VolterraQuadrature),
            other => Err(Error::invalid(
                "backend",
                format!("`{other}` is not one of ode_reduction, volterra_quadrature"),
            )),
        }
    }
}

/// Integration settings.
///
/// `dt_max` caps the adaptive step of the ODE backend and is the uniform
/// grid step of the Volterra backend. `sample_every`, when set, resamples
/// the output on a uniform grid through the dense interpolant instead of
/// recording every accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub t_max: f64,
    pub dt_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub backend: Backend,
    pub sample_every: Option<f64>,
}

/// Default tolerance for acceptance-grade runs.
pub const DEFAULT_TOL: f64 = 1e-9;

impl SolverConfig {
    /// Largest step resolving both the kernel decay `1/λ` and the
    /// modulation period `2π/Ω`, with a factor-10 margin.
    pub fn max_step_for(params: &QubitCavityParams, drive: &ModulationDrive) -> f64 {
        let mut scale = 1.0 / params.lambda;
        if drive.omega_m > 0.0 {
            scale = scale.min(std::f64::consts::TAU / drive.omega_m);
        }
        scale / 10.0
    }

    /// Defaults for a given problem: the largest admissible `dt_max` and
    /// tolerances of `1e-9`.
    pub fn for_problem(params: &QubitCavityParams, drive: &ModulationDrive, t_max: f64) -> Self {
        SolverConfig {
            t_max,
            dt_max: Self::max_step_for(params, drive),
            rel_tol: DEFAULT_TOL,
            abs_tol: DEFAULT_TOL,
            backend: Backend::OdeReduction,
            sample_every: None,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_dt_max(mut self, dt_max: f64) -> Self {
        self.dt_max = dt_max;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_sampling(mut self, every: f64) -> Self {
        self.sample_every = Some(every);
        self
    }

    pub fn validate(&self, params: &QubitCavityParams, drive: &ModulationDrive) -> Result<()> {
        positive("t_max", self.t_max)?;
        positive("dt_max", self.dt_max)?;
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        if let Some(every) = self.sample_every {
            positive("sample_every", every)?;
        }
        if self.rel_tol < 1e-14 {
            return Err(Error::ToleranceUnachievable(format!(
                "rel_tol = {:e} is below double precision resolution",
                self.rel_tol
            )));
        }
        let bound = Self::max_step_for(params, drive);
        if self.dt_max > bound * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "dt_max",
                format!(
                    "{} exceeds min(1/lambda, 2pi/omega)/10 = {bound}",
                    self.dt_max
                ),
            ));
        }
        Ok(())
    }
}

/// Right-hand side of the reduced system in `(C_e, B)`:
///
/// ```text
/// dC/dt = -(γλ/2) e^{iφ(t)} B
/// dB/dt = -λ B + e^{-iφ(t)} C
/// ```
///
/// where `B(t) = ∫₀ᵗ e^{-λ(t-s)} e^{-iφ(s)} C(s) ds` carries the memory.
#[derive(Debug, Clone, Copy)]
pub struct ReducedSystem {
    scale: f64,
    lambda: f64,
    drive: ModulationDrive,
}

pub type State = [Complex64; 2];

impl ReducedSystem {
    pub fn new(params: &QubitCavityParams, drive: &ModulationDrive) -> Self {
        ReducedSystem {
            scale: params.kernel_scale(),
            lambda: params.lambda,
            drive: *drive,
        }
    }

    #[inline]
    pub fn rhs(&self, t: f64, y: &State) -> State {
        let (s, c) = modulation_phase(&self.drive, t).sin_cos();
        let rot = Complex64::new(c, s);
        [
            -self.scale * rot * y[1],
            -self.lambda * y[1] + rot.conj() * y[0],
        ]
    }

    pub const INITIAL: State = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];

    /// `√(|C|² + (γλ/2)|B|²)`. Along any solution its square decays as
    /// `-γλ²|B|²`, so it bounds `|C_e|` at every later time.
    pub fn excitation_bound(&self, y: &State) -> f64 {
        (y[0].norm_sqr() + self.scale * y[1].norm_sqr()).sqrt()
    }
}

/// Integrates the reduced ODE and records `C_e` and `dC_e/dt` (taken from
/// the right-hand side) at every accepted step or on the sampling grid.
pub fn solve_amplitude(
    params: &QubitCavityParams,
    drive: &ModulationDrive,
    config: &SolverConfig,
) -> Result<AmplitudeTrajectory> {
    params.validate()?;
    drive.validate()?;
    config.validate(params, drive)?;
    adiabatic_warnings(params, drive);

    let system = ReducedSystem::new(params, drive);
    let mut times = vec![0.0];
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    let mut ders = vec![system.rhs(0.0, &ReducedSystem::INITIAL)[0]];

    let mut next_sample = config.sample_every.map(|every| (1_usize, every));
    let mut stepper = DormandPrince::new(
        |t, y: &State| system.rhs(t, y),
        0.0,
        ReducedSystem::INITIAL,
        config.t_max,
        StepControl::from_config(config),
    );
    while let Some(step) = stepper.next_step()? {
        match next_sample.as_mut() {
            None => {
                times.push(step.t1);
                amps.push(step.y1[0]);
                ders.push(step.f1[0]);
            }
            Some((k, every)) => {
                while *k > 0 {
                    let mut t = *k as f64 * *every;
                    let last = t >= config.t_max - 1e-9 * *every;
                    if last {
                        t = config.t_max;
                    }
                    if t > step.t1 {
                        break;
                    }
                    let y = step.interpolate(t);
                    times.push(t);
                    amps.push(y[0]);
                    ders.push(system.rhs(t, &y)[0]);
                    *k = if last { 0 } else { *k + 1 };
                }
            }
        }
    }
    Ok(AmplitudeTrajectory::new(times, amps, ders, *params, *drive))
}

/// Dispatches on `config.backend`.
pub fn solve(
    params: &QubitCavityParams,
    drive: &ModulationDrive,
    config: &SolverConfig,
) -> Result<AmplitudeTrajectory> {
    match config.backend {
        Backend::OdeReduction => solve_amplitude(params, drive, config),
        Backend::VolterraQuadrature => solve_amplitude_volterra(params, drive, config),
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {v}")))
    }
}
