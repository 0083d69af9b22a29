//! Trace-distance (BLP) non-Markovianity for the amplitude-damping channel.
//!
//! For this channel the optimal initial pair is `(|e⟩ ± |g⟩)/√2`, and the
//! measure reduces to `N = -½ ∫_{Γ<0} Γ(t) |C_e(t)| dt`. The integral is
//! evaluated on the solver's dense output while integrating, so long
//! horizons never materialise a trajectory.

use crate::dynamics::{
    AcceptedStep, DormandPrince, ModulationDrive, QubitCavityParams, ReducedSystem, SolverConfig,
    State, StepControl,
};
use crate::error::{Error, Result};

use super::{rates_from, DEFAULT_GUARD};

/// In automatic mode integration stops once `|C_e|` is guaranteed to stay
/// below this for all later times.
pub const NM_TRUNCATION_AMPLITUDE: f64 = 1e-4;

/// Resolution of the negative-interval endpoints, in `γt`.
const BISECTION_TOL: f64 = 1e-6;

/// Sign probes per accepted step.
const PROBES_PER_STEP: usize = 8;

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorizonMode {
    /// Stop once `|C_e|` can no longer exceed `1e-4` (bounded through
    /// [`ReducedSystem::excitation_bound`]); reaching `t_max` first is an
    /// error.
    Auto,
    /// Integrate exactly to `t_max` regardless of the remaining amplitude.
    Forced,
    /// Stop at the `Auto` criterion or at `t_max`, whichever comes first.
    /// Never fails on a short horizon; `tail_bound` reports what remains.
    Capped,
}

impl HorizonMode {
    pub fn name(&self) -> &'static str {
        match self {
            HorizonMode::Auto => "auto",
            HorizonMode::Forced => "forced",
            HorizonMode::Capped => "capped",
        }
    }
}

impl std::str::FromStr for HorizonMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(HorizonMode::Auto),
            "forced" => Ok(HorizonMode::Forced),
            "capped" => Ok(HorizonMode::Capped),
            other => Err(Error::invalid(
                "horizon",
                format!("`{other}` is not one of auto, forced, capped"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovianityResult {
    pub value: f64,
    /// Disjoint, ordered `(start, end)` intervals where `Γ < 0`.
    pub negative_intervals: Vec<(f64, f64)>,
    /// Time at which integration actually stopped.
    pub truncation_time: f64,
    /// `|C_e|` at the truncation time.
    pub final_amplitude: f64,
    /// Upper bound on `|C_e|` beyond the truncation time.
    pub tail_bound: f64,
}

struct Probe<'a> {
    system: &'a ReducedSystem,
    step: &'a AcceptedStep,
}

impl Probe<'_> {
    fn state(&self, t: f64) -> State {
        if t == self.step.t1 {
            self.step.y1
        } else {
            self.step.interpolate(t)
        }
    }

    /// `(Γ, |C|)` or `None` where masked.
    fn rate(&self, t: f64) -> Option<(f64, f64)> {
        let y = self.state(t);
        let dc = self.system.rhs(t, &y)[0];
        rates_from(y[0], dc, DEFAULT_GUARD).map(|(g, _)| (g, y[0].norm()))
    }

    fn negative(&self, t: f64) -> bool {
        matches!(self.rate(t), Some((g, _)) if g < 0.0)
    }

    /// Boundary between `a` (state `neg_a`) and `b` (the other state).
    fn bisect(&self, mut a: f64, mut b: f64, neg_a: bool) -> f64 {
        for _ in 0..80 {
            if b - a <= BISECTION_TOL {
                break;
            }
            let m = 0.5 * (a + b);
            if self.negative(m) == neg_a {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    /// `-½ ∫ Γ |C| dt` over `[a, b]`, counting only points with `Γ < 0`.
    fn backflow(&self, a: f64, b: f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        GAUSS_NODES
            .iter()
            .zip(GAUSS_WEIGHTS)
            .map(|(x, w)| match self.rate(mid + half * x) {
                Some((g, amp)) if g < 0.0 => -0.5 * w * g * amp,
                _ => 0.0,
            })
            .sum::<f64>()
            * half
    }
}

/// Non-Markovianity `N` for the given drive, integrated up to `config.t_max`.
pub fn non_markovianity(
    params: &QubitCavityParams,
    drive: &ModulationDrive,
    config: &SolverConfig,
    mode: HorizonMode,
) -> Result<NonMarkovianityResult> {
    params.validate()?;
    drive.validate()?;
    config.validate(params, drive)?;

    let system = ReducedSystem::new(params, drive);
    let mut stepper = DormandPrince::new(
        |t, y: &State| system.rhs(t, y),
        0.0,
        ReducedSystem::INITIAL,
        config.t_max,
        StepControl::from_config(config),
    );

    let mut value = 0.0;
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let mut t_stop = 0.0;
    let mut amp_stop = 1.0;
    let mut bound = 1.0;

    while let Some(step) = stepper.next_step()? {
        let probe = Probe {
            system: &system,
            step: &step,
        };
        let h = step.t1 - step.t0;
        let mut left = step.t0;
        let mut neg_left = probe.negative(left);
        for k in 1..=PROBES_PER_STEP {
            let right = if k == PROBES_PER_STEP {
                step.t1
            } else {
                step.t0 + h * k as f64 / PROBES_PER_STEP as f64
            };
            let neg_right = probe.negative(right);
            if neg_left == neg_right {
                if neg_left {
                    value += probe.backflow(left, right);
                }
            } else {
                let cut = probe.bisect(left, right, neg_left);
                if neg_left {
                    value += probe.backflow(left, cut);
                    let start = open.take().unwrap_or(left);
                    intervals.push((start, cut));
                } else {
                    value += probe.backflow(cut, right);
                    open = Some(cut);
                }
            }
            if neg_left == neg_right && neg_left && open.is_none() {
                open = Some(left);
            }
            left = right;
            neg_left = neg_right;
        }

        t_stop = step.t1;
        amp_stop = step.y1[0].norm();
        bound = system.excitation_bound(&step.y1);
        if mode != HorizonMode::Forced && bound < NM_TRUNCATION_AMPLITUDE {
            break;
        }
    }
    if let Some(start) = open {
        intervals.push((start, t_stop));
    }

    if mode == HorizonMode::Auto && bound >= NM_TRUNCATION_AMPLITUDE {
        return Err(Error::HorizonTooShort {
            horizon: config.t_max,
            amplitude: bound,
            target: NM_TRUNCATION_AMPLITUDE,
        });
    }

    Ok(NonMarkovianityResult {
        value: value.max(0.0),
        negative_intervals: intervals,
        truncation_time: t_stop,
        final_amplitude: amp_stop,
        tail_bound: bound,
    })
}
