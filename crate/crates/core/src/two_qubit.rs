//! Two independent qubits, each in its own cavity, prepared in an extended
//! Werner-like state. The joint state keeps an X shape under independent
//! amplitude-damping channels, so all quantifiers have closed forms.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Rounding slack for populations, traces and positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Which Bell-like pure part the Werner-like state mixes with noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EwlKind {
    /// `μ|ee⟩ + ν|gg⟩`
    Psi,
    /// `μ|eg⟩ + ν|ge⟩`
    Phi,
}

impl EwlKind {
    pub fn name(&self) -> &'static str {
        match self {
            EwlKind::Psi => "psi",
            EwlKind::Phi => "phi",
        }
    }
}

impl std::str::FromStr for EwlKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psi" => Ok(EwlKind::Psi),
            "phi" => Ok(EwlKind::Phi),
            other => Err(Error::invalid("kind", format!("`{other}` is not psi or phi"))),
        }
    }
}

/// `ρ(0) = r |Ψ⟩⟨Ψ| + (1 − r) I/4` (or the same with `|Φ⟩`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwlParams {
    pub kind: EwlKind,
    pub r: f64,
    pub mu: Complex64,
    pub nu: Complex64,
}

impl EwlParams {
    /// `ν` is taken real and non-negative.
    pub fn new(kind: EwlKind, r: f64, mu: Complex64) -> Result<Self> {
        let nu2 = 1.0 - mu.norm_sqr();
        if nu2 < -1e-12 {
            return Err(Error::Normalization {
                what: "|mu|^2",
                norm: mu.norm_sqr(),
            });
        }
        let p = EwlParams {
            kind,
            r,
            mu,
            nu: Complex64::new(nu2.max(0.0).sqrt(), 0.0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_nu(kind: EwlKind, r: f64, mu: Complex64, nu: Complex64) -> Result<Self> {
        let p = EwlParams { kind, r, mu, nu };
        p.validate()?;
        Ok(p)
    }

    /// `r = 1`, `μ = ν = 1/√2`.
    pub fn bell(kind: EwlKind) -> Self {
        EwlParams {
            kind,
            r: 1.0,
            mu: Complex64::new(FRAC_1_SQRT_2, 0.0),
            nu: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::invalid("r", format!("must lie in [0, 1], got {}", self.r)));
        }
        let norm = self.mu.norm_sqr() + self.nu.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 || !norm.is_finite() {
            return Err(Error::Normalization {
                what: "|mu|^2 + |nu|^2",
                norm,
            });
        }
        Ok(())
    }
}

/// Two-qubit X state in the basis `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub populations: [f64; 4],
    pub coherence_14: Complex64,
    pub coherence_23: Complex64,
}

impl XState {
    pub fn new(populations: [f64; 4], coherence_14: Complex64, coherence_23: Complex64) -> Result<Self> {
        let s = XState {
            populations,
            coherence_14,
            coherence_23,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.populations;
        if let Some(x) = p.iter().find(|x| !(**x >= -STATE_TOL)) {
            return Err(Error::InvalidState(format!("negative population {x}")));
        }
        let trace: f64 = p.iter().sum();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        if self.coherence_14.norm_sqr() > p[0] * p[3] + STATE_TOL {
            return Err(Error::InvalidState("|rho_14|^2 > rho_11 rho_44".into()));
        }
        if self.coherence_23.norm_sqr() > p[1] * p[2] + STATE_TOL {
            return Err(Error::InvalidState("|rho_23|^2 > rho_22 rho_33".into()));
        }
        Ok(())
    }

    /// Dense 4×4 matrix.
    pub fn to_matrix(&self) -> [[Complex64; 4]; 4] {
        let mut m = [[ZERO; 4]; 4];
        for (i, p) in self.populations.iter().enumerate() {
            m[i][i] = Complex64::new(*p, 0.0);
        }
        m[0][3] = self.coherence_14;
        m[3][0] = self.coherence_14.conj();
        m[1][2] = self.coherence_23;
        m[2][1] = self.coherence_23.conj();
        m
    }

    /// Eigenvalues from the two 2×2 blocks `{1,4}` and `{2,3}`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let p = &self.populations;
        let block = |a: f64, d: f64, off: Complex64| {
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
            (mean + r, mean - r)
        };
        let (a, b) = block(p[0], p[3], self.coherence_14);
        let (c, d) = block(p[1], p[2], self.coherence_23);
        [a, b, c, d]
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.populations.iter().map(|p| p * p).sum::<f64>()
            + 2.0 * (self.coherence_14.norm_sqr() + self.coherence_23.norm_sqr())
    }
}

pub fn ewl_initial(params: &EwlParams) -> Result<XState> {
    params.validate()?;
    let r = params.r;
    let noise = 0.25 * (1.0 - r);
    let hi = r * params.mu.norm_sqr() + noise;
    let lo = r * params.nu.norm_sqr() + noise;
    let coh = r * params.mu * params.nu.conj();
    let state = match params.kind {
        EwlKind::Psi => XState {
            populations: [hi, noise, noise, lo],
            coherence_14: coh,
            coherence_23: ZERO,
        },
        EwlKind::Phi => XState {
            populations: [noise, hi, lo, noise],
            coherence_14: ZERO,
            coherence_23: coh,
        },
    };
    Ok(state)
}

/// Applies independent amplitude channels with amplitudes `c_a`, `c_b`
/// (Kraus operators `diag(c, 1)` and `√(1−|c|²) |g⟩⟨e|` on each qubit).
pub fn propagate_x_state(initial: &XState, c_a: Complex64, c_b: Complex64) -> Result<XState> {
    for c in [c_a, c_b] {
        if c.norm() > 1.0 + STATE_TOL || !c.norm().is_finite() {
            return Err(Error::AmplitudeTooLarge(c.norm()));
        }
    }
    let a = c_a.norm_sqr().min(1.0);
    let b = c_b.norm_sqr().min(1.0);
    let p = &initial.populations;
    let p1 = p[0] * a * b;
    let p2 = p[1] * a + p[0] * a * (1.0 - b);
    let p3 = p[2] * b + p[0] * b * (1.0 - a);
    let p4 = p[3] + p[1] * (1.0 - a) + p[2] * (1.0 - b) + p[0] * (1.0 - a) * (1.0 - b);
    Ok(XState {
        populations: [p1, p2, p3, p4],
        coherence_14: initial.coherence_14 * c_a * c_b,
        coherence_23: initial.coherence_23 * c_a * c_b.conj(),
    })
}

/// Wootters concurrence of an X state.
pub fn concurrence(state: &XState) -> f64 {
    let p = &state.populations;
    let l1 = state.coherence_14.norm() - (p[1].max(0.0) * p[2].max(0.0)).sqrt();
    let l2 = state.coherence_23.norm() - (p[0].max(0.0) * p[3].max(0.0)).sqrt();
    clamp_small(2.0 * l1.max(l2))
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    -xlog2x(x) - xlog2x(1.0 - x)
}

/// `x log₂ x` with `0 log 0 = 0`; tiny negative rounding treated as 0.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Quantum discord (measurement on qubit B, log base 2) from the X-state
/// closed form: the minimum of the `σ_x`- and `σ_z`-measurement branches.
pub fn discord(state: &XState) -> f64 {
    let p = &state.populations;
    let hb = binary_entropy(p[0] + p[2]);
    let neg_entropy: f64 = state.eigenvalues().iter().map(|l| xlog2x(*l)).sum();
    let z = p[0] + p[1] - p[2] - p[3];
    let off = state.coherence_14.norm() + state.coherence_23.norm();
    let tau = 0.5 * (1.0 + (z * z + 4.0 * off * off).sqrt());
    let d1 = binary_entropy(tau);
    let d2 = -hb - p.iter().map(|x| xlog2x(*x)).sum::<f64>();
    let base = hb + neg_entropy;
    clamp_small((base + d1).min(base + d2))
}

/// l1-norm coherence in the computational basis.
pub fn coherence_l1_two(state: &XState) -> f64 {
    2.0 * (state.coherence_14.norm() + state.coherence_23.norm())
}

/// Negative values are rounding artefacts and map to zero; anything below
/// `-STATE_TOL` is logged because it signals an unphysical input.
fn clamp_small(x: f64) -> f64 {
    if x >= 0.0 {
        return x;
    }
    if x < -STATE_TOL {
        log::warn!("clamping negative resource value {x:e}");
    }
    0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitSample {
    pub t: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub zeta2: f64,
}

/// Resources along a trajectory shared by two identical subsystems.
pub fn resource_time_series(ewl: &EwlParams, traj: &AmplitudeTrajectory) -> Result<Vec<TwoQubitSample>> {
    let init = ewl_initial(ewl)?;
    traj.times()
        .iter()
        .zip(traj.amplitudes())
        .map(|(t, c)| {
            let s = propagate_x_state(&init, *c, *c)?;
            Ok(TwoQubitSample {
                t: *t,
                concurrence: concurrence(&s),
                discord: discord(&s),
                zeta2: coherence_l1_two(&s),
            })
        })
        .collect()
}
