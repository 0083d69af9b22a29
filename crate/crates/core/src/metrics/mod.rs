//! Single-qubit resources derived from an [`AmplitudeTrajectory`].

mod non_markovianity;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{Error, Result};

pub use non_markovianity::{
    non_markovianity, HorizonMode, NonMarkovianityResult, NM_TRUNCATION_AMPLITUDE,
};

/// Amplitudes below this are treated as zeros of `C_e` when forming `Ċ/C`.
pub const DEFAULT_GUARD: f64 = 1e-8;

/// Initial qubit state `α|e⟩ + β|g⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSuperposition {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl InitialSuperposition {
    /// `(|e⟩ + |g⟩)/√2`, the state used for coherence, QFI and N.
    pub const PLUS: InitialSuperposition = InitialSuperposition {
        alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
        beta: Complex64::new(FRAC_1_SQRT_2, 0.0),
    };

    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let s = InitialSuperposition { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 || !norm.is_finite() {
            return Err(Error::Normalization {
                what: "|alpha|^2 + |beta|^2",
                norm,
            });
        }
        Ok(())
    }
}

/// 2×2 qubit density matrix in the `{|e⟩, |g⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix(pub [[Complex64; 2]; 2]);

impl QubitDensityMatrix {
    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let m = &self.0;
        m[0][0].im.abs() <= tol
            && m[1][1].im.abs() <= tol
            && (m[0][1] - m[1][0].conj()).norm() <= tol
    }

    /// Eigenvalues in ascending order (real part of a Hermitian matrix).
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (a, d) = (self.0[0][0].re, self.0[1][1].re);
        let b = self.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - r, mean + r]
    }

    /// l1-norm coherence, the sum of off-diagonal magnitudes.
    pub fn l1_coherence(&self) -> f64 {
        self.0[0][1].norm() + self.0[1][0].norm()
    }
}

/// Reduced qubit state at time `t` (interpolated between samples).
pub fn density_matrix(
    traj: &AmplitudeTrajectory,
    init: &InitialSuperposition,
    t: f64,
) -> Result<QubitDensityMatrix> {
    init.validate()?;
    let c = traj.amplitude_at(t)?;
    Ok(density_matrix_from_amplitude(init, c))
}

pub fn density_matrix_from_amplitude(init: &InitialSuperposition, c: Complex64) -> QubitDensityMatrix {
    let pe = init.alpha.norm_sqr() * c.norm_sqr();
    let off = init.alpha * init.beta.conj() * c;
    QubitDensityMatrix([
        [Complex64::new(pe, 0.0), off],
        [off.conj(), Complex64::new(1.0 - pe, 0.0)],
    ])
}

/// `ζ(t) = |C_e(t)|` for the equal superposition.
pub fn coherence(traj: &AmplitudeTrajectory) -> Vec<f64> {
    traj.magnitudes()
}

/// Quantum Fisher information for phase estimation, `F_φ = |C_e|²`.
pub fn qfi(traj: &AmplitudeTrajectory) -> Vec<f64> {
    coherence(traj).into_iter().map(|z| z * z).collect()
}

/// Cramér–Rao bound `δφ_min = 1/√F_φ`; `+∞` where the amplitude vanishes.
pub fn phase_error(traj: &AmplitudeTrajectory) -> Vec<f64> {
    qfi(traj)
        .into_iter()
        .map(|f| if f > 0.0 { 1.0 / f.sqrt() } else { f64::INFINITY })
        .collect()
}

/// Time-local decay rate `Γ(t)` and Lamb shift `Ω(t)` of the master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRateSeries {
    pub times: Vec<f64>,
    /// `Γ(t) = -2 Re(Ċ/C)`; NaN where masked.
    pub gamma_t: Vec<f64>,
    /// `Ω(t) = -2 Im(Ċ/C)`; NaN where masked.
    pub lamb_shift: Vec<f64>,
    /// `false` where `|C_e| <= guard`.
    pub valid: Vec<bool>,
}

/// `(Γ, Ω)` from an amplitude and its derivative, or `None` below the guard.
#[inline]
pub fn rates_from(c: Complex64, dc: Complex64, guard: f64) -> Option<(f64, f64)> {
    if c.norm() <= guard {
        return None;
    }
    let ratio = dc / c;
    Some((-2.0 * ratio.re, -2.0 * ratio.im))
}

pub fn decay_rate(traj: &AmplitudeTrajectory, guard: f64) -> DecayRateSeries {
    let n = traj.len();
    let mut out = DecayRateSeries {
        times: traj.times().to_vec(),
        gamma_t: Vec::with_capacity(n),
        lamb_shift: Vec::with_capacity(n),
        valid: Vec::with_capacity(n),
    };
    for (c, dc) in traj.amplitudes().iter().zip(traj.derivatives()) {
        match rates_from(*c, *dc, guard) {
            Some((g, w)) => {
                out.gamma_t.push(g);
                out.lamb_shift.push(w);
                out.valid.push(true);
            }
            None => {
                out.gamma_t.push(f64::NAN);
                out.lamb_shift.push(f64::NAN);
                out.valid.push(false);
            }
        }
    }
    out
}
