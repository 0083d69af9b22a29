//! Direct discretisation of the memory equation
//!
//! ```text
//! dC/dt = -(γλ/2) e^{iφ(t)} ∫₀ᵗ e^{-λ(t-s)} e^{-iφ(s)} C(s) ds
//! ```
//!
//! on a uniform grid. The memory integral uses product integration: the
//! exponential factor is integrated exactly against a piecewise-linear
//! interpolant of `e^{-iφ} C`, and `C` is marched with the trapezoidal rule
//! (implicit in the newest panel, which is linear and solved exactly). The
//! convolution sum is evaluated directly, so the cost is O(N·W) with `W`
//! the number of panels over which `e^{-λτ}` is above `1e-17`. Results from
//! steps `h` and `h/2` are Richardson-combined.

use num_complex::Complex64;

use super::{
    adiabatic_warnings, modulation_phase, AmplitudeTrajectory, ModulationDrive, QubitCavityParams,
    SolverConfig,
};
use crate::error::{Error, Result};

/// Fine-grid point budget.
pub const POINT_BUDGET: usize = 4_000_000;

/// Kernel support cut-off, `e^{-λτ} < e^{-40}`.
const KERNEL_CUTOFF: f64 = 40.0;

/// Upper bound on `h·rate` for the grid to resolve the dynamics.
const STABILITY: f64 = 0.5;

pub fn stability_bound(params: &QubitCavityParams, drive: &ModulationDrive) -> f64 {
    let rate = (0.5 * params.gamma * params.lambda)
        .sqrt()
        .max(drive.delta)
        .max(drive.omega_m)
        .max(params.gamma);
    STABILITY / rate
}

/// Oracle backend: uniform grid with step `config.dt_max`.
pub fn solve_amplitude_volterra(
    params: &QubitCavityParams,
    drive: &ModulationDrive,
    config: &SolverConfig,
) -> Result<AmplitudeTrajectory> {
    params.validate()?;
    drive.validate()?;
    config.validate(params, drive)?;
    adiabatic_warnings(params, drive);

    let h = config.dt_max;
    let bound = stability_bound(params, drive);
    if h > bound {
        return Err(Error::GridTooCoarse { step: h, bound });
    }
    let n = (config.t_max / h).round() as usize;
    if n == 0 || ((n as f64) * h - config.t_max).abs() > 1e-9 * config.t_max {
        return Err(Error::invalid(
            "dt_max",
            format!("t_max = {} is not a multiple of the grid step {h}", config.t_max),
        ));
    }
    if 2 * n > POINT_BUDGET {
        return Err(Error::MemoryBudget {
            points: 2 * n,
            budget: POINT_BUDGET,
        });
    }

    let coarse = march(params, drive, h, n);
    let fine = march(params, drive, 0.5 * h, 2 * n);

    let stride = config
        .sample_every
        .map(|every| ((every / h).round() as usize).max(1))
        .unwrap_or(1);
    let mut times = Vec::with_capacity(n / stride + 2);
    let mut amps = Vec::with_capacity(n / stride + 2);
    let mut ders = Vec::with_capacity(n / stride + 2);
    let mut push = |k: usize| {
        times.push(k as f64 * h);
        amps.push((4.0 * fine.0[2 * k] - coarse.0[k]) / 3.0);
        ders.push((4.0 * fine.1[2 * k] - coarse.1[k]) / 3.0);
    };
    for k in (0..=n).step_by(stride) {
        push(k);
    }
    if !n.is_multiple_of(stride) {
        push(n);
    }
    Ok(AmplitudeTrajectory::new(times, amps, ders, *params, *drive))
}

/// `∫₀¹ e^{-zv} dv` and `∫₀¹ v e^{-zv} dv`.
fn panel_moments(z: f64) -> (f64, f64) {
    if z < 0.1 {
        let (mut e0, mut e1) = (0.0, 0.0);
        let mut term = 1.0; // (-z)^k / k!
        for k in 0..14 {
            e0 += term / (k + 1) as f64;
            e1 += term / (k + 2) as f64;
            term *= -z / (k + 1) as f64;
        }
        (e0, e1)
    } else {
        let em = (-z).exp();
        (-(-z).exp_m1() / z, (-(-z).exp_m1() - z * em) / (z * z))
    }
}

/// Returns `(C_n, dC/dt_n)` for `n = 0..=steps`.
fn march(
    params: &QubitCavityParams,
    drive: &ModulationDrive,
    h: f64,
    steps: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let scale = 0.5 * params.gamma * params.lambda;
    let (e0, e1) = panel_moments(params.lambda * h);
    let w_old = h * e1;
    let w_new = h * (e0 - e1);
    let window = ((KERNEL_CUTOFF / (params.lambda * h)).ceil() as usize).clamp(1, steps + 1);
    let decay: Vec<f64> = (0..=window)
        .map(|k| (-params.lambda * h * k as f64).exp())
        .collect();
    let rot: Vec<Complex64> = (0..=steps)
        .map(|k| Complex64::from_polar(1.0, modulation_phase(drive, k as f64 * h)))
        .collect();

    let mut c = Vec::with_capacity(steps + 1);
    let mut f = Vec::with_capacity(steps + 1);
    let mut g = Vec::with_capacity(steps + 1);
    // panels[j] = integral over [t_j, t_{j+1}] of the kernel's exponential
    // (referenced to t_{j+1}) times the interpolant of g.
    let mut panels: Vec<Complex64> = Vec::with_capacity(steps);

    c.push(Complex64::new(1.0, 0.0));
    f.push(Complex64::new(0.0, 0.0));
    g.push(rot[0].conj());
    let kappa = scale * w_new;
    for m in 0..steps {
        // Memory at t_{m+1} from all complete panels j < m, then the partial
        // contribution of g_m on the newest panel.
        let lo = (m + 1).saturating_sub(window);
        let mut known = Complex64::new(0.0, 0.0);
        for j in lo..m {
            known += decay[m - j] * panels[j];
        }
        known += w_old * g[m];
        let a = -scale * rot[m + 1] * known;
        let next = (c[m] + 0.5 * h * (f[m] + a)) / (1.0 + 0.5 * h * kappa);
        let fn1 = a - kappa * next;
        let gn1 = rot[m + 1].conj() * next;
        panels.push(w_old * g[m] + w_new * gn1);
        c.push(next);
        f.push(fn1);
        g.push(gn1);
    }
    (c, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::closed_form_no_drive;

    #[test]
    fn moments_match_quadrature() {
        for z in [0.0, 1e-6, 0.05, 0.1, 0.5, 3.0, 40.0] {
            let (e0, e1) = panel_moments(z);
            let n = 20000;
            let (mut q0, mut q1) = (0.0, 0.0);
            for i in 0..n {
                let v = (i as f64 + 0.5) / n as f64;
                q0 += (-z * v).exp() / n as f64;
                q1 += v * (-z * v).exp() / n as f64;
            }
            assert!((e0 - q0).abs() < 1e-8 && (e1 - q1).abs() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn starts_at_one_and_tracks_closed_form() {
        let p = QubitCavityParams::new(3.0).unwrap();
        let cfg = SolverConfig::for_problem(&p, &ModulationDrive::OFF, 5.0)
            .with_dt_max(0.01)
            .with_backend(super::super::Backend::VolterraQuadrature);
        let traj = solve_amplitude_volterra(&p, &ModulationDrive::OFF, &cfg).unwrap();
        assert_eq!(traj.amplitudes()[0], Complex64::new(1.0, 0.0));
        for (t, c) in traj.times().iter().zip(traj.amplitudes()) {
            assert!((c - closed_form_no_drive(&p, *t)).norm() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn second_order_before_extrapolation() {
        let p = QubitCavityParams::new(3.0).unwrap();
        let d = ModulationDrive::OFF;
        let err = |h: f64| {
            let n = (2.0 / h).round() as usize;
            let (c, _) = march(&p, &d, h, n);
            (c[n] - closed_form_no_drive(&p, 2.0)).norm()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = QubitCavityParams::new(3.0).unwrap();
        let d = ModulationDrive::new(30.0, 0.5).unwrap();
        let cfg = SolverConfig::for_problem(&p, &d, 5.0).with_dt_max(0.1 / 3.0);
        assert!(matches!(
            solve_amplitude_volterra(&p, &d, &cfg),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
