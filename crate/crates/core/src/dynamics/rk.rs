//! Dormand–Prince 5(4) stepper for the two-component complex state, with
//! Hairer's continuous extension for dense output.

use num_complex::Complex64;

use super::{SolverConfig, State};
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_max: f64,
    /// Abort when the step falls below `h_max * min_step_ratio`.
    pub min_step_ratio: f64,
}

impl StepControl {
    pub fn from_config(cfg: &SolverConfig) -> Self {
        StepControl {
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            h_max: cfg.dt_max,
            min_step_ratio: 1e-9,
        }
    }
}

/// One accepted step with enough data to interpolate inside it.
#[derive(Debug, Clone, Copy)]
pub struct AcceptedStep {
    pub t0: f64,
    pub t1: f64,
    pub y0: State,
    pub y1: State,
    /// Right-hand side at `t0` and `t1`.
    pub f0: State,
    pub f1: State,
    cont: [State; 5],
}

impl AcceptedStep {
    /// Fourth-order continuous extension; exact at both endpoints.
    pub fn interpolate(&self, t: f64) -> State {
        let h = self.t1 - self.t0;
        let s = if h > 0.0 { (t - self.t0) / h } else { 0.0 };
        let s1 = 1.0 - s;
        let r = &self.cont;
        std::array::from_fn(|i| {
            r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])))
        })
    }
}

/// Adaptive integrator driven step by step through [`DormandPrince::next_step`].
pub struct DormandPrince<F> {
    rhs: F,
    t: f64,
    y: State,
    f: State,
    t_end: f64,
    h: f64,
    control: StepControl,
    last_err: f64,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in terms {
            acc += *c * k[i];
        }
        y[i] + h * acc
    })
}

impl<F> DormandPrince<F>
where
    F: FnMut(f64, &State) -> State,
{
    pub fn new(mut rhs: F, t0: f64, y0: State, t_end: f64, control: StepControl) -> Self {
        let f0 = rhs(t0, &y0);
        let h = initial_step(&mut rhs, t0, &y0, &f0, &control).min(t_end - t0);
        DormandPrince {
            rhs,
            t: t0,
            y: y0,
            f: f0,
            t_end,
            h,
            control,
            last_err: 1e-4,
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &State {
        &self.y
    }

    /// Advances by one accepted step; `Ok(None)` once `t_end` is reached.
    pub fn next_step(&mut self) -> Result<Option<AcceptedStep>> {
        if self.t >= self.t_end {
            return Ok(None);
        }
        let ctl = self.control;
        let floor = ctl.h_max * ctl.min_step_ratio;
        loop {
            let remaining = self.t_end - self.t;
            let mut h = self.h.min(ctl.h_max);
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            if h < floor && !last {
                return Err(Error::StepSizeUnderflow {
                    t: self.t,
                    step: h,
                    floor,
                });
            }

            let (t, y, k1) = (self.t, self.y, self.f);
            let rhs = &mut self.rhs;
            let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(
                t + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y1 = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t1 = if last { self.t_end } else { t + h };
            let k7 = rhs(t1, &y1);

            let mut sum = 0.0;
            for i in 0..2 {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = ctl.abs_tol + ctl.rel_tol * y[i].norm().max(y1[i].norm());
                sum += (e.re / sc).powi(2) + (e.im / sc).powi(2);
            }
            let err = (sum / 4.0).sqrt();
            if !err.is_finite() {
                self.h = h * 0.1;
                continue;
            }

            if err <= 1.0 {
                // PI controller (Hairer & Wanner, beta = 0.04).
                let fac = 0.9 * err.max(1e-10).powf(-0.2 + 0.75 * 0.04)
                    * self.last_err.powf(0.04);
                self.last_err = err.max(1e-4);
                self.h = h * fac.clamp(0.2, 10.0);

                let cont = [
                    y,
                    std::array::from_fn(|i| y1[i] - y[i]),
                    std::array::from_fn(|i| h * k1[i] - (y1[i] - y[i])),
                    std::array::from_fn(|i| (y1[i] - y[i]) - h * k7[i] - (h * k1[i] - (y1[i] - y[i]))),
                    std::array::from_fn(|i| {
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ];
                let step = AcceptedStep {
                    t0: t,
                    t1,
                    y0: y,
                    y1,
                    f0: k1,
                    f1: k7,
                    cont,
                };
                self.t = t1;
                self.y = y1;
                self.f = k7;
                return Ok(Some(step));
            }
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            self.h = h * fac;
        }
    }
}

fn initial_step<F>(rhs: &mut F, t0: f64, y0: &State, f0: &State, ctl: &StepControl) -> f64
where
    F: FnMut(f64, &State) -> State,
{
    let scale = |i: usize| ctl.abs_tol + ctl.rel_tol * y0[i].norm();
    let norm = |v: &State| {
        ((0..2)
            .map(|i| (v[i].norm() / scale(i)).powi(2))
            .sum::<f64>()
            / 2.0)
            .sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
    .min(ctl.h_max);
    let y1: State = std::array::from_fn(|i| y0[i] + h0 * f0[i]);
    let f1 = rhs(t0 + h0, &y1);
    let diff: State = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(ctl.h_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn control(tol: f64) -> StepControl {
        StepControl {
            rel_tol: tol,
            abs_tol: tol,
            h_max: 0.5,
            min_step_ratio: 1e-9,
        }
    }

    #[test]
    fn harmonic_oscillator_and_dense_output() {
        // y0' = i y0 -> e^{it}; y1' = -y1 -> e^{-t}.
        let rhs = |_t: f64, y: &State| [Complex64::i() * y[0], -y[1]];
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut dp = DormandPrince::new(rhs, 0.0, y0, 10.0, control(1e-10));
        let mut steps = 0;
        while let Some(step) = dp.next_step().unwrap() {
            steps += 1;
            for j in 0..=4 {
                let t = step.t0 + (step.t1 - step.t0) * j as f64 / 4.0;
                let y = step.interpolate(t);
                assert!((y[0] - Complex64::from_polar(1.0, t)).norm() < 1e-8);
                assert!((y[1].re - (-t).exp()).abs() < 1e-8);
            }
        }
        assert_eq!(dp.time(), 10.0);
        assert!((dp.state()[0] - Complex64::from_polar(1.0, 10.0)).norm() < 1e-8);
        assert!(steps > 20);
    }

    #[test]
    fn underflow_is_reported() {
        // Finite-time blow-up forces the step to collapse.
        let rhs = |_t: f64, y: &State| [y[0] * y[0], Complex64::new(0.0, 0.0)];
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let mut dp = DormandPrince::new(rhs, 0.0, y0, 2.0, control(1e-10));
        let res = loop {
            match dp.next_step() {
                Ok(Some(_)) => continue,
                other => break other,
            }
        };
        assert!(matches!(res, Err(Error::StepSizeUnderflow { .. })), "{res:?}");
    }
}
