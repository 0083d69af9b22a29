use num_complex::Complex64;

use super::QubitCavityParams;

/// Relative width of the band around `λ = 2γ` treated as degenerate.
const DEGENERATE_BAND: f64 = 1e-9;

/// Undriven amplitude for the Lorentzian kernel:
/// `C(t) = e^{-λt/2} [cosh(Dt/2) + (λ/D) sinh(Dt/2)]`, `D = √(λ² − 2γλ)`.
///
/// Uses the trigonometric continuation for `λ < 2γ`, the `D → 0` limit at
/// `λ = 2γ`, and splits the exponentials for `λ > 2γ` so large `λt` does not
/// overflow.
pub fn closed_form_no_drive(params: &QubitCavityParams, t: f64) -> Complex64 {
    let (l, g) = (params.lambda, params.gamma);
    let disc = l * l - 2.0 * g * l;
    let value = if disc.abs() <= DEGENERATE_BAND * l * l {
        (-0.5 * l * t).exp() * (1.0 + 0.5 * l * t)
    } else if disc > 0.0 {
        let d = disc.sqrt();
        let slow = (0.5 * (d - l) * t).exp();
        let fast = (-0.5 * (d + l) * t).exp();
        0.5 * (slow + fast) + 0.5 * l / d * (slow - fast)
    } else {
        let w = (-disc).sqrt();
        let x = 0.5 * w * t;
        (-0.5 * l * t).exp() * (x.cos() + l / w * x.sin())
    };
    Complex64::new(value, 0.0)
}

/// Time derivative of [`closed_form_no_drive`]:
/// `dC/dt = -(γλ/D) e^{-λt/2} sinh(Dt/2)`.
pub fn closed_form_no_drive_derivative(params: &QubitCavityParams, t: f64) -> Complex64 {
    let (l, g) = (params.lambda, params.gamma);
    let disc = l * l - 2.0 * g * l;
    let value = if disc.abs() <= DEGENERATE_BAND * l * l {
        -0.5 * g * l * t * (-0.5 * l * t).exp()
    } else if disc > 0.0 {
        let d = disc.sqrt();
        let slow = (0.5 * (d - l) * t).exp();
        let fast = (-0.5 * (d + l) * t).exp();
        -g * l / d * 0.5 * (slow - fast)
    } else {
        let w = (-disc).sqrt();
        -g * l / w * (-0.5 * l * t).exp() * (0.5 * w * t).sin()
    };
    Complex64::new(value, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64) -> QubitCavityParams {
        QubitCavityParams::new(lambda).unwrap()
    }

    #[test]
    fn initial_condition() {
        for l in [0.01, 0.1, 2.0, 3.0, 100.0] {
            assert_eq!(closed_form_no_drive(&params(l), 0.0), Complex64::new(1.0, 0.0));
            assert_eq!(closed_form_no_drive_derivative(&params(l), 0.0).norm(), 0.0);
        }
    }

    #[test]
    fn reference_values() {
        // Independent high-precision evaluation:
        // e^{-1.5}[cosh(√3/2) + √3 sinh(√3/2)] = 0.690295428126207...
        let c = closed_form_no_drive(&params(3.0), 1.0);
        assert!((c.re - 0.690_295_428_126_207_6).abs() < 1e-13);
        assert_eq!(c.im, 0.0);
        // Flat-spectrum limit: |C| -> e^{-γt/2}.
        let c = closed_form_no_drive(&params(100.0), 2.0).re;
        assert!((c - 0.367_884_149_160_797_6).abs() < 1e-13);
        assert!((c / (-1.0f64).exp() - 1.0).abs() < 0.02);
        // Far tail stays finite.
        assert!(closed_form_no_drive(&params(100.0), 5000.0).re.is_finite());
    }

    #[test]
    fn degenerate_point_is_continuous() {
        for t in [0.3, 1.0, 4.0] {
            let at = closed_form_no_drive(&params(2.0), t).re;
            let above = closed_form_no_drive(&params(2.0 + 1e-6), t).re;
            let below = closed_form_no_drive(&params(2.0 - 1e-6), t).re;
            assert!((at - above).abs() < 1e-5 && (at - below).abs() < 1e-5);
            let dat = closed_form_no_drive_derivative(&params(2.0), t).re;
            let dabove = closed_form_no_drive_derivative(&params(2.0 + 1e-6), t).re;
            assert!((dat - dabove).abs() < 1e-5);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for l in [0.01, 0.5, 2.0, 3.0, 100.0] {
            let p = params(l);
            for t in [0.01, 0.7, 3.0, 20.0] {
                let h = 1e-5;
                let fd = (closed_form_no_drive(&p, t + h) - closed_form_no_drive(&p, t - h)) / (2.0 * h);
                let d = closed_form_no_drive_derivative(&p, t);
                assert!((fd - d).norm() < 1e-7, "λ={l} t={t}: {fd} vs {d}");
            }
        }
    }
}
