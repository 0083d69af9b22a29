//! Bessel functions of the first kind for integer order, and the first
//! positive zeros used to place the modulation amplitude.

use crate::error::{Error, Result};

/// First positive zeros `j_{n,1}` of `J_n`, for n = 0..=3.
pub const FIRST_ZEROS: [f64; 4] = [2.40483, 3.83170, 5.13562, 6.38016];

/// Modulation amplitude `δ = j_{n,1} Ω` that nulls the `n`-th Bessel weight.
pub fn bessel_zero_amplitude(order: u32, omega_m: f64) -> Result<f64> {
    let zero = FIRST_ZEROS
        .get(order as usize)
        .ok_or(Error::UnsupportedBesselOrder(order))?;
    if !(omega_m > 0.0) || !omega_m.is_finite() {
        return Err(Error::invalid("omega_m", format!("must be > 0, got {omega_m}")));
    }
    Ok(zero * omega_m)
}

/// `J_n(x)` for integer `n >= 0` and real `x`.
///
/// Uses Miller's backward recurrence normalised by
/// `J_0 + 2 Σ J_{2k} = 1`; accurate to a few ulps for moderate `|x|`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ax = x.abs();
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    // Start well above both n and |x| so the recurrence has settled.
    let start = {
        let m = n.max(ax as u32) as f64;
        let m = m + 20.0 + (40.0 * m).sqrt();
        (m as u32) & !1
    };

    let mut next = 0.0_f64; // J_{k+1}
    let mut cur = 1e-300_f64; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        // cur is now J_{k-1}
        if k - 1 == n {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    sign * wanted / norm
}
