use num_complex::Complex64;

use super::{ModulationDrive, QubitCavityParams};
use crate::error::{Error, Result};

/// Sampled excited-state amplitude `C_e(t)` and its exact derivative.
///
/// Immutable once built; `times` start at 0 and strictly increase.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    times: Vec<f64>,
    amplitudes: Vec<Complex64>,
    derivatives: Vec<Complex64>,
    params: QubitCavityParams,
    drive: ModulationDrive,
}

impl AmplitudeTrajectory {
    pub(crate) fn new(
        times: Vec<f64>,
        amplitudes: Vec<Complex64>,
        derivatives: Vec<Complex64>,
        params: QubitCavityParams,
        drive: ModulationDrive,
    ) -> Self {
        debug_assert_eq!(times.len(), amplitudes.len());
        debug_assert_eq!(times.len(), derivatives.len());
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        AmplitudeTrajectory {
            times,
            amplitudes,
            derivatives,
            params,
            drive,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn derivatives(&self) -> &[Complex64] {
        &self.derivatives
    }

    pub fn params(&self) -> &QubitCavityParams {
        &self.params
    }

    pub fn drive(&self) -> &ModulationDrive {
        &self.drive
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// `C_e(t)` between samples by cubic Hermite interpolation on the
    /// stored values and derivatives.
    pub fn amplitude_at(&self, t: f64) -> Result<Complex64> {
        let (start, end) = (self.times[0], self.t_end());
        if !(t >= start && t <= end) {
            return Err(Error::OutOfRange { t, start, end });
        }
        let k = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => return Ok(self.amplitudes[k]),
            Err(k) => k,
        };
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (y0, y1) = (self.amplitudes[k - 1], self.amplitudes[k]);
        let (d0, d1) = (self.derivatives[k - 1] * h, self.derivatives[k] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        Ok(y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + d1 * (s3 - s2))
    }

    /// `|C_e|` at every sample.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm()).collect()
    }
}
