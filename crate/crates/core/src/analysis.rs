//! Period detection and line fits for time series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest series accepted by [`estimate_period`].
pub const MIN_SERIES: usize = 16;
/// Smallest lag considered a period.
pub const MIN_LAG: usize = 4;
/// Autocorrelation a peak must reach to count as a detection.
pub const DETECTION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    /// Refined period in samples, when detected.
    pub period: Option<f64>,
    /// Autocorrelation at the best candidate lag (0 when there is none).
    pub peak: f64,
}

/// Autocorrelation `r(τ) = Σ (x_t − x̄)(x_{t+τ} − x̄) / Σ (x_t − x̄)²` for `τ = 0..=max_lag`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let energy: f64 = x.iter().map(|v| v * v).sum();
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|lag| {
            if energy == 0.0 {
                return 0.0;
            }
            x[..n - lag].iter().zip(&x[lag..]).map(|(a, b)| a * b).sum::<f64>() / energy
        })
        .collect()
}

/// Period of the dominant oscillation of `series`.
///
/// The autocorrelation is searched for its highest value on lags in
/// `[4, len/2]` past its first local minimum. The peak must be a local
/// maximum strictly inside that range and reach 0.5; its lag is refined by a
/// parabola through the three neighbouring values.
pub fn estimate_period(series: &[f64]) -> Result<PeriodEstimate> {
    if series.len() < MIN_SERIES {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_SERIES,
        });
    }
    let none = PeriodEstimate { period: None, peak: 0.0 };
    let max_lag = series.len() / 2;
    let r = autocorrelation(series, max_lag);
    if r[0] == 0.0 {
        return Ok(none);
    }
    let Some(first_min) = (1..max_lag).find(|&t| r[t] <= r[t - 1] && r[t] < r[t + 1]) else {
        return Ok(none);
    };
    let start = first_min.max(MIN_LAG);
    let mut best = start;
    for t in start..=max_lag {
        if r[t] > r[best] {
            best = t;
        }
    }
    if best == start || best == max_lag || r[best] < r[best - 1] || r[best] < r[best + 1] {
        return Ok(PeriodEstimate { period: None, peak: r[best] });
    }
    if r[best] < DETECTION_THRESHOLD {
        return Ok(PeriodEstimate { period: None, peak: r[best] });
    }
    let (a, b, c) = (r[best - 1], r[best], r[best + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    Ok(PeriodEstimate {
        period: Some(best as f64 + shift.clamp(-0.5, 0.5)),
        peak: b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "linear fit needs two equal-length series of at least 2 points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("linear fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn sinusoid_period() {
        let s: Vec<f64> = (0..1000).map(|t| (TAU * t as f64 / 100.0).sin()).collect();
        let p = estimate_period(&s).unwrap().period.unwrap();
        assert!((p - 100.0).abs() < 0.5, "{p}");
        let s: Vec<f64> = (0..700).map(|t| 3.0 + (TAU * t as f64 / 37.3 + 1.0).cos()).collect();
        let p = estimate_period(&s).unwrap().period.unwrap();
        assert!((p - 37.3).abs() < 0.5, "{p}");
    }

    #[test]
    fn constant_and_monotone_series_are_not_periodic() {
        assert_eq!(estimate_period(&[2.5; 100]).unwrap().period, None);
        let ramp: Vec<f64> = (0..300).map(|t| 0.7 * t as f64).collect();
        assert_eq!(estimate_period(&ramp).unwrap().period, None);
        let sq: Vec<f64> = (0..300).map(|t| (t as f64).sqrt()).collect();
        assert_eq!(estimate_period(&sq).unwrap().period, None);
    }

    #[test]
    fn short_series_error() {
        assert!(matches!(estimate_period(&[1.0; 5]), Err(Error::SeriesTooShort { len: 5, .. })));
    }

    #[test]
    fn fit_recovers_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept + 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }
}
