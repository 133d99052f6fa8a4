//! Truncated power-series summation with diagnostics.

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Stopping rule and diagnostic thresholds shared by every series in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Number of consecutive negligible terms required before stopping.
    pub consecutive_small: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// `cancellation_ratio` above this raises the warning flag.
    pub cancellation_threshold: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            consecutive_small: 3,
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_terms: 10_000,
            cancellation_threshold: 1e8,
        }
    }
}

/// A truncated series value with truncation and cancellation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Sum of the magnitudes of the last few included terms.
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    /// max |term| / |value|, never below 1.
    pub cancellation_ratio: f64,
    /// Set when `cancellation_ratio` exceeds the configured threshold; the
    /// value may have lost most of its significant digits.
    pub cancellation_warning: bool,
}

impl SeriesValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error_estimate: 0.0,
            terms_used: 0,
            cancellation_ratio: 1.0,
            cancellation_warning: false,
        }
    }

    /// Multiply the value (and its error) by a constant prefactor.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
            ..self
        }
    }

    /// Rough absolute error: the truncation estimate plus rounding, taken
    /// as max|term| · ε · terms_used (terms built by recurrence carry
    /// relative errors growing with their index).
    pub fn error_bound(&self) -> f64 {
        let rounding = if self.cancellation_ratio.is_finite() {
            self.cancellation_ratio * f64::EPSILON * self.value.abs() * self.terms_used.max(1) as f64
        } else {
            f64::INFINITY
        };
        self.abs_error_estimate + rounding
    }

    /// Combine two independently summed parts `self + other`.
    pub fn combine(self, other: SeriesValue, cfg: &SeriesConfig) -> SeriesValue {
        let value = self.value + other.value;
        let largest = (self.cancellation_ratio * self.value.abs())
            .max(other.cancellation_ratio * other.value.abs());
        let cancellation_ratio = cancellation(largest, value);
        SeriesValue {
            value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            terms_used: self.terms_used + other.terms_used,
            cancellation_ratio,
            cancellation_warning: self.cancellation_warning
                || other.cancellation_warning
                || cancellation_ratio > cfg.cancellation_threshold,
        }
    }
}

pub(crate) fn cancellation(max_abs_term: f64, value: f64) -> f64 {
    if value == 0.0 {
        if max_abs_term == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (max_abs_term / value.abs()).max(1.0)
    }
}

/// Sum `term(0) + term(1) + …` under the configured stopping rule.
///
/// Exact-zero terms count as negligible. Non-finite terms abort with
/// `SeriesNotConverged` carrying the partial sum.
pub fn sum_series<F>(mut term: F, cfg: &SeriesConfig) -> Result<SeriesValue>
where
    F: FnMut(usize) -> f64,
{
    let k = cfg.consecutive_small.max(1);
    let mut acc = CompensatedSum::new();
    let mut max_abs = 0.0f64;
    let mut recent = vec![0.0f64; k];
    let mut streak = 0usize;

    for n in 0..cfg.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::SeriesNotConverged {
                best: acc.value(),
                terms: n,
            });
        }
        acc.add(t);
        max_abs = max_abs.max(t.abs());
        recent[n % k] = t.abs();
        let partial = acc.value();
        if t.abs() <= cfg.rel_tol * partial.abs() + cfg.abs_tol {
            streak += 1;
        } else {
            streak = 0;
        }
        if streak >= k {
            let value = acc.value();
            let ratio = cancellation(max_abs, value);
            return Ok(SeriesValue {
                value,
                abs_error_estimate: recent.iter().sum(),
                terms_used: n + 1,
                cancellation_ratio: ratio,
                cancellation_warning: ratio > cfg.cancellation_threshold,
            });
        }
    }
    Err(Error::SeriesNotConverged {
        best: acc.value(),
        terms: cfg.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let v = sum_series(|n| 0.5f64.powi(n as i32), &SeriesConfig::default()).unwrap();
        assert!((v.value - 2.0).abs() < 1e-15);
        assert!(v.abs_error_estimate < 1e-14);
        assert_eq!(v.cancellation_ratio, 1.0);
    }

    #[test]
    fn non_convergence_reports_partial() {
        let cfg = SeriesConfig {
            max_terms: 50,
            ..Default::default()
        };
        match sum_series(|_| 1.0, &cfg) {
            Err(Error::SeriesNotConverged { best, terms }) => {
                assert_eq!(terms, 50);
                assert_eq!(best, 50.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cancellation_is_flagged() {
        // e^{-40} by its Taylor series: huge intermediate terms
        let mut term = 1.0f64;
        let v = sum_series(
            |n| {
                if n > 0 {
                    term *= -40.0 / n as f64;
                }
                term
            },
            &SeriesConfig::default(),
        )
        .unwrap();
        assert!(v.cancellation_warning);
        assert!(v.cancellation_ratio > 1e8);
    }
}
