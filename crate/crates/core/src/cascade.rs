//! Conditional-intensity records for a sequence of forward photon detections.
//!
//! Segment `m` covers `[t_{m-1}, t_m]` (with `t_0 = 0`) and holds the
//! conditional intensity `G⁽¹⁾_{ρ_{m-1}}(t)` of the state conditioned on the
//! first `m - 1` clicks. For a fully excited start it reads
//! `m(N-m+1) · exp(-2γt)` with `t` measured from the start of the cascade;
//! the coefficient does not depend on when the earlier clicks happened.

use num_bigint::BigUint;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// 1-based click index `m`.
    pub index: usize,
    pub start: f64,
    pub end: f64,
    /// `G⁽¹⁾(t) · exp(2γt)`, constant over the segment.
    pub coefficient: f64,
    /// Exact coefficient, when the engine produces one.
    pub exact_coefficient: Option<BigUint>,
    /// `G⁽¹⁾` at the click instant `t_m`, i.e. the collapse normalization.
    pub click_weight: f64,
    /// `(t, G⁽¹⁾(t))` on a uniform sub-grid of the segment.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRecord {
    pub n_atoms: usize,
    pub gamma: f64,
    pub measurement_times: Vec<f64>,
    pub segments: Vec<Segment>,
}

impl CascadeRecord {
    pub fn coefficients(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.coefficient).collect()
    }

    pub fn exact_coefficients(&self) -> Option<Vec<BigUint>> {
        self.segments.iter().map(|s| s.exact_coefficient.clone()).collect()
    }

    /// Product of click weights: the unconditional `G⁽ᵐ⁾(t_1, …, t_m)`.
    pub fn click_weight_product(&self) -> f64 {
        self.segments.iter().map(|s| s.click_weight).product()
    }
}

/// Click times must be finite, non-negative and non-decreasing. Coincident
/// clicks are allowed and give empty segments.
pub fn validate_schedule(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidTimes("measurement times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidTimes("measurement times must be non-decreasing".into()));
    }
    Ok(())
}

/// `points` uniform samples of `[start, end]`, endpoints included.
pub(crate) fn segment_grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    if points <= 1 || end == start {
        return vec![end];
    }
    let step = (end - start) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { end } else { start + step * k as f64 })
        .collect()
}
