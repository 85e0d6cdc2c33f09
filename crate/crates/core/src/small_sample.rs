//! Small-sample limit: rate equations on the symmetric Dicke ladder.
//!
//! All atoms couple to the same field mode, so a fully excited ensemble stays
//! in `J = N/2` and descends `|J, J> → |J, J-1> → … → |J, -J>`. Population
//! index `i` is the ground-state count `n_g = J - M`, so row order is
//! `M = J` down to `M = -J`.

use nalgebra::{DMatrix, DVector};

use crate::ode::integrate;
use crate::{Error, Result};

const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-14;

/// Populations `ρ_{M,M}(t)` and intensity `I(t)` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationCurve {
    pub n_atoms: usize,
    pub gamma: f64,
    pub times: Vec<f64>,
    /// `populations[k][n_g]` at `times[k]`.
    pub populations: Vec<Vec<f64>>,
    pub intensity: Vec<f64>,
}

/// Location, height and width of the emission burst.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakStats {
    pub t_peak: f64,
    pub i_peak: f64,
    pub fwhm: f64,
    /// The maximum sits on the first or last grid point (no interior burst).
    pub boundary_peak: bool,
}

/// `(N - n_g)(n_g + 1)`, the decay rate out of rung `n_g` in units of `2γ`.
fn rung_rate(n_atoms: usize, n_ground: usize) -> f64 {
    ((n_atoms - n_ground) * (n_ground + 1)) as f64
}

/// Rate matrix of the ladder in units of `2γ`, acting on populations ordered by `n_g`.
pub fn build_rate_generator(n_atoms: usize) -> Result<DMatrix<f64>> {
    if n_atoms == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let mut g = DMatrix::zeros(n_atoms + 1, n_atoms + 1);
    for i in 0..n_atoms {
        let c = rung_rate(n_atoms, i);
        g[(i, i)] = -c;
        g[(i + 1, i)] = c;
    }
    Ok(g)
}

pub fn fully_excited_distribution(n_atoms: usize) -> Vec<f64> {
    let mut p = vec![0.0; n_atoms + 1];
    p[0] = 1.0;
    p
}

/// 400 uniform points on `[0, 5 / (γ max(1, N/4))]`; the burst narrows as `1/N`.
pub fn default_grid(n_atoms: usize, gamma: f64) -> Vec<f64> {
    let stop = 5.0 / (gamma * (n_atoms as f64 / 4.0).max(1.0));
    (0..400).map(|k| stop * k as f64 / 399.0).collect()
}

/// Integrates the ladder rate equations from `initial` over `times`.
///
/// `times` must start at 0 and increase strictly; the first population row is
/// `initial` itself.
pub fn evolve_populations(n_atoms: usize, gamma: f64, initial: &[f64], times: &[f64]) -> Result<PopulationCurve> {
    let generator = build_rate_generator(n_atoms)?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::OutOfRange(format!("gamma must be positive, got {gamma}")));
    }
    check_distribution(n_atoms, initial)?;
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidTimes("grid must start at 0".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimes("grid must be finite and strictly increasing".into()));
    }

    // dimensionless time τ = γt, so dp/dτ = 2 G p
    let rhs = |p: &DVector<f64>, dp: &mut DVector<f64>| {
        dp.gemv(2.0, &generator, p, 0.0);
    };
    let mut p = DVector::from_column_slice(initial);
    let mut populations = vec![initial.to_vec()];
    for w in times.windows(2) {
        p = integrate(rhs, p, gamma * w[0], gamma * w[1], RTOL, ATOL)?;
        populations.push(p.iter().copied().collect());
    }
    let mut curve = PopulationCurve {
        n_atoms,
        gamma,
        times: times.to_vec(),
        populations,
        intensity: Vec::new(),
    };
    curve.intensity = intensity_curve(&curve);
    Ok(curve)
}

fn check_distribution(n_atoms: usize, p: &[f64]) -> Result<()> {
    if p.len() != n_atoms + 1 {
        return Err(Error::InvalidDistribution(format!(
            "expected {} entries, got {}",
            n_atoms + 1,
            p.len()
        )));
    }
    if p.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution("entries must be finite and non-negative".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// `I(t) = Σ_M ρ_{M,M}(t) (J+M)(J-M+1)`.
pub fn intensity_curve(curve: &PopulationCurve) -> Vec<f64> {
    let n = curve.n_atoms;
    curve
        .populations
        .iter()
        .map(|row| row.iter().enumerate().map(|(g, p)| p * rung_rate(n, g)).sum())
        .collect()
}

/// Peak position by a parabola through the three samples around the grid
/// maximum, width by linear interpolation of the half-maximum crossings.
///
/// A maximum on the first sample (the `N = 1` exponential) is reported at that
/// sample with the half-life as width and `boundary_peak` set. When the curve
/// does not rise above half maximum on the left, the width is measured from
/// the first sample.
pub fn peak_stats(curve: &PopulationCurve) -> Result<PeakStats> {
    let (t, y) = (&curve.times, &curve.intensity);
    if t.len() < 3 || t.len() != y.len() {
        return Err(Error::InvalidTimes("peak search needs at least three samples".into()));
    }
    let k = (0..y.len()).fold(0, |best, i| if y[i] > y[best] { i } else { best });
    let last = y.len() - 1;

    let (t_peak, i_peak, boundary_peak) = if k == 0 || k == last {
        (t[k], y[k], true)
    } else {
        let (t_peak, i_peak) = parabola_vertex([t[k - 1], t[k], t[k + 1]], [y[k - 1], y[k], y[k + 1]]);
        (t_peak, i_peak, false)
    };
    let half = 0.5 * i_peak;

    let left = (0..k)
        .rev()
        .find(|&i| y[i] < half)
        .map(|i| crossing(t[i], y[i], t[i + 1], y[i + 1], half))
        .unwrap_or(t[0]);
    let right = (k + 1..=last)
        .find(|&i| y[i] < half)
        .map(|i| crossing(t[i - 1], y[i - 1], t[i], y[i], half))
        .ok_or_else(|| Error::InvalidTimes("intensity does not fall below half maximum on the grid".into()))?;

    Ok(PeakStats {
        t_peak,
        i_peak,
        fwhm: right - left,
        boundary_peak,
    })
}

fn crossing(t0: f64, y0: f64, t1: f64, y1: f64, level: f64) -> f64 {
    t0 + (level - y0) * (t1 - t0) / (y1 - y0)
}

/// Vertex of the parabola through three points with `x` increasing.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d01 = (y[1] - y[0]) / (x[1] - x[0]);
    let d12 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d12 - d01) / (x[2] - x[0]);
    if a >= 0.0 {
        return (x[1], y[1]);
    }
    let b = d01 - a * (x[0] + x[1]);
    let xv = (-b / (2.0 * a)).clamp(x[0], x[2]);
    let yv = y[1] + (xv - x[1]) * (d01 + a * (xv - x[0]));
    (xv, yv)
}
