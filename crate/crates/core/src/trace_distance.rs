//! Closed-form distance of post-click states from the symmetric subspace.
//!
//! After `m` clicks on a fully excited ensemble the state at time `t` is the
//! free decay of `|D_m><D_m|` (for every schedule with all clicks before `t`).
//! Its block with `n_g` ground-state atoms has diagonal `Time · Diag`, and the
//! symmetric projection has diagonal `Time · Diag_proj`, with
//!
//! ```text
//! Time(n_g)      = exp(-2(N-m)γt) (exp(2γt) - 1)^{n_g - m}
//! Diag(n_g)      = C(n_g, m) / C(N, m)
//! Diag_proj(n_g) = C(N, n_g-m) C(N, n_g)⁻² C(N-n_g+m, m)² C(N, m)⁻¹
//! T              = ½ Σ_{n_g=m}^{N} C(N, n_g) Time (Diag - Diag_proj)
//! ```
//!
//! `m = 0` (no click yet) is included.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, binomial_f64, rational, ratio, to_f64};
use crate::{Error, Result};

fn check_indices(n_atoms: usize, m: usize, n_ground: usize) -> Result<()> {
    if n_atoms == 0 || m > n_ground || n_ground > n_atoms {
        return Err(Error::OutOfRange(format!(
            "need 0 <= m <= n_g <= N, got m = {m}, n_g = {n_ground}, N = {n_atoms}"
        )));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidDuration(t));
    }
    Ok(())
}

/// `exp(-2(N-m)γt) (exp(2γt) - 1)^{n_g-m}`, evaluated as `p^{N-n_g} q^{n_g-m}`.
pub fn time_factor(n_atoms: usize, m: usize, n_ground: usize, gamma: f64, t: f64) -> Result<f64> {
    check_indices(n_atoms, m, n_ground)?;
    check_time(t)?;
    let x = 2.0 * gamma * t;
    Ok((-x).exp().powi((n_atoms - n_ground) as i32) * (-(-x).exp_m1()).powi((n_ground - m) as i32))
}

/// `C(n_g, m) / C(N, m)`.
pub fn diag_coefficient(n_atoms: usize, m: usize, n_ground: usize) -> Result<BigRational> {
    check_indices(n_atoms, m, n_ground)?;
    let (n, m, g) = (n_atoms as u64, m as u64, n_ground as u64);
    Ok(ratio(binomial(g, m), binomial(n, m)))
}

/// `C(N, n_g-m) C(N, n_g)⁻² C(N-n_g+m, m)² C(N, m)⁻¹`.
pub fn diag_proj_coefficient(n_atoms: usize, m: usize, n_ground: usize) -> Result<BigRational> {
    check_indices(n_atoms, m, n_ground)?;
    let (n, m, g) = (n_atoms as u64, m as u64, n_ground as u64);
    let spread = binomial(n - g + m, m);
    let block = binomial(n, g);
    Ok(ratio(
        binomial(n, g - m) * &spread * &spread,
        &block * &block * binomial(n, m),
    ))
}

/// `C(N, n_g) (Diag - Diag_proj)`, exact.
fn weighted_difference(n_atoms: usize, m: usize, n_ground: usize) -> Result<BigRational> {
    let diff = diag_coefficient(n_atoms, m, n_ground)? - diag_proj_coefficient(n_atoms, m, n_ground)?;
    Ok(diff * rational(binomial(n_atoms as u64, n_ground as u64)))
}

/// Trace distance after `m` clicks at absolute time `t`.
pub fn trace_distance_analytic(n_atoms: usize, m: usize, gamma: f64, t: f64) -> Result<f64> {
    check_indices(n_atoms, m, m)?;
    check_time(t)?;
    let mut total = 0.0;
    for g in m..=n_atoms {
        let w = to_f64(&weighted_difference(n_atoms, m, g)?);
        if w != 0.0 {
            total += w * time_factor(n_atoms, m, g, gamma, t)?;
        }
    }
    Ok((0.5 * total).clamp(0.0, 1.0))
}

/// Exact trace distance for a rational single-atom survival probability
/// `p = exp(-2γt)` in `[0, 1]`; `p = 1` is the click instant `t = 0`.
pub fn trace_distance_exact(n_atoms: usize, m: usize, survival: &BigRational) -> Result<BigRational> {
    check_indices(n_atoms, m, m)?;
    if *survival < BigRational::zero() || *survival > BigRational::one() {
        return Err(Error::OutOfRange(format!("survival probability {survival} outside [0, 1]")));
    }
    let decayed = BigRational::one() - survival;
    let mut total = BigRational::zero();
    for g in m..=n_atoms {
        let time = pow(survival, n_atoms - g) * pow(&decayed, g - m);
        total += weighted_difference(n_atoms, m, g)? * time;
    }
    Ok(total / rational(BigUint::from(2u32)))
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceDistanceCurve {
    pub n_atoms: usize,
    /// Clicks recorded before the first sample.
    pub m: usize,
    pub gamma: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn trace_distance_curve(n_atoms: usize, m: usize, gamma: f64, times: &[f64]) -> Result<TraceDistanceCurve> {
    let values = times
        .iter()
        .map(|&t| trace_distance_analytic(n_atoms, m, gamma, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceDistanceCurve {
        n_atoms,
        m,
        gamma,
        times: times.to_vec(),
        values,
    })
}

/// Floating-point `Time · C(N,n_g)` summed over the diagonal; equals 1 for any `t`.
pub fn diagonal_trace(n_atoms: usize, m: usize, gamma: f64, t: f64) -> Result<f64> {
    (m..=n_atoms)
        .map(|g| {
            let diag = to_f64(&diag_coefficient(n_atoms, m, g)?);
            Ok(binomial_f64(n_atoms as u64, g as u64) * diag * time_factor(n_atoms, m, g, gamma, t)?)
        })
        .sum()
}
