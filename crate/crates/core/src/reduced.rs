//! Class-indexed states for independent atoms under forward-direction detection.
//!
//! A permutation-invariant density matrix without coherences between different
//! ground-state counts is fixed by one number per class `(s, k)`: all elements
//! `ρ_{A,B}` whose ground sets satisfy `|A| = |B| = s` and `|A ∩ B| = k` are
//! equal. Classes exist for `max(0, 2s - N) ≤ k ≤ s`, so the state needs
//! `O(N²)` numbers instead of `4^N`.
//!
//! Free decay keeps the family closed: the atoms in `A ∩ B` are the only ones
//! that can have reached the ground state in both indices, which gives
//!
//! ```text
//! d/dt v(s,k) = -2γ(N-s) v(s,k) + 2γk v(s-1,k-1)
//! v(s,k)(t)   = p^{N-s} Σ_j C(k,j) q^j v(s-j,k-j)(0),   p = exp(-2γt), q = 1 - p
//! ```
//!
//! A click applies `S₋ · S₊`. Summing `ρ_{A∖μ, B∖ν}` over `μ ∈ A`, `ν ∈ B` and
//! sorting the pairs by where `μ` and `ν` sit relative to `A ∩ B`:
//!
//! ```text
//! v'(s,k) = (k + 2k(s-k)) v(s-1,k-1) + k(k-1) v(s-1,k-2) + (s-k)² v(s-1,k)
//! ```
//!
//! followed by normalization with `Σ_s C(N,s) v'(s,s)`.

use nalgebra::DVector;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::brute::DensityMatrix;
use crate::cascade::{segment_grid, validate_schedule, CascadeRecord, Segment};
use crate::combinatorics::{big_to_f64, binomial, binomial_f64, factorial, ratio, rational};
use crate::ode::integrate;
use crate::{Error, Result, MAX_DENSITY_ATOMS};

const TRACE_TOL: f64 = 1e-10;
const WEIGHT_FLOOR: f64 = 1e-14;

/// Smallest overlap `k` possible for two `s`-subsets of `N` atoms.
pub fn k_min(n_atoms: usize, s: usize) -> usize {
    (2 * s).saturating_sub(n_atoms)
}

/// Number of ordered pairs of ground sets in class `(s, k)`.
pub fn multiplicity(n_atoms: usize, s: usize, k: usize) -> BigUint {
    if s > n_atoms || k > s || k < k_min(n_atoms, s) {
        return BigUint::from(0u32);
    }
    let (n, s, k) = (n_atoms as u64, s as u64, k as u64);
    binomial(n, k) * binomial(n - k, s - k) * binomial(n - s, s - k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    n_atoms: usize,
    /// `values[s][k]`; entries with `k < k_min(N, s)` are unused and kept at 0.
    values: Vec<Vec<f64>>,
}

impl ReducedState {
    /// Validates shape, unit trace and non-negative diagonal classes.
    pub fn new(n_atoms: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::OutOfRange("N must be at least 1".into()));
        }
        if values.len() != n_atoms + 1 || values.iter().enumerate().any(|(s, row)| row.len() != s + 1) {
            return Err(Error::InvalidState("class table must have rows of length s + 1 for s = 0..=N".into()));
        }
        for (s, row) in values.iter().enumerate() {
            if row[..k_min(n_atoms, s)].iter().any(|v| *v != 0.0) {
                return Err(Error::InvalidState(format!("row {s} populates an empty class")));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidState(format!("row {s} has a non-finite value")));
            }
            if row[s] < -TRACE_TOL {
                return Err(Error::InvalidState(format!("negative population {} in class ({s}, {s})", row[s])));
            }
        }
        let state = Self { n_atoms, values };
        let tr = state.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(state)
    }

    fn zeros(n_atoms: usize) -> Self {
        Self {
            n_atoms,
            values: (0..=n_atoms).map(|s| vec![0.0; s + 1]).collect(),
        }
    }

    pub fn fully_excited(n_atoms: usize) -> Result<Self> {
        Self::dicke(n_atoms, 0)
    }

    /// `|N/2, N/2 - n_ground><N/2, N/2 - n_ground|`: every class of block
    /// `n_ground` equals `1 / C(N, n_ground)`.
    pub fn dicke(n_atoms: usize, n_ground: usize) -> Result<Self> {
        if n_atoms == 0 || n_ground > n_atoms {
            return Err(Error::OutOfRange(format!("no Dicke state with n_g = {n_ground} for N = {n_atoms}")));
        }
        let mut state = Self::zeros(n_atoms);
        let value = binomial_f64(n_atoms as u64, n_ground as u64).recip();
        for k in k_min(n_atoms, n_ground)..=n_ground {
            state.values[n_ground][k] = value;
        }
        Ok(state)
    }

    /// Extracts class values, rejecting states with coherences between
    /// different ground-state counts or with unequal members in a class.
    pub fn from_density(rho: &DensityMatrix, tol: f64) -> Result<Self> {
        let n = rho.n_atoms();
        let data = rho.data();
        let mut state = Self::zeros(n);
        let mut seen: Vec<Vec<bool>> = (0..=n).map(|s| vec![false; s + 1]).collect();
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                let x = data[(i, j)];
                let (si, sj) = (i.count_ones() as usize, j.count_ones() as usize);
                if si != sj {
                    if x.norm() > tol {
                        return Err(Error::NotClassUniform(format!("coherence {x} between blocks {si} and {sj}")));
                    }
                    continue;
                }
                if x.im.abs() > tol {
                    return Err(Error::NotClassUniform(format!("complex element {x} at ({i}, {j})")));
                }
                let k = (i & j).count_ones() as usize;
                if !seen[si][k] {
                    seen[si][k] = true;
                    state.values[si][k] = x.re;
                } else if (state.values[si][k] - x.re).abs() > tol {
                    return Err(Error::NotClassUniform(format!(
                        "class ({si}, {k}) holds both {} and {}",
                        state.values[si][k], x.re
                    )));
                }
            }
        }
        Ok(state)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        if self.n_atoms > MAX_DENSITY_ATOMS {
            return Err(Error::Capacity {
                what: "full density matrix",
                n_atoms: self.n_atoms,
                cap: MAX_DENSITY_ATOMS,
            });
        }
        let dim = 1usize << self.n_atoms;
        let data = nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
            let s = i.count_ones() as usize;
            if s == j.count_ones() as usize {
                Complex64::new(self.values[s][(i & j).count_ones() as usize], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityMatrix::new(self.n_atoms, data)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn value(&self, s: usize, k: usize) -> f64 {
        self.values.get(s).and_then(|row| row.get(k)).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// `(s, k, value)` for every existing class.
    pub fn classes(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_atoms;
        self.values
            .iter()
            .enumerate()
            .flat_map(move |(s, row)| (k_min(n, s)..=s).map(move |k| (s, k, row[k])))
    }

    /// Probability of `s` ground-state atoms, `C(N, s) v(s, s)`.
    pub fn ground_count_distribution(&self) -> Vec<f64> {
        (0..=self.n_atoms)
            .map(|s| binomial_f64(self.n_atoms as u64, s as u64) * self.values[s][s])
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.ground_count_distribution().iter().sum()
    }

    /// `<J,M|ρ|J,M>` for `n_g = 0..=N`: `Σ_k mult(s,k) v(s,k) / C(N,s)`.
    pub fn symmetric_overlaps(&self) -> Vec<f64> {
        let n = self.n_atoms;
        (0..=n)
            .map(|s| {
                let sum: f64 = (k_min(n, s)..=s)
                    .map(|k| big_to_f64(&multiplicity(n, s, k)) * self.values[s][k])
                    .sum();
                sum / binomial_f64(n as u64, s as u64)
            })
            .collect()
    }

    /// Largest `|ρ_ij - v(class(i,j))|` over the full matrix, zero expected off-block.
    pub fn max_deviation_from(&self, rho: &DensityMatrix) -> f64 {
        let data = rho.data();
        let mut worst: f64 = 0.0;
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                let s = i.count_ones() as usize;
                let expected = if s == j.count_ones() as usize {
                    self.values[s][(i & j).count_ones() as usize]
                } else {
                    0.0
                };
                worst = worst.max((data[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Unnormalized `S₋ ρ S₊` in class form.
    fn lowered(&self) -> Self {
        let n = self.n_atoms;
        let mut out = Self::zeros(n);
        for s in 1..=n {
            for k in k_min(n, s)..=s {
                let (sf, kf) = (s as f64, k as f64);
                let mut v = 0.0;
                if k >= 1 {
                    v += (kf + 2.0 * kf * (sf - kf)) * self.value(s - 1, k - 1);
                }
                if k >= 2 {
                    v += kf * (kf - 1.0) * self.value(s - 1, k - 2);
                }
                if k < s {
                    v += (sf - kf) * (sf - kf) * self.value(s - 1, k);
                }
                out.values[s][k] = v;
            }
        }
        out
    }

    /// `<S₊S₋>`, the trace of the unnormalized collapsed state.
    pub fn expectation_spsm(&self) -> f64 {
        self.lowered().trace()
    }

    fn scale(&mut self, factor: f64) {
        self.values.iter_mut().flatten().for_each(|v| *v *= factor);
    }

    fn flatten(&self) -> DVector<f64> {
        DVector::from_iterator(
            (self.n_atoms + 1) * (self.n_atoms + 2) / 2,
            self.values.iter().flatten().copied(),
        )
    }

    fn unflatten(n_atoms: usize, y: &DVector<f64>) -> Self {
        let mut out = Self::zeros(n_atoms);
        let mut it = y.iter();
        for v in out.values.iter_mut().flatten() {
            *v = *it.next().unwrap_or(&0.0);
        }
        out
    }
}

/// Class-level decay generator. The feed coefficient is `feed_scale · γ · k`;
/// the physical value of `feed_scale` is 2, other values exist only to check
/// that the brute-force comparison detects a wrong rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedGenerator {
    pub feed_scale: f64,
}

impl Default for ReducedGenerator {
    fn default() -> Self {
        Self { feed_scale: 2.0 }
    }
}

impl ReducedGenerator {
    /// `d/dt v(s,k)` for every class.
    pub fn rhs(&self, state: &ReducedState, gamma: f64) -> Vec<Vec<f64>> {
        let n = state.n_atoms;
        (0..=n)
            .map(|s| {
                (0..=s)
                    .map(|k| {
                        if k < k_min(n, s) {
                            return 0.0;
                        }
                        let mut d = -2.0 * gamma * (n - s) as f64 * state.values[s][k];
                        if k >= 1 {
                            d += self.feed_scale * gamma * k as f64 * state.value(s - 1, k - 1);
                        }
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// Adaptive integration of [`Self::rhs`] over `dt`. The result is not
    /// re-validated, so a non-physical `feed_scale` shows up as a wrong state.
    pub fn evolve(&self, state: &ReducedState, gamma: f64, dt: f64) -> Result<ReducedState> {
        check_duration(dt)?;
        let n = state.n_atoms;
        let y = integrate(
            |y, dy| {
                let rhs = self.rhs(&ReducedState::unflatten(n, y), gamma);
                *dy = DVector::from_iterator(dy.len(), rhs.into_iter().flatten());
            },
            state.flatten(),
            0.0,
            dt,
            1e-10,
            1e-14,
        )?;
        Ok(ReducedState::unflatten(n, &y))
    }
}

fn check_duration(dt: f64) -> Result<()> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDuration(dt));
    }
    Ok(())
}

/// Exact free decay over `dt`.
pub fn evolve_reduced(state: &ReducedState, gamma: f64, dt: f64) -> Result<ReducedState> {
    check_duration(dt)?;
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let n = state.n_atoms;
    let p = (-2.0 * gamma * dt).exp();
    let q = -(-2.0 * gamma * dt).exp_m1();
    let mut out = ReducedState::zeros(n);
    for s in 0..=n {
        let survive = p.powi((n - s) as i32);
        for k in k_min(n, s)..=s {
            let mut acc = 0.0;
            let mut q_pow = 1.0;
            for j in 0..=k {
                acc += binomial_f64(k as u64, j as u64) * q_pow * state.value(s - j, k - j);
                q_pow *= q;
            }
            out.values[s][k] = survive * acc;
        }
    }
    Ok(out)
}

/// Forward-direction detection: `S₋ρS₊ / Tr[S₋ρS₊]`, returned with the trace.
pub fn collapse_reduced(state: &ReducedState) -> Result<(ReducedState, f64)> {
    let mut out = state.lowered();
    let weight = out.trace();
    if !(weight >= WEIGHT_FLOOR) {
        return Err(Error::NoPhotonAvailable { weight });
    }
    out.scale(weight.recip());
    Ok((out, weight))
}

/// Ground-state trace distance from the symmetric subspace, `½(1 - Σ <J,M|ρ|J,M>)`.
///
/// Class-uniform states commute with every atom permutation and hence with the
/// symmetric projector `P`, so `ρ - PρP = (1-P)ρ(1-P) ≥ 0` and the trace norm
/// is the trace.
pub fn trace_distance_reduced(state: &ReducedState) -> f64 {
    let total: f64 = state.symmetric_overlaps().iter().sum();
    (0.5 * (1.0 - total)).max(0.0)
}

fn check_click_index(n_atoms: usize, m: usize) -> Result<()> {
    if m == 0 || m > n_atoms {
        return Err(Error::OutOfRange(format!("click index m = {m} must lie in 1..={n_atoms}")));
    }
    Ok(())
}

/// Weight `exp(-2(N-m+1)γt) (exp(2γt) - 1)^s` of one specific set of `s`
/// spontaneously decayed atoms before the `m`-th click.
pub fn cascade_probability(n_atoms: usize, m: usize, s: usize, gamma: f64, t: f64) -> Result<f64> {
    check_click_index(n_atoms, m)?;
    if s > n_atoms - m + 1 {
        return Err(Error::OutOfRange(format!("s = {s} exceeds N - m + 1 = {}", n_atoms - m + 1)));
    }
    check_duration(t)?;
    let x = 2.0 * gamma * t;
    // written as p^(N-m+1-s) q^s to stay finite for large γt
    Ok((-x).exp().powi((n_atoms - m + 1 - s) as i32) * (-(-x).exp_m1()).powi(s as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalIntensity {
    /// `m(N-m+1) exp(-2γt)`.
    pub closed_form: f64,
    /// `Σ_s p_s(t) C(N,s) C(N,m-1)⁻¹ m² C(N-s,m)`.
    pub summed: f64,
    pub coefficient: BigUint,
}

/// Conditional intensity before the `m`-th click at absolute time `t`, along
/// the closed form and along the explicit sum over decay patterns.
pub fn conditional_intensity_analytic(n_atoms: usize, m: usize, gamma: f64, t: f64) -> Result<ConditionalIntensity> {
    check_click_index(n_atoms, m)?;
    check_duration(t)?;
    let coefficient = BigUint::from(m) * (n_atoms - m + 1);
    let closed_form = big_to_f64(&coefficient) * (-2.0 * gamma * t).exp();
    let summed = (0..=n_atoms - m)
        .map(|s| {
            let c = crate::combinatorics::to_f64(&path_bookkeeping(n_atoms, m, s)?.summand_coefficient());
            Ok(cascade_probability(n_atoms, m, s, gamma, t)? * c)
        })
        .sum::<Result<f64>>()?;
    Ok(ConditionalIntensity {
        closed_form,
        summed,
        coefficient,
    })
}

/// Path counting behind one term of the conditional-intensity sum: the
/// `m - 1` earlier clicks, `s` spontaneous decays, then the `m`-th click.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBookkeeping {
    pub n_atoms: usize,
    pub m: usize,
    pub s: usize,
    /// Squared norm inverse of `(S₋)^{m-1}|e>`: `[(m-1)!]⁻² C(N,m-1)⁻¹`.
    pub normalization: BigRational,
    /// `m²` pairs of single paths interfering in each final state.
    pub pair_count: BigUint,
    /// Reachable final basis states for a fixed decay set, `C(N-s, m)`.
    pub final_states: BigUint,
    /// Ordered click histories compatible with a fixed decay set, `(m-1)! C(N-s, m-1)`.
    pub interfering_terms: BigUint,
    /// Single paths into each final state, `m`.
    pub single_paths: usize,
}

impl PathBookkeeping {
    /// `C(N,s) · normalization · [(m-1)!]² · m² · C(N-s,m)`: the factor multiplying `p_s(t)`.
    pub fn summand_coefficient(&self) -> BigRational {
        let amplitude = factorial(self.m as u64 - 1);
        let count = binomial(self.n_atoms as u64, self.s as u64)
            * &amplitude
            * &amplitude
            * &self.pair_count
            * &self.final_states;
        &self.normalization * rational(count)
    }
}

pub fn path_bookkeeping(n_atoms: usize, m: usize, s: usize) -> Result<PathBookkeeping> {
    check_click_index(n_atoms, m)?;
    if s > n_atoms - m {
        return Err(Error::OutOfRange(format!("s = {s} exceeds N - m = {}", n_atoms - m)));
    }
    let (n, m64, s64) = (n_atoms as u64, m as u64, s as u64);
    let prev = factorial(m64 - 1);
    Ok(PathBookkeeping {
        n_atoms,
        m,
        s,
        normalization: ratio(BigUint::from(1u32), &prev * &prev * binomial(n, m64 - 1)),
        pair_count: BigUint::from(m64 * m64),
        final_states: binomial(n - s64, m64),
        interfering_terms: prev * binomial(n - s64, m64 - 1),
        single_paths: m,
    })
}

/// Closed-form cascade for a fully excited start: segment `m` has the exact
/// coefficient `m(N-m+1)`.
pub fn cascade_analytic(n_atoms: usize, gamma: f64, times: &[f64], samples_per_segment: usize) -> Result<CascadeRecord> {
    check_schedule(n_atoms, times)?;
    let mut last = 0.0;
    let segments = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let m = i + 1;
            let exact = BigUint::from(m) * (n_atoms - m + 1);
            let coefficient = big_to_f64(&exact);
            let samples = segment_grid(last, t, samples_per_segment)
                .into_iter()
                .map(|x| (x, coefficient * (-2.0 * gamma * x).exp()))
                .collect();
            let segment = Segment {
                index: m,
                start: last,
                end: t,
                coefficient,
                exact_coefficient: Some(exact),
                click_weight: coefficient * (-2.0 * gamma * t).exp(),
                samples,
            };
            last = t;
            segment
        })
        .collect();
    Ok(CascadeRecord {
        n_atoms,
        gamma,
        measurement_times: times.to_vec(),
        segments,
    })
}

fn check_schedule(n_atoms: usize, times: &[f64]) -> Result<()> {
    if n_atoms == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    validate_schedule(times)?;
    if times.len() > n_atoms {
        return Err(Error::OutOfRange(format!("{} clicks requested but only {n_atoms} photons exist", times.len())));
    }
    Ok(())
}

/// Cascade through the reduced representation, keeping the post-click states.
pub fn cascade_reduced(
    n_atoms: usize,
    gamma: f64,
    times: &[f64],
    samples_per_segment: usize,
) -> Result<(CascadeRecord, Vec<ReducedState>)> {
    check_schedule(n_atoms, times)?;
    let mut state = ReducedState::fully_excited(n_atoms)?;
    let mut last = 0.0;
    let mut segments = Vec::with_capacity(times.len());
    let mut states = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let samples = segment_grid(last, t, samples_per_segment)
            .into_iter()
            .map(|x| Ok((x, evolve_reduced(&state, gamma, x - last)?.expectation_spsm())))
            .collect::<Result<Vec<_>>>()?;
        let (next, weight) = collapse_reduced(&evolve_reduced(&state, gamma, t - last)?)?;
        segments.push(Segment {
            index: i + 1,
            start: last,
            end: t,
            coefficient: weight * (2.0 * gamma * t).exp(),
            exact_coefficient: None,
            click_weight: weight,
            samples,
        });
        states.push(next.clone());
        state = next;
        last = t;
    }
    let record = CascadeRecord {
        n_atoms,
        gamma,
        measurement_times: times.to_vec(),
        segments,
    };
    Ok((record, states))
}
