use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operators::CollectiveOperators;
use super::DensityMatrix;
use crate::ode::integrate;
use crate::{Error, Result};

const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-13;

/// Exact independent-atom decay over `dt`: the tensor product of single-atom
/// amplitude-damping channels with excited survival `exp(-2γ dt)`.
pub fn evolve_channel(rho: &DensityMatrix, gamma: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDuration(dt));
    }
    let mut data = rho.data().clone();
    if dt == 0.0 {
        return Ok(DensityMatrix::from_trusted(rho.n_atoms(), data));
    }
    let survive = (-2.0 * gamma * dt).exp();
    let decay = -(-2.0 * gamma * dt).exp_m1();
    let coherence = survive.sqrt();
    let dim = rho.dim();
    for atom in 0..rho.n_atoms() {
        let bit = 1usize << atom;
        // each (i, j) with the atom excited in both indices owns a disjoint 2x2 block
        for i in (0..dim).filter(|i| i & bit == 0) {
            for j in (0..dim).filter(|j| j & bit == 0) {
                let ee = data[(i, j)];
                data[(i | bit, j | bit)] += ee * decay;
                data[(i, j)] = ee * survive;
                data[(i | bit, j)] *= coherence;
                data[(i, j | bit)] *= coherence;
            }
        }
    }
    Ok(DensityMatrix::from_trusted(rho.n_atoms(), data))
}

/// Right-hand side of the independent-atom master equation,
/// `-γ Σ_μ (σ₊σ₋ ρ + ρ σ₊σ₋ - 2 σ₋ ρ σ₊)`.
pub fn lindblad_rhs(rho: &DensityMatrix, gamma: f64) -> DMatrix<Complex64> {
    independent_rhs(rho.n_atoms(), rho.data(), gamma)
}

fn independent_rhs(n_atoms: usize, rho: &DMatrix<Complex64>, gamma: f64) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let n = n_atoms as u32;
    DMatrix::from_fn(dim, dim, |i, j| {
        let excited = (n - i.count_ones()) + (n - j.count_ones());
        let mut d = rho[(i, j)] * (-gamma * excited as f64);
        // feeding from the pair with atom μ excited in both indices
        let shared_ground = i & j;
        for atom in 0..n_atoms {
            let bit = 1usize << atom;
            if shared_ground & bit != 0 {
                d += rho[(i & !bit, j & !bit)] * (2.0 * gamma);
            }
        }
        d
    })
}

/// Right-hand side of the small-sample master equation with collective
/// jump operator `S₋`: `-γ (S₊S₋ρ + ρS₊S₋ - 2 S₋ρS₊)`.
pub fn collective_lindblad_rhs(rho: &DMatrix<Complex64>, n_atoms: usize, gamma: f64) -> Result<DMatrix<Complex64>> {
    let ops = CollectiveOperators::get(n_atoms)?;
    let left = ops.left_spsm(rho);
    let jump = ops.sandwich_lowering(rho);
    Ok((&left + left.adjoint() - jump * Complex64::from(2.0)) * Complex64::from(-gamma))
}

/// Adaptive integration of [`lindblad_rhs`]; exists to cross-check [`evolve_channel`].
pub fn evolve_lindblad(rho: &DensityMatrix, gamma: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidDuration(dt));
    }
    let n = rho.n_atoms();
    let dim = rho.dim();
    let y = integrate(
        |y, dy| {
            let m = unflatten(y, dim);
            *dy = flatten(&independent_rhs(n, &m, gamma));
        },
        flatten(rho.data()),
        0.0,
        dt,
        RTOL,
        ATOL,
    )?;
    Ok(DensityMatrix::from_trusted(n, unflatten(&y, dim)))
}

/// Adaptive integration of the collective (small-sample) master equation.
pub fn evolve_collective(rho: &DensityMatrix, gamma: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidDuration(dt));
    }
    let n = rho.n_atoms();
    let dim = rho.dim();
    let ops = CollectiveOperators::get(n)?;
    let y = integrate(
        |y, dy| {
            let m = unflatten(y, dim);
            let left = ops.left_spsm(&m);
            let jump = ops.sandwich_lowering(&m);
            let d = (&left + left.adjoint() - jump * Complex64::from(2.0)) * Complex64::from(-gamma);
            *dy = flatten(&d);
        },
        flatten(rho.data()),
        0.0,
        dt,
        RTOL,
        ATOL,
    )?;
    Ok(DensityMatrix::from_trusted(n, unflatten(&y, dim)))
}

fn flatten(m: &DMatrix<Complex64>) -> DVector<f64> {
    let len = m.len();
    DVector::from_fn(2 * len, |k, _| if k < len { m[k].re } else { m[k - len].im })
}

fn unflatten(y: &DVector<f64>, dim: usize) -> DMatrix<Complex64> {
    let len = dim * dim;
    DMatrix::from_fn(dim, dim, |i, j| {
        let k = i + j * dim;
        Complex64::new(y[k], y[k + len])
    })
}
