use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DensityMatrix;
use crate::combinatorics::binomial_f64;

/// Eigenvalues smaller than this in magnitude do not contribute to the trace norm.
const EIGEN_FLOOR: f64 = 1e-13;

/// `P X P` with `P = Σ_M |J,M><J,M|` the projector onto the symmetric subspace.
pub fn project_symmetric_matrix(n_atoms: usize, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = x.nrows();
    let block_norm: Vec<f64> = (0..=n_atoms)
        .map(|g| binomial_f64(n_atoms as u64, g as u64).sqrt().recip())
        .collect();
    // raw block sums Σ_{i∈n, j∈n'} X_ij
    let mut sums = DMatrix::<Complex64>::zeros(n_atoms + 1, n_atoms + 1);
    for i in 0..dim {
        let gi = i.count_ones() as usize;
        for j in 0..dim {
            sums[(gi, j.count_ones() as usize)] += x[(i, j)];
        }
    }
    DMatrix::from_fn(dim, dim, |i, j| {
        let (gi, gj) = (i.count_ones() as usize, j.count_ones() as usize);
        let scale = block_norm[gi] * block_norm[gj];
        sums[(gi, gj)] * (scale * scale)
    })
}

/// Unnormalized projection of `ρ` onto the symmetric subspace.
pub fn project_symmetric(rho: &DensityMatrix) -> DMatrix<Complex64> {
    project_symmetric_matrix(rho.n_atoms(), rho.data())
}

/// `<J,M|ρ|J,M>` for `n_g = 0..=N`.
pub fn symmetric_overlaps(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.n_atoms();
    let mut sums = vec![0.0; n + 1];
    for i in 0..rho.dim() {
        for j in (0..rho.dim()).filter(|j| j.count_ones() == i.count_ones()) {
            sums[i.count_ones() as usize] += rho.data()[(i, j)].re;
        }
    }
    sums.iter()
        .enumerate()
        .map(|(g, s)| s / binomial_f64(n as u64, g as u64))
        .collect()
}

/// `½ Σ |λ_i|` over the eigenvalues of `ρ - P ρ P`.
pub fn trace_distance_brute(rho: &DensityMatrix) -> f64 {
    let diff = rho.data() - project_symmetric(rho);
    let eigenvalues = diff.symmetric_eigenvalues();
    0.5 * eigenvalues
        .iter()
        .filter(|l| l.abs() >= EIGEN_FLOOR)
        .map(|l| l.abs())
        .sum::<f64>()
}
