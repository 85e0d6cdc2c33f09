//! Reference implementation on the full `2^N`-dimensional Hilbert space.
//!
//! Nothing here exploits permutation symmetry; the module exists so that the
//! reduced and closed-form routes have an independent oracle.

mod channel;
mod measure;
pub mod operators;
mod projection;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result, MAX_DENSITY_ATOMS};

pub use channel::{evolve_channel, evolve_collective, evolve_lindblad, lindblad_rhs, collective_lindblad_rhs};
pub use measure::{cascade_brute, collapse_forward, expectation_spsm, multi_time_g, multi_time_g_for, CollapseResult};
pub use projection::{project_symmetric, project_symmetric_matrix, symmetric_overlaps, trace_distance_brute};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semi-definite operator on `N` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_atoms: usize,
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `data` against the density-matrix invariants.
    pub fn new(n_atoms: usize, data: DMatrix<Complex64>) -> Result<Self> {
        check_capacity(n_atoms)?;
        let dim = 1usize << n_atoms;
        if data.shape() != (dim, dim) {
            return Err(Error::InvalidState(format!(
                "expected {dim}x{dim} for N = {n_atoms}, got {:?}",
                data.shape()
            )));
        }
        let rho = Self { n_atoms, data };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; callers guarantee the invariants (CPTP images, normalized collapses).
    pub(crate) fn from_trusted(n_atoms: usize, data: DMatrix<Complex64>) -> Self {
        Self { n_atoms, data }
    }

    pub fn pure(n_atoms: usize, psi: &DVector<Complex64>) -> Result<Self> {
        check_capacity(n_atoms)?;
        let norm = psi.norm();
        if psi.len() != 1 << n_atoms || norm == 0.0 {
            return Err(Error::InvalidState("state vector has wrong length or zero norm".into()));
        }
        let psi = psi / Complex64::from(norm);
        Ok(Self::from_trusted(n_atoms, &psi * psi.adjoint()))
    }

    /// Projector onto computational basis state `index`.
    pub fn basis(n_atoms: usize, index: usize) -> Result<Self> {
        check_capacity(n_atoms)?;
        let dim = 1usize << n_atoms;
        if index >= dim {
            return Err(Error::OutOfRange(format!("basis index {index} >= {dim}")));
        }
        let mut data = DMatrix::zeros(dim, dim);
        data[(index, index)] = Complex64::new(1.0, 0.0);
        Ok(Self::from_trusted(n_atoms, data))
    }

    pub fn fully_excited(n_atoms: usize) -> Result<Self> {
        Self::basis(n_atoms, 0)
    }

    pub fn all_ground(n_atoms: usize) -> Result<Self> {
        Self::basis(n_atoms, (1usize << n_atoms) - 1)
    }

    /// `|N/2, N/2 - n_ground><N/2, N/2 - n_ground|`.
    pub fn symmetric_dicke(n_atoms: usize, n_ground: usize) -> Result<Self> {
        check_capacity(n_atoms)?;
        Self::pure(n_atoms, &crate::dicke::symmetric_dicke_vector(n_atoms, n_ground)?)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let d = self.data[(i, j)] - self.data[(j, i)].conj();
                if d.norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidState(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let tr = self.data.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.data.clone().symmetric_eigenvalues().min();
        if min < -EIGEN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// True when there are no coherences between different ground-state counts.
    pub fn is_block_diagonal(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| {
            (0..dim).all(|j| i.count_ones() == j.count_ones() || self.data[(i, j)].norm() <= tol)
        })
    }
}

fn check_capacity(n_atoms: usize) -> Result<()> {
    if n_atoms == 0 || n_atoms > MAX_DENSITY_ATOMS {
        return Err(Error::Capacity {
            what: "full density matrix",
            n_atoms,
            cap: MAX_DENSITY_ATOMS,
        });
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(DensityMatrix::fully_excited(3).unwrap().validate().is_ok());
        assert!(matches!(DensityMatrix::fully_excited(9), Err(Error::Capacity { .. })));
        let bad = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        // rank one, trace one: valid
        assert!(DensityMatrix::new(1, bad).is_ok());
        let not_psd = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0),
        ]);
        assert!(matches!(DensityMatrix::new(1, not_psd), Err(Error::InvalidState(_))));
        let wrong_trace = DMatrix::identity(2, 2);
        assert!(DensityMatrix::new(1, wrong_trace).is_err());
    }

    #[test]
    fn block_diagonal_detection() {
        assert!(DensityMatrix::symmetric_dicke(4, 2).unwrap().is_block_diagonal(1e-14));
        let plus = DVector::from_vec(vec![Complex64::new(1.0, 0.0); 2]);
        assert!(!DensityMatrix::pure(1, &plus).unwrap().is_block_diagonal(1e-14));
    }
}
