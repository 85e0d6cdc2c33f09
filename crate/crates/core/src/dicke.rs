//! Exact combinatorics of Dicke states.
//!
//! Quantum numbers are stored doubled (`j2 = 2J`, `m2 = 2M`) so that odd `N`
//! never needs half-integer arithmetic.

use nalgebra::DVector;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::combinatorics::{binomial, factorial};
use crate::{Error, Result, MAX_VECTOR_ATOMS};

/// Quantum numbers `(N, J, M)` of a Dicke state, doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DickeLabel {
    n_atoms: usize,
    j2: i64,
    m2: i64,
}

impl DickeLabel {
    pub fn new(n_atoms: usize, j2: i64, m2: i64) -> Result<Self> {
        let n = n_atoms as i64;
        let valid = n_atoms > 0
            && j2 >= 0
            && j2 <= n
            && m2.abs() <= j2
            && (n - j2).is_even()
            && (j2 - m2).is_even();
        if !valid {
            return Err(Error::InvalidLabel { n_atoms, j2, m2 });
        }
        Ok(Self { n_atoms, j2, m2 })
    }

    /// The symmetric state `|N/2, N/2 - n_ground>`.
    pub fn symmetric(n_atoms: usize, n_ground: usize) -> Result<Self> {
        let n = n_atoms as i64;
        Self::new(n_atoms, n, n - 2 * n_ground as i64)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn j2(&self) -> i64 {
        self.j2
    }

    pub fn m2(&self) -> i64 {
        self.m2
    }

    pub fn is_symmetric(&self) -> bool {
        self.j2 == self.n_atoms as i64
    }

    /// `N/2 - M`; only meaningful in the symmetric subspace.
    pub fn n_ground(&self) -> Option<usize> {
        self.is_symmetric()
            .then(|| ((self.n_atoms as i64 - self.m2) / 2) as usize)
    }
}

/// The three factors of the quantum-path intensity formula for `|J, M>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCount {
    /// Inverse squared normalization, `C(N, n_g)`.
    pub norm_sq_inverse: BigUint,
    /// Interfering path pairs per final state, `(n_g + 1)²`.
    pub pair_count: BigUint,
    /// Distinct final states, `C(N, n_g + 1)`.
    pub final_state_count: BigUint,
}

impl PathCount {
    /// `pair_count · final_state_count / norm_sq_inverse`, which is always an integer.
    pub fn intensity(&self) -> BigUint {
        let (q, r) = (&self.pair_count * &self.final_state_count).div_rem(&self.norm_sq_inverse);
        debug_assert!(r.is_zero());
        q
    }
}

/// Multiplicity `β = N!(2J+1) / ((N/2+J+1)!(N/2-J)!)` of the irreducible
/// representation with total pseudo-spin `J`.
pub fn degeneracy(n_atoms: usize, j2: i64) -> Result<BigUint> {
    // M = J is always a valid projection, so this checks range and parity
    let label = DickeLabel::new(n_atoms, j2, j2)?;
    let n = label.n_atoms as u64;
    let j2 = label.j2 as u64;
    let upper = (n + j2) / 2 + 1;
    let lower = (n - j2) / 2;
    let num = factorial(n) * (j2 + 1);
    let den = factorial(upper) * factorial(lower);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Dicke's intensity coefficient `(J+M)(J-M+1) = <J,M|S₊S₋|J,M>`.
pub fn intensity_coefficient(label: &DickeLabel) -> Result<BigUint> {
    if !label.is_symmetric() {
        return Err(Error::UnsupportedSubspace {
            n_atoms: label.n_atoms,
            j2: label.j2,
        });
    }
    let j_plus_m = ((label.j2 + label.m2) / 2) as u64;
    let j_minus_m_plus_one = ((label.j2 - label.m2) / 2 + 1) as u64;
    Ok(BigUint::from(j_plus_m) * j_minus_m_plus_one)
}

/// Intensity of `|N/2, N/2 - n_ground>` by counting interfering quantum paths.
///
/// Returns the three factors together with their (exact, integral) product
/// `(N - n_g)(n_g + 1)`.
pub fn path_count_intensity(n_atoms: usize, n_ground: usize) -> Result<(PathCount, BigUint)> {
    if n_atoms == 0 || n_ground >= n_atoms {
        return Err(Error::NoExcitation { n_atoms, n_ground });
    }
    let (n, g) = (n_atoms as u64, n_ground as u64);
    let count = PathCount {
        norm_sq_inverse: binomial(n, g),
        pair_count: BigUint::from((g + 1) * (g + 1)),
        final_state_count: binomial(n, g + 1),
    };
    let product = count.intensity();
    Ok((count, product))
}

/// Explicit `|N/2, N/2 - n_ground>` in the computational basis: amplitude
/// `C(N, n_g)^{-1/2}` on every basis state with exactly `n_ground` set bits.
pub fn symmetric_dicke_vector(n_atoms: usize, n_ground: usize) -> Result<DVector<Complex64>> {
    if n_atoms == 0 || n_atoms > MAX_VECTOR_ATOMS {
        return Err(Error::Capacity {
            what: "explicit state vector",
            n_atoms,
            cap: MAX_VECTOR_ATOMS,
        });
    }
    if n_ground > n_atoms {
        return Err(Error::OutOfRange(format!(
            "n_ground = {n_ground} exceeds N = {n_atoms}"
        )));
    }
    let dim = 1usize << n_atoms;
    let count = crate::combinatorics::binomial_f64(n_atoms as u64, n_ground as u64);
    let amp = Complex64::new(count.sqrt().recip(), 0.0);
    Ok(DVector::from_fn(dim, |i, _| {
        if i.count_ones() as usize == n_ground {
            amp
        } else {
            Complex64::zero()
        }
    }))
}
