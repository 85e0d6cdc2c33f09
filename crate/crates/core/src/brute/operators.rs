//! Collective pseudo-spin operators as sparse maps on the computational basis.
//!
//! `S₋ = Σ_μ σ₋^(μ)` sends a basis state to every state with one more set
//! (ground) bit, each with coefficient 1, so the operator is stored as plain
//! index lists. One instance per `N` is built lazily and shared.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result, MAX_VECTOR_ATOMS};

#[derive(Debug)]
pub struct CollectiveOperators {
    n_atoms: usize,
    /// `lowered[i]`: basis states reached from `i` by one `σ₋`.
    lowered: Vec<Vec<usize>>,
    /// `raised_from[a]`: basis states `i` with `a ∈ lowered[i]`.
    raised_from: Vec<Vec<usize>>,
}

static CACHE: [OnceLock<CollectiveOperators>; MAX_VECTOR_ATOMS + 1] =
    [const { OnceLock::new() }; MAX_VECTOR_ATOMS + 1];

impl CollectiveOperators {
    /// Shared operators for `n_atoms` atoms.
    pub fn get(n_atoms: usize) -> Result<&'static Self> {
        if n_atoms == 0 || n_atoms > MAX_VECTOR_ATOMS {
            return Err(Error::Capacity {
                what: "collective operators",
                n_atoms,
                cap: MAX_VECTOR_ATOMS,
            });
        }
        Ok(CACHE[n_atoms].get_or_init(|| Self::build(n_atoms)))
    }

    fn build(n_atoms: usize) -> Self {
        let dim = 1usize << n_atoms;
        let lowered: Vec<Vec<usize>> = (0..dim)
            .map(|i| {
                (0..n_atoms)
                    .map(|bit| 1usize << bit)
                    .filter(|mask| i & mask == 0)
                    .map(|mask| i | mask)
                    .collect()
            })
            .collect();
        let raised_from = (0..dim)
            .map(|a| {
                (0..n_atoms)
                    .map(|bit| 1usize << bit)
                    .filter(|mask| a & mask != 0)
                    .map(|mask| a & !mask)
                    .collect()
            })
            .collect();
        Self {
            n_atoms,
            lowered,
            raised_from,
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn apply_lowering(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(v.len());
        for (a, sources) in self.raised_from.iter().enumerate() {
            out[a] = sources.iter().map(|&i| v[i]).sum();
        }
        out
    }

    pub fn apply_raising(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(v.len());
        for (i, targets) in self.lowered.iter().enumerate() {
            out[i] = targets.iter().map(|&a| v[a]).sum();
        }
        out
    }

    /// `M` of each basis state: `(N - 2 n_g) / 2`.
    pub fn sz_eigenvalue(&self, index: usize) -> f64 {
        (self.n_atoms as f64 - 2.0 * index.count_ones() as f64) / 2.0
    }

    pub fn apply_sz(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(v.len(), |i, _| v[i] * self.sz_eigenvalue(i))
    }

    /// `S² = S₊S₋ + S_z² - S_z`.
    pub fn apply_s_squared(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = self.apply_raising(&self.apply_lowering(v));
        for i in 0..v.len() {
            let m = self.sz_eigenvalue(i);
            out[i] += v[i] * (m * m - m);
        }
        out
    }

    /// `S₋ ρ S₊`.
    pub fn sandwich_lowering(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut left = DMatrix::<Complex64>::zeros(dim, dim);
        for (a, sources) in self.raised_from.iter().enumerate() {
            for &i in sources {
                for col in 0..dim {
                    left[(a, col)] += rho[(i, col)];
                }
            }
        }
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for (b, sources) in self.raised_from.iter().enumerate() {
            for &j in sources {
                for row in 0..dim {
                    out[(row, b)] += left[(row, j)];
                }
            }
        }
        out
    }

    /// `S₊S₋ X` for an arbitrary square matrix.
    pub fn left_spsm(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut lowered = DMatrix::<Complex64>::zeros(dim, dim);
        for (a, sources) in self.raised_from.iter().enumerate() {
            for &i in sources {
                for col in 0..dim {
                    lowered[(a, col)] += x[(i, col)];
                }
            }
        }
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for (i, targets) in self.lowered.iter().enumerate() {
            for &a in targets {
                for col in 0..dim {
                    out[(i, col)] += lowered[(a, col)];
                }
            }
        }
        out
    }

    /// `Tr[S₊S₋ ρ] = Σ_a Σ_{i,j → a} ρ_ij`.
    pub fn expectation_spsm(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        self.raised_from
            .iter()
            .map(|sources| {
                sources
                    .iter()
                    .flat_map(|&i| sources.iter().map(move |&j| rho[(i, j)]))
                    .sum::<Complex64>()
            })
            .sum()
    }
}
