use nalgebra::DVector;
use num_complex::Complex64;

use super::operators::CollectiveOperators;
use super::{evolve_channel, DensityMatrix};
use crate::cascade::{segment_grid, validate_schedule, CascadeRecord, Segment};
use crate::{Error, Result, MAX_VECTOR_ATOMS};

/// Click weights below this are treated as "no photon can be detected".
const WEIGHT_FLOOR: f64 = 1e-14;

/// State after a forward-direction detection together with the
/// pre-normalization trace `Tr[S₋ρS₊] = G⁽¹⁾` at that instant.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    pub state: DensityMatrix,
    pub click_probability_weight: f64,
}

/// Applies `S₋ · S₊` (the far-field forward-direction field operator) and renormalizes.
pub fn collapse_forward(rho: &DensityMatrix) -> Result<CollapseResult> {
    let ops = CollectiveOperators::get(rho.n_atoms())?;
    let jumped = ops.sandwich_lowering(rho.data());
    let weight = jumped.trace().re;
    if !(weight >= WEIGHT_FLOOR) {
        return Err(Error::NoPhotonAvailable { weight });
    }
    Ok(CollapseResult {
        state: DensityMatrix::from_trusted(rho.n_atoms(), jumped / Complex64::from(weight)),
        click_probability_weight: weight,
    })
}

/// `<S₊S₋>_ρ`.
pub fn expectation_spsm(rho: &DensityMatrix) -> f64 {
    CollectiveOperators::get(rho.n_atoms())
        .map(|ops| ops.expectation_spsm(rho.data()).re)
        .unwrap_or(f64::NAN)
}

/// Chains free decay and forward collapses over the click schedule `times`.
///
/// Segment `m` samples `<S₊S₋>` of the conditional state between `t_{m-1}`
/// and `t_m`, then collapses at `t_m`.
pub fn cascade_brute(
    n_atoms: usize,
    gamma: f64,
    times: &[f64],
    initial: &DensityMatrix,
    samples_per_segment: usize,
) -> Result<CascadeRecord> {
    if initial.n_atoms() != n_atoms {
        return Err(Error::OutOfRange(format!(
            "initial state has {} atoms, expected {n_atoms}",
            initial.n_atoms()
        )));
    }
    validate_schedule(times)?;
    let mut state = initial.clone();
    let mut last = 0.0;
    let mut segments = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let samples = segment_grid(last, t, samples_per_segment)
            .into_iter()
            .map(|s| Ok((s, expectation_spsm(&evolve_channel(&state, gamma, s - last)?))))
            .collect::<Result<Vec<_>>>()?;
        let evolved = evolve_channel(&state, gamma, t - last)?;
        let collapse = collapse_forward(&evolved)?;
        let weight = collapse.click_probability_weight;
        segments.push(Segment {
            index: k + 1,
            start: last,
            end: t,
            coefficient: weight * (2.0 * gamma * t).exp(),
            exact_coefficient: None,
            click_weight: weight,
            samples,
        });
        state = collapse.state;
        last = t;
    }
    Ok(CascadeRecord {
        n_atoms,
        gamma,
        measurement_times: times.to_vec(),
        segments,
    })
}

/// `G⁽ᵐ⁾(t_1, …, t_m) = Π_l exp(-2γ t_l) · <(S₊)^m (S₋)^m>` for the fully excited start.
pub fn multi_time_g(n_atoms: usize, gamma: f64, times: &[f64]) -> Result<f64> {
    validate_schedule(times)?;
    if n_atoms == 0 || n_atoms > MAX_VECTOR_ATOMS {
        return Err(Error::Capacity {
            what: "multi-time correlation",
            n_atoms,
            cap: MAX_VECTOR_ATOMS,
        });
    }
    if times.len() > n_atoms {
        return Ok(0.0);
    }
    let ops = CollectiveOperators::get(n_atoms)?;
    let mut v = DVector::<Complex64>::zeros(ops.dim());
    v[0] = Complex64::new(1.0, 0.0);
    for _ in times {
        v = ops.apply_lowering(&v);
    }
    Ok(decay_product(gamma, times) * v.norm_squared())
}

/// Same correlation for an arbitrary block-diagonal initial state,
/// `Π_l exp(-2γ t_l) · Tr[(S₋)^m ρ (S₊)^m]`.
pub fn multi_time_g_for(initial: &DensityMatrix, gamma: f64, times: &[f64]) -> Result<f64> {
    validate_schedule(times)?;
    if !initial.is_block_diagonal(1e-12) {
        return Err(Error::InvalidState(
            "product-form correlation requires a state block-diagonal in the ground-state count".into(),
        ));
    }
    if times.len() > initial.n_atoms() {
        return Ok(0.0);
    }
    let ops = CollectiveOperators::get(initial.n_atoms())?;
    let mut m = initial.data().clone();
    for _ in times {
        m = ops.sandwich_lowering(&m);
    }
    Ok(decay_product(gamma, times) * m.trace().re)
}

fn decay_product(gamma: f64, times: &[f64]) -> f64 {
    (-2.0 * gamma * times.iter().sum::<f64>()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::testing::random_density;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collapse_of_fully_excited_state() {
        for n in 1..=5 {
            let c = collapse_forward(&DensityMatrix::fully_excited(n).unwrap()).unwrap();
            assert!((c.click_probability_weight - n as f64).abs() < 1e-12);
            let dicke = DensityMatrix::symmetric_dicke(n, 1).unwrap();
            assert!((c.state.data() - dicke.data()).camax() < 1e-14);
        }
    }

    #[test]
    fn collapse_of_ground_state_fails() {
        let err = collapse_forward(&DensityMatrix::all_ground(3).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NoPhotonAvailable { .. }));
    }

    #[test]
    fn third_click_weight_for_five_atoms() {
        let mut rho = DensityMatrix::fully_excited(5).unwrap();
        for _ in 0..2 {
            rho = collapse_forward(&rho).unwrap().state;
        }
        let c = collapse_forward(&rho).unwrap();
        assert!((c.click_probability_weight - 9.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_examples() {
        for n in 1..=6 {
            for g in 0..=n {
                let rho = DensityMatrix::symmetric_dicke(n, g).unwrap();
                let expected = ((n - g) * (g + 1)) as f64;
                assert!((expectation_spsm(&rho) - expected).abs() < 1e-12);
            }
        }
        let mixed = DensityMatrix::new(1, DMatrix::identity(2, 2) * Complex64::from(0.5)).unwrap();
        assert!((expectation_spsm(&mixed) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_matches_dense_contraction() {
        // explicit per-atom operator sum Σ_{μν} <σ₊^μ σ₋^ν>
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 4;
        let rho = random_density(&mut rng, n);
        let dim = 1 << n;
        let mut total = Complex64::new(0.0, 0.0);
        for mu in 0..n {
            for nu in 0..n {
                let (bm, bn) = (1usize << mu, 1usize << nu);
                // <i| σ₊^μ σ₋^ν |j> = 1 iff j has ν excited, i has μ excited, and j|bn == i|bm
                for j in (0..dim).filter(|j| j & bn == 0) {
                    let target = j | bn;
                    if target & bm == 0 {
                        continue;
                    }
                    let i = target & !bm;
                    total += rho.data()[(j, i)];
                }
            }
        }
        assert!((total.re - expectation_spsm(&rho)).abs() < 1e-12);
        assert!(total.im.abs() < 1e-12);
    }

    #[test]
    fn dicke_states_carry_no_dipole_and_split_into_incoherent_plus_correlations() {
        for n in 2..=5 {
            for g in 0..=n {
                let rho = DensityMatrix::symmetric_dicke(n, g).unwrap();
                let dim = 1 << n;
                let mut incoherent = 0.0;
                let mut correlations = 0.0;
                for mu in 0..n {
                    let bm = 1usize << mu;
                    // <σ₋^μ> = Σ_{j: μ excited} ρ_{j, j|bm}
                    let dipole: Complex64 = (0..dim).filter(|j| j & bm == 0).map(|j| rho.data()[(j, j | bm)]).sum();
                    assert!(dipole.norm() < 1e-14);
                    for nu in 0..n {
                        let bn = 1usize << nu;
                        let value: f64 = (0..dim)
                            .filter(|j| j & bn == 0 && (j | bn) & bm != 0)
                            .map(|j| rho.data()[(j, (j | bn) & !bm)].re)
                            .sum();
                        if mu == nu {
                            incoherent += value;
                        } else {
                            correlations += value;
                        }
                    }
                }
                let total = expectation_spsm(&rho);
                assert!((incoherent + correlations - total).abs() < 1e-12);
                assert!((incoherent - (n - g) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cascade_coefficients_for_five_atoms() {
        let rho = DensityMatrix::fully_excited(5).unwrap();
        let record = cascade_brute(5, 1.0, &[0.1, 0.25, 0.3, 0.9, 1.4], &rho, 4).unwrap();
        for (c, expected) in record.coefficients().iter().zip([5.0, 8.0, 9.0, 8.0, 5.0]) {
            assert!((c - expected).abs() < 1e-9, "{c} vs {expected}");
        }
        // sampled curve obeys the same law inside the segment
        for seg in &record.segments {
            for &(t, g) in &seg.samples {
                assert!((g - seg.coefficient * (-2.0 * t).exp()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cascade_single_atom() {
        let rho = DensityMatrix::fully_excited(1).unwrap();
        let record = cascade_brute(1, 1.0, &[0.5], &rho, 3).unwrap();
        assert!((record.segments[0].coefficient - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cascade_fails_beyond_excitation_count() {
        let rho = DensityMatrix::fully_excited(2).unwrap();
        let err = cascade_brute(2, 1.0, &[0.1, 0.2, 0.3], &rho, 2).unwrap_err();
        assert!(matches!(err, Error::NoPhotonAvailable { .. }));
    }

    #[test]
    fn multi_time_examples() {
        assert!((multi_time_g(2, 1.0, &[0.0, 0.0]).unwrap() - 4.0).abs() < 1e-12);
        for n in 1..=6 {
            assert!((multi_time_g(n, 1.0, &[0.0]).unwrap() - n as f64).abs() < 1e-12);
        }
        assert_eq!(multi_time_g(2, 1.0, &[0.0, 0.1, 0.2]).unwrap(), 0.0);
        let g = multi_time_g(5, 1.0, &[0.1, 0.2, 0.3]).unwrap();
        let record = cascade_brute(5, 1.0, &[0.1, 0.2, 0.3], &DensityMatrix::fully_excited(5).unwrap(), 2).unwrap();
        assert!((g - record.click_weight_product()).abs() < 1e-10 * g);
    }

    #[test]
    fn multi_time_factorization_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=5 {
            for m in 1..=n {
                let mut times: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.5)).collect();
                times.sort_by(f64::total_cmp);
                let rho = DensityMatrix::fully_excited(n).unwrap();
                let product = cascade_brute(n, 0.8, &times, &rho, 1).unwrap().click_weight_product();
                let g = multi_time_g(n, 0.8, &times).unwrap();
                let g_for = multi_time_g_for(&rho, 0.8, &times).unwrap();
                assert!((g - product).abs() <= 1e-10 * g);
                assert!((g - g_for).abs() <= 1e-10 * g);
            }
        }
    }

    #[test]
    fn multi_time_rejects_coherent_states() {
        let plus = DVector::from_vec(vec![Complex64::new(1.0, 0.0); 2]);
        let rho = DensityMatrix::pure(1, &plus).unwrap();
        assert!(multi_time_g_for(&rho, 1.0, &[0.1]).is_err());
    }
}
