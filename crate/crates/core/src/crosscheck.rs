//! Seeded comparison of every closed-form or reduced route against the
//! brute-force oracle, summarized per property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brute::{
    cascade_brute, collapse_forward, evolve_channel, evolve_collective, expectation_spsm, multi_time_g,
    symmetric_overlaps, trace_distance_brute, DensityMatrix,
};
use crate::dicke::{path_count_intensity, symmetric_dicke_vector};
use crate::reduced::{collapse_reduced, conditional_intensity_analytic, ReducedGenerator, ReducedState};
use crate::small_sample::{evolve_populations, fully_excited_distribution};
use crate::trace_distance::trace_distance_analytic;
use crate::combinatorics::big_to_f64;
use crate::{Error, Result, MAX_DENSITY_ATOMS};

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckConfig {
    pub seed: u64,
    /// Largest `N` used for density-matrix comparisons.
    pub max_brute_atoms: usize,
    pub schedules_per_size: usize,
    /// Feed coefficient of the reduced generator, see [`ReducedGenerator`].
    pub feed_scale: f64,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_brute_atoms: 5,
            schedules_per_size: 3,
            feed_scale: ReducedGenerator::default().feed_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub instances: usize,
    pub max_abs_deviation: f64,
    pub max_rel_deviation: f64,
    pub tolerance: f64,
    /// Whether the tolerance applies to the relative deviation.
    pub relative: bool,
    pub passed: bool,
}

struct Tally {
    instances: usize,
    abs: f64,
    rel: f64,
}

impl Tally {
    fn new() -> Self {
        Self { instances: 0, abs: 0.0, rel: 0.0 }
    }

    fn add(&mut self, got: f64, expected: f64) {
        self.instances += 1;
        let d = (got - expected).abs();
        let scale = expected.abs().max(got.abs());
        // NaN deviations must fail, so they are kept as infinite
        let d = if d.is_nan() { f64::INFINITY } else { d };
        self.abs = self.abs.max(d);
        self.rel = self.rel.max(if scale > 0.0 { d / scale } else { d });
    }

    fn finish(self, name: &'static str, tolerance: f64, relative: bool) -> PropertyReport {
        let dev = if relative { self.rel } else { self.abs };
        PropertyReport {
            name,
            instances: self.instances,
            max_abs_deviation: self.abs,
            max_rel_deviation: self.rel,
            tolerance,
            relative,
            passed: self.instances > 0 && dev <= tolerance,
        }
    }
}

fn schedule(rng: &mut ChaCha8Rng, clicks: usize) -> Vec<f64> {
    let mut t = 0.0;
    (0..clicks)
        .map(|_| {
            t += rng.gen_range(0.0..0.5);
            t
        })
        .collect()
}

pub fn run_crosscheck(config: &CrosscheckConfig) -> Result<Vec<PropertyReport>> {
    if config.max_brute_atoms == 0 || config.max_brute_atoms > MAX_DENSITY_ATOMS {
        return Err(Error::Capacity {
            what: "brute-force cross-check",
            n_atoms: config.max_brute_atoms,
            cap: MAX_DENSITY_ATOMS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sizes = 1..=config.max_brute_atoms;
    let mut reports = Vec::new();

    let mut tally = Tally::new();
    for n in 1..=8 {
        for g in 0..n {
            let v = symmetric_dicke_vector(n, g)?;
            let ops = crate::brute::operators::CollectiveOperators::get(n)?;
            let explicit = ops.apply_lowering(&v).norm_squared();
            tally.add(big_to_f64(&path_count_intensity(n, g)?.1), explicit);
        }
    }
    reports.push(tally.finish("path_count_vs_operator", 1e-9, false));

    let mut tally = Tally::new();
    for n in sizes.clone() {
        for _ in 0..config.schedules_per_size {
            let times = schedule(&mut rng, n);
            let rec = cascade_brute(n, 1.0, &times, &DensityMatrix::fully_excited(n)?, 1)?;
            for s in &rec.segments {
                tally.add(s.coefficient, (s.index * (n - s.index + 1)) as f64);
            }
        }
    }
    reports.push(tally.finish("cascade_coefficients", 1e-9, false));

    let mut tally = Tally::new();
    let generator = ReducedGenerator { feed_scale: config.feed_scale };
    for n in sizes.clone() {
        for _ in 0..config.schedules_per_size {
            let mut reduced = ReducedState::fully_excited(n)?;
            let mut brute = DensityMatrix::fully_excited(n)?;
            let mut last = 0.0;
            for t in schedule(&mut rng, n) {
                reduced = generator.evolve(&reduced, 1.0, t - last)?;
                brute = evolve_channel(&brute, 1.0, t - last)?;
                tally.add(reduced.max_deviation_from(&brute), 0.0);
                // a wrong generator may already have lost the photon
                let Ok((next, _)) = collapse_reduced(&reduced) else {
                    tally.add(f64::INFINITY, 0.0);
                    break;
                };
                reduced = next;
                brute = collapse_forward(&brute)?.state;
                tally.add(reduced.max_deviation_from(&brute), 0.0);
                last = t;
            }
        }
    }
    reports.push(tally.finish("reduced_vs_brute_state", 1e-9, false));

    let mut tally = Tally::new();
    for n in 1..=12 {
        for m in 1..=n {
            let t = rng.gen_range(0.0..2.0);
            let c = conditional_intensity_analytic(n, m, 1.0, t)?;
            tally.add(c.summed, c.closed_form);
        }
    }
    reports.push(tally.finish("conditional_intensity_sum", 1e-10, true));

    let mut tally = Tally::new();
    for n in sizes.clone() {
        for _ in 0..config.schedules_per_size {
            let times = schedule(&mut rng, n);
            let m = rng.gen_range(1..=n);
            let rec = cascade_brute(n, 1.0, &times[..m], &DensityMatrix::fully_excited(n)?, 1)?;
            tally.add(rec.click_weight_product(), multi_time_g(n, 1.0, &times[..m])?);
        }
    }
    reports.push(tally.finish("multi_time_factorization", 1e-10, true));

    let mut tally = Tally::new();
    for n in sizes.clone() {
        let mut rho = DensityMatrix::fully_excited(n)?;
        let mut last = 0.0;
        for (m, t) in schedule(&mut rng, n).into_iter().enumerate() {
            for probe in [last, 0.5 * (last + t), t] {
                let evolved = evolve_channel(&rho, 1.0, probe - last)?;
                tally.add(trace_distance_analytic(n, m, 1.0, probe)?, trace_distance_brute(&evolved));
            }
            rho = collapse_forward(&evolve_channel(&rho, 1.0, t - last)?)?.state;
            last = t;
        }
    }
    reports.push(tally.finish("trace_distance_vs_brute", 1e-10, false));

    let mut tally = Tally::new();
    for n in 1..=config.max_brute_atoms.min(4) {
        let times = [0.0, 0.1, 0.25, 0.5];
        let curve = evolve_populations(n, 1.0, &fully_excited_distribution(n), &times)?;
        let mut rho = DensityMatrix::fully_excited(n)?;
        for k in 1..times.len() {
            rho = evolve_collective(&rho, 1.0, times[k] - times[k - 1])?;
            for (p, q) in curve.populations[k].iter().zip(symmetric_overlaps(&rho)) {
                tally.add(*p, q);
            }
            tally.add(curve.intensity[k], expectation_spsm(&rho));
        }
    }
    reports.push(tally.finish("small_sample_vs_collective_master_equation", 1e-8, false));

    Ok(reports)
}
