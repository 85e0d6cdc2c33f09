//! Acceptance suite: nine criteria, each reported on one line.
//!
//! All criteria run sequentially inside a single test so that the reported
//! wall-clock times are not inflated by other tests running in parallel.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superradiance::brute::operators::CollectiveOperators;
use superradiance::brute::{
    cascade_brute, collapse_forward, evolve_channel, multi_time_g, trace_distance_brute, DensityMatrix,
};
use superradiance::combinatorics::binomial_f64;
use superradiance::crosscheck::{run_crosscheck, CrosscheckConfig};
use superradiance::dicke::{path_count_intensity, symmetric_dicke_vector};
use superradiance::figures::{cascade_table, small_sample_table, trace_distance_table, Engine, Grid};
use superradiance::reduced::{cascade_analytic, cascade_probability, collapse_reduced, evolve_reduced};
use superradiance::small_sample::{default_grid, evolve_populations, fully_excited_distribution, peak_stats};
use superradiance::trace_distance::{trace_distance_analytic, trace_distance_exact};
use superradiance::ReducedState;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Non-decreasing click times with gaps in `[0, max_gap)`.
fn random_schedule(rng: &mut ChaCha8Rng, clicks: usize, max_gap: f64) -> Vec<f64> {
    let mut t = 0.0;
    (0..clicks)
        .map(|_| {
            t += rng.gen_range(0.0..max_gap);
            t
        })
        .collect()
}

fn cascade_coefficients_of_five() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut schedules = vec![vec![0.2, 0.4, 0.6, 0.8, 1.0], vec![0.0; 5], vec![0.05, 0.06, 1.3, 1.31, 2.0]];
    schedules.extend((0..5).map(|_| random_schedule(&mut rng, 5, 0.6)));
    let expected = [5u32, 8, 9, 8, 5];
    let mut worst: f64 = 0.0;
    for times in &schedules {
        let exact = cascade_analytic(5, 1.0, times, 2).map_err(|e| e.to_string())?.exact_coefficients();
        let exact: Vec<BigUint> = exact.ok_or("analytic engine returned no exact coefficients")?;
        ensure!(exact == expected.map(BigUint::from).to_vec(), "analytic coefficients {exact:?}");
        let brute = cascade_brute(5, 1.0, times, &DensityMatrix::fully_excited(5).unwrap(), 1).unwrap();
        for (c, e) in brute.coefficients().iter().zip(expected) {
            worst = worst.max((c - e as f64).abs());
        }
    }
    ensure!(worst <= 1e-9, "brute coefficient deviation {worst:e}");
    Ok(format!("{} schedules, exact 5,8,9,8,5, brute max dev {worst:.1e}", schedules.len()))
}

fn general_coefficient_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=8usize {
        let start = DensityMatrix::fully_excited(n).unwrap();
        for _ in 0..10 {
            let times = random_schedule(&mut rng, n, 0.4);
            let rec = cascade_brute(n, 1.0, &times, &start, 1).unwrap();
            for s in &rec.segments {
                let m = s.index;
                worst = worst.max((s.coefficient - (m * (n - m + 1)) as f64).abs());
                count += 1;
            }
        }
    }
    ensure!(worst <= 1e-9, "max deviation {worst:e}");
    Ok(format!("{count} segments over N <= 8, max dev {worst:.1e}"))
}

fn path_counting_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 1..=8usize {
        for g in 0..=n {
            let explicit_int: u64 = integer_spsm(n, g);
            let v = symmetric_dicke_vector(n, g).unwrap();
            let explicit_float = CollectiveOperators::get(n).unwrap().apply_lowering(&v).norm_squared();
            ensure!(
                (explicit_float - explicit_int as f64).abs() < 1e-9,
                "float route {explicit_float} vs {explicit_int} at N = {n}, n_g = {g}"
            );
            match path_count_intensity(n, g) {
                Ok((_, paths)) => ensure!(paths == BigUint::from(explicit_int), "N = {n}, n_g = {g}: {paths} vs {explicit_int}"),
                Err(_) => ensure!(g == n && explicit_int == 0, "path count refused N = {n}, n_g = {g}"),
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} Dicke states, exact integer agreement"))
}

/// `C(N,g) · <D_g|S₊S₋|D_g>` from the unnormalized indicator vector, in integers.
fn integer_spsm_unnormalized(n: usize, g: usize) -> u64 {
    (0..1usize << n)
        .filter(|a| a.count_ones() as usize == g + 1)
        .map(|a| {
            // every parent with one fewer ground atom contributes amplitude 1
            let parents = (0..n).filter(|bit| a & (1 << bit) != 0).count() as u64;
            parents * parents
        })
        .sum()
}

fn integer_spsm(n: usize, g: usize) -> u64 {
    let total = integer_spsm_unnormalized(n, g);
    let norm = binomial_f64(n as u64, g as u64) as u64;
    assert_eq!(total % norm, 0);
    total / norm
}

fn reduced_brute_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_class: f64 = 0.0;
    let mut states = 0;
    for n in 1..=6usize {
        for _ in 0..4 {
            let len = rng.gen_range(1..=n);
            let times = random_schedule(&mut rng, len, 0.5);
            let mut reduced = ReducedState::fully_excited(n).unwrap();
            let mut brute = DensityMatrix::fully_excited(n).unwrap();
            let mut last = 0.0;
            for &t in &times {
                let mid = 0.5 * (t - last);
                for dt in [mid, t - last - mid] {
                    reduced = evolve_reduced(&reduced, 1.0, dt).unwrap();
                    brute = evolve_channel(&brute, 1.0, dt).unwrap();
                    ensure!(ReducedState::from_density(&brute, 1e-11).is_ok(), "brute state left the class family");
                    worst_class = worst_class.max(reduced.max_deviation_from(&brute));
                    states += 1;
                }
                reduced = collapse_reduced(&reduced).unwrap().0;
                brute = collapse_forward(&brute).unwrap().state;
                ensure!(ReducedState::from_density(&brute, 1e-11).is_ok(), "post-click brute state left the class family");
                worst_class = worst_class.max(reduced.max_deviation_from(&brute));
                states += 1;
                last = t;
            }
        }
    }
    ensure!(worst_class <= 1e-9, "class deviation {worst_class:e}");

    // free decay of the fully excited state, diagonal classes
    let mut worst_free: f64 = 0.0;
    for n in 1..=6usize {
        let start = ReducedState::fully_excited(n).unwrap();
        for k in 0..20 {
            let t = 0.1 * k as f64;
            let state = evolve_reduced(&start, 1.0, t).unwrap();
            let brute = evolve_channel(&DensityMatrix::fully_excited(n).unwrap(), 1.0, t).unwrap();
            for s in 0..=n {
                let closed = (-2.0 * n as f64 * t).exp() * (2.0 * t).exp_m1().powi(s as i32);
                let index = (1usize << s) - 1;
                worst_free = worst_free.max((state.value(s, s) - closed).abs());
                worst_free = worst_free.max((brute.data()[(index, index)].re - closed).abs());
            }
        }
    }
    ensure!(worst_free <= 1e-10, "free-decay closed form deviation {worst_free:e}");

    // before click m: block m-1+s holds p_s C(m-1+s, s) / C(N, m-1), for any earlier schedule
    let mut worst_seeded: f64 = 0.0;
    for n in 1..=6usize {
        for m in 1..=n {
            let earlier = random_schedule(&mut rng, m - 1, 0.1);
            let (mut brute, mut last) = (DensityMatrix::fully_excited(n).unwrap(), 0.0);
            for &t in &earlier {
                brute = collapse_forward(&evolve_channel(&brute, 1.0, t - last).unwrap()).unwrap().state;
                last = t;
            }
            let seed = ReducedState::dicke(n, m - 1).unwrap();
            for k in 0..20 {
                let t = last + 0.1 * k as f64;
                let state = evolve_reduced(&seed, 1.0, t).unwrap();
                let rho = evolve_channel(&brute, 1.0, t - last).unwrap();
                for s in 0..=n - m + 1 {
                    let g = m - 1 + s;
                    let closed = cascade_probability(n, m, s, 1.0, t).unwrap() * binomial_f64(g as u64, s as u64)
                        / binomial_f64(n as u64, (m - 1) as u64);
                    let index = (1usize << g) - 1;
                    worst_seeded = worst_seeded.max((state.value(g, g) - closed).abs());
                    worst_seeded = worst_seeded.max((rho.data()[(index, index)].re - closed).abs());
                }
            }
        }
    }
    ensure!(worst_seeded <= 1e-10, "post-click closed form deviation {worst_seeded:e}");
    Ok(format!(
        "{states} states, class dev {worst_class:.1e}; closed forms dev {worst_free:.1e} / {worst_seeded:.1e}"
    ))
}

fn multi_time_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=5usize {
        for m in 1..=n {
            for _ in 0..5 {
                let times = random_schedule(&mut rng, m, 0.7);
                let rec = cascade_brute(n, 1.0, &times, &DensityMatrix::fully_excited(n).unwrap(), 1).unwrap();
                let product = rec.click_weight_product();
                let correlation = multi_time_g(n, 1.0, &times).unwrap();
                worst = worst.max((product - correlation).abs() / correlation.abs());
                count += 1;
            }
        }
    }
    ensure!(worst <= 1e-10, "relative deviation {worst:e}");
    Ok(format!("{count} time tuples, max rel dev {worst:.1e}"))
}

fn trace_distance_formula() -> Outcome {
    let times: Vec<f64> = (0..20).map(|k| 5.0 * 10f64.powf(-3.0 + 3.0 * k as f64 / 19.0)).collect();
    let mut worst: f64 = 0.0;
    for n in 1..=6usize {
        let mut rho = DensityMatrix::fully_excited(n).unwrap();
        for m in 0..=n {
            for &t in &times {
                let analytic = trace_distance_analytic(n, m, 1.0, t).unwrap();
                ensure!((0.0..=1.0).contains(&analytic), "value {analytic} outside [0, 1]");
                let brute = trace_distance_brute(&evolve_channel(&rho, 1.0, t).unwrap());
                worst = worst.max((analytic - brute).abs());
            }
            ensure!(trace_distance_exact(n, m, &BigRational::one()).unwrap().is_zero(), "T(0) != 0 for N = {n}, m = {m}");
            if m < n {
                rho = collapse_forward(&rho).unwrap().state;
            }
        }
        for &t in &times {
            ensure!(trace_distance_analytic(n, n, 1.0, t).unwrap() == 0.0, "T != 0 for m = N = {n}");
        }
    }
    ensure!(worst <= 1e-10, "analytic vs brute deviation {worst:e}");
    Ok(format!("N <= 6, all m, 20 times: max dev {worst:.1e}; T(0) = 0 exactly"))
}

fn measurement_projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut clicks = 0;
    let mut tightest = f64::INFINITY;
    for n in 1..=6usize {
        for _ in 0..10 {
            let times = random_schedule(&mut rng, n, 0.5);
            let mut rho = DensityMatrix::fully_excited(n).unwrap();
            let mut last = 0.0;
            for &t in &times {
                let before = evolve_channel(&rho, 1.0, t - last).unwrap();
                rho = collapse_forward(&before).unwrap().state;
                let (a, b) = (trace_distance_brute(&before), trace_distance_brute(&rho));
                ensure!(b <= a + 1e-12, "N = {n}, t = {t}: {b} after vs {a} before");
                tightest = tightest.min(a - b);
                clicks += 1;
                last = t;
            }
        }
    }
    Ok(format!("{clicks} clicks, smallest decrease {tightest:.1e}"))
}

fn superradiant_scaling() -> Outcome {
    let mut stats = Vec::new();
    let mut worst_sum: f64 = 0.0;
    for n in [10usize, 20, 40] {
        let curve = evolve_populations(n, 1.0, &fully_excited_distribution(n), &default_grid(n, 1.0)).unwrap();
        for row in &curve.populations {
            worst_sum = worst_sum.max((row.iter().sum::<f64>() - 1.0).abs());
        }
        let p = peak_stats(&curve).unwrap();
        ensure!(!p.boundary_peak, "N = {n} peaks on the grid boundary");
        stats.push(p);
    }
    ensure!(worst_sum <= 1e-9, "probability drift {worst_sum:e}");
    let mut ratios = Vec::new();
    for w in stats.windows(2) {
        let height = w[1].i_peak / w[0].i_peak;
        let width = w[0].fwhm / w[1].fwhm;
        ensure!((3.5..=4.5).contains(&height), "peak ratio {height}");
        ensure!((1.7..=2.3).contains(&width), "FWHM ratio {width}");
        ratios.push(format!("{height:.3}/{width:.3}"));
    }
    Ok(format!("peak/FWHM ratios 10->20 {}, 20->40 {}; drift {worst_sum:.1e}", ratios[0], ratios[1]))
}

fn determinism() -> Outcome {
    let grid = Some(Grid::new(0.0, 1.0, 101).unwrap());
    let times = [0.1, 0.3, 0.45, 0.7, 0.9];
    let render = || -> Vec<String> {
        vec![
            small_sample_table(&[10, 20, 30], 1.0, None).unwrap().to_csv(),
            small_sample_table(&[5], 1.0, grid).unwrap().to_csv(),
            cascade_table(5, 1.0, Some(&times), grid, Engine::Analytic).unwrap().to_csv(),
            cascade_table(5, 1.0, None, None, Engine::Brute).unwrap().to_csv(),
            trace_distance_table(5, 1.0, Some(&times), grid, Engine::Analytic).unwrap().to_csv(),
            trace_distance_table(4, 1.0, Some(&times[..3]), grid, Engine::Brute).unwrap().to_csv(),
        ]
    };
    let (a, b) = (render(), render());
    ensure!(a == b, "CSV output differs between runs");
    for csv in &a {
        ensure!(!csv.contains('\r'), "carriage return in output");
        let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
        let header = lines.next().ok_or("missing header")?;
        let width = header.split(',').count();
        ensure!(header.starts_with("gamma_t,"), "header {header}");
        ensure!(lines.all(|l| l.split(',').count() == width && !l.starts_with('#')), "ragged or interleaved rows");
    }
    let config = CrosscheckConfig { seed: 42, ..CrosscheckConfig::default() };
    ensure!(run_crosscheck(&config).unwrap() == run_crosscheck(&config).unwrap(), "crosscheck report differs");
    let bytes: usize = a.iter().map(String::len).sum();
    Ok(format!("{} CSV files ({bytes} bytes) and seeded crosscheck identical across runs", a.len()))
}

/// Written to stderr directly so the lines show up without `--nocapture`.
fn report(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 cascade coefficients 5,8,9,8,5", cascade_coefficients_of_five, Duration::from_secs(1)),
        ("2 coefficient law m(N-m+1)", general_coefficient_law, Duration::from_secs(30)),
        ("3 path counting = <S+S->", path_counting_equivalence, Duration::from_secs(5)),
        ("4 reduced/brute state equivalence", reduced_brute_equivalence, Duration::from_secs(60)),
        ("5 multi-time factorization", multi_time_factorization, Duration::from_secs(10)),
        ("6 trace distance formula", trace_distance_formula, Duration::from_secs(60)),
        ("7 click moves state toward symmetric subspace", measurement_projection, Duration::from_secs(30)),
        ("8 superradiant scaling", superradiant_scaling, Duration::from_secs(5)),
        ("9 determinism and CSV format", determinism, Duration::from_secs(60)),
    ];
    let mut failures = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match &outcome {
            Ok(detail) => report(format!("PASS  {name} [{elapsed:.2?}] {detail}")),
            Err(why) => {
                report(format!("FAIL  {name} [{elapsed:.2?}] {why}"));
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
