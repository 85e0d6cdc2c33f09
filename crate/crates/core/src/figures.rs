//! Tabulated curves for the three figure types, rendered as CSV text.
//!
//! Collapse instants appear twice: once closing the segment before the click
//! and once opening the segment after it.

use std::fmt::Write as _;

use crate::brute::{collapse_forward, evolve_channel, expectation_spsm, trace_distance_brute, DensityMatrix};
use crate::cascade::validate_schedule;
use crate::small_sample::{default_grid, evolve_populations, fully_excited_distribution, peak_stats};
use crate::trace_distance::trace_distance_analytic;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Brute,
    Analytic,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::Analytic => "analytic",
        }
    }
}

/// Uniform grid with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() || start < 0.0 || stop <= start || points < 2 {
            return Err(Error::InvalidTimes(format!(
                "grid needs 0 <= start < stop and at least 2 points, got [{start}, {stop}] with {points}"
            )));
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.stop } else { self.start + step * k as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Lines emitted after `# `.
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Reals use 17 significant digits so that every value parses back exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = match cell {
                    Cell::Real(x) => write!(out, "{x:.16e}"),
                    Cell::Int(n) => write!(out, "{n}"),
                };
            }
            out.push('\n');
        }
        out
    }
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn preamble(command: &str) -> Vec<String> {
    vec![
        format!("superradiance {}", env!("CARGO_PKG_VERSION")),
        format!("command: {command}"),
    ]
}

/// Intensity of fully excited small samples, one column per `N`.
///
/// Without a grid, the default grid of the smallest `N` is used so that every
/// burst fits.
pub fn small_sample_table(atoms: &[usize], gamma: f64, grid: Option<Grid>) -> Result<Table> {
    if atoms.is_empty() || atoms.contains(&0) {
        return Err(Error::OutOfRange("at least one atom count, each >= 1, is required".into()));
    }
    let times = match grid {
        Some(g) => g.values(),
        None => default_grid(*atoms.iter().min().unwrap_or(&1), gamma),
    };
    // integration always starts at the fully excited instant t = 0
    let offset = usize::from(times[0] > 0.0);
    let solve_times: Vec<f64> = std::iter::once(0.0).take(offset).chain(times.iter().copied()).collect();

    let mut metadata = preamble("small-sample");
    metadata.push(format!("atoms: {}", list(atoms)));
    metadata.push(format!("gamma: {gamma}"));
    metadata.push(format!("grid: {} points on [{}, {}]", times.len(), times[0], times[times.len() - 1]));
    metadata.push("initial state: fully excited".into());
    let mut columns = Vec::with_capacity(atoms.len());
    for &n in atoms {
        let curve = evolve_populations(n, gamma, &fully_excited_distribution(n), &solve_times)?;
        if let Ok(p) = peak_stats(&curve) {
            metadata.push(format!(
                "peak N={n}: gamma_t={:.6e} intensity={:.6e} fwhm_gamma_t={:.6e}{}",
                gamma * p.t_peak,
                p.i_peak,
                gamma * p.fwhm,
                if p.boundary_peak { " (boundary)" } else { "" }
            ));
        }
        columns.push(curve.intensity[offset..].to_vec());
    }

    let mut header = vec!["gamma_t".to_string()];
    header.extend(atoms.iter().map(|n| format!("intensity_n{n}")));
    let rows = times
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let mut row = vec![Cell::Real(gamma * t)];
            row.extend(columns.iter().map(|c| Cell::Real(c[k])));
            row
        })
        .collect();
    Ok(Table { metadata, header, rows })
}

/// `N` clicks evenly spread over `(0, stop)`.
pub fn auto_schedule(n_atoms: usize, stop: f64) -> Vec<f64> {
    (1..=n_atoms).map(|k| stop * k as f64 / (n_atoms + 1) as f64).collect()
}

/// Per-segment sample times: grid points strictly inside the segment plus
/// both ends. Grid points within rounding of an end are dropped.
fn segment_times(grid: &[f64], start: f64, end: f64) -> Vec<f64> {
    let eps = 1e-12 * end.abs().max(1.0);
    let mut out = vec![start];
    out.extend(grid.iter().copied().filter(|&t| t > start + eps && t < end - eps));
    if end > start {
        out.push(end);
    }
    out
}

struct Sample {
    t: f64,
    segment: usize,
    intensity: f64,
    distance: f64,
}

/// Walks the schedule, producing conditional intensity and trace distance of
/// the state conditioned on the clicks so far. A tail segment runs from the
/// last click to the end of the grid.
fn cascade_samples(n_atoms: usize, gamma: f64, times: &[f64], grid: &[f64], engine: Engine, with_distance: bool) -> Result<Vec<Sample>> {
    validate_schedule(times)?;
    if n_atoms == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    if times.len() > n_atoms {
        return Err(Error::OutOfRange(format!("{} clicks requested but only {n_atoms} photons exist", times.len())));
    }
    let stop = grid.last().copied().unwrap_or(0.0).max(times.last().copied().unwrap_or(0.0));
    let mut state = match engine {
        Engine::Brute => Some(DensityMatrix::fully_excited(n_atoms)?),
        Engine::Analytic => None,
    };
    let mut out = Vec::new();
    let mut last = 0.0;
    for m in 1..=times.len() + 1 {
        let end = times.get(m - 1).copied().unwrap_or(stop);
        if m > times.len() && end <= last && !times.is_empty() {
            break;
        }
        let clicks = m - 1;
        let first = grid.first().copied().unwrap_or(0.0);
        for t in segment_times(grid, last, end).into_iter().filter(|t| *t >= first) {
            let (intensity, distance) = match &state {
                Some(rho) => {
                    let evolved = evolve_channel(rho, gamma, t - last)?;
                    let d = if with_distance { trace_distance_brute(&evolved) } else { 0.0 };
                    (expectation_spsm(&evolved), d)
                }
                None => {
                    let coefficient = (clicks + 1) * (n_atoms - clicks);
                    let d = if with_distance { trace_distance_analytic(n_atoms, clicks, gamma, t)? } else { 0.0 };
                    (coefficient as f64 * (-2.0 * gamma * t).exp(), d)
                }
            };
            out.push(Sample { t, segment: m, intensity, distance });
        }
        if let (Some(rho), Some(_)) = (&state, times.get(m - 1)) {
            state = Some(collapse_forward(&evolve_channel(rho, gamma, end - last)?)?.state);
        }
        last = end;
    }
    Ok(out)
}

fn cascade_metadata(command: &str, n_atoms: usize, gamma: f64, times: &[f64], engine: Engine) -> Vec<String> {
    let mut metadata = preamble(command);
    metadata.push(format!("atoms: {n_atoms}"));
    metadata.push(format!("gamma: {gamma}"));
    metadata.push(format!("engine: {}", engine.name()));
    metadata.push("initial state: fully excited".into());
    let instants: Vec<String> = times.iter().map(|t| format!("{:.16e}", gamma * t)).collect();
    metadata.push(format!("collapse instants (gamma_t): {}", instants.join(",")));
    metadata
}

/// Resolves the click schedule and sample grid shared by the cascade tables.
fn cascade_inputs(n_atoms: usize, gamma: f64, times: Option<&[f64]>, grid: Option<Grid>) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = match grid {
        Some(g) => g,
        None => {
            let stop = times
                .and_then(|t| t.last().copied())
                .map(|t| t * 1.25)
                .filter(|t| *t > 0.0)
                .unwrap_or(1.0 / gamma);
            Grid::new(0.0, stop, 201)?
        }
    };
    let times = match times {
        Some(t) => t.to_vec(),
        None => auto_schedule(n_atoms, grid.stop),
    };
    Ok((times, grid.values()))
}

/// Conditional intensity along a detection cascade.
pub fn cascade_table(n_atoms: usize, gamma: f64, times: Option<&[f64]>, grid: Option<Grid>, engine: Engine) -> Result<Table> {
    let (times, grid) = cascade_inputs(n_atoms, gamma, times, grid)?;
    let samples = cascade_samples(n_atoms, gamma, &times, &grid, engine, false)?;
    Ok(Table {
        metadata: cascade_metadata("cascade", n_atoms, gamma, &times, engine),
        header: ["gamma_t", "conditional_intensity", "segment"].map(String::from).to_vec(),
        rows: samples
            .iter()
            .map(|s| vec![Cell::Real(gamma * s.t), Cell::Real(s.intensity), Cell::Int(s.segment)])
            .collect(),
    })
}

/// Conditional intensity together with the distance from the symmetric subspace.
pub fn trace_distance_table(n_atoms: usize, gamma: f64, times: Option<&[f64]>, grid: Option<Grid>, engine: Engine) -> Result<Table> {
    let (times, grid) = cascade_inputs(n_atoms, gamma, times, grid)?;
    let samples = cascade_samples(n_atoms, gamma, &times, &grid, engine, true)?;
    Ok(Table {
        metadata: cascade_metadata("trace-distance", n_atoms, gamma, &times, engine),
        header: ["gamma_t", "conditional_intensity", "trace_distance", "segment"].map(String::from).to_vec(),
        rows: samples
            .iter()
            .map(|s| {
                vec![
                    Cell::Real(gamma * s.t),
                    Cell::Real(s.intensity),
                    Cell::Real(s.distance),
                    Cell::Int(s.segment),
                ]
            })
            .collect(),
    })
}
