//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: the small-sample burst for several `N`, the conditional
//! intensity and trace distance along a click cascade, and the exact segment
//! coefficients. Each wrapper forwards to a plain Rust function so the logic
//! can be tested natively.

use wasm_bindgen::prelude::*;

use superradiance::figures::{trace_distance_table, Cell, Engine, Grid};
use superradiance::reduced::cascade_analytic;
use superradiance::small_sample::{evolve_populations, fully_excited_distribution, peak_stats};

/// Sampled curves sharing one time axis (`γt`).
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    gamma_t: Vec<f64>,
    labels: Vec<String>,
    series: Vec<Vec<f64>>,
    /// Extra per-series information, e.g. the curve peak.
    notes: Vec<String>,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(js_name = gammaT)]
    pub fn gamma_t(&self) -> Vec<f64> {
        self.gamma_t.clone()
    }

    #[wasm_bindgen(js_name = seriesCount)]
    pub fn series_count(&self) -> usize {
        self.series.len()
    }

    pub fn series(&self, index: usize) -> Vec<f64> {
        self.series.get(index).cloned().unwrap_or_default()
    }

    pub fn label(&self, index: usize) -> String {
        self.labels.get(index).cloned().unwrap_or_default()
    }

    pub fn note(&self, index: usize) -> String {
        self.notes.get(index).cloned().unwrap_or_default()
    }
}

/// Largest `N` the page accepts for the ladder integration.
const MAX_DEMO_ATOMS: u32 = 400;

pub fn burst_curves(atoms: &[u32], gamma: f64, t_stop: f64, points: usize) -> Result<Curves, String> {
    if atoms.is_empty() || atoms.iter().any(|&n| n == 0 || n > MAX_DEMO_ATOMS) {
        return Err(format!("atom counts must lie in 1..={MAX_DEMO_ATOMS}"));
    }
    let times = Grid::new(0.0, t_stop, points).map_err(|e| e.to_string())?.values();
    let mut curves = Curves {
        gamma_t: times.iter().map(|t| gamma * t).collect(),
        labels: Vec::new(),
        series: Vec::new(),
        notes: Vec::new(),
    };
    for &n in atoms {
        let n = n as usize;
        let curve = evolve_populations(n, gamma, &fully_excited_distribution(n), &times).map_err(|e| e.to_string())?;
        let note = match peak_stats(&curve) {
            Ok(p) if !p.boundary_peak => format!(
                "peak {:.4} at γt = {:.4}, FWHM {:.4}",
                p.i_peak,
                gamma * p.t_peak,
                gamma * p.fwhm
            ),
            Ok(_) => "monotone decay".to_string(),
            Err(_) => "burst extends past the window".to_string(),
        };
        curves.labels.push(format!("N = {n}"));
        curves.series.push(curve.intensity);
        curves.notes.push(note);
    }
    Ok(curves)
}

pub fn cascade_curves(atoms: u32, gamma: f64, clicks: &[f64], t_stop: f64, points: usize) -> Result<Curves, String> {
    let grid = Grid::new(0.0, t_stop, points).map_err(|e| e.to_string())?;
    let table = trace_distance_table(atoms as usize, gamma, Some(clicks), Some(grid), Engine::Analytic)
        .map_err(|e| e.to_string())?;
    let column = |i: usize| -> Vec<f64> {
        table
            .rows
            .iter()
            .map(|r| match r[i] {
                Cell::Real(x) => x,
                Cell::Int(n) => n as f64,
            })
            .collect()
    };
    Ok(Curves {
        gamma_t: column(0),
        labels: vec!["conditional intensity".into(), "trace distance".into(), "segment".into()],
        series: vec![column(1), column(2), column(3)],
        notes: Vec::new(),
    })
}

/// Exact segment coefficients `m(N-m+1)`, comma separated.
pub fn coefficients(atoms: u32) -> Result<String, String> {
    let n = atoms as usize;
    if n == 0 {
        return Err("N must be at least 1".into());
    }
    let times = vec![0.0; n];
    let record = cascade_analytic(n, 1.0, &times, 1).map_err(|e| e.to_string())?;
    let exact = record.exact_coefficients().unwrap_or_default();
    Ok(exact.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
}

#[wasm_bindgen(js_name = smallSampleCurves)]
pub fn small_sample_curves(atoms: &[u32], gamma: f64, t_stop: f64, points: usize) -> Result<Curves, JsError> {
    burst_curves(atoms, gamma, t_stop, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cascadeCurves)]
pub fn cascade_curves_js(atoms: u32, gamma: f64, clicks: &[f64], t_stop: f64, points: usize) -> Result<Curves, JsError> {
    cascade_curves(atoms, gamma, clicks, t_stop, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cascadeCoefficients)]
pub fn cascade_coefficients(atoms: u32) -> Result<String, JsError> {
    coefficients(atoms).map_err(|e| JsError::new(&e))
}
