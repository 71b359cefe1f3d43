//! Density sweeps of the crossover scales and power-law fits to them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::crossover_scales;
use crate::params::PlasmaParams;
use crate::scalar::{c, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow<T> {
    pub r_s: T,
    pub q_cl: Option<T>,
    pub z_cl: Option<T>,
    pub q_tf: T,
    pub z_pl: T,
    pub q_ratio: Option<T>,
    pub z_ratio: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult<T> {
    pub rows: Vec<ScanRow<T>>,
}

impl<T: Scalar> ScanResult<T> {
    /// `(r_s, q_cl)` for rows where the scale exists.
    pub fn q_cl_points(&self) -> Vec<(T, T)> {
        self.rows.iter().filter_map(|r| r.q_cl.map(|q| (r.r_s, q))).collect()
    }

    pub fn z_cl_points(&self) -> Vec<(T, T)> {
        self.rows.iter().filter_map(|r| r.z_cl.map(|z| (r.r_s, z))).collect()
    }
}

/// `y ≈ amplitude · x^exponent`; `residual` is the rms misfit of `ln y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit<T> {
    pub amplitude: T,
    pub exponent: T,
    pub residual: T,
}

impl<T: Scalar> PowerLawFit<T> {
    pub fn predict(&self, x: T) -> T {
        self.amplitude * x.powf(self.exponent)
    }
}

/// `n` points from `lo` to `hi` inclusive, geometric spacing.
pub fn log_spaced<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / c((n - 1) as f64);
            (0..n).map(|i| if i + 1 == n { hi } else { lo * (step * c(i as f64)).exp() }).collect()
        }
    }
}

pub fn linear_spaced<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / c((n - 1) as f64);
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * c(i as f64) }).collect()
        }
    }
}

/// Crossover scales for every density in `r_s_values`, rows sorted by `r_s`.
/// All other parameters are taken from `template`.
pub fn scan<T: Scalar>(r_s_values: &[T], template: &PlasmaParams<T>) -> Result<ScanResult<T>> {
    let mut values = r_s_values.to_vec();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let rows = values
        .par_iter()
        .map(|&r_s| {
            let p = template.with_r_s(r_s)?;
            let s = crossover_scales(&p)?;
            Ok(ScanRow {
                r_s,
                q_cl: s.q_cl,
                z_cl: s.z_cl,
                q_tf: s.q_tf,
                z_pl: s.z_pl,
                q_ratio: s.q_cl.map(|q| q / s.q_tf),
                z_ratio: s.z_cl.map(|z| z / s.z_pl),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { rows })
}

/// Unweighted least squares line through `(ln x, ln y)`.
pub fn fit_power_law<T: Scalar>(points: &[(T, T)]) -> Result<PowerLawFit<T>> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > T::zero() && y > T::zero())) {
        return Err(Error::DegenerateFit("power-law fit needs positive x and y".into()));
    }
    let n: T = c(points.len() as f64);
    let logs: Vec<(T, T)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let my = logs.iter().fold(T::zero(), |s, p| s + p.1) / n;
    let sxx = logs.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    let sxy = logs.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    if sxx <= T::zero() {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = logs.iter().fold(T::zero(), |s, p| {
        let d = p.1 - (intercept + slope * p.0);
        s + d * d
    });
    Ok(PowerLawFit { amplitude: intercept.exp(), exponent: slope, residual: (sse / n).sqrt() })
}
