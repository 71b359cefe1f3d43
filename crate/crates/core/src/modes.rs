//! Collective modes: particle-hole continuum, dispersion roots of
//! `q² + M² − L = 0`, and the scales at which the mode curve ends.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PlasmaParams;
use crate::response::{landau_damping, lindhard_real, ModePoint, Q_MIN};
use crate::roots::{bisect, golden_section};
use crate::scalar::{c, Scalar};

/// Residual accepted for a dispersion root.
pub const ROOT_TOL: f64 = 1e-10;

const BOUNDARY_TOL: f64 = 1e-12;
const COARSE_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuumRegion {
    Outside,
    /// Band where `r ∝ 1 − (z/q − q/2)²`.
    SinglePairBand,
    /// `0 < z < q − q²/2` (only for `q < 2`), where `r ∝ 2z`.
    LowZWedge,
}

impl ContinuumRegion {
    pub fn code(self) -> u8 {
        match self {
            ContinuumRegion::Outside => 0,
            ContinuumRegion::SinglePairBand => 1,
            ContinuumRegion::LowZWedge => 2,
        }
    }
}

/// Locates `(z, q)` relative to the particle-hole continuum, using `|z|`.
/// Points within `1e-12` of a band edge belong to the band.
pub fn continuum_classify<T: Scalar>(pt: ModePoint<T>) -> ContinuumRegion {
    let z = pt.z.abs();
    let q = pt.q;
    let tol = c::<T>(BOUNDARY_TOL);
    if !(q > T::zero()) || !(z > T::zero()) {
        return ContinuumRegion::Outside;
    }
    let half_sq = q * q / c(2.0);
    if q < c(2.0) && z < q - half_sq - tol {
        return ContinuumRegion::LowZWedge;
    }
    let lower = (half_sq - q).max(T::zero());
    if z >= lower - tol && z <= half_sq + q + tol {
        ContinuumRegion::SinglePairBand
    } else {
        ContinuumRegion::Outside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValleyMinimum<T> {
    pub z_min: T,
    pub f_min: T,
}

/// Log-spaced search nodes on `(0, z_max]`, dense around `z ~ q`.
fn search_grid<T: Scalar>(q: T, z_max: T) -> Vec<T> {
    let lo = (q * c(1e-4)).min(z_max * c(1e-3));
    let ratio = (z_max / lo).ln() / c((COARSE_POINTS - 1) as f64);
    let mut nodes: Vec<T> = (0..COARSE_POINTS).map(|i| lo * (ratio * c(i as f64)).exp()).collect();
    nodes[COARSE_POINTS - 1] = z_max;
    nodes
}

fn re_inv_at<T: Scalar>(q: T, p: &PlasmaParams<T>) -> impl Fn(T) -> T + '_ {
    move |z| lindhard_real(ModePoint::new(z, q), p).unwrap_or_else(|_| T::nan())
}

fn check_q<T: Scalar>(q: T) -> Result<()> {
    if !(q >= c(Q_MIN)) || !q.is_finite() {
        return Err(Error::Domain(format!("q must be finite and >= {Q_MIN:e}, got {q}")));
    }
    Ok(())
}

/// Minimum of `q² + M² − L` over `z ∈ (0, z_max]`: coarse log scan, then
/// golden-section refinement between the neighbours of the best node.
pub fn valley_minimum<T: Scalar>(q: T, p: &PlasmaParams<T>) -> Result<ValleyMinimum<T>> {
    check_q(q)?;
    let f = re_inv_at(q, p);
    let grid = search_grid(q, p.z_max());
    let (best, _) = grid
        .iter()
        .map(|&z| f(z))
        .enumerate()
        .fold((0, T::infinity()), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let (z_min, f_min) = golden_section(&f, a, b, c::<T>(1e-14).max(T::epsilon() * c(4.0)));
    Ok(ValleyMinimum { z_min, f_min })
}

/// All zeros of `q² + M² − L` for `z ∈ (0, z_max]`, ascending.
pub fn dispersion_roots<T: Scalar>(q: T, p: &PlasmaParams<T>) -> Result<Vec<T>> {
    let valley = valley_minimum(q, p)?;
    let f = re_inv_at(q, p);
    let mut nodes = search_grid(q, p.z_max());
    nodes.push(valley.z_min);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    nodes.dedup();
    let values: Vec<T> = nodes.iter().map(|&z| f(z)).collect();
    let tol = c::<T>(ROOT_TOL);
    let mut roots = Vec::new();
    for i in 0..nodes.len() - 1 {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == T::zero() {
            roots.push(nodes[i]);
            continue;
        }
        if (fa < T::zero()) != (fb < T::zero()) && fb != T::zero() {
            if let Some(z) = bisect(&f, nodes[i], nodes[i + 1], T::zero()) {
                if f(z).abs() < tol {
                    roots.push(z);
                }
            }
        }
    }
    if values.last().is_some_and(|v| *v == T::zero()) {
        roots.push(nodes[nodes.len() - 1]);
    }
    Ok(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Lower branch, tilted along `z ≈ q`.
    ZeroSound,
    /// Upper branch, tending to `z_pl` as `q → 0`.
    Plasmon,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::ZeroSound => "zero_sound",
            Branch::Plasmon => "plasmon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint<T> {
    pub q: T,
    pub z: T,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionCurve<T> {
    pub points: Vec<DispersionPoint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverScales<T> {
    /// Largest wavevector carrying a collective mode; `None` when there is none.
    pub q_cl: Option<T>,
    /// Highest frequency on the collective-mode curve.
    pub z_cl: Option<T>,
    pub q_tf: T,
    pub z_pl: T,
}

fn label_roots<T: Scalar>(q: T, roots: &[T], valley_z: T) -> Vec<DispersionPoint<T>> {
    roots
        .iter()
        .map(|&z| DispersionPoint {
            q,
            z,
            branch: if z < valley_z { Branch::ZeroSound } else { Branch::Plasmon },
        })
        .collect()
}

fn roots_with_labels<T: Scalar>(q: T, p: &PlasmaParams<T>) -> Result<Vec<DispersionPoint<T>>> {
    let roots = dispersion_roots(q, p)?;
    let valley = valley_minimum(q, p)?;
    Ok(label_roots(q, &roots, valley.z_min))
}

/// Largest `q` at which the valley of `q² + M² − L` still dips below zero,
/// or `None` if it never does for `q >= Q_MIN`.
pub fn classical_wavevector<T: Scalar>(p: &PlasmaParams<T>) -> Result<Option<T>> {
    let g = |q: T| valley_minimum(q, p).map(|v| v.f_min);
    let q_lo = c::<T>(Q_MIN);
    // coarse scan catches a non-monotone valley depth; the last sign change wins
    let mut q_hi = T::one();
    while g(q_hi)? < T::zero() {
        q_hi = q_hi * c(2.0);
        if q_hi > c(1e6) {
            return Err(Error::Domain("valley stays negative at all wavevectors".into()));
        }
    }
    let n = 120;
    let ratio = (q_hi / q_lo).ln() / c((n - 1) as f64);
    let grid: Vec<T> = (0..n).map(|i| q_lo * (ratio * c(i as f64)).exp()).collect();
    let vals = grid.iter().map(|&q| g(q)).collect::<Result<Vec<T>>>()?;
    let Some(last_neg) = vals.iter().rposition(|&v| v < T::zero()) else {
        return Ok(None);
    };
    if last_neg + 1 >= n {
        return Ok(Some(grid[n - 1]));
    }
    let (mut lo, mut hi) = (grid[last_neg], grid[last_neg + 1]);
    while hi - lo > c(1e-12) {
        let mid = lo + (hi - lo) / c(2.0);
        if !(mid > lo && mid < hi) {
            break;
        }
        if g(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the lower end of the final bracket still carries a root
    Ok(Some(lo))
}

/// Collective-mode curve on `n_q` evenly spaced wavevectors in
/// `(0, q_max]`, with extra points packed in front of `q_cl` where the two
/// branches merge.
pub fn trace_dispersion<T: Scalar>(p: &PlasmaParams<T>, q_max: T, n_q: usize) -> Result<DispersionCurve<T>> {
    if !(q_max >= c(Q_MIN)) || n_q == 0 {
        return Err(Error::InvalidParams("trace needs q_max >= 1e-6 and n_q > 0".into()));
    }
    let step = q_max / c(n_q as f64);
    let mut qs: Vec<T> = (1..=n_q).map(|i| (step * c(i as f64)).max(c(Q_MIN))).collect();
    if let Some(q_cl) = classical_wavevector(p)? {
        if q_cl <= q_max {
            for k in 1..=9 {
                let q = q_cl - q_cl * c(10f64.powi(-k));
                if q >= c(Q_MIN) {
                    qs.push(q);
                }
            }
            qs.push(q_cl);
        }
    }
    qs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    qs.dedup();
    let rows = qs
        .par_iter()
        .map(|&q| roots_with_labels(q, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(DispersionCurve { points: rows.into_iter().flatten().collect() })
}

/// `q_cl`, `z_cl` and the plasma scales.
pub fn crossover_scales<T: Scalar>(p: &PlasmaParams<T>) -> Result<CrossoverScales<T>> {
    let d = p.derived_scales();
    let Some(q_cl) = classical_wavevector(p)? else {
        return Ok(CrossoverScales { q_cl: None, z_cl: None, q_tf: d.q_tf, z_pl: d.z_pl });
    };
    let curve = trace_dispersion(p, q_cl, 400)?;
    let touching = valley_minimum(q_cl, p)?.z_min;
    let z_cl = curve.points.iter().map(|pt| pt.z).fold(touching, T::max);
    Ok(CrossoverScales { q_cl: Some(q_cl), z_cl: Some(z_cl), q_tf: d.q_tf, z_pl: d.z_pl })
}

/// Photon mass squared above which no collective mode survives, located by
/// bisection on `[0, m_sq_hi]` to width `tol`. `None` if modes are absent
/// already at zero mass or still present at `m_sq_hi`.
///
/// Because the valley depth grows like `ln(1/q)` as `q → 0`, the answer
/// depends on the smallest admitted wavevector `Q_MIN`.
pub fn critical_mass_sq<T: Scalar>(p: &PlasmaParams<T>, m_sq_hi: T, tol: T) -> Result<Option<T>> {
    let has_modes = |m: T| -> Result<bool> { Ok(classical_wavevector(&p.with_m_sq(m)?)?.is_some()) };
    if !has_modes(T::zero())? || has_modes(m_sq_hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (T::zero(), m_sq_hi);
    while hi - lo > tol {
        let mid = lo + (hi - lo) / c(2.0);
        if has_modes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo + (hi - lo) / c(2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapQuantity {
    ReInv,
    Damping,
    InvReInv,
    Classicality,
    Region,
}

impl MapQuantity {
    pub fn name(self) -> &'static str {
        match self {
            MapQuantity::ReInv => "re_inv",
            MapQuantity::Damping => "damping",
            MapQuantity::InvReInv => "inv_re_inv",
            MapQuantity::Classicality => "classicality",
            MapQuantity::Region => "region",
        }
    }
}

/// Rectangle in the `(z, q)` plane, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapWindow<T> {
    pub z_min: T,
    pub z_max: T,
    pub q_min: T,
    pub q_max: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapCell<T> {
    pub z: T,
    pub q: T,
    pub value: T,
}

fn linspace<T: Scalar>(a: T, b: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / c((n - 1) as f64);
    (0..n).map(|i| if i + 1 == n { b } else { a + step * c(i as f64) }).collect()
}

fn map_value<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>, quantity: MapQuantity) -> Result<T> {
    Ok(match quantity {
        MapQuantity::ReInv => lindhard_real(pt, p)?,
        MapQuantity::Damping => landau_damping(pt, p)?,
        MapQuantity::InvReInv => T::one() / lindhard_real(pt, p)?,
        MapQuantity::Classicality => {
            let r = landau_damping(pt, p)?;
            if r == T::zero() {
                T::zero()
            } else {
                r / lindhard_real(pt, p)?
            }
        }
        MapQuantity::Region => c(f64::from(continuum_classify(pt).code())),
    })
}

/// Samples `quantity` on an `nz × nq` grid, `q` outer and `z` inner. With
/// `clamp = Some(cut)` values are limited to `[−cut, cut]`.
pub fn figure_map<T: Scalar>(
    window: MapWindow<T>,
    nz: usize,
    nq: usize,
    p: &PlasmaParams<T>,
    quantity: MapQuantity,
    clamp: Option<T>,
) -> Result<Vec<MapCell<T>>> {
    if nz == 0 || nq == 0 {
        return Err(Error::InvalidParams("map grid needs nz, nq > 0".into()));
    }
    if !(window.q_min >= c(Q_MIN)) || window.q_max < window.q_min || window.z_max < window.z_min {
        return Err(Error::InvalidParams("map window must satisfy 0 < q_min <= q_max, z_min <= z_max".into()));
    }
    let zs = linspace(window.z_min, window.z_max, nz);
    let qs = linspace(window.q_min, window.q_max, nq);
    let rows = qs
        .par_iter()
        .map(|&q| {
            zs.iter()
                .map(|&z| {
                    let mut value = map_value(ModePoint::new(z, q), p, quantity)?;
                    if let Some(cut) = clamp {
                        value = value.max(-cut).min(cut);
                    }
                    Ok(MapCell { z, q, value })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}
