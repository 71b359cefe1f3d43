//! One-loop closed forms for the dressed Coulomb propagator.
//!
//! Everything here works with `q² + M² − L` (called `re_inv`) rather than the
//! Lindhard function `L` on its own; `L` is recoverable as
//! `q² + m_sq − re_inv`.

use num_complex::Complex;
use serde::Serialize;

use crate::ctp_green::CtpMatrix;
use crate::error::{Error, Result};
use crate::params::PlasmaParams;
use crate::scalar::{c, Scalar};

/// Smallest wavevector accepted by the closed forms (units of k_F).
pub const Q_MIN: f64 = 1e-6;

/// Default tolerance below which `|q² − L|` counts as on shell.
pub const DEFAULT_POLE_TOL: f64 = 1e-12;

const COEF_CUTOFF: f64 = 1e-14;
const LOG_FLOOR: f64 = 1e-300;

/// Dimensionless frequency `z` and wavevector magnitude `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModePoint<T> {
    pub z: T,
    pub q: T,
}

impl<T: Scalar> ModePoint<T> {
    pub fn new(z: T, q: T) -> Self {
        Self { z, q }
    }

    fn check(&self) -> Result<()> {
        if !(self.q >= c(Q_MIN)) || !self.q.is_finite() || !self.z.is_finite() {
            return Err(Error::Domain(format!(
                "mode point requires finite z and q >= {Q_MIN:e}, got z={}, q={}",
                self.z, self.q
            )));
        }
        Ok(())
    }
}

/// Response of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResponseValue<T> {
    /// `q² + M² − L`
    pub re_inv: T,
    /// Landau damping `r`, never negative.
    pub damping: T,
    /// `damping / re_inv`; infinite or NaN on shell.
    pub classicality: T,
}

/// Per-mode contribution `exp(−b v²/2 + i a u v)` to the reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityMatrixFactor<T> {
    pub a: T,
    pub b: T,
    pub magnitude: T,
    pub phase: T,
}

/// `ln|(1 + x)/(1 − x)|`, with the argument clamped away from zero.
fn log_ratio<T: Scalar>(x: T) -> T {
    let one = T::one();
    let two = c::<T>(2.0);
    if x.abs() < c(0.5) {
        two * x.atanh()
    } else if x.abs() > two {
        two * x.recip().atanh()
    } else {
        let floor = c::<T>(LOG_FLOOR).max(T::min_positive_value());
        (one + x).abs().max(floor).ln() - (one - x).abs().max(floor).ln()
    }
}

/// `(1 − x²) ln|(1 + x)/(1 − x)|`; the `x → ±1` limit is zero.
fn guarded_term<T: Scalar>(x: T) -> T {
    let coef = T::one() - x * x;
    if coef.abs() < c(COEF_CUTOFF) {
        return T::zero();
    }
    coef * log_ratio(x)
}

/// Braces for `|a|, |b|` large, where the two log terms nearly cancel:
/// `(1 − x²) ln|(1+x)/(1−x)| = −2x + Σ_n 4 x^{−(2n+1)} / ((2n+1)(2n+3))`
/// and the `−2x` parts cancel the leading `−1`.
fn braces_asymptotic<T: Scalar>(a: T, b: T, q: T) -> T {
    let (ia, ib) = (a.recip(), b.recip());
    let (ia2, ib2) = (ia * ia, ib * ib);
    let (mut pa, mut pb) = (ia, ib);
    let mut sum = T::zero();
    for n in 0..40 {
        let k = c::<T>((2 * n + 1) as f64);
        let term = c::<T>(4.0) / (k * (k + c(2.0))) * (pa - pb);
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
        pa = pa * ia2;
        pb = pb * ib2;
    }
    sum / (c::<T>(2.0) * q)
}

const ASYMPTOTIC_FROM: f64 = 8.0;

/// The curly-brace factor of the Lindhard function,
/// `−1 + [ (1 − a²) ln|(1+a)/(1−a)| − (1 − b²) ln|(1+b)/(1−b)| ] / 2q`
/// with `a = z/q − q/2`, `b = z/q + q/2`.
pub fn lindhard_braces<T: Scalar>(pt: ModePoint<T>) -> Result<T> {
    pt.check()?;
    let ModePoint { z, q } = pt;
    let half_q = q / c(2.0);
    let a = z / q - half_q;
    let b = z / q + half_q;
    if a.abs().min(b.abs()) > c(ASYMPTOTIC_FROM) {
        return Ok(braces_asymptotic(a, b, q));
    }
    Ok(-T::one() + (guarded_term(a) - guarded_term(b)) / (c::<T>(2.0) * q))
}

/// `q² + M² − L` in units of k_F².
pub fn lindhard_real<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>) -> Result<T> {
    let braces = lindhard_braces(pt)?;
    Ok(pt.q * pt.q + p.m_sq() - p.lindhard_prefactor() * braces)
}

/// Landau damping `r(|z|, q)` in units of k_F². Zero outside the
/// particle-hole continuum.
pub fn landau_damping<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>) -> Result<T> {
    pt.check()?;
    let z = pt.z.abs();
    let q = pt.q;
    let two = c::<T>(2.0);
    let half_sq = q * q / two;
    let scale = p.damping_prefactor() / q;
    if z <= T::zero() {
        return Ok(T::zero());
    }
    let value = if q < two && z < q - half_sq {
        scale * two * z
    } else if z > (half_sq - q).max(T::zero()) && z < half_sq + q {
        let d = z / q - q / two;
        scale * (T::one() - d * d)
    } else {
        T::zero()
    };
    Ok(value.max(T::zero()))
}

/// Inverse dressed propagator on the closed time path, without the
/// boundary-condition block and the `iε` regulators.
///
/// Diagonal: `±(q² − L) + i r`; off-diagonal `(+,−) = −2iΘ(−z) r`,
/// `(−,+) = −2iΘ(z) r`, with `Θ(0) = 1/2`.
pub fn inverse_propagator<T: Scalar>(
    pt: ModePoint<T>,
    p: &PlasmaParams<T>,
) -> Result<CtpMatrix<Complex<T>>> {
    let re = lindhard_real(pt, p)?;
    let r = landau_damping(pt, p)?;
    let step = |x: T| {
        if x > T::zero() {
            T::one()
        } else if x < T::zero() {
            T::zero()
        } else {
            c(0.5)
        }
    };
    let off = |theta: T| Complex::new(T::zero(), -c::<T>(2.0) * theta * r);
    Ok(CtpMatrix {
        pp: Complex::new(re, r),
        pm: off(step(-pt.z)),
        mp: off(step(pt.z)),
        mm: Complex::new(-re, r),
    })
}

/// Classicality `r / (q² − L)` with the default pole tolerance.
pub fn classicality<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>) -> Result<T> {
    classicality_with_tol(pt, p, c(DEFAULT_POLE_TOL))
}

/// Signed classicality. Fails on shell, where the ratio diverges, and where
/// numerator and denominator both vanish.
pub fn classicality_with_tol<T: Scalar>(
    pt: ModePoint<T>,
    p: &PlasmaParams<T>,
    pole_tol: T,
) -> Result<T> {
    let re = lindhard_real(pt, p)?;
    let r = landau_damping(pt, p)?;
    if re.abs() < pole_tol {
        if r > pole_tol {
            return Err(Error::OnShellDivergence {
                re_inv: re.to_f64().unwrap_or(f64::NAN),
                damping: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        return Err(Error::Undefined);
    }
    Ok(r / re)
}

/// Bundled real part, damping and classicality at one point.
pub fn evaluate<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>) -> Result<ResponseValue<T>> {
    let re_inv = lindhard_real(pt, p)?;
    let damping = landau_damping(pt, p)?;
    Ok(ResponseValue { re_inv, damping, classicality: damping / re_inv })
}

/// Contribution of one mode, observed for time `time` in volume `volume`, to
/// the reduced density matrix element between field values `u ± v/2`.
pub fn density_matrix_factor<T: Scalar>(
    pt: ModePoint<T>,
    p: &PlasmaParams<T>,
    time: T,
    volume: T,
    u: T,
    v: T,
) -> Result<DensityMatrixFactor<T>> {
    if !(time > T::zero()) || !(volume > T::zero()) {
        return Err(Error::Domain(format!("time and volume must be positive, got T={time}, V={volume}")));
    }
    let tv = time * volume;
    let a = tv * lindhard_real(pt, p)?;
    let b = tv * landau_damping(pt, p)?;
    Ok(DensityMatrixFactor { a, b, magnitude: (-b * v * v / c(2.0)).exp(), phase: a * u * v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> PlasmaParams<f64> {
        PlasmaParams::new(0.05).unwrap()
    }

    /// Richardson extrapolation of the symmetric average `(f(x−h) + f(x+h))/2`.
    fn two_sided_limit(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let hs = [1e-4, 1e-5, 1e-6];
        let avg: Vec<f64> = hs.iter().map(|h| 0.5 * (f(x - h) + f(x + h))).collect();
        // error of the average is O(h² ln h); extrapolating the last pair in h²
        let r = (hs[1] / hs[2]).powi(2);
        (r * avg[2] - avg[1]) / (r - 1.0)
    }

    #[test]
    fn braces_static_small_q() {
        let b = lindhard_braces(ModePoint::new(0.0, 1e-5)).unwrap();
        assert_relative_eq!(b, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn braces_high_frequency() {
        let q: f64 = 1.0;
        for &z in &[1e2, 1e3] {
            let b = lindhard_braces(ModePoint::new(z, q)).unwrap();
            assert_relative_eq!(b, 2.0 / 3.0 * q * q / (z * z), max_relative = 1e-2);
        }
        let b: f64 = lindhard_braces(ModePoint::new(1e6, 1.0)).unwrap();
        assert!(b.abs() < 1e-6);
        assert_relative_eq!(b, 2.0 / 3.0 * 1e-12, max_relative = 1e-5);
        // tiny q, far above the continuum: q² − L must stay close to q² + M²
        let p = params().with_m_sq(10.0).unwrap();
        let v = lindhard_real(ModePoint::new(3.8, 1e-6), &p).unwrap();
        assert!((v - 10.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_branch_matches_direct_form() {
        for &(z, q) in &[(9.0, 1.0), (12.0, 1.5), (0.9, 0.1), (40.0, 3.0), (-12.0, 1.5)] {
            let (a, b) = (z / q - q / 2.0, z / q + q / 2.0);
            let direct = -1.0 + (guarded_term(a) - guarded_term(b)) / (2.0 * q);
            let series = braces_asymptotic(a, b, q);
            assert_relative_eq!(direct, series, max_relative = 1e-9);
        }
    }

    #[test]
    fn braces_finite_at_log_singularity() {
        let q: f64 = 1.0;
        let z0 = q - q * q / 2.0;
        let at = lindhard_braces(ModePoint::new(z0, q)).unwrap();
        assert!(at.is_finite());
        let lim = two_sided_limit(|z| lindhard_braces(ModePoint::new(z, q)).unwrap(), z0);
        assert_relative_eq!(at, lim, epsilon = 1e-8);
        let z1 = q + q * q / 2.0;
        let lim = two_sided_limit(|z| lindhard_braces(ModePoint::new(z, q)).unwrap(), z1);
        assert_relative_eq!(lindhard_braces(ModePoint::new(z1, q)).unwrap(), lim, epsilon = 1e-8);
    }

    #[test]
    fn rejects_small_q() {
        assert!(lindhard_braces(ModePoint::new(0.1, 0.0)).is_err());
        assert!(lindhard_braces(ModePoint::new(0.1, -1.0)).is_err());
        assert!(lindhard_braces(ModePoint::new(0.1, 1e-7)).is_err());
        assert!(landau_damping(ModePoint::new(0.1, 0.0), &params()).is_err());
        assert!(inverse_propagator(ModePoint::new(0.1, 0.0), &params()).is_err());
    }

    #[test]
    fn real_part_limits() {
        let p = params();
        let qtf2 = p.derived_scales().q_tf.powi(2);
        let v = lindhard_real(ModePoint::new(0.0, 0.01), &p).unwrap();
        assert_relative_eq!(v, 1e-4 + qtf2, max_relative = 1e-4);
        let v = lindhard_real(ModePoint::new(1e3, 1.0), &p).unwrap();
        assert!((v - 1.0).abs() < 1e-7);
        let pm = p.with_m_sq(0.7).unwrap();
        let v = lindhard_real(ModePoint::new(1e3, 1.0), &pm).unwrap();
        assert!((v - 1.7).abs() < 1e-7);
    }

    #[test]
    fn real_part_near_zero_at_touching_point() {
        let v = lindhard_real(ModePoint::new(0.1875, 0.1875), &params()).unwrap();
        // the valley floor sits just above zero here; its scale is q_TF² ≈ 0.033
        assert!(v.abs() < 2e-3, "{v}");
    }

    #[test]
    fn damping_examples() {
        let p = params();
        let k = p.kappa();
        let d = |z: f64, q: f64| landau_damping(ModePoint::new(z, q), &p).unwrap();
        assert_eq!(d(-0.3, 1.0), d(0.3, 1.0));
        assert_eq!(d(3.0, 1.0), 0.0);
        assert_relative_eq!(d(0.25, 1.0), k * 0.05 * 2.0 * 0.25, max_relative = 1e-14);
        // 0.013028 is the value quoted with κ rounded to 0.52113
        assert_relative_eq!(d(0.25, 1.0), 0.013028, max_relative = 5e-4);
        assert_eq!(d(0.0, 1.0), 0.0);
        // q > 2 band
        assert_eq!(d(1.0, 3.0), 0.0);
        assert_relative_eq!(d(4.5, 3.0), k * 0.05 / 3.0, max_relative = 1e-14);
        assert_eq!(d(7.6, 3.0), 0.0);
    }

    #[test]
    fn damping_seam_continuity() {
        let p = params();
        for &q in &[0.1, 0.5, 1.0, 1.5, 1.9] {
            let z = q - q * q / 2.0;
            let scale = p.kappa() * 0.05 / q;
            let wedge = scale * 2.0 * z;
            let d = z / q - q / 2.0;
            let band = scale * (1.0 - d * d);
            assert_relative_eq!(wedge, band, max_relative = 1e-12);
            let lo = landau_damping(ModePoint::new(z - 1e-9, q), &p).unwrap();
            let hi = landau_damping(ModePoint::new(z + 1e-9, q), &p).unwrap();
            assert_relative_eq!(lo, hi, max_relative = 1e-7);
        }
    }

    #[test]
    fn inverse_propagator_structure() {
        let p = params();
        let m = inverse_propagator(ModePoint::new(3.0, 1.0), &p).unwrap();
        assert_eq!(m.pm, Complex::new(0.0, 0.0));
        assert_eq!(m.mp, Complex::new(0.0, 0.0));
        assert_eq!(m.pp.re, -m.mm.re);
        assert_eq!(m.pp.im, 0.0);

        let pt = ModePoint::new(0.25, 1.0);
        let r = landau_damping(pt, &p).unwrap();
        let m = inverse_propagator(pt, &p).unwrap();
        assert_eq!(m.mp, Complex::new(0.0, -2.0 * r));
        assert_eq!(m.pm, Complex::new(0.0, 0.0));
        let m = inverse_propagator(ModePoint::new(-0.25, 1.0), &p).unwrap();
        assert_eq!(m.pm, Complex::new(0.0, -2.0 * r));
        assert_eq!(m.mp, Complex::new(0.0, 0.0));
    }

    #[test]
    fn inverse_propagator_at_zero_frequency() {
        let m = inverse_propagator(ModePoint::new(0.0, 1.0), &params()).unwrap();
        let s = m.pp + m.pm + m.mp + m.mm;
        assert_eq!(s, Complex::new(0.0, 0.0));
    }

    #[test]
    fn classicality_cases() {
        let p = params();
        assert_eq!(classicality(ModePoint::new(3.0, 1.0), &p).unwrap(), 0.0);
        let pt = ModePoint::new(0.25, 1.0);
        let expect = landau_damping(pt, &p).unwrap() / lindhard_real(pt, &p).unwrap();
        assert_eq!(classicality(pt, &p).unwrap(), expect);
        // lower dispersion root at q = 0.1 lies inside the continuum
        let f = |z: f64| lindhard_real(ModePoint::new(z, 0.1), &p).unwrap();
        let root = crate::roots::bisect(f, 0.01, 0.1, 0.0).unwrap();
        let on_shell = ModePoint::new(root, 0.1);
        assert!(landau_damping(on_shell, &p).unwrap() > 0.0);
        assert!(matches!(
            classicality_with_tol(on_shell, &p, 1e-10),
            Err(Error::OnShellDivergence { .. })
        ));
        assert!(matches!(
            classicality_with_tol(ModePoint::new(3.0, 1.0), &p, 10.0),
            Err(Error::Undefined)
        ));
    }

    #[test]
    fn density_matrix_examples() {
        let p = params();
        let pt = ModePoint::new(0.25, 1.0);
        let f = density_matrix_factor(pt, &p, 2.0, 3.0, 0.7, 0.0).unwrap();
        assert_eq!(f.magnitude, 1.0);
        assert_eq!(f.phase, 0.0);
        let f = density_matrix_factor(ModePoint::new(3.0, 1.0), &p, 2.0, 3.0, 0.7, 5.0).unwrap();
        assert_eq!(f.magnitude, 1.0);

        let f1 = density_matrix_factor(pt, &p, 2.0, 3.0, 0.7, 1.3).unwrap();
        let f2 = density_matrix_factor(pt, &p, 2.0, 6.0, 0.7, 1.3).unwrap();
        assert_relative_eq!(f2.magnitude, f1.magnitude * f1.magnitude, max_relative = 1e-12);
        assert_relative_eq!(f2.phase, 2.0 * f1.phase, max_relative = 1e-12);
        assert!(f1.magnitude < 1.0);
        assert_relative_eq!(f1.b / f1.a, classicality(pt, &p).unwrap(), max_relative = 1e-12);

        assert!(density_matrix_factor(pt, &p, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(density_matrix_factor(pt, &p, 1.0, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let p = PlasmaParams::new(0.05f32).unwrap();
        let v32 = lindhard_real(ModePoint::new(0.3f32, 0.5), &p).unwrap();
        let v64 = lindhard_real(ModePoint::new(0.3f64, 0.5), &params()).unwrap();
        assert!((v32 as f64 - v64).abs() < 1e-5);
    }
}
