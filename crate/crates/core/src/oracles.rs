//! Brute-force evaluations of the one-loop momentum integrals.
//!
//! These start from the occupation-number integrals with zero-temperature
//! Fermi steps and never touch the closed forms in [`crate::response`].
//! They are slow and exist to validate the closed forms.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PlasmaParams;
use crate::quad::{integrate, principal_value, Tolerance};
use crate::response::ModePoint;
use crate::scalar::{c, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Half-width of the window around a pole treated by symmetric pairing.
    pub pv_window: T,
}

impl<T: Scalar> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self { rel_tol: c(1e-10), max_subdivisions: 4000, pv_window: c(1e-2) }
    }
}

impl<T: Scalar> QuadratureSpec<T> {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || !(self.pv_window > T::zero()) {
            return Err(Error::InvalidParams("rel_tol and pv_window must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self, scale: T) -> Tolerance<T> {
        Tolerance {
            abs: self.rel_tol * scale * c(1e-2),
            rel: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Principal-value Lindhard integral
/// `2e² P∫ d³k/(2π)³ (n_k − n_{k+q}) / (z − ε_{k+q} + ε_k)` at T = 0, in
/// units of k_F². Comparable to `q² + m_sq − lindhard_real`.
pub fn lindhard_oracle<T: Scalar>(
    pt: ModePoint<T>,
    p: &PlasmaParams<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    spec.validate()?;
    let ModePoint { z, q } = pt;
    if !(q > T::zero()) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    let half_sq = q * q / c(2.0);
    // ε_{k+q} − ε_k = q²/2 + k q cosθ. The n_{k+q} term is mapped onto the
    // unit sphere by k → −k − q.
    let shift_a = z - half_sq;
    let shift_b = -(z + half_sq);
    let inner_tol = spec.tolerance(T::one());
    let inner = |k: T| -> Result<T> {
        if k <= T::zero() {
            return Ok(T::zero());
        }
        let kq = k * q;
        let phi = |_: T| T::one() / kq;
        let one = T::one();
        let a = principal_value(phi, -one, one, shift_a / kq, spec.pv_window, inner_tol)?;
        let b = principal_value(phi, -one, one, shift_b / kq, spec.pv_window, inner_tol)?;
        Ok(k * k * (a + b))
    };

    let breaks = [shift_a.abs() / q, shift_b.abs() / q];
    let failure = std::cell::Cell::new(None);
    let outer = integrate(
        |k| match inner(k) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        },
        T::zero(),
        T::one(),
        &breaks,
        spec.tolerance(T::one()),
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    // 2e²·2π/(2π)³ = e²/2π²
    Ok(p.coupling() / (c::<T>(2.0) * T::PI() * T::PI()) * outer?.value)
}

/// Landau damping from the on-shell phase-space integral
/// `e² ∫ d³k/(2π)³ 2π δ(z − ε_{k−q} + ε_k) n_k (1 − n_{k−q})`.
///
/// The delta function fixes the component of `k` along `q` to
/// `(q²/2 − z)/q`; what remains is the area of that plane slice inside the
/// Fermi sphere and outside the sphere shifted by `q`. The area is
/// accumulated over `n_samples` radial cells, each recursively split where
/// the occupation indicator changes inside it.
pub fn damping_oracle<T: Scalar>(pt: ModePoint<T>, p: &PlasmaParams<T>, n_samples: usize) -> Result<T> {
    let ModePoint { z, q } = pt;
    if !(z > T::zero()) || !(q > T::zero()) {
        return Err(Error::Domain(format!("damping oracle needs z > 0 and q > 0, got z={z}, q={q}")));
    }
    let n = n_samples.max(1);
    let along = (q * q / c(2.0) - z) / q;
    let inside = |rho: T| {
        let k_sq = rho * rho + along * along;
        let shifted = rho * rho + (along - q) * (along - q);
        k_sq < T::one() && shifted > T::one()
    };
    let ring = |a: T, b: T| T::PI() * (b * b - a * a);

    fn cell<T: Scalar>(a: T, b: T, depth: u32, inside: &dyn Fn(T) -> bool, ring: &dyn Fn(T, T) -> T) -> T {
        let m = (a + b) / c(2.0);
        let (ia, im, ib) = (inside(a), inside(m), inside(b));
        if ia == im && im == ib {
            return if ia { ring(a, b) } else { T::zero() };
        }
        if depth == 0 || !(m > a && m < b) {
            let hits = [ia, im, ib].iter().filter(|&&x| x).count();
            return ring(a, b) * c(hits as f64 / 3.0);
        }
        cell(a, m, depth - 1, inside, ring) + cell(m, b, depth - 1, inside, ring)
    }

    let width = T::one() / c(n as f64);
    let mut area = T::zero();
    for i in 0..n {
        let a = width * c(i as f64);
        let b = if i + 1 == n { T::one() } else { width * c((i + 1) as f64) };
        area = area + cell(a, b, 60, &inside, &ring);
    }
    // e²/(2π)³ · 2π · area / q
    Ok(p.coupling() * area / (c::<T>(4.0) * T::PI() * T::PI() * q))
}

/// `2πi` times the residues enclosed when the `k⁰` contour is closed in the
/// upper half plane, for an integrand `1/∏(k⁰ − pole)` decaying at least as
/// `1/k⁰²`.
pub fn upper_half_plane_integral<T: Scalar>(poles: &[Complex<T>]) -> Complex<T> {
    let two_pi_i = Complex::new(T::zero(), c::<T>(2.0) * T::PI());
    poles
        .iter()
        .enumerate()
        .filter(|(_, p)| p.im > T::zero())
        .map(|(i, &p)| {
            let denom = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex::new(T::one(), T::zero()), |acc, (_, &other)| acc * (p - other));
            two_pi_i / denom
        })
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
}

/// Frequency integral of the two causal poles in the vacuum part of `Σ⁺⁺`,
/// `∫ dk⁰ / ((k⁰ + z − ε_{k+q} + iε)(k⁰ − ε_k + iε))`, checked over a set of
/// loop momenta. Both poles sit below the real axis, so closing above gives
/// zero. Returns the largest magnitude found. `ε` is `spec.pv_window`.
pub fn sigma0_vanishes<T: Scalar>(pt: ModePoint<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    spec.validate()?;
    let eps = spec.pv_window;
    let ModePoint { z, q } = pt;
    let mut worst = T::zero();
    for &k in &[0.0, 0.3, 0.7, 1.0, 1.6] {
        for &cos in &[-1.0, -0.4, 0.0, 0.5, 1.0] {
            let (k, cos) = (c::<T>(k), c::<T>(cos));
            let e_k = k * k / c(2.0);
            let kq_sq = k * k + q * q + c::<T>(2.0) * k * q * cos;
            let e_kq = kq_sq / c(2.0);
            let poles = [Complex::new(e_kq - z, -eps), Complex::new(e_k, -eps)];
            worst = worst.max(upper_half_plane_integral(&poles).norm());
        }
    }
    Ok(worst)
}
