//! Free closed-time-path propagator of non-relativistic particles at finite
//! temperature and chemical potential.
//!
//! Entries are kept as distributions in `x = k⁰ − ε_k`: a pole part
//! `residue / (x + i·sign·0⁺)` plus a weight multiplying `−2πi δ(x)`.
//! Identities between entries are then exact statements about coefficients.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// A 2×2 matrix over the time-path indices `(+, −)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CtpMatrix<E> {
    pub pp: E,
    pub pm: E,
    pub mp: E,
    pub mm: E,
}

impl<E: Copy> CtpMatrix<E> {
    pub fn entries(&self) -> [E; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }

    pub fn map<F, R>(&self, f: F) -> CtpMatrix<R>
    where
        F: Fn(E) -> R,
    {
        CtpMatrix { pp: f(self.pp), pm: f(self.pm), mp: f(self.mp), mm: f(self.mm) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// Exchange sign ξ: +1 for bosons, −1 for fermions.
    pub fn xi<T: Scalar>(self) -> T {
        match self {
            Statistics::Bose => T::one(),
            Statistics::Fermi => -T::one(),
        }
    }
}

/// One entry of the propagator in pole + delta form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorEntry<T> {
    pub pole_residue: Complex<T>,
    /// +1 for `x + i0⁺`, −1 for `x − i0⁺`, 0 when the entry has no pole.
    pub pole_sign: i8,
    /// Coefficient of `−2πi δ(k⁰ − ε_k)`.
    pub delta_weight: T,
}

impl<T: Scalar> PropagatorEntry<T> {
    fn pole(residue: T, sign: i8, delta_weight: T) -> Self {
        Self { pole_residue: Complex::new(residue, T::zero()), pole_sign: sign, delta_weight }
    }

    fn on_shell(delta_weight: T) -> Self {
        Self { pole_residue: Complex::new(T::zero(), T::zero()), pole_sign: 0, delta_weight }
    }

    /// Principal-value coefficient and total delta weight, after splitting
    /// `1/(x ± i0⁺) = P(1/x) ∓ iπ δ(x)`.
    pub fn canonical(&self) -> (Complex<T>, Complex<T>) {
        let s: T = c(f64::from(self.pole_sign));
        let from_pole = self.pole_residue * s / c::<T>(2.0);
        (self.pole_residue, from_pole + Complex::new(self.delta_weight, T::zero()))
    }

    /// Value at detuning `x = k⁰ − ε_k` with the `i0⁺` replaced by a finite
    /// `eps` and the delta by a Lorentzian of the same width.
    pub fn regulated(&self, detuning: T, eps: T) -> Complex<T> {
        let two_pi = c::<T>(2.0) * T::PI();
        let lorentz = eps / (T::PI() * (detuning * detuning + eps * eps));
        let pole = if self.pole_sign == 0 {
            Complex::new(T::zero(), T::zero())
        } else {
            let s: T = c(f64::from(self.pole_sign));
            self.pole_residue / Complex::new(detuning, s * eps)
        };
        pole + Complex::new(T::zero(), -two_pi * self.delta_weight * lorentz)
    }
}

/// Residual of `G⁺⁺ + G⁻⁻ − ξG⁺⁻ − ξG⁻⁺`, split by layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual<T> {
    pub principal: Complex<T>,
    pub delta: Complex<T>,
}

impl<T: Scalar> IdentityResidual<T> {
    pub fn max_abs(&self) -> T {
        self.principal.norm().max(self.delta.norm())
    }
}

fn energy<T: Scalar>(k: T, mu: T) -> T {
    k * k / c(2.0) - mu
}

/// Occupation number `1 / (exp(β ε_k) − ξ)` with `ε_k = k²/2 − μ`.
pub fn occupation<T: Scalar>(k: T, beta: T, mu: T, s: Statistics) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let eps = energy(k, mu);
    let x = beta * eps;
    match s {
        Statistics::Fermi => {
            if eps == T::zero() {
                return Ok(c(0.5));
            }
            if x > T::zero() {
                let e = (-x).exp();
                Ok(e / (T::one() + e))
            } else {
                Ok(T::one() / (T::one() + x.exp()))
            }
        }
        Statistics::Bose => {
            if !(eps > T::zero()) {
                return Err(Error::Domain(format!(
                    "Bose occupation needs eps_k > 0 (no condensate), got {eps}"
                )));
            }
            Ok(T::one() / x.exp_m1())
        }
    }
}

/// Free propagator in frequency-momentum space. The coefficients do not
/// depend on `k0`; it only fixes where the distributions are evaluated.
pub fn ctp_propagator<T: Scalar>(
    k0: T,
    k: T,
    beta: T,
    mu: T,
    s: Statistics,
) -> Result<CtpMatrix<PropagatorEntry<T>>> {
    if !k0.is_finite() || !k.is_finite() {
        return Err(Error::Domain("k0 and k must be finite".into()));
    }
    let n = occupation(k, beta, mu, s)?;
    let xi: T = s.xi();
    Ok(CtpMatrix {
        pp: PropagatorEntry::pole(T::one(), 1, xi * n),
        pm: PropagatorEntry::on_shell(n),
        mp: PropagatorEntry::on_shell(xi + n),
        mm: PropagatorEntry::pole(-T::one(), -1, xi * n),
    })
}

/// Checks `G⁺⁺ + G⁻⁻ = ξ(G⁺⁻ + G⁻⁺)` layer by layer.
pub fn identity_residual<T: Scalar>(
    m: &CtpMatrix<PropagatorEntry<T>>,
    s: Statistics,
) -> IdentityResidual<T> {
    let xi = Complex::new(s.xi::<T>(), T::zero());
    let [pp, pm, mp, mm] = m.entries().map(|e| e.canonical());
    IdentityResidual {
        principal: pp.0 + mm.0 - xi * pm.0 - xi * mp.0,
        delta: pp.1 + mm.1 - xi * pm.1 - xi * mp.1,
    }
}
