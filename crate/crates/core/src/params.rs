//! Density parametrization and the plasma scales derived from it.
//!
//! Units are fixed once here: ħ = m = k_F = 1. Wavevectors are measured in
//! units of k_F and frequencies by the dimensionless `z = ω m / ħ k_F²`, so
//! every quantity returned by the crate is a plain number.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// `κ = (4 / 9π)^{1/3}`, which links the Coulomb coupling to `r_s` through
/// `e² m / ħ² k_F = 4π κ r_s`.
pub fn kappa<T: Scalar>() -> T {
    (c::<T>(4.0) / (c::<T>(9.0) * T::PI())).cbrt()
}

/// Electron gas parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasmaParams<T> {
    r_s: T,
    kappa: T,
    m_sq: T,
    z_max: T,
}

/// Plasmon frequency at vanishing wavevector and Thomas-Fermi wavevector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScales<T> {
    pub z_pl: T,
    pub q_tf: T,
}

impl<T: Scalar> PlasmaParams<T> {
    /// Massless photon, default root-search ceiling `z_max = 4`.
    pub fn new(r_s: T) -> Result<Self> {
        Self::with_all(r_s, T::zero(), c(4.0))
    }

    pub fn with_all(r_s: T, m_sq: T, z_max: T) -> Result<Self> {
        if !(r_s > T::zero()) || !r_s.is_finite() {
            return Err(Error::InvalidParams(format!("r_s must be positive, got {r_s}")));
        }
        if !(m_sq >= T::zero()) || !m_sq.is_finite() {
            return Err(Error::InvalidParams(format!("m_sq must be non-negative, got {m_sq}")));
        }
        if !(z_max > T::zero()) || !z_max.is_finite() {
            return Err(Error::InvalidParams(format!("z_max must be positive, got {z_max}")));
        }
        Ok(Self { r_s, kappa: kappa(), m_sq, z_max })
    }

    pub fn with_m_sq(self, m_sq: T) -> Result<Self> {
        Self::with_all(self.r_s, m_sq, self.z_max)
    }

    pub fn with_z_max(self, z_max: T) -> Result<Self> {
        Self::with_all(self.r_s, self.m_sq, z_max)
    }

    pub fn with_r_s(self, r_s: T) -> Result<Self> {
        Self::with_all(r_s, self.m_sq, self.z_max)
    }

    pub fn r_s(&self) -> T {
        self.r_s
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// Photon mass squared in units of k_F².
    pub fn m_sq(&self) -> T {
        self.m_sq
    }

    pub fn z_max(&self) -> T {
        self.z_max
    }

    /// `e² m k_F / 2π² ħ²` in units of k_F², i.e. `2κ r_s / π`.
    pub fn lindhard_prefactor(&self) -> T {
        c::<T>(2.0) * self.kappa * self.r_s / T::PI()
    }

    /// `m e² k_F / 4π ħ²` in units of k_F², i.e. `κ r_s`. The damping carries
    /// an additional `1/q`.
    pub fn damping_prefactor(&self) -> T {
        self.kappa * self.r_s
    }

    /// Coulomb coupling `e²` in units ħ = m = k_F = 1.
    pub fn coupling(&self) -> T {
        c::<T>(4.0) * T::PI() * self.kappa * self.r_s
    }

    pub fn derived_scales(&self) -> DerivedScales<T> {
        let x = c::<T>(4.0) * self.kappa * self.r_s / T::PI();
        DerivedScales { z_pl: (x / c(3.0)).sqrt(), q_tf: x.sqrt() }
    }
}
