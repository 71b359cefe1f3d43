use thiserror::Error;

/// Failures reported by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("on-shell divergence: |q^2 - L| = {re_inv:e} below pole tolerance with damping {damping:e}")]
    OnShellDivergence { re_inv: f64, damping: f64 },

    #[error("classicality undefined (0/0): both q^2 - L and damping vanish")]
    Undefined,

    #[error("quadrature did not converge: error estimate {estimate:e} after {subdivisions} subdivisions")]
    NoConvergence { estimate: f64, subdivisions: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
