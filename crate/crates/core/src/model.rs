//! Coefficients and data of the model problem `(−∇·(κ∇) + μ)² u = f`.

use crate::error::{Error, Result};
use crate::poly::{manufactured_rhs, KappaMatrix, Poly2};

/// Piecewise constant `κ` and `μ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Uniform { kappa: KappaMatrix, mu: f64 },
    PerElement(Vec<(KappaMatrix, f64)>),
}

impl Coefficients {
    pub fn uniform(kappa: KappaMatrix, mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!("mu = {mu} must be a nonnegative number")));
        }
        Ok(Coefficients::Uniform { kappa, mu })
    }

    #[inline]
    pub fn kappa(&self, t: usize) -> KappaMatrix {
        match self {
            Coefficients::Uniform { kappa, .. } => *kappa,
            Coefficients::PerElement(v) => v[t].0,
        }
    }

    #[inline]
    pub fn mu(&self, t: usize) -> f64 {
        match self {
            Coefficients::Uniform { mu, .. } => *mu,
            Coefficients::PerElement(v) => v[t].1,
        }
    }
}

/// Coefficients, source `f`, and boundary data.
///
/// The boundary data are carried by a polynomial `g`: `ξ = g|∂Ω` and `ν = κ∇g·n|∂Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelProblem {
    pub coefficients: Coefficients,
    pub source: Poly2,
    pub boundary: Poly2,
}

impl ModelProblem {
    /// Data manufactured from an exact solution with uniform coefficients.
    pub fn manufactured(u: &Poly2, kappa: KappaMatrix, mu: f64) -> Result<Self> {
        Ok(Self {
            coefficients: Coefficients::uniform(kappa, mu)?,
            source: manufactured_rhs(u, &kappa, mu),
            boundary: u.clone(),
        })
    }

    /// `f = 0` with homogeneous boundary data.
    pub fn homogeneous(kappa: KappaMatrix, mu: f64) -> Result<Self> {
        Self::manufactured(&Poly2::zero(), kappa, mu)
    }
}
