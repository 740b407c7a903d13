use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ModelProblem;
use crate::poly::{bubble_solution, manufactured_rhs, KappaMatrix, Poly2};

/// A manufactured-solution test case.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCase {
    pub name: String,
    pub kappa: KappaMatrix,
    pub mu: f64,
    pub exact: Poly2,
}

impl ModelCase {
    /// `κ = 2I`, `μ = 1`, `u = (x − x²)²(y − y²)²`.
    pub fn s1() -> Self {
        Self { name: "s1".into(), kappa: KappaMatrix::isotropic(2.0), mu: 1.0, exact: bubble_solution() }
    }

    /// `κ = [[2, −1], [−1, 2]]`, `μ = 1`, `u = (x − x²)²(y − y²)²`.
    pub fn s2() -> Self {
        Self {
            name: "s2".into(),
            kappa: KappaMatrix::new(2.0, -1.0, 2.0).expect("SPD"),
            mu: 1.0,
            exact: bubble_solution(),
        }
    }

    pub fn custom(exact: Poly2, kappa: KappaMatrix, mu: f64) -> Result<Self> {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!("mu = {mu} must be a nonnegative number")));
        }
        Ok(Self { name: "custom".into(), kappa, mu, exact })
    }

    pub fn source(&self) -> Poly2 {
        manufactured_rhs(&self.exact, &self.kappa, self.mu)
    }

    pub fn problem(&self) -> Result<ModelProblem> {
        ModelProblem::manufactured(&self.exact, self.kappa, self.mu)
    }
}

/// Named case selector used by front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseName {
    S1,
    S2,
    Custom,
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseName::S1 => "s1",
            CaseName::S2 => "s2",
            CaseName::Custom => "custom",
        })
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s1" => Ok(CaseName::S1),
            "s2" => Ok(CaseName::S2),
            "custom" => Ok(CaseName::Custom),
            _ => Err(Error::Config(format!("unknown case '{s}' (expected s1, s2 or custom)"))),
        }
    }
}
