//! Truncated power series in a single dimensionless coupling.

use std::fmt;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The expansion variable of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVariable {
    Rho,
    Lambda0,
}

impl fmt::Display for SeriesVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesVariable::Rho => f.write_str("rho"),
            SeriesVariable::Lambda0 => f.write_str("lambda0"),
        }
    }
}

/// `sum_{n <= order} coeffs[n] x^n`, with `coeffs.len() == order + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries<T = f64> {
    variable: SeriesVariable,
    coeffs: Vec<T>,
}

impl<T> PowerSeries<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    /// Fails on an empty coefficient list (the order would be undefined).
    pub fn new(variable: SeriesVariable, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a power series needs at least one coefficient".into()));
        }
        Ok(Self { variable, coeffs })
    }

    pub fn zero(variable: SeriesVariable, order: usize) -> Self {
        Self {
            variable,
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn variable(&self) -> SeriesVariable {
        self.variable
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Truncates or zero-pads to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        Self {
            variable: self.variable,
            coeffs: (0..=order).map(|n| self.coeff(n)).collect(),
        }
    }

    /// Same coefficients under another variable name, e.g. `rho -> a`.
    pub fn relabel(&self, variable: SeriesVariable) -> Self {
        Self {
            variable,
            coeffs: self.coeffs.clone(),
        }
    }

    fn check_variable(&self, other: &Self) -> Result<()> {
        if self.variable != other.variable {
            return Err(Error::InvalidInput(format!(
                "series in {} and {} cannot be combined",
                self.variable, other.variable
            )));
        }
        Ok(())
    }

    /// Sum, truncated at the lower of the two orders.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_variable(other)?;
        let order = self.order().min(other.order());
        Ok(Self {
            variable: self.variable,
            coeffs: (0..=order).map(|n| self.coeff(n) + other.coeff(n)).collect(),
        })
    }

    /// Cauchy product, truncated at the lower of the two orders.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_variable(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(T::zero(), |acc, k| {
                    acc + self.coeffs[k].clone() * other.coeffs[n - k].clone()
                })
            })
            .collect();
        Ok(Self {
            variable: self.variable,
            coeffs,
        })
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            variable: self.variable,
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// `x -> alpha x`: coefficient `n` is multiplied by `alpha^n`.
    pub fn compose_scaling(&self, alpha: T) -> Self {
        let mut power = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.clone() * power.clone());
            power = power * alpha.clone();
        }
        Self {
            variable: self.variable,
            coeffs,
        }
    }
}

impl PowerSeries<f64> {
    /// Horner evaluation of the full truncated series.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `sum_{n <= upto} c_n x^n`.
    pub fn partial_sum(&self, x: f64, upto: usize) -> f64 {
        self.coeffs[..=upto.min(self.order())]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

impl PowerSeries<BigRational> {
    pub fn to_f64(&self) -> PowerSeries<f64> {
        PowerSeries {
            variable: self.variable,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }

    /// Coefficients as `p/q` strings.
    pub fn rational_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}
