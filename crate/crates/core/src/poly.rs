//! Sparse multivariate polynomials in the alpha factors.
//!
//! Expectations under a Dirichlet posterior are available in closed form for
//! monomials, so polynomial objectives are kept as explicit term lists and
//! integrated term by term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One term `coeff * prod_i x_i^exponents[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

/// Polynomial in `num_vars` variables, stored as a normalized sparse term
/// list: exponent vectors are unique, sorted, and have non-zero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialPoly {
    num_vars: usize,
    terms: Vec<Term>,
}

impl MonomialPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: Vec::new() }
    }

    pub fn constant(num_vars: usize, value: f64) -> Self {
        let mut p = Self::zero(num_vars);
        p.terms.push(Term { coeff: value, exponents: vec![0; num_vars] });
        p.normalize();
        p
    }

    /// The single variable `x_i` (zero-based).
    pub fn var(num_vars: usize, i: usize) -> Result<Self> {
        if i >= num_vars {
            return Err(Error::Dimension { expected: num_vars, got: i + 1 });
        }
        let mut exponents = vec![0; num_vars];
        exponents[i] = 1;
        Ok(Self { num_vars, terms: vec![Term { coeff: 1.0, exponents }] })
    }

    /// Builds a polynomial from raw `(coefficient, exponents)` pairs.
    pub fn from_terms(num_vars: usize, raw: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        let mut terms = Vec::with_capacity(raw.len());
        for (coeff, exponents) in raw {
            if exponents.len() != num_vars {
                return Err(Error::Dimension { expected: num_vars, got: exponents.len() });
            }
            if !coeff.is_finite() {
                return Err(Error::NotFinite { name: "polynomial coefficient", value: coeff });
            }
            terms.push(Term { coeff, exponents });
        }
        let mut p = Self { num_vars, terms };
        p.normalize();
        Ok(p)
    }

    /// Linear form `sum_i weights[i] * x_i`.
    pub fn linear(weights: &[f64]) -> Result<Self> {
        Self::from_terms(
            weights.len(),
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    let mut e = vec![0; weights.len()];
                    e[i] = 1;
                    (w, e)
                })
                .collect(),
        )
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.exponents.cmp(&b.exponents));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.exponents == term.exponents => last.coeff += term.coeff,
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponents.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: other.num_vars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut p = Self { num_vars: self.num_vars, terms };
        p.normalize();
        Ok(p)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff *= factor;
        }
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exponents = a
                    .exponents
                    .iter()
                    .zip(&b.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                terms.push(Term { coeff: a.coeff * b.coeff, exponents });
            }
        }
        let mut p = Self { num_vars: self.num_vars, terms };
        p.normalize();
        Ok(p)
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, 1.0);
        for _ in 0..exponent {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: point.len() });
        }
        let mut total = 0.0;
        for term in &self.terms {
            let mut value = term.coeff;
            for (x, &e) in point.iter().zip(&term.exponents) {
                value *= x.powi(e as i32);
            }
            total += value;
        }
        Ok(total)
    }
}
