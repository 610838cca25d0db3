//! Sparse homogeneous polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration is in
//! lexicographic order with `x_0` most significant. That order is what the
//! exact division by `x_0 + ... + x_{n-1}` relies on.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial<T> {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> HomogeneousPolynomial<T> {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        Self { n_vars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, value: T) -> Self {
        let mut p = Self::zero(n_vars, 0);
        p.add_term(vec![0; n_vars], value);
        p
    }

    pub fn monomial(exponent: Exponent, coeff: T) -> Self {
        let degree = exponent.iter().sum();
        let mut p = Self::zero(exponent.len(), degree);
        p.add_term(exponent, coeff);
        p
    }

    /// `sum_{i in vars} x_i`.
    pub fn linear_sum(n_vars: usize, vars: &[usize]) -> Self {
        let mut p = Self::zero(n_vars, 1);
        for &v in vars {
            let mut e = vec![0; n_vars];
            e[v] = 1;
            p.add_term(e, T::one());
        }
        p
    }

    /// `x_0 + ... + x_{n-1}`.
    pub fn variable_sum(n_vars: usize) -> Self {
        Self::linear_sum(n_vars, &(0..n_vars).collect::<Vec<_>>())
    }

    /// `sum_i x_i^power`.
    pub fn power_sum(n_vars: usize, power: u32) -> Self {
        let mut p = Self::zero(n_vars, power);
        for v in 0..n_vars {
            let mut e = vec![0; n_vars];
            e[v] = power;
            p.add_term(e, T::one());
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> T {
        self.terms.get(exponent).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    /// Adds `coeff * x^exponent`; the exponent must have the right length
    /// and total degree.
    pub fn add_term(&mut self, exponent: Exponent, coeff: T) {
        debug_assert_eq!(exponent.len(), self.n_vars);
        debug_assert_eq!(exponent.iter().sum::<u32>(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
    }

    /// `self += factor * other`. Zero polynomials adapt to the other degree.
    pub fn add_scaled(&mut self, other: &Self, factor: &T) {
        self.check_compatible(other);
        if other.is_zero() || factor.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding polynomials of different degree");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone() * factor.clone());
        }
    }

    pub fn scaled(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.n_vars, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.n_vars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.n_vars, T::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Relabels variable `i` as variable `map[i]` of an `n_vars`-variable
    /// ring. `map` must be injective.
    pub fn embed(&self, n_vars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.n_vars);
        let mut out = Self::zero(n_vars, self.degree);
        for (e, c) in &self.terms {
            let mut target = vec![0; n_vars];
            for (i, &p) in e.iter().enumerate() {
                target[map[i]] = p;
            }
            out.terms.insert(target, c.clone());
        }
        out
    }

    /// Same ring, variables permuted by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.embed(self.n_vars, perm)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n_vars.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.n_vars).collect();
            perm.swap(i, i + 1);
            self.permuted(&perm) == *self
        })
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n_vars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c.clone() * T::from_int(e[var] as i64));
        }
        out
    }

    /// `x_var * self`.
    pub fn mul_variable(&self, var: usize) -> Self {
        let mut out = Self::zero(self.n_vars, self.degree + 1);
        for (e, c) in &self.terms {
            let mut m = e.clone();
            m[var] += 1;
            out.terms.insert(m, c.clone());
        }
        out
    }

    /// Exact quotient by `x_0 + ... + x_{n-1}`; a nonzero remainder is an
    /// [`Error::Inconsistency`].
    pub fn div_by_variable_sum(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero(self.n_vars, self.degree.saturating_sub(1)));
        }
        if self.degree == 0 || self.n_vars == 0 {
            return Err(Error::Inconsistency(
                "nonzero constant is not divisible by the variable sum".into(),
            ));
        }
        let mut rem = self.terms.clone();
        let mut quotient = Self::zero(self.n_vars, self.degree - 1);
        while let Some((lead, c)) = rem.last_key_value() {
            if c.is_negligible() {
                let lead = lead.clone();
                rem.remove(&lead);
                continue;
            }
            if lead[0] == 0 {
                // every remaining term is free of x_0
                return Err(Error::Inconsistency(format!(
                    "division by the variable sum leaves a remainder with {} terms",
                    rem.len()
                )));
            }
            let c = c.clone();
            let mut q = lead.clone();
            q[0] -= 1;
            for v in 0..self.n_vars {
                let mut e = q.clone();
                e[v] += 1;
                let entry = rem.entry(e.clone()).or_insert_with(T::zero);
                *entry = entry.clone() - c.clone();
                if entry.is_zero() {
                    rem.remove(&e);
                }
            }
            quotient.terms.insert(q, c);
        }
        Ok(quotient)
    }

    /// Divides by the variable sum `times` times.
    pub fn div_by_variable_sum_pow(&self, times: u32) -> Result<Self> {
        let mut p = self.clone();
        for _ in 0..times {
            p = p.div_by_variable_sum()?;
        }
        Ok(p)
    }

    /// Maps every coefficient through `f`, e.g. to preview an exact
    /// polynomial in floating point.
    pub fn map_coefficients<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HomogeneousPolynomial<U> {
        let mut out = HomogeneousPolynomial::zero(self.n_vars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl<T: Scalar> Add for &HomogeneousPolynomial<T> {
    type Output = HomogeneousPolynomial<T>;

    fn add(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        out.add_scaled(rhs, &T::one());
        out
    }
}

impl<T: Scalar> Sub for &HomogeneousPolynomial<T> {
    type Output = HomogeneousPolynomial<T>;

    fn sub(self, rhs: Self) -> Self::Output {
        let mut out = self.clone();
        out.add_scaled(rhs, &-T::one());
        out
    }
}

impl<T: Scalar> Mul for &HomogeneousPolynomial<T> {
    type Output = HomogeneousPolynomial<T>;

    fn mul(self, rhs: Self) -> Self::Output {
        HomogeneousPolynomial::mul(self, rhs)
    }
}

impl<T: Scalar> Neg for &HomogeneousPolynomial<T> {
    type Output = HomogeneousPolynomial<T>;

    fn neg(self) -> Self::Output {
        self.scaled(&-T::one())
    }
}
