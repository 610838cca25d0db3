//! Weighted sums of correlator products.
//!
//! Every one-step recursion expands into a sum whose terms are either a
//! single correlator or a product of two (the boundary split sums). Like
//! terms are merged on insertion and zero coefficients are never stored.
//! Terms with a trivially-zero factor are kept until [`LinearCombination::prune`]
//! is called, so mechanical rewrites stay inspectable.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::key::CorrelatorKey;
use crate::scalar::Scalar;

/// A product of one or two correlators, factors kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Product(Vec<CorrelatorKey>);

impl Product {
    pub fn single(key: CorrelatorKey) -> Self {
        Self(vec![key])
    }

    pub fn pair(a: CorrelatorKey, b: CorrelatorKey) -> Self {
        let mut factors = vec![a, b];
        factors.sort();
        Self(factors)
    }

    pub fn factors(&self) -> &[CorrelatorKey] {
        &self.0
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.0.iter().any(CorrelatorKey::is_trivially_zero)
    }

    pub fn as_single(&self) -> Option<&CorrelatorKey> {
        match self.0.as_slice() {
            [k] => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearCombination<T> {
    terms: BTreeMap<Product, T>,
}

impl<T: Scalar> Default for LinearCombination<T> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<T: Scalar> LinearCombination<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, coeff: T, product: Product) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&product) {
            Some(existing) => {
                *existing = existing.clone() + coeff;
                if existing.is_zero() {
                    self.terms.remove(&product);
                }
            }
            None => {
                self.terms.insert(product, coeff);
            }
        }
    }

    pub fn add_key(&mut self, coeff: T, key: CorrelatorKey) {
        self.add(coeff, Product::single(key));
    }

    pub fn add_pair(&mut self, coeff: T, a: CorrelatorKey, b: CorrelatorKey) {
        self.add(coeff, Product::pair(a, b));
    }

    /// Drops every term with a trivially-zero factor.
    pub fn prune(&mut self) {
        self.terms.retain(|p, _| !p.is_trivially_zero());
    }

    pub fn pruned(mut self) -> Self {
        self.prune();
        self
    }

    /// Adds `factor * other` term by term.
    pub fn add_scaled(&mut self, factor: &T, other: &Self) {
        for (p, c) in &other.terms {
            self.add(c.clone() * factor.clone(), p.clone());
        }
    }

    pub fn scale(&mut self, factor: &T) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for c in self.terms.values_mut() {
            *c = c.clone() * factor.clone();
        }
    }

    pub fn scaled(mut self, factor: &T) -> Self {
        self.scale(factor);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Product, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, product: &Product) -> Option<&T> {
        self.terms.get(product)
    }

    pub fn coefficient_of_key(&self, key: &CorrelatorKey) -> Option<&T> {
        self.terms.get(&Product::single(key.clone()))
    }

    /// Every correlator appearing in any term.
    pub fn keys(&self) -> impl Iterator<Item = &CorrelatorKey> {
        self.terms.keys().flat_map(|p| p.factors().iter())
    }

    /// Sum of `coeff * prod(value(factor))`.
    pub fn evaluate<F>(&self, mut value: F) -> Result<T>
    where
        F: FnMut(&CorrelatorKey) -> Result<T>,
    {
        let mut total = T::zero();
        for (product, coeff) in &self.terms {
            let mut term = coeff.clone();
            for key in product.factors() {
                let v = value(key)?;
                if v.is_zero() {
                    term = T::zero();
                    break;
                }
                term = term * v;
            }
            total = total + term;
        }
        Ok(total)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for LinearCombination<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::key::canonicalize;
    use crate::Rational;

    fn key(g: u32, d: &[u32]) -> CorrelatorKey {
        canonicalize(g, d).unwrap()
    }

    #[test]
    fn merges_like_terms_and_drops_zeros() {
        let mut c = LinearCombination::<Rational>::new();
        c.add_key(rational(1, 2), key(1, &[0, 2]));
        c.add_key(rational(1, 2), key(1, &[2, 0]));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[2, 0])), Some(&rational(1, 1)));
        c.add_key(rational(-1, 1), key(1, &[2, 0]));
        assert!(c.is_empty());
    }

    #[test]
    fn prunes_trivially_zero_terms() {
        let mut c = LinearCombination::<Rational>::new();
        c.add_key(rational(3, 1), key(0, &[0, 0]));
        c.add_pair(rational(3, 1), key(1, &[1]), key(1, &[2, 2]));
        c.add_key(rational(1, 1), key(1, &[1]));
        assert_eq!(c.len(), 3);
        let c = c.pruned();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient_of_key(&key(1, &[1])), Some(&rational(1, 1)));
    }

    #[test]
    fn pair_order_is_irrelevant() {
        let mut c = LinearCombination::<Rational>::new();
        c.add_pair(rational(1, 1), key(1, &[1]), key(0, &[0, 0, 0]));
        c.add_pair(rational(1, 1), key(0, &[0, 0, 0]), key(1, &[1]));
        assert_eq!(c.len(), 1);
        let v = c
            .evaluate(|k| Ok(if k.genus() == 1 { rational(1, 24) } else { rational(1, 1) }))
            .unwrap();
        assert_eq!(v, rational(1, 12));
    }

    #[test]
    fn float_coefficients() {
        let mut c = LinearCombination::<f64>::new();
        c.add_key(0.5, key(1, &[1]));
        c.scale(&4.0);
        assert_eq!(c.evaluate(|_| Ok(0.25)).unwrap(), 0.5);
    }
}
