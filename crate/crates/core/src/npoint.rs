//! The n-point function route.
//!
//! `F(x_1..x_n) = sum_g sum <tau_{d_1}..tau_{d_n}>_g prod x_j^{d_j}` and its
//! normalization `G = exp(-sum x_j^3 / 24) F`. For `n >= 3` the genus-`g`
//! slice of `G` is built from
//!
//! ```text
//! G_g = P_g / (2g+n-1) + Delta G_{g-1} / (4 (2g+n-1))
//! P_r = 1/(2 sum x) sum_{I,J nonempty} (sum_I x)^2 (sum_J x)^2 sum_{r'} G_{r'}(x_I) G_{r-r'}(x_J)
//! Delta = ((sum x)^3 - sum x^3) / 3
//! ```
//!
//! The recursion only ever consumes one- and two-point functions through
//! the weighted forms `(sum_I x)^2 G_g(x_I)`, which are polynomials:
//! `x^2 G(x) = 1` (genus 0 only) and
//! `(x+y)^2 G_g(x,y) = (x+y)^{g+1} (xy)^g / (4^g (2g+1)!!)`.
//!
//! Unweighted, `G_0` is `x^{-2}` for one point and `1/(x+y)` for two; in
//! general `G_0 = (sum x)^{n-3}`. [`NPointEngine::full_f_weighted`] carries
//! those terms through exact division so identities involving the unstable
//! parts can be checked on polynomials.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{double_factorial, factorial, integer, rational, semifactorial};
use crate::cache::CacheStore;
use crate::error::{Error, Result};
use crate::key::{is_stable, CorrelatorKey};
use crate::scalar::Scalar;
use crate::{Polynomial, Rational};

/// A homogeneous slice of degree `3g + n - 3` of `G` or `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusSlice {
    pub n_vars: usize,
    pub genus: u32,
    pub poly: Polynomial,
}

/// `(sum_{i in I} x_i)^2 G_g(x_I)`, expressed in the ambient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSlice {
    pub vars: Vec<usize>,
    pub genus: u32,
    pub poly: Polynomial,
}

/// `((sum x)^3 - sum x^3) / 3`.
pub fn delta_poly(n: usize) -> Polynomial {
    let cube = Polynomial::variable_sum(n).pow(3);
    (&cube - &Polynomial::power_sum(n, 3)).scaled(&rational(1, 3))
}

/// `H_d = (sign * sum x^3 / 24)^d / d!`; `sign = -1` gives the
/// coefficients of `exp(-sum x^3 / 24)`.
pub fn exp_weight(n: usize, d: u32, sign: i64) -> Polynomial {
    let base = Polynomial::power_sum(n, 3).scaled(&rational(sign, 24));
    base.pow(d).scaled(&(Rational::one() / Rational::from_bigint(&factorial(d as u64))))
}

/// `G_g(x, y) = (xy)^g (x+y)^{g-1} / (4^g (2g+1)!!)` for `g >= 1`.
pub fn two_point_g(g: u32) -> Result<Polynomial> {
    if g == 0 {
        return Err(Error::Precondition("G_0(x, y) = 1/(x+y) is not a polynomial".into()));
    }
    let xy = Polynomial::monomial(vec![1, 1], Rational::one());
    let s = Polynomial::variable_sum(2);
    Ok(xy.pow(g).mul(&s.pow(g - 1)).scaled(&two_point_weight(g)?))
}

fn two_point_weight(g: u32) -> Result<Rational> {
    let denom = BigInt::from(4).pow(g) * double_factorial(2 * g as i64 + 1)?;
    Ok(Rational::one() / Rational::from_bigint(&denom))
}

type SliceMemo = RwLock<HashMap<(usize, u32), Arc<Polynomial>>>;

/// Memoized slice builder. Slices are stored on positional variables
/// `0..n`; by symmetry one copy serves every variable subset of that size.
#[derive(Debug, Default)]
pub struct NPointEngine {
    g_slices: SliceMemo,
    weighted: SliceMemo,
    f_slices: SliceMemo,
}

fn memo_get(memo: &SliceMemo, key: (usize, u32)) -> Option<Arc<Polynomial>> {
    memo.read().unwrap_or_else(|e| e.into_inner()).get(&key).cloned()
}

fn memo_put(memo: &SliceMemo, key: (usize, u32), value: Polynomial) -> Arc<Polynomial> {
    let mut map = memo.write().unwrap_or_else(|e| e.into_inner());
    map.entry(key).or_insert_with(|| Arc::new(value)).clone()
}

impl NPointEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(sum x)^2 G_g` on `m` positional variables.
    fn weighted_local(&self, m: usize, g: u32) -> Result<Arc<Polynomial>> {
        if let Some(p) = memo_get(&self.weighted, (m, g)) {
            return Ok(p);
        }
        let poly = match m {
            0 => return Err(Error::InvalidInput("empty variable set".into())),
            1 if g == 0 => Polynomial::constant(1, Rational::one()),
            1 => Polynomial::zero(1, 3 * g),
            2 => {
                let xy = Polynomial::monomial(vec![1, 1], Rational::one());
                let s = Polynomial::variable_sum(2);
                s.pow(g + 1).mul(&xy.pow(g)).scaled(&two_point_weight(g)?)
            }
            _ => Polynomial::variable_sum(m).pow(2).mul(&self.g_slice(m, g)?.poly),
        };
        Ok(memo_put(&self.weighted, (m, g), poly))
    }

    /// `(sum_{i in vars} x_i)^2 G_g(x_vars)` inside an `n_vars` ring.
    pub fn weighted_slice(&self, n_vars: usize, vars: &[usize], g: u32) -> Result<WeightedSlice> {
        let local = self.weighted_local(vars.len(), g)?;
        Ok(WeightedSlice { vars: vars.to_vec(), genus: g, poly: local.embed(n_vars, vars) })
    }

    /// The split sum defining `P_r`, before division by `2 sum x`.
    pub fn p_r_numerator(&self, n: usize, r: u32) -> Result<Polynomial> {
        if n < 2 {
            return Err(Error::Precondition("P_r needs at least two variables".into()));
        }
        let mut total = Polynomial::zero(n, 3 * r + n as u32 - 2);
        // ordered splits come in (I, J) / (J, I) pairs with equal products,
        // so enumerate the subsets I containing variable 0 and double
        let full: u32 = (1 << n) - 1;
        for mask in 1..full {
            if mask & 1 == 0 {
                continue;
            }
            let left: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let right: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
            for r1 in 0..=r {
                let a = self.weighted_slice(n, &left, r1)?;
                let b = self.weighted_slice(n, &right, r - r1)?;
                total.add_scaled(&a.poly.mul(&b.poly), &integer(2));
            }
        }
        Ok(total)
    }

    /// `P_r` as a polynomial. At `n = 2`, `P_0 = 1/(x_1+x_2)` is rejected.
    pub fn p_r(&self, n: usize, r: u32) -> Result<Polynomial> {
        if n == 2 && r == 0 {
            return Err(Error::Precondition("P_0(x, y) = 1/(x+y) is not a polynomial".into()));
        }
        let numer = self.p_r_numerator(n, r)?;
        Ok(numer.div_by_variable_sum()?.scaled(&rational(1, 2)))
    }

    /// `G_g` for `n >= 3` via the two-term genus recursion.
    pub fn g_slice(&self, n: usize, g: u32) -> Result<GenusSlice> {
        if n < 3 {
            return Err(Error::Precondition(format!("g_slice needs n >= 3, got {n}")));
        }
        let poly = match memo_get(&self.g_slices, (n, g)) {
            Some(p) => p,
            None => {
                let c = 2 * g as i64 + n as i64 - 1;
                let mut poly = self.p_r(n, g)?.scaled(&rational(1, c));
                if g >= 1 {
                    let prev = self.g_slice(n, g - 1)?.poly;
                    poly.add_scaled(&delta_poly(n).mul(&prev), &rational(1, 4 * c));
                }
                memo_put(&self.g_slices, (n, g), poly)
            }
        };
        Ok(GenusSlice { n_vars: n, genus: g, poly: (*poly).clone() })
    }

    /// `G_g` for `n >= 3` from the closed double sum
    /// `sum_{r+s=g} (2r+n-3)!! / (4^s (2g+n-1)!!) P_r Delta^s`.
    pub fn g_slice_closed(&self, n: usize, g: u32) -> Result<Polynomial> {
        if n < 3 {
            return Err(Error::Precondition(format!("g_slice_closed needs n >= 3, got {n}")));
        }
        let n = n as i64;
        let delta = delta_poly(n as usize);
        let mut total = Polynomial::zero(n as usize, 3 * g + n as u32 - 3);
        for r in 0..=g {
            let s = g - r;
            let numer = semifactorial(2 * r as i64 + n - 3);
            let denom = BigInt::from(4).pow(s) * semifactorial(2 * g as i64 + n - 1);
            let w = Rational::new(numer, denom);
            total.add_scaled(&self.p_r(n as usize, r)?.mul(&delta.pow(s)), &w);
        }
        Ok(total)
    }

    /// `(sum x)^m F_g(x_1..x_n)` including the unstable genus-0 terms of the
    /// one- and two-point functions. Fails when the result is not a
    /// polynomial.
    pub fn full_f_weighted(&self, n: usize, g: u32, m: u32) -> Result<Polynomial> {
        let degree = 3 * g as i64 + n as i64 - 3 + m as i64;
        if degree < 0 || n == 0 {
            return Err(Error::Precondition(format!(
                "(sum x)^{m} F_{g} on {n} variables is not a polynomial"
            )));
        }
        let s = Polynomial::variable_sum(n);
        let mut total = Polynomial::zero(n, degree as u32);
        for k in 0..=g {
            let h = exp_weight(n, k, 1);
            let rest = g - k;
            let term = if rest == 0 && n < 3 {
                // G_0 = (sum x)^{n-3}
                let e = m as i64 + n as i64 - 3;
                if e >= 0 {
                    h.mul(&s.pow(e as u32))
                } else {
                    h.div_by_variable_sum_pow((-e) as u32)?
                }
            } else {
                let gpart = match n {
                    1 => continue,
                    2 => two_point_g(rest)?,
                    _ => self.g_slice(n, rest)?.poly,
                };
                h.mul(&gpart).mul(&s.pow(m))
            };
            total.add_scaled(&term, &Rational::one());
        }
        Ok(total)
    }

    /// The stable genus-`g` slice of `F`: coefficients are exactly the
    /// correlators `<tau_{d_1}..tau_{d_n}>_g`. Unstable `(g, n)` give an
    /// empty slice.
    pub fn f_slice(&self, n: usize, g: u32) -> Result<GenusSlice> {
        if n == 0 {
            return Err(Error::InvalidInput("f_slice needs n >= 1".into()));
        }
        if !is_stable(g, n) {
            return Ok(GenusSlice { n_vars: n, genus: g, poly: Polynomial::zero(n, 0) });
        }
        let poly = match memo_get(&self.f_slices, (n, g)) {
            Some(p) => p,
            None => memo_put(&self.f_slices, (n, g), self.full_f_weighted(n, g, 0)?),
        };
        Ok(GenusSlice { n_vars: n, genus: g, poly: (*poly).clone() })
    }

    /// Coefficient of `prod x_j^{d_j}` in the stable `F_g` slice.
    pub fn coefficient(&self, key: &CorrelatorKey) -> Result<Rational> {
        if key.is_trivially_zero() {
            return Ok(Rational::zero());
        }
        let n = key.n();
        let poly = match memo_get(&self.f_slices, (n, key.genus())) {
            Some(p) => p,
            None => {
                self.f_slice(n, key.genus())?;
                memo_get(&self.f_slices, (n, key.genus())).expect("slice just built")
            }
        };
        Ok(poly.coefficient(key.indices()))
    }
}

/// Correlators read off the n-point function.
pub struct NPointEvaluator<'a> {
    cache: &'a CacheStore,
    engine: NPointEngine,
}

impl<'a> NPointEvaluator<'a> {
    pub fn new(cache: &'a CacheStore) -> Self {
        Self { cache, engine: NPointEngine::new() }
    }

    pub fn engine(&self) -> &NPointEngine {
        &self.engine
    }

    pub fn eval(&self, key: &CorrelatorKey) -> Result<Rational> {
        if key.is_trivially_zero() {
            return Ok(Rational::zero());
        }
        self.cache.get_or_compute(key, |k| self.engine.coefficient(k))
    }
}

pub fn npoint_eval(key: &CorrelatorKey, cache: &CacheStore) -> Result<Rational> {
    NPointEvaluator::new(cache).eval(key)
}
