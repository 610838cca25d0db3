//! Bounded exhaustive checks of the recursion identities.
//!
//! Correlator-level identities are evaluated on both sides with the DVV
//! evaluator. Generating-function identities are compared coefficient by
//! coefficient on exact genus slices, using the full `F` (unstable genus-0
//! one- and two-point terms included) multiplied by each formula's
//! prefactors.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{format_rational, integer, rational};
use crate::cache::CacheStore;
use crate::combination::LinearCombination;
use crate::dvv::DvvEvaluator;
use crate::error::{Error, Result};
use crate::genus::{grouped_step, thm11_sides, thm12_sides};
use crate::key::{enumerate_keys, CorrelatorKey};
use crate::npoint::NPointEngine;
use crate::{Polynomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityId {
    Thm11,
    Thm12,
    Grouped,
    Prop24,
    Lemma25,
    Prop26,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Thm11,
        IdentityId::Thm12,
        IdentityId::Grouped,
        IdentityId::Prop24,
        IdentityId::Lemma25,
        IdentityId::Prop26,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Thm11 => "thm11",
            IdentityId::Thm12 => "thm12",
            IdentityId::Grouped => "grouped",
            IdentityId::Prop24 => "prop24",
            IdentityId::Lemma25 => "lemma25",
            IdentityId::Prop26 => "prop26",
        }
    }

    pub fn is_correlator_level(self) -> bool {
        matches!(self, IdentityId::Thm11 | IdentityId::Thm12 | IdentityId::Grouped)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    #[serde(rename = "identity")]
    pub identity_id: IdentityId,
    #[serde(rename = "checked")]
    pub instances_checked: usize,
    pub failures: Vec<Failure>,
}

impl IdentityReport {
    fn new(identity_id: IdentityId) -> Self {
        Self { identity_id, instances_checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    fn record(&mut self, instance: String, lhs: &Rational, rhs: &Rational) {
        self.instances_checked += 1;
        if lhs != rhs {
            self.failures.push(Failure {
                instance,
                lhs: format_rational(lhs),
                rhs: format_rational(rhs),
            });
        }
    }

    fn record_slice(&mut self, label: &str, lhs: &Polynomial, rhs: &Polynomial) {
        self.instances_checked += 1;
        let diff = lhs - rhs;
        for (exp, _) in diff.terms() {
            self.failures.push(Failure {
                instance: format!("{label} coefficient {exp:?}"),
                lhs: format_rational(&lhs.coefficient(exp)),
                rhs: format_rational(&rhs.coefficient(exp)),
            });
        }
    }

    fn finish(mut self) -> Self {
        self.failures.sort_by(|a, b| a.instance.cmp(&b.instance));
        self
    }
}

/// Holds the DVV memo and the slice engine across suites.
#[derive(Default)]
pub struct Verifier {
    dvv_cache: CacheStore,
    engine: NPointEngine,
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    fn dvv(&self, combo: &LinearCombination<Rational>) -> Result<Rational> {
        let ev = DvvEvaluator::new(&self.dvv_cache);
        combo.evaluate(|k| ev.eval(k))
    }

    fn dvv_key(&self, key: &CorrelatorKey) -> Result<Rational> {
        DvvEvaluator::new(&self.dvv_cache).eval(key)
    }

    /// Runs `id` over its natural bounds: `(g_max, n_max)` for correlator
    /// identities; for generating identities every `n` in `1..=n_max` with
    /// genus slices up to `g_max`.
    pub fn run(&self, id: IdentityId, g_max: u32, n_max: usize) -> Result<IdentityReport> {
        if id.is_correlator_level() {
            return self.check_correlator_identity(id, g_max, n_max);
        }
        let mut report = IdentityReport::new(id);
        for n in 1..=n_max {
            let r = self.check_generating_identity(id, n, g_max)?;
            report.instances_checked += r.instances_checked;
            report.failures.extend(r.failures);
        }
        Ok(report.finish())
    }

    /// Checks a correlator identity on every dimension-valid instance with
    /// `1 <= g <= g_max`. `n_max` bounds the `n` of each formula:
    /// all insertions for `thm11`, the insertions besides the distinguished
    /// one for `thm12` and `grouped`.
    pub fn check_correlator_identity(
        &self,
        id: IdentityId,
        g_max: u32,
        n_max: usize,
    ) -> Result<IdentityReport> {
        if g_max < 1 {
            return Err(Error::InvalidInput("g_max must be at least 1".into()));
        }
        let mut report = IdentityReport::new(id);
        for g in 1..=g_max {
            match id {
                IdentityId::Thm11 => {
                    for n in 1..=n_max {
                        for key in enumerate_keys(g, n) {
                            if key.contains(0) {
                                continue;
                            }
                            for pos in distinct_positions(key.indices()) {
                                let (factor, rhs) = thm11_sides(&key, pos)?;
                                let lhs = factor * self.dvv_key(&key)?;
                                let rhs = self.dvv(&rhs)?;
                                let label = format!("{key} d1={}", key.indices()[pos]);
                                report.record(label, &lhs, &rhs);
                            }
                        }
                    }
                }
                IdentityId::Thm12 => {
                    for n in 1..=n_max {
                        for key in enumerate_keys(g, n + 1) {
                            let Some(body) = key.without_one(0) else { continue };
                            let (factor, rhs) = thm12_sides(g, &body)?;
                            let lhs = factor * self.dvv_key(&key)?;
                            let rhs = self.dvv(&rhs)?;
                            report.record(format!("{key}"), &lhs, &rhs);
                        }
                    }
                }
                IdentityId::Grouped => {
                    for n in 0..=n_max {
                        for key in enumerate_keys(g, n + 1) {
                            for pos in distinct_positions(key.indices()) {
                                let (r, body) = key.split_at_position(pos);
                                let (lhs, rhs) = grouped_step(g, r, &body)?;
                                let label = format!("{key} r={r}");
                                report.record(label, &self.dvv(&lhs)?, &self.dvv(&rhs)?);
                            }
                        }
                    }
                }
                _ => {
                    return Err(Error::InvalidInput(format!("{id} is not a correlator identity")));
                }
            }
        }
        Ok(report.finish())
    }

    /// Compares both sides of a generating-function identity on `n`
    /// variables (`n` x-variables plus `y` for `lemma25`/`prop26`), genus
    /// slices `0..=g_max`.
    pub fn check_generating_identity(&self, id: IdentityId, n: usize, g_max: u32) -> Result<IdentityReport> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let mut report = IdentityReport::new(id);
        for g in 0..=g_max {
            let sides = match id {
                IdentityId::Prop24 => self.prop24_slice(n, g)?,
                IdentityId::Lemma25 => Some(self.lemma25_slice(n, g)?),
                IdentityId::Prop26 => Some(self.prop26_slice(n, g)?),
                _ => return Err(Error::InvalidInput(format!("{id} is not a generating identity"))),
            };
            if let Some((lhs, rhs)) = sides {
                report.record_slice(&format!("n={n} g={g}"), &lhs, &rhs);
            }
        }
        Ok(report.finish())
    }

    /// `(sum_{vars} x)^m F_g(x_vars)` inside an `ambient`-variable ring.
    fn weighted_f(&self, ambient: usize, vars: &[usize], g: u32, m: u32) -> Result<Polynomial> {
        Ok(self.engine.full_f_weighted(vars.len(), g, m)?.embed(ambient, vars))
    }

    /// `y (y + sum_I x)^a F_g(y, x_I)` with `y` as variable 0. For empty `I`
    /// the outer `y` is absorbed into the weight, since `y^a F(y)` alone is
    /// not a polynomial at genus 0.
    fn y_weighted_f(&self, ambient: usize, xs: &[usize], g: u32, a: u32) -> Result<Polynomial> {
        if xs.is_empty() {
            return self.weighted_f(ambient, &[0], g, a + 1);
        }
        let vars: Vec<usize> = std::iter::once(0).chain(xs.iter().copied()).collect();
        Ok(self.weighted_f(ambient, &vars, g, a)?.mul_variable(0))
    }

    /// One-sided string/genus relation for `F`, slice on `x_0..x_{n-1}`:
    /// `(2g+n-1) (sum x) F_g = 1/12 (sum x)^4 F_{g-1} + 1/2 sum (sum_I x)^2 (sum_J x)^2 F(x_I) F(x_J)`.
    fn prop24_slice(&self, n: usize, g: u32) -> Result<Option<(Polynomial, Polynomial)>> {
        let degree = 3 * g as i64 + n as i64 - 2;
        if degree < 0 {
            return Ok(None);
        }
        let all: Vec<usize> = (0..n).collect();
        let c = 2 * g as i64 + n as i64 - 1;
        let mut lhs = Polynomial::zero(n, degree as u32);
        if c != 0 {
            lhs.add_scaled(&self.weighted_f(n, &all, g, 1)?, &integer(c));
        }
        let mut rhs = Polynomial::zero(n, degree as u32);
        if g >= 1 {
            rhs.add_scaled(&self.weighted_f(n, &all, g - 1, 4)?, &rational(1, 12));
        }
        for (left, right) in subset_pairs(&all) {
            if left.is_empty() || right.is_empty() {
                continue;
            }
            for g1 in 0..=g {
                let a = self.weighted_f(n, &left, g1, 2)?;
                let b = self.weighted_f(n, &right, g - g1, 2)?;
                rhs.add_scaled(&a.mul(&b), &rational(1, 2));
            }
        }
        Ok(Some((lhs, rhs)))
    }

    /// Weighted dilaton-type relation, slice on `y, x_1..x_n`:
    /// `(2y d/dy + 1)((y+sum x)^2 F) = (y/4 (y+sum x)^4 + y (y+sum x)) F
    ///   + y sum_{J nonempty} ((y+sum_I x)(sum_J x)^3 + 2 (y+sum_I x)^2 (sum_J x)^2) F(y,x_I) F(x_J)`.
    fn lemma25_slice(&self, n: usize, g: u32) -> Result<(Polynomial, Polynomial)> {
        let ambient = n + 1;
        let all: Vec<usize> = (0..ambient).collect();
        let xs: Vec<usize> = (1..ambient).collect();
        let degree = 3 * g + n as u32;

        let w = self.weighted_f(ambient, &all, g, 2)?;
        let mut lhs = w.derivative(0).mul_variable(0).scaled(&integer(2));
        lhs.add_scaled(&w, &integer(1));

        let mut rhs = Polynomial::zero(ambient, degree);
        if g >= 1 {
            rhs.add_scaled(&self.weighted_f(ambient, &all, g - 1, 4)?.mul_variable(0), &rational(1, 4));
        }
        rhs.add_scaled(&self.weighted_f(ambient, &all, g, 1)?.mul_variable(0), &integer(1));
        for (left, right) in subset_pairs(&xs) {
            if right.is_empty() {
                continue;
            }
            for g1 in 0..=g {
                let h = g - g1;
                let t1 = self.y_weighted_f(ambient, &left, g1, 1)?.mul(&self.weighted_f(ambient, &right, h, 3)?);
                let t2 = self.y_weighted_f(ambient, &left, g1, 2)?.mul(&self.weighted_f(ambient, &right, h, 2)?);
                rhs.add_scaled(&t1, &integer(1));
                rhs.add_scaled(&t2, &integer(2));
            }
        }
        Ok((lhs, rhs))
    }

    /// Unweighted relation with a distinguished `y`, slice on `y, x_1..x_n`:
    /// `y (2g+n-1) F_g = 2y d/dy((y+sum x) F) + ((y+sum x) - y/6 (y+sum x)^3) F
    ///   - y sum_{J nonempty} (y+sum_I x)(sum_J x)^2 F(y,x_I) F(x_J)`.
    fn prop26_slice(&self, n: usize, g: u32) -> Result<(Polynomial, Polynomial)> {
        let ambient = n + 1;
        let all: Vec<usize> = (0..ambient).collect();
        let xs: Vec<usize> = (1..ambient).collect();
        let degree = 3 * g + n as u32 - 1;

        let c = 2 * g as i64 + n as i64 - 1;
        let mut lhs = Polynomial::zero(ambient, degree);
        if c != 0 {
            lhs.add_scaled(&self.weighted_f(ambient, &all, g, 0)?.mul_variable(0), &integer(c));
        }

        let phi = self.weighted_f(ambient, &all, g, 1)?;
        let mut rhs = phi.derivative(0).mul_variable(0).scaled(&integer(2));
        rhs.add_scaled(&phi, &integer(1));
        if g >= 1 {
            rhs.add_scaled(&self.weighted_f(ambient, &all, g - 1, 3)?.mul_variable(0), &rational(-1, 6));
        }
        for (left, right) in subset_pairs(&xs) {
            if right.is_empty() {
                continue;
            }
            for g1 in 0..=g {
                let t = self
                    .y_weighted_f(ambient, &left, g1, 1)?
                    .mul(&self.weighted_f(ambient, &right, g - g1, 2)?);
                rhs.add_scaled(&t, &integer(-1));
            }
        }
        Ok((lhs, rhs))
    }
}

/// First position of each distinct value in a sorted index list.
fn distinct_positions(indices: &[u32]) -> Vec<usize> {
    (0..indices.len()).filter(|&i| i == 0 || indices[i] != indices[i - 1]).collect()
}

/// Every ordered split `(I, J)` of `items` into complementary subsets.
fn subset_pairs(items: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = items.len();
    (0..1u32 << n)
        .map(|mask| {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, &v) in items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(v);
                } else {
                    right.push(v);
                }
            }
            (left, right)
        })
        .collect()
}

pub fn check_correlator_identity(id: IdentityId, g_max: u32, n_max: usize) -> Result<IdentityReport> {
    Verifier::new().check_correlator_identity(id, g_max, n_max)
}

pub fn check_generating_identity(id: IdentityId, n: usize, g_max: u32) -> Result<IdentityReport> {
    Verifier::new().check_generating_identity(id, n, g_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlator_suites_small() {
        let r = check_correlator_identity(IdentityId::Thm12, 1, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.instances_checked, 1);

        let r = check_correlator_identity(IdentityId::Thm11, 1, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.instances_checked >= 2);

        let r = check_correlator_identity(IdentityId::Grouped, 2, 2).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn generating_suites_small() {
        for (id, n, g) in [(IdentityId::Prop24, 1, 2), (IdentityId::Lemma25, 1, 2), (IdentityId::Prop26, 1, 1)] {
            let r = check_generating_identity(id, n, g).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.failures.iter().take(5).collect::<Vec<_>>());
            assert!(r.instances_checked > 0);
        }
    }

    #[test]
    fn a_wrong_identity_is_caught() {
        // dropping the 1/12 genus-reduction term breaks the prop24 relation at g = 1
        let v = Verifier::new();
        let (lhs, mut rhs) = v.prop24_slice(1, 1).unwrap().unwrap();
        rhs.add_scaled(&v.weighted_f(1, &[0], 0, 4).unwrap(), &rational(-1, 12));
        let mut report = IdentityReport::new(IdentityId::Prop24);
        report.record_slice("tampered", &lhs, &rhs);
        assert!(!report.passed());
        assert_eq!(report.failures[0].lhs, "1/12");
    }

    #[test]
    fn report_json_shape() {
        let mut r = IdentityReport::new(IdentityId::Thm12);
        r.record("x".into(), &rational(1, 2), &rational(1, 3));
        assert_eq!(
            r.to_json(),
            r#"{"identity":"thm12","checked":1,"failures":[{"instance":"x","lhs":"1/2","rhs":"1/3"}]}"#
        );
    }

    #[test]
    fn identity_names() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("bogus".parse::<IdentityId>().is_err());
    }
}
