//! One entry point over the four evaluation strategies.

use std::fmt;
use std::str::FromStr;

use crate::cache::CacheStore;
use crate::dvv::DvvEvaluator;
use crate::error::{Error, Result};
use crate::genus::{GenusEvaluator, MaxIndexEvaluator};
use crate::key::CorrelatorKey;
use crate::npoint::NPointEvaluator;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Dvv,
    Genus,
    MaxIndex,
    NPoint,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Dvv, Strategy::Genus, Strategy::MaxIndex, Strategy::NPoint];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Dvv => "dvv",
            Strategy::Genus => "genus",
            Strategy::MaxIndex => "maxidx",
            Strategy::NPoint => "npoint",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown strategy {s:?}")))
    }
}

/// A strategy bound to a cache. The n-point variant owns its slice memo,
/// so reuse one evaluator across many keys.
pub enum Evaluator<'a> {
    Dvv(DvvEvaluator<'a>),
    Genus(GenusEvaluator<'a>),
    MaxIndex(MaxIndexEvaluator<'a>),
    NPoint(NPointEvaluator<'a>),
}

impl<'a> Evaluator<'a> {
    pub fn new(strategy: Strategy, cache: &'a CacheStore) -> Self {
        match strategy {
            Strategy::Dvv => Evaluator::Dvv(DvvEvaluator::new(cache)),
            Strategy::Genus => Evaluator::Genus(GenusEvaluator::new(cache)),
            Strategy::MaxIndex => Evaluator::MaxIndex(MaxIndexEvaluator::new(cache)),
            Strategy::NPoint => Evaluator::NPoint(NPointEvaluator::new(cache)),
        }
    }

    pub fn strategy(&self) -> Strategy {
        match self {
            Evaluator::Dvv(_) => Strategy::Dvv,
            Evaluator::Genus(_) => Strategy::Genus,
            Evaluator::MaxIndex(_) => Strategy::MaxIndex,
            Evaluator::NPoint(_) => Strategy::NPoint,
        }
    }

    pub fn eval(&self, key: &CorrelatorKey) -> Result<Rational> {
        match self {
            Evaluator::Dvv(e) => e.eval(key),
            Evaluator::Genus(e) => e.eval(key),
            Evaluator::MaxIndex(e) => e.eval(key),
            Evaluator::NPoint(e) => e.eval(key),
        }
    }
}

/// Evaluates `key` with a single strategy over `cache`.
pub fn evaluate(strategy: Strategy, key: &CorrelatorKey, cache: &CacheStore) -> Result<Rational> {
    Evaluator::new(strategy, cache).eval(key)
}
