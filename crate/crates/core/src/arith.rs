//! Integer weights: factorials, double factorials, binomials, and the
//! textual form of exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// `k!!` for odd `k >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(k: i64) -> Result<BigInt> {
    if k < -1 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "double factorial needs an odd argument >= -1, got {k}"
        )));
    }
    Ok(semifactorial(k))
}

/// `k!!` for any `k >= -1` (so `0!! = (-1)!! = 1`). Used where the parity
/// of the argument depends on the number of variables.
pub fn semifactorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = k;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, j| acc * j)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(value.into())
}

/// Parses `"p/q"` or `"p"`; the result is reduced to lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let numer: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad numerator in {text:?}")))?;
    let denom: BigInt = denom
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad denominator in {text:?}")))?;
    if denom.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// `"p/q"` in lowest terms, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(9).unwrap(), BigInt::from(945));
    }

    #[test]
    fn double_factorial_rejects_even_and_small() {
        assert!(matches!(double_factorial(4), Err(Error::InvalidInput(_))));
        assert!(matches!(double_factorial(0), Err(Error::InvalidInput(_))));
        assert!(matches!(double_factorial(-3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn semifactorial_even() {
        assert_eq!(semifactorial(0), BigInt::from(1));
        assert_eq!(semifactorial(2), BigInt::from(2));
        assert_eq!(semifactorial(8), BigInt::from(384));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(20, 10), 184_756);
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rational(29, 5760)), "29/5760");
        assert_eq!(format_rational(&rational(4, 2)), "2");
        assert_eq!(format_rational(&rational(-3, 6)), "-1/2");
        assert_eq!(parse_rational("2/4").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("7").unwrap(), integer(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }
}
