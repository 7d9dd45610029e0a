//! Exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision fraction in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Lossless wire form: decimal strings for numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl TryFrom<&RationalRepr> for Rational {
    type Error = num_bigint::ParseBigIntError;

    fn try_from(r: &RationalRepr) -> Result<Self, Self::Error> {
        let num: BigInt = r.num.parse()?;
        let den: BigInt = r.den.parse()?;
        Ok(Rational::new(num, den))
    }
}

/// Renders `p/q`, or just `p` for integers.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
