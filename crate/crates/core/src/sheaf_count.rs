//! Mukai vectors on a ray `(r, m b0, s)`, Hilbert scheme Euler characteristics
//! and Joyce-Song invariants
//!
//! ```text
//! J(v) = sum_{k | v} 1/k^2 e(Hilb^{(v/k, v/k)/2 + 1} S).
//! ```

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::rational::{int, RationalRepr};
use crate::algebra::{coefficients, product_expansion, Rational, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("Mukai vector (r, m, s) must be nonzero")]
    ZeroVector,
    #[error("multiple of b0 must be >= 0, got {0}")]
    NegativeMultiple(i64),
    #[error("Mukai vectors over different primitive classes (h0 = {0} vs {1})")]
    MismatchedClass(i64, i64),
    #[error("cannot parse Mukai vector {0:?}: expected r,m,h0,s")]
    Parse(String),
}

/// Charge `(r, m b0, s)` with `b0^2 = 2 h0 - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MukaiVector {
    pub r: i64,
    pub m: i64,
    pub h0: i64,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, m: i64, h0: i64, s: i64) -> Result<Self, SheafError> {
        if m < 0 {
            return Err(SheafError::NegativeMultiple(m));
        }
        if r == 0 && m == 0 && s == 0 {
            return Err(SheafError::ZeroVector);
        }
        Ok(MukaiVector { r, m, h0, s })
    }

    /// `beta^2 = m^2 (2 h0 - 2)`.
    pub fn beta_squared(&self) -> i64 {
        self.m * self.m * (2 * self.h0 - 2)
    }

    fn divided(&self, k: i64) -> MukaiVector {
        MukaiVector { r: self.r / k, m: self.m / k, h0: self.h0, s: self.s / k }
    }
}

impl std::str::FromStr for MukaiVector {
    type Err = SheafError;

    /// Parses `r,m,h0,s`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<i64> = text
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| SheafError::Parse(text.into()))?;
        match parts[..] {
            [r, m, h0, s] => MukaiVector::new(r, m, h0, s),
            _ => Err(SheafError::Parse(text.into())),
        }
    }
}

/// `(v, w) = beta_v . beta_w - r_v s_w - r_w s_v`.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector) -> Result<i64, SheafError> {
    if v.h0 != w.h0 {
        return Err(SheafError::MismatchedClass(v.h0, w.h0));
    }
    Ok(v.m * w.m * (2 * v.h0 - 2) - v.r * w.s - w.r * v.s)
}

/// gcd of the nonzero entries among `(r, m, s)`.
pub fn divisibility(v: &MukaiVector) -> i64 {
    [v.r, v.m, v.s].iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn hilb_cache() -> &'static RwLock<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// `e(Hilb^n S)` for a K3 surface: the `q^n` coefficient of `prod (1 - q^k)^-24`.
pub fn hilb_euler(n: usize) -> BigInt {
    if let Some(v) = hilb_cache().read().expect("hilb cache poisoned").get(n) {
        return v.clone();
    }
    let mut cache = hilb_cache().write().expect("hilb cache poisoned");
    if cache.len() <= n {
        // extend geometrically so repeated growth stays cheap
        let target = (n + 1).max(2 * cache.len()).max(16) as i64 - 1;
        let w = Window::new().power("q", 0, target);
        let series = product_expansion(|_| -24, "q", target, &w).expect("eta product is well formed");
        *cache = coefficients(&series, "q", target).into_iter().map(|c| c.to_integer()).collect();
    }
    cache[n].clone()
}

/// Joyce-Song invariant together with the divisors whose Hilbert scheme is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsInvariant {
    pub value: Rational,
    pub empty_divisors: Vec<i64>,
}

/// `J(v) = sum_{k | v} e(Hilb^{(v/k,v/k)/2 + 1}) / k^2`.
///
/// Divisors with a negative Hilbert scheme index contribute zero and are logged.
pub fn js_invariant(v: &MukaiVector) -> JsInvariant {
    let div = divisibility(v);
    let mut value = Rational::zero();
    let mut empty = Vec::new();
    for k in (1..=div).filter(|k| div % k == 0) {
        let w = v.divided(k);
        let pairing = mukai_pairing(&w, &w).expect("same class");
        // (w, w) is even on a K3 lattice
        let index = pairing / 2 + 1;
        if index < 0 {
            log::warn!("J({},{},{};h0={}): Hilb^{index} is empty for divisor {k}", v.r, v.m, v.s, v.h0);
            empty.push(k);
            continue;
        }
        value += Rational::from_integer(hilb_euler(index as usize)) / int(k * k);
    }
    JsInvariant { value, empty_divisors: empty }
}

/// Both sides of `J(0, m b0, n) = sum_{k | (m, n)} J(0, (m/k) b0, 1) / k^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipleCoverReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

pub fn multiple_cover_check(m: i64, n: i64, h0: i64) -> Result<MultipleCoverReport, SheafError> {
    if m < 1 {
        return Err(SheafError::NegativeMultiple(m));
    }
    let lhs = js_invariant(&MukaiVector::new(0, m, h0, n)?).value;
    let g = m.gcd(&n);
    let mut rhs = Rational::zero();
    for k in (1..=g).filter(|k| g % k == 0) {
        rhs += js_invariant(&MukaiVector::new(0, m / k, h0, 1)?).value / int(k * k);
    }
    Ok(MultipleCoverReport { holds: lhs == rhs, lhs, rhs })
}

/// Export record for one Mukai vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsRecord {
    pub r: i64,
    pub m: i64,
    pub h0: i64,
    pub s: i64,
    pub pairing: i64,
    pub divisibility: i64,
    #[serde(rename = "J_numerator")]
    pub j_numerator: String,
    #[serde(rename = "J_denominator")]
    pub j_denominator: String,
}

impl JsRecord {
    pub fn new(v: &MukaiVector) -> Self {
        let j = js_invariant(v).value;
        let repr = RationalRepr::from(&j);
        JsRecord {
            r: v.r,
            m: v.m,
            h0: v.h0,
            s: v.s,
            pairing: mukai_pairing(v, v).expect("same class"),
            divisibility: divisibility(v),
            j_numerator: repr.num,
            j_denominator: repr.den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(r: i64, m: i64, h0: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, m, h0, s).unwrap()
    }

    #[test]
    fn pairing_examples() {
        for h0 in 0..4 {
            let v = mv(0, 1, h0, 7);
            assert_eq!(mukai_pairing(&v, &v).unwrap(), 2 * h0 - 2);
        }
        let v = mv(1, 0, 3, 1);
        assert_eq!(mukai_pairing(&v, &v).unwrap(), -2);
        let v = mv(0, 2, 2, 0);
        assert_eq!(mukai_pairing(&v, &v).unwrap(), 8);
        assert_eq!(mukai_pairing(&mv(0, 1, 1, 1), &mv(0, 1, 2, 1)), Err(SheafError::MismatchedClass(1, 2)));
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(divisibility(&mv(0, 3, 1, 3)), 3);
        assert_eq!(divisibility(&mv(0, 2, 1, 1)), 1);
        assert_eq!(divisibility(&mv(2, 4, 1, 6)), 2);
        assert_eq!(divisibility(&mv(0, 0, 1, -4)), 4);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(MukaiVector::new(0, 0, 2, 0), Err(SheafError::ZeroVector));
        assert_eq!(MukaiVector::new(0, -1, 2, 0), Err(SheafError::NegativeMultiple(-1)));
    }

    #[test]
    fn parse_literal() {
        assert_eq!("0,2,1,2".parse::<MukaiVector>().unwrap(), mv(0, 2, 1, 2));
        assert!("0,2,1".parse::<MukaiVector>().is_err());
        assert!("a,b,c,d".parse::<MukaiVector>().is_err());
    }

    #[test]
    fn hilbert_scheme_euler_characteristics() {
        let vals: Vec<BigInt> = (0..5).map(hilb_euler).collect();
        assert_eq!(vals, [1, 24, 324, 3200, 25650].map(BigInt::from));
        // growing the cache keeps earlier values
        let _ = hilb_euler(40);
        assert_eq!(hilb_euler(2), BigInt::from(324));
    }

    #[test]
    fn js_examples() {
        assert_eq!(js_invariant(&mv(0, 1, 2, 1)).value, int(324));
        assert_eq!(js_invariant(&mv(0, 1, 1, 1)).value, int(24));
        assert_eq!(js_invariant(&mv(0, 2, 1, 2)).value, int(30));
    }

    #[test]
    fn empty_hilbert_schemes_contribute_zero() {
        // b0^2 = -2: (2 b0)^2 / 2 + 1 = -3
        let j = js_invariant(&mv(0, 2, 0, 2));
        assert_eq!(j.empty_divisors, vec![1]);
        assert_eq!(j.value, int(1) / int(4));
    }

    #[test]
    fn multiple_cover_examples() {
        assert!(multiple_cover_check(1, 1, 1).unwrap().holds);
        assert!(multiple_cover_check(2, 2, 2).unwrap().holds);
        let r = multiple_cover_check(6, 4, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, int(24) + int(24) / int(4));
    }

    #[test]
    fn record_field_names() {
        let rec = JsRecord::new(&mv(0, 2, 1, 2));
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["J_numerator"], "30");
        assert_eq!(json["J_denominator"], "1");
        assert_eq!(json["divisibility"], 2);
    }
}
