//! Sparse truncated multivariate Laurent series over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{self, Rational};
use super::window::{Exps, Monomial, Window};
use super::SeriesError;

/// A truncated series: exact coefficients on the box described by its window.
///
/// No zero coefficient is ever stored and every stored exponent lies inside the
/// window, so derived equality is equality of window and coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub(crate) window: Window,
    pub(crate) terms: BTreeMap<Exps, Rational>,
}

impl Series {
    pub fn zero(window: &Window) -> Self {
        Series { window: window.clone(), terms: BTreeMap::new() }
    }

    /// The constant `c`. Support bounds above zero are lowered to zero.
    pub fn constant(window: &Window, c: Rational) -> Self {
        let mut w = window.clone();
        for v in window.vars() {
            if v.min > 0 {
                w = w.with_min(&v.name, 0);
            }
        }
        let mut s = Series::zero(&w);
        let zero: Exps = smallvec::smallvec![0; w.vars().len()];
        if !c.is_zero() && w.contains(&zero) {
            s.terms.insert(zero, c);
        }
        s
    }

    pub fn one(window: &Window) -> Self {
        Self::constant(window, Rational::one())
    }

    /// A single term `c * m`; dropped if `m` lies beyond the precision.
    pub fn monomial(window: &Window, m: &Monomial, c: Rational) -> Result<Self, SeriesError> {
        Self::from_terms(window, [(m.clone(), c)])
    }

    /// Builds a series from terms. Terms above the window maximum are
    /// truncated; terms below the support bound are an error.
    pub fn from_terms(
        window: &Window,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Series::zero(window);
        for (m, c) in terms {
            let e = window.exps_of(&m)?;
            for (v, &x) in window.vars().iter().zip(&e) {
                if x < v.min {
                    return Err(SeriesError::BelowSupport { monomial: m.to_string(), var: v.name.clone() });
                }
            }
            if window.contains(&e) {
                s.accumulate(e, c);
            }
        }
        Ok(s)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        match self.window.exps_of(m) {
            Ok(e) => self.terms.get(&e).cloned().unwrap_or_else(Rational::zero),
            Err(_) => Rational::zero(),
        }
    }

    /// Coefficient of a monomial given as `(variable, exponent)` pairs.
    pub fn coeff_of<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Rational {
        self.coeff(&Monomial::new(pairs))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (self.window.monomial_of(e), c))
    }

    pub(crate) fn accumulate(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(&self.window);
        }
        Series {
            window: self.window.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut result = Series::one(&self.window);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Lowers the precision (and optionally raises the support bound) to `window`.
    ///
    /// Fails if `window` claims precision this series does not have, or if a
    /// stored term lies below the requested support bound.
    pub fn truncate_to(&self, window: &Window) -> Result<Series, SeriesError> {
        self.window.assert_compatible(window);
        for (have, want) in self.window.vars().iter().zip(window.vars()) {
            let ok = match (have.max, want.max) {
                (_, None) => have.max.is_none(),
                (None, Some(_)) => true,
                (Some(h), Some(w)) => w <= h,
            };
            if !ok {
                return Err(SeriesError::PrecisionExceeded { var: want.name.clone() });
            }
        }
        let mut out = Series::zero(window);
        for (e, c) in &self.terms {
            for (v, &x) in window.vars().iter().zip(e) {
                if x < v.min {
                    return Err(SeriesError::BelowSupport {
                        monomial: self.window.monomial_of(e).to_string(),
                        var: v.name.clone(),
                    });
                }
            }
            if window.contains(e) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// True when both series have the same coefficients wherever both are known.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let common = self.window.sum_window(&other.window);
        let mut keys: Vec<&Exps> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().filter(|e| common.contains(e)).all(|e| {
            self.terms.get(e).unwrap_or(&Rational::zero()) == other.terms.get(e).unwrap_or(&Rational::zero())
        })
    }

    /// First coefficient (in monomial order) that is not an integer.
    pub fn first_non_integral(&self) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .find(|(_, c)| !c.is_integer())
            .map(|(e, c)| (self.window.monomial_of(e), c.clone()))
    }

    /// Sum of terms whose exponent in `var` equals `k`, as a series.
    pub fn slice(&self, var: &str, k: i64) -> Series {
        let i = self.window.index_of(var).unwrap_or_else(|| panic!("unknown variable {var}"));
        Series {
            window: self.window.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn mul_impl(&self, other: &Series) -> Series {
        let window = self.window.product_window(&other.window);
        let mut acc: BTreeMap<Exps, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x.saturating_add(*y)).collect();
                if !window.contains(&e) {
                    continue;
                }
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Series { window, terms: acc }
    }

    fn add_impl(&self, other: &Series, negate_other: bool) -> Series {
        let window = self.window.sum_window(&other.window);
        let mut out = Series::zero(&window);
        for (e, c) in &self.terms {
            if window.contains(e) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        for (e, c) in &other.terms {
            if window.contains(e) {
                out.accumulate(e.clone(), if negate_other { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_impl(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            window: self.window.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let m = self.window.monomial_of(e);
            if m.is_one() {
                write!(f, "{}", rational::display(c))?;
            } else {
                write!(f, "{}*{}", rational::display(c), m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn q_window(max: i64) -> Window {
        Window::new().power("q", 0, max)
    }

    fn poly(w: &Window, coeffs: &[i64]) -> Series {
        Series::from_terms(
            w,
            coeffs.iter().enumerate().map(|(k, &c)| (Monomial::new([("q", k as i64)]), int(c))),
        )
        .unwrap()
    }

    #[test]
    fn addition_cancels() {
        let w = q_window(4);
        let s = &poly(&w, &[1, 1]) + &poly(&w, &[1, -1]);
        assert_eq!(s, Series::constant(&w, int(2)));
    }

    #[test]
    fn additive_identity() {
        let w = q_window(4);
        let f = poly(&w, &[3, 0, -2, 5]);
        assert_eq!(&f + &Series::zero(&w), f);
    }

    #[test]
    fn disjoint_support() {
        let w = q_window(4);
        let s = &poly(&w, &[0, 24]) + &poly(&w, &[0, 0, 300]);
        assert_eq!(s, poly(&w, &[0, 24, 300]));
    }

    #[test]
    fn difference_of_squares() {
        let w = q_window(3);
        let p = &poly(&w, &[1, 1]) * &poly(&w, &[1, -1]);
        assert_eq!(p, poly(&w, &[1, 0, -1]));
    }

    #[test]
    fn laurent_cancellation() {
        let w = Window::new().laurent("q", -1, 5);
        let a = Series::monomial(&w, &Monomial::new([("q", -1)]), int(1)).unwrap();
        let b = Series::monomial(&w, &Monomial::var("q"), int(1)).unwrap();
        let p = &a * &b;
        assert_eq!(p.coeff(&Monomial::one()), int(1));
        assert_eq!(p.len(), 1);
        // q^-1 * (something known to q^5) is only known to q^4
        assert_eq!(p.window().var("q").unwrap().max, Some(4));
    }

    #[test]
    fn truncation_is_silent() {
        let w = q_window(2);
        let a = poly(&w, &[0, 1, 1]);
        let p = &a * &a;
        assert_eq!(p, poly(&w, &[0, 0, 1]));
    }

    #[test]
    fn from_terms_rejects_below_support() {
        let w = Window::new().laurent("q", -1, 3);
        let r = Series::from_terms(&w, [(Monomial::new([("q", -2)]), int(1))]);
        assert!(matches!(r, Err(SeriesError::BelowSupport { .. })));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let w = q_window(6);
        let f = poly(&w, &[1, -2, 0, 3]);
        assert_eq!(f.pow(3), &(&f * &f) * &f);
        assert_eq!(f.pow(0), Series::one(&w));
    }

    #[test]
    fn agrees_on_common_region() {
        let a = poly(&q_window(3), &[1, 2, 3, 4]);
        let b = poly(&q_window(5), &[1, 2, 3, 4, 9, 9]);
        assert!(a.agrees_with(&b));
        let c = poly(&q_window(5), &[1, 2, 0, 4]);
        assert!(!a.agrees_with(&c));
    }

    #[test]
    fn non_integral_is_located() {
        let w = q_window(3);
        let s = Series::from_terms(&w, [(Monomial::var("q"), int(2)), (Monomial::new([("q", 2)]), rat(1, 2))]).unwrap();
        let (m, c) = s.first_non_integral().unwrap();
        assert_eq!(m, Monomial::new([("q", 2)]));
        assert_eq!(c, rat(1, 2));
    }
}
