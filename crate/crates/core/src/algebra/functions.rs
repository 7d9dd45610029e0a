//! Inverse, exponential, logarithm, products and substitutions.

use num_traits::{One, Zero};

use super::rational::{int, Rational};
use super::series::Series;
use super::window::{Exps, Monomial, Window};
use super::SeriesError;

impl Series {
    /// Multiplicative inverse by Newton iteration `h <- h + h(1 - f h)`.
    ///
    /// Requires a nonzero constant term and every other term to have positive
    /// degree in the truncated nonnegative variables, so the iteration ends.
    pub fn invert(&self) -> Result<Series, SeriesError> {
        let w = &self.window;
        let zero: Exps = smallvec::smallvec![0; w.vars().len()];
        let c = self.terms.get(&zero).cloned().ok_or(SeriesError::NotInvertible)?;

        let graded: Vec<usize> = w
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.min >= 0 && v.max.is_some())
            .map(|(i, _)| i)
            .collect();
        for e in self.terms.keys().filter(|e| **e != zero) {
            if graded.iter().map(|&i| e[i]).sum::<i64>() < 1 {
                return Err(SeriesError::NotInvertible);
            }
        }
        let total: i64 = graded.iter().map(|&i| w.vars()[i].max.unwrap_or(0)).sum();

        let one = Series::one(w);
        let mut h = Series::constant(w, Rational::one() / c);
        // after i steps the error has weight >= 2^i
        let mut weight = 1i64;
        loop {
            let err = &one - &(self * &h);
            if err.is_zero() {
                break;
            }
            h = &h + &(&h * &err);
            if weight > total {
                break;
            }
            weight = weight.saturating_mul(2);
        }
        Ok(h)
    }

    fn check_nilpotent(&self) -> Result<(usize, i64, i64), SeriesError> {
        let g = self.window.grading_index().ok_or(SeriesError::NoGrading)?;
        let var = &self.window.vars()[g];
        let max = var.max.ok_or(SeriesError::NoGrading)?;
        let mut min_deg = i64::MAX;
        for e in self.terms.keys() {
            if e[g] < 1 {
                return Err(SeriesError::NonNilpotent(self.window.monomial_of(e).to_string()));
            }
            min_deg = min_deg.min(e[g]);
        }
        Ok((g, min_deg, max))
    }

    /// `exp(f)` for `f` with every term of grading degree at least one.
    pub fn exp_series(&self) -> Result<Series, SeriesError> {
        let (_, min_deg, max) = self.check_nilpotent()?;
        let mut result = Series::one(&self.window);
        if self.is_zero() {
            return Ok(result);
        }
        let mut term = result.clone();
        let mut k = 1i64;
        while k.saturating_mul(min_deg) <= max {
            term = (&term * self).scale(&(Rational::one() / int(k)));
            result = &result + &term;
            k += 1;
        }
        Ok(result)
    }

    /// `log(1 + f)` for `f` with every term of grading degree at least one.
    pub fn log1p_series(&self) -> Result<Series, SeriesError> {
        let (_, min_deg, max) = self.check_nilpotent()?;
        let mut result = Series::zero(&self.window);
        if self.is_zero() {
            return Ok(result);
        }
        let mut power = self.clone();
        let mut k = 1i64;
        while k.saturating_mul(min_deg) <= max {
            let c = if k % 2 == 1 { int(1) } else { int(-1) } / int(k);
            result = &result + &power.scale(&c);
            power = &power * self;
            k += 1;
        }
        Ok(result)
    }

    /// Replaces `var` by `sign * replacement`, landing in `out`.
    ///
    /// A term `c var^k rest` becomes `c sign^k replacement^k rest`. Mapped terms
    /// below the support bound of `out` are an error; terms above its maximum
    /// are truncated. When the replacement is a power of `var` itself, `out` may
    /// not claim precision beyond what the input determines.
    pub fn substitute_monomial(
        &self,
        var: &str,
        negate: bool,
        replacement: &Monomial,
        out: &Window,
    ) -> Result<Series, SeriesError> {
        assert!(self.window.same_names(out), "incompatible windows: {} vs {out}", self.window);
        let vi = self
            .window
            .index_of(var)
            .ok_or_else(|| SeriesError::UnknownVariable(var.into()))?;
        let rep = out.exps_of(replacement)?;

        for (i, (have, want)) in self.window.vars().iter().zip(out.vars()).enumerate() {
            let touched = i == vi || rep[i] != 0;
            if !touched && exceeds(want.max, have.max) {
                return Err(SeriesError::PrecisionExceeded { var: want.name.clone() });
            }
        }
        let pure_power = rep.iter().enumerate().all(|(i, &x)| i == vi || x == 0);
        if pure_power && rep[vi] >= 1 {
            let d = rep[vi];
            let known = self.window.vars()[vi].max.map(|m| d * m + d - 1);
            if exceeds(out.vars()[vi].max, known) {
                return Err(SeriesError::PrecisionExceeded { var: var.into() });
            }
        }

        let mut result = Series::zero(out);
        for (e, c) in &self.terms {
            let k = e[vi];
            let mut ne = e.clone();
            ne[vi] = 0;
            for (x, r) in ne.iter_mut().zip(&rep) {
                *x = x.saturating_add(k.saturating_mul(*r));
            }
            for (v, &x) in out.vars().iter().zip(&ne) {
                if x < v.min {
                    return Err(SeriesError::SubstitutionEscapes {
                        monomial: out.monomial_of(&ne).to_string(),
                        var: v.name.clone(),
                    });
                }
            }
            if out.contains(&ne) {
                let c = if negate && k.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                result.accumulate(ne, c);
            }
        }
        Ok(result)
    }
}

fn exceeds(want: Option<i64>, have: Option<i64>) -> bool {
    match (want, have) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(w), Some(h)) => w > h,
    }
}

/// `prod (1 - x)^a` over the given factors, truncated to `window`.
///
/// Negative exponents go through [`Series::invert`].
pub fn product_of_binomials(
    factors: &[(Monomial, i64)],
    window: &Window,
) -> Result<Series, SeriesError> {
    let one = Series::one(window);
    let mut acc = one.clone();
    for (x, a) in factors {
        if *a == 0 {
            continue;
        }
        let base = &one - &Series::monomial(window, x, Rational::one())?;
        let mut factor = one.clone();
        for _ in 0..a.unsigned_abs() {
            factor = &factor * &base;
        }
        if *a < 0 {
            factor = factor.invert()?;
        }
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// `prod_{n=1}^{n_max} (1 - var^n)^{a(n)}`.
///
/// `n_max` must reach the precision of `var` so that the truncation is exact.
pub fn product_expansion(
    exponent: impl Fn(i64) -> i64,
    var: &str,
    n_max: i64,
    window: &Window,
) -> Result<Series, SeriesError> {
    let v = window.var(var).ok_or_else(|| SeriesError::UnknownVariable(var.into()))?;
    match v.max {
        Some(m) if n_max >= m => {}
        _ => return Err(SeriesError::ProductTooShort { var: var.into(), n_max }),
    }
    let factors: Vec<(Monomial, i64)> =
        (1..=n_max).map(|n| (Monomial::new([(var, n)]), exponent(n))).collect();
    product_of_binomials(&factors, window)
}

/// Coefficients `c_0..=c_max` of a one-variable series.
pub fn coefficients(s: &Series, var: &str, max: i64) -> Vec<Rational> {
    (0..=max)
        .map(|k| {
            let c = s.coeff(&Monomial::new([(var, k)]));
            if c.is_zero() {
                Rational::zero()
            } else {
                c
            }
        })
        .collect()
}
