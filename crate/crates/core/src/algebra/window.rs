//! Variables, monomials and truncation windows.
//!
//! A [`Window`] fixes the variable set of a [`Series`](super::Series) and, per
//! variable, the box of exponents whose coefficients are known exactly:
//!
//! * `min` is a support bound: the underlying series has no terms below it.
//! * `max` is the precision: coefficients up to it are exact. `None` means the
//!   series is not truncated in that variable (it is polynomial there, with the
//!   finiteness coming from truncation in the other variables).

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::SeriesError;

/// Exponent vector aligned with the variable order of a [`Window`].
pub(crate) type Exps = SmallVec<[i64; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarWindow {
    pub name: String,
    pub min: i64,
    pub max: Option<i64>,
    pub laurent: bool,
}

impl VarWindow {
    pub fn contains(&self, e: i64) -> bool {
        e >= self.min && self.max.is_none_or(|m| e <= m)
    }
}

/// Per-variable degree windows, sorted by variable name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Window {
    vars: Vec<VarWindow>,
    grading: Option<String>,
}

impl Window {
    pub fn new() -> Self {
        Self::default()
    }

    fn insert(mut self, var: VarWindow) -> Self {
        assert!(
            self.vars.iter().all(|v| v.name != var.name),
            "variable {} declared twice",
            var.name
        );
        if let Some(max) = var.max {
            assert!(var.min <= max, "window for {} has min > max", var.name);
        }
        assert!(
            var.laurent || var.min >= 0,
            "power variable {} must have min >= 0",
            var.name
        );
        let pos = self.vars.partition_point(|v| v.name < var.name);
        self.vars.insert(pos, var);
        self
    }

    /// Power-series variable truncated at `max`.
    pub fn power(self, name: &str, min: i64, max: i64) -> Self {
        self.insert(VarWindow { name: name.into(), min, max: Some(max), laurent: false })
    }

    /// Laurent variable truncated at `max`; `min` bounds the polar part.
    pub fn laurent(self, name: &str, min: i64, max: i64) -> Self {
        self.insert(VarWindow { name: name.into(), min, max: Some(max), laurent: true })
    }

    /// Laurent variable that is never truncated.
    pub fn laurent_exact(self, name: &str, min: i64) -> Self {
        self.insert(VarWindow { name: name.into(), min, max: None, laurent: true })
    }

    /// Designates the variable whose degree drives `exp_series`/`log1p_series`.
    pub fn grading(mut self, name: &str) -> Self {
        assert!(self.index_of(name).is_some(), "grading variable {name} not declared");
        self.grading = Some(name.into());
        self
    }

    pub fn vars(&self) -> &[VarWindow] {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Option<&VarWindow> {
        self.index_of(name).map(|i| &self.vars[i])
    }

    pub fn grading_var(&self) -> Option<&str> {
        self.grading.as_deref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub(crate) fn grading_index(&self) -> Option<usize> {
        self.grading.as_deref().and_then(|g| self.index_of(g))
    }

    pub(crate) fn contains(&self, e: &[i64]) -> bool {
        self.vars.iter().zip(e).all(|(v, &x)| v.contains(x))
    }

    /// True when no coefficient is known (precision fell below the support bound).
    pub fn is_empty(&self) -> bool {
        self.vars.iter().any(|v| v.max.is_some_and(|m| m < v.min))
    }

    /// Returns a copy with the `max` of one variable replaced.
    pub fn with_max(&self, name: &str, max: Option<i64>) -> Self {
        let mut w = self.clone();
        let i = w.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        w.vars[i].max = max;
        w
    }

    /// Returns a copy with the `min` of one variable replaced.
    pub fn with_min(&self, name: &str, min: i64) -> Self {
        let mut w = self.clone();
        let i = w.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        w.vars[i].min = min;
        w
    }

    pub(crate) fn same_variables(&self, other: &Window) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(&other.vars)
                .all(|(a, b)| a.name == b.name && a.laurent == b.laurent)
    }

    pub(crate) fn same_names(&self, other: &Window) -> bool {
        self.vars.len() == other.vars.len()
            && self.vars.iter().zip(&other.vars).all(|(a, b)| a.name == b.name)
    }

    pub(crate) fn assert_compatible(&self, other: &Window) {
        assert!(
            self.same_variables(other),
            "incompatible windows: {self} vs {other}"
        );
    }

    fn merged_grading(&self, other: &Window) -> Option<String> {
        match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "series graded by different variables");
                Some(a.clone())
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        }
    }

    /// Window of a sum: weakest support bound, smallest precision.
    pub(crate) fn sum_window(&self, other: &Window) -> Window {
        self.assert_compatible(other);
        let vars = self
            .vars
            .iter()
            .zip(&other.vars)
            .map(|(a, b)| VarWindow {
                name: a.name.clone(),
                min: a.min.min(b.min),
                max: min_opt(a.max, b.max),
                laurent: a.laurent,
            })
            .collect();
        Window { vars, grading: self.merged_grading(other) }
    }

    /// Window of a product.
    ///
    /// The coefficient of `x^e` in `a*b` only involves terms of `a` up to
    /// `e - min_b`, so it is exact for `e <= max_a + min_b` (and symmetrically).
    /// For nonnegative supports this is the intersection of the two windows.
    pub(crate) fn product_window(&self, other: &Window) -> Window {
        self.assert_compatible(other);
        let vars = self
            .vars
            .iter()
            .zip(&other.vars)
            .map(|(a, b)| {
                let from_a = a.max.map(|m| m.saturating_add(b.min));
                let from_b = b.max.map(|m| m.saturating_add(a.min));
                VarWindow {
                    name: a.name.clone(),
                    min: a.min.saturating_add(b.min),
                    max: min_opt(from_a, from_b),
                    laurent: a.laurent,
                }
            })
            .collect();
        Window { vars, grading: self.merged_grading(other) }
    }

    pub(crate) fn exps_of(&self, m: &Monomial) -> Result<Exps, SeriesError> {
        let mut e: Exps = SmallVec::from_elem(0, self.vars.len());
        for (name, &x) in &m.0 {
            let i = self
                .index_of(name)
                .ok_or_else(|| SeriesError::UnknownVariable(name.clone()))?;
            if x < 0 && !self.vars[i].laurent {
                return Err(SeriesError::NegativePower(name.clone()));
            }
            e[i] = x;
        }
        Ok(e)
    }

    pub(crate) fn monomial_of(&self, e: &[i64]) -> Monomial {
        Monomial(
            self.vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| (v.name.clone(), x))
                .collect(),
        )
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match v.max {
                Some(m) => write!(f, "{}: [{}, {}]", v.name, v.min, m)?,
                None => write!(f, "{}: [{}, *]", v.name, v.min)?,
            }
        }
        write!(f, "}}")
    }
}

/// A monomial: variable name to exponent, zero exponents omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<String, i64>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        Self::new([(name, 1)])
    }

    pub fn new<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut m = Self::one();
        for (name, e) in pairs {
            *m.0.entry(name.to_string()).or_insert(0) += e;
        }
        m.0.retain(|_, e| *e != 0);
        m
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            *out.0.entry(k.clone()).or_insert(0) += v;
        }
        out.0.retain(|_, e| *e != 0);
        out
    }

    pub fn pow(&self, k: i64) -> Monomial {
        let mut out = self.clone();
        for e in out.0.values_mut() {
            *e *= k;
        }
        out.0.retain(|_, e| *e != 0);
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *v == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variables_are_sorted() {
        let w = Window::new().power("v", 0, 3).laurent("q", -2, 5);
        let names: Vec<_> = w.vars().iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["q", "v"]);
    }

    #[test]
    fn product_window_tracks_polar_part() {
        let a = Window::new().laurent("q", -2, 10);
        let p = a.product_window(&a);
        let q = p.var("q").unwrap();
        assert_eq!((q.min, q.max), (-4, Some(8)));

        let b = Window::new().power("q", 0, 10);
        let c = Window::new().power("q", 0, 6);
        assert_eq!(b.product_window(&c).var("q").unwrap().max, Some(6));
    }

    #[test]
    fn exact_variable_stays_untruncated() {
        let a = Window::new().power("q", 0, 4).laurent_exact("y", -4);
        let p = a.product_window(&a);
        assert_eq!(p.var("y").unwrap().max, None);
        assert_eq!(p.var("q").unwrap().max, Some(4));
    }

    #[test]
    fn monomial_arithmetic() {
        let m = Monomial::new([("q", 2), ("v", 1)]);
        assert_eq!(m.pow(-1).exponent("q"), -2);
        assert!(m.mul(&m.pow(-1)).is_one());
        assert_eq!(m.to_string(), "q^2*v");
    }

    #[test]
    #[should_panic]
    fn power_variable_rejects_negative_min() {
        let _ = Window::new().power("v", -1, 3);
    }
}
