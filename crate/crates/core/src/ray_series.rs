//! Reduced Gromov-Witten and stable-pair series on the ray of a primitive
//! curve class `b0` with `b0^2 = 2 h0 - 2`.
//!
//! With `q = -e^{iu}` the genus-`g` multiple cover kernel becomes the Laurent
//! polynomial `(-1)^(g-1) ((-q)^d - 2 + (-q)^-d)^(g-1)`, so everything here is
//! exact arithmetic in `q` and `v`:
//!
//! ```text
//! F = sum_{m>=1} sum_g n_{g,h(m)} sum_{d>=1} (1/d) (-1)^(g-1) K_{g,d}(q) v^{dm},
//! h(m) = m^2 (h0 - 1) + 1
//! z_chi = exp(-F) - 1,   z_twistor = exp(F) - 1,   z_naive(q) = z_chi(-q).
//! ```
//!
//! The `v^D` coefficient of `F` has a pole in `q` of order at most `c D` with
//! `c = d_max (h0 - 1)`. Products are therefore computed in the shifted
//! variables `q, w = q^c v`, where all series are power series and truncation
//! in `q` is exact. Results are mapped back before they are returned.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::rational::{int, RationalRepr};
use crate::algebra::{Monomial, Rational, Series, SeriesError, Window};
use crate::kkv::{z_power, GvTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RayError {
    #[error("invalid ray context: {0}")]
    InvalidContext(String),
    #[error("GV table covers h <= {have}, ray needs h <= {need}")]
    GvTableTooSmall { need: i64, have: i64 },
    #[error("integrality violated in {series}: coefficient of {monomial} is {value}")]
    Integrality { series: &'static str, monomial: String, value: String },
    #[error("configuration space Euler characteristic needs k >= 1, got {0}")]
    InvalidK(i64),
    #[error("charge label {0} appears twice")]
    DuplicateCharge(String),
    #[error("charge {0} has grading degree < 1")]
    UngradedCharge(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Primitive class data plus truncation bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayContext {
    pub h0: i64,
    pub d_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

/// A charge `(d b0, n)` on the ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayCharge {
    pub d: i64,
    pub n: i64,
}

impl RayCharge {
    pub fn new(d: i64, n: i64) -> Option<Self> {
        (d >= 1).then_some(RayCharge { d, n })
    }
}

impl RayContext {
    pub fn new(h0: i64, d_max: i64, q_min: i64, q_max: i64) -> Result<Self, RayError> {
        if h0 < 0 {
            return Err(RayError::InvalidContext(format!("h0 = {h0} must be >= 0")));
        }
        if d_max < 1 {
            return Err(RayError::InvalidContext(format!("d_max = {d_max} must be >= 1")));
        }
        if q_min > q_max {
            return Err(RayError::InvalidContext(format!("q window [{q_min}, {q_max}] is empty")));
        }
        Ok(RayContext { h0, d_max, q_min, q_max })
    }

    /// Arithmetic genus of `m b0`: `(m b0)^2 = 2h - 2`.
    pub fn h_of(&self, m: i64) -> i64 {
        m * m * (self.h0 - 1) + 1
    }

    /// Largest `h` the GV table must cover.
    pub fn required_h_max(&self) -> i64 {
        (1..=self.d_max).map(|m| self.h_of(m)).max().unwrap_or(0).max(0)
    }

    /// Pole order of the `v^D` coefficient is at most `slope * D`.
    pub fn polar_slope(&self) -> i64 {
        (self.d_max * (self.h0 - 1)).max(0)
    }

    fn working_window(&self) -> Window {
        let hi = (self.q_max + self.polar_slope() * self.d_max).max(0);
        Window::new().power("q", 0, hi).power("v", 0, self.d_max).grading("v")
    }

    /// Window of returned series: support bound below the deepest pole, precision `q_max`.
    pub fn output_window(&self) -> Window {
        let lo = self.q_min.min(-self.polar_slope() * self.d_max);
        Window::new().laurent("q", lo, self.q_max).power("v", 0, self.d_max).grading("v")
    }

    fn check_table(&self, gv: &GvTable) -> Result<(), RayError> {
        let need = self.required_h_max();
        if (gv.h_max() as i64) < need {
            return Err(RayError::GvTableTooSmall { need, have: gv.h_max() as i64 });
        }
        Ok(())
    }
}

/// Exponent/coefficient pairs of the kernel `K_{g,d}(q)` up to `q^max`.
///
/// For `g >= 1` this is `((-q)^d - 2 + (-q)^-d)^(g-1)`; for `g = 0` it is the
/// inverse of `(-q)^d - 2 + (-q)^-d` expanded around `q = 0`, which is
/// `sum_{m>=1} m (-q)^{dm}`.
fn kernel_terms(g: i64, d: i64, max: i64) -> Vec<(i64, BigInt)> {
    let sign = |e: i64| if e.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    if g == 0 {
        (1..)
            .map(|m| d * m)
            .take_while(|&e| e <= max)
            .map(|e| (e, sign(e) * BigInt::from(e / d)))
            .collect()
    } else {
        z_power((g - 1) as usize)
            .into_iter()
            .map(|(k, c)| (d * k, sign(d * k) * c))
            .filter(|(e, _)| *e <= max)
            .collect()
    }
}

/// The kernel `K_{g,d}(q)` as a Laurent series in `q` within `window`.
pub fn genus_factor(g: i64, d: i64, window: &Window) -> Result<Series, RayError> {
    assert!(g >= 0 && d >= 1, "genus_factor needs g >= 0, d >= 1");
    let max = window
        .var("q")
        .ok_or_else(|| SeriesError::UnknownVariable("q".into()))?
        .max
        .ok_or_else(|| RayError::InvalidContext("q must be truncated".into()))?;
    let terms = kernel_terms(g, d, max)
        .into_iter()
        .map(|(e, c)| (Monomial::new([("q", e)]), Rational::from_integer(c)));
    Ok(Series::from_terms(window, terms)?)
}

/// All ray series, held in the shifted frame.
#[derive(Clone, Debug)]
pub struct RayComputation {
    ctx: RayContext,
    f: Series,
    z_chi: Series,
    z_twistor: Series,
}

/// Outcome of the exp/log identity checks, all exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub f_equals_minus_log_z_chi: bool,
    pub f_equals_log_z_twistor: bool,
    pub product_is_one: bool,
    pub naive_involution: bool,
    /// `v`-degrees where the BPS display differs from `z_chi`.
    pub bps_display_differs_at: Vec<i64>,
}

impl IdentityReport {
    pub fn chain_holds(&self) -> bool {
        self.f_equals_minus_log_z_chi && self.f_equals_log_z_twistor && self.product_is_one && self.naive_involution
    }
}

impl RayComputation {
    pub fn new(ctx: RayContext, gv: &GvTable) -> Result<Self, RayError> {
        ctx.check_table(gv)?;
        let w = ctx.working_window();
        let hi = w.var("q").and_then(|v| v.max).unwrap_or(0);
        let c = ctx.polar_slope();

        let mut acc: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for m in 1..=ctx.d_max {
            let h = ctx.h_of(m);
            if h < 0 {
                continue;
            }
            for g in 0..=h {
                let n = gv.get(g, h);
                if n.is_zero() {
                    continue;
                }
                for d in (1..).take_while(|d| d * m <= ctx.d_max) {
                    let deg_v = d * m;
                    let shift = c * deg_v;
                    let weight = Rational::new(if (g - 1).rem_euclid(2) == 0 { n.clone() } else { -n.clone() }, BigInt::from(d));
                    for (e, k) in kernel_terms(g, d, hi - shift) {
                        debug_assert!(e + shift >= 0, "pole deeper than the polar slope");
                        *acc.entry((e + shift, deg_v)).or_insert_with(Rational::zero) += &weight * Rational::from_integer(k);
                    }
                }
            }
        }
        let f = Series::from_terms(
            &w,
            acc.into_iter().map(|((e, dv), c)| (Monomial::new([("q", e), ("v", dv)]), c)),
        )?;

        let z_chi = &(-&f).exp_series()? - &Series::one(&w);
        let z_twistor = &f.exp_series()? - &Series::one(&w);
        let out = RayComputation { ctx, f, z_chi, z_twistor };
        out.check_integral("z_chi", &out.z_chi)?;
        out.check_integral("z_twistor", &out.z_twistor)?;
        Ok(out)
    }

    pub fn context(&self) -> &RayContext {
        &self.ctx
    }

    fn check_integral(&self, name: &'static str, s: &Series) -> Result<(), RayError> {
        if let Some((m, v)) = s.first_non_integral() {
            let natural = Monomial::new([("q", m.exponent("q") - self.ctx.polar_slope() * m.exponent("v")), ("v", m.exponent("v"))]);
            return Err(RayError::Integrality { series: name, monomial: natural.to_string(), value: v.to_string() });
        }
        Ok(())
    }

    fn to_natural(&self, s: &Series) -> Series {
        let c = self.ctx.polar_slope();
        let rep = Monomial::new([("q", -c), ("v", 1)]);
        s.substitute_monomial("v", false, &rep, &self.ctx.output_window())
            .expect("shifted frame maps into the output window")
    }

    pub fn f_gw_red(&self) -> Series {
        self.to_natural(&self.f)
    }

    pub fn z_chi(&self) -> Series {
        self.to_natural(&self.z_chi)
    }

    pub fn z_twistor(&self) -> Series {
        self.to_natural(&self.z_twistor)
    }

    pub fn z_naive(&self) -> Series {
        flip_q(&self.z_chi())
    }

    /// The displayed BPS-form sum read with `1/d`: equal to `-F`.
    pub fn bps_display_series(&self) -> Series {
        -&self.f_gw_red()
    }

    pub fn identity_report(&self) -> Result<IdentityReport, RayError> {
        let w = self.ctx.working_window();
        let one = Series::one(&w);
        let minus_log = -&self.z_chi.log1p_series()?;
        let log_tw = self.z_twistor.log1p_series()?;
        let prod = &(&one + &self.z_chi) * &(&one + &self.z_twistor);

        let z = self.z_chi();
        let diff = &self.bps_display_series() - &z;
        let mut differs: Vec<i64> = diff.terms().map(|(m, _)| m.exponent("v")).collect();
        differs.dedup();

        Ok(IdentityReport {
            f_equals_minus_log_z_chi: same_within(&self.f, &minus_log, &w),
            f_equals_log_z_twistor: same_within(&self.f, &log_tw, &w),
            product_is_one: same_within(&prod, &one, &w),
            naive_involution: flip_q(&self.z_naive()) == z,
            bps_display_differs_at: differs,
        })
    }
}

fn same_within(a: &Series, b: &Series, w: &Window) -> bool {
    match (a.truncate_to(w), b.truncate_to(w)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

fn flip_q(s: &Series) -> Series {
    s.substitute_monomial("q", true, &Monomial::var("q"), s.window())
        .expect("q -> -q preserves every window")
}

pub fn f_gw_red(ctx: RayContext, gv: &GvTable) -> Result<Series, RayError> {
    Ok(RayComputation::new(ctx, gv)?.f_gw_red())
}

pub fn z_chi(ctx: RayContext, gv: &GvTable) -> Result<Series, RayError> {
    Ok(RayComputation::new(ctx, gv)?.z_chi())
}

pub fn z_naive(ctx: RayContext, gv: &GvTable) -> Result<Series, RayError> {
    Ok(RayComputation::new(ctx, gv)?.z_naive())
}

pub fn z_twistor(ctx: RayContext, gv: &GvTable) -> Result<Series, RayError> {
    Ok(RayComputation::new(ctx, gv)?.z_twistor())
}

pub fn bps_display_series(ctx: RayContext, gv: &GvTable) -> Result<Series, RayError> {
    Ok(RayComputation::new(ctx, gv)?.bps_display_series())
}

/// Euler characteristic of the configuration space of `k` distinct points of
/// an elliptic curve modulo translation: `(-1)^(k-1) (k-1)!`.
pub fn config_euler(k: i64) -> Result<BigInt, RayError> {
    if k < 1 {
        return Err(RayError::InvalidK(k));
    }
    let f = crate::algebra::rational::factorial((k - 1) as u64);
    Ok(if k % 2 == 1 { f } else { -f })
}

/// A charge `alpha` with value `P_alpha` and formal monomial `Q^alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Charge {
    pub label: String,
    pub value: Rational,
    pub monomial: Monomial,
}

/// Sum over strata of configurations of distinct charges on an elliptic curve:
///
/// ```text
/// sum_k sum_{k_1+..+k_l = k} (-1)^k/k * multinomial(k; k_1..k_l) prod (P_i Q^i)^{k_i}
/// ```
///
/// enumerated term by term, with no logarithm involved.
pub fn strata_sum(charges: &[Charge], window: &Window) -> Result<Series, RayError> {
    let gi = window.grading_var().ok_or(SeriesError::NoGrading)?.to_string();
    let max = window.var(&gi).and_then(|v| v.max).ok_or(SeriesError::NoGrading)?;
    for (i, c) in charges.iter().enumerate() {
        if charges[..i].iter().any(|o| o.label == c.label) {
            return Err(RayError::DuplicateCharge(c.label.clone()));
        }
        if c.monomial.exponent(&gi) < 1 {
            return Err(RayError::UngradedCharge(c.label.clone()));
        }
    }

    let mut out = Series::zero(window);
    let mut mult = vec![0i64; charges.len()];
    enumerate_multiplicities(charges, &gi, max, 0, 0, &mut mult, &mut |mult| {
        let k: i64 = mult.iter().sum();
        if k == 0 {
            return Ok(());
        }
        let mut coeff = Rational::from_integer(crate::algebra::rational::factorial(k as u64));
        let mut mono = Monomial::one();
        for (c, &ki) in charges.iter().zip(mult.iter()) {
            if ki == 0 {
                continue;
            }
            coeff /= Rational::from_integer(crate::algebra::rational::factorial(ki as u64));
            coeff *= num_traits::pow(c.value.clone(), ki as usize);
            mono = mono.mul(&c.monomial.pow(ki));
        }
        coeff /= int(k);
        if k % 2 == 1 {
            coeff = -coeff;
        }
        out = &out + &Series::monomial(window, &mono, coeff)?;
        Ok(())
    })?;
    Ok(out)
}

fn enumerate_multiplicities(
    charges: &[Charge],
    grading: &str,
    max: i64,
    idx: usize,
    used: i64,
    mult: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> Result<(), RayError>,
) -> Result<(), RayError> {
    if idx == charges.len() {
        return visit(mult);
    }
    let step = charges[idx].monomial.exponent(grading);
    let mut k = 0;
    while used + k * step <= max {
        mult[idx] = k;
        enumerate_multiplicities(charges, grading, max, idx + 1, used + k * step, mult, visit)?;
        k += 1;
    }
    mult[idx] = 0;
    Ok(())
}

/// One exported coefficient: `v^d q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub d: i64,
    pub n: i64,
    pub coefficient: RationalRepr,
}

/// Nonzero coefficients with `q_min <= n <= q_max`, ordered by `(d, n)`.
pub fn series_records(s: &Series, q_min: i64, q_max: i64) -> Vec<SeriesRecord> {
    let mut out: Vec<SeriesRecord> = s
        .terms()
        .map(|(m, c)| (m.exponent("v"), m.exponent("q"), c))
        .filter(|&(_, n, _)| n >= q_min && n <= q_max)
        .map(|(d, n, c)| SeriesRecord { d, n, coefficient: RationalRepr::from(c) })
        .collect();
    out.sort_by_key(|r| (r.d, r.n));
    out
}

pub fn records_to_csv(records: &[SeriesRecord]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["d", "n", "num", "den"]).expect("in-memory write");
    for r in records {
        wtr.write_record([r.d.to_string(), r.n.to_string(), r.coefficient.num.clone(), r.coefficient.den.clone()])
            .expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("ascii csv")
}

/// Rows `n = q_min..=q_max`, columns `d = 1..=d_max`.
pub fn pretty_table(s: &Series, q_min: i64, q_max: i64, d_max: i64) -> String {
    let cell = |n: i64, d: i64| crate::algebra::rational::display(&s.coeff_of([("q", n), ("v", d)]));
    let width = (q_min..=q_max)
        .flat_map(|n| (1..=d_max).map(move |d| (n, d)))
        .map(|(n, d)| cell(n, d).len())
        .max()
        .unwrap_or(1)
        .max(4);
    let mut out = format!("{:>5} |", "n\\d");
    for d in 1..=d_max {
        out += &format!(" {d:>width$}");
    }
    out.push('\n');
    for n in q_min..=q_max {
        out += &format!("{n:>5} |");
        for d in 1..=d_max {
            out += &format!(" {:>width$}", cell(n, d));
        }
        out.push('\n');
    }
    out
}

/// Largest absolute numerator among coefficients, for summaries.
pub fn max_abs_coefficient(s: &Series) -> BigInt {
    s.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::kkv::compute_gv_table;

    fn qwin(lo: i64, hi: i64) -> Window {
        Window::new().laurent("q", lo, hi)
    }

    #[test]
    fn genus_one_factor_is_one() {
        for d in 1..4 {
            assert_eq!(genus_factor(1, d, &qwin(0, 6)).unwrap(), Series::one(&qwin(0, 6)));
        }
    }

    #[test]
    fn genus_two_factor() {
        let s = genus_factor(2, 1, &qwin(-1, 6)).unwrap();
        let expected = Series::from_terms(
            &qwin(-1, 6),
            [(-1, -1), (0, -2), (1, -1)].map(|(e, c)| (Monomial::new([("q", e)]), int(c))),
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn genus_zero_factor_inverts_kernel() {
        let w = qwin(-1, 8);
        let s = genus_factor(0, 1, &w).unwrap();
        assert_eq!(s.coeff_of([("q", 1)]), int(-1));
        assert_eq!(s.coeff_of([("q", 2)]), int(2));
        assert_eq!(s.coeff_of([("q", 3)]), int(-3));
        // (-q) - 2 + (-q)^-1
        let kernel = Series::from_terms(
            &w,
            [(-1, -1), (0, -2), (1, -1)].map(|(e, c)| (Monomial::new([("q", e)]), int(c))),
        )
        .unwrap();
        let p = &s * &kernel;
        assert!(p.agrees_with(&Series::one(&w)));
    }

    #[test]
    fn genus_factor_needs_polar_room() {
        assert!(genus_factor(3, 2, &qwin(-2, 6)).is_err());
        assert!(genus_factor(3, 2, &qwin(-4, 6)).is_ok());
    }

    #[test]
    fn context_validation() {
        assert!(RayContext::new(-1, 1, 0, 4).is_err());
        assert!(RayContext::new(1, 0, 0, 4).is_err());
        assert!(RayContext::new(1, 1, 5, 4).is_err());
        let c = RayContext::new(2, 3, -4, 4).unwrap();
        assert_eq!(c.h_of(3), 10);
        assert_eq!(c.required_h_max(), 10);
    }

    #[test]
    fn table_too_small_is_an_error() {
        let gv = compute_gv_table(2).unwrap();
        let ctx = RayContext::new(2, 2, -4, 4).unwrap();
        assert!(matches!(RayComputation::new(ctx, &gv), Err(RayError::GvTableTooSmall { need: 5, have: 2 })));
    }

    #[test]
    fn first_order_at_elliptic_class() {
        // b0^2 = 0, so h(1) = 1: F_1 = n_{0,1} * (-K_{0,1}) + n_{1,1}
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(1, 1, -4, 5).unwrap();
        let f = f_gw_red(ctx, &gv).unwrap();
        assert_eq!(f.coeff_of([("v", 1)]), int(-2));
        for n in 1..=5i64 {
            let expected = int(24 * n * if n % 2 == 1 { 1 } else { -1 });
            assert_eq!(f.coeff_of([("q", n), ("v", 1)]), expected, "n = {n}");
        }
        assert!(f.coeff_of([]).is_zero());
        assert!(f.terms().all(|(m, _)| m.exponent("v") >= 1));
    }

    #[test]
    fn second_order_collects_both_divisors() {
        // h0 = 1: h(1) = h(2) = 1; v^2 gets (m=2,d=1) and (m=1,d=2)
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(1, 2, -4, 6).unwrap();
        let f = f_gw_red(ctx, &gv).unwrap();
        for n in -4..=6i64 {
            let mut brute = Rational::zero();
            for (m, d) in [(2i64, 1i64), (1, 2)] {
                for g in 0..=1i64 {
                    let nv = Rational::from_integer(gv.get(g, ctx.h_of(m)));
                    let k: Rational = kernel_terms(g, d, 6)
                        .into_iter()
                        .filter(|(e, _)| *e == n)
                        .map(|(_, c)| Rational::from_integer(c))
                        .sum();
                    let sign = if g == 1 { int(1) } else { int(-1) };
                    brute += nv * sign * k / int(d);
                }
            }
            assert_eq!(f.coeff_of([("q", n), ("v", 2)]), brute, "n = {n}");
        }
    }

    #[test]
    fn z_chi_low_orders() {
        let gv = compute_gv_table(5).unwrap();
        let ctx = RayContext::new(2, 2, -6, 6).unwrap();
        let rc = RayComputation::new(ctx, &gv).unwrap();
        let f = rc.f_gw_red();
        let z = rc.z_chi();
        for n in -2..=4 {
            let f1 = f.coeff_of([("q", n), ("v", 1)]);
            assert_eq!(z.coeff_of([("q", n), ("v", 1)]), -f1.clone());
            let mut f1sq = Rational::zero();
            for a in -4..=8 {
                f1sq += f.coeff_of([("q", a), ("v", 1)]) * f.coeff_of([("q", n - a), ("v", 1)]);
            }
            let expected = -f.coeff_of([("q", n), ("v", 2)]) + f1sq / int(2);
            assert_eq!(z.coeff_of([("q", n), ("v", 2)]), expected, "n = {n}");
        }
    }

    #[test]
    fn naive_series_flips_odd_powers() {
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(1, 2, -3, 5).unwrap();
        let rc = RayComputation::new(ctx, &gv).unwrap();
        let (z, na) = (rc.z_chi(), rc.z_naive());
        for (m, c) in z.terms() {
            let flipped = if m.exponent("q") % 2 == 0 { c.clone() } else { -c.clone() };
            assert_eq!(na.coeff(&m), flipped);
        }
    }

    #[test]
    fn twistor_first_order_and_product() {
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(1, 2, -3, 5).unwrap();
        let rc = RayComputation::new(ctx, &gv).unwrap();
        let f = rc.f_gw_red();
        let t = rc.z_twistor();
        for n in -1..=5 {
            assert_eq!(t.coeff_of([("q", n), ("v", 1)]), f.coeff_of([("q", n), ("v", 1)]));
        }
        let report = rc.identity_report().unwrap();
        assert!(report.chain_holds(), "{report:?}");
    }

    #[test]
    fn bps_display_matches_only_at_first_order() {
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(0, 2, -4, 4).unwrap();
        let rc = RayComputation::new(ctx, &gv).unwrap();
        assert_eq!(rc.bps_display_series(), -&rc.f_gw_red());
        let report = rc.identity_report().unwrap();
        assert_eq!(report.bps_display_differs_at, vec![2]);
    }

    #[test]
    fn config_euler_values() {
        let vals: Vec<i64> = (1..=6).map(|k| config_euler(k).unwrap().try_into().unwrap()).collect();
        assert_eq!(vals, [1, -1, 2, -6, 24, -120]);
        assert_eq!(config_euler(0), Err(RayError::InvalidK(0)));
    }

    fn vq_window(vmax: i64) -> Window {
        Window::new().power("q", 0, 8).power("v", 0, vmax).grading("v")
    }

    #[test]
    fn strata_single_charge() {
        let w = vq_window(3);
        let p = rat(5, 3);
        let charge = Charge { label: "a".into(), value: p.clone(), monomial: Monomial::new([("q", 1), ("v", 1)]) };
        let s = strata_sum(&[charge], &w).unwrap();
        for k in 1..=3i64 {
            let sign = if k % 2 == 1 { int(-1) } else { int(1) };
            assert_eq!(s.coeff_of([("q", k), ("v", k)]), sign * num_traits::pow(p.clone(), k as usize) / int(k));
        }
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn strata_empty() {
        assert!(strata_sum(&[], &vq_window(3)).unwrap().is_zero());
    }

    #[test]
    fn strata_rejects_bad_charges() {
        let w = vq_window(3);
        let a = Charge { label: "a".into(), value: int(1), monomial: Monomial::var("v") };
        assert!(matches!(strata_sum(&[a.clone(), a.clone()], &w), Err(RayError::DuplicateCharge(_))));
        let b = Charge { label: "b".into(), value: int(1), monomial: Monomial::var("q") };
        assert!(matches!(strata_sum(&[b], &w), Err(RayError::UngradedCharge(_))));
    }

    #[test]
    fn records_and_table() {
        let gv = compute_gv_table(1).unwrap();
        let ctx = RayContext::new(1, 1, -1, 2).unwrap();
        let f = f_gw_red(ctx, &gv).unwrap();
        let recs = series_records(&f, -1, 2);
        assert_eq!(
            recs.iter().map(|r| (r.d, r.n, r.coefficient.num.as_str())).collect::<Vec<_>>(),
            [(1, 0, "-2"), (1, 1, "24"), (1, 2, "-48")]
        );
        let csv = records_to_csv(&recs);
        assert!(csv.starts_with("d,n,num,den\n1,0,-2,1\n"));
        let table = pretty_table(&f, -1, 2, 1);
        assert_eq!(table.lines().count(), 5);
    }
}
