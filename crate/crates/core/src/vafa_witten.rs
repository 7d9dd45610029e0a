//! Pair invariants on a ray of charges `m a0` and the extraction of
//! Vafa-Witten invariants from them.
//!
//! The pipeline is `vw -> P -> P~ = -P -> P_perp -> VW`, where
//!
//! ```text
//! P_M       = sum_{(m_1..m_l) |= M} (-1)^l / l! prod_i (-1)^{m_i chi0} (m_i chi0) vw_{m_i}
//! sum P_perp a^M = -log(1 + sum P~_M a^M)
//! VW_m      = P_perp_m / ((-1)^{m chi0 - 1} m chi0)
//! ```
//!
//! and `theorem_check` compares `VW` with the input `vw`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::rational::{factorial, int, sign_pow, RationalRepr};
use crate::algebra::{Monomial, Rational, Series, SeriesError, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VwError {
    #[error("degenerate twist: chi0 must be nonzero")]
    DegenerateTwist,
    #[error("M_max must be >= 1")]
    EmptyRay,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A ray of charges `m a0`, `1 <= m <= M_max`, with `chi(m a0(n)) = m chi0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VwRay {
    pub m_max: usize,
    pub chi0: i64,
    vw: PairValues,
}

impl VwRay {
    /// `vw[i]` is the value at multiplicity `i + 1`.
    pub fn new(chi0: i64, vw: Vec<Rational>) -> Result<Self, VwError> {
        if chi0 == 0 {
            return Err(VwError::DegenerateTwist);
        }
        if vw.is_empty() {
            return Err(VwError::EmptyRay);
        }
        Ok(VwRay { m_max: vw.len(), chi0, vw: PairValues(vw) })
    }

    pub fn vw(&self, m: usize) -> &Rational {
        self.vw.get(m)
    }

    pub fn vw_values(&self) -> &PairValues {
        &self.vw
    }

    /// `(-1)^{m chi0} (m chi0) vw_m`.
    fn weight(&self, m: usize) -> Rational {
        let chi = m as i64 * self.chi0;
        sign_pow(chi) * int(chi) * self.vw(m)
    }
}

/// Values indexed by multiplicity `1..=M_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairValues(Vec<Rational>);

impl PairValues {
    pub fn new(values: Vec<Rational>) -> Self {
        PairValues(values)
    }

    pub fn zeros(m_max: usize) -> Self {
        PairValues(vec![Rational::zero(); m_max])
    }

    pub fn m_max(&self) -> usize {
        self.0.len()
    }

    /// Value at multiplicity `m >= 1`.
    pub fn get(&self, m: usize) -> &Rational {
        &self.0[m - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn negated(&self) -> PairValues {
        PairValues(self.0.iter().map(|x| -x).collect())
    }

    pub fn scaled(&self, c: &Rational) -> PairValues {
        PairValues(self.0.iter().map(|x| x * c).collect())
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `sum_{compositions of M} (-1)^l / l! prod_i f(m_i)`, split by length `l`.
/// Entry `[M-1][l]` holds the length-`l` part.
fn composition_sums_by_length(m_max: usize, f: impl Fn(usize) -> Rational) -> Vec<Vec<Rational>> {
    let vals: Vec<Rational> = (1..=m_max).map(&f).collect();
    (1..=m_max)
        .map(|big_m| {
            let mut by_len = vec![Rational::zero(); big_m + 1];
            for comp in compositions(big_m) {
                let l = comp.len();
                let prod = comp.iter().fold(Rational::one(), |acc, &m| acc * &vals[m - 1]);
                by_len[l] += prod;
            }
            for (l, x) in by_len.iter_mut().enumerate() {
                *x *= sign_pow(l as i64) / Rational::from_integer(factorial(l as u64));
            }
            by_len
        })
        .collect()
}

/// Length-stratified contributions to `P_M`: entry `[M-1][l]`.
pub fn pairs_by_length(ray: &VwRay) -> Vec<Vec<Rational>> {
    composition_sums_by_length(ray.m_max, |m| ray.weight(m))
}

/// `P_M` from `vw` by the composition sum.
pub fn pairs_from_vw(ray: &VwRay) -> PairValues {
    PairValues(pairs_by_length(ray).into_iter().map(|parts| parts.into_iter().sum()).collect())
}

fn ray_window(m_max: usize) -> Window {
    Window::new().power("a", 0, m_max as i64).grading("a")
}

/// `P_perp` as the coefficients of `-log(1 + sum P~_M a^M)`, `P~ = -P`.
pub fn pperp_from_pairs(p: &PairValues) -> Result<PairValues, VwError> {
    let m_max = p.m_max();
    let w = ray_window(m_max);
    let tilde = p.negated();
    let s = Series::from_terms(
        &w,
        (1..=m_max).map(|m| (Monomial::new([("a", m as i64)]), tilde.get(m).clone())),
    )?;
    let l = -&s.log1p_series()?;
    Ok(PairValues((1..=m_max).map(|m| l.coeff_of([("a", m as i64)])).collect()))
}

/// Inverse of [`pperp_from_pairs`]: `P = -(exp(-sum P_perp a^M) - 1)`.
pub fn pairs_from_pperp(pperp: &PairValues) -> Result<PairValues, VwError> {
    let m_max = pperp.m_max();
    let w = ray_window(m_max);
    let s = Series::from_terms(
        &w,
        (1..=m_max).map(|m| (Monomial::new([("a", m as i64)]), -pperp.get(m))),
    )?;
    let e = s.exp_series()?;
    Ok(PairValues((1..=m_max).map(|m| -e.coeff_of([("a", m as i64)])).collect()))
}

/// Checks `-P_M = sum_{compositions} (-1)^l / l! prod_i P_perp_{m_i}` by direct enumeration.
pub fn exp_identity_check(p: &PairValues, pperp: &PairValues) -> bool {
    if p.m_max() != pperp.m_max() {
        return false;
    }
    let rhs = composition_sums_by_length(p.m_max(), |m| pperp.get(m).clone());
    rhs.into_iter()
        .enumerate()
        .all(|(i, parts)| -p.get(i + 1) == parts.into_iter().sum::<Rational>())
}

/// `VW_m = P_perp_m / ((-1)^{m chi0 - 1} m chi0)`.
pub fn vw_extract(pperp: &PairValues, chi0: i64) -> Result<PairValues, VwError> {
    if chi0 == 0 {
        return Err(VwError::DegenerateTwist);
    }
    Ok(PairValues(
        (1..=pperp.m_max())
            .map(|m| {
                let chi = m as i64 * chi0;
                pperp.get(m) / (sign_pow(chi - 1) * int(chi))
            })
            .collect(),
    ))
}

/// Everything computed along the pipeline for one ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub chi0: i64,
    pub vw: PairValues,
    pub p: PairValues,
    pub p_tilde: PairValues,
    pub p_perp: PairValues,
    pub big_vw: PairValues,
    pub exp_identity: bool,
    /// Multiplicities where `VW_m != vw_m`.
    pub mismatches: Vec<usize>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.exp_identity && self.mismatches.is_empty()
    }

    pub fn records(&self) -> Vec<VwRecord> {
        let repr = |v: &PairValues, m| RationalRepr::from(v.get(m));
        (1..=self.vw.m_max())
            .map(|m| VwRecord {
                m,
                vw: repr(&self.vw, m),
                p: repr(&self.p, m),
                p_tilde: repr(&self.p_tilde, m),
                p_perp: repr(&self.p_perp, m),
                big_vw: repr(&self.big_vw, m),
                pass: self.vw.get(m) == self.big_vw.get(m),
            })
            .collect()
    }
}

/// Export record for one multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VwRecord {
    #[serde(rename = "M")]
    pub m: usize,
    pub vw: RationalRepr,
    #[serde(rename = "P")]
    pub p: RationalRepr,
    #[serde(rename = "P_tilde")]
    pub p_tilde: RationalRepr,
    #[serde(rename = "P_perp")]
    pub p_perp: RationalRepr,
    #[serde(rename = "VW")]
    pub big_vw: RationalRepr,
    pub pass: bool,
}

/// Runs `vw -> P -> P_perp -> VW` and compares with the input.
pub fn theorem_check(ray: &VwRay) -> Result<TheoremReport, VwError> {
    let p = pairs_from_vw(ray);
    let p_perp = pperp_from_pairs(&p)?;
    let big_vw = vw_extract(&p_perp, ray.chi0)?;
    let vw = ray.vw_values().clone();
    let mismatches = (1..=ray.m_max).filter(|&m| vw.get(m) != big_vw.get(m)).collect();
    Ok(TheoremReport {
        chi0: ray.chi0,
        exp_identity: exp_identity_check(&p, &p_perp),
        p_tilde: p.negated(),
        vw,
        p,
        p_perp,
        big_vw,
        mismatches,
    })
}

/// Nonzero `VW_m - vw_m`, keyed by multiplicity.
pub fn discrepancies(report: &TheoremReport) -> BTreeMap<usize, Rational> {
    (1..=report.vw.m_max())
        .map(|m| (m, report.big_vw.get(m) - report.vw.get(m)))
        .filter(|(_, d)| !d.is_zero())
        .collect()
}
