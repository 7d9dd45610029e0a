//! The KKV product and the Gopakumar-Vafa table of a K3 surface.
//!
//! The `q^h` coefficient of
//!
//! ```text
//! prod_{n>=1} (1-q^n)^-20 (1-y q^n)^-2 (1-y^-1 q^n)^-2
//! ```
//!
//! is a Laurent polynomial in `y`, symmetric under `y <-> 1/y`. Writing it in
//! powers of `z = y - 2 + 1/y = (y^1/2 - y^-1/2)^2` gives `sum_g (-1)^g n_{g,h} z^g`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::rational::{binomial, Rational};
use crate::algebra::{product_of_binomials, Monomial, Series, SeriesError, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KkvError {
    #[error("Laurent polynomial is not symmetric under y <-> 1/y at degree {0}")]
    Asymmetric(i64),
    #[error("internal error: nonzero residual after z-basis peeling at degree {0}")]
    Residual(i64),
    #[error("KKV integrality violated at n[{g}][{h}] = {value}")]
    Integrality { g: usize, h: usize, value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Laurent polynomial `sum c_m y^m` with `c_m = c_{-m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricLaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl SymmetricLaurentPoly {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Rational)>) -> Result<Self, KkvError> {
        let mut map = BTreeMap::new();
        for (m, c) in coeffs {
            if !c.is_zero() {
                *map.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c: &mut Rational| !c.is_zero());
        for (&m, c) in &map {
            if map.get(&-m) != Some(c) {
                return Err(KkvError::Asymmetric(m));
            }
        }
        Ok(SymmetricLaurentPoly { coeffs: map })
    }

    /// Largest `M` with `c_M != 0` (0 for the zero polynomial).
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0).max(0)
    }

    pub fn coeff(&self, m: i64) -> Rational {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at `y = 1`.
    pub fn at_one(&self) -> Rational {
        self.coeffs.values().sum()
    }
}

/// Coefficients of `z^g` in powers of `y`: `(-1)^(g-k) C(2g, g-k)` at `y^k`.
pub fn z_power(g: usize) -> Vec<(i64, BigInt)> {
    let g64 = g as i64;
    (-g64..=g64)
        .map(|k| {
            let j = (g64 - k) as u64;
            let c = binomial(2 * g as u64, j);
            (k, if j % 2 == 0 { c } else { -c })
        })
        .collect()
}

fn kkv_window(h_max: usize) -> Window {
    let h = h_max as i64;
    Window::new().power("q", 0, h).laurent_exact("y", -h)
}

/// The KKV product truncated at `q^h_max`, in variables `q` and `y`.
pub fn kkv_rhs(h_max: usize) -> Result<Series, KkvError> {
    let w = kkv_window(h_max);
    let mut factors = Vec::with_capacity(3 * h_max);
    for n in 1..=h_max as i64 {
        factors.push((Monomial::new([("q", n)]), -20));
        factors.push((Monomial::new([("q", n), ("y", 1)]), -2));
        factors.push((Monomial::new([("q", n), ("y", -1)]), -2));
    }
    Ok(product_of_binomials(&factors, &w)?)
}

/// The `q^h` coefficient of a series in `q` and `y`.
pub fn q_coefficient(rhs: &Series, h: i64) -> Result<SymmetricLaurentPoly, KkvError> {
    SymmetricLaurentPoly::new(
        rhs.slice("q", h)
            .terms()
            .map(|(m, c)| (m.exponent("y"), c.clone())),
    )
}

/// Coefficients `a_0..=a_M` with `p = sum_g a_g z^g`, by peeling the top degree.
pub fn to_z_basis(p: &SymmetricLaurentPoly) -> Result<Vec<Rational>, KkvError> {
    let top = p.degree();
    let mut residual = p.coeffs.clone();
    let mut out = vec![Rational::zero(); top as usize + 1];
    for g in (0..=top).rev() {
        let a = residual.get(&g).cloned().unwrap_or_else(Rational::zero);
        if a.is_zero() {
            continue;
        }
        for (k, c) in z_power(g as usize) {
            let slot = residual.entry(k).or_insert_with(Rational::zero);
            *slot -= &a * Rational::from_integer(c);
        }
        residual.retain(|_, c| !c.is_zero());
        out[g as usize] = a;
    }
    if let Some((&k, _)) = residual.iter().next() {
        return Err(KkvError::Residual(k));
    }
    Ok(out)
}

/// Gopakumar-Vafa invariants `n[g][h]`, `0 <= g, h <= h_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GvTable {
    h_max: usize,
    n: Vec<Vec<BigInt>>,
}

impl GvTable {
    pub fn h_max(&self) -> usize {
        self.h_max
    }

    /// `n_{g,h}`; zero outside the table and for negative `h`.
    pub fn get(&self, g: i64, h: i64) -> BigInt {
        if g < 0 || h < 0 || g as usize > self.h_max || h as usize > self.h_max {
            return BigInt::zero();
        }
        self.n[g as usize][h as usize].clone()
    }

    /// Rows indexed by `g`, columns by `h`.
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.n
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.n.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        serde_json::to_string(&rows).expect("string table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let rows: Vec<Vec<String>> = serde_json::from_str(s)?;
        let n: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<BigInt>().map_err(serde::de::Error::custom))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, serde_json::Error>>()?;
        Ok(GvTable { h_max: n.len().saturating_sub(1), n })
    }

    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["g".to_string()];
        header.extend((0..=self.h_max).map(|h| h.to_string()));
        wtr.write_record(&header).expect("in-memory write");
        for (g, row) in self.n.iter().enumerate() {
            let mut rec = vec![g.to_string()];
            rec.extend(row.iter().map(|x| x.to_string()));
            wtr.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("ascii csv")
    }

    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> =
            self.n.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(3);
        let mut out = format!("{:>4} |", "g\\h");
        for h in 0..=self.h_max {
            out += &format!(" {h:>width$}");
        }
        out.push('\n');
        for (g, row) in cells.iter().enumerate() {
            out += &format!("{g:>4} |");
            for c in row {
                out += &format!(" {c:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn compute_gv_table(h_max: usize) -> Result<GvTable, KkvError> {
    let rhs = kkv_rhs(h_max)?;
    let mut n = vec![vec![BigInt::zero(); h_max + 1]; h_max + 1];
    for h in 0..=h_max {
        let a = to_z_basis(&q_coefficient(&rhs, h as i64)?)?;
        for (g, ag) in a.iter().enumerate() {
            if ag.is_zero() {
                continue;
            }
            if !ag.is_integer() || g > h_max {
                return Err(KkvError::Integrality { g, h, value: ag.to_string() });
            }
            let v = ag.to_integer();
            n[g][h] = if g % 2 == 0 { v } else { -v };
        }
    }
    Ok(GvTable { h_max, n })
}

/// Shared immutable tables; any cached table with a large enough `h_max` is reused.
pub fn gv_table_cached(h_max: usize) -> Result<Arc<GvTable>, KkvError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GvTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    {
        let guard = cache.lock().expect("gv cache poisoned");
        if let Some(t) = guard.iter().filter(|(&k, _)| k >= h_max).min_by_key(|(&k, _)| k) {
            return Ok(Arc::clone(t.1));
        }
    }
    let table = Arc::new(compute_gv_table(h_max)?);
    cache.lock().expect("gv cache poisoned").insert(h_max, Arc::clone(&table));
    Ok(table)
}

/// Re-expands `sum_g (-1)^g n[g][h] z^g` in powers of `y`.
pub fn reconstruct(table: &GvTable, h: usize) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for g in 0..=h.min(table.h_max) {
        let n = table.get(g as i64, h as i64);
        if n.is_zero() {
            continue;
        }
        let a = if g % 2 == 0 { n } else { -n };
        for (k, c) in z_power(g) {
            *out.entry(k).or_insert_with(Rational::zero) += Rational::from_integer(&a * c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use num_traits::ToPrimitive;

    fn sym(pairs: &[(i64, i64)]) -> SymmetricLaurentPoly {
        SymmetricLaurentPoly::new(pairs.iter().map(|&(m, c)| (m, int(c)))).unwrap()
    }

    #[test]
    fn empty_product() {
        let r = kkv_rhs(0).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.coeff(&Monomial::one()), int(1));
    }

    #[test]
    fn first_order_coefficient() {
        let r = kkv_rhs(1).unwrap();
        let p = q_coefficient(&r, 1).unwrap();
        assert_eq!(p, sym(&[(-1, 2), (0, 20), (1, 2)]));
        assert_eq!(p.at_one(), int(24));
    }

    #[test]
    fn z_basis_examples() {
        assert_eq!(to_z_basis(&sym(&[(0, 1)])).unwrap(), vec![int(1)]);
        assert_eq!(to_z_basis(&sym(&[(-1, 1), (0, -2), (1, 1)])).unwrap(), vec![int(0), int(1)]);
        assert_eq!(to_z_basis(&sym(&[(-1, 2), (0, 20), (1, 2)])).unwrap(), vec![int(24), int(2)]);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let r = SymmetricLaurentPoly::new([(1, int(2)), (-1, int(3))]);
        assert!(matches!(r, Err(KkvError::Asymmetric(_))));
    }

    #[test]
    fn z_power_is_binomial_row() {
        // z^2 = y^2 - 4y + 6 - 4/y + 1/y^2
        let z2: Vec<i64> = z_power(2).into_iter().map(|(_, c)| c.to_i64().unwrap()).collect();
        assert_eq!(z2, [1, -4, 6, -4, 1]);
    }

    #[test]
    fn low_table_entries() {
        let t = compute_gv_table(4).unwrap();
        assert_eq!(t.get(0, 0), BigInt::from(1));
        assert_eq!(t.get(0, 1), BigInt::from(24));
        assert_eq!(t.get(1, 1), BigInt::from(-2));
        let genus0: Vec<i64> = (0..=4).map(|h| t.get(0, h).to_i64().unwrap()).collect();
        assert_eq!(genus0, [1, 24, 324, 3200, 25650]);
        for h in 0..=4 {
            for g in h + 1..=4 {
                assert!(t.get(g, h).is_zero());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = compute_gv_table(3).unwrap();
        assert_eq!(GvTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn csv_layout() {
        let t = compute_gv_table(3).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "g,0,1,2,3");
        assert_eq!(lines[1], "0,1,24,324,3200");
        assert!(lines[4].starts_with("3,0,0,0,"));
    }

    #[test]
    fn cache_reuses_larger_tables() {
        let a = gv_table_cached(5).unwrap();
        let b = gv_table_cached(3).unwrap();
        assert!(b.h_max() >= 3);
        assert_eq!(a.get(2, 3), b.get(2, 3));
    }
}
