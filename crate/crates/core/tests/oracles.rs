//! Independent oracles: each value here is produced by code that shares
//! nothing with the library path it checks.

use std::collections::BTreeMap;

use k3series::algebra::rational::{int, rat, sign_pow};
use k3series::algebra::{Monomial, Rational, Series, Window};
use k3series::kkv::{compute_gv_table, reconstruct};
use k3series::ray_series::{genus_factor, RayComputation, RayContext};
use k3series::sheaf_count::{hilb_euler, js_invariant, MukaiVector};
use k3series::vafa_witten::{pairs_from_vw, pperp_from_pairs, theorem_check, vw_extract, VwRay};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn sigma(n: usize) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d as i64).sum()
}

/// Coefficients of `prod (1 - q^k)^-c` by the divisor-sum recurrence
/// `n a_n = c sum_{k=1}^n sigma(k) a_{n-k}`.
fn colored_partitions(c: i64, n_max: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::one()];
    for n in 1..=n_max {
        let s: BigInt = (1..=n).map(|k| BigInt::from(sigma(k)) * &a[n - k]).sum();
        a.push(s * c / n as i64);
    }
    a
}

#[test]
fn hilbert_euler_matches_divisor_recurrence() {
    let oracle = colored_partitions(24, 30);
    for (n, v) in oracle.iter().enumerate() {
        assert_eq!(&hilb_euler(n), v, "n = {n}");
    }
}

#[test]
fn gv_genus_zero_row_matches_partition_oracle() {
    let table = compute_gv_table(12).unwrap();
    let oracle = colored_partitions(24, 12);
    for (h, v) in oracle.iter().enumerate() {
        assert_eq!(&table.get(0, h as i64), v);
    }
}

/// `prod_{n<=h} (1-q^n)^-20 (1-yq^n)^-2 (1-q^n/y)^-2` in dense arrays:
/// `out[k][j]` is the coefficient of `q^k y^(j-h)`.
fn kkv_dense(h: usize) -> Vec<Vec<BigInt>> {
    let width = 2 * h + 1;
    let mut p = vec![vec![BigInt::zero(); width]; h + 1];
    p[0][h] = BigInt::one();
    // multiply by 1/(1 - q^n y^s) once per unit of the exponent
    let mut factors = Vec::new();
    for n in 1..=h {
        factors.extend(std::iter::repeat_n((n, 0i64), 20));
        factors.extend(std::iter::repeat_n((n, 1i64), 2));
        factors.extend(std::iter::repeat_n((n, -1i64), 2));
    }
    for (n, s) in factors {
        // in place: p_k += p_{k-n} shifted by s, ascending in k
        for k in n..=h {
            for j in 0..width {
                let src = j as i64 - s;
                if (0..width as i64).contains(&src) {
                    let add = p[k - n][src as usize].clone();
                    p[k][j] += add;
                }
            }
        }
    }
    p
}

#[test]
fn kkv_table_reconstructs_dense_product() {
    let h_max = 7;
    let table = compute_gv_table(h_max).unwrap();
    let dense = kkv_dense(h_max);
    for h in 0..=h_max {
        let got = reconstruct(&table, h);
        for (j, c) in dense[h].iter().enumerate() {
            let k = j as i64 - h_max as i64;
            let have = got.get(&k).cloned().unwrap_or_else(Rational::zero);
            assert_eq!(have, Rational::from_integer(c.clone()), "q^{h} y^{k}");
        }
    }
}

#[test]
fn kkv_spot_values() {
    let t = compute_gv_table(3).unwrap();
    let row = |g: i64| (0..=3).map(|h| t.get(g, h)).collect::<Vec<_>>();
    assert_eq!(row(0), [1, 24, 324, 3200].map(BigInt::from));
    assert_eq!(row(1), [0, -2, -54, -800].map(BigInt::from));
    assert_eq!(row(2), [0, 0, 3, 88].map(BigInt::from));
    assert_eq!(row(3), [0, 0, 0, -4].map(BigInt::from));
}

#[test]
fn genus_zero_kernel_inverts_the_bracket() {
    let w = Window::new().laurent("q", -3, 12);
    for d in 1..=3 {
        let g0 = genus_factor(0, d, &w).unwrap();
        let sign = sign_pow(d);
        let bracket = Series::from_terms(
            &w,
            [
                (Monomial::new([("q", d)]), sign.clone()),
                (Monomial::one(), int(-2)),
                (Monomial::new([("q", -d)]), sign),
            ],
        )
        .unwrap();
        let prod = &g0 * &bracket;
        // the product is known exactly up to q^(12 - d)
        for n in -3..=12 - d {
            let want = if n == 0 { int(1) } else { int(0) };
            assert_eq!(prod.coeff_of([("q", n)]), want, "d={d}, q^{n}");
        }
    }
}

/// `F` by direct enumeration of `(m, g, d)`. The genus-0 kernel is
/// `sum_k k (-q)^{dk}`, the inverse of the bracket around `q = 0`; the
/// others come from an explicit binomial expansion.
fn f_oracle(h0: i64, d_max: i64, q_lo: i64, q_hi: i64) -> BTreeMap<(i64, i64), Rational> {
    let table = compute_gv_table(((d_max * d_max) * (h0 - 1).max(0) + 1) as usize).unwrap();
    let mut out: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
    for m in 1..=d_max {
        let h = m * m * (h0 - 1) + 1;
        if h < 0 {
            continue;
        }
        for g in 0..=h {
            let n = Rational::from_integer(table.get(g, h));
            if n.is_zero() {
                continue;
            }
            for d in (1..=d_max).filter(|d| d * m <= d_max) {
                let coeff = sign_pow(g - 1) * &n / int(d);
                let mut kernel: BTreeMap<i64, Rational> = BTreeMap::new();
                if g == 0 {
                    for k in 1..=q_hi.max(0) {
                        *kernel.entry(d * k).or_insert_with(Rational::zero) += int(k) * sign_pow(d * k);
                    }
                } else {
                    // (x - 2 + 1/x)^(g-1) = (x^{1/2} - x^{-1/2})^(2g-2), x = (-q)^d
                    let e = g - 1;
                    for j in 0..=2 * e {
                        let c = Rational::from_integer(k3series::algebra::rational::binomial(2 * e as u64, j as u64));
                        let sgn = sign_pow(j);
                        let power = e - j;
                        *kernel.entry(d * power).or_insert_with(Rational::zero) += c * sgn * sign_pow(d * power);
                    }
                }
                for (qe, c) in kernel {
                    if qe >= q_lo && qe <= q_hi {
                        *out.entry((d * m, qe)).or_insert_with(Rational::zero) += &coeff * c;
                    }
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[test]
fn ray_free_energy_matches_direct_enumeration() {
    for h0 in 0..=3 {
        let (lo, hi) = (-8, 8);
        let ctx = RayContext::new(h0, 3, lo, hi).unwrap();
        let table = compute_gv_table(ctx.required_h_max() as usize).unwrap();
        let f = RayComputation::new(ctx, &table).unwrap().f_gw_red();
        let oracle = f_oracle(h0, 3, lo, hi);
        for d in 1..=3 {
            for n in lo..=hi {
                let want = oracle.get(&(d, n)).cloned().unwrap_or_else(Rational::zero);
                assert_eq!(f.coeff_of([("q", n), ("v", d)]), want, "h0={h0} v^{d} q^{n}");
            }
        }
    }
}

#[test]
fn stable_pairs_first_orders_by_hand() {
    // h0 = 1: h(m) = 1 for all m, F_1 = 24 K_{0,1} - 2
    let ctx = RayContext::new(1, 2, -4, 6).unwrap();
    let table = compute_gv_table(1).unwrap();
    let comp = RayComputation::new(ctx, &table).unwrap();
    let z = comp.z_chi();
    assert_eq!(z.coeff_of([("v", 1)]), int(2));
    for n in 1..=6 {
        // -F_1 at q^n = 24 n (-1)^n
        assert_eq!(z.coeff_of([("q", n), ("v", 1)]), int(24 * n) * sign_pow(n));
    }
}

fn hilb_closed(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::from_integer(colored_partitions(24, n as usize)[n as usize].clone())
    }
}

#[test]
fn joyce_song_against_closed_forms() {
    // primitive vectors: e(Hilb^{v^2/2 + 1})
    for (r, m, h0, s) in [(0, 1, 3, 1), (1, 0, 2, -2), (2, 1, 2, 1), (-1, 2, 1, 3)] {
        let v = MukaiVector::new(r, m, h0, s).unwrap();
        let sq = m * m * (2 * h0 - 2) - 2 * r * s;
        assert_eq!(js_invariant(&v).value, hilb_closed(sq / 2 + 1), "{v:?}");
    }
    // divisibility 2: e(Hilb^{2 w^2 + 1}) + e(Hilb^{w^2/2 + 1}) / 4
    let v = MukaiVector::new(0, 2, 2, 2).unwrap();
    assert_eq!(js_invariant(&v).value, hilb_closed(5) + hilb_closed(2) / int(4));
}

#[test]
fn vafa_witten_second_order_closed_form() {
    // VW_2 = vw_2 - chi0 vw_1^2 / 2 along the composition / log route
    for chi0 in [-5, -2, -1, 1, 3, 5] {
        let (a, b) = (rat(7, 3), rat(-2, 5));
        let ray = VwRay::new(chi0, vec![a.clone(), b.clone()]).unwrap();
        let p = pairs_from_vw(&ray);
        let big = vw_extract(&pperp_from_pairs(&p).unwrap(), chi0).unwrap();
        assert_eq!(big.get(1), &a);
        assert_eq!(big.get(2), &(b - int(chi0) * &a * &a / int(2)));
    }
}

#[test]
fn vafa_witten_holds_when_lower_terms_vanish() {
    // with vw_1 = .. = vw_{M-1} = 0 only the single-part composition survives
    for chi0 in [-4, 1, 2] {
        let mut vw = vec![Rational::zero(); 5];
        vw[4] = rat(11, 7);
        let rep = theorem_check(&VwRay::new(chi0, vw).unwrap()).unwrap();
        assert!(rep.pass(), "chi0={chi0}");
    }
}
