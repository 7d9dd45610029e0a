//! The verification suite behind `k3series verify`.
//!
//! Each criterion is deterministic for a fixed seed and reports exact
//! (rational equality) outcomes together with its wall-clock time.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::rat;
use crate::algebra::{coefficients, product_expansion, Monomial, Rational, Series, Window};
use crate::kkv::{compute_gv_table, gv_table_cached};
use crate::ray_series::{config_euler, strata_sum, Charge, RayComputation, RayContext};
use crate::sheaf_count::{hilb_euler, js_invariant, multiple_cover_check, MukaiVector};
use crate::vafa_witten::{discrepancies, pperp_from_pairs, theorem_check, VwRay};

pub const KKV_TIME_LIMIT: Duration = Duration::from_secs(10);
pub const RAY_TIME_LIMIT: Duration = Duration::from_secs(30);
pub const VW_TIME_LIMIT: Duration = Duration::from_secs(10);

pub const RAY_H0: [i64; 4] = [0, 1, 2, 3];
pub const RAY_D_MAX: i64 = 3;
pub const RAY_Q: (i64, i64) = (-10, 10);
pub const STRATA_DRAWS: usize = 50;
pub const VW_M_MAX: usize = 6;
pub const VW_DRAWS: usize = 20;
pub const PROPERTY_INSTANCES: usize = 100;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {} ({:.2} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail) = body();
    CriterionResult { id, name, pass, detail, elapsed: start.elapsed() }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id as u64)
}

/// Small random rational: numerator in `-9..=9`, denominator in `1..=6`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

/// KKV table at `h_max = 10`.
pub fn criterion_1() -> CriterionResult {
    timed(1, "kkv-table", || {
        let start = Instant::now();
        let table = match compute_gv_table(10) {
            Ok(t) => t,
            Err(e) => return (false, e.to_string()),
        };
        let took = start.elapsed();
        let mut problems = Vec::new();
        if took >= KKV_TIME_LIMIT {
            problems.push(format!("took {:.2} s", took.as_secs_f64()));
        }
        for h in 0..=10i64 {
            for g in h + 1..=10 {
                if !table.get(g, h).is_zero() {
                    problems.push(format!("n[{g}][{h}] != 0"));
                }
            }
        }
        let w = Window::new().power("q", 0, 10);
        let eta = product_expansion(|_| -24, "q", 10, &w).expect("eta window");
        for (h, c) in coefficients(&eta, "q", 10).into_iter().enumerate() {
            if Rational::from_integer(table.get(0, h as i64)) != c {
                problems.push(format!("n[0][{h}] differs from the y=1 specialization"));
            }
        }
        let spot: Vec<BigInt> = (0..5).map(|h| table.get(0, h)).collect();
        if spot != [1, 24, 324, 3200, 25650].map(BigInt::from) {
            problems.push(format!("spot values {spot:?}"));
        }
        if problems.is_empty() {
            (true, format!("h_max=10 in {:.2} s, integral, triangular, y=1 matches eta^-24", took.as_secs_f64()))
        } else {
            (false, problems.join("; "))
        }
    })
}

fn ray_sweep() -> Result<Vec<RayComputation>, String> {
    let need = RAY_H0
        .iter()
        .map(|&h0| RayContext::new(h0, RAY_D_MAX, RAY_Q.0, RAY_Q.1).map(|c| c.required_h_max()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let gv = gv_table_cached(need.into_iter().max().unwrap_or(0) as usize).map_err(|e| e.to_string())?;
    RAY_H0
        .iter()
        .map(|&h0| {
            let ctx = RayContext::new(h0, RAY_D_MAX, RAY_Q.0, RAY_Q.1).map_err(|e| e.to_string())?;
            RayComputation::new(ctx, &gv).map_err(|e| format!("h0={h0}: {e}"))
        })
        .collect()
}

/// Identity chain on the ray sweep.
pub fn criterion_2() -> CriterionResult {
    timed(2, "identity-chain", || {
        let comps = match ray_sweep() {
            Ok(c) => c,
            Err(e) => return (false, e),
        };
        let mut bad = Vec::new();
        for comp in &comps {
            match comp.identity_report() {
                Ok(r) if r.chain_holds() => {}
                Ok(r) => bad.push(format!("h0={}: {r:?}", comp.context().h0)),
                Err(e) => bad.push(format!("h0={}: {e}", comp.context().h0)),
            }
        }
        if bad.is_empty() {
            (true, format!("h0 in {RAY_H0:?}, d_max={RAY_D_MAX}, q in [{}, {}]: F = -log(1+z_chi) = log(1+z_T), (1+z_chi)(1+z_T) = 1", RAY_Q.0, RAY_Q.1))
        } else {
            (false, bad.join("; "))
        }
    })
}

/// Integrality of `z_chi`, `z_naive`, `z_twistor` over the sweep, with a time bound.
pub fn criterion_3() -> CriterionResult {
    timed(3, "integrality", || {
        let start = Instant::now();
        let comps = match ray_sweep() {
            Ok(c) => c,
            Err(e) => return (false, e),
        };
        let mut bad = Vec::new();
        let mut terms = 0usize;
        for comp in &comps {
            for (name, s) in [("z_chi", comp.z_chi()), ("z_naive", comp.z_naive()), ("z_twistor", comp.z_twistor())] {
                terms += s.len();
                if let Some((m, c)) = s.first_non_integral() {
                    bad.push(format!("h0={} {name} coefficient of {m} is {c}", comp.context().h0));
                }
            }
        }
        let took = start.elapsed();
        if took >= RAY_TIME_LIMIT {
            bad.push(format!("took {:.2} s", took.as_secs_f64()));
        }
        if bad.is_empty() {
            (true, format!("{terms} coefficients integral in {:.2} s", took.as_secs_f64()))
        } else {
            (false, bad.join("; "))
        }
    })
}

/// Strata sum against `-log(1 + sum P Q)`, and the configuration-space recursion.
pub fn criterion_4(seed: u64) -> CriterionResult {
    timed(4, "strata-oracle", || {
        let mut rng = rng_for(seed, 4);
        let w = Window::new()
            .power("Q1", 0, 5)
            .power("Q2", 0, 5)
            .power("Q3", 0, 5)
            .power("t", 0, 5)
            .grading("t");
        let mut bad = Vec::new();
        let mut checked = 0;
        for size in 1..=3usize {
            for _ in 0..STRATA_DRAWS {
                let charges: Vec<Charge> = (0..size)
                    .map(|i| {
                        let name = format!("Q{}", i + 1);
                        let deg = rng.gen_range(1..=2);
                        Charge {
                            label: name.clone(),
                            value: random_rational(&mut rng),
                            monomial: Monomial::new([(name.as_str(), 1), ("t", deg)]),
                        }
                    })
                    .collect();
                let lhs = match strata_sum(&charges, &w) {
                    Ok(s) => s,
                    Err(e) => return (false, e.to_string()),
                };
                let x = Series::from_terms(&w, charges.iter().map(|c| (c.monomial.clone(), c.value.clone())))
                    .expect("charges fit the window");
                let rhs = -&x.log1p_series().expect("graded argument");
                checked += 1;
                if lhs != rhs {
                    bad.push(format!("charges {:?}", charges.iter().map(|c| c.value.to_string()).collect::<Vec<_>>()));
                }
            }
        }
        let mut prev = BigInt::one();
        for k in 1..=6i64 {
            let e = config_euler(k).expect("k >= 1");
            let expected = if k == 1 { BigInt::one() } else { -BigInt::from(k - 1) * &prev };
            if e != expected {
                bad.push(format!("config_euler({k}) = {e}, recursion gives {expected}"));
            }
            prev = e;
        }
        if bad.is_empty() {
            (true, format!("{checked} charge sets of size <= 3 up to total multiplicity 5; e_k recursion for k <= 6"))
        } else {
            (false, bad.join("; "))
        }
    })
}

/// Multiple cover formula for Joyce-Song invariants.
pub fn criterion_5() -> CriterionResult {
    timed(5, "multiple-cover", || {
        let mut bad = Vec::new();
        let mut checked = 0;
        for h0 in 0..=3 {
            for m in 1..=6 {
                for n in (-6..=6).filter(|&n| n != 0) {
                    checked += 1;
                    match multiple_cover_check(m, n, h0) {
                        Ok(r) if r.holds => {}
                        Ok(r) => bad.push(format!("m={m} n={n} h0={h0}: {} vs {}", r.lhs, r.rhs)),
                        Err(e) => bad.push(format!("m={m} n={n} h0={h0}: {e}")),
                    }
                }
            }
        }
        if bad.is_empty() {
            (true, format!("{checked} cases with 1 <= m <= 6, 1 <= |n| <= 6, h0 <= 3"))
        } else {
            (false, bad.join("; "))
        }
    })
}

/// `J(0, b0, 1) = n_{0,h0}`.
pub fn criterion_6() -> CriterionResult {
    timed(6, "yau-zaslow", || {
        let table = match gv_table_cached(4) {
            Ok(t) => t,
            Err(e) => return (false, e.to_string()),
        };
        let mut bad = Vec::new();
        for h0 in 1..=4 {
            let v = MukaiVector::new(0, 1, h0, 1).expect("nonzero");
            let j = js_invariant(&v).value;
            let n = Rational::from_integer(table.get(0, h0));
            if j != n || n != Rational::from_integer(hilb_euler(h0 as usize)) {
                bad.push(format!("h0={h0}: J={j}, n={n}"));
            }
        }
        if bad.is_empty() {
            (true, "J(0,b0,1) = n[0][h0] for h0 = 1..4".into())
        } else {
            (false, bad.join("; "))
        }
    })
}

/// Vafa-Witten pipeline on random rays.
pub fn criterion_7(seed: u64) -> CriterionResult {
    timed(7, "vafa-witten", || {
        let start = Instant::now();
        let mut rng = rng_for(seed, 7);
        let mut runs = 0;
        let mut failed = 0;
        let mut exp_disagree = 0;
        let mut first_failure = None;
        for chi0 in (-5..=5i64).filter(|&c| c != 0) {
            for _ in 0..VW_DRAWS {
                let vw = (0..VW_M_MAX).map(|_| random_rational(&mut rng)).collect();
                let ray = VwRay::new(chi0, vw).expect("chi0 != 0");
                let report = match theorem_check(&ray) {
                    Ok(r) => r,
                    Err(e) => return (false, e.to_string()),
                };
                runs += 1;
                // log-series route against direct composition enumeration
                let agree = pperp_from_pairs(&report.p).map(|pp| pp == report.p_perp).unwrap_or(false);
                if !report.exp_identity || !agree {
                    exp_disagree += 1;
                }
                if !report.mismatches.is_empty() {
                    failed += 1;
                    if first_failure.is_none() {
                        let (m, d) = discrepancies(&report).into_iter().next().expect("nonempty");
                        first_failure = Some(format!("chi0={chi0} M={m}: VW - vw = {d}"));
                    }
                }
            }
        }
        let took = start.elapsed();
        let mut bad = Vec::new();
        if failed > 0 {
            bad.push(format!(
                "VW != vw in {failed}/{runs} rays (first: {})",
                first_failure.unwrap_or_default()
            ));
        }
        if exp_disagree > 0 {
            bad.push(format!("exp identity disagrees in {exp_disagree}/{runs} rays"));
        } else {
            bad.push(format!("exp identity holds in {runs}/{runs} rays"));
        }
        if took >= VW_TIME_LIMIT {
            bad.push(format!("took {:.2} s", took.as_secs_f64()));
        }
        let pass = failed == 0 && exp_disagree == 0 && took < VW_TIME_LIMIT;
        if pass {
            (true, format!("VW = vw for {runs} rays, M_max={VW_M_MAX}, chi0 in +-1..+-5; exp identity agrees"))
        } else {
            (false, bad.join("; "))
        }
    })
}

fn random_graded_series(rng: &mut ChaCha8Rng, w: &Window, constant: bool) -> Series {
    let mut terms = Vec::new();
    if constant {
        terms.push((Monomial::one(), random_rational(rng)));
    }
    for _ in 0..rng.gen_range(1..=5) {
        let q = rng.gen_range(1..=4);
        let x = rng.gen_range(0..=2);
        terms.push((Monomial::new([("q", q), ("x", x)]), random_rational(rng)));
    }
    Series::from_terms(w, terms).expect("terms fit the window")
}

fn random_laurent(rng: &mut ChaCha8Rng, w: &Window) -> Series {
    let terms: Vec<_> = (0..rng.gen_range(0..=6))
        .map(|_| {
            let q = rng.gen_range(-2..=6);
            let x = rng.gen_range(0..=3);
            (Monomial::new([("q", q), ("x", x)]), random_rational(rng))
        })
        .collect();
    Series::from_terms(w, terms).expect("terms fit the window")
}

/// Exp/log round trip, ring axioms, and `prod(1-q^n)^a * prod(1-q^n)^-a = 1`.
pub fn criterion_8(seed: u64) -> CriterionResult {
    timed(8, "algebra-properties", || {
        let mut rng = rng_for(seed, 8);
        let mut bad = Vec::new();

        let graded = Window::new().power("q", 0, 6).power("x", 0, 3).grading("q");
        let one = Series::one(&graded);
        for i in 0..PROPERTY_INSTANCES {
            let s = random_graded_series(&mut rng, &graded, false);
            let round = s.exp_series().and_then(|e| (&e - &one).log1p_series());
            let back = s.log1p_series().and_then(|l| l.exp_series()).map(|e| &e - &one);
            if round.as_ref() != Ok(&s) || back.as_ref() != Ok(&s) {
                bad.push(format!("exp/log round trip failed on instance {i}: {s}"));
                break;
            }
        }

        let laurent = Window::new().laurent("q", -2, 6).power("x", 0, 3);
        for i in 0..PROPERTY_INSTANCES {
            let (a, b, c) = (
                random_laurent(&mut rng, &laurent),
                random_laurent(&mut rng, &laurent),
                random_laurent(&mut rng, &laurent),
            );
            let ok = &a + &b == &b + &a
                && &(&a + &b) + &c == &a + &(&b + &c)
                && &a * &b == &b * &a
                && (&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c)))
                && (&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c)))
                && (&a + &(-&a)).is_zero()
                && (&a * &Series::one(&laurent)).agrees_with(&a);
            if !ok {
                bad.push(format!("ring axioms failed on instance {i}"));
                break;
            }
        }

        let w = Window::new().power("q", 0, 8);
        for i in 0..PROPERTY_INSTANCES {
            let exps: Vec<i64> = (0..8).map(|_| rng.gen_range(-3..=3)).collect();
            let f = product_expansion(|n| exps[n as usize - 1], "q", 8, &w);
            let g = product_expansion(|n| -exps[n as usize - 1], "q", 8, &w);
            match (f, g) {
                (Ok(f), Ok(g)) if &f * &g == Series::one(&w) => {}
                _ => {
                    bad.push(format!("product inverse failed on instance {i}: exponents {exps:?}"));
                    break;
                }
            }
        }

        if bad.is_empty() {
            (true, format!("{PROPERTY_INSTANCES} instances each of exp/log, ring axioms, product inverse"))
        } else {
            (false, bad.join("; "))
        }
    })
}

/// Runs every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(seed),
        criterion_5(),
        criterion_6(),
        criterion_7(seed),
        criterion_8(seed),
    ]
}
