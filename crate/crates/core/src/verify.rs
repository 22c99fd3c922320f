//! Named reproduction checks. The quick profile is a subset of the full
//! one; full adds the larger parameter ranges.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asym::{
    alpha_bracket, alpha_pm_bracket, component_bracket, conjecture1_scan, conjecture2_eval,
    id_closed_form, klp_check, omega_peak_point, s_constant, BracketConfig,
};
use crate::disc::{brute_extreme, brute_plus_minus, exact_discrepancies, point, SigmaSequence};
use crate::hammersley::{c_m, itau_asymptotic_check, itau_vec, HammersleySpec};
use crate::numeric::{div_ln, fmt_f64, fmt_rational, rat, Rational};
use crate::perm::{
    carlitz2, carlitz_partner, faure_omega, fractional_affine, intricate, is_prime, Permutation,
};
use crate::psi::{max_psi, psi, Component, PsiTable};
use crate::report::csv_field;
use crate::search::{naive_search, search, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub profile: Profile,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,status,expected,actual\n");
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{},{status},{},{}",
                c.name,
                csv_field(&c.expected),
                csv_field(&c.actual)
            )
            .expect("string write");
        }
        out
    }
}

pub const SIGMA12: [usize; 12] = [0, 7, 3, 10, 5, 2, 9, 6, 1, 8, 4, 11];
pub const SIGMA12_SWAP: [usize; 12] = [0, 5, 9, 3, 7, 1, 10, 4, 8, 2, 6, 11];
pub const SIGMA36: [usize; 36] = [
    0, 25, 17, 7, 31, 11, 20, 3, 27, 13, 34, 22, 5, 15, 29, 9, 23, 1, 18, 32, 8, 28, 14, 4, 21, 33,
    12, 26, 2, 19, 10, 30, 6, 16, 24, 35,
];
pub const SIGMA60: [usize; 60] = [
    0, 15, 30, 40, 2, 48, 20, 35, 8, 52, 23, 43, 12, 26, 55, 4, 32, 45, 17, 37, 6, 50, 28, 10, 57,
    21, 41, 13, 33, 54, 1, 25, 46, 18, 38, 5, 49, 29, 9, 58, 22, 42, 14, 34, 53, 3, 27, 47, 16, 36,
    7, 51, 19, 44, 31, 11, 56, 24, 39, 59,
];
pub const OMEGA31: [usize; 31] = [
    0, 16, 8, 24, 4, 20, 12, 28, 1, 17, 9, 25, 3, 19, 7, 15, 23, 11, 27, 5, 21, 13, 29, 2, 18, 10,
    26, 6, 22, 14, 30,
];

fn perm(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).expect("listed permutation")
}

fn check(
    name: impl Into<String>,
    expected: impl Into<String>,
    actual: impl Into<String>,
    passed: bool,
) -> Check {
    Check {
        name: name.into(),
        expected: expected.into(),
        actual: actual.into(),
        passed,
    }
}

fn failed(name: &str, err: crate::Error) -> Check {
    check(name, "no error", err.to_string(), false)
}

fn interval(lo: &Rational, hi: &Rational) -> String {
    if lo == hi {
        fmt_rational(lo)
    } else {
        format!("[{}, {}]", fmt_rational(lo), fmt_rational(hi))
    }
}

fn shuffled(rng: &mut ChaCha8Rng, b: usize, zero_first: bool) -> Permutation {
    let mut v: Vec<usize> = (0..b).collect();
    v.shuffle(rng);
    if zero_first {
        let z = v.iter().position(|&x| x == 0).expect("0 present");
        v.swap(0, z);
    }
    Permutation::new(v).expect("shuffled")
}

type Job = (&'static str, bool, fn(&'static str) -> Check);

/// `(name, in quick profile, check)`.
const JOBS: &[Job] = &[
    ("s2_identity_constant", true, s2_identity_constant),
    ("identity_b3_constant", true, identity_b3_constant),
    ("identity_closed_forms_b2_b12", true, |n| {
        closed_forms(n, 12)
    }),
    ("identity_closed_forms_b2_b40", false, |n| {
        closed_forms(n, 40)
    }),
    ("sigma12_bracket", true, sigma12_bracket),
    ("sigma12_max_psi", true, sigma12_max_psi),
    ("sigma12_swapped_pm_sum", true, sigma12_swapped_pm_sum),
    ("sigma36_bracket", true, sigma36_bracket),
    ("sigma60_psi_minus_zero", true, psi_minus_zero_b60),
    ("sigma60_alpha_plus", true, alpha_plus_b60),
    ("sigma60_s_star", true, s_star_b60),
    ("omega_listed", true, omega_listed),
    ("omega_powers_of_two", true, omega_powers_of_two),
    ("omega_peaks", true, omega_peaks),
    ("omega_maxima_n2_n7", true, |n| conjecture1(n, 2..=7)),
    ("omega_maxima_n8_n10", false, |n| conjecture1(n, 8..=10)),
    ("fractional_affine_strict_p5", true, |n| {
        fractional_strict(n, 5)
    }),
    ("fractional_affine_strict_p7", true, |n| {
        fractional_strict(n, 7)
    }),
    ("fractional_affine_strict_p11", true, |n| {
        fractional_strict(n, 11)
    }),
    ("fractional_affine_strict_p13", true, |n| {
        fractional_strict(n, 13)
    }),
    ("carlitz_partner_relation", true, carlitz_relation),
    ("klp_bounds_m8", true, |n| klp(n, 8, 10)),
    ("klp_bounds_m10", false, |n| klp(n, 10, 100)),
    ("hammersley_cm_243", true, |n| hammersley(n, 243)),
    ("hammersley_cm_3125", false, |n| hammersley(n, 3125)),
    ("hammersley_itau_limit_b3", true, itau_limit),
    ("fibonacci_bracket_n8", true, |n| fibonacci_bracket(n, 8)),
    ("fibonacci_bracket_n9", true, |n| fibonacci_bracket(n, 9)),
    ("fibonacci_bracket_n10", true, |n| fibonacci_bracket(n, 10)),
    ("search_completeness_b6", true, |n| search_complete(n, 6)),
    ("search_completeness_b8", false, |n| search_complete(n, 8)),
    ("lemma_intrication", true, lemma_intrication),
    ("lemma_symmetry", true, lemma_symmetry),
    ("lemma_swapping", true, lemma_swapping),
    ("oracle_equivalence_n100", true, |n| {
        oracle(n, 100, &[2, 3, 5], 2)
    }),
    ("oracle_equivalence_n500", false, |n| {
        oracle(n, 500, &[2, 3, 5, 9, 12], 5)
    }),
];

pub fn check_names(profile: Profile) -> Vec<&'static str> {
    JOBS.iter()
        .filter(|j| profile == Profile::Full || j.1)
        .map(|j| j.0)
        .collect()
}

/// Runs every check of the profile in listed order.
pub fn run(profile: Profile) -> Report {
    run_selected(profile, |_| true)
}

/// Runs the checks of the profile whose names pass `filter`.
pub fn run_selected(profile: Profile, filter: impl Fn(&str) -> bool) -> Report {
    let checks = JOBS
        .iter()
        .filter(|j| (profile == Profile::Full || j.1) && filter(j.0))
        .map(|(name, _, f)| f(name))
        .collect();
    Report { profile, checks }
}

fn s2_identity_constant(name: &'static str) -> Check {
    match alpha_bracket(&Permutation::identity(2).expect("base 2"), 6, 2) {
        Ok(br) => {
            let s = br.s();
            let digits = format!("{:.6}", s.lo_f64);
            let shown = &digits[..6];
            check(
                name,
                "alpha = 1/3, s = 1/(3 log 2) = 0.4808...",
                format!(
                    "alpha = {}, s in [{}, {}]",
                    interval(&br.lower, &br.upper),
                    fmt_f64(s.lo_f64),
                    fmt_f64(s.hi_f64)
                ),
                br.is_exact() && br.lower == rat(1, 3) && shown == "0.4808",
            )
        }
        Err(e) => failed(name, e),
    }
}

fn identity_b3_constant(name: &'static str) -> Check {
    match alpha_bracket(&Permutation::identity(3).expect("base 3"), 6, 2) {
        Ok(br) => {
            let s = br.s();
            check(
                name,
                "alpha = 1/2, s = 1/(2 log 3)",
                format!(
                    "alpha = {}, s in [{}, {}]",
                    interval(&br.lower, &br.upper),
                    fmt_f64(s.lo_f64),
                    fmt_f64(s.hi_f64)
                ),
                br.is_exact() && br.lower == rat(1, 2),
            )
        }
        Err(e) => failed(name, e),
    }
}

fn closed_forms(name: &'static str, max_b: usize) -> Check {
    let bad: Vec<String> = (2..=max_b)
        .into_par_iter()
        .filter_map(|b| {
            let id = Permutation::identity(b).expect("valid base");
            let want = id_closed_form(b).expect("valid base").alpha;
            match alpha_bracket(&id, 6, 2) {
                Ok(br) if br.is_exact() && br.lower == want => None,
                Ok(br) => Some(format!("b={b}: {}", interval(&br.lower, &br.upper))),
                Err(e) => Some(format!("b={b}: {e}")),
            }
        })
        .collect();
    check(
        name,
        format!("exact (b-1)/4 or b^2/(4(b+1)) for b = 2..{max_b}"),
        if bad.is_empty() {
            "all exact".to_string()
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    )
}

fn sigma12_bracket(name: &'static str) -> Check {
    match s_constant(&perm(&SIGMA12)) {
        Ok(s) => check(
            name,
            "s bracket meets (0.375, 0.38)",
            format!("[{}, {}]", fmt_f64(s.lo_f64), fmt_f64(s.hi_f64)),
            s.intersects(0.375, 0.38),
        ),
        Err(e) => failed(name, e),
    }
}

fn sigma12_max_psi(name: &'static str) -> Check {
    let sigma = perm(&SIGMA12);
    let (m, _) = max_psi(&sigma, Component::Total);
    let via_max = div_ln(&m, 12).1;
    let config = BracketConfig {
        n_max: 2,
        certificate: false,
        ..BracketConfig::default()
    };
    let f2 =
        component_bracket(&PsiTable::new(&sigma), Component::Total, &config).map(|b| b.s().hi_f64);
    check(
        name,
        "max psi / log 12 < 0.40",
        format!(
            "max psi = {}, max psi / log 12 <= {}; max F_2 / (2 log 12) <= {}",
            fmt_rational(&m),
            fmt_f64(via_max),
            f2.map_or_else(|e| e.to_string(), fmt_f64)
        ),
        via_max < 0.40,
    )
}

fn sigma12_swapped_pm_sum(name: &'static str) -> Check {
    match alpha_pm_bracket(&perm(&SIGMA12_SWAP), &BracketConfig::default()) {
        Ok((p, m)) => {
            let lo = &p.lower + &m.lower;
            let hi = &p.upper + &m.upper;
            let target = rat(1919, 1727);
            check(
                name,
                "alpha+ + alpha- contains 1919/1727",
                interval(&lo, &hi),
                lo <= target && target <= hi,
            )
        }
        Err(e) => failed(name, e),
    }
}

fn sigma36_bracket(name: &'static str) -> Check {
    match alpha_bracket(&perm(&SIGMA36), 4, 2) {
        Ok(br) => {
            let s = br.s();
            let ok = br.contains(&rat(46, 35))
                && br.width() <= rat(1, 20)
                && s.lo_f64 >= 0.3467
                && s.hi_f64 <= 0.3867;
            check(
                name,
                "contains 46/35, width <= 1/20, s within 0.3667 +- 0.02",
                format!(
                    "{}, s in [{}, {}]",
                    interval(&br.lower, &br.upper),
                    fmt_f64(s.lo_f64),
                    fmt_f64(s.hi_f64)
                ),
                ok,
            )
        }
        Err(e) => failed(name, e),
    }
}

fn psi_minus_zero_b60(name: &'static str) -> Check {
    let t = PsiTable::new(&perm(&SIGMA60));
    let (m, _) = t.max_on_grid(Component::Minus);
    check(name, "max psi- = 0", fmt_rational(&m), m == rat(0, 1))
}

fn b60_plus() -> crate::Result<crate::asym::AlphaBracket> {
    let config = BracketConfig {
        n_max: 2,
        cycle_depth: 2,
        ..BracketConfig::default()
    };
    component_bracket(&PsiTable::new(&perm(&SIGMA60)), Component::Plus, &config)
}

fn alpha_plus_b60(name: &'static str) -> Check {
    match b60_plus() {
        Ok(br) => {
            let target = rat(32209, 17700);
            check(
                name,
                "alpha+ bracket contains 32209/17700, width <= 1/10",
                format!("{} (cycle {:?})", interval(&br.lower, &br.upper), br.cycle),
                br.contains(&target) && br.width() <= rat(1, 10),
            )
        }
        Err(e) => failed(name, e),
    }
}

fn s_star_b60(name: &'static str) -> Check {
    match b60_plus() {
        Ok(br) => {
            // alpha- is zero, so s* = alpha+ / (2 log 60).
            let s = br.s().scaled(&rat(1, 2));
            let ok = (s.lo_f64 - 0.222223).abs() <= 0.01 && (s.hi_f64 - 0.222223).abs() <= 0.01;
            check(
                name,
                "s* within 0.01 of 0.222223",
                format!("[{}, {}]", fmt_f64(s.lo_f64), fmt_f64(s.hi_f64)),
                ok,
            )
        }
        Err(e) => failed(name, e),
    }
}

fn omega_listed(name: &'static str) -> Check {
    let listed: [(usize, Vec<usize>); 4] = [
        (3, vec![0, 1, 2]),
        (7, vec![0, 4, 1, 3, 5, 2, 6]),
        (15, vec![0, 8, 4, 12, 1, 9, 3, 7, 11, 5, 13, 2, 10, 6, 14]),
        (31, OMEGA31.to_vec()),
    ];
    let bad: Vec<String> = listed
        .iter()
        .filter(|(b, v)| {
            faure_omega(*b)
                .map(|p| p.images() != v.as_slice())
                .unwrap_or(true)
        })
        .map(|(b, _)| b.to_string())
        .collect();
    check(
        name,
        "omega_3, omega_7, omega_15, omega_31 as listed",
        format!("mismatched bases: {bad:?}"),
        bad.is_empty(),
    )
}

fn omega_powers_of_two(name: &'static str) -> Check {
    let bad: Vec<u32> = (1..=10u32)
        .filter(|&n| {
            let b = 1usize << n;
            let w = faure_omega(b).expect("valid base");
            (0..b).any(|k| w.apply(k) != (k.reverse_bits() >> (usize::BITS - n)))
        })
        .collect();
    check(
        name,
        "omega_{2^n}(k) = bit reversal of k, n <= 10",
        format!("mismatched n: {bad:?}"),
        bad.is_empty(),
    )
}

fn omega_peaks(name: &'static str) -> Check {
    let bad: Vec<String> = (0..=6u32)
        .filter_map(|m| {
            let t = PsiTable::new(&faure_omega(9 << m).expect("valid base"));
            let v = t.eval(Component::Total, &omega_peak_point(m));
            (v != rat(m as i64 + 3, 3)).then(|| format!("m={m}: {}", fmt_rational(&v)))
        })
        .collect();
    check(
        name,
        "psi(x_m) = (m+3)/3 for m = 0..6",
        if bad.is_empty() {
            "all equal".into()
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    )
}

fn conjecture1(name: &'static str, ns: std::ops::RangeInclusive<usize>) -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in ns {
        match conjecture1_scan(n) {
            Ok(s) => {
                let top = s.d_of(s.top_base()).cloned().unwrap_or_else(|| rat(-1, 1));
                let argmin_ok = s.predicted_argmin().is_none_or(|b| b == s.argmin);
                ok &= s.formula_holds() && argmin_ok;
                notes.push(format!(
                    "n={n}: d={} argmin={}",
                    fmt_rational(&top),
                    s.argmin
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("n={n}: {e}"));
            }
        }
    }
    check(
        name,
        "d at 2^n-1 follows n/2-1/3 (odd-n variant); argmin 9*2^(n-4)",
        notes.join("; "),
        ok,
    )
}

fn fractional_strict(name: &'static str, p: u64) -> Check {
    let (id_max, _) = max_psi(
        &Permutation::identity(p as usize).expect("prime base"),
        Component::Total,
    );
    let mut reaching = 0;
    let mut total = 0;
    let mut example = None;
    for a0 in 1..p {
        for a1 in 0..p {
            for a2 in 0..p {
                let pi = fractional_affine(p, a0, a1, a2).expect("valid parameters");
                total += 1;
                if max_psi(&pi, Component::Total).0 >= id_max {
                    reaching += 1;
                    example.get_or_insert((a0, a1, a2));
                }
            }
        }
    }
    check(
        name,
        format!(
            "every fractional-affine max psi < {}",
            fmt_rational(&id_max)
        ),
        format!("{reaching} of {total} reach the identity maximum; first (a0,a1,a2) = {example:?}"),
        reaching == 0,
    )
}

fn carlitz_relation(name: &'static str) -> Check {
    let primes: Vec<u64> = (5..=31).filter(|&p| is_prime(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let p = primes[rng.random_range(0..primes.len())];
        let (a0, a1, a2) = (
            rng.random_range(1..p),
            rng.random_range(0..p),
            rng.random_range(1..p),
        );
        let pi = fractional_affine(p, a0, a1, a2).expect("valid parameters");
        let c = carlitz_partner(p, a0, a1, a2).expect("valid parameters");
        let t = carlitz2(p, c.a0, c.a1, c.a2, 0).expect("valid parameters");
        let (x1, x2) = (c.x1 as usize, c.x2 as usize);
        let holds = (0..p as usize).all(|x| {
            let want = if x == x1 {
                t.apply(x2)
            } else if x == x2 {
                t.apply(x1)
            } else {
                t.apply(x)
            };
            pi.apply(x) == want
        });
        if !holds {
            bad.push(format!("({p},{a0},{a1},{a2})"));
        }
    }
    check(
        name,
        "pi agrees with its partner off {X1, X2} and swaps there",
        format!("{} failures {bad:?}", bad.len()),
        bad.is_empty(),
    )
}

fn klp(name: &'static str, m: usize, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
    let id = Permutation::identity(2).expect("base 2");
    let tau = Permutation::tau(2).expect("base 2");
    let vecs: Vec<Vec<Permutation>> = (0..count)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        tau.clone()
                    } else {
                        id.clone()
                    }
                })
                .collect()
        })
        .collect();
    let bad: Vec<String> = vecs
        .par_iter()
        .filter_map(|v| match klp_check(v, m) {
            Ok(r) if r.holds() => None,
            Ok(r) => Some(format!(
                "S={} T={} D*={}",
                r.stats.s,
                r.stats.t,
                fmt_rational(&r.max_star)
            )),
            Err(e) => Some(e.to_string()),
        })
        .collect();
    check(
        name,
        format!("both bounds hold for {count} vectors at m = {m}"),
        format!("{} failures {bad:?}", bad.len()),
        bad.is_empty(),
    )
}

fn hammersley(name: &'static str, max_points: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(max_points as u64);
    let mut specs = Vec::new();
    for b in [2usize, 3, 5] {
        let mut m = 1;
        while b.pow(m as u32) <= max_points {
            specs.push(itau_vec(b, m).expect("m >= 1"));
            for _ in 0..3 {
                specs.push((0..m).map(|_| shuffled(&mut rng, b, false)).collect());
            }
            m += 1;
        }
    }
    let results: Vec<Result<Rational, String>> = specs
        .par_iter()
        .map(|v| {
            let spec = HammersleySpec::new(v.clone()).map_err(|e| e.to_string())?;
            c_m(&spec).map(|r| r.2).map_err(|e| e.to_string())
        })
        .collect();
    let mut lo = rat(2, 1);
    let mut hi = rat(0, 1);
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(c) => {
                lo = lo.min(c.clone());
                hi = hi.max(c);
            }
            Err(e) => errors.push(e),
        }
    }
    let ok = errors.is_empty() && lo >= rat(0, 1) && hi <= rat(2, 1);
    check(
        name,
        format!("c_m in [0, 2] for b in {{2,3,5}}, b^m <= {max_points}"),
        format!(
            "{} sets, c_m in [{}, {}], errors {errors:?}",
            specs.len(),
            fmt_rational(&lo),
            fmt_rational(&hi)
        ),
        ok,
    )
}

fn itau_limit(name: &'static str) -> Check {
    match itau_asymptotic_check(3, 8) {
        Ok(r) => {
            let last = r.rows.last().expect("eight rows");
            check(
                name,
                format!(
                    "term/(m log 3) within 15% of {} at m = 8",
                    fmt_f64(r.limit_f64.0)
                ),
                format!(
                    "ratio in [{}, {}], relative gap {}",
                    fmt_f64(last.ratio.0),
                    fmt_f64(last.ratio.1),
                    fmt_f64(r.last_relative_gap())
                ),
                r.last_relative_gap() < 0.15,
            )
        }
        Err(e) => failed(name, e),
    }
}

fn fibonacci_bracket(name: &'static str, n: usize) -> Check {
    match conjecture2_eval(n, 3) {
        Ok(r) => {
            let published = r
                .published
                .map_or("none".to_string(), |(l, u)| format!("[{l}, {u}]"));
            check(
                name,
                published,
                format!("[{}, {}]", r.rendered.0, r.rendered.1),
                r.matches_table() == Some(true),
            )
        }
        Err(e) => failed(name, e),
    }
}

fn search_complete(name: &'static str, max_b: usize) -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for b in 2..=max_b {
        let (id_max, _) = max_psi(
            &Permutation::identity(b).expect("valid base"),
            Component::Total,
        );
        for t in [id_max.clone(), &id_max * rat(9, 10), &id_max * rat(3, 4)] {
            let naive: Result<BTreeSet<Vec<usize>>, _> = naive_search(b, &t, Component::Total)
                .map(|v| v.iter().map(|p| p.images().to_vec()).collect());
            let cfg = SearchConfig {
                symmetry_reduction: false,
                ..SearchConfig::new(b, t.clone())
            };
            let found = search(&cfg).map(|r| {
                (
                    r.complete,
                    r.survivors
                        .iter()
                        .map(|s| s.perm.images().to_vec())
                        .collect(),
                )
            });
            match (naive, found) {
                (Ok(n), Ok((true, f))) if n == f => {}
                (n, f) => {
                    ok = false;
                    notes.push(format!(
                        "b={b} T={}: naive {:?} search {:?}",
                        fmt_rational(&t),
                        n.map(|s| s.len()),
                        f.map(|s| s.1.len())
                    ));
                }
            }
        }
    }
    check(
        name,
        format!("search = enumeration for b = 2..{max_b} at 3 thresholds"),
        if notes.is_empty() {
            "all equal".into()
        } else {
            notes.join("; ")
        },
        ok,
    )
}

fn lemma_intrication(name: &'static str) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let pairs = [(2usize, 3usize), (3, 4), (2, 9)];
    let mut bad = 0;
    for i in 0..120 {
        let (b, c) = pairs[i % 3];
        let (s, t) = (shuffled(&mut rng, b, false), shuffled(&mut rng, c, false));
        let prod = PsiTable::new(&intricate(&s, &t));
        let (ts, tt) = (PsiTable::new(&s), PsiTable::new(&t));
        let holds = (0..(b * c) as i64).all(|k| {
            let x = rat(k, (b * c) as i64);
            Component::ALL.iter().all(|&comp| {
                prod.eval(comp, &x) == ts.eval(comp, &(&x * rat(c as i64, 1))) + tt.eval(comp, &x)
            })
        });
        let whole = prod.function(Component::Total)
            == ts
                .function(Component::Total)
                .scale_arg(c)
                .add(&tt.function(Component::Total));
        bad += usize::from(!(holds && whole));
    }
    check(
        name,
        "psi of an intricated pair is the sum, 120 cases",
        format!("{bad} failures"),
        bad == 0,
    )
}

fn lemma_symmetry(name: &'static str) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut bad = 0;
    for _ in 0..120 {
        let b = rng.random_range(3..=16);
        let sigma = shuffled(&mut rng, b, false);
        let a = rng.random_range(1..b);
        let base = psi(&sigma).total;
        let ok = psi(&sigma.shift(a).expect("valid shift")).total == base
            && psi(&sigma.reflect()).total == base;
        bad += usize::from(!ok);
    }
    check(
        name,
        "psi unchanged by shift and reflection, 120 cases",
        format!("{bad} failures"),
        bad == 0,
    )
}

fn lemma_swapping(name: &'static str) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut bad = 0;
    for _ in 0..120 {
        let b = rng.random_range(2..=16);
        let sigma = shuffled(&mut rng, b, false);
        let s = psi(&sigma);
        let w = psi(&sigma.swapped());
        bad += usize::from(!(w.plus == s.minus && w.minus == s.plus));
    }
    check(
        name,
        "tau after sigma exchanges psi+ and psi-, 120 cases",
        format!("{bad} failures"),
        bad == 0,
    )
}

fn oracle(name: &'static str, n_max: u128, bases: &[usize], per_base: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(n_max as u64);
    let seqs: Vec<SigmaSequence> = bases
        .iter()
        .flat_map(|&b| {
            (0..per_base)
                .map(|_| shuffled(&mut rng, b, true))
                .collect::<Vec<_>>()
        })
        .map(SigmaSequence::constant)
        .collect();
    let bad: Vec<String> = seqs
        .par_iter()
        .flat_map(|seq| {
            let pts: Vec<Rational> = (0..n_max)
                .map(|i| {
                    point(seq, i, 64)
                        .exact()
                        .cloned()
                        .expect("constant rule is exact")
                })
                .collect();
            (1..=n_max)
                .into_par_iter()
                .filter_map(|n| {
                    let d = exact_discrepancies(seq, n).ok()?;
                    let prefix = &pts[..n as usize];
                    let (bp, bm) = brute_plus_minus(prefix).ok()?;
                    let be = brute_extreme(prefix).ok()?;
                    let bs = bp.clone().max(bm.clone());
                    let same = d.plus.exact() == Some(&bp)
                        && d.minus.exact() == Some(&bm)
                        && d.extreme.exact() == Some(&be)
                        && d.star.exact() == Some(&bs);
                    (!same).then(|| format!("b={} N={n}", seq.base()))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    check(
        name,
        format!("exact = brute for N <= {n_max}, bases {bases:?}"),
        format!(
            "{} mismatches {:?}",
            bad.len(),
            bad.iter().take(5).collect::<Vec<_>>()
        ),
        bad.is_empty(),
    )
}
