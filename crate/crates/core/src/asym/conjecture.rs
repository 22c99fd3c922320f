//! Data behind the two conjectures on ω permutations and Fibonacci-linear
//! permutations. Scans report what they find; only ranges already
//! verified elsewhere are treated as checks.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::numeric::{div_ln, Rational};
use crate::perm::{affine_unit, fibonacci, omega_table, z_seq, Permutation};
use crate::psi::{f_n_eval_periodic, grid_values, Component, PsiTable};

#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture1Row {
    pub base: usize,
    /// `d_b = max ψ_b^ω`.
    pub d: Rational,
    /// Enclosure of `d_b / log b`.
    pub ratio: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture1Scan {
    pub n: usize,
    pub rows: Vec<Conjecture1Row>,
    /// Bases minimizing / maximizing `d_b / log b` in `[2^{n−1}, 2^n − 1]`.
    pub argmin: usize,
    pub argmax: usize,
    /// Whether the enclosures separate the extremal base from all others.
    pub argmin_certain: bool,
    pub argmax_certain: bool,
    /// Predicted `d` at `2^n − 1`.
    pub predicted: Rational,
}

impl Conjecture1Scan {
    pub fn top_base(&self) -> usize {
        (1 << self.n) - 1
    }

    pub fn d_of(&self, base: usize) -> Option<&Rational> {
        self.rows.iter().find(|r| r.base == base).map(|r| &r.d)
    }

    pub fn formula_holds(&self) -> bool {
        self.d_of(self.top_base()) == Some(&self.predicted)
    }

    /// `9·2^{n−4}`, defined for n ≥ 4.
    pub fn predicted_argmin(&self) -> Option<usize> {
        (self.n >= 4).then(|| 9 << (self.n - 4))
    }
}

/// `n/2 − 1/3` for even n, `n/2 − 1/3 − 1/(6·(2^n − 1))` for odd n.
pub fn predicted_top(n: usize) -> Rational {
    let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let base = r(n as i64, 2) - r(1, 3);
    if n.is_multiple_of(2) {
        base
    } else {
        base - r(1, 6 * ((1i64 << n) - 1))
    }
}

fn max_total(perm: &Permutation) -> Rational {
    let (plus, minus) = grid_values(perm);
    let best = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| p + m)
        .max()
        .expect("nonempty grid");
    Rational::new(best.into(), perm.base().into())
}

pub fn conjecture1_scan(n: usize) -> Result<Conjecture1Scan> {
    if !(2..=10).contains(&n) {
        return Err(invalid(format!("n = {n} is outside 2..=10")));
    }
    let lo = 1usize << (n - 1);
    let hi = (1usize << n) - 1;
    let omegas = omega_table(hi);
    let rows: Vec<Conjecture1Row> = (lo..=hi)
        .into_par_iter()
        .map(|b| {
            let d = max_total(&omegas[b - 2]);
            let ratio = div_ln(&d, b);
            Conjecture1Row { base: b, d, ratio }
        })
        .collect();
    let mid = |r: &Conjecture1Row| 0.5 * (r.ratio.0 + r.ratio.1);
    let min_row = rows
        .iter()
        .min_by(|a, b| mid(a).total_cmp(&mid(b)))
        .expect("nonempty");
    let max_row = rows
        .iter()
        .max_by(|a, b| mid(a).total_cmp(&mid(b)))
        .expect("nonempty");
    let argmin_certain = rows
        .iter()
        .all(|r| r.base == min_row.base || min_row.ratio.1 < r.ratio.0);
    let argmax_certain = rows
        .iter()
        .all(|r| r.base == max_row.base || r.ratio.1 < max_row.ratio.0);
    Ok(Conjecture1Scan {
        n,
        argmin: min_row.base,
        argmax: max_row.base,
        argmin_certain,
        argmax_certain,
        predicted: predicted_top(n),
        rows,
    })
}

/// `x_m = 3/9 + Σ_{i=1}^{m} (−1)^i / (9·2^i)`, where `ψ^ω` in base `9·2^m`
/// reaches `(m+3)/3`.
pub fn omega_peak_point(m: u32) -> Rational {
    let mut x = Rational::new(1.into(), 3.into());
    for i in 1..=m {
        let term = Rational::new(1.into(), (9i64 << i).into());
        x = if i % 2 == 1 { x - term } else { x + term };
    }
    x
}

/// Published brackets `(n, p_n, lower, upper)` for `s` of the Fibonacci-linear
/// permutations.
pub const FIBONACCI_BRACKETS: [(usize, u64, &str, &str); 9] = [
    (8, 21, "0.4269", "0.4693"),
    (9, 34, "0.4382", "0.4588"),
    (10, 55, "0.4159", "0.4538"),
    (11, 89, "0.4050", "0.4506"),
    (12, 144, "0.4221", "0.4472"),
    (13, 233, "0.4301", "0.4441"),
    (14, 377, "0.4160", "0.4418"),
    (15, 610, "0.4086", "0.43991"),
    (16, 987, "0.4202", "0.4383"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Conjecture2Report {
    pub n: usize,
    pub p: u64,
    pub multiplier: u64,
    pub max_psi: Rational,
    pub max_at_z_n2: bool,
    pub max_at_z_n1: bool,
    /// `ψ(x̂)` for `x̂ = z(n−2)/(p−1)`, checked against the cycle repeated up to `m_max` times.
    pub lower: Rational,
    pub s_lower: (f64, f64),
    pub s_upper: (f64, f64),
    /// Our bracket truncated to the published precision (lower rounded
    /// down, upper rounded up), next to the published strings.
    pub rendered: (String, String),
    pub published: Option<(&'static str, &'static str)>,
}

impl Conjecture2Report {
    pub fn matches_table(&self) -> Option<bool> {
        self.published
            .map(|(lo, hi)| self.rendered.0 == lo && self.rendered.1 == hi)
    }
}

fn decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, f)| f.len())
}

fn round_dir(x: f64, digits: usize, up: bool) -> String {
    let scale = 10f64.powi(digits as i32);
    let v = if up {
        (x * scale).ceil()
    } else {
        (x * scale).floor()
    };
    format!("{:.*}", digits, v / scale)
}

pub fn conjecture2_eval(n: usize, m_max: usize) -> Result<Conjecture2Report> {
    if !(8..=16).contains(&n) {
        return Err(invalid(format!("n = {n} is outside 8..=16")));
    }
    let p = fibonacci(n).to_u64().expect("small");
    let a = fibonacci(n - 1).to_u64().expect("small");
    let mu = affine_unit(p, a, 0)?;
    let table = PsiTable::new(&mu);
    let (max_psi, _) = table.max_on_grid(Component::Total);
    let z2 = z_seq(n - 2).to_u64().expect("small");
    let z1 = z_seq(n - 1).to_u64().expect("small");
    if z2 >= p || z1 >= p {
        return Err(invalid(format!(
            "z values {z2}, {z1} are not digits in base {p}"
        )));
    }
    let at = |z: u64| table.eval(Component::Total, &Rational::new(z.into(), p.into()));
    let lower = f_n_eval_periodic(&table, Component::Total, &[z2 as usize], m_max.max(1))?;
    let s_lower = div_ln(&lower, p as usize);
    let s_upper = div_ln(&max_psi, p as usize);
    let published = FIBONACCI_BRACKETS
        .iter()
        .find(|t| t.0 == n)
        .map(|t| (t.2, t.3));
    let (dl, du) = published.map_or((4, 4), |(l, u)| (decimals(l), decimals(u)));
    let rendered = (
        round_dir(s_lower.0, dl, false),
        round_dir(s_upper.1, du, true),
    );
    Ok(Conjecture2Report {
        n,
        p,
        multiplier: a,
        max_at_z_n2: at(z2) == max_psi,
        max_at_z_n1: at(z1) == max_psi,
        max_psi,
        lower,
        s_lower,
        s_upper,
        rendered,
        published,
    })
}
