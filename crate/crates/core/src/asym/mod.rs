//! Asymptotic constants: certified brackets for α = lim max F_n / n and
//! the constants s = α / log b derived from it.
//!
//! Lower bounds come from periodic points. If `x̂` repeats a digit cycle
//! of length q, then `T^q x̂ = x̂` for `T(x) = {b·x}`, so
//! `F_{mq}(x̂) = m·F_q(x̂)` and `max F_{mq}/(mq) ≥ F_q(x̂)/q` for every m.
//! Since `max F_n / n` converges to α, `α ≥ F_q(x̂)/q`.
//!
//! Upper bounds are `max F_n / n` for each computed n (every one of them
//! is at least α) and, when enabled, a potential certificate
//! (see [`certificate`]).

pub mod certificate;
mod conjecture;
mod klp;

pub use certificate::{certify, Certificate};
pub use conjecture::{
    conjecture1_scan, conjecture2_eval, omega_peak_point, predicted_top, Conjecture1Row,
    Conjecture1Scan, Conjecture2Report, FIBONACCI_BRACKETS,
};
pub use klp::{klp_check, klp_stats, KlpReport, KlpStats};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numeric::{div_ln, pow_i128, Rational};
use crate::perm::{continued_fraction, Permutation};
use crate::psi::{f_n_eval_periodic, f_n_max_prefix, Component, PsiTable};

/// Cycle scans stop growing the cycle length past this many candidates.
pub const CYCLE_LIMIT: i128 = 20_000_000;

/// Default node budget per n for the F_n search.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketConfig {
    pub n_max: usize,
    pub cycle_depth: usize,
    pub budget: u64,
    pub certificate: bool,
    /// Extra preimage rounds for the certificate nodes.
    pub refine_levels: usize,
    /// Additional cycles to try for the lower bound (most significant digit first).
    pub seeds: Vec<Vec<usize>>,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            n_max: 4,
            cycle_depth: 3,
            budget: DEFAULT_BUDGET,
            certificate: true,
            refine_levels: 0,
            seeds: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBracket {
    pub perm: Permutation,
    pub component: Component,
    /// `F_q(x̂)/q` for the best cycle found.
    pub lower: Rational,
    pub cycle: Vec<usize>,
    /// `min(fn_upper, certificate)`.
    pub upper: Rational,
    /// `min_{n ≤ n_reached} max F_n / n`.
    pub fn_upper: Rational,
    /// Smallest n attaining `fn_upper`.
    pub n: usize,
    /// Largest n whose maximum was computed; below `n_max` if the budget ran out.
    pub n_reached: usize,
    pub certificate: Option<Rational>,
    /// Longest cycle length fully scanned.
    pub cycle_depth: usize,
}

impl AlphaBracket {
    pub fn base(&self) -> usize {
        self.perm.base()
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Certified float enclosure of `[lower, upper] / log b`.
    pub fn s(&self) -> LogBracket {
        LogBracket::new(self.base(), self.lower.clone(), self.upper.clone())
    }
}

/// `lo / log b ≤ s ≤ hi / log b`, with an outward-rounded float rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBracket {
    pub base: usize,
    pub lo: Rational,
    pub hi: Rational,
    pub lo_f64: f64,
    pub hi_f64: f64,
}

impl LogBracket {
    pub fn new(base: usize, lo: Rational, hi: Rational) -> LogBracket {
        let lo_f64 = div_ln(&lo, base).0;
        let hi_f64 = div_ln(&hi, base).1;
        LogBracket {
            base,
            lo,
            hi,
            lo_f64,
            hi_f64,
        }
    }

    pub fn scaled(&self, factor: &Rational) -> LogBracket {
        LogBracket::new(self.base, &self.lo * factor, &self.hi * factor)
    }

    pub fn intersects(&self, lo: f64, hi: f64) -> bool {
        self.lo_f64 < hi && lo < self.hi_f64
    }
}

/// Best periodic point with cycle length at most `depth`: returns
/// `(value, cycle, depth actually scanned)`. Ties keep the shortest cycle,
/// then the smallest cycle numerator.
pub fn best_cycle(
    table: &PsiTable,
    comp: Component,
    depth: usize,
) -> Result<(Rational, Vec<usize>, usize)> {
    if depth == 0 {
        return Err(invalid("cycle depth must be at least 1"));
    }
    let b = table.base();
    // (scaled sum, period·q, q, c)
    let mut best: Option<(i128, i128, u32, i128)> = None;
    let mut scanned = 0;
    for q in 1..=depth as u32 {
        let Some(period) = pow_i128(b, q).map(|p| p - 1).filter(|p| *p <= CYCLE_LIMIT) else {
            break;
        };
        let local = (0..period)
            .into_par_iter()
            .map(|c| (crate::psi::periodic_scaled(table, comp, c, q, period), c))
            .reduce(
                || (i128::MIN, 0),
                |x, y| {
                    if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                        y
                    } else {
                        x
                    }
                },
            );
        let cand = (local.0, period * q as i128, q, local.1);
        best = Some(match best {
            None => cand,
            Some(cur) => {
                // Compare cand.0 / cand.1 with cur.0 / cur.1.
                if cand.0 * cur.1 > cur.0 * cand.1 {
                    cand
                } else {
                    cur
                }
            }
        });
        scanned = q as usize;
    }
    let (sum, den, q, c) = best
        .ok_or_else(|| Error::ResourceLimit(format!("cycles in base {b} exceed the scan cap")))?;
    let mut cycle = vec![0usize; q as usize];
    let mut rest = c;
    for slot in cycle.iter_mut().rev() {
        *slot = (rest % b as i128) as usize;
        rest /= b as i128;
    }
    let value = Rational::new(sum.into(), (den * b as i128).into());
    Ok((value, cycle, scanned))
}

/// The orbit `x̂, T x̂, …` of the periodic point with the given cycle.
pub fn cycle_orbit(b: usize, cycle: &[usize]) -> Vec<Rational> {
    let q = cycle.len() as u32;
    let period = num_traits::pow(num_bigint::BigInt::from(b), q as usize) - 1;
    let mut c = cycle
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, &d| acc * b + d);
    let mut out = Vec::with_capacity(cycle.len());
    for _ in 0..q {
        c %= &period;
        out.push(Rational::new(c.clone(), period.clone()));
        c *= b;
    }
    out
}

pub fn alpha_bracket(
    sigma: &Permutation,
    n_max: usize,
    cycle_depth: usize,
) -> Result<AlphaBracket> {
    let config = BracketConfig {
        n_max,
        cycle_depth,
        ..BracketConfig::default()
    };
    component_bracket(&PsiTable::new(sigma), Component::Total, &config)
}

/// Brackets for α⁺ and α⁻.
pub fn alpha_pm_bracket(
    sigma: &Permutation,
    config: &BracketConfig,
) -> Result<(AlphaBracket, AlphaBracket)> {
    let table = PsiTable::new(sigma);
    Ok((
        component_bracket(&table, Component::Plus, config)?,
        component_bracket(&table, Component::Minus, config)?,
    ))
}

/// Bracket for the constant of one ψ component.
pub fn component_bracket(
    table: &PsiTable,
    comp: Component,
    config: &BracketConfig,
) -> Result<AlphaBracket> {
    if config.n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let b = table.base();
    let (mut lower, mut cycle, depth) = best_cycle(table, comp, config.cycle_depth)?;
    for seed in &config.seeds {
        let v = f_n_eval_periodic(table, comp, seed, 1)?;
        if v > lower {
            lower = v;
            cycle = seed.clone();
        }
    }

    let (maxima, _stopped) = f_n_max_prefix(table, comp, config.n_max, config.budget);
    if maxima.is_empty() {
        return Err(Error::ResourceLimit(format!(
            "max F_1 in base {b} did not finish"
        )));
    }
    let (n, fn_upper) = maxima
        .iter()
        .map(|m| (m.n, &m.value / Rational::from_integer(m.n.into())))
        .min_by(|a, c| a.1.cmp(&c.1).then(a.0.cmp(&c.0)))
        .expect("nonempty");

    let certificate = if config.certificate && fn_upper > lower {
        certify(table, comp, &cycle_orbit(b, &cycle), config.refine_levels)
            .ok()
            .map(|c| c.bound)
    } else {
        None
    };
    let upper = match &certificate {
        Some(c) if *c < fn_upper => c.clone(),
        _ => fn_upper.clone(),
    };
    if lower > upper {
        return Err(Error::Inconsistent(format!(
            "lower bound {lower} exceeds upper bound {upper}"
        )));
    }
    Ok(AlphaBracket {
        perm: table.perm().clone(),
        component: comp,
        lower,
        cycle,
        upper,
        fn_upper,
        n,
        n_reached: maxima.len(),
        certificate,
        cycle_depth: depth,
    })
}

/// `s(S_b^σ) = α / log b`.
pub fn s_constant(sigma: &Permutation) -> Result<LogBracket> {
    let config = BracketConfig::default();
    Ok(component_bracket(&PsiTable::new(sigma), Component::Total, &config)?.s())
}

/// `s*` of the swapped sequence `Σ_A^σ`: `(α⁺ + α⁻) / (2 log b)`.
pub fn s_star_swapped(sigma: &Permutation) -> Result<LogBracket> {
    s_star_swapped_with(sigma, &BracketConfig::default())
}

pub fn s_star_swapped_with(sigma: &Permutation, config: &BracketConfig) -> Result<LogBracket> {
    let (p, m) = alpha_pm_bracket(sigma, config)?;
    let half = Rational::new(1.into(), 2.into());
    Ok(LogBracket::new(
        sigma.base(),
        (&p.lower + &m.lower) * &half,
        (&p.upper + &m.upper) * &half,
    ))
}

/// Closed forms for the identity permutation: numerators over `log b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdClosedForm {
    pub base: usize,
    /// α for the identity, so `s = alpha / log b`.
    pub alpha: Rational,
    /// `s*` of the swapped sequence times `log b`.
    pub s_star_swapped: Rational,
}

impl IdClosedForm {
    pub fn s(&self) -> (f64, f64) {
        div_ln(&self.alpha, self.base)
    }

    pub fn s_star(&self) -> (f64, f64) {
        div_ln(&self.s_star_swapped, self.base)
    }
}

pub fn id_closed_form(b: usize) -> Result<IdClosedForm> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let bb = b as i64;
    let alpha = if b % 2 == 1 {
        Rational::new((bb - 1).into(), 4.into())
    } else {
        Rational::new((bb * bb).into(), (4 * (bb + 1)).into())
    };
    let s_star_swapped = &alpha / Rational::from_integer(2.into());
    Ok(IdClosedForm {
        base: b,
        alpha,
        s_star_swapped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineBound {
    pub alpha_max: u64,
    /// Upper end of a certified enclosure of `(α_max + 1) / log(α_max + 1)`.
    pub bound: f64,
}

/// Bound on `s` for `x ↦ a0·x + a1` from the continued fraction of `a0/p`.
pub fn affine_bound(p: u64, a0: u64) -> Result<AffineBound> {
    let cf = continued_fraction(a0, p)?;
    let a = cf.alpha_max + 1;
    let bound = div_ln(&Rational::from_integer(a.into()), a as usize).1;
    Ok(AffineBound {
        alpha_max: cf.alpha_max,
        bound,
    })
}
