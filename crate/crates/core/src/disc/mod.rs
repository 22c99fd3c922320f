//! Generalized van der Corput sequences and their exact finite-N discrepancy.
//!
//! Discrepancies are unnormalized (not divided by N). The series over digit
//! levels is summed exactly: beyond the digit length of N every argument
//! falls in `[0, 1/b)`, where ψ⁺ and ψ⁻ are linear with slopes fixed by
//! `σ(0)`, so the tail is a geometric series.

mod kronecker;
mod oracle;

pub use kronecker::{kronecker, KroneckerAlpha};
pub use oracle::{
    brute_diaphony_sq, brute_extreme, brute_l2_sq, brute_plus_minus, brute_star, DiaphonySq,
};

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::numeric::{big_pow, Rational};
use crate::perm::{digits, Permutation};
use crate::psi::{near_zero_slopes, Component, PsiTable};

/// Which positions keep σ (members) and which use τ∘σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwapSchedule {
    /// `A = ⋃_H {H(H−1)+1, …, H²}`.
    FaureA,
    /// Membership of j is `pattern[j mod len]`.
    Periodic(Vec<bool>),
    /// Membership of j is `prefix[j]` while in range, then `default`.
    ExplicitSet { prefix: Vec<bool>, default: bool },
}

impl SwapSchedule {
    pub fn contains(&self, j: u64) -> bool {
        match self {
            SwapSchedule::FaureA => faure_a_contains(j),
            SwapSchedule::Periodic(p) => p[(j % p.len() as u64) as usize],
            SwapSchedule::ExplicitSet { prefix, default } => {
                prefix.get(j as usize).copied().unwrap_or(*default)
            }
        }
    }

    /// `(start, period)` after which membership repeats, if it ever does.
    fn eventual_period(&self) -> Option<(u64, u64)> {
        match self {
            SwapSchedule::FaureA => None,
            SwapSchedule::Periodic(p) => Some((0, p.len() as u64)),
            SwapSchedule::ExplicitSet { prefix, .. } => Some((prefix.len() as u64, 1)),
        }
    }
}

/// j ∈ A iff `H(H−1) < j ≤ H²` with `H = ⌈√j⌉`.
pub fn faure_a_contains(j: u64) -> bool {
    if j == 0 {
        return false;
    }
    let r = j.isqrt();
    let h = if r * r == j { r } else { r + 1 };
    j > h * (h - 1)
}

#[derive(Debug, Clone)]
enum Rule {
    Constant,
    Swapped(SwapSchedule),
    Explicit { prefix: Vec<usize>, default: usize },
}

/// A rule giving σ_j for every digit position j ≥ 0.
#[derive(Debug, Clone)]
pub struct SigmaSequence {
    base: usize,
    rule: Rule,
    distinct: Vec<Permutation>,
    tables: Vec<PsiTable>,
}

impl SigmaSequence {
    pub fn constant(sigma: Permutation) -> SigmaSequence {
        Self::build(sigma.base(), Rule::Constant, vec![sigma])
    }

    /// σ_j = σ for j in the schedule, τ∘σ otherwise.
    pub fn swapped(sigma: Permutation, schedule: SwapSchedule) -> Result<SigmaSequence> {
        if let SwapSchedule::Periodic(p) = &schedule {
            if p.is_empty() {
                return Err(invalid("periodic schedule needs a nonempty pattern"));
            }
        }
        let partner = sigma.swapped();
        Ok(Self::build(
            sigma.base(),
            Rule::Swapped(schedule),
            vec![sigma, partner],
        ))
    }

    /// σ_j = `prefix[j]` while in range, then `default`.
    pub fn explicit(prefix: Vec<Permutation>, default: Permutation) -> Result<SigmaSequence> {
        let b = default.base();
        if let Some(p) = prefix.iter().find(|p| p.base() != b) {
            return Err(invalid(format!("permutation {p} is not in base {b}")));
        }
        let mut distinct: Vec<Permutation> = Vec::new();
        let mut index_of = |p: &Permutation| match distinct.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                distinct.push(p.clone());
                distinct.len() - 1
            }
        };
        let idx: Vec<usize> = prefix.iter().map(&mut index_of).collect();
        let default = index_of(&default);
        Ok(Self::build(
            b,
            Rule::Explicit {
                prefix: idx,
                default,
            },
            distinct,
        ))
    }

    fn build(base: usize, rule: Rule, distinct: Vec<Permutation>) -> SigmaSequence {
        let tables = distinct.iter().map(PsiTable::new).collect();
        SigmaSequence {
            base,
            rule,
            distinct,
            tables,
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    fn index(&self, j: u64) -> usize {
        match &self.rule {
            Rule::Constant => 0,
            Rule::Swapped(s) => usize::from(!s.contains(j)),
            Rule::Explicit { prefix, default } => {
                prefix.get(j as usize).copied().unwrap_or(*default)
            }
        }
    }

    pub fn sigma(&self, j: u64) -> &Permutation {
        &self.distinct[self.index(j)]
    }

    fn table(&self, j: u64) -> &PsiTable {
        &self.tables[self.index(j)]
    }

    fn eventual_period(&self) -> Option<(u64, u64)> {
        match &self.rule {
            Rule::Constant => Some((0, 1)),
            Rule::Swapped(s) => s.eventual_period(),
            Rule::Explicit { prefix, .. } => Some((prefix.len() as u64, 1)),
        }
    }

    /// `Σ_{j ≥ start} c(j)/b^{j+1}`: exact when the rule is eventually
    /// periodic, otherwise summed exactly up to `cap` and enclosed after.
    fn tail(&self, start: u64, cap: u64, coeff: impl Fn(&Permutation) -> i64) -> Value {
        let b = self.base as u64;
        let term = |j: u64| {
            Rational::new(
                BigInt::from(coeff(self.sigma(j))),
                big_pow(self.base, j as usize + 1),
            )
        };
        match self.eventual_period() {
            Some((s, period)) => {
                let j0 = start.max(s);
                let mut sum: Rational = (start..j0).map(term).sum();
                let block: BigInt = (0..period)
                    .map(|i| {
                        BigInt::from(coeff(self.sigma(j0 + i)))
                            * big_pow(self.base, (period - 1 - i) as usize)
                    })
                    .sum();
                let den =
                    big_pow(self.base, j0 as usize) * (big_pow(self.base, period as usize) - 1);
                sum += Rational::new(block, den);
                Value::Exact(sum)
            }
            None => {
                let stop = cap.max(start);
                let head: Rational = (start..stop).map(term).sum();
                let options = [coeff(&self.distinct[0]), coeff(&self.distinct[1])];
                let scale = Rational::new(
                    BigInt::from(1),
                    big_pow(self.base, stop as usize) * BigInt::from(b - 1),
                );
                let lo = &head
                    + &scale
                        * Rational::from_integer(options.iter().min().copied().unwrap_or(0).into());
                let hi = &head
                    + &scale
                        * Rational::from_integer(options.iter().max().copied().unwrap_or(0).into());
                Value::from_bounds(lo, hi)
            }
        }
    }
}

/// An exact value or a certified enclosure `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosed { lo: Rational, hi: Rational },
}

impl Value {
    fn from_bounds(lo: Rational, hi: Rational) -> Value {
        if lo == hi {
            Value::Exact(lo)
        } else {
            Value::Enclosed { lo, hi }
        }
    }

    pub fn lo(&self) -> &Rational {
        match self {
            Value::Exact(v) => v,
            Value::Enclosed { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Value::Exact(v) => v,
            Value::Enclosed { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Enclosed { .. } => None,
        }
    }

    fn shift(&self, by: &Rational) -> Value {
        Value::from_bounds(self.lo() + by, self.hi() + by)
    }

    fn scale(&self, by: &Rational) -> Value {
        Value::from_bounds(self.lo() * by, self.hi() * by)
    }

    fn max(&self, other: &Value) -> Value {
        Value::from_bounds(
            self.lo().max(other.lo()).clone(),
            self.hi().max(other.hi()).clone(),
        )
    }
}

/// `S_b^Σ(n)`; exact for eventually periodic rules, else enclosed after
/// `digits_cap` digits (width at most `b^{−digits_cap}`).
pub fn point(seq: &SigmaSequence, n: u128, digits_cap: u64) -> Value {
    let dv = digits(n, seq.base).expect("sequence base is valid");
    let m = dv.digits.len() as u64;
    let head: Rational = dv
        .digits
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            Rational::new(
                BigInt::from(seq.sigma(j as u64).apply(a)),
                big_pow(seq.base, j + 1),
            )
        })
        .sum();
    seq.tail(m, digits_cap, |p| p.apply(0) as i64).shift(&head)
}

/// The four unnormalized discrepancies of the first N points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancies {
    pub n: u128,
    pub plus: Value,
    pub minus: Value,
    pub extreme: Value,
    pub star: Value,
}

/// Extra digit levels summed exactly before a non-periodic tail is enclosed.
pub const DEFAULT_EXTRA_DIGITS: u64 = 64;

pub fn exact_discrepancies(seq: &SigmaSequence, n: u128) -> Result<Discrepancies> {
    let len = digits(n, seq.base)?.digits.len() as u64;
    exact_discrepancies_capped(seq, n, len + DEFAULT_EXTRA_DIGITS)
}

pub fn exact_discrepancies_capped(seq: &SigmaSequence, n: u128, cap: u64) -> Result<Discrepancies> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let b = seq.base as i128;
    let len = digits(n, seq.base)?.digits.len() as u32;
    let overflow =
        || Error::ResourceLimit(format!("N = {n} overflows base-{b} integer arithmetic"));
    let big_n = i128::try_from(n).map_err(|_| overflow())?;
    let top = b.checked_pow(len).ok_or_else(overflow)?;
    top.checked_mul(b * b).ok_or_else(overflow)?;
    let (mut plus, mut minus) = (0i128, 0i128);
    for j in 1..=len {
        let unit = b.pow(j - 1);
        let x = big_n % (unit * b);
        let t = seq.table(j as u64 - 1);
        let w = b.pow(len - j);
        plus += w * t.scaled_value(Component::Plus, x, unit);
        minus += w * t.scaled_value(Component::Minus, x, unit);
    }
    let den = BigInt::from(top);
    let nr = Rational::from_integer(BigInt::from(big_n));
    let b1 = seq.base as i64 - 1;
    let tail_plus = seq
        .tail(len as u64, cap, |p| b1 - p.apply(0) as i64)
        .scale(&nr);
    let tail_minus = seq.tail(len as u64, cap, |p| p.apply(0) as i64).scale(&nr);
    // Every σ has total slope b−1 near 0, so the extreme tail is exactly N/b^len.
    let extreme = Value::Exact(Rational::new((plus + minus + big_n).into(), den.clone()));
    let plus = tail_plus.shift(&Rational::new(plus.into(), den.clone()));
    let minus = tail_minus.shift(&Rational::new(minus.into(), den));
    let star = plus.max(&minus);
    Ok(Discrepancies {
        n,
        plus,
        minus,
        extreme,
        star,
    })
}

/// Slopes of (ψ⁺, ψ⁻) near 0 for position j, exposed for tail checks.
pub fn tail_slopes(seq: &SigmaSequence, j: u64) -> (i64, i64) {
    near_zero_slopes(seq.sigma(j))
}
