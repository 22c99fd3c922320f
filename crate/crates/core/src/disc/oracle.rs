//! Brute-force discrepancy of explicit finite point sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::numeric::Rational;

fn check(points: &[Rational]) -> Result<()> {
    if points.is_empty() {
        return Err(invalid("point set is empty"));
    }
    if points
        .iter()
        .any(|x| x < &Rational::zero() || x > &Rational::one())
    {
        return Err(invalid("points must lie in [0, 1]"));
    }
    Ok(())
}

/// Numerators over a common denominator, sorted ascending.
fn common(points: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = points
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut nums: Vec<BigInt> = points
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    nums.sort();
    (nums, den)
}

/// `(D⁺, D⁻)`: the sups of `A([0,α)) − Nα` and `Nα − A([0,α))` over
/// `α ∈ [0, 1]`. Closed anchored intervals give the same two numbers.
pub fn brute_plus_minus(points: &[Rational]) -> Result<(Rational, Rational)> {
    check(points)?;
    let (nums, den) = common(points);
    let n = BigInt::from(nums.len());
    let (mut plus, mut minus) = (BigInt::zero(), BigInt::zero());
    let mut i = 0;
    while i < nums.len() {
        let mut j = i;
        while j < nums.len() && nums[j] == nums[i] {
            j += 1;
        }
        let nx = &n * &nums[i];
        plus = plus.max(BigInt::from(j) * &den - &nx);
        minus = minus.max(&nx - BigInt::from(i) * &den);
        i = j;
    }
    Ok((Rational::new(plus, den.clone()), Rational::new(minus, den)))
}

/// Unnormalized star discrepancy `max(D⁺, D⁻)`.
pub fn brute_star(points: &[Rational]) -> Result<Rational> {
    let (p, m) = brute_plus_minus(points)?;
    Ok(p.max(m))
}

/// Unnormalized extreme discrepancy over all `[α, β) ⊂ [0, 1]`, equal to
/// `D⁺ + D⁻` since each interval count is a difference of anchored ones.
pub fn brute_extreme(points: &[Rational]) -> Result<Rational> {
    let (p, m) = brute_plus_minus(points)?;
    Ok(p + m)
}

/// `∫₀¹ (A([0,α)) − Nα)² dα`, from
/// `Σ_{i,j} (1 − max(x_i, x_j)) − N·Σ_i (1 − x_i²) + N²/3`.
pub fn brute_l2_sq(points: &[Rational]) -> Result<Rational> {
    check(points)?;
    let mut xs = points.to_vec();
    xs.sort();
    let n = xs.len() as i64;
    let one = Rational::one();
    // Σ_{i,j} max = Σ_i x_(i)·(2i − 1) with 1-based ranks.
    let pair_max: Rational = xs
        .iter()
        .enumerate()
        .map(|(i, x)| x * Rational::from_integer((2 * i as i64 + 1).into()))
        .sum();
    let pairs = Rational::from_integer((n * n).into()) - pair_max;
    let singles: Rational = xs.iter().map(|x| &one - x * x).sum();
    Ok(
        pairs - Rational::from_integer(n.into()) * singles
            + Rational::new((n * n).into(), 3.into()),
    )
}

/// Squared diaphony as an exact rational multiple of π².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiaphonySq {
    /// `Σ_{i,j} B₂({x_i − x_j})` with `B₂(t) = t² − t + 1/6`.
    pub sum_b2: Rational,
}

impl DiaphonySq {
    /// `F_N² = 2π²·sum_b2`: the coefficient of π².
    pub fn pi_sq_coefficient(&self) -> Rational {
        &self.sum_b2 * Rational::from_integer(2.into())
    }

    pub fn to_f64(&self) -> f64 {
        crate::numeric::to_f64(&self.pi_sq_coefficient())
            * std::f64::consts::PI
            * std::f64::consts::PI
    }
}

/// `2π²·∫∫ |E(arc from α to β)|² dα dβ` with arcs wrapping past 1.
pub fn brute_diaphony_sq(points: &[Rational]) -> Result<DiaphonySq> {
    check(points)?;
    let sixth = Rational::new(1.into(), 6.into());
    let mut sum = Rational::zero();
    for x in points {
        for y in points {
            let t = crate::numeric::frac(&(x - y));
            sum += &t * &t - &t + &sixth;
        }
    }
    Ok(DiaphonySq { sum_b2: sum })
}
