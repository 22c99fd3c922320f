//! Digit permutations and the structured families built from them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::numeric::Rational;

/// A bijection of `{0, …, b−1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let b = image.len();
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        let mut seen = vec![false; b];
        for (i, &v) in image.iter().enumerate() {
            if v >= b {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} at position {i} is not below the base {b}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} appears twice"
                )));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(b: usize) -> Result<Self> {
        check_base(b)?;
        Ok(Permutation {
            image: (0..b).collect(),
        })
    }

    /// The order-reversing permutation `k ↦ b−1−k`.
    pub fn tau(b: usize) -> Result<Self> {
        check_base(b)?;
        Ok(Permutation {
            image: (0..b).rev().collect(),
        })
    }

    pub fn base(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, k: usize) -> usize {
        self.image[k]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Permutation) -> Result<Permutation> {
        if self.base() != inner.base() {
            return Err(invalid(format!(
                "cannot compose bases {} and {}",
                self.base(),
                inner.base()
            )));
        }
        Ok(Permutation {
            image: inner.image.iter().map(|&v| self.image[v]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.base()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `τ ∘ σ`, the partner used by swap schedules.
    pub fn swapped(&self) -> Permutation {
        let b = self.base();
        Permutation {
            image: self.image.iter().map(|&v| b - 1 - v).collect(),
        }
    }

    /// Adds `a` (mod b) to every image, `0 < a < b`.
    pub fn shift(&self, a: usize) -> Result<Permutation> {
        let b = self.base();
        if a == 0 || a >= b {
            return Err(invalid(format!(
                "shift {a} must lie strictly between 0 and {b}"
            )));
        }
        Ok(Permutation {
            image: self.image.iter().map(|&v| (v + a) % b).collect(),
        })
    }

    /// Negates every image mod b.
    pub fn reflect(&self) -> Permutation {
        let b = self.base();
        Permutation {
            image: self.image.iter().map(|&v| (b - v) % b).collect(),
        }
    }

    /// Lexicographically least member of the shift/reflect class.
    pub fn canonical_class_rep(&self) -> Permutation {
        let b = self.base();
        let s0 = self.image[0];
        let norm = Permutation {
            image: self.image.iter().map(|&v| (v + b - s0) % b).collect(),
        };
        let refl = norm.reflect();
        norm.min(refl)
    }
}

fn check_base(b: usize) -> Result<()> {
    if b < 2 {
        Err(Error::InvalidBase(b))
    } else {
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let image = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad permutation entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(image)
    }
}

/// Base-b digits of n, least significant first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    pub base: usize,
    pub digits: Vec<usize>,
}

impl DigitVector {
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.base as u128 + d as u128)
    }

    pub fn digit(&self, j: usize) -> usize {
        self.digits.get(j).copied().unwrap_or(0)
    }
}

pub fn digits(mut n: u128, b: usize) -> Result<DigitVector> {
    check_base(b)?;
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % b as u128) as usize);
        n /= b as u128;
    }
    Ok(DigitVector {
        base: b,
        digits: out,
    })
}

/// Product of a base-b and a base-c permutation:
/// `(σ·τ)(k''·b + k') = c·σ(k') + τ(k'')`.
pub fn intricate(sigma: &Permutation, tau: &Permutation) -> Permutation {
    let (b, c) = (sigma.base(), tau.base());
    let mut image = vec![0; b * c];
    for hi in 0..c {
        for lo in 0..b {
            image[hi * b + lo] = c * sigma.apply(lo) + tau.apply(hi);
        }
    }
    Permutation { image }
}

fn omega_step(
    prev_half: Option<&Permutation>,
    prev: Option<&Permutation>,
    b: usize,
) -> Permutation {
    if b == 2 {
        return Permutation { image: vec![0, 1] };
    }
    if b.is_multiple_of(2) {
        let id2 = Permutation { image: vec![0, 1] };
        return intricate(&id2, prev_half.expect("half base available"));
    }
    let half = b / 2;
    let even = prev.expect("previous base available");
    let lift = |v: usize| if v < half { v } else { v + 1 };
    let mut image = Vec::with_capacity(b);
    image.extend((0..half).map(|k| lift(even.apply(k))));
    image.push(half);
    image.extend((half + 1..b).map(|k| lift(even.apply(k - 1))));
    Permutation { image }
}

/// Faure's permutation ω_b.
pub fn faure_omega(b: usize) -> Result<Permutation> {
    check_base(b)?;
    if b == 2 {
        return Ok(omega_step(None, None, 2));
    }
    if b.is_multiple_of(2) {
        let half = faure_omega(b / 2)?;
        Ok(omega_step(Some(&half), None, b))
    } else {
        let even = faure_omega(b - 1)?;
        Ok(omega_step(None, Some(&even), b))
    }
}

/// All ω_b for `2 ≤ b ≤ max_b`, built bottom-up; index `i` holds ω_{i+2}.
pub fn omega_table(max_b: usize) -> Vec<Permutation> {
    let mut table: Vec<Permutation> = Vec::with_capacity(max_b.saturating_sub(1));
    for b in 2..=max_b {
        let get = |base: usize| table.get(base.wrapping_sub(2));
        let p = if b % 2 == 0 {
            omega_step(get(b / 2), None, b)
        } else {
            omega_step(None, get(b - 1), b)
        };
        table.push(p);
    }
    table
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `x^{p−2}` in 𝔽_p: the inverse of nonzero x, and 0 ↦ 0.
pub fn pseudo_inverse(x: u64, p: u64) -> u64 {
    let x = x % p;
    if x == 0 {
        0
    } else {
        mod_pow(x, p - 2, p)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    Ok(())
}

fn nonzero(name: &str, a: u64, p: u64) -> Result<()> {
    if a.is_multiple_of(p) {
        return Err(invalid(format!("{name} must be nonzero mod {p}")));
    }
    Ok(())
}

fn from_fn(p: u64, f: impl Fn(u64) -> u64) -> Result<Permutation> {
    Permutation::new((0..p).map(|x| f(x) as usize).collect())
}

/// `x ↦ a0·x + a1` over 𝔽_p.
pub fn affine(p: u64, a0: u64, a1: u64) -> Result<Permutation> {
    check_prime(p)?;
    nonzero("a0", a0, p)?;
    affine_unit(p, a0, a1)
}

/// `x ↦ a0·x + a1 (mod b)` for any modulus with `gcd(a0, b) = 1`.
/// Covers the Fibonacci multipliers, whose bases are composite.
pub fn affine_unit(b: u64, a0: u64, a1: u64) -> Result<Permutation> {
    check_base(b as usize)?;
    if a0.gcd(&b) != 1 {
        return Err(invalid(format!("multiplier {a0} is not a unit mod {b}")));
    }
    from_fn(b, |x| (a0 % b * x + a1) % b)
}

/// `x ↦ (a0·x + a1)^{p−2} + a2` over 𝔽_p.
pub fn fractional_affine(p: u64, a0: u64, a1: u64, a2: u64) -> Result<Permutation> {
    check_prime(p)?;
    nonzero("a0", a0, p)?;
    from_fn(p, |x| (pseudo_inverse(a0 % p * x + a1, p) + a2) % p)
}

/// `x ↦ ((a0·x + a1)^{p−2} + a2)^{p−2} + a3` over 𝔽_p.
pub fn carlitz2(p: u64, a0: u64, a1: u64, a2: u64, a3: u64) -> Result<Permutation> {
    check_prime(p)?;
    nonzero("A0", a0, p)?;
    nonzero("A2", a2, p)?;
    from_fn(p, |x| {
        let inner = (pseudo_inverse(a0 % p * x + a1, p) + a2) % p;
        (pseudo_inverse(inner, p) + a3) % p
    })
}

/// Parameters of the rank-2 permutation agreeing with a fractional-affine one
/// away from two exceptional points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CarlitzPartner {
    pub a0: u64,
    pub a1: u64,
    pub a2: u64,
    pub x1: u64,
    pub x2: u64,
}

pub fn carlitz_partner(p: u64, a0: u64, a1: u64, a2: u64) -> Result<CarlitzPartner> {
    check_prime(p)?;
    nonzero("a0", a0, p)?;
    nonzero("a2", a2, p)?;
    let (a0, a1, a2) = (a0 % p, a1 % p, a2 % p);
    let neg = |v: u64| (p - v % p) % p;
    let a2sq = a2 * a2 % p;
    let inv = |v: u64| pseudo_inverse(v, p);
    Ok(CarlitzPartner {
        a0: neg(a0 * a2sq % p),
        a1: neg((a1 * a2sq + a2) % p),
        a2: inv(a2),
        x1: neg((a1 * a2 + 1) % p * inv(a0 * a2 % p) % p),
        x2: neg(a1 * inv(a0) % p),
    })
}

/// Regular continued fraction `[0; q1, …, qm]` of `numerator/denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub numerator: u64,
    pub denominator: u64,
    pub quotients: Vec<u64>,
    pub alpha_max: u64,
}

impl ContinuedFraction {
    pub fn value(&self) -> Rational {
        let mut acc: Option<Rational> = None;
        for &q in self.quotients.iter().rev() {
            let term = Rational::from_integer(BigInt::from(q));
            acc = Some(match acc {
                None => term,
                Some(a) => term + a.recip(),
            });
        }
        acc.map(|a| a.recip()).unwrap_or_else(Rational::zero)
    }
}

/// Canonical expansion of `a0/p` (last quotient at least 2).
pub fn continued_fraction(a0: u64, p: u64) -> Result<ContinuedFraction> {
    if a0 == 0 || a0 >= p {
        return Err(invalid(format!("need 0 < {a0} < {p}")));
    }
    if a0.gcd(&p) != 1 {
        return Err(invalid(format!("{a0} and {p} are not coprime")));
    }
    let (mut n, mut d) = (p, a0);
    let mut quotients = Vec::new();
    while d != 0 {
        quotients.push(n / d);
        (n, d) = (d, n % d);
    }
    let alpha_max = quotients.iter().copied().max().unwrap_or(0);
    Ok(ContinuedFraction {
        numerator: a0,
        denominator: p,
        quotients,
        alpha_max,
    })
}

/// Fibonacci numbers with F(1) = F(2) = 1.
pub fn fibonacci(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// z(n) = z(n−1) + z(n−3) + z(n−4) with z(1..4) = 1, 1, 1, 2.
pub fn z_seq(n: usize) -> BigInt {
    assert!(n >= 1, "z is indexed from 1");
    let mut z: Vec<BigInt> = [1, 1, 1, 2].iter().map(|&v| BigInt::from(v)).collect();
    while z.len() < n {
        let k = z.len();
        let next = &z[k - 1] + &z[k - 3] + &z[k - 4];
        z.push(next);
    }
    z[n - 1].clone()
}
