//! The Kronecker sequence `{nα}` as a baseline.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::numeric::{frac, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KroneckerAlpha {
    /// α itself is rational; points are exact.
    Rational(Rational),
    /// A rational stand-in with a claimed bound on `|α − approx|`.
    Approx { approx: Rational, error: Rational },
    /// `(p + q·√d) / r` with d not a perfect square.
    Quadratic { p: i64, q: i64, d: u64, r: i64 },
}

/// `{nα}` for `n = 1..=N`. A quadratic α is replaced by its first
/// convergent `P/Q` with `Q·Q' > 2N²` (Q' the next denominator), so each
/// point is within `1/(2N)` of the true one.
pub fn kronecker(alpha: &KroneckerAlpha, n: usize) -> Result<Vec<Rational>> {
    let a = match alpha {
        KroneckerAlpha::Rational(a) => a.clone(),
        KroneckerAlpha::Approx { approx, error } => {
            let limit = Rational::new(BigInt::one(), BigInt::from(2 * n * n));
            if error >= &limit {
                return Err(invalid(format!(
                    "approximation error {error} is not below 1/(2N²) = {limit}"
                )));
            }
            approx.clone()
        }
        KroneckerAlpha::Quadratic { p, q, d, r } => quadratic_convergent(*p, *q, *d, *r, n)?,
    };
    Ok((1..=n)
        .map(|k| frac(&(&a * Rational::from_integer(k.into()))))
        .collect())
}

/// `⌊(a + b√d)/c⌋` for non-square d and c > 0.
fn floor_quadratic(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt) -> BigInt {
    let root = (b * b * d).sqrt();
    if b.is_negative() {
        (a - root - BigInt::one()).div_floor(c)
    } else {
        (a + root).div_floor(c)
    }
}

fn quadratic_convergent(p: i64, q: i64, d: u64, r: i64, n: usize) -> Result<Rational> {
    let dd = BigInt::from(d);
    if r == 0 {
        return Err(invalid("denominator r must be nonzero"));
    }
    if dd.sqrt().pow(2) == dd || q == 0 {
        return Err(invalid(format!(
            "√{d} is rational, pass a rational α instead"
        )));
    }
    let (mut a, mut b, mut c) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
    let target = BigInt::from(2 * n * n);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    loop {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let digit = floor_quadratic(&a, &b, &dd, &c);
        let h2 = &digit * &h1 + &h0;
        let k2 = &digit * &k1 + &k0;
        if &k1 * &k2 > target && !k1.is_zero() {
            return Ok(Rational::new(h1, k1));
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        // x − digit = (a − digit·c + b√d)/c, then invert.
        let a2 = &a - &digit * &c;
        let norm = &a2 * &a2 - &b * &b * &dd;
        let (na, nb, nc) = (&c * &a2, -(&c * &b), norm);
        let g = na.gcd(&nb).gcd(&nc);
        a = na / &g;
        b = nb / &g;
        c = nc / &g;
    }
}
