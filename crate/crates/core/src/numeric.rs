//! Rational helpers, outward-rounded float enclosures and canonical printing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical `num/den` text; integers keep the `/1`.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Nearest f64 (ties to even).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest f64 interval containing `r`.
pub fn enclose(r: &Rational) -> (f64, f64) {
    let f = to_f64(r);
    if !f.is_finite() {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let back = Rational::from_float(f).expect("finite");
    match back.cmp(r) {
        std::cmp::Ordering::Equal => (f, f),
        std::cmp::Ordering::Greater => (f.next_down(), f),
        std::cmp::Ordering::Less => (f, f.next_up()),
    }
}

/// Interval containing ln(b). The libm logarithm is accurate to about one
/// ulp; two ulps of padding on each side keep the enclosure safe.
pub fn ln_enclosure(b: usize) -> (f64, f64) {
    let l = (b as f64).ln();
    (l.next_down().next_down(), l.next_up().next_up())
}

/// A certified float interval for `r / ln(b)`, with `r >= 0` and `b >= 2`.
pub fn div_ln(r: &Rational, b: usize) -> (f64, f64) {
    let (nlo, nhi) = enclose(r);
    let (llo, lhi) = ln_enclosure(b);
    let lo = if nlo <= 0.0 { nlo / llo } else { nlo / lhi };
    let hi = if nhi <= 0.0 { nhi / lhi } else { nhi / llo };
    (lo.next_down(), hi.next_up())
}

/// 17 significant digits, positional when the exponent is moderate.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-7..=20).contains(&exp) {
        return sci;
    }
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let point = exp as usize + 1;
        if point >= digits.len() {
            out.push_str(&digits);
            out.push_str(&"0".repeat(point - digits.len()));
        } else {
            out.push_str(&digits[..point]);
            out.push('.');
            out.push_str(&digits[point..]);
        }
    }
    out
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Fractional part in [0, 1).
pub fn frac(r: &Rational) -> Rational {
    r - Rational::from_integer(floor(r))
}

/// `b^e` as i128, or `None` on overflow.
pub fn pow_i128(b: usize, e: u32) -> Option<i128> {
    (b as i128).checked_pow(e)
}

pub fn big_pow(b: usize, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(b), e)
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn limit_denominator(r: &Rational, max_den: &BigInt) -> Rational {
    if r.denom() <= max_den {
        return r.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let rem = &n - &a * &d;
        n = std::mem::replace(&mut d, rem);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let b1 = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = Rational::new(p1, q1);
    if (&b2 - r).abs() <= (&b1 - r).abs() {
        b2
    } else {
        b1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_canonical() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(3, 1)), "3/1");
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn enclosure_contains_value() {
        for (n, d) in [(1, 3), (2, 7), (46, 35), (32209, 17700), (5, 4)] {
            let r = rat(n, d);
            let (lo, hi) = enclose(&r);
            assert!(Rational::from_float(lo).unwrap() <= r);
            assert!(Rational::from_float(hi).unwrap() >= r);
        }
    }

    #[test]
    fn log_division_brackets_the_constant() {
        let (lo, hi) = div_ln(&rat(1, 3), 2);
        let v = 1.0 / (3.0 * 2f64.ln());
        assert!(lo <= v && v <= hi);
        assert!(hi - lo < 1e-14);
        assert_eq!(format!("{:.4}", lo), "0.4809");
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_f64(0.5), "0.50000000000000000");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000");
        assert_eq!(fmt_f64(1e-9), "1.0000000000000001e-9");
        assert_eq!(fmt_f64(0.0), "0");
    }

    #[test]
    fn frac_and_limit() {
        assert_eq!(frac(&rat(5, 4)), rat(1, 4));
        assert_eq!(frac(&rat(-1, 4)), rat(3, 4));
        let pi_ish = Rational::from_float(std::f64::consts::PI).unwrap();
        assert_eq!(
            limit_denominator(&pi_ish, &BigInt::from(1000)),
            rat(355, 113)
        );
        assert_eq!(limit_denominator(&rat(1, 3), &BigInt::from(10)), rat(1, 3));
    }
}
