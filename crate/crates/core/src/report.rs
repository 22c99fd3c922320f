//! CSV rendering shared by the command-line tool and the examples. Rows are
//! deterministic: rationals print as `num/den`, floats with 17 significant
//! digits, and every line ends in `\n`.

use std::fmt::Write;
use std::ops::RangeInclusive;

use crate::asym::AlphaBracket;
use crate::disc::{exact_discrepancies, point, SigmaSequence, Value};
use crate::error::{invalid, Result};
use crate::numeric::{fmt_f64, fmt_rational, to_f64, Rational};
use crate::perm::Permutation;
use crate::search::SearchResult;

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
pub fn perm_hash(p: &Permutation) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in p.to_string().bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Quotes a field containing commas or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `num/den`, or `lo..hi` for an enclosure.
pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Exact(r) => fmt_rational(r),
        Value::Enclosed { lo, hi } => format!("{}..{}", fmt_rational(lo), fmt_rational(hi)),
    }
}

fn fmt_value_f64(v: &Value) -> String {
    match v {
        Value::Exact(r) => fmt_f64(to_f64(r)),
        Value::Enclosed { lo, hi } => format!("{}..{}", fmt_f64(to_f64(lo)), fmt_f64(to_f64(hi))),
    }
}

/// `n,value_num,value_den` for each n in the range. Points must be rational.
pub fn gen_csv(seq: &SigmaSequence, ns: RangeInclusive<u128>) -> Result<String> {
    let mut out = String::from("n,value_num,value_den\n");
    for n in ns {
        let v = point(seq, n, 64);
        let r = v
            .exact()
            .ok_or_else(|| invalid(format!("point {n} is irrational under this schedule")))?;
        writeln!(out, "{n},{},{}", r.numer(), r.denom()).expect("string write");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiscFormat {
    /// Append float columns.
    pub float: bool,
    /// Divide by N before printing.
    pub normalized: bool,
}

/// `N,Dplus,Dminus,D,Dstar` for each N in the range.
pub fn disc_csv(
    seq: &SigmaSequence,
    ns: RangeInclusive<u128>,
    format: DiscFormat,
) -> Result<String> {
    if *ns.start() == 0 {
        return Err(invalid("N starts at 1"));
    }
    let mut out = String::from("N,Dplus,Dminus,D,Dstar");
    if format.float {
        out.push_str(",Dplus_float,Dminus_float,D_float,Dstar_float");
    }
    out.push('\n');
    for n in ns {
        let d = exact_discrepancies(seq, n)?;
        let scale = if format.normalized {
            Rational::new(1.into(), n.into())
        } else {
            Rational::from_integer(1.into())
        };
        let vals: Vec<Value> = [&d.plus, &d.minus, &d.extreme, &d.star]
            .iter()
            .map(|v| match v {
                Value::Exact(r) => Value::Exact(r * &scale),
                Value::Enclosed { lo, hi } => Value::Enclosed {
                    lo: lo * &scale,
                    hi: hi * &scale,
                },
            })
            .collect();
        write!(out, "{n}").expect("string write");
        for v in &vals {
            write!(out, ",{}", fmt_value(v)).expect("string write");
        }
        if format.float {
            for v in &vals {
                write!(out, ",{}", fmt_value_f64(v)).expect("string write");
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub const ALPHA_HEADER: &str =
    "base,perm_hash,n,upper_num,upper_den,cycle,lower_num,lower_den,s_float_lo,s_float_hi";

/// One `alpha` row; the cycle digits are joined by `;`.
pub fn alpha_row(b: &AlphaBracket) -> String {
    let cycle: Vec<String> = b.cycle.iter().map(|d| d.to_string()).collect();
    let s = b.s();
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        b.base(),
        perm_hash(&b.perm),
        b.n,
        b.upper.numer(),
        b.upper.denom(),
        cycle.join(";"),
        b.lower.numer(),
        b.lower.denom(),
        fmt_f64(s.lo_f64),
        fmt_f64(s.hi_f64),
    )
}

/// `perm,max_psi_num,max_psi_den,f2_num,f2_den`; the F_2 columns stay
/// empty without stage 2.
pub fn search_csv(result: &SearchResult) -> String {
    let mut out = String::from("perm,max_psi_num,max_psi_den,f2_num,f2_den\n");
    for s in &result.survivors {
        let (f2n, f2d) = match &s.f2_half_max {
            Some(f) => (f.numer().to_string(), f.denom().to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{f2n},{f2d}",
            csv_field(&s.perm.to_string()),
            s.max_psi.numer(),
            s.max_psi.denom()
        )
        .expect("string write");
    }
    out
}

/// `i,x_num,x_den,y_num,y_den`.
pub fn hammersley_points_csv(points: &[(Rational, Rational)]) -> String {
    let mut out = String::from("i,x_num,x_den,y_num,y_den\n");
    for (i, (x, y)) in points.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            x.numer(),
            x.denom(),
            y.numer(),
            y.denom()
        )
        .expect("string write");
    }
    out
}

pub const HAMMERSLEY_HEADER: &str = "term_num,term_den,brute_num,brute_den,c_m_float";

pub fn hammersley_report_row(term: &Rational, brute: &Rational) -> String {
    let c = brute - term;
    format!(
        "{},{},{},{},{}",
        term.numer(),
        term.denom(),
        brute.numer(),
        brute.denom(),
        fmt_f64(to_f64(&c))
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn hashes_are_stable_and_distinct() {
        let a = Permutation::identity(3).unwrap();
        let b = Permutation::tau(3).unwrap();
        assert_eq!(perm_hash(&a), perm_hash(&a.clone()));
        assert_ne!(perm_hash(&a), perm_hash(&b));
        assert_eq!(perm_hash(&a).len(), 16);
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("0,1"), "\"0,1\"");
        assert_eq!(csv_field("abc"), "abc");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn generated_points() {
        let seq = SigmaSequence::constant(Permutation::identity(2).unwrap());
        let csv = gen_csv(&seq, 0..=3).unwrap();
        assert_eq!(csv, "n,value_num,value_den\n0,0,1\n1,1,2\n2,1,4\n3,3,4\n");
    }

    #[test]
    fn discrepancy_rows() {
        let seq = SigmaSequence::constant(Permutation::identity(2).unwrap());
        let csv = disc_csv(&seq, 1..=8, DiscFormat::default()).unwrap();
        assert_eq!(csv.lines().count(), 9);
        assert!(
            csv.starts_with("N,Dplus,Dminus,D,Dstar\n1,1/1,0/1,1/1,1/1\n"),
            "{csv}"
        );
        let norm = disc_csv(
            &seq,
            3..=3,
            DiscFormat {
                float: true,
                normalized: true,
            },
        )
        .unwrap();
        let row = norm.lines().nth(1).unwrap();
        assert_eq!(row.split(',').count(), 9);
        assert!(disc_csv(&seq, 0..=2, DiscFormat::default()).is_err());
    }

    #[test]
    fn hammersley_row() {
        assert_eq!(
            hammersley_report_row(&rat(3, 4), &rat(5, 4)),
            "3,4,5,4,0.50000000000000000"
        );
    }
}
