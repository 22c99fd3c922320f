//! Two-dimensional Hammersley sets from id/τ digit vectors: the ψ-sum term
//! against the exact star discrepancy.

use vdc::hammersley::{c_m, itau_asymptotic_check, itau_vec, HammersleySpec};
use vdc::numeric::{fmt_f64, fmt_rational};
use vdc::perm::Permutation;

fn main() -> vdc::Result<()> {
    for m in 1..=6 {
        let ids = HammersleySpec::new(vec![Permutation::identity(3)?; m])?;
        let mixed = HammersleySpec::new(itau_vec(3, m)?)?;
        let (t0, d0, _) = c_m(&ids)?;
        let (t1, d1, _) = c_m(&mixed)?;
        println!(
            "m={m}  id: term {:>8} D* {:>8}   i-tau: term {:>8} D* {:>8}",
            fmt_rational(&t0),
            fmt_rational(&d0),
            fmt_rational(&t1),
            fmt_rational(&d1)
        );
    }
    let report = itau_asymptotic_check(3, 8)?;
    for row in &report.rows {
        println!("m={}  term/(m log 3) = {}", row.m, fmt_f64(row.ratio.1));
    }
    println!("limit {}", fmt_f64(report.limit_f64.1));
    Ok(())
}
