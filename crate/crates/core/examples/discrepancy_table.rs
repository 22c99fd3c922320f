//! Exact unnormalized discrepancies at large N, where a brute-force sort
//! would be out of reach.

use vdc::disc::{exact_discrepancies, SigmaSequence};
use vdc::numeric::{fmt_f64, to_f64};
use vdc::perm::{faure_omega, Permutation};

fn main() -> vdc::Result<()> {
    let seqs = [
        ("id_2", SigmaSequence::constant(Permutation::identity(2)?)),
        ("id_12", SigmaSequence::constant(Permutation::identity(12)?)),
        ("omega_12", SigmaSequence::constant(faure_omega(12)?)),
    ];
    println!(
        "{:>10}  {:>20}  {:>20}  {:>20}",
        "N", seqs[0].0, seqs[1].0, seqs[2].0
    );
    for e in [1u32, 3, 6, 9, 12, 18, 24] {
        let n = 10u128.pow(e) / 7;
        let mut row = format!("{n:>10}");
        for (_, seq) in &seqs {
            let d = exact_discrepancies(seq, n)?;
            let log_n = (n as f64).ln();
            row.push_str(&format!(
                "  {:>20}",
                fmt_f64(to_f64(d.extreme.lo()) / log_n.max(1.0))
            ));
        }
        println!("{row}");
    }
    println!("(columns are D_N / log N)");
    Ok(())
}
