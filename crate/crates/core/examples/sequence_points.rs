//! First points of a few generalized van der Corput sequences.

use vdc::disc::{point, SigmaSequence, SwapSchedule};
use vdc::numeric::{fmt_f64, fmt_rational, to_f64};
use vdc::perm::{faure_omega, Permutation};

fn main() -> vdc::Result<()> {
    let plain = SigmaSequence::constant(Permutation::identity(3)?);
    let scrambled = SigmaSequence::constant(faure_omega(7)?);
    // σ on the Faure block positions, τ∘σ elsewhere; points are irrational.
    let swapped = SigmaSequence::swapped(Permutation::identity(3)?, SwapSchedule::FaureA)?;

    println!(
        "{:>3}  {:>8}  {:>8}  {:>22}",
        "n", "id_3", "omega_7", "swapped id_3"
    );
    for n in 0..12u128 {
        let a = point(&plain, n, 64);
        let b = point(&scrambled, n, 64);
        let c = point(&swapped, n, 40);
        println!(
            "{n:>3}  {:>8}  {:>8}  {:>22}",
            fmt_rational(a.exact().expect("periodic rule")),
            fmt_rational(b.exact().expect("periodic rule")),
            fmt_f64(to_f64(c.lo())),
        );
    }
    Ok(())
}
