//! Certified brackets for the asymptotic constant s = α / log b.

use vdc::asym::{alpha_bracket, id_closed_form, s_star_swapped};
use vdc::numeric::{fmt_f64, fmt_rational};
use vdc::perm::{faure_omega, Permutation};

fn main() -> vdc::Result<()> {
    println!(
        "{:>4}  {:>12}  {:>12}  {:>8}  {:>20}",
        "b", "lower", "upper", "cycle", "s (upper)"
    );
    for b in [2usize, 3, 4, 5, 12] {
        for (name, sigma) in [
            ("id", Permutation::identity(b)?),
            ("omega", faure_omega(b)?),
        ] {
            let br = alpha_bracket(&sigma, 4, 2)?;
            println!(
                "{b:>4}  {:>12}  {:>12}  {:>8}  {:>20}  {name}",
                fmt_rational(&br.lower),
                fmt_rational(&br.upper),
                format!("{:?}", br.cycle),
                fmt_f64(br.s().hi_f64),
            );
        }
        println!(
            "      closed form for id: alpha = {}",
            fmt_rational(&id_closed_form(b)?.alpha)
        );
    }
    let swapped = s_star_swapped(&Permutation::identity(3)?)?;
    println!(
        "s* of the swapped id_3 sequence in [{}, {}]",
        fmt_f64(swapped.lo_f64),
        fmt_f64(swapped.hi_f64)
    );
    Ok(())
}
