//! ψ functions of ω_9: the pieces around 1/3 and the grid maxima.

use vdc::numeric::{fmt_rational, rat};
use vdc::perm::faure_omega;
use vdc::psi::{Component, PsiTable};

fn main() -> vdc::Result<()> {
    let omega = faure_omega(9)?;
    let table = PsiTable::new(&omega);
    println!("omega_9 = {omega}");
    for comp in Component::ALL {
        let (max, at) = table.max_on_grid(comp);
        println!(
            "max {comp:?} = {} at x = {}",
            fmt_rational(&max),
            fmt_rational(&at)
        );
    }
    for k in [8i64, 9, 10, 11, 12] {
        let x = rat(k, 27);
        println!(
            "psi({}) = {}",
            fmt_rational(&x),
            fmt_rational(&table.eval(Component::Total, &x))
        );
    }
    print!("{}", table.function(Component::Total).to_csv());
    Ok(())
}
