//! The permutation families: ω_b, affine, fractional-affine, Carlitz rank 2
//! and intrication.

use vdc::numeric::fmt_rational;
use vdc::perm::{
    affine, carlitz2, carlitz_partner, continued_fraction, faure_omega, fractional_affine,
    intricate,
};
use vdc::psi::{max_psi, Component};

fn main() -> vdc::Result<()> {
    for b in [7usize, 15, 31] {
        println!("omega_{b} = {}", faure_omega(b)?);
    }
    let p = 13;
    for a0 in [1u64, 5, 8] {
        let sigma = affine(p, a0, 0)?;
        let cf = continued_fraction(a0, p)?;
        let (m, _) = max_psi(&sigma, Component::Total);
        println!(
            "{a0}x mod {p}: {sigma}  quotients {:?}  max psi {}",
            cf.quotients,
            fmt_rational(&m)
        );
    }
    let pi = fractional_affine(11, 2, 3, 1)?;
    let c = carlitz_partner(11, 2, 3, 1)?;
    let partner = carlitz2(11, c.a0, c.a1, c.a2, 0)?;
    println!(
        "fractional {pi}\npartner    {partner}  (differ at {} and {})",
        c.x1, c.x2
    );
    let w = intricate(&faure_omega(2)?, &faure_omega(3)?);
    println!("omega_2 . omega_3 = {w}");
    Ok(())
}
