//! ψ on the part of [0, 1) determined by the first k images.

use super::{assemble, piece_hulls, Affine};
use crate::error::{invalid, Result};
use crate::numeric::Rational;

/// ψ restricted to `[0, k/b)` for a prefix of length k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPsi {
    pub base: usize,
    /// ψ(j/b) for j = 1..=k.
    pub values: Vec<Rational>,
    /// Pieces of ψ on `[0, k/b)`: start point and affine map, canonical.
    pub pieces: Vec<(Rational, Affine)>,
}

/// ψ on `[0, k/b)` and at `1/b, …, k/b` from the first k images. The value
/// at `k/b` depends only on the set of images; earlier values depend on the
/// nested sets of shorter prefixes.
pub fn partial_psi(b: usize, prefix: &[usize]) -> Result<PartialPsi> {
    let mut seen = vec![false; b];
    for &v in prefix {
        if v >= b {
            return Err(invalid(format!("image {v} is not below the base {b}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(invalid(format!("image {v} repeats in the prefix")));
        }
    }
    if b < 2 || prefix.len() > b {
        return Err(invalid("prefix longer than the base"));
    }
    let values = (1..=prefix.len())
        .map(|k| prefix_set_value(b, &prefix[..k]))
        .collect();
    let (plus, minus) = piece_hulls(b, prefix);
    let (breaks, affines) = assemble(b, &plus, &minus);
    let mut pieces: Vec<(Rational, Affine)> = Vec::new();
    for (x, a) in breaks.into_iter().zip(affines) {
        if pieces.last().map(|p| &p.1) != Some(&a) {
            pieces.push((x, a));
        }
    }
    Ok(PartialPsi {
        base: b,
        values,
        pieces,
    })
}

/// ψ(k/b) from the set `{σ(0), …, σ(k−1)}` alone.
pub fn prefix_set_value(b: usize, set: &[usize]) -> Rational {
    let mut present = vec![false; b];
    for &v in set {
        present[v] = true;
    }
    let k = set.len() as i64;
    let (mut below, mut hi, mut lo) = (0i64, 0i64, 0i64);
    for h in 0..b {
        if h > 0 && present[h - 1] {
            below += 1;
        }
        let v = b as i64 * below - h as i64 * k;
        hi = hi.max(v);
        lo = lo.max(-v);
    }
    Rational::new((hi + lo).into(), (b as i64).into())
}
