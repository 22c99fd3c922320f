//! Base-2 structure counts for mixed sequences of `id_2` and `τ_2`.

use crate::disc::{exact_discrepancies, SigmaSequence};
use crate::error::{invalid, Error, Result};
use crate::numeric::Rational;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KlpStats {
    pub m: usize,
    /// Size of the majority among the first m permutations.
    pub s: usize,
    /// Number of `τ, id` transitions among the first m permutations.
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlpReport {
    pub stats: KlpStats,
    /// `max_{1 ≤ N ≤ 2^m} D*_N`.
    pub max_star: Rational,
    pub lower_bound: Rational,
    pub upper_bound: Rational,
}

impl KlpReport {
    pub fn holds(&self) -> bool {
        self.lower_bound <= self.max_star && self.max_star <= self.upper_bound
    }
}

fn swaps(prefix: &[Permutation], m: usize) -> Result<Vec<bool>> {
    if prefix.len() < m {
        return Err(invalid(format!(
            "prefix has {} entries, need {m}",
            prefix.len()
        )));
    }
    prefix[..m]
        .iter()
        .map(|p| {
            if p.base() != 2 {
                Err(invalid(format!("permutation {p} is not in base 2")))
            } else {
                Ok(!p.is_identity())
            }
        })
        .collect()
}

pub fn klp_stats(prefix: &[Permutation], m: usize) -> Result<KlpStats> {
    let tau = swaps(prefix, m)?;
    let swapped = tau.iter().filter(|&&t| t).count();
    let s = swapped.max(m - swapped);
    let t = tau.windows(2).filter(|w| w[0] && !w[1]).count();
    Ok(KlpStats { m, s, t })
}

/// Exact `max D*_N` for `N ≤ 2^m` against both structural bounds. Positions
/// past the prefix use the identity.
pub fn klp_check(prefix: &[Permutation], m: usize) -> Result<KlpReport> {
    let stats = klp_stats(prefix, m)?;
    if m >= 40 {
        return Err(Error::ResourceLimit(format!(
            "2^{m} points is beyond desk scale"
        )));
    }
    let seq = SigmaSequence::explicit(prefix[..m].to_vec(), Permutation::identity(2)?)?;
    let mut max_star = Rational::from_integer(0.into());
    for n in 1..=(1u128 << m) {
        let d = exact_discrepancies(&seq, n)?;
        let star = d
            .star
            .exact()
            .cloned()
            .ok_or_else(|| Error::Inconsistent("star discrepancy not exact".into()))?;
        if star > max_star {
            max_star = star;
        }
    }
    let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let (s, t) = (stats.s as i64, stats.t as i64);
    let lower_bound = r(s, 3) + r(t, 48) - r(4, 1);
    let upper_bound = r(s, 3) + r(2 * t, 9) + r(56, 9);
    Ok(KlpReport {
        stats,
        max_star,
        lower_bound,
        upper_bound,
    })
}
