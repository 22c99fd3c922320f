//! Two-dimensional Hammersley sets `{(S(i), i/b^m) : 0 ≤ i < b^m}` built
//! from m digit permutations, the ψ-sum term of their star discrepancy,
//! and an exact brute-force oracle.

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numeric::{div_ln, pow_i128, Rational};
use crate::perm::Permutation;
use crate::psi::{Component, PsiTable};

/// Largest point count the module will build.
pub const MAX_POINTS: i128 = 10_000_000;

/// Largest point count for the O(N²) oracle.
pub const ORACLE_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammersleySpec {
    base: usize,
    sigmas: Vec<Permutation>,
}

impl HammersleySpec {
    pub fn new(sigmas: Vec<Permutation>) -> Result<HammersleySpec> {
        let first = sigmas
            .first()
            .ok_or_else(|| invalid("need at least one permutation"))?;
        let base = first.base();
        if let Some(p) = sigmas.iter().find(|p| p.base() != base) {
            return Err(invalid(format!("permutation {p} is not in base {base}")));
        }
        Ok(HammersleySpec { base, sigmas })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn m(&self) -> usize {
        self.sigmas.len()
    }

    pub fn sigmas(&self) -> &[Permutation] {
        &self.sigmas
    }

    fn count(&self) -> Result<i128> {
        pow_i128(self.base, self.m() as u32)
            .filter(|n| *n <= MAX_POINTS)
            .ok_or_else(|| Error::ResourceLimit(format!("{}^{} points", self.base, self.m())))
    }

    /// Numerators over `b^m`: `(b^m·S(i), i)`.
    pub fn scaled_points(&self) -> Result<Vec<(u64, u64)>> {
        let n = self.count()? as u64;
        let b = self.base as u64;
        Ok((0..n)
            .map(|i| {
                let mut x = 0u64;
                let mut rest = i;
                // Digit j carries weight b^{m−1−j}.
                let mut weight = n / b;
                for s in &self.sigmas {
                    x += s.apply((rest % b) as usize) as u64 * weight;
                    rest /= b;
                    weight /= b.max(1);
                }
                (x, i)
            })
            .collect())
    }
}

pub fn points(spec: &HammersleySpec) -> Result<Vec<(Rational, Rational)>> {
    let n = spec.count()?;
    let den = num_bigint::BigInt::from(n);
    Ok(spec
        .scaled_points()?
        .into_iter()
        .map(|(x, y)| {
            (
                Rational::new(x.into(), den.clone()),
                Rational::new(y.into(), den.clone()),
            )
        })
        .collect())
}

/// `max(max_n Σ_j ψ⁺_{σ_{j−1}}(n/b^j), max_n Σ_j ψ⁻_{σ_{j−1}}(n/b^j))` over
/// `1 ≤ n ≤ b^m`, the star discrepancy up to a bounded correction.
pub fn star_formula_term(spec: &HammersleySpec) -> Result<Rational> {
    let n_max = spec.count()?;
    let b = spec.base as i128;
    let m = spec.m() as u32;
    let tables: Vec<PsiTable> = spec.sigmas.iter().map(PsiTable::new).collect();
    // Σ_j b^{m−j}·b^j·ψ(n/b^j), all integers.
    let sum = |comp: Component, n: i128| -> i128 {
        (1..=m)
            .map(|j| {
                let unit = b.pow(j - 1);
                let t = &tables[(j - 1) as usize];
                b.pow(m - j) * t.scaled_value(comp, n % (unit * b), unit)
            })
            .sum()
    };
    let best = (1..=n_max)
        .into_par_iter()
        .map(|n| sum(Component::Plus, n).max(sum(Component::Minus, n)))
        .max()
        .expect("nonempty");
    Ok(Rational::new(best.into(), n_max.into()))
}

/// Unnormalized star discrepancy `sup |A([0,α)×[0,β)) − αβN|` of a finite
/// set in [0,1]². The supremum is attained in the limit at corners of the
/// grid `(X ∪ {1}) × (Y ∪ {1})`: excess points via closed boxes, deficit via
/// open boxes.
pub fn brute_star_2d(points: &[(Rational, Rational)]) -> Result<Rational> {
    if points.is_empty() {
        return Err(invalid("point set is empty"));
    }
    if points.len() > ORACLE_POINTS {
        return Err(Error::ResourceLimit(format!(
            "{} points exceed the oracle limit",
            points.len()
        )));
    }
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if points
        .iter()
        .any(|(x, y)| *x < zero || *x > one || *y < zero || *y > one)
    {
        return Err(invalid("points must lie in [0, 1]²"));
    }
    let l = points
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, (x, y)| {
            acc.lcm(x.denom()).lcm(y.denom())
        });
    let l: i128 = i128::try_from(&l)
        .ok()
        .filter(|v| *v < 1 << 40)
        .ok_or_else(|| Error::ResourceLimit("common denominator too large".into()))?;
    let scale = |r: &Rational| -> i128 {
        i128::try_from(&(r * Rational::from_integer(l.into())).to_integer()).expect("fits")
    };
    let pts: Vec<(i128, i128)> = points.iter().map(|(x, y)| (scale(x), scale(y))).collect();
    let n = pts.len() as i128;
    let mut xs: Vec<i128> = pts.iter().map(|p| p.0).chain([l]).collect();
    let mut ys: Vec<i128> = pts.iter().map(|p| p.1).chain([l]).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let rank = |v: i128| ys.binary_search(&v).expect("present");
    let best = xs
        .par_iter()
        .map(|&a| {
            let mut open = vec![0i128; ys.len()];
            let mut closed = vec![0i128; ys.len()];
            for &(x, y) in &pts {
                if x < a {
                    open[rank(y)] += 1;
                }
                if x <= a {
                    closed[rank(y)] += 1;
                }
            }
            let (mut le, mut lt) = (0i128, 0i128);
            let mut best = 0i128;
            for (r, &c) in ys.iter().enumerate() {
                le += closed[r];
                let vol = n * a * c;
                best = best.max(le * l * l - vol).max(vol - lt * l * l);
                lt += open[r];
            }
            best
        })
        .max()
        .expect("nonempty");
    Ok(Rational::new(best.into(), (l * l).into()))
}

/// `(term, brute, brute − term)` for one set.
pub fn c_m(spec: &HammersleySpec) -> Result<(Rational, Rational, Rational)> {
    let term = star_formula_term(spec)?;
    let brute = brute_star_2d(&points(spec)?)?;
    let gap = &brute - &term;
    Ok((term, brute, gap))
}

fn split_vec(first: &Permutation, second: &Permutation, m: usize) -> Result<Vec<Permutation>> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let lead = m / 2;
    Ok(std::iter::repeat_n(first.clone(), lead)
        .chain(std::iter::repeat_n(second.clone(), m - lead))
        .collect())
}

/// `⌊m/2⌋` copies of id followed by `⌈m/2⌉` copies of τ.
pub fn itau_vec(b: usize, m: usize) -> Result<Vec<Permutation>> {
    split_vec(&Permutation::identity(b)?, &Permutation::tau(b)?, m)
}

/// Same split with σ and `τ∘σ`.
pub fn sigma_sbar_vec(sigma: &Permutation, m: usize) -> Result<Vec<Permutation>> {
    split_vec(sigma, &sigma.swapped(), m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItauRow {
    pub m: usize,
    pub term: Rational,
    /// Enclosure of `term / (m·log b)`.
    pub ratio: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItauReport {
    pub base: usize,
    pub rows: Vec<ItauRow>,
    /// Limit numerator over `log b`.
    pub limit: Rational,
    pub limit_f64: (f64, f64),
}

impl ItauReport {
    /// Relative distance of the last ratio from the limit.
    pub fn last_relative_gap(&self) -> f64 {
        let last = self.rows.last().expect("m_max ≥ 1");
        let mid = 0.5 * (last.ratio.0 + last.ratio.1);
        let lim = 0.5 * (self.limit_f64.0 + self.limit_f64.1);
        (mid - lim).abs() / lim
    }
}

/// Formula terms of the i-τ sets for `m = 1..=m_max` against the limit
/// `(b−1)/(8 log b)` (odd b) or `b²/(8(b+1) log b)` (even b).
pub fn itau_asymptotic_check(b: usize, m_max: usize) -> Result<ItauReport> {
    if !(2..=5).contains(&b) || !(1..=8).contains(&m_max) {
        return Err(invalid("itau check expects 2 ≤ b ≤ 5 and 1 ≤ m_max ≤ 8"));
    }
    let rows = (1..=m_max)
        .map(|m| {
            let term = star_formula_term(&HammersleySpec::new(itau_vec(b, m)?)?)?;
            let ratio = div_ln(&(&term / Rational::from_integer(m.into())), b);
            Ok(ItauRow { m, term, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let bb = b as i64;
    let limit = if b % 2 == 1 {
        Rational::new((bb - 1).into(), 8.into())
    } else {
        Rational::new((bb * bb).into(), (8 * (bb + 1)).into())
    };
    let limit_f64 = div_ln(&limit, b);
    Ok(ItauReport {
        base: b,
        rows,
        limit,
        limit_f64,
    })
}
