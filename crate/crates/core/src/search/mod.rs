//! Pruned-tree search for permutations with small max ψ.
//!
//! The maximum of ψ over [0, 1) sits on the grid k/b, and ψ(k/b) depends
//! only on the set `V_k = {σ(0), …, σ(k−1)}`. So σ passes the threshold
//! iff every set along its chain `V_1 ⊂ V_2 ⊂ … ⊂ V_{b−1}` does. The
//! search works on the lattice of subsets: a set is *alive* if it passes
//! and some one-element extension is alive (the full set always is).
//! Survivors are exactly the chains of alive sets, and aliveness is
//! memoized by bitmask.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use dashmap::DashMap;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numeric::Rational;
use crate::perm::{intricate, Permutation};
use crate::psi::{max_psi, Component};

/// Largest base the bitmask representation supports.
pub const MAX_BASE: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub base: usize,
    /// Survivors satisfy `max ψ < threshold` (strict).
    pub threshold: Rational,
    /// Fix σ(0) = 0 and keep one member of each reflection pair.
    pub symmetry_reduction: bool,
    /// Limit on evaluated nodes plus emitted survivors.
    pub node_budget: u64,
    /// Attach `max F_2 / 2` to each survivor and sort by it.
    pub stage2: bool,
    /// Component whose grid maximum is compared with the threshold.
    pub prune_on: Component,
    /// Switch off to search the plain prefix tree without the set memo.
    pub memoize: bool,
}

impl SearchConfig {
    pub fn new(base: usize, threshold: Rational) -> SearchConfig {
        SearchConfig {
            base,
            threshold,
            symmetry_reduction: true,
            node_budget: 50_000_000,
            stage2: false,
            prune_on: Component::Total,
            memoize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Survivor {
    pub perm: Permutation,
    /// Max of the pruned component.
    pub max_psi: Rational,
    pub f2_half_max: Option<Rational>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub survivors: Vec<Survivor>,
    pub stats: SearchStats,
    /// False when the budget ran out; survivors are then a subset.
    pub complete: bool,
}

struct Ctx<'a> {
    b: usize,
    /// Threshold as `num/den`; a set passes iff `den·(b·ψ) < b·num`.
    num: i128,
    den: i128,
    comp: Component,
    memo: Option<&'a DashMap<u128, bool>>,
    nodes: AtomicU64,
    pruned: AtomicU64,
    hits: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
}

/// `b·ψ(k/b)` for the set `mask` of size k.
pub(crate) fn set_value_scaled(b: usize, mask: u128, comp: Component) -> i64 {
    let k = mask.count_ones() as i64;
    let bb = b as i64;
    let (mut below, mut hi, mut lo) = (0i64, 0i64, 0i64);
    for h in 0..b {
        if h > 0 && mask >> (h - 1) & 1 == 1 {
            below += 1;
        }
        let v = bb * below - h as i64 * k;
        hi = hi.max(v);
        lo = lo.max(-v);
    }
    match comp {
        Component::Plus => hi,
        Component::Minus => lo,
        Component::Total => hi + lo,
    }
}

impl Ctx<'_> {
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn full(&self) -> u128 {
        if self.b == 128 {
            u128::MAX
        } else {
            (1u128 << self.b) - 1
        }
    }

    fn passes(&self, mask: u128) -> bool {
        if mask == self.full() {
            return true;
        }
        let v = set_value_scaled(self.b, mask, self.comp) as i128;
        let ok = self.den * v < self.b as i128 * self.num;
        if !ok {
            self.pruned.fetch_add(1, Ordering::Relaxed);
        }
        ok
    }

    fn alive(&self, mask: u128) -> bool {
        if mask == self.full() {
            return true;
        }
        let memo = self.memo.expect("alive is only used with the memo");
        if let Some(v) = memo.get(&mask) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return *v;
        }
        if !self.tick() {
            return false;
        }
        let result = self.passes(mask)
            && (0..self.b).any(|v| mask >> v & 1 == 0 && self.alive(mask | 1 << v));
        if !self.aborted.load(Ordering::Relaxed) {
            memo.insert(mask, result);
        }
        result
    }

    /// Children worth descending into from `mask`.
    fn next(&self, mask: u128) -> Vec<usize> {
        (0..self.b)
            .filter(|&v| mask >> v & 1 == 0)
            .filter(|&v| {
                let child = mask | 1 << v;
                match self.memo {
                    Some(_) => self.alive(child),
                    None => self.tick() && self.passes(child),
                }
            })
            .collect()
    }

    fn collect(&self, prefix: &mut Vec<usize>, mask: u128, out: &mut Vec<Vec<usize>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if prefix.len() == self.b {
            if self.tick() {
                out.push(prefix.clone());
            }
            return;
        }
        for v in self.next(mask) {
            prefix.push(v);
            self.collect(prefix, mask | 1 << v, out);
            prefix.pop();
        }
    }
}

fn threshold_parts(t: &Rational) -> Result<(i128, i128)> {
    if !t.is_positive() {
        return Err(invalid(format!("threshold {t} must be positive")));
    }
    let num = t.numer().to_i128().filter(|n| n.abs() < 1 << 60);
    let den = t.denom().to_i128().filter(|d| *d < 1 << 60);
    match (num, den) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(invalid(format!(
            "threshold {t} is too large to compare exactly"
        ))),
    }
}

pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    let b = cfg.base;
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if b > MAX_BASE {
        return Err(invalid(format!("search supports bases up to {MAX_BASE}")));
    }
    if cfg.node_budget == 0 {
        return Err(invalid("node budget must be positive"));
    }
    let (num, den) = threshold_parts(&cfg.threshold)?;
    let memo = DashMap::new();
    let ctx = Ctx {
        b,
        num,
        den,
        comp: cfg.prune_on,
        memo: cfg.memoize.then_some(&memo),
        nodes: AtomicU64::new(0),
        pruned: AtomicU64::new(0),
        hits: AtomicU64::new(0),
        budget: cfg.node_budget,
        aborted: AtomicBool::new(false),
    };
    let firsts: Vec<usize> = if cfg.symmetry_reduction {
        vec![0]
    } else {
        (0..b).collect()
    };
    // Split the work on the first two images.
    let roots: Vec<(usize, usize)> = firsts
        .iter()
        .filter(|&&f| ctx.next(0).contains(&f))
        .flat_map(|&f| ctx.next(1 << f).into_iter().map(move |s| (f, s)))
        .collect();
    let mut chains: Vec<Vec<usize>> = roots
        .par_iter()
        .map(|&(f, s)| {
            let mut out = Vec::new();
            let mut prefix = vec![f, s];
            ctx.collect(&mut prefix, 1 << f | 1 << s, &mut out);
            out
        })
        .flatten()
        .collect();
    if cfg.symmetry_reduction {
        chains.retain(|c| {
            let refl: Vec<usize> = c.iter().map(|&v| (b - v) % b).collect();
            *c <= refl
        });
    }
    let mut survivors: Vec<Survivor> = chains
        .into_par_iter()
        .map(|c| {
            let perm = Permutation::new(c).expect("chains are permutations");
            let max_psi = max_psi(&perm, cfg.prune_on).0;
            let f2_half_max = cfg.stage2.then(|| f2_half_max(&perm));
            Survivor {
                perm,
                max_psi,
                f2_half_max,
            }
        })
        .collect();
    sort_survivors(&mut survivors);
    let stats = SearchStats {
        nodes: ctx.nodes.load(Ordering::Relaxed),
        pruned: ctx.pruned.load(Ordering::Relaxed),
        memo_hits: ctx.hits.load(Ordering::Relaxed),
    };
    Ok(SearchResult {
        survivors,
        stats,
        complete: !ctx.aborted.load(Ordering::Relaxed),
    })
}

fn sort_survivors(s: &mut [Survivor]) {
    s.sort_by(|a, c| {
        let key = |x: &Survivor| x.f2_half_max.clone().unwrap_or_else(|| x.max_psi.clone());
        key(a)
            .cmp(&key(c))
            .then_with(|| a.perm.images().cmp(c.perm.images()))
    });
}

/// `max F_2 / 2`, read off ψ of `σ·σ` in base b².
pub fn f2_half_max(sigma: &Permutation) -> Rational {
    let (m, _) = max_psi(&intricate(sigma, sigma), Component::Total);
    m / Rational::from_integer(2.into())
}

/// Scores `max F_2 / 2` and sorts ascending (stable).
pub fn rank_f2(perms: &[Permutation]) -> Result<Vec<(Permutation, Rational)>> {
    if let Some(first) = perms.first() {
        if let Some(bad) = perms.iter().find(|p| p.base() != first.base()) {
            return Err(invalid(format!(
                "mixed bases {} and {}",
                first.base(),
                bad.base()
            )));
        }
    }
    let mut out: Vec<(Permutation, Rational)> = perms
        .par_iter()
        .map(|p| (p.clone(), f2_half_max(p)))
        .collect();
    out.sort_by(|a, c| a.1.cmp(&c.1));
    Ok(out)
}

/// Every σ in the symmetric group with `max comp < threshold`, by plain
/// enumeration. Only for small bases.
pub fn naive_search(b: usize, threshold: &Rational, comp: Component) -> Result<Vec<Permutation>> {
    if !(2..=10).contains(&b) {
        return Err(invalid("naive enumeration is limited to bases 2..=10"));
    }
    let mut v: Vec<usize> = (0..b).collect();
    let mut out = Vec::new();
    loop {
        let p = Permutation::new(v.clone())?;
        if &max_psi(&p, comp).0 < threshold {
            out.push(p);
        }
        if !next_permutation(&mut v) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n)
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests;
