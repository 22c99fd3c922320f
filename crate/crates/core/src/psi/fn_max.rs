//! Maxima of `F_n(x) = Σ_{j<n} f(b^j·x)` for a ψ component f.
//!
//! F_n is convex between consecutive points of the grid `k/b^n`, so its
//! maximum sits on that grid. With `x = k/b^n` the j-th term only sees the
//! low digits of k, which lets a search fix digits from the least
//! significant end. The tail bound uses `max F_r` for the remaining `r`
//! digits, which is never weaker than `r·max f`.

use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::{Component, PsiTable};
use crate::error::{invalid, Error, Result};
use crate::numeric::{pow_i128, Rational};

/// Exhaustive scans stop at this many grid points.
pub const EXHAUSTIVE_LIMIT: i128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnMode {
    Exhaustive,
    BranchAndBound,
}

/// `max F_n`, reached first (smallest k) at `k/b^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnMax {
    pub n: usize,
    pub value: Rational,
    pub argmax: Rational,
    /// Base-b digits of the argmax after the radix point, most significant first.
    pub digits: Vec<usize>,
    pub nodes: u64,
}

fn term(table: &PsiTable, comp: Component, k: i128, b: i128, level: u32) -> i128 {
    let unit = b.pow(level - 1);
    table.scaled_value(comp, k % (unit * b), unit)
}

fn finish(table: &PsiTable, n: usize, scaled: i128, k: i128, nodes: u64) -> FnMax {
    let b = table.base();
    let den = pow_i128(b, n as u32).expect("checked by caller");
    let mut digits = vec![0usize; n];
    let mut rest = k;
    for j in (0..n).rev() {
        digits[j] = (rest % b as i128) as usize;
        rest /= b as i128;
    }
    FnMax {
        n,
        value: Rational::new(scaled.into(), den.into()),
        argmax: Rational::new(k.into(), den.into()),
        digits,
        nodes,
    }
}

fn exhaustive(table: &PsiTable, comp: Component, n: usize) -> Result<FnMax> {
    let b = table.base() as i128;
    let total = pow_i128(table.base(), n as u32)
        .filter(|t| *t <= EXHAUSTIVE_LIMIT)
        .ok_or_else(|| {
            Error::ResourceLimit(format!("{}^{n} grid points exceed the exhaustive cap", b))
        })?;
    let best = (0..total)
        .into_par_iter()
        .map(|k| {
            let s: i128 = (1..=n as u32)
                .map(|i| b.pow(n as u32 - i) * term(table, comp, k, b, i))
                .sum();
            (s, -k)
        })
        .max()
        .expect("nonempty grid");
    Ok(finish(table, n, best.0, -best.1, total as u64))
}

struct Shared {
    best_value: AtomicI64,
    best: Mutex<(i128, i128)>,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
}

impl Shared {
    fn offer(&self, value: i128, k: i128) {
        let mut guard = self.best.lock().expect("poisoned");
        if value > guard.0 || (value == guard.0 && k < guard.1) {
            *guard = (value, k);
            self.best_value.fetch_max(value as i64, Ordering::SeqCst);
        }
    }

    fn prunes(&self, bound: i128, min_k: i128) -> bool {
        let fast = self.best_value.load(Ordering::SeqCst) as i128;
        if bound < fast {
            return true;
        }
        if bound == fast {
            let guard = self.best.lock().expect("poisoned");
            return bound < guard.0 || (bound == guard.0 && min_k >= guard.1);
        }
        false
    }
}

struct Search<'a> {
    table: &'a PsiTable,
    comp: Component,
    n: usize,
    b: i128,
    /// `b^n · max F_r` for r < n.
    tail: Vec<i128>,
    shared: &'a Shared,
}

impl Search<'_> {
    fn dfs(&self, level: usize, low: i128, partial: i128) {
        if self.shared.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.shared.nodes.fetch_add(1, Ordering::Relaxed) >= self.shared.budget {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return;
        }
        let unit = self.b.pow(level as u32);
        let weight = self.b.pow((self.n - level - 1) as u32);
        let mut children: Vec<(i128, i128)> = (0..self.b)
            .map(|d| {
                let m = low + d * unit;
                let g = self.table.scaled_value(self.comp, m, unit);
                (partial + weight * g, m)
            })
            .collect();
        children.sort_by(|a, c| c.0.cmp(&a.0).then(a.1.cmp(&c.1)));
        for (s, m) in children {
            if level + 1 == self.n {
                self.shared.offer(s, m);
                continue;
            }
            let bound = s + self.tail[self.n - level - 1];
            if self.shared.prunes(bound, m) {
                continue;
            }
            self.dfs(level + 1, m, s);
        }
    }
}

fn branch_and_bound(
    table: &PsiTable,
    comp: Component,
    n: usize,
    prev: &[FnMax],
    budget: u64,
) -> Result<FnMax> {
    let bsz = table.base();
    let b = bsz as i128;
    let scale = pow_i128(bsz, n as u32)
        .ok_or_else(|| Error::ResourceLimit(format!("{b}^{n} overflows")))?;
    let (top, _) = table.max_on_grid(comp);
    let top_scaled = (top * Rational::from_integer(b.into())).to_integer();
    let top_scaled: i128 = i128::try_from(&top_scaled).expect("small");
    if (scale as f64) * (n as f64) * (top_scaled as f64 + 1.0) > 4.0e18 {
        return Err(Error::ResourceLimit(format!(
            "F_{n} in base {b} exceeds the integer range"
        )));
    }
    let mut tail = vec![0i128; n];
    for (r, slot) in tail.iter_mut().enumerate().skip(1) {
        *slot = match prev.iter().find(|f| f.n == r) {
            Some(f) => {
                let v = &f.value * Rational::from_integer(scale.into());
                i128::try_from(&v.to_integer()).expect("fits")
            }
            None => r as i128 * top_scaled * b.pow(n as u32 - 1),
        };
    }
    let shared = Shared {
        best_value: AtomicI64::new(-1),
        best: Mutex::new((-1, i128::MAX)),
        nodes: AtomicU64::new(0),
        budget,
        aborted: AtomicBool::new(false),
    };
    let search = Search {
        table,
        comp,
        n,
        b,
        tail,
        shared: &shared,
    };
    if n == 1 {
        search.dfs(0, 0, 0);
    } else {
        let weight = b.pow(n as u32 - 1);
        let mut roots: Vec<(i128, i128)> = (0..b)
            .map(|d| (weight * table.scaled_value(comp, d, 1), d))
            .collect();
        roots.sort_by(|a, c| c.0.cmp(&a.0).then(a.1.cmp(&c.1)));
        roots.par_iter().for_each(|&(s, m)| {
            if !shared.prunes(s + search.tail[n - 1], m) {
                search.dfs(1, m, s);
            }
        });
    }
    let nodes = shared.nodes.load(Ordering::SeqCst);
    if shared.aborted.load(Ordering::SeqCst) {
        return Err(Error::ResourceLimit(format!(
            "node budget {budget} exhausted at n = {n}"
        )));
    }
    let (value, k) = *shared.best.lock().expect("poisoned");
    Ok(finish(table, n, value, k, nodes))
}

/// `max F_n` over [0, 1] with the smallest maximizing grid point.
pub fn f_n_max(
    table: &PsiTable,
    comp: Component,
    n: usize,
    mode: FnMode,
    budget: u64,
) -> Result<FnMax> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    match mode {
        FnMode::Exhaustive => exhaustive(table, comp, n),
        FnMode::BranchAndBound => {
            let seq = f_n_max_sequence(table, comp, n, budget)?;
            Ok(seq.into_iter().last().expect("n >= 1"))
        }
    }
}

/// `max F_1, …, max F_n`, each bounding the tails of the next. The budget
/// applies to every n separately. Stops with the error at the first n that
/// cannot finish.
pub fn f_n_max_sequence(
    table: &PsiTable,
    comp: Component,
    n: usize,
    budget: u64,
) -> Result<Vec<FnMax>> {
    let (out, err) = f_n_max_prefix(table, comp, n, budget);
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Like [`f_n_max_sequence`] but keeps the maxima finished before a
/// failure, together with the error that stopped it.
pub fn f_n_max_prefix(
    table: &PsiTable,
    comp: Component,
    n: usize,
    budget: u64,
) -> (Vec<FnMax>, Option<Error>) {
    let mut out: Vec<FnMax> = Vec::with_capacity(n);
    for r in 1..=n {
        match branch_and_bound(table, comp, r, &out, budget) {
            Ok(next) => out.push(next),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// `(1/q)·F_q(x̂)` where x̂ repeats `cycle` (most significant digit first)
/// forever. With `reps > 1` the value is recomputed from the cycle repeated
/// `reps` times and must agree.
pub fn f_n_eval_periodic(
    table: &PsiTable,
    comp: Component,
    cycle: &[usize],
    reps: usize,
) -> Result<Rational> {
    let b = table.base();
    if cycle.is_empty() {
        return Err(invalid("cycle must be nonempty"));
    }
    if let Some(d) = cycle.iter().find(|&&d| d >= b) {
        return Err(invalid(format!("digit {d} is not below the base {b}")));
    }
    let value = periodic_value(table, comp, cycle)?;
    if reps > 1 {
        let long: Vec<usize> = cycle
            .iter()
            .copied()
            .cycle()
            .take(cycle.len() * reps)
            .collect();
        if let Ok(check) = periodic_value(table, comp, &long) {
            if check != value {
                return Err(Error::Inconsistent(format!(
                    "cycle value {value} differs from its {reps}-fold repetition {check}"
                )));
            }
        }
    }
    Ok(value)
}

fn periodic_value(table: &PsiTable, comp: Component, cycle: &[usize]) -> Result<Rational> {
    let b = table.base() as i128;
    let q = cycle.len();
    let period = pow_i128(table.base(), q as u32)
        .and_then(|p| p.checked_mul(b * b * b))
        .map(|_| b.pow(q as u32) - 1)
        .ok_or_else(|| Error::ResourceLimit(format!("cycle of length {q} overflows base {b}")))?;
    let mut c = cycle.iter().fold(0i128, |acc, &d| acc * b + d as i128);
    let mut sum = 0i128;
    for _ in 0..q {
        c %= period;
        sum += table.scaled_value(comp, b * c, period);
        c *= b;
    }
    Ok(Rational::new(sum.into(), (b * period * q as i128).into()))
}

/// Value of `(1/q)·F_q` at the periodic point with cycle numerator `c`
/// (`x̂ = c / (b^q − 1)`), scaled by `b·(b^q − 1)`; used by cycle scans.
pub(crate) fn periodic_scaled(
    table: &PsiTable,
    comp: Component,
    c: i128,
    q: u32,
    period: i128,
) -> i128 {
    let b = table.base() as i128;
    let mut c = c % period;
    let mut sum = 0i128;
    for _ in 0..q {
        sum += table.scaled_value(comp, b * c, period);
        c = c * b % period;
    }
    sum
}
