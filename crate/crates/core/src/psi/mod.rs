//! Faure's φ and ψ functions and the sums F_n built from them.
//!
//! Inside piece `k` (x in `[(k−1)/b, k/b)`) every φ_{b,h} is affine. With
//! `t = b·x` each one is an integer line `b·φ = c + s·t`, so ψ⁺ and ψ⁻ are
//! upper envelopes of integer lines and `b^i·ψ(m/b^i)` is always an integer.
//! [`PsiTable`] keeps those envelopes and answers exact queries.

mod fn_max;
mod partial;
mod piecewise;

pub(crate) use fn_max::periodic_scaled;
pub use fn_max::{f_n_eval_periodic, f_n_max, f_n_max_prefix, f_n_max_sequence, FnMax, FnMode};
pub use partial::{partial_psi, prefix_set_value, PartialPsi};
pub use piecewise::{Affine, PiecewiseAffine};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{invalid, Result};
use crate::numeric::{frac, int, Rational};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Plus,
    Minus,
    Total,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Plus, Component::Minus, Component::Total];
}

/// `b·φ = c + s·t` with `t = b·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Line {
    c: i64,
    s: i64,
}

impl Line {
    fn at_int(&self, t: i64) -> i64 {
        self.c + self.s * t
    }
}

/// Lines of every φ_{b,h} on piece `k` (1-based), indexed by h.
fn phi_lines(base: usize, k: usize, last: usize, below: &[i64]) -> Vec<Line> {
    let b = base as i64;
    (0..base)
        .map(|h| {
            let a = below[h];
            if h <= last {
                Line {
                    c: b * a,
                    s: -(h as i64),
                }
            } else {
                Line {
                    c: -b * (k as i64 - a),
                    s: b - h as i64,
                }
            }
        })
        .collect()
}

/// `below[h] = #{i < k : σ(i) < h}` for every piece of a (partial) image list.
fn below_counts(b: usize, images: &[usize]) -> Vec<Vec<i64>> {
    let mut present = vec![0i64; b];
    let mut out = Vec::with_capacity(images.len());
    for &v in images {
        present[v] = 1;
        let mut below = vec![0i64; b];
        for h in 1..b {
            below[h] = below[h - 1] + present[h - 1];
        }
        out.push(below);
    }
    out
}

/// Upper envelope on the piece `[k−1, k]` in t, left to right.
#[derive(Debug, Clone)]
struct Hull {
    lines: Vec<Line>,
    starts: Vec<Ratio<i64>>,
}

impl Hull {
    fn build(lines: &[Line], lo: i64, hi: i64) -> Hull {
        let mut cur = *lines
            .iter()
            .max_by(|a, b| (a.at_int(lo), a.s).cmp(&(b.at_int(lo), b.s)))
            .expect("nonempty");
        let mut t0 = Ratio::from_integer(lo);
        let mut hull = Hull {
            lines: vec![cur],
            starts: vec![t0],
        };
        let end = Ratio::from_integer(hi);
        loop {
            let mut next: Option<(Ratio<i64>, Line)> = None;
            for l in lines.iter().filter(|l| l.s > cur.s) {
                let t = Ratio::new(cur.c - l.c, l.s - cur.s);
                if t < t0 {
                    continue;
                }
                let take = match &next {
                    None => true,
                    Some((bt, bl)) => t < *bt || (t == *bt && l.s > bl.s),
                };
                if take {
                    next = Some((t, *l));
                }
            }
            match next {
                Some((t, l)) if t < end => {
                    cur = l;
                    t0 = t;
                    hull.lines.push(l);
                    hull.starts.push(t);
                }
                _ => break,
            }
        }
        hull
    }

    fn max_at(&self, unit: i128, num: i128) -> i128 {
        self.lines
            .iter()
            .map(|l| l.c as i128 * unit + l.s as i128 * num)
            .max()
            .expect("nonempty")
    }

    fn negated_lines(lines: &[Line]) -> Vec<Line> {
        lines.iter().map(|l| Line { c: -l.c, s: -l.s }).collect()
    }
}

/// ψ⁺ and ψ⁻ envelopes on the first `images.len()` pieces.
fn piece_hulls(b: usize, images: &[usize]) -> (Vec<Hull>, Vec<Hull>) {
    let counts = below_counts(b, images);
    let mut plus = Vec::with_capacity(images.len());
    let mut minus = Vec::with_capacity(images.len());
    for (k, &last) in (1..=images.len()).zip(images) {
        let lines = phi_lines(b, k, last, &counts[k - 1]);
        let (lo, hi) = (k as i64 - 1, k as i64);
        plus.push(Hull::build(&lines, lo, hi));
        minus.push(Hull::build(&Hull::negated_lines(&lines), lo, hi));
    }
    (plus, minus)
}

/// Piece list of ψ⁺ + ψ⁻ assembled from per-piece envelopes.
fn assemble(b: usize, plus: &[Hull], minus: &[Hull]) -> (Vec<Rational>, Vec<Affine>) {
    let br = int(b as i128);
    let mut breaks = Vec::new();
    let mut pieces = Vec::new();
    for (hp, hm) in plus.iter().zip(minus) {
        let mut starts: Vec<Ratio<i64>> = hp.starts.iter().chain(&hm.starts).copied().collect();
        starts.sort();
        starts.dedup();
        for t in starts {
            let ip = hp.starts.partition_point(|s| *s <= t) - 1;
            let im = hm.starts.partition_point(|s| *s <= t) - 1;
            let (lp, lm) = (hp.lines[ip], hm.lines[im]);
            breaks.push(Rational::new((*t.numer()).into(), (*t.denom()).into()) / &br);
            pieces.push(Affine::new(
                int((lp.s + lm.s) as i128),
                int((lp.c + lm.c) as i128) / &br,
            ));
        }
    }
    (breaks, pieces)
}

/// The ψ⁺/ψ⁻ envelopes of one permutation, ready for exact queries.
#[derive(Debug, Clone)]
pub struct PsiTable {
    perm: Permutation,
    plus: Vec<Hull>,
    minus: Vec<Hull>,
    grid_plus: Vec<i64>,
    grid_minus: Vec<i64>,
}

impl PsiTable {
    pub fn new(perm: &Permutation) -> PsiTable {
        let (plus, minus) = piece_hulls(perm.base(), perm.images());
        let (grid_plus, grid_minus) = grid_values(perm);
        PsiTable {
            perm: perm.clone(),
            plus,
            minus,
            grid_plus,
            grid_minus,
        }
    }

    pub fn base(&self) -> usize {
        self.perm.base()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// `b·f(k/b)` for `k = 0..=b`.
    pub fn grid_scaled(&self, comp: Component) -> Vec<i64> {
        match comp {
            Component::Plus => self.grid_plus.clone(),
            Component::Minus => self.grid_minus.clone(),
            Component::Total => self
                .grid_plus
                .iter()
                .zip(&self.grid_minus)
                .map(|(p, m)| p + m)
                .collect(),
        }
    }

    /// Global maximum over [0, 1) (always on the grid k/b) and its smallest argmax.
    pub fn max_on_grid(&self, comp: Component) -> (Rational, Rational) {
        max_of_grid(&self.grid_scaled(comp))
    }

    /// `(b·unit)·f(num / (b·unit))` for `0 ≤ num < b·unit`.
    pub fn scaled_value(&self, comp: Component, num: i128, unit: i128) -> i128 {
        let piece = (num / unit) as usize;
        match comp {
            Component::Plus => self.plus[piece].max_at(unit, num),
            Component::Minus => self.minus[piece].max_at(unit, num),
            Component::Total => {
                self.plus[piece].max_at(unit, num) + self.minus[piece].max_at(unit, num)
            }
        }
    }

    /// Exact value of the periodic extension at any rational.
    pub fn eval(&self, comp: Component, x: &Rational) -> Rational {
        let x = frac(x);
        let b = BigInt::from(self.base());
        let (p, q) = (x.numer(), x.denom());
        let bp = &b * p;
        let piece = (&bp / q).to_usize().expect("piece index");
        let best = |hull: &Hull| {
            hull.lines
                .iter()
                .map(|l| BigInt::from(l.c) * q + BigInt::from(l.s) * &bp)
                .max()
                .expect("nonempty")
        };
        let num = match comp {
            Component::Plus => best(&self.plus[piece]),
            Component::Minus => best(&self.minus[piece]),
            Component::Total => best(&self.plus[piece]) + best(&self.minus[piece]),
        };
        Rational::new(num, b * q)
    }

    fn hulls(&self, comp: Component) -> Vec<&Hull> {
        match comp {
            Component::Plus => self.plus.iter().collect(),
            Component::Minus => self.minus.iter().collect(),
            Component::Total => unreachable!("total is assembled from both envelopes"),
        }
    }

    /// Every point of [0, 1) where `comp` can change slope.
    pub fn breakpoints(&self, comp: Component) -> Vec<Rational> {
        let b = int(self.base() as i128);
        let mut out: Vec<Rational> = Vec::new();
        let comps: &[Component] = match comp {
            Component::Total => &[Component::Plus, Component::Minus],
            Component::Plus => &[Component::Plus],
            Component::Minus => &[Component::Minus],
        };
        for c in comps {
            for hull in self.hulls(*c) {
                for t in &hull.starts {
                    out.push(Rational::new((*t.numer()).into(), (*t.denom()).into()) / &b);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Exact piece list of `comp`, canonicalized.
    pub fn function(&self, comp: Component) -> PiecewiseAffine {
        let b = int(self.base() as i128);
        let single = |hulls: &[Hull]| {
            let mut breaks = Vec::new();
            let mut pieces = Vec::new();
            for hull in hulls {
                for (l, t) in hull.lines.iter().zip(&hull.starts) {
                    breaks.push(Rational::new((*t.numer()).into(), (*t.denom()).into()) / &b);
                    pieces.push(Affine::new(int(l.s as i128), int(l.c as i128) / &b));
                }
            }
            PiecewiseAffine::new(breaks, pieces)
                .expect("hull pieces are ordered")
                .canonicalize()
        };
        match comp {
            Component::Plus => single(&self.plus),
            Component::Minus => single(&self.minus),
            Component::Total => single(&self.plus).add(&single(&self.minus)),
        }
    }

    pub fn triple(&self) -> PsiTriple {
        PsiTriple {
            base: self.base(),
            perm: self.perm.clone(),
            plus: self.function(Component::Plus),
            minus: self.function(Component::Minus),
            total: self.function(Component::Total),
        }
    }

    /// Slopes of ψ⁺ and ψ⁻ on [0, 1/b): `b−1−σ(0)` and `σ(0)`.
    pub fn near_zero_slopes(&self) -> (i64, i64) {
        near_zero_slopes(&self.perm)
    }
}

pub fn near_zero_slopes(perm: &Permutation) -> (i64, i64) {
    let s0 = perm.apply(0) as i64;
    (perm.base() as i64 - 1 - s0, s0)
}

/// ψ⁺, ψ⁻ and ψ of one permutation as exact piece lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiTriple {
    pub base: usize,
    pub perm: Permutation,
    pub plus: PiecewiseAffine,
    pub minus: PiecewiseAffine,
    pub total: PiecewiseAffine,
}

impl PsiTriple {
    pub fn get(&self, comp: Component) -> &PiecewiseAffine {
        match comp {
            Component::Plus => &self.plus,
            Component::Minus => &self.minus,
            Component::Total => &self.total,
        }
    }
}

pub fn psi(perm: &Permutation) -> PsiTriple {
    PsiTable::new(perm).triple()
}

/// φ_{b,h}^σ with its b pieces left unmerged.
pub fn phi(perm: &Permutation, h: usize) -> Result<PiecewiseAffine> {
    let b = perm.base();
    if h >= b {
        return Err(invalid(format!("h = {h} must be below the base {b}")));
    }
    let counts = below_counts(b, perm.images());
    let br = int(b as i128);
    let mut breaks = Vec::with_capacity(b);
    let mut pieces = Vec::with_capacity(b);
    for k in 1..=b {
        let line = phi_lines(b, k, perm.apply(k - 1), &counts[k - 1])[h];
        breaks.push(int(k as i128 - 1) / &br);
        pieces.push(Affine::new(int(line.s as i128), int(line.c as i128) / &br));
    }
    PiecewiseAffine::new(breaks, pieces)
}

/// `b·ψ⁺(k/b)` and `b·ψ⁻(k/b)` for `k = 0..=b` in O(b²), without envelopes.
/// At `t = k` both branches of φ agree, so `b·φ_h(k/b) = b·A_k(h) − h·k`.
pub fn grid_values(perm: &Permutation) -> (Vec<i64>, Vec<i64>) {
    let b = perm.base();
    let mut present = vec![false; b];
    let mut plus = vec![0i64; b + 1];
    let mut minus = vec![0i64; b + 1];
    for k in 1..=b {
        present[perm.apply(k - 1)] = true;
        let (mut below, mut hi, mut lo) = (0i64, 0i64, 0i64);
        for h in 0..b {
            if h > 0 && present[h - 1] {
                below += 1;
            }
            let v = b as i64 * below - (h * k) as i64;
            hi = hi.max(v);
            lo = lo.max(-v);
        }
        plus[k] = hi;
        minus[k] = lo;
    }
    (plus, minus)
}

fn max_of_grid(grid: &[i64]) -> (Rational, Rational) {
    let b = grid.len() - 1;
    let (k, v) =
        grid[..b].iter().enumerate().fold(
            (0usize, i64::MIN),
            |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc },
        );
    (
        Rational::new(v.into(), b.into()),
        Rational::new(k.into(), b.into()),
    )
}

/// Exact `max ψ` of one component, with its smallest argmax.
pub fn max_psi(perm: &Permutation, comp: Component) -> (Rational, Rational) {
    let (p, m) = grid_values(perm);
    let grid: Vec<i64> = match comp {
        Component::Plus => p,
        Component::Minus => m,
        Component::Total => p.iter().zip(&m).map(|(a, b)| a + b).collect(),
    };
    max_of_grid(&grid)
}

#[cfg(test)]
mod tests;
