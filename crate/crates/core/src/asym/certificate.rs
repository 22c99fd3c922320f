//! Upper bounds on α from a potential function.
//!
//! Write `T(x) = {b·x}`. For any bounded `V` on the circle,
//! `Σ_{j<n} f(T^j x) = Σ_{j<n} g(T^j x) + V(x) − V(T^n x)` with
//! `g = f + V − V∘T`, so `max F_n / n ≤ max g + 2‖V‖/n` and `α ≤ max g`.
//! Take `V` piecewise linear on nodes `G` (with `V(0) = 0`). Then `g` is
//! continuous and piecewise linear with corners in
//! `W = G ∪ {(g + d)/b}`, so `max g` is a finite maximum over `W`.
//! A float LP chooses `V`; the bound itself is re-evaluated exactly.

use std::collections::BTreeMap;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{frac, limit_denominator, to_f64, Rational};
use crate::psi::{Component, PsiTable};

/// Rows whose float slack is below this are treated as tight.
const TIGHT: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Exact `max g` for the potential below.
    pub bound: Rational,
    /// Potential nodes in [0, 1), starting at 0.
    pub nodes: Vec<Rational>,
    /// `V` at each node.
    pub potential: Vec<Rational>,
    /// Number of corner points checked.
    pub checked: usize,
}

/// Position of `z` between nodes: `(i, λ)` with `z = (1−λ)·G[i] + λ·G[i+1]`,
/// where `G[len]` stands for 1 ≡ 0.
fn locate(nodes: &[Rational], z: &Rational) -> (usize, Rational) {
    let i = nodes.partition_point(|g| g <= z) - 1;
    let right = nodes
        .get(i + 1)
        .cloned()
        .unwrap_or_else(|| Rational::from_integer(1.into()));
    let lam = (z - &nodes[i]) / (right - &nodes[i]);
    (i, lam)
}

struct Row {
    f: Rational,
    at: (usize, Rational),
    image: (usize, Rational),
}

impl Row {
    /// Coefficients of `V(w) − V(T w)` by node index.
    fn coefficients(&self, n: usize) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        let one = Rational::from_integer(1.into());
        let mut add = |k: usize, v: Rational| {
            let e = out.entry(k % n).or_insert_with(Rational::zero);
            *e += v;
        };
        add(self.at.0, &one - &self.at.1);
        add(self.at.0 + 1, self.at.1.clone());
        add(self.image.0, -(&one - &self.image.1));
        add(self.image.0 + 1, -self.image.1.clone());
        out.retain(|k, v| *k != 0 && !v.is_zero());
        out
    }

    fn g(&self, potential: &[Rational]) -> Rational {
        let n = potential.len();
        let one = Rational::from_integer(1.into());
        let at = |(i, lam): &(usize, Rational)| {
            &potential[*i] * (&one - lam) + &potential[(i + 1) % n] * lam
        };
        &self.f + at(&self.at) - at(&self.image)
    }
}

/// Nodes: 0, the breakpoints of f, the given points, and `levels` rounds of
/// preimages under T.
fn nodes(table: &PsiTable, comp: Component, seeds: &[Rational], levels: usize) -> Vec<Rational> {
    let b = Rational::from_integer(table.base().into());
    let mut g: Vec<Rational> = table.breakpoints(comp);
    g.push(Rational::zero());
    g.extend(seeds.iter().map(frac));
    g.sort();
    g.dedup();
    for _ in 0..levels {
        let mut next = g.clone();
        for x in &g {
            for d in 0..table.base() {
                next.push((x + Rational::from_integer(d.into())) / &b);
            }
        }
        next.sort();
        next.dedup();
        g = next;
    }
    g
}

fn corners(table: &PsiTable, g: &[Rational]) -> Vec<Rational> {
    let b = Rational::from_integer(table.base().into());
    let mut w: Vec<Rational> = g.to_vec();
    for x in g {
        for d in 1..table.base() {
            w.push((x + Rational::from_integer(d.into())) / &b);
        }
        w.push(x / &b);
    }
    w.sort();
    w.dedup();
    w
}

/// Best potential certificate for `comp` with nodes seeded by `seeds`.
pub fn certify(
    table: &PsiTable,
    comp: Component,
    seeds: &[Rational],
    levels: usize,
) -> Result<Certificate> {
    let g = nodes(table, comp, seeds, levels);
    let w = corners(table, &g);
    let b = Rational::from_integer(table.base().into());
    let rows: Vec<Row> = w
        .iter()
        .map(|x| Row {
            f: table.eval(comp, x),
            at: locate(&g, x),
            image: locate(&g, &frac(&(x * &b))),
        })
        .collect();
    let n = g.len();
    let coeffs: Vec<BTreeMap<usize, Rational>> = rows.iter().map(|r| r.coefficients(n)).collect();

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let free = (f64::NEG_INFINITY, f64::INFINITY);
    let vars: Vec<_> = (1..n).map(|_| lp.add_var(0.0, free)).collect();
    let t = lp.add_var(1.0, free);
    for (row, c) in rows.iter().zip(&coeffs) {
        let mut expr: Vec<(microlp::Variable, f64)> =
            c.iter().map(|(k, v)| (vars[k - 1], to_f64(v))).collect();
        expr.push((t, -1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, -to_f64(&row.f));
    }
    let solution = lp
        .solve()
        .map_err(|e| Error::ResourceLimit(format!("potential LP failed: {e}")))?
        .into_solution()
        .map_err(|_| Error::ResourceLimit("potential LP was interrupted".into()))?;
    let v_float: Vec<f64> = std::iter::once(0.0)
        .chain(vars.iter().map(|v| solution.var_value(*v)))
        .collect();
    let t_float = solution.var_value(t);

    let exact_bound =
        |potential: &[Rational]| rows.iter().map(|r| r.g(potential)).max().expect("nonempty");
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    for den in [1_000i64, 100_000, 10_000_000] {
        let d = BigInt::from(den);
        candidates.push(
            v_float
                .iter()
                .map(|&v| limit_denominator(&Rational::from_float(v).expect("finite"), &d))
                .collect(),
        );
    }
    let slack: Vec<f64> = rows
        .iter()
        .zip(&coeffs)
        .map(|(r, c)| {
            let lhs: f64 = c.iter().map(|(k, v)| to_f64(v) * v_float[*k]).sum::<f64>() - t_float;
            -to_f64(&r.f) - lhs
        })
        .collect();
    if let Some(v) = solve_tight(&rows, &coeffs, &slack, &candidates[2], n) {
        candidates.push(v);
    }
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for cand in candidates {
        let bound = exact_bound(&cand);
        if best.as_ref().is_none_or(|(b0, _)| bound < *b0) {
            best = Some((bound, cand));
        }
    }
    let (bound, potential) = best.expect("at least one candidate");
    Ok(Certificate {
        bound,
        nodes: g,
        potential,
        checked: rows.len(),
    })
}

/// Re-solves the tight rows `V(w) − V(Tw) − t = −f(w)` in exact arithmetic.
/// Columns are the node values `1..n` and `t` (index `n`). Variables the
/// rows leave free keep their rounded float values.
fn solve_tight(
    rows: &[Row],
    coeffs: &[BTreeMap<usize, Rational>],
    slack: &[f64],
    rounded: &[Rational],
    n: usize,
) -> Option<Vec<Rational>> {
    let mut order: Vec<usize> = (0..rows.len())
        .filter(|&i| slack[i].abs() <= TIGHT)
        .collect();
    order.sort_by(|&a, &b| slack[a].abs().total_cmp(&slack[b].abs()));
    let mut pivots: Vec<(usize, BTreeMap<usize, Rational>, Rational)> = Vec::new();
    for i in order {
        if pivots.len() == n {
            break;
        }
        let mut row = coeffs[i].clone();
        row.insert(n, Rational::from_integer((-1).into()));
        let mut rhs = -rows[i].f.clone();
        for (col, prow, prhs) in &pivots {
            if let Some(factor) = row.get(col).cloned() {
                for (k, v) in prow {
                    let e = row.entry(*k).or_insert_with(Rational::zero);
                    *e -= &factor * v;
                }
                rhs -= &factor * prhs;
                row.retain(|_, v| !v.is_zero());
            }
        }
        let Some((&col, lead)) = row.iter().next() else {
            continue;
        };
        let lead = lead.clone();
        for v in row.values_mut() {
            *v /= &lead;
        }
        rhs /= &lead;
        pivots.push((col, row, rhs));
    }
    let mut value: Vec<Option<Rational>> = vec![None; n + 1];
    value[0] = Some(Rational::zero());
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    for k in 1..=n {
        if !pivot_cols.contains(&k) && k < n {
            value[k] = Some(rounded[k].clone());
        }
    }
    for (col, row, rhs) in pivots.iter().rev() {
        let mut v = rhs.clone();
        for (k, c) in row {
            if k != col {
                v -= c * value[*k].as_ref().unwrap_or(&Rational::zero());
            }
        }
        value[*col] = Some(v);
    }
    let out: Vec<Rational> = value[..n]
        .iter()
        .map(|v| v.clone().unwrap_or_else(Rational::zero))
        .collect();
    if out
        .iter()
        .any(|v| v.abs() > Rational::from_integer(BigInt::from(1u64 << 40)))
    {
        return None;
    }
    Some(out)
}
