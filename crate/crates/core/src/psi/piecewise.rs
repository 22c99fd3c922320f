use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::numeric::{frac, Rational};

/// `slope·x + intercept` on one piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Affine { slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    fn add(&self, other: &Affine) -> Affine {
        Affine::new(
            &self.slope + &other.slope,
            &self.intercept + &other.intercept,
        )
    }
}

/// A 1-periodic piecewise-affine function. Piece `i` covers
/// `[breaks[i], breaks[i+1])`, the last one ending at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseAffine {
    breaks: Vec<Rational>,
    pieces: Vec<Affine>,
    continuous: bool,
}

impl PiecewiseAffine {
    pub fn new(breaks: Vec<Rational>, pieces: Vec<Affine>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != pieces.len() {
            return Err(invalid("need one affine piece per breakpoint"));
        }
        if !breaks[0].is_zero() {
            return Err(invalid("breakpoints must start at 0"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks[breaks.len() - 1] >= Rational::one() {
            return Err(invalid("breakpoints must increase strictly inside [0, 1)"));
        }
        let mut f = PiecewiseAffine {
            breaks,
            pieces,
            continuous: false,
        };
        f.continuous = f.check_continuity();
        Ok(f)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    /// Continuous on [0, 1) and across the wrap at 1.
    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    fn end_of(&self, i: usize) -> Rational {
        self.breaks
            .get(i + 1)
            .cloned()
            .unwrap_or_else(Rational::one)
    }

    fn check_continuity(&self) -> bool {
        let n = self.pieces.len();
        (0..n).all(|i| {
            let end = self.end_of(i);
            let left = self.pieces[i].at(&end);
            let right = if i + 1 < n {
                self.pieces[i + 1].at(&end)
            } else {
                self.pieces[0].at(&Rational::zero())
            };
            left == right
        })
    }

    fn piece_index(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|b| b <= x) - 1
    }

    /// Exact value of the periodic extension.
    pub fn eval(&self, x: &Rational) -> Rational {
        let x = frac(x);
        self.pieces[self.piece_index(&x)].at(&x)
    }

    /// Supremum over [0, 1) and the smallest point where it is reached
    /// (for a discontinuous function this may be a one-sided limit).
    pub fn max_on_unit(&self) -> (Rational, Rational) {
        let mut best: Option<(Rational, Rational)> = None;
        for (i, piece) in self.pieces.iter().enumerate() {
            let start = &self.breaks[i];
            let end = self.end_of(i);
            let end_point = if end.is_one() {
                Rational::zero()
            } else {
                end.clone()
            };
            for (v, at) in [
                (piece.at(start), start.clone()),
                (piece.at(&end), end_point),
            ] {
                let better = match &best {
                    None => true,
                    Some((bv, bx)) => v > *bv || (v == *bv && at < *bx),
                };
                if better {
                    best = Some((v, at));
                }
            }
        }
        best.expect("at least one piece")
    }

    fn merged_breaks(&self, other: &PiecewiseAffine) -> Vec<Rational> {
        let mut all: Vec<Rational> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// Pointwise sum, canonicalized.
    pub fn add(&self, other: &PiecewiseAffine) -> PiecewiseAffine {
        let breaks = self.merged_breaks(other);
        let pieces = breaks
            .iter()
            .map(|x| self.pieces[self.piece_index(x)].add(&other.pieces[other.piece_index(x)]))
            .collect();
        build_canonical(breaks, pieces)
    }

    pub fn negate(&self) -> PiecewiseAffine {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Affine::new(-&p.slope, -&p.intercept))
            .collect();
        build_canonical(self.breaks.clone(), pieces)
    }

    /// Pointwise maximum, splitting pieces at exact crossing points.
    pub fn max(&self, other: &PiecewiseAffine) -> PiecewiseAffine {
        let cells = self.merged_breaks(other);
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for (i, start) in cells.iter().enumerate() {
            let end = cells.get(i + 1).cloned().unwrap_or_else(Rational::one);
            let f = &self.pieces[self.piece_index(start)];
            let g = &other.pieces[other.piece_index(start)];
            let (fs, gs) = (f.at(start), g.at(start));
            let winner_at_start = if fs > gs || (fs == gs && f.slope >= g.slope) {
                f
            } else {
                g
            };
            breaks.push(start.clone());
            pieces.push(winner_at_start.clone());
            if f.slope != g.slope {
                let cross = (&g.intercept - &f.intercept) / (&f.slope - &g.slope);
                if &cross > start && cross < end {
                    let loser = if std::ptr::eq(winner_at_start, f) {
                        g
                    } else {
                        f
                    };
                    breaks.push(cross);
                    pieces.push(loser.clone());
                }
            }
        }
        build_canonical(breaks, pieces)
    }

    /// `x ↦ f(c·x)` for a positive integer c.
    pub fn scale_arg(&self, c: usize) -> PiecewiseAffine {
        let cr = Rational::from_integer(c.into());
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for j in 0..c {
            let jr = Rational::from_integer(j.into());
            for (b, p) in self.breaks.iter().zip(&self.pieces) {
                breaks.push((b + &jr) / &cr);
                pieces.push(Affine::new(&p.slope * &cr, &p.intercept - &p.slope * &jr));
            }
        }
        build_canonical(breaks, pieces)
    }

    /// Merges neighbours carrying the same affine map.
    pub fn canonicalize(&self) -> PiecewiseAffine {
        build_canonical(self.breaks.clone(), self.pieces.clone())
    }

    /// Plot-ready CSV: one row per piece, breakpoints increasing.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_num,x_den,slope_num,slope_den,intercept_num,intercept_den\n");
        for (b, p) in self.breaks.iter().zip(&self.pieces) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                b.numer(),
                b.denom(),
                p.slope.numer(),
                p.slope.denom(),
                p.intercept.numer(),
                p.intercept.denom()
            );
        }
        out
    }

    /// Minimal SVG polyline of one period on an 800×400 viewport.
    pub fn to_svg(&self) -> String {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let (s, e) = (self.breaks[i].clone(), self.end_of(i));
            for x in [s, e] {
                pts.push((
                    crate::numeric::to_f64(&x),
                    crate::numeric::to_f64(&p.at(&x)),
                ));
            }
        }
        let ymax = pts.iter().map(|p| p.1).fold(f64::MIN, f64::max);
        let ymin = pts.iter().map(|p| p.1).fold(f64::MAX, f64::min).min(0.0);
        let span = if ymax > ymin { ymax - ymin } else { 1.0 };
        let coords: Vec<String> = pts
            .iter()
            .map(|(x, y)| {
                format!(
                    "{:.3},{:.3}",
                    10.0 + 780.0 * x,
                    390.0 - 380.0 * (y - ymin) / span
                )
            })
            .collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" viewBox=\"0 0 800 400\">\n\
             <polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>\n</svg>\n",
            coords.join(" ")
        )
    }
}

fn build_canonical(breaks: Vec<Rational>, pieces: Vec<Affine>) -> PiecewiseAffine {
    let mut b_out: Vec<Rational> = Vec::with_capacity(breaks.len());
    let mut p_out: Vec<Affine> = Vec::with_capacity(pieces.len());
    for (b, p) in breaks.into_iter().zip(pieces) {
        if p_out.last() == Some(&p) {
            continue;
        }
        b_out.push(b);
        p_out.push(p);
    }
    let mut f = PiecewiseAffine {
        breaks: b_out,
        pieces: p_out,
        continuous: false,
    };
    f.continuous = f.check_continuity();
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn tent() -> PiecewiseAffine {
        PiecewiseAffine::new(
            vec![rat(0, 1), rat(1, 2)],
            vec![
                Affine::new(rat(1, 1), rat(0, 1)),
                Affine::new(rat(-1, 1), rat(1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluation_is_periodic() {
        let f = tent();
        assert!(f.is_continuous());
        assert_eq!(f.eval(&rat(5, 4)), rat(1, 4));
        assert_eq!(f.eval(&rat(-1, 4)), rat(1, 4));
        assert_eq!(f.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(f.max_on_unit(), (rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn rejects_bad_breaks() {
        let a = Affine::new(rat(0, 1), rat(0, 1));
        assert!(PiecewiseAffine::new(vec![rat(1, 3)], vec![a.clone()]).is_err());
        assert!(PiecewiseAffine::new(vec![rat(0, 1), rat(1, 1)], vec![a.clone(), a]).is_err());
    }

    #[test]
    fn max_splits_at_crossings() {
        let f = tent();
        let g = f.scale_arg(2);
        let m = f.max(&g);
        for k in 0..64 {
            let x = rat(k, 64);
            let want = std::cmp::max(f.eval(&x), g.eval(&x));
            assert_eq!(m.eval(&x), want, "x={x}");
        }
        assert!(m.breakpoints().contains(&rat(1, 3)));
    }

    #[test]
    fn sum_and_canonical_merge() {
        let f = tent();
        let zero = f.add(&f.negate());
        assert_eq!(zero.pieces().len(), 1);
        assert_eq!(zero.eval(&rat(1, 7)), rat(0, 1));
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.ends_with("1,2,-1,1,1,1\n"));
    }
}
