use proptest::prelude::*;

use super::*;
use crate::numeric::rat;
use crate::perm::{faure_omega, intricate};

fn p(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

fn id(b: usize) -> Permutation {
    Permutation::identity(b).unwrap()
}

fn perm_strategy(b: usize) -> impl Strategy<Value = Permutation> {
    Just((0..b).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn sized_perm(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi).prop_flat_map(perm_strategy)
}

/// ψ⁺ and ψ⁻ rebuilt as pointwise maxima of the φ functions, independent of
/// the envelope code.
fn psi_by_sweep(perm: &Permutation) -> (PiecewiseAffine, PiecewiseAffine) {
    let phis: Vec<PiecewiseAffine> = (0..perm.base()).map(|h| phi(perm, h).unwrap()).collect();
    let plus = phis[1..].iter().fold(phis[0].clone(), |acc, f| acc.max(f));
    let minus = phis[1..]
        .iter()
        .fold(phis[0].negate(), |acc, f| acc.max(&f.negate()));
    (plus, minus)
}

#[test]
fn omega9_phi_table_entries() {
    let w9 = faure_omega(9).unwrap();
    assert_eq!(w9, p(&[0, 5, 2, 7, 4, 1, 6, 3, 8]));
    let f3 = phi(&w9, 3).unwrap();
    let piece = &f3.pieces()[2];
    assert_eq!(f3.breakpoints()[2], rat(2, 9));
    assert_eq!(
        (piece.slope.clone(), piece.intercept.clone()),
        (rat(6, 1), rat(-1, 1))
    );
    let f8 = phi(&w9, 8).unwrap();
    for k in 0..=36 {
        let x = rat(k, 72);
        assert_eq!(f8.eval(&x), x, "x = {x}");
    }
    assert_eq!(f8.eval(&rat(1, 2)), rat(1, 2));
    assert_eq!(
        phi(&w9, 9).unwrap_err(),
        crate::Error::InvalidParameter("h = 9 must be below the base 9".into())
    );
}

#[test]
fn phi_zero_vanishes_and_has_b_pieces() {
    for b in [2, 5, 12] {
        let f = phi(&id(b), 0).unwrap();
        assert_eq!(f.pieces().len(), b);
        assert!(f
            .pieces()
            .iter()
            .all(|a| a.slope == rat(0, 1) && a.intercept == rat(0, 1)));
    }
}

#[test]
fn omega9_psi_near_one_third() {
    let t = PsiTable::new(&faure_omega(9).unwrap());
    let f = t.function(Component::Total);
    assert_eq!(f.eval(&rat(1, 3)), rat(1, 1));
    let at = |x: Rational| f.pieces()[f.breakpoints().partition_point(|b| *b <= x) - 1].clone();
    let left = at(rat(3, 10));
    let right = at(rat(7, 20));
    assert_eq!((left.slope, left.intercept), (rat(3, 1), rat(0, 1)));
    assert_eq!((right.slope, right.intercept), (rat(-3, 1), rat(2, 1)));
    assert!(f.breakpoints().contains(&rat(1, 4)));
    assert!(f.breakpoints().contains(&rat(1, 3)));
    assert!(f.breakpoints().contains(&rat(2, 5)));
    assert_eq!(f.max_on_unit(), (rat(1, 1), rat(1, 3)));
}

#[test]
fn identity_grid_values() {
    for b in 2..=50usize {
        let t = PsiTable::new(&id(b));
        for k in 1..b {
            let want = rat((k * (b - k)) as i64, b as i64);
            assert_eq!(t.eval(Component::Total, &rat(k as i64, b as i64)), want);
        }
        assert_eq!(t.max_on_grid(Component::Minus).0, rat(0, 1));
    }
}

#[test]
fn maxima_of_named_functions() {
    assert_eq!(max_psi(&id(2), Component::Total), (rat(1, 2), rat(1, 2)));
    assert_eq!(
        max_psi(&faure_omega(9).unwrap(), Component::Total),
        (rat(1, 1), rat(1, 3))
    );
    assert_eq!(
        max_psi(&faure_omega(7).unwrap(), Component::Total).0,
        rat(8, 7)
    );
    let t2 = PsiTable::new(&id(2));
    assert_eq!(t2.eval(Component::Total, &rat(5, 4)), rat(1, 4));
    assert_eq!(t2.eval(Component::Total, &rat(1, 4)), rat(1, 4));
    assert_eq!(t2.eval(Component::Total, &rat(1, 2)), rat(1, 2));
    assert_eq!(
        PsiTable::new(&faure_omega(9).unwrap()).eval(Component::Total, &rat(0, 1)),
        rat(0, 1)
    );
}

#[test]
fn swapping_order_pinned() {
    // τ∘σ exchanges ψ⁺ and ψ⁻ for every σ; σ∘τ does not in general.
    let mut inner_order_fails = false;
    for b in [3usize, 5, 12] {
        let tau = Permutation::tau(b).unwrap();
        for seed in 0..30u64 {
            let sigma = shuffled(b, seed);
            let s = psi(&sigma);
            let outer = psi(&tau.compose(&sigma).unwrap());
            assert_eq!(outer.plus, s.minus);
            assert_eq!(outer.minus, s.plus);
            let inner = psi(&sigma.compose(&tau).unwrap());
            if inner.plus != s.minus {
                inner_order_fails = true;
            }
        }
    }
    assert!(inner_order_fails);
}

fn shuffled(b: usize, seed: u64) -> Permutation {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..b).collect();
    v.shuffle(&mut rng);
    Permutation::new(v).unwrap()
}

#[test]
fn corollary_bound_and_circular_runs() {
    for b in 2..=8usize {
        let mut v: Vec<usize> = (0..b).collect();
        loop {
            let sigma = Permutation::new(v.clone()).unwrap();
            let t = PsiTable::new(&sigma);
            for k in 1..b {
                let val = t.eval(Component::Total, &rat(k as i64, b as i64));
                let cap = rat((k * (b - k)) as i64, b as i64);
                assert!(val <= cap);
                let mut set: Vec<usize> = v[..k].to_vec();
                set.sort();
                let circular = (0..b).any(|a| {
                    let mut run: Vec<usize> = (1..=k).map(|i| (i + a) % b).collect();
                    run.sort();
                    run == set
                });
                assert_eq!(val == cap, circular, "σ={sigma:?} k={k}");
            }
            if !next_permutation(&mut v) {
                break;
            }
        }
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[test]
fn omega_peak_points() {
    for m in 0..=6u32 {
        let b = 9usize << m;
        let table = PsiTable::new(&faure_omega(b).unwrap());
        let mut x = rat(3, 9);
        for i in 1..=m {
            let term = rat(1, 9 * (1i64 << i));
            x = if i % 2 == 1 { x - term } else { x + term };
        }
        assert_eq!(
            table.eval(Component::Total, &x),
            rat(m as i64 + 3, 3),
            "m={m}"
        );
    }
}

#[test]
fn f2_of_identity_base_two() {
    let t = PsiTable::new(&id(2));
    let r = f_n_max(&t, Component::Total, 2, FnMode::Exhaustive, 0).unwrap();
    assert_eq!(r.value, rat(3, 4));
    assert_eq!(r.argmax, rat(1, 4));
    assert_eq!(r.digits, vec![0, 1]);
    let bb = f_n_max(&t, Component::Total, 2, FnMode::BranchAndBound, 1000).unwrap();
    assert_eq!((bb.value, bb.argmax), (r.value, r.argmax));
}

#[test]
fn f1_is_the_plain_maximum() {
    let w = faure_omega(9).unwrap();
    let t = PsiTable::new(&w);
    let r = f_n_max(&t, Component::Total, 1, FnMode::BranchAndBound, 1000).unwrap();
    assert_eq!((r.value, r.argmax), t.max_on_grid(Component::Total));
}

#[test]
fn averaged_maxima_decrease_for_identity_base_three() {
    let t = PsiTable::new(&id(3));
    let seq = f_n_max_sequence(&t, Component::Total, 6, 10_000_000).unwrap();
    let avg: Vec<Rational> = seq.iter().map(|f| &f.value / rat(f.n as i64, 1)).collect();
    for w in avg.windows(2) {
        assert!(w[1] <= w[0]);
    }
    assert!(avg[5] > rat(1, 2));
}

#[test]
fn budget_exhaustion_is_reported() {
    let t = PsiTable::new(&id(7));
    let err = f_n_max(&t, Component::Total, 4, FnMode::BranchAndBound, 5).unwrap_err();
    assert!(matches!(err, crate::Error::ResourceLimit(_)));
    assert!(matches!(
        f_n_max(
            &PsiTable::new(&id(60)),
            Component::Total,
            5,
            FnMode::Exhaustive,
            0
        ),
        Err(crate::Error::ResourceLimit(_))
    ));
}

#[test]
fn periodic_points() {
    let t2 = PsiTable::new(&id(2));
    assert_eq!(
        f_n_eval_periodic(&t2, Component::Total, &[0, 1], 3).unwrap(),
        rat(1, 3)
    );
    let t3 = PsiTable::new(&id(3));
    assert_eq!(
        f_n_eval_periodic(&t3, Component::Total, &[1], 4).unwrap(),
        rat(1, 2)
    );
    assert_eq!(
        f_n_eval_periodic(&t3, Component::Total, &[0, 0, 0], 2).unwrap(),
        rat(0, 1)
    );
    assert!(f_n_eval_periodic(&t3, Component::Total, &[3], 1).is_err());
    assert!(f_n_eval_periodic(&t3, Component::Total, &[], 1).is_err());
}

#[test]
fn periodic_lower_bounds_never_exceed_f_n_maxima() {
    let t3 = PsiTable::new(&id(3));
    let best_cycle = f_n_eval_periodic(&t3, Component::Total, &[1], 1).unwrap();
    for q in 1..=8 {
        let m = f_n_max(&t3, Component::Total, q, FnMode::Exhaustive, 0).unwrap();
        assert!(&m.value / rat(q as i64, 1) >= best_cycle);
    }
}

#[test]
fn partial_prefix_structure() {
    let b = 12;
    let r = partial_psi(b, &[0]).unwrap();
    assert_eq!(r.pieces.len(), 1);
    assert_eq!(r.pieces[0].1.slope, rat(11, 1));
    assert_eq!(r.values, vec![rat(11, 12)]);
    assert!(partial_psi(b, &[0, 0]).is_err());
    assert!(partial_psi(b, &[12]).is_err());

    let sigma = p(&[0, 7, 3, 10, 5, 2, 9, 6, 1, 8, 4, 11]);
    let full = partial_psi(b, sigma.images()).unwrap();
    let f = psi(&sigma).total;
    assert_eq!(full.pieces.len(), f.pieces().len());
    for ((x, a), (y, c)) in full
        .pieces
        .iter()
        .zip(f.breakpoints().iter().zip(f.pieces()))
    {
        assert_eq!((x, a), (y, c));
    }
}

#[test]
fn only_the_last_prefix_value_is_order_free() {
    // {0,1,2} then {0,2,1}: same set, so ψ(3/5) agrees; ψ(2/5) does not.
    let a = partial_psi(5, &[0, 1, 2]).unwrap();
    let c = partial_psi(5, &[0, 2, 1]).unwrap();
    assert_eq!(a.values[2], c.values[2]);
    assert_ne!(a.values[1], c.values[1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn envelopes_match_sweep_oracle(sigma in sized_perm(2, 10)) {
        let t = PsiTable::new(&sigma);
        let (plus, minus) = psi_by_sweep(&sigma);
        prop_assert_eq!(t.function(Component::Plus), plus.clone());
        prop_assert_eq!(t.function(Component::Minus), minus.clone());
        prop_assert_eq!(t.function(Component::Total), plus.add(&minus));
    }

    #[test]
    fn triple_invariants(sigma in sized_perm(2, 16)) {
        let tr = psi(&sigma);
        let b = sigma.base();
        prop_assert!(tr.plus.is_continuous() && tr.minus.is_continuous() && tr.total.is_continuous());
        let (sp, sm) = near_zero_slopes(&sigma);
        prop_assert_eq!(tr.plus.pieces()[0].slope.clone(), rat(sp, 1));
        prop_assert_eq!(tr.minus.pieces()[0].slope.clone(), rat(sm, 1));
        prop_assert_eq!(tr.total.pieces()[0].slope.clone(), rat(b as i64 - 1, 1));
        let mut pts: Vec<Rational> = tr.total.breakpoints().to_vec();
        pts.extend(tr.plus.breakpoints().iter().cloned());
        let mids: Vec<Rational> = pts.iter().map(|x| x + rat(1, 2 * (b * b) as i64)).collect();
        for x in pts.iter().chain(&mids) {
            let (a, m, s) = (tr.plus.eval(x), tr.minus.eval(x), tr.total.eval(x));
            prop_assert!(a >= rat(0, 1) && m >= rat(0, 1));
            prop_assert_eq!(a + m, s);
        }
    }

    #[test]
    fn table_eval_matches_piece_list(sigma in sized_perm(2, 12), num in 0i64..997, den in 1i64..997) {
        let t = PsiTable::new(&sigma);
        let x = rat(num, den);
        for comp in Component::ALL {
            prop_assert_eq!(t.eval(comp, &x), t.function(comp).eval(&x));
        }
    }

    #[test]
    fn symmetry_leaves_total_unchanged(sigma in sized_perm(3, 12), a in 1usize..12) {
        let b = sigma.base();
        let base = psi(&sigma).total;
        prop_assert_eq!(psi(&sigma.shift(1 + (a - 1) % (b - 1)).unwrap()).total, base.clone());
        prop_assert_eq!(psi(&sigma.reflect()).total, base);
    }

    #[test]
    fn intrication_adds_psi(
        (s, t) in prop_oneof![
            (perm_strategy(2), perm_strategy(3)),
            (perm_strategy(3), perm_strategy(4)),
            (perm_strategy(2), perm_strategy(9)),
        ]
    ) {
        let (b, c) = (s.base(), t.base());
        let prod = PsiTable::new(&intricate(&s, &t));
        let (ts, tt) = (PsiTable::new(&s), PsiTable::new(&t));
        for k in 0..(b * c) as i64 {
            let x = rat(k, (b * c) as i64);
            for comp in Component::ALL {
                let want = ts.eval(comp, &(&x * rat(c as i64, 1))) + tt.eval(comp, &x);
                prop_assert_eq!(prod.eval(comp, &x), want);
            }
        }
        let lhs = prod.function(Component::Total);
        let rhs = ts.function(Component::Total).scale_arg(c).add(&tt.function(Component::Total));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dominated_by_identity(sigma in sized_perm(2, 12)) {
        let b = sigma.base();
        let t = PsiTable::new(&sigma);
        let ti = PsiTable::new(&Permutation::identity(b).unwrap());
        for x in t.breakpoints(Component::Total).iter().chain(ti.breakpoints(Component::Total).iter()) {
            prop_assert!(t.eval(Component::Total, x) <= ti.eval(Component::Total, x));
        }
    }

    #[test]
    fn branch_and_bound_matches_exhaustive(sigma in sized_perm(2, 6), n in 1usize..=4) {
        let t = PsiTable::new(&sigma);
        for comp in Component::ALL {
            let e = f_n_max(&t, comp, n, FnMode::Exhaustive, 0).unwrap();
            let bb = f_n_max(&t, comp, n, FnMode::BranchAndBound, 10_000_000).unwrap();
            prop_assert_eq!(&e.value, &bb.value);
            prop_assert_eq!(&e.argmax, &bb.argmax);
            prop_assert_eq!(&e.digits, &bb.digits);
        }
    }

    #[test]
    fn set_determines_last_value(v in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(), k in 1usize..12) {
        let mut w = v[..k].to_vec();
        w.reverse();
        let a = partial_psi(12, &v[..k]).unwrap();
        let c = partial_psi(12, &w).unwrap();
        prop_assert_eq!(a.values.last(), c.values.last());
    }
}
