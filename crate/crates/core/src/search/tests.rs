use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::numeric::rat;
use crate::psi::{f_n_max, partial_psi, prefix_set_value, FnMode, PsiTable};

fn p(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

fn full(b: usize, t: Rational) -> SearchConfig {
    SearchConfig {
        symmetry_reduction: false,
        ..SearchConfig::new(b, t)
    }
}

fn set_of(r: &SearchResult) -> BTreeSet<Vec<usize>> {
    r.survivors
        .iter()
        .map(|s| s.perm.images().to_vec())
        .collect()
}

#[test]
fn set_values_match_reference() {
    for b in [3usize, 5, 8, 13] {
        for mask in 1u128..(1 << b) - 1 {
            let set: Vec<usize> = (0..b).filter(|v| mask >> v & 1 == 1).collect();
            let direct = prefix_set_value(b, &set);
            let scaled = set_value_scaled(b, mask, Component::Total);
            assert_eq!(direct, rat(scaled, b as i64));
            if b > 8 {
                break;
            }
        }
    }
}

#[test]
fn base_three_keeps_everything_below_one() {
    let r = search(&full(3, rat(1, 1))).unwrap();
    assert_eq!(r.survivors.len(), 6);
    assert!(r.survivors.iter().all(|s| s.max_psi == rat(2, 3)));
    assert!(r.complete);
}

#[test]
fn trivial_threshold_is_empty() {
    for b in [3usize, 6, 10] {
        let t = rat(b as i64 - 1, b as i64);
        assert!(search(&full(b, t)).unwrap().survivors.is_empty());
    }
    // ψ(1/b) = (b−1)/b for every first image.
    for v in 0..7 {
        assert_eq!(partial_psi(7, &[v]).unwrap().values[0], rat(6, 7));
    }
}

#[test]
fn matches_naive_enumeration() {
    for b in 2usize..=8 {
        let (id_max, _) = max_psi(&Permutation::identity(b).unwrap(), Component::Total);
        let thresholds = [id_max.clone(), &id_max * rat(9, 10), &id_max + rat(1, 100)];
        for t in thresholds {
            let naive: BTreeSet<Vec<usize>> = naive_search(b, &t, Component::Total)
                .unwrap()
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            let r = search(&full(b, t.clone())).unwrap();
            assert_eq!(set_of(&r), naive, "b={b} T={t}");
            let plain = search(&SearchConfig {
                memoize: false,
                ..full(b, t.clone())
            })
            .unwrap();
            assert_eq!(set_of(&plain), naive, "b={b} T={t} without memo");
        }
    }
}

#[test]
fn symmetry_reduction_picks_one_per_class() {
    for b in [5usize, 7, 8] {
        let t = max_psi(&Permutation::identity(b).unwrap(), Component::Total).0;
        let all = search(&full(b, t.clone())).unwrap();
        let reduced = search(&SearchConfig::new(b, t)).unwrap();
        let classes: BTreeSet<Vec<usize>> = all
            .survivors
            .iter()
            .map(|s| s.perm.canonical_class_rep().images().to_vec())
            .collect();
        assert_eq!(set_of(&reduced), classes, "b={b}");
    }
}

#[test]
fn sigma12_class_survives() {
    let sigma = p(&[0, 7, 3, 10, 5, 2, 9, 6, 1, 8, 4, 11]);
    let t = max_psi(&sigma, Component::Total).0 + rat(1, 1000);
    let r = search(&SearchConfig::new(12, t)).unwrap();
    assert!(r.complete);
    let rep = sigma.canonical_class_rep();
    assert!(r.survivors.iter().any(|s| s.perm == rep));
}

#[test]
fn survivors_replay_their_prefixes() {
    let t = rat(6, 5);
    let r = search(&full(9, t.clone())).unwrap();
    for s in &r.survivors {
        let pp = partial_psi(9, s.perm.images()).unwrap();
        assert!(pp.values[..8].iter().all(|v| *v < t));
        assert!(s.max_psi < t);
    }
}

#[test]
fn thresholds_are_monotone() {
    let b = 8;
    let mut prev: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in [
        rat(1, 1),
        rat(11, 10),
        rat(6, 5),
        rat(13, 10),
        rat(3, 2),
        rat(2, 1),
    ] {
        let cur = set_of(&search(&full(b, t)).unwrap());
        assert!(prev.is_subset(&cur));
        prev = cur;
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let cfg = SearchConfig {
        stage2: true,
        ..SearchConfig::new(10, rat(7, 5))
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| search(&cfg).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| search(&cfg).unwrap());
    assert_eq!(one.survivors, many.survivors);
    assert!(one
        .survivors
        .windows(2)
        .all(|w| w[0].f2_half_max <= w[1].f2_half_max));
}

#[test]
fn budget_marks_incomplete() {
    let cfg = SearchConfig {
        node_budget: 50,
        ..full(9, rat(2, 1))
    };
    let r = search(&cfg).unwrap();
    assert!(!r.complete);
    assert!(search(&SearchConfig {
        node_budget: 0,
        ..cfg.clone()
    })
    .is_err());
    assert!(search(&full(5, rat(0, 1))).is_err());
}

#[test]
fn plus_pruning_option() {
    let b = 7;
    let t = rat(1, 1);
    let r = search(&SearchConfig {
        prune_on: Component::Plus,
        ..full(b, t.clone())
    })
    .unwrap();
    let naive = naive_search(b, &t, Component::Plus).unwrap();
    assert_eq!(r.survivors.len(), naive.len());
}

#[test]
fn f2_examples() {
    assert_eq!(f2_half_max(&Permutation::identity(2).unwrap()), rat(3, 8));
    assert!(rank_f2(&[
        Permutation::identity(2).unwrap(),
        Permutation::identity(3).unwrap()
    ])
    .is_err());
}

fn shuffled(b: usize, seed: u64) -> Permutation {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..b).collect();
    v.shuffle(&mut rng);
    Permutation::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn f2_via_intrication_matches_direct_sum(b in 2usize..=9, seed in 0u64..10_000) {
        let sigma = shuffled(b, seed);
        let table = PsiTable::new(&sigma);
        let wide = PsiTable::new(&intricate(&sigma, &sigma));
        let bb = (b * b) as i64;
        for k in 0..bb {
            let x = rat(k, bb);
            let direct = table.eval(Component::Total, &x) + table.eval(Component::Total, &(&x * rat(b as i64, 1)));
            prop_assert_eq!(wide.eval(Component::Total, &x), direct);
        }
        let m = f_n_max(&table, Component::Total, 2, FnMode::Exhaustive, 0).unwrap().value;
        prop_assert_eq!(f2_half_max(&sigma), m / rat(2, 1));
    }

    #[test]
    fn ranking_is_symmetry_invariant(b in 3usize..=8, seeds in proptest::collection::vec(0u64..10_000, 2..6), a in 1usize..8) {
        let perms: Vec<Permutation> = seeds.iter().map(|&s| shuffled(b, s)).collect();
        let moved: Vec<Permutation> = perms.iter().map(|p| p.shift(a % (b - 1) + 1).unwrap().reflect()).collect();
        let r1: Vec<Rational> = rank_f2(&perms).unwrap().into_iter().map(|x| x.1).collect();
        let r2: Vec<Rational> = rank_f2(&moved).unwrap().into_iter().map(|x| x.1).collect();
        prop_assert_eq!(r1, r2);
    }
}
