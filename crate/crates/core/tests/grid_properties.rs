mod common;

use proptest::prelude::*;
use std::f64::consts::PI;
use wavetrain::{PeriodicGrid, Profile, WaveNumber};

fn profile_strategy(n: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec(-1.0f64..1.0, n)
        .prop_map(move |v| Profile::new(PeriodicGrid::new(n).unwrap(), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nabla_is_antisymmetric(a in profile_strategy(64), b in profile_strategy(64), half in 0usize..=16) {
        let k = WaveNumber::from_shift(2 * half, a.grid()).unwrap();
        let lhs = a.nabla(k).unwrap().inner(&b);
        let rhs = -a.inner(&b.nabla(k).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-13);
    }

    #[test]
    fn nabla_squared_is_laplacian(a in profile_strategy(64), half in 0usize..=16) {
        let k = WaveNumber::from_shift(2 * half, a.grid()).unwrap();
        let twice = a.nabla(k).unwrap().nabla(k).unwrap();
        prop_assert!((&twice - &a.laplacian(k)).sup_norm() <= 1e-14);
    }

    #[test]
    fn laplacian_has_zero_mean(a in profile_strategy(96), p in 0usize..=48) {
        let k = WaveNumber::from_shift(p, a.grid()).unwrap();
        prop_assert!(a.laplacian(k).integrate().abs() <= 1e-14);
    }

    #[test]
    fn shifts_compose(a in profile_strategy(32), s in -40isize..40, t in -40isize..40) {
        prop_assert_eq!(a.shift(s).shift(t), a.shift(s + t));
    }
}

#[test]
fn symmetry_is_preserved() {
    let g = PeriodicGrid::new(128).unwrap();
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let even = common::even_profile(&mut rng, g, 6);
        for p in [0usize, 2, 5, 16, 64] {
            let k = WaveNumber::from_shift(p, g).unwrap();
            assert!(even.laplacian(k).evenness_defect() <= 1e-15);
            if p % 2 == 0 {
                assert!(even.averaging(k).unwrap().evenness_defect() <= 1e-15);
                assert!(even.nabla(k).unwrap().oddness_defect() <= 1e-15);
            }
        }
        assert_eq!(even.derivative().oddness_defect(), 0.0);
        let once = even.cumulative().unwrap();
        assert!(once.oddness_defect() <= 1e-15);
        let odd = even.derivative();
        let back = odd.cumulative().unwrap();
        assert!(back.evenness_defect() <= 1e-14 * (1.0 + odd.sup_norm()));
        assert!(once.cumulative().unwrap().evenness_defect() <= 1e-15);
    }
}

#[test]
fn derivative_inverts_cumulative_at_second_order() {
    let mut rng = common::rng(11);
    for _ in 0..10 {
        let coarse = PeriodicGrid::new(128).unwrap();
        let fine = PeriodicGrid::new(256).unwrap();
        // same random function on both grids
        let seed: u64 = rand::Rng::gen(&mut rng);
        let x1 = common::smooth_profile(&mut common::rng(seed), coarse, 5, 0.0);
        let x2 = common::smooth_profile(&mut common::rng(seed), fine, 5, 0.0);
        let e1 = (&x1.cumulative().unwrap().derivative() - &x1).sup_norm();
        let e2 = (&x2.cumulative().unwrap().derivative() - &x2).sup_norm();
        assert!((e1 / e2).log2() >= 1.95, "order {}", (e1 / e2).log2());
    }
}

#[test]
fn averaging_of_derivative_approximates_nabla() {
    let k_of = |g| WaveNumber::new(0.25, g).unwrap();
    let err = |n: usize| {
        let g = PeriodicGrid::new(n).unwrap();
        let x = common::smooth_profile(&mut common::rng(3), g, 4, 0.0);
        (&x.derivative().averaging(k_of(g)).unwrap() - &x.nabla(k_of(g)).unwrap()).sup_norm()
    };
    let (e1, e2) = (err(128), err(256));
    assert!(e1 < 1e-2);
    assert!((e1 / e2).log2() > 1.9);
}

#[test]
fn embedding_chain_on_random_profiles() {
    let g = PeriodicGrid::new(256).unwrap();
    let mut rng = common::rng(2024);
    for _ in 0..100 {
        let x = common::smooth_profile(&mut rng, g, 8, 0.0);
        let n = x.norms();
        assert!(n.l2 <= n.sup && n.sup <= n.h1_semi + 1e-8, "{n:?}");
    }
}

#[test]
fn cosine_closed_forms() {
    let g = PeriodicGrid::new(1024).unwrap();
    let a = 1.3;
    let x = Profile::cosine(g, a);
    let n = x.norms();
    assert!((n.l2 - a / 2f64.sqrt()).abs() < 1e-14);
    assert!((n.h1_semi - 2f64.sqrt() * PI * a).abs() < 1e-4 * a);
}
