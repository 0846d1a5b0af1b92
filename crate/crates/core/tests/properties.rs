use num_rational::Rational64 as Q;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbiroot_core::correspondence::{tensor_compat_check, to_parabolic, to_stack};
use orbiroot_core::inertia_rr::{chi_inertia, DEFAULT_TOL};
use orbiroot_core::moduli::{is_finite, witness_polynomials};
use orbiroot_core::parabolic::{deg_par, deg_par_hilbert, dual_par_bundle, tensor_par};
use orbiroot_core::root_stack::{chi_stack_bundle, deg_stack_bundle, dual_stack_bundle, tensor_stack_bundle};
use orbiroot_core::{sample, LineObject, OrbiConfig, ParBundle, ParLine, StackBundle};

fn config() -> impl Strategy<Value = OrbiConfig> {
    (0u32..=2, 0usize..=3, 1u32..=6).prop_map(|(g, m, r)| OrbiConfig::new(g, m, r).unwrap())
}

fn p1_config() -> impl Strategy<Value = OrbiConfig> {
    (0usize..=3, 1u32..=6).prop_map(|(m, r)| OrbiConfig::p1(m, r).unwrap())
}

fn par_bundle(cfg: &OrbiConfig) -> impl Strategy<Value = ParBundle> {
    let (m, r) = (cfg.num_points(), cfg.root_index() as i64);
    let line = (-6i64..=6, prop::collection::vec(0..r, m)).prop_map(move |(d, a)| ParLine {
        d,
        weights: a.into_iter().map(|x| Q::new(x, r)).collect(),
    });
    prop::collection::vec(line, 1..=4).prop_map(|ls| ls.into_iter().collect())
}

fn stack_bundle(cfg: &OrbiConfig) -> impl Strategy<Value = StackBundle> {
    let (m, r) = (cfg.num_points(), cfg.root_index());
    let line = (-6i64..=6, prop::collection::vec(0..r, m)).prop_map(|(d, res)| LineObject { d, res });
    prop::collection::vec(line, 1..=4).prop_map(|ls| ls.into_iter().collect())
}

proptest! {
    #[test]
    fn round_trip((cfg, e) in config().prop_flat_map(|c| (Just(c.clone()), par_bundle(&c)))) {
        let f = to_stack(&cfg, &e).unwrap();
        prop_assert_eq!(to_parabolic(&cfg, &f).unwrap(), e);
    }

    #[test]
    fn degrees_agree((cfg, e) in config().prop_flat_map(|c| (Just(c.clone()), par_bundle(&c)))) {
        let f = to_stack(&cfg, &e).unwrap();
        prop_assert_eq!(deg_par(&e), deg_stack_bundle(&cfg, &f));
        prop_assert_eq!(deg_par_hilbert(&cfg, &e).unwrap(), deg_par(&e));
    }

    #[test]
    fn tensor_degree_is_leibniz((cfg, a, b) in config().prop_flat_map(|c| (Just(c.clone()), par_bundle(&c), par_bundle(&c)))) {
        let t = tensor_par(&cfg, &a, &b).unwrap();
        let (ra, rb) = (Q::from(a.rank() as i64), Q::from(b.rank() as i64));
        prop_assert_eq!(deg_par(&t), ra * deg_par(&b) + rb * deg_par(&a));
        prop_assert!(tensor_compat_check(&cfg, &a, &b).unwrap());
    }

    #[test]
    fn duals_negate_degree((cfg, e) in config().prop_flat_map(|c| (Just(c.clone()), par_bundle(&c)))) {
        let dual = dual_par_bundle(&e);
        prop_assert_eq!(deg_par(&dual), -deg_par(&e));
        let f = to_stack(&cfg, &e).unwrap();
        prop_assert_eq!(to_stack(&cfg, &dual).unwrap(), dual_stack_bundle(&cfg, &f));
    }

    #[test]
    fn inertia_formula_is_exact((cfg, f) in config().prop_flat_map(|c| (Just(c.clone()), stack_bundle(&c)))) {
        prop_assert_eq!(chi_inertia(&cfg, &f, DEFAULT_TOL).unwrap(), Q::from(chi_stack_bundle(&cfg, &f)));
    }

    #[test]
    fn trivial_twists_are_neutral((cfg, f) in p1_config().prop_flat_map(|c| (Just(c.clone()), stack_bundle(&c)))) {
        let o = StackBundle::line(LineObject::trivial(&cfg));
        prop_assert_eq!(tensor_stack_bundle(&cfg, &f, &o).unwrap(), f);
    }

    #[test]
    fn witness_only_for_finite((cfg, f) in p1_config().prop_flat_map(|c| (Just(c.clone()), stack_bundle(&c)))) {
        let finite = is_finite(&cfg, &f).unwrap();
        let w = witness_polynomials(&cfg, &f, 4).unwrap();
        if !finite {
            prop_assert!(w.is_none());
        }
        if let Some(w) = w {
            prop_assert!(finite);
            prop_assert_ne!(&w.p, &w.q);
            prop_assert_eq!(&w.lhs, &w.rhs);
        }
    }
}

/// Distinct values of `Σ_j ψ(K_j)` over the characters `res ↦ ζ^{a·res}`.
fn character_value_count(cfg: &OrbiConfig, f: &StackBundle) -> usize {
    let r = cfg.root_index() as u64;
    let mut seen = std::collections::BTreeSet::new();
    let total = r.pow(cfg.num_points() as u32);
    for code in 0..total {
        let a: Vec<u64> = (0..cfg.num_points()).map(|i| code / r.pow(i as u32) % r).collect();
        let (mut x, mut y) = (0.0f64, 0.0f64);
        for k in f.summands() {
            let e: u64 = a.iter().zip(&k.res).map(|(&p, &q)| p * q as u64).sum::<u64>() % r;
            let theta = std::f64::consts::TAU * e as f64 / r as f64;
            x += theta.cos();
            y += theta.sin();
        }
        seen.insert(((x * 1e6).round() as i64, (y * 1e6).round() as i64));
    }
    seen.len()
}

#[test]
fn witness_degree_is_the_character_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let cfg = sample::p1_config(&mut rng, 4, 3);
        let f = sample::finite_bundle(&mut rng, &cfg, 4);
        let n = character_value_count(&cfg, &f) as i64;
        assert!(
            witness_polynomials(&cfg, &f, n).unwrap().is_some(),
            "{f}: nothing at degree {n}"
        );
        if n > 1 {
            assert!(
                witness_polynomials(&cfg, &f, n - 1).unwrap().is_none(),
                "{f}: relation below {n}"
            );
        }
    }
}
