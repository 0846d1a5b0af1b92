//! Seeded random generators for split bundles, shared by the self-test
//! driver and the test suites.

use rand::Rng;

use crate::geometry::OrbiConfig;
use crate::parabolic::{ParBundle, ParLine};
use crate::rational::Q;
use crate::root_stack::{normalize, LineObject, StackBundle};

pub fn par_line<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_abs_d: i64) -> ParLine {
    let r = cfg.r();
    ParLine {
        d: rng.random_range(-max_abs_d..=max_abs_d),
        weights: (0..cfg.num_points())
            .map(|_| Q::new(rng.random_range(0..r), r))
            .collect(),
    }
}

pub fn par_bundle<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_rank: usize, max_abs_d: i64) -> ParBundle {
    let rank = rng.random_range(1..=max_rank);
    (0..rank).map(|_| par_line(rng, cfg, max_abs_d)).collect()
}

pub fn line_object<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_abs_d: i64) -> LineObject {
    LineObject {
        d: rng.random_range(-max_abs_d..=max_abs_d),
        res: (0..cfg.num_points())
            .map(|_| rng.random_range(0..cfg.root_index()))
            .collect(),
    }
}

pub fn stack_bundle<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_rank: usize, max_abs_d: i64) -> StackBundle {
    let rank = rng.random_range(1..=max_rank);
    (0..rank).map(|_| line_object(rng, cfg, max_abs_d)).collect()
}

/// Uniform among degree-0 line objects.
pub fn finite_line<R: Rng>(rng: &mut R, cfg: &OrbiConfig) -> LineObject {
    let r = cfg.r();
    let m = cfg.num_points();
    if m == 0 {
        return LineObject::trivial(cfg);
    }
    let mut res: Vec<i64> = (0..m - 1).map(|_| rng.random_range(0..r)).collect();
    let partial: i64 = res.iter().sum();
    res.push((-partial).rem_euclid(r));
    let total: i64 = res.iter().sum();
    normalize(cfg, -total / r, &res)
}

pub fn finite_bundle<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_rank: usize) -> StackBundle {
    let rank = rng.random_range(1..=max_rank);
    (0..rank).map(|_| finite_line(rng, cfg)).collect()
}

/// A finite bundle plus one summand of nonzero degree.
pub fn non_finite_bundle<R: Rng>(rng: &mut R, cfg: &OrbiConfig, max_rank: usize) -> StackBundle {
    let base = if max_rank > 1 {
        finite_bundle(rng, cfg, max_rank - 1)
    } else {
        StackBundle::default()
    };
    let mut bad = finite_line(rng, cfg);
    let shift = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
    bad.d += shift;
    base.direct_sum(&StackBundle::line(bad))
}

/// Genus-0 config with `1 ≤ r ≤ max_r` and `0 ≤ m ≤ max_m`.
pub fn p1_config<R: Rng>(rng: &mut R, max_r: u32, max_m: usize) -> OrbiConfig {
    let r = rng.random_range(1..=max_r);
    let m = rng.random_range(0..=max_m);
    OrbiConfig::p1(m, r).expect("valid ranges")
}
