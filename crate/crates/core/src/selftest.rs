//! Randomised cross-checks of every multi-route computation, driven by a
//! seed so that a run can be reproduced exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::correspondence::{coend_evaluate, tensor_compat_check, to_parabolic, to_stack, to_stack_line};
use crate::error::Result;
use crate::geometry::OrbiConfig;
use crate::inertia_rr::{chi_par_three_way, deg_theorem_check};
use crate::moduli::{is_finite, is_semistable, verify_structure_theorem, witness_polynomials};
use crate::parabolic::{
    deg_par, deg_par_hilbert, deg_par_line, dual_par, filtration_degree, hom_exists_par, hom_exists_par_direct,
    tensor_par_coend_degree, tensor_par_line,
};
use crate::rational::Q;
use crate::root_stack::deg_stack_bundle;
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            result: CheckResult {
                name,
                cases: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.result.cases += 1;
        if !ok {
            self.result.failures += 1;
            if self.result.first_failure.is_none() {
                self.result.first_failure = Some(describe());
            }
        }
    }

    fn done(self) -> CheckResult {
        self.result
    }
}

pub fn run(samples: usize, seed: u64, tol: f64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round_trip = Tally::new("round-trip G∘F = id, F∘G = id");
    let mut coend = Tally::new("coend evaluation = closed-form inverse");
    let mut tensor = Tally::new("tensor compatibility");
    let mut day = Tally::new("Day convolution degree = closed form");
    let mut degree = Tally::new("parabolic degree = stack degree");
    let mut hilbert = Tally::new("Hilbert-polynomial degree = Seshadri degree");
    let mut chi = Tally::new("χ_par three ways");
    let mut dual = Tally::new("dual is an involution negating degree");
    let mut hom = Tally::new("morphism existence: stack side = flag side");
    let mut finite = Tally::new("finite ⇒ semistable, witness found");

    for _ in 0..samples {
        let cfg = sample::p1_config(&mut rng, 6, 4);
        let genus = rand::Rng::random_range(&mut rng, 0..=2u32);
        let cfg_g = OrbiConfig::new(genus, cfg.num_points(), cfg.root_index())?;
        let e = sample::par_bundle(&mut rng, &cfg, 5, 10);
        let b = sample::par_bundle(&mut rng, &cfg, 3, 10);
        let f = to_stack(&cfg, &e)?;

        round_trip.record(
            to_parabolic(&cfg, &f)? == e && to_stack(&cfg, &to_parabolic(&cfg, &f)?)? == f,
            || format!("{e} in {cfg:?}"),
        );
        for line in e.summands() {
            coend.record(coend_evaluate(&cfg, line) == to_stack_line(&cfg, line), || {
                format!("{line}")
            });
            dual.record(
                dual_par(&dual_par(line)) == *line && deg_par_line(&dual_par(line)) == -deg_par_line(line),
                || format!("{line}"),
            );
        }
        tensor.record(tensor_compat_check(&cfg, &e, &b)?, || format!("{e} ⊗ {b}"));
        let (la, lb) = (&e.summands()[0], &b.summands()[0]);
        let prod = tensor_par_line(la, lb);
        let ok = (0..cfg.r()).all(|l| {
            filtration_degree(&cfg, &prod, Q::new(l, cfg.r())).ok() == Some(tensor_par_coend_degree(&cfg, la, lb, l))
        });
        day.record(ok, || format!("{la} ⊗ {lb}"));

        degree.record(
            deg_par(&e) == deg_stack_bundle(&cfg, &f) && deg_theorem_check(&cfg, &e)?,
            || format!("{e}"),
        );
        hilbert.record(deg_par_hilbert(&cfg_g, &e)? == deg_par(&e), || format!("{e}"));
        let triple = chi_par_three_way(&cfg_g, &e, tol)?;
        chi.record(triple.agree(), || format!("{e} genus {genus}: {triple:?}"));
        hom.record(
            hom_exists_par(&cfg, la, lb)? == hom_exists_par_direct(&cfg, la, lb)?,
            || format!("{la} -> {lb}"),
        );

        let fin = sample::finite_bundle(&mut rng, &cfg, 3);
        // the classes of degree-0 lines number r^{m-1}, so the power
        // vectors become dependent by then
        let bound = (cfg.root_index() as i64)
            .pow(cfg.num_points().saturating_sub(1) as u32)
            .max(1);
        let ok =
            is_finite(&cfg, &fin)? && is_semistable(&cfg, &fin)? && witness_polynomials(&cfg, &fin, bound)?.is_some();
        finite.record(ok, || format!("{fin}"));
    }

    let mut structure = Tally::new("structure theorem on finite lines");
    for r in 1..=6u32 {
        for m in 1..=4usize {
            let cfg = OrbiConfig::p1(m, r)?;
            let ok = verify_structure_theorem(&cfg).is_ok();
            structure.record(ok, || format!("r={r} m={m}"));
        }
    }

    Ok(SelftestReport {
        seed,
        samples,
        checks: vec![
            round_trip.done(),
            coend.done(),
            tensor.done(),
            day.done(),
            degree.done(),
            hilbert.done(),
            chi.done(),
            dual.done(),
            hom.done(),
            finite.done(),
            structure.done(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let a = run(40, 7, 1e-9).unwrap();
        assert!(a.passed(), "{a:#?}");
        assert_eq!(a, run(40, 7, 1e-9).unwrap());
    }
}
