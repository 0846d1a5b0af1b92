//! The equivalence between split parabolic bundles and split bundles on
//! the root stack.
//!
//! `to_parabolic` is the twisted pushforward `E_{l/r} = pi_*(N^{-l} ⊗ F)`;
//! `to_stack` is its inverse in closed form (residue = `r * weight`).
//! [`coend_evaluate`] computes the inverse independently, as the coend
//! `∫^l N^l ⊗ pi^* E_{l/r}` realised as a sum of line subsheaves.

use crate::error::{Error, Result};
use crate::geometry::OrbiConfig;
use crate::parabolic::{filtration_degree, tensor_par, ParBundle, ParLine};
use crate::rational::{floor, int, Q};
use crate::root_stack::{normalize, pushforward_twisted_degree, tensor_stack_bundle, LineObject, StackBundle};

/// Vanishing orders, in the local root coordinate at each marked point, of
/// a line subsheaf of the common ambient, plus a generic degree offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderVector {
    pub orders: Vec<i64>,
    pub offset: i64,
}

pub fn to_parabolic_line(cfg: &OrbiConfig, k: &LineObject) -> ParLine {
    let r = cfg.r();
    ParLine {
        d: k.d,
        weights: k.res.iter().map(|&x| Q::new(x as i64, r)).collect(),
    }
}

/// `F ↦ (l/r ↦ pi_*(N^{-l} ⊗ F))`, checked against the filtration over
/// one period.
pub fn to_parabolic(cfg: &OrbiConfig, f: &StackBundle) -> Result<ParBundle> {
    f.check(cfg)?;
    let r = cfg.r();
    let mut out = Vec::with_capacity(f.rank());
    for k in f.summands() {
        let line = to_parabolic_line(cfg, k);
        for l in 1..=r {
            let lhs = filtration_degree(cfg, &line, Q::new(l, r))?;
            let rhs = pushforward_twisted_degree(cfg, k, l);
            if lhs != rhs {
                return Err(Error::Inconsistency(format!(
                    "filtration of {line} at {l}/{r} is {lhs}, twisted pushforward of {k} is {rhs}"
                )));
            }
        }
        out.push(line);
    }
    Ok(ParBundle::new(out))
}

pub fn to_stack_line(cfg: &OrbiConfig, line: &ParLine) -> LineObject {
    let r = cfg.r();
    let raw: Vec<i64> = line.weights.iter().map(|&a| (a * int(r)).to_integer()).collect();
    normalize(cfg, line.d, &raw)
}

pub fn to_stack(cfg: &OrbiConfig, e: &ParBundle) -> Result<StackBundle> {
    for s in e.summands() {
        s.check(cfg)?;
    }
    Ok(e.summands().iter().map(|s| to_stack_line(cfg, s)).collect())
}

/// Order vector of `N^{l} ⊗ pi^* E_{l/r}` inside the ambient
/// `pi^* E_0 ⊗ K`: at point `i` the order is `-l - r floor(alpha_i - l/r)`.
pub fn dinatural_term(cfg: &OrbiConfig, line: &ParLine, l: i64) -> OrderVector {
    let r = cfg.r();
    OrderVector {
        orders: line.weights.iter().map(|&a| -l - r * floor(a - Q::new(l, r))).collect(),
        offset: line.d,
    }
}

/// Coend over an explicit window of indices. The subsheaf sum takes the
/// minimum order at every point.
pub fn coend_evaluate_window(cfg: &OrbiConfig, line: &ParLine, window: impl IntoIterator<Item = i64>) -> LineObject {
    let mut best: Option<Vec<i64>> = None;
    for l in window {
        let term = dinatural_term(cfg, line, l);
        best = Some(match best {
            None => term.orders,
            Some(cur) => cur.iter().zip(&term.orders).map(|(&a, &b)| a.min(b)).collect(),
        });
    }
    let orders = best.expect("coend window must be nonempty");
    let exponents: Vec<i64> = orders.iter().map(|&o| -o).collect();
    normalize(cfg, line.d, &exponents)
}

/// The inverse functor on a single line, computed as a colimit over one
/// period `{0, …, r-1}`.
pub fn coend_evaluate(cfg: &OrbiConfig, line: &ParLine) -> LineObject {
    coend_evaluate_window(cfg, line, 0..cfg.r())
}

/// Whether `G(A ⊗ B) = G(A) ⊗ G(B)`.
pub fn tensor_compat_check(cfg: &OrbiConfig, a: &ParBundle, b: &ParBundle) -> Result<bool> {
    let lhs = to_stack(cfg, &tensor_par(cfg, a, b)?)?;
    let rhs = tensor_stack_bundle(cfg, &to_stack(cfg, a)?, &to_stack(cfg, b)?)?;
    Ok(lhs == rhs)
}
