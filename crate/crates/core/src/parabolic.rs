//! Split parabolic bundles with weights in `(1/r)Z`.
//!
//! A [`ParLine`] stores the degree of the underlying bundle `E_0` and one
//! weight in `[0, 1)` per marked point. Its filtration is
//! `E_t = E_0(sum_i floor(alpha_i - t) P_i)`, a decreasing step function of
//! `t` with `E_{t+1} = E_t(-D)`.

use std::fmt;

use crate::correspondence::to_stack_line;
use crate::error::{Error, Result};
use crate::geometry::{chi_line_on_base, OrbiConfig, WeightIndex};
use crate::rational::{floor, frac, has_denominator_dividing, int, Q};
use crate::root_stack::hom_nonzero;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParLine {
    pub d: i64,
    pub weights: Vec<Q>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ParBundle {
    summands: Vec<ParLine>,
}

/// Seshadri flag data: at each point, the distinct weights in increasing
/// order together with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagData {
    pub points: Vec<PointFlag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFlag {
    pub weights: Vec<Q>,
    pub multiplicities: Vec<usize>,
}

impl ParLine {
    pub fn new(cfg: &OrbiConfig, d: i64, weights: Vec<Q>) -> Result<Self> {
        let line = ParLine { d, weights };
        line.check(cfg)?;
        Ok(line)
    }

    pub(crate) fn check(&self, cfg: &OrbiConfig) -> Result<()> {
        cfg.check_len(self.weights.len())?;
        for &w in &self.weights {
            if !has_denominator_dividing(w, cfg.root_index()) {
                return Err(Error::BadDenominator {
                    weight: crate::rational::format(w),
                    root_index: cfg.root_index(),
                });
            }
            if w < int(0) || w >= int(1) {
                return Err(Error::WeightOutOfRange(crate::rational::format(w)));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        1
    }
}

impl fmt::Display for ParLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|&x| crate::rational::format(x)).collect();
        write!(f, "({}, ({}))", self.d, w.join(","))
    }
}

impl ParBundle {
    pub fn new(mut summands: Vec<ParLine>) -> Self {
        summands.sort();
        ParBundle { summands }
    }

    pub fn checked(cfg: &OrbiConfig, summands: Vec<ParLine>) -> Result<Self> {
        for s in &summands {
            s.check(cfg)?;
        }
        Ok(Self::new(summands))
    }

    pub fn line(l: ParLine) -> Self {
        ParBundle { summands: vec![l] }
    }

    pub fn summands(&self) -> &[ParLine] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &ParBundle) -> ParBundle {
        ParBundle::new(self.summands.iter().chain(&other.summands).cloned().collect())
    }

    /// Twist of the underlying bundle by `O(nu)` for a polarization of
    /// degree `h`.
    pub fn twist(&self, nu: i64, h: u32) -> ParBundle {
        self.summands
            .iter()
            .map(|s| ParLine {
                d: s.d + nu * h as i64,
                weights: s.weights.clone(),
            })
            .collect()
    }

    pub(crate) fn check(&self, cfg: &OrbiConfig) -> Result<()> {
        self.summands.iter().try_for_each(|s| s.check(cfg))
    }
}

impl FromIterator<ParLine> for ParBundle {
    fn from_iter<I: IntoIterator<Item = ParLine>>(iter: I) -> Self {
        ParBundle::new(iter.into_iter().collect())
    }
}

impl fmt::Display for ParBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

/// Degree of `E_t`: `d + sum_i floor(alpha_i - t)`.
pub fn filtration_degree(cfg: &OrbiConfig, line: &ParLine, t: Q) -> Result<i64> {
    let t = WeightIndex::from_rational(cfg, t)?.value();
    Ok(filtration_degree_unchecked(line, t))
}

fn filtration_degree_unchecked(line: &ParLine, t: Q) -> i64 {
    line.d + line.weights.iter().map(|&a| floor(a - t)).sum::<i64>()
}

/// The line whose filtration is `t -> E_{t + i}`.
pub fn shift_line(line: &ParLine, i: WeightIndex) -> ParLine {
    let s = i.value();
    let mut d = line.d;
    let weights = line
        .weights
        .iter()
        .map(|&a| {
            d += floor(a - s);
            frac(a - s)
        })
        .collect();
    ParLine { d, weights }
}

pub fn shift(bundle: &ParBundle, i: WeightIndex) -> ParBundle {
    bundle.summands.iter().map(|s| shift_line(s, i)).collect()
}

/// `O(d)` with the special structure: all weights zero.
pub fn special(cfg: &OrbiConfig, d: i64) -> ParLine {
    ParLine {
        d,
        weights: vec![int(0); cfg.num_points()],
    }
}

pub fn deg_par_line(line: &ParLine) -> Q {
    int(line.d) + line.weights.iter().copied().sum::<Q>()
}

/// Seshadri degree: `deg E_0 + sum of weights with multiplicity`.
pub fn deg_par(bundle: &ParBundle) -> Q {
    bundle.summands.iter().map(deg_par_line).sum()
}

/// `(1/r) sum_{l=1}^{r} χ(X, E_{l/r})`.
pub fn chi_par(cfg: &OrbiConfig, bundle: &ParBundle) -> Q {
    let r = cfg.r();
    let total: i64 = (1..=r)
        .map(|l| {
            let t = Q::new(l, r);
            bundle
                .summands
                .iter()
                .map(|s| chi_line_on_base(cfg, filtration_degree_unchecked(s, t)))
                .sum::<i64>()
        })
        .sum();
    Q::new(total, r)
}

/// Parabolic degree read off from the parabolic Hilbert polynomial: the
/// constant difference `chi_par(E(nu)) - chi_par(O^rho(nu))`.
///
/// On a curve the difference does not depend on `nu`; it is evaluated at
/// `nu = 0` and `nu = 1` and a mismatch is reported as an inconsistency.
pub fn deg_par_hilbert(cfg: &OrbiConfig, bundle: &ParBundle) -> Result<Q> {
    let h = cfg.polarization_degree();
    let reference: ParBundle = (0..bundle.rank()).map(|_| special(cfg, 0)).collect();
    let diff = |nu: i64| chi_par(cfg, &bundle.twist(nu, h)) - chi_par(cfg, &reference.twist(nu, h));
    let (at0, at1) = (diff(0), diff(1));
    if at0 != at1 {
        return Err(Error::Inconsistency(format!(
            "parabolic Hilbert difference is not constant: {} at 0, {} at 1",
            crate::rational::format(at0),
            crate::rational::format(at1)
        )));
    }
    Ok(at0)
}

/// Closed form of the convolution product of two lines: weights
/// `frac(alpha_i + beta_i)`, carries into the degree.
pub fn tensor_par_line(a: &ParLine, b: &ParLine) -> ParLine {
    let mut d = a.d + b.d;
    let weights = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(&x, &y)| {
            d += floor(x + y);
            frac(x + y)
        })
        .collect();
    ParLine { d, weights }
}

pub fn tensor_par(cfg: &OrbiConfig, a: &ParBundle, b: &ParBundle) -> Result<ParBundle> {
    a.check(cfg)?;
    b.check(cfg)?;
    let mut out = Vec::with_capacity(a.rank() * b.rank());
    for x in &a.summands {
        for y in &b.summands {
            out.push(tensor_par_line(x, y));
        }
    }
    Ok(ParBundle::new(out))
}

/// Degree of `(A ⊗ B)_{l/r}` evaluated directly as the coend
/// `∫^m A_{m/r} ⊗ B_{(l-m)/r}`: a sum of line subsheaves of a common
/// ambient, so at each point the largest of the candidate local degrees
/// wins. The index `m` runs over one period on each side of `l`.
pub fn tensor_par_coend_degree(cfg: &OrbiConfig, a: &ParLine, b: &ParLine, l: i64) -> i64 {
    let r = cfg.r();
    let local: i64 = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(&x, &y)| {
            (l - r..=l + r)
                .map(|m| floor(x - Q::new(m, r)) + floor(y - Q::new(l - m, r)))
                .max()
                .expect("nonempty window")
        })
        .sum();
    a.d + b.d + local
}

/// `Hom(L, O)` with the special structure on `O`.
pub fn dual_par(line: &ParLine) -> ParLine {
    let positive = line.weights.iter().filter(|&&a| a > int(0)).count() as i64;
    ParLine {
        d: -line.d - positive,
        weights: line.weights.iter().map(|&a| frac(-a)).collect(),
    }
}

pub fn dual_par_bundle(bundle: &ParBundle) -> ParBundle {
    bundle.summands.iter().map(dual_par).collect()
}

pub fn to_flag_data(cfg: &OrbiConfig, bundle: &ParBundle) -> FlagData {
    let points = (0..cfg.num_points())
        .map(|i| {
            let mut ws: Vec<Q> = bundle.summands.iter().map(|s| s.weights[i]).collect();
            ws.sort();
            let mut flag = PointFlag {
                weights: Vec::new(),
                multiplicities: Vec::new(),
            };
            for w in ws {
                if flag.weights.last() == Some(&w) {
                    *flag.multiplicities.last_mut().unwrap() += 1;
                } else {
                    flag.weights.push(w);
                    flag.multiplicities.push(1);
                }
            }
            flag
        })
        .collect();
    FlagData { points }
}

/// Whether a nonzero filtration-preserving map `A -> B` exists (genus 0).
/// Decided on the root stack side through the correspondence.
pub fn hom_exists_par(cfg: &OrbiConfig, a: &ParLine, b: &ParLine) -> Result<bool> {
    cfg.require_genus_zero()?;
    a.check(cfg)?;
    b.check(cfg)?;
    hom_nonzero(cfg, &to_stack_line(cfg, a), &to_stack_line(cfg, b))
}

/// The flag-side criterion: `phi(A_t) ⊂ B_t` for all `t` forces, at every
/// point where the weight drops (`beta_i < alpha_i`), a zero of `phi`. A
/// map exists iff the remaining degree is nonnegative.
pub fn hom_exists_par_direct(cfg: &OrbiConfig, a: &ParLine, b: &ParLine) -> Result<bool> {
    cfg.require_genus_zero()?;
    let drops = a.weights.iter().zip(&b.weights).filter(|(x, y)| y < x).count() as i64;
    Ok(b.d - a.d - drops >= 0)
}

/// Sub-bundle induced by the `j`-th summand of the underlying bundle
/// (0-based).
pub fn induced_sub_par(bundle: &ParBundle, j: usize) -> Result<ParLine> {
    bundle.summands.get(j).cloned().ok_or(Error::IndexOutOfRange {
        index: j,
        rank: bundle.rank(),
    })
}

/// Quotient by the `j`-th summand; the remaining summands.
pub fn induced_quot_par(bundle: &ParBundle, j: usize) -> Result<ParBundle> {
    if j >= bundle.rank() {
        return Err(Error::IndexOutOfRange {
            index: j,
            rank: bundle.rank(),
        });
    }
    let mut rest = bundle.summands.clone();
    rest.remove(j);
    Ok(ParBundle { summands: rest })
}
