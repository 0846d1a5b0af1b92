//! Split bundles on the root stack.
//!
//! The Picard group is modelled as `Z x (Z/r)^m`: a line object is a
//! pullback degree `d` plus exponents `res_i` of the tautological roots
//! `N_i`, subject to `N_i^r = pi^* O(P_i)`. Canonical form keeps every
//! exponent in `0..r` and carries the rest into `d`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{chi_line_on_base, OrbiConfig};
use crate::rational::{int, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineObject {
    pub d: i64,
    pub res: Vec<u32>,
}

/// A direct sum of line objects, kept sorted so that equality is
/// isomorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StackBundle {
    summands: Vec<LineObject>,
}

impl LineObject {
    /// Checked constructor for an already canonical line object.
    pub fn new(cfg: &OrbiConfig, d: i64, res: Vec<u32>) -> Result<Self> {
        cfg.check_len(res.len())?;
        if let Some(&bad) = res.iter().find(|&&x| x >= cfg.root_index()) {
            return Err(Error::ResidueOutOfRange {
                residue: bad as i64,
                root_index: cfg.root_index(),
            });
        }
        Ok(LineObject { d, res })
    }

    /// `pi^* O(d)`.
    pub fn pullback(cfg: &OrbiConfig, d: i64) -> Self {
        LineObject {
            d,
            res: vec![0; cfg.num_points()],
        }
    }

    pub fn trivial(cfg: &OrbiConfig) -> Self {
        Self::pullback(cfg, 0)
    }

    /// `N^{l}` where `N` is the tautological root of `O(D)`, i.e. every
    /// `N_i` raised to `l`.
    pub fn tautological_power(cfg: &OrbiConfig, l: i64) -> Self {
        normalize(cfg, 0, &vec![l; cfg.num_points()])
    }

    pub(crate) fn check(&self, cfg: &OrbiConfig) -> Result<()> {
        cfg.check_len(self.res.len())?;
        match self.res.iter().find(|&&x| x >= cfg.root_index()) {
            Some(&bad) => Err(Error::ResidueOutOfRange {
                residue: bad as i64,
                root_index: cfg.root_index(),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for LineObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let res: Vec<String> = self.res.iter().map(|x| x.to_string()).collect();
        write!(f, "({}, [{}])", self.d, res.join(","))
    }
}

impl StackBundle {
    pub fn new(mut summands: Vec<LineObject>) -> Self {
        summands.sort();
        StackBundle { summands }
    }

    pub fn checked(cfg: &OrbiConfig, summands: Vec<LineObject>) -> Result<Self> {
        for s in &summands {
            s.check(cfg)?;
        }
        Ok(Self::new(summands))
    }

    pub fn line(l: LineObject) -> Self {
        StackBundle { summands: vec![l] }
    }

    pub fn summands(&self) -> &[LineObject] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn direct_sum(&self, other: &StackBundle) -> StackBundle {
        let mut s = self.summands.clone();
        s.extend(other.summands.iter().cloned());
        StackBundle::new(s)
    }

    pub(crate) fn check(&self, cfg: &OrbiConfig) -> Result<()> {
        self.summands.iter().try_for_each(|s| s.check(cfg))
    }
}

impl fmt::Display for StackBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

impl FromIterator<LineObject> for StackBundle {
    fn from_iter<I: IntoIterator<Item = LineObject>>(iter: I) -> Self {
        StackBundle::new(iter.into_iter().collect())
    }
}

/// Reduces raw exponents mod `r`, carrying `floor(raw_i / r)` into `d`.
pub fn normalize(cfg: &OrbiConfig, d: i64, raw_res: &[i64]) -> LineObject {
    let r = cfg.r();
    let mut d = d;
    let res = raw_res
        .iter()
        .map(|&x| {
            let (carry, rem) = x.div_mod_floor(&r);
            d += carry;
            rem as u32
        })
        .collect();
    LineObject { d, res }
}

/// `d + sum_i res_i / r`.
pub fn deg_stack(cfg: &OrbiConfig, k: &LineObject) -> Q {
    let num: i64 = k.res.iter().map(|&x| x as i64).sum();
    int(k.d) + Q::new(num, cfg.r())
}

pub fn deg_stack_bundle(cfg: &OrbiConfig, f: &StackBundle) -> Q {
    f.summands.iter().map(|k| deg_stack(cfg, k)).sum()
}

pub fn tensor_stack(cfg: &OrbiConfig, a: &LineObject, b: &LineObject) -> Result<LineObject> {
    a.check(cfg)?;
    b.check(cfg)?;
    let raw: Vec<i64> = a.res.iter().zip(&b.res).map(|(&x, &y)| x as i64 + y as i64).collect();
    Ok(normalize(cfg, a.d + b.d, &raw))
}

/// Tensor product of split bundles: all pairwise products of summands.
pub fn tensor_stack_bundle(cfg: &OrbiConfig, a: &StackBundle, b: &StackBundle) -> Result<StackBundle> {
    let mut out = Vec::with_capacity(a.rank() * b.rank());
    for x in &a.summands {
        for y in &b.summands {
            out.push(tensor_stack(cfg, x, y)?);
        }
    }
    Ok(StackBundle::new(out))
}

pub fn dual_stack(cfg: &OrbiConfig, k: &LineObject) -> LineObject {
    let raw: Vec<i64> = k.res.iter().map(|&x| -(x as i64)).collect();
    normalize(cfg, -k.d, &raw)
}

pub fn dual_stack_bundle(cfg: &OrbiConfig, f: &StackBundle) -> StackBundle {
    f.summands.iter().map(|k| dual_stack(cfg, k)).collect()
}

/// Degree of `pi_* K`. Residues in `0..r` have zero integer part, so this
/// is the pullback degree.
pub fn pushforward_degree(k: &LineObject) -> i64 {
    k.d
}

/// Degree of `pi_*(N^{-l} ⊗ K)`: `d + sum_i floor((res_i - l) / r)`.
pub fn pushforward_twisted_degree(cfg: &OrbiConfig, k: &LineObject, l: i64) -> i64 {
    let r = cfg.r();
    k.d + k
        .res
        .iter()
        .map(|&x| num_integer::Integer::div_floor(&(x as i64 - l), &r))
        .sum::<i64>()
}

/// `χ(X, pi_* K)`.
pub fn chi_stack(cfg: &OrbiConfig, k: &LineObject) -> i64 {
    chi_line_on_base(cfg, pushforward_degree(k))
}

pub fn chi_stack_bundle(cfg: &OrbiConfig, f: &StackBundle) -> i64 {
    f.summands.iter().map(|k| chi_stack(cfg, k)).sum()
}

/// Whether a nonzero map `K1 -> K2` exists, i.e. `pi_*(K2 ⊗ K1^∨)` has a
/// section. Only meaningful on genus 0 where degree determines the bundle.
pub fn hom_nonzero(cfg: &OrbiConfig, k1: &LineObject, k2: &LineObject) -> Result<bool> {
    cfg.require_genus_zero()?;
    let h = tensor_stack(cfg, k2, &dual_stack(cfg, k1))?;
    Ok(pushforward_degree(&h) >= 0)
}
