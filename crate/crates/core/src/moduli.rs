//! Slopes, semistability and Nori finiteness for split bundles on the
//! orbifold projective line.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::OrbiConfig;
use crate::rational::{int, Q};
use crate::root_stack::{deg_stack, deg_stack_bundle, hom_nonzero, normalize, tensor_stack, LineObject, StackBundle};

/// A bundle as a multiset of line objects with multiplicities.
pub type Multiset = BTreeMap<LineObject, BigUint>;

/// Distinct `P, Q ∈ N[X]` with `P(F) ≅ Q(F)`; coefficients are listed by
/// increasing power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRelation {
    pub p: Vec<BigUint>,
    pub q: Vec<BigUint>,
    pub lhs: Multiset,
    pub rhs: Multiset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub count: usize,
    pub expected_count: usize,
    pub min_degree: i64,
    pub max_degree: i64,
    pub num_points: usize,
}

fn nonempty(f: &StackBundle) -> Result<()> {
    if f.is_empty() {
        Err(Error::EmptyBundle)
    } else {
        Ok(())
    }
}

pub fn slope(cfg: &OrbiConfig, f: &StackBundle) -> Result<Q> {
    nonempty(f)?;
    f.check(cfg)?;
    Ok(deg_stack_bundle(cfg, f) / int(f.rank() as i64))
}

/// On the orbifold projective line a split bundle is semistable iff all
/// summands have the same degree.
pub fn is_semistable(cfg: &OrbiConfig, f: &StackBundle) -> Result<bool> {
    cfg.require_genus_zero()?;
    nonempty(f)?;
    f.check(cfg)?;
    let first = deg_stack(cfg, &f.summands()[0]);
    Ok(f.summands().iter().all(|k| deg_stack(cfg, k) == first))
}

pub fn max_line_sub_degree(cfg: &OrbiConfig, f: &StackBundle) -> Result<Q> {
    cfg.require_genus_zero()?;
    nonempty(f)?;
    f.check(cfg)?;
    Ok(f.summands().iter().map(|k| deg_stack(cfg, k)).max().expect("nonempty"))
}

/// Smallest sub-bundle containing the image of a nonzero map from `K'`
/// into the `j`-th summand: the summand itself.
pub fn saturation(cfg: &OrbiConfig, sub: &LineObject, f: &StackBundle, j: usize) -> Result<LineObject> {
    let target = f.summands().get(j).ok_or(Error::IndexOutOfRange {
        index: j,
        rank: f.rank(),
    })?;
    if !hom_nonzero(cfg, sub, target)? {
        return Err(Error::NoMorphism {
            from: sub.to_string(),
            to: target.to_string(),
        });
    }
    if deg_stack(cfg, sub) > deg_stack(cfg, target) {
        return Err(Error::Inconsistency(format!(
            "saturation of {sub} in {target} lowers the degree"
        )));
    }
    Ok(target.clone())
}

/// A line object is torsion iff its degree is zero, so a split bundle is
/// finite iff all its summands have degree zero.
pub fn is_finite(cfg: &OrbiConfig, f: &StackBundle) -> Result<bool> {
    cfg.require_genus_zero()?;
    f.check(cfg)?;
    Ok(f.summands().iter().all(|k| deg_stack(cfg, k).is_zero()))
}

pub fn to_multiset(f: &StackBundle) -> Multiset {
    let mut out = Multiset::new();
    for s in f.summands() {
        *out.entry(s.clone()).or_insert_with(BigUint::zero) += 1u32;
    }
    out
}

fn tensor_multiset(cfg: &OrbiConfig, a: &Multiset, b: &Multiset) -> Result<Multiset> {
    let mut out = Multiset::new();
    for (x, cx) in a {
        for (y, cy) in b {
            *out.entry(tensor_stack(cfg, x, y)?).or_insert_with(BigUint::zero) += cx * cy;
        }
    }
    Ok(out)
}

/// `F^{⊗0}, …, F^{⊗n}` as multisets.
pub fn tensor_powers(cfg: &OrbiConfig, f: &StackBundle, n: usize) -> Result<Vec<Multiset>> {
    let base = to_multiset(f);
    let mut powers = vec![Multiset::from([(LineObject::trivial(cfg), BigUint::one())])];
    for _ in 0..n {
        let next = tensor_multiset(cfg, powers.last().expect("nonempty"), &base)?;
        powers.push(next);
    }
    Ok(powers)
}

/// `P(F) = ⊕_n (F^{⊗n})^{p_n}`.
pub fn evaluate(powers: &[Multiset], coeffs: &[BigUint]) -> Multiset {
    let mut out = Multiset::new();
    for (c, power) in coeffs.iter().zip(powers) {
        if c.is_zero() {
            continue;
        }
        for (k, mult) in power {
            *out.entry(k.clone()).or_insert_with(BigUint::zero) += c * mult;
        }
    }
    out
}

fn trim(mut c: Vec<BigUint>) -> Vec<BigUint> {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// Searches for a relation of degree at most `degree_bound`.
///
/// The count vectors of `F^{⊗0}, F^{⊗1}, …` are reduced in order; the
/// first power that lies in the span of the earlier ones gives an integer
/// relation `X^n = Σ c_k X^k` (monic, since `F` acts on the group ring by
/// an integer matrix). Splitting by sign yields `P` and `Q`, which are
/// checked by direct evaluation.
pub fn witness_polynomials(cfg: &OrbiConfig, f: &StackBundle, degree_bound: i64) -> Result<Option<WitnessRelation>> {
    cfg.require_genus_zero()?;
    f.check(cfg)?;
    if degree_bound < 1 {
        return Err(Error::Domain("witness degree bound must be ≥ 1".into()));
    }
    let powers = tensor_powers(cfg, f, degree_bound as usize)?;
    let Some(relation) = first_linear_relation(&powers) else {
        return Ok(None);
    };
    let to_nat = |x: &BigInt| x.to_biguint().unwrap_or_default();
    let p: Vec<BigUint> = relation
        .iter()
        .map(|c| if c.is_positive() { to_nat(c) } else { BigUint::zero() })
        .collect();
    let q: Vec<BigUint> = relation
        .iter()
        .map(|c| if c.is_negative() { to_nat(&-c) } else { BigUint::zero() })
        .collect();
    let lhs = evaluate(&powers, &p);
    let rhs = evaluate(&powers, &q);
    let (p, q) = (trim(p), trim(q));
    if p == q || lhs != rhs {
        return Err(Error::Inconsistency(format!(
            "witness relation for {f} does not verify"
        )));
    }
    Ok(Some(WitnessRelation { p, q, lhs, rhs }))
}

/// Dimension of the span of the count vectors of all tensor powers up to
/// `n`; a relation of degree `≤ n` exists iff this is at most `n`.
///
/// Once `F^{⊗k}` depends on the lower powers so do all later ones, so the
/// reduction stops at the first dependency.
pub fn power_span_dimension(cfg: &OrbiConfig, f: &StackBundle, n: usize) -> Result<usize> {
    let powers = tensor_powers(cfg, f, n)?;
    let (basis, _) = reduce_powers(&powers);
    Ok(basis.len())
}

type SparseVec = BTreeMap<LineObject, BigRational>;

/// Reduced row echelon data: pivot class, reduced vector, and its
/// expression in terms of the original power vectors.
struct Row {
    pivot: LineObject,
    vec: SparseVec,
    combo: Vec<BigRational>,
}

fn reduce_powers(powers: &[Multiset]) -> (Vec<Row>, Option<Vec<BigRational>>) {
    let mut basis: Vec<Row> = Vec::new();
    for (n, power) in powers.iter().enumerate() {
        let mut vec: SparseVec = power
            .iter()
            .map(|(k, c)| (k.clone(), BigRational::from_integer(BigInt::from(c.clone()))))
            .collect();
        let mut combo = vec![BigRational::zero(); powers.len()];
        combo[n] = BigRational::one();
        for row in &basis {
            let Some(c) = vec.get(&row.pivot).cloned() else {
                continue;
            };
            for (k, x) in &row.vec {
                let entry = vec.entry(k.clone()).or_insert_with(BigRational::zero);
                *entry -= &c * x;
                if entry.is_zero() {
                    vec.remove(k);
                }
            }
            for (a, b) in combo.iter_mut().zip(&row.combo) {
                *a -= &c * b;
            }
        }
        match vec.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            None => return (basis, Some(combo)),
            Some((pivot, lead)) => {
                let inv = lead.recip();
                vec.values_mut().for_each(|x| *x *= &inv);
                combo.iter_mut().for_each(|x| *x *= &inv);
                basis.push(Row { pivot, vec, combo });
            }
        }
    }
    (basis, None)
}

fn first_linear_relation(powers: &[Multiset]) -> Option<Vec<BigInt>> {
    let (_, combo) = reduce_powers(powers);
    let combo = combo?;
    let lcm = combo
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let mut ints: Vec<BigInt> = combo
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
    if !g.is_zero() {
        ints.iter_mut().for_each(|c| *c = &*c / &g);
    }
    while ints.last().is_some_and(|c| c.is_zero()) {
        ints.pop();
    }
    Some(ints)
}

/// All canonical degree-0 line objects, sorted by `(d, res)`.
pub fn enumerate_finite_lines(cfg: &OrbiConfig) -> Vec<LineObject> {
    let r = cfg.r();
    let m = cfg.num_points();
    if m == 0 {
        return vec![LineObject::trivial(cfg)];
    }
    let mut out = Vec::new();
    let mut res = vec![0i64; m];
    loop {
        let total: i64 = res.iter().sum();
        if total % r == 0 {
            out.push(normalize(cfg, -total / r, &res));
        }
        // odometer over (0..r)^m
        let mut i = 0;
        loop {
            if i == m {
                out.sort();
                return out;
            }
            res[i] += 1;
            if res[i] < r {
                break;
            }
            res[i] = 0;
            i += 1;
        }
    }
}

/// Checks `-m < d ≤ 0` for every finite line object, together with
/// semistability and degree 0, and reports the extremes attained.
pub fn verify_structure_theorem(cfg: &OrbiConfig) -> Result<StructureReport> {
    cfg.require_genus_zero()?;
    let m = cfg.num_points();
    if m == 0 {
        return Err(Error::Domain(
            "structure theorem needs at least one marked point".into(),
        ));
    }
    let lines = enumerate_finite_lines(cfg);
    for k in &lines {
        let f = StackBundle::line(k.clone());
        if !(-(m as i64) < k.d && k.d <= 0) {
            return Err(Error::Inconsistency(format!("finite line {k} violates -m < d ≤ 0")));
        }
        if !is_finite(cfg, &f)? || !is_semistable(cfg, &f)? || !deg_stack(cfg, k).is_zero() {
            return Err(Error::Inconsistency(format!(
                "finite line {k} is not semistable of degree 0"
            )));
        }
    }
    let expected_count = (cfg.root_index() as usize).pow(m as u32 - 1);
    if lines.len() != expected_count {
        return Err(Error::Inconsistency(format!(
            "found {} finite lines, expected {expected_count}",
            lines.len()
        )));
    }
    Ok(StructureReport {
        count: lines.len(),
        expected_count,
        min_degree: lines.iter().map(|k| k.d).min().unwrap_or(0),
        max_degree: lines.iter().map(|k| k.d).max().unwrap_or(0),
        num_points: m,
    })
}
