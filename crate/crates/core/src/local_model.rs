//! The local chart at a marked point: `Z/r`-graded free modules over the
//! truncated ring `A = k[t]/(t^N)` with `deg t = 1`, whose degree-0 part is
//! generated by `x = t^r`.
//!
//! A [`GradedModule`] is presented by `n` homogeneous columns inside the
//! graded free module with the given ambient degrees. Decomposition into
//! shifts goes through `M/tM` as a graded vector space (Nakayama); all
//! computations are exact linear algebra over the rationals on the
//! finite-dimensional truncation.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::OrbiConfig;
use crate::rational::{self, Q};
use crate::root_stack::StackBundle;

type Wide = Ratio<i128>;

/// A polynomial in `t`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn monomial(c: Q, e: usize) -> Self {
        let mut v = vec![Q::zero(); e + 1];
        v[e] = c;
        Poly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, e: usize) -> Q {
        self.0.get(e).copied().unwrap_or_else(Q::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Poly {
        Poly(self.0.iter().take(n).copied().collect()).trimmed()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly((0..len).map(|e| self.coeff(e) + other.coeff(e)).collect()).trimmed()
    }

    pub fn scale(&self, c: Q) -> Poly {
        Poly(self.0.iter().map(|&x| x * c).collect()).trimmed()
    }

    /// Product modulo `t^n`.
    pub fn mul_trunc(&self, other: &Poly, n: usize) -> Poly {
        let mut out = vec![Q::zero(); n.min(self.0.len() + other.0.len())];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                if i + j < out.len() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly(out).trimmed()
    }

    /// Parses expressions such as `1 + t^2`, `-3/2*t`, `2t^3 - t`.
    pub fn parse(s: &str) -> Result<Poly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = Poly::zero();
        for term in terms {
            out = out.add(&parse_term(term, s)?);
        }
        Ok(out)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<Poly> {
    let bad = || Error::Parse(format!("cannot parse polynomial `{whole}`"));
    let (sign, body) = match term.strip_prefix('-') {
        Some(b) => (-Q::one(), b),
        None => (Q::one(), term.strip_prefix('+').unwrap_or(term)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    match body.find('t') {
        None => Ok(Poly::constant(sign * rational::parse(body).map_err(|_| bad())?)),
        Some(pos) => {
            let coeff = body[..pos].trim_end_matches('*');
            let c = if coeff.is_empty() {
                Q::one()
            } else {
                rational::parse(coeff).map_err(|_| bad())?
            };
            let rest = &body[pos + 1..];
            let e = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse::<usize>()
                    .map_err(|_| bad())?
            };
            Ok(Poly::monomial(sign * c, e))
        }
    }
}

/// Input record for a graded module file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedModuleRecord {
    pub r: u32,
    #[serde(rename = "N")]
    pub precision: usize,
    pub ambient_degrees: Vec<u32>,
    /// Rows of polynomial strings in `t`.
    pub matrix: Vec<Vec<String>>,
}

/// The submodule of `⊕_i A(ambient_i)` spanned by `n` homogeneous columns,
/// assumed free of rank `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedModule {
    root_index: u32,
    precision: usize,
    ambient: Vec<u32>,
    /// `columns[j][i]` is the entry in row `i`.
    columns: Vec<Vec<Poly>>,
}

/// Rank of the degree-0 part over `k[x]/(x^{N/r})` and the `t`-exponents of
/// its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPart {
    pub rank: usize,
    pub profile: Vec<usize>,
}

impl GradedModule {
    pub fn new(root_index: u32, precision: usize, ambient: Vec<u32>, rows: Vec<Vec<Poly>>) -> Result<Self> {
        if root_index < 1 {
            return Err(Error::Domain("root index must be ≥ 1".into()));
        }
        if precision == 0 || !precision.is_multiple_of(root_index as usize) {
            return Err(Error::Domain(format!(
                "precision {precision} must be a positive multiple of r = {root_index}"
            )));
        }
        let n = ambient.len();
        if rows.len() != n || rows.iter().any(|row| row.len() != n) {
            return Err(Error::Domain(format!(
                "matrix must be {n} x {n} to match the ambient degrees"
            )));
        }
        if let Some(&a) = ambient.iter().find(|&&a| a >= root_index) {
            return Err(Error::Domain(format!("ambient degree {a} is not in 0..{root_index}")));
        }
        let columns = (0..n)
            .map(|j| (0..n).map(|i| rows[i][j].truncate(precision)).collect())
            .collect();
        Ok(GradedModule {
            root_index,
            precision,
            ambient,
            columns,
        })
    }

    pub fn from_record(rec: &GradedModuleRecord) -> Result<Self> {
        let rows = rec
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| Poly::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(rec.r, rec.precision, rec.ambient_degrees.clone(), rows)
    }

    /// `⊕_j A[j]^{n_j}` in its standard presentation.
    pub fn free(root_index: u32, precision: usize, shifts: &[u32]) -> Result<Self> {
        let n = shifts.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Poly::constant(Q::one()) } else { Poly::zero() })
                    .collect()
            })
            .collect();
        Self::new(root_index, precision, shifts.to_vec(), rows)
    }

    pub fn rank(&self) -> usize {
        self.ambient.len()
    }

    pub fn root_index(&self) -> u32 {
        self.root_index
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn ambient(&self) -> &[u32] {
        &self.ambient
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.columns[j][i]
    }

    /// The module spanned by `C P` for an `n x n` matrix `P` over `A`.
    pub fn change_basis(&self, p: &[Vec<Poly>]) -> Result<Self> {
        let n = self.rank();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Poly::zero(), |acc, k| {
                            acc.add(&self.columns[k][i].mul_trunc(&p[k][j], self.precision))
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(self.root_index, self.precision, self.ambient.clone(), rows)
    }

    /// Degree of each column, checking homogeneity.
    pub fn column_degrees(&self) -> Result<Vec<u32>> {
        let r = self.root_index as usize;
        self.columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                let mut degree = None;
                for (i, entry) in col.iter().enumerate() {
                    for (e, c) in entry.0.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let deg = ((self.ambient[i] as usize + e) % r) as u32;
                        match degree {
                            None => degree = Some(deg),
                            Some(g) if g != deg => return Err(Error::NonHomogeneous(j)),
                            Some(_) => {}
                        }
                    }
                }
                degree.ok_or_else(|| Error::NotFree(format!("column {j} is zero")))
            })
            .collect()
    }

    /// Determinant modulo `t^N`.
    pub fn determinant(&self) -> Poly {
        let idx: Vec<usize> = (0..self.rank()).collect();
        self.minor(&idx, 0)
    }

    fn minor(&self, rows: &[usize], col: usize) -> Poly {
        if rows.is_empty() {
            return Poly::constant(Q::one());
        }
        let mut acc = Poly::zero();
        for (pos, &i) in rows.iter().enumerate() {
            let entry = &self.columns[col][i];
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != i).collect();
            let term = entry.mul_trunc(&self.minor(&rest, col + 1), self.precision);
            acc = if pos % 2 == 0 {
                acc.add(&term)
            } else {
                acc.add(&term.scale(-Q::one()))
            };
        }
        acc
    }

    /// Coordinates of `t^e * column_j` in `k^{n N}`, or `None` past the
    /// truncation.
    fn shifted_column(&self, j: usize, e: usize) -> Option<Vec<Wide>> {
        if e >= self.precision {
            return None;
        }
        let n = self.precision;
        let mut v = vec![Wide::zero(); self.rank() * n];
        for (i, entry) in self.columns[j].iter().enumerate() {
            for (k, c) in entry.0.iter().enumerate() {
                if k + e < n && !c.is_zero() {
                    v[i * n + k + e] = Wide::new(*c.numer() as i128, *c.denom() as i128);
                }
            }
        }
        Some(v)
    }

    /// Spanning set of the degree-`d` part of `t^s M` (for `s ≥ 0`).
    fn graded_span(&self, degrees: &[u32], d: u32, s: usize) -> Vec<(usize, usize, Vec<Wide>)> {
        let r = self.root_index as usize;
        let mut out = Vec::new();
        for (j, &g) in degrees.iter().enumerate() {
            let first = (d as usize + r - g as usize) % r;
            let mut e = first;
            while e < s {
                e += r;
            }
            while let Some(v) = self.shifted_column(j, e) {
                out.push((j, e, v));
                e += r;
            }
        }
        out
    }
}

/// Row echelon basis of a subspace, used for rank and membership tests.
#[derive(Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Wide>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<Wide>) -> Vec<Wide> {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= c * y;
                }
            }
        }
        v
    }

    /// Adds `v` and reports whether it was independent.
    fn insert(&mut self, v: Vec<Wide>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        v.iter_mut().for_each(|x| *x *= inv);
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if !c.is_zero() {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= c * y;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    fn contains(&self, v: Vec<Wide>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn span<I: IntoIterator<Item = Vec<Wide>>>(vs: I) -> Echelon {
    let mut e = Echelon::default();
    for v in vs {
        e.insert(v);
    }
    e
}

/// Graded dimensions of `M/tM`, indexed by degree in `Z/r`.
pub fn graded_dims_mod_t(m: &GradedModule) -> Result<Vec<usize>> {
    let degrees = m.column_degrees()?;
    Ok((0..m.root_index)
        .map(|d| {
            let whole = span(m.graded_span(&degrees, d, 0).into_iter().map(|x| x.2)).dim();
            let tm = span(m.graded_span(&degrees, d, 1).into_iter().map(|x| x.2)).dim();
            whole - tm
        })
        .collect())
}

/// `{j: n_j}` with `M ≅ ⊕_j A[j]^{n_j}`.
///
/// Reduces `M/tM` degree by degree, picks homogeneous lifts among the
/// columns, and checks that the lifted map is an isomorphism through the
/// determinant modulo `t^N`.
pub fn decompose_shifts(m: &GradedModule) -> Result<BTreeMap<u32, usize>> {
    let degrees = m.column_degrees()?;
    let mut shifts = BTreeMap::new();
    let mut lifts = Vec::new();
    for d in 0..m.root_index {
        let mut quotient = span(m.graded_span(&degrees, d, 1).into_iter().map(|x| x.2));
        for (j, _) in degrees.iter().enumerate().filter(|(_, &g)| g == d) {
            let v = m.shifted_column(j, 0).expect("precision is positive");
            if quotient.insert(v) {
                lifts.push(j);
                *shifts.entry(d).or_insert(0) += 1;
            }
        }
    }
    if lifts.len() != m.rank() {
        return Err(Error::NotFree(format!(
            "M/tM has dimension {} but the presentation has {} columns",
            lifts.len(),
            m.rank()
        )));
    }
    if m.determinant().is_zero() {
        return Err(Error::NotFree(format!("determinant vanishes modulo t^{}", m.precision)));
    }
    Ok(shifts)
}

/// Rank of the degree-0 part `M_0` over `k[x]/(x^{N/r})`, computed as
/// `dim_k M_0 / x M_0`, with the `t`-exponent of each generator.
pub fn invariant_part_rank(m: &GradedModule) -> Result<InvariantPart> {
    decompose_shifts(m)?;
    let degrees = m.column_degrees()?;
    let r = m.root_index as usize;
    let mut quotient = span(m.graded_span(&degrees, 0, r).into_iter().map(|x| x.2));
    let mut profile = Vec::new();
    for (_, e, v) in m.graded_span(&degrees, 0, 0).into_iter().filter(|x| x.1 < r) {
        if quotient.insert(v) {
            profile.push(e);
        }
    }
    profile.sort();
    if profile.len() != m.rank() {
        return Err(Error::Inconsistency(format!(
            "invariant part has rank {} but M has rank {}",
            profile.len(),
            m.rank()
        )));
    }
    Ok(InvariantPart {
        rank: profile.len(),
        profile,
    })
}

/// For `l ≤ l' < l + r`: whether `(t^{l'} M)_0 ⊂ (t^l M)_0` with cokernel
/// killed by `x`, i.e. free over `k[x]/(x)`.
pub fn cokernel_free_check(m: &GradedModule, l: i64, l2: i64) -> Result<bool> {
    let r = m.root_index as i64;
    if l2 < l || l2 >= l + r {
        return Err(Error::Domain(format!("need l ≤ l' < l + r, got l = {l}, l' = {l2}")));
    }
    decompose_shifts(m)?;
    let degrees = m.column_degrees()?;
    // t^{l} M ≅ t^{l + ar} M as graded k[x]-modules, so move l into 0..r.
    let base = l.rem_euclid(r);
    let (lo, hi) = (base as usize, (base + l2 - l) as usize);
    if hi + r as usize > m.precision {
        return Err(Error::Domain(format!(
            "precision {} too small for this check",
            m.precision
        )));
    }
    let big = span(m.graded_span(&degrees, 0, lo).into_iter().map(|x| x.2));
    let small: Vec<Vec<Wide>> = m.graded_span(&degrees, 0, hi).into_iter().map(|x| x.2).collect();
    let small_span = span(small.iter().cloned());
    let included = small.into_iter().all(|v| big.contains(v));
    let killed_by_x = m
        .graded_span(&degrees, 0, lo + r as usize)
        .into_iter()
        .all(|(_, _, v)| small_span.contains(v));
    Ok(included && killed_by_x)
}

/// Local chart of a split bundle at one marked point: `⊕ A[res]`.
pub fn local_chart(cfg: &OrbiConfig, f: &StackBundle, point: usize, precision: usize) -> Result<GradedModule> {
    if point >= cfg.num_points() {
        return Err(Error::Domain(format!("point index {point} out of range")));
    }
    let shifts: Vec<u32> = f.summands().iter().map(|s| s.res[point]).collect();
    GradedModule::free(cfg.root_index(), precision, &shifts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn module(r: u32, ambient: &[u32], rows: &[&[&str]]) -> GradedModule {
        let rows = rows.iter().map(|row| row.iter().map(|s| p(s)).collect()).collect();
        GradedModule::new(r, 4 * r as usize, ambient.to_vec(), rows).unwrap()
    }

    #[test]
    fn parses_polynomials() {
        assert_eq!(p("1+t^2"), Poly(vec![q(1, 1), q(0, 1), q(1, 1)]));
        assert_eq!(p("-3/2*t"), Poly(vec![q(0, 1), q(-3, 2)]));
        assert_eq!(p("2t^3 - t"), Poly(vec![q(0, 1), q(-1, 1), q(0, 1), q(2, 1)]));
        assert_eq!(p("0"), Poly::zero());
        assert!(Poly::parse("t^").is_err());
        assert!(Poly::parse("0.5t").is_err());
        assert!(Poly::parse("").is_err());
    }

    #[test]
    fn identity_decomposes_to_ambient() {
        let m = module(2, &[0, 1], &[&["1", "0"], &["0", "1"]]);
        let want: BTreeMap<u32, usize> = [(0, 1), (1, 1)].into();
        assert_eq!(decompose_shifts(&m).unwrap(), want);
    }

    #[test]
    fn multiplication_by_t_shifts() {
        let m = module(2, &[0], &[&["t"]]);
        assert_eq!(decompose_shifts(&m).unwrap(), [(1, 1)].into());
    }

    #[test]
    fn mixed_matrix() {
        let m = module(2, &[0, 1], &[&["1", "t"], &["t", "1+t^2"]]);
        assert_eq!(decompose_shifts(&m).unwrap(), [(0, 1), (1, 1)].into());
        assert_eq!(graded_dims_mod_t(&m).unwrap(), vec![1, 1]);
    }

    #[test]
    fn rejects_bad_modules() {
        let nonhom = module(2, &[0, 0], &[&["1+t", "0"], &["0", "1"]]);
        assert_eq!(decompose_shifts(&nonhom), Err(Error::NonHomogeneous(0)));
        let singular = module(2, &[0, 0], &[&["1", "1"], &["0", "0"]]);
        assert!(matches!(decompose_shifts(&singular), Err(Error::NotFree(_))));
        let zero_col = module(2, &[0], &[&["0"]]);
        assert!(matches!(decompose_shifts(&zero_col), Err(Error::NotFree(_))));
        assert!(GradedModule::new(2, 5, vec![0], vec![vec![p("1")]]).is_err());
        assert!(GradedModule::new(2, 8, vec![2], vec![vec![p("1")]]).is_err());
    }

    #[test]
    fn invariant_part_examples() {
        let a0 = GradedModule::free(2, 8, &[0]).unwrap();
        assert_eq!(
            invariant_part_rank(&a0).unwrap(),
            InvariantPart {
                rank: 1,
                profile: vec![0]
            }
        );
        let a1 = GradedModule::free(2, 8, &[1]).unwrap();
        assert_eq!(
            invariant_part_rank(&a1).unwrap(),
            InvariantPart {
                rank: 1,
                profile: vec![1]
            }
        );
        let all = GradedModule::free(3, 12, &[0, 1, 2]).unwrap();
        assert_eq!(invariant_part_rank(&all).unwrap().rank, 3);
    }

    #[test]
    fn cokernel_examples() {
        let a0 = GradedModule::free(2, 8, &[0]).unwrap();
        assert!(cokernel_free_check(&a0, 0, 1).unwrap());
        assert!(cokernel_free_check(&a0, 0, 0).unwrap());
        assert!(cokernel_free_check(&a0, -3, -2).unwrap());
        assert!(cokernel_free_check(&a0, 0, 2).is_err());
    }

    #[test]
    fn determinant_is_truncated() {
        let m = module(2, &[0, 1], &[&["1", "t"], &["t", "1+t^2"]]);
        assert_eq!(m.determinant(), p("1"));
        let m = module(1, &[0, 0], &[&["t^3", "0"], &["0", "t"]]);
        assert!(m.determinant().is_zero());
    }
}
