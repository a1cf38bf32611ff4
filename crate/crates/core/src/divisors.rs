//! Rigged point divisors `μ = (D⁺, L⁺; D⁻, L⁻)`, their secondary spaces and degrees,
//! on the lattice (explicit supported-function spans) and on `ℝⁿ`
//! (spans of derivatives of point deltas).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use crate::linalg::{rational_from_int, rational_rank, stable_nullity, stable_rank, CMatrix};

/// Relative singular-value threshold for lattice ranks.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// `C(a, b)` when `a ≥ b`, else 0. Fails for negative `b`.
pub fn binom0(a: i64, b: i64) -> Result<u64> {
    if b < 0 {
        return Err(Error::InvalidInput(format!("binom0 with negative lower index {b}")));
    }
    Ok(binom_or_zero(a, b as u64))
}

pub(crate) fn binom_or_zero(a: i64, b: u64) -> u64 {
    if a < 0 || (a as u64) < b {
        return 0;
    }
    let a = a as u64;
    let b = b.min(a - b);
    (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
}

/// A span `L` of distributions supported on a finite set `D`.
pub trait Span: Clone {
    fn dim(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.dim() == 0
    }
    fn meets(&self, other: &Self) -> bool;
    fn empty() -> Self;
}

/// Lattice span: `D` a finite point set and `L` the span of explicit functions supported in `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpan {
    points: Vec<LatticePoint>,
    basis: Vec<LatticeFunction>,
}

impl LatticeSpan {
    pub fn new(points: Vec<LatticePoint>, basis: Vec<LatticeFunction>) -> Result<Self> {
        let points: Vec<LatticePoint> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for f in &basis {
            if let Some(p) = f.support().find(|p| !points.contains(p)) {
                return Err(Error::InvalidInput(format!(
                    "basis function supported at {p:?} outside D"
                )));
            }
        }
        if !basis.is_empty() {
            let m = CMatrix::from_fn(points.len(), basis.len(), |i, j| basis[j].get(&points[i]));
            if stable_rank(&m, RANK_THRESHOLD)? != basis.len() {
                return Err(Error::InvalidInput("span basis is linearly dependent".into()));
            }
        }
        Ok(LatticeSpan { points, basis })
    }

    /// `L = span{δ_x : x ∈ D}`.
    pub fn deltas(points: Vec<LatticePoint>) -> Self {
        let points: Vec<LatticePoint> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let basis = points.iter().cloned().map(LatticeFunction::delta).collect();
        LatticeSpan { points, basis }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn basis(&self) -> &[LatticeFunction] {
        &self.basis
    }
}

impl Span for LatticeSpan {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn meets(&self, other: &Self) -> bool {
        self.points.iter().any(|p| other.points.contains(p))
    }

    fn empty() -> Self {
        LatticeSpan {
            points: Vec::new(),
            basis: Vec::new(),
        }
    }
}

/// Continuum span: per point `x`, the distributions `∂^α δ(· − x)` for `α ∈ S_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumSpan {
    dim: usize,
    entries: Vec<(Vec<f64>, BTreeSet<Vec<usize>>)>,
}

impl ContinuumSpan {
    pub fn new(dim: usize, entries: Vec<(Vec<f64>, Vec<Vec<usize>>)>) -> Result<Self> {
        let mut merged: Vec<(Vec<f64>, BTreeSet<Vec<usize>>)> = Vec::new();
        for (x, alphas) in entries {
            if x.len() != dim || alphas.iter().any(|a| a.len() != dim) {
                return Err(Error::InvalidInput(format!(
                    "point or multi-index of wrong length (expected {dim})"
                )));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite point".into()));
            }
            match merged.iter_mut().find(|(y, _)| *y == x) {
                Some((_, set)) => set.extend(alphas),
                None => merged.push((x, alphas.into_iter().collect())),
            }
        }
        merged.retain(|(_, s)| !s.is_empty());
        Ok(ContinuumSpan { dim, entries: merged })
    }

    /// `span{∂^α δ(· − x) : |α| ≤ order}` at a single point.
    pub fn full_order(x: Vec<f64>, order: usize) -> Self {
        let dim = x.len();
        let alphas = (0..=order).flat_map(|k| multi_indices(dim, k)).collect();
        ContinuumSpan {
            dim,
            entries: vec![(x, alphas)],
        }
    }

    pub fn space_dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Vec<f64>, BTreeSet<Vec<usize>>)] {
        &self.entries
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut all: Vec<(Vec<f64>, Vec<Vec<usize>>)> = self
            .entries
            .iter()
            .map(|(x, s)| (x.clone(), s.iter().cloned().collect()))
            .collect();
        all.extend(
            other
                .entries
                .iter()
                .map(|(x, s)| (x.clone(), s.iter().cloned().collect())),
        );
        Self::new(self.dim, all)
    }
}

impl Span for ContinuumSpan {
    fn dim(&self) -> usize {
        self.entries.iter().map(|(_, s)| s.len()).sum()
    }

    fn meets(&self, other: &Self) -> bool {
        self.entries
            .iter()
            .any(|(x, _)| other.entries.iter().any(|(y, _)| x == y))
    }

    fn empty() -> Self {
        ContinuumSpan {
            dim: 0,
            entries: Vec::new(),
        }
    }
}

/// All multi-indices of length `dim` with `|α| = order`.
pub fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    crate::spectral::taylor::multi_indices(dim, order)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiggedPointDivisor<S: Span> {
    pub plus: S,
    pub minus: S,
}

impl<S: Span> RiggedPointDivisor<S> {
    pub fn new(plus: S, minus: S) -> Result<Self> {
        if plus.meets(&minus) {
            return Err(Error::InvalidInput("D⁺ and D⁻ must be disjoint".into()));
        }
        Ok(RiggedPointDivisor { plus, minus })
    }

    pub fn trivial() -> Self {
        RiggedPointDivisor {
            plus: S::empty(),
            minus: S::empty(),
        }
    }

    pub fn positive(plus: S) -> Self {
        RiggedPointDivisor {
            plus,
            minus: S::empty(),
        }
    }

    pub fn negative(minus: S) -> Self {
        RiggedPointDivisor {
            plus: S::empty(),
            minus,
        }
    }

    /// `μ⁻¹ = (D⁻, L⁻; D⁺, L⁺)`.
    pub fn inverse(&self) -> Self {
        RiggedPointDivisor {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn positive_part(&self) -> Self {
        Self::positive(self.plus.clone())
    }

    pub fn negative_part(&self) -> Self {
        Self::negative(self.minus.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.minus.is_empty()
    }
}

pub fn inverse_divisor<S: Span>(mu: &RiggedPointDivisor<S>) -> RiggedPointDivisor<S> {
    mu.inverse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub ell_plus: usize,
    pub ell_tilde_plus: usize,
    pub ell_minus: usize,
    pub ell_tilde_minus: usize,
    pub degree: i64,
}

/// An operator together with the rule computing secondary spaces for it.
pub trait DegreeContext<S: Span> {
    /// `dim{u ∈ ℰ'_D : Pu ∈ L}`.
    fn secondary_dim(&self, span: &S) -> Result<usize>;
    fn transposed(&self) -> Self;
}

impl DegreeContext<LatticeSpan> for PeriodicLatticeOperator {
    fn secondary_dim(&self, span: &LatticeSpan) -> Result<usize> {
        secondary_dim_lattice(self, span)
    }

    fn transposed(&self) -> Self {
        self.transpose()
    }
}

impl DegreeContext<ContinuumSpan> for Symbol {
    fn secondary_dim(&self, span: &ContinuumSpan) -> Result<usize> {
        secondary_dim_continuum(self, span)
    }

    fn transposed(&self) -> Self {
        self.transpose()
    }
}

/// `deg_P μ = (ℓ⁺ − ℓ̃⁺) − (ℓ⁻ − ℓ̃⁻)`, with `ℓ̃⁻` computed for the transpose `P*`.
pub fn degree<S: Span, C: DegreeContext<S>>(ctx: &C, mu: &RiggedPointDivisor<S>) -> Result<DegreeReport> {
    let ell_plus = mu.plus.dim();
    let ell_minus = mu.minus.dim();
    let ell_tilde_plus = ctx.secondary_dim(&mu.plus)?;
    let ell_tilde_minus = ctx.transposed().secondary_dim(&mu.minus)?;
    if ell_tilde_plus > ell_plus || ell_tilde_minus > ell_minus {
        return Err(Error::InvalidInput(format!(
            "secondary dimension exceeds primary: ℓ⁺={ell_plus}, ℓ̃⁺={ell_tilde_plus}, ℓ⁻={ell_minus}, ℓ̃⁻={ell_tilde_minus}"
        )));
    }
    Ok(DegreeReport {
        ell_plus,
        ell_tilde_plus,
        ell_minus,
        ell_tilde_minus,
        degree: (ell_plus as i64 - ell_tilde_plus as i64) - (ell_minus as i64 - ell_tilde_minus as i64),
    })
}

/// `dim{u supported on D : Au ∈ L}` as the nullity of `[A|_D | −L]`; the map
/// `(u, b) ↦ u` is injective on that null space because the basis of `L` is independent.
pub fn secondary_dim_lattice(op: &PeriodicLatticeOperator, span: &LatticeSpan) -> Result<usize> {
    let images: Vec<LatticeFunction> = span
        .points
        .iter()
        .map(|p| op.apply(&LatticeFunction::delta(p.clone())))
        .collect();
    let mut rows: BTreeSet<LatticePoint> = BTreeSet::new();
    for f in images.iter().chain(&span.basis) {
        rows.extend(f.support().cloned());
    }
    let rows: Vec<LatticePoint> = rows.into_iter().collect();
    let ncols = images.len() + span.basis.len();
    if ncols == 0 {
        return Ok(0);
    }
    if rows.is_empty() {
        return Ok(ncols);
    }
    let m = CMatrix::from_fn(rows.len(), ncols, |i, j| {
        if j < images.len() {
            images[j].get(&rows[i])
        } else {
            -span.basis[j - images.len()].get(&rows[i])
        }
    });
    stable_nullity(&m, RANK_THRESHOLD)
}

/// Constant-coefficient differential operator `P(∂) = Σ c_α ∂^α` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    dim: usize,
    terms: BTreeMap<Vec<usize>, i64>,
}

impl Symbol {
    pub fn new(dim: usize, terms: Vec<(Vec<usize>, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != dim {
                return Err(Error::InvalidInput(format!("multi-index {alpha:?} in dimension {dim}")));
            }
            *map.entry(alpha).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        if map.is_empty() {
            return Err(Error::InvalidInput("zero symbol".into()));
        }
        Ok(Symbol { dim, terms: map })
    }

    /// `−Δ`.
    pub fn neg_laplacian(dim: usize) -> Self {
        let terms = (0..dim)
            .map(|i| {
                let mut a = vec![0; dim];
                a[i] = 2;
                (a, -1)
            })
            .collect();
        Symbol::new(dim, terms).expect("laplacian symbol")
    }

    /// `Δ² = Σ_{i,j} ∂_i²∂_j²`.
    pub fn bilaplacian(dim: usize) -> Self {
        let mut terms = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let mut a = vec![0; dim];
                a[i] += 2;
                a[j] += 2;
                terms.push((a, 1));
            }
        }
        Symbol::new(dim, terms).expect("bilaplacian symbol")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(|a| a.iter().sum::<usize>()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &i64)> {
        self.terms.iter()
    }

    /// Formal transpose `P(−∂)`.
    pub fn transpose(&self) -> Self {
        Symbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, &c)| {
                    let sign = if a.iter().sum::<usize>() % 2 == 0 { 1 } else { -1 };
                    (a.clone(), sign * c)
                })
                .collect(),
        }
    }
}

/// `dim{u = Σ c_β ∂^β δ_x : P u ∈ L}`, summed over the points of the span. At
/// each point only `|β| ≤ (max order in S_x) − m` can contribute; the nullity is exact.
pub fn secondary_dim_continuum(symbol: &Symbol, span: &ContinuumSpan) -> Result<usize> {
    let m = symbol.order();
    let mut total = 0;
    for (_, set) in &span.entries {
        let top = set.iter().map(|a| a.iter().sum::<usize>()).max().unwrap_or(0);
        if top < m {
            continue;
        }
        let unknowns: Vec<Vec<usize>> = (0..=top - m).flat_map(|k| multi_indices(symbol.dim, k)).collect();
        // coefficient of ∂^ν in P u, for ν outside S_x
        let mut rows: BTreeMap<Vec<usize>, Vec<i64>> = BTreeMap::new();
        for (j, beta) in unknowns.iter().enumerate() {
            for (gamma, &c) in &symbol.terms {
                let nu: Vec<usize> = beta.iter().zip(gamma).map(|(a, b)| a + b).collect();
                if !set.contains(&nu) {
                    rows.entry(nu).or_insert_with(|| vec![0; unknowns.len()])[j] += c;
                }
            }
        }
        let q: Vec<Vec<_>> = rows
            .values()
            .map(|r| r.iter().map(|&v| rational_from_int(v)).collect())
            .collect();
        total += unknowns.len() - rational_rank(&q);
    }
    Ok(total)
}

/// `Σ_poles [C(p+n−1, n) − C(p+n−1−m, n)] − Σ_zeros [C(|q|+n−1, n) − C(|q|+n−1−m, n)]`.
pub fn point_divisor_degree_closed_form(n: usize, m: usize, poles: &[i64], zeros: &[i64]) -> Result<i64> {
    if poles.iter().any(|&p| p <= 0) || zeros.iter().any(|&q| q >= 0) {
        return Err(Error::InvalidInput("poles must be positive and zeros negative".into()));
    }
    let (n, m) = (n as i64, m as i64);
    let term = |p: i64| -> Result<i64> { Ok(binom0(p + n - 1, n)? as i64 - binom0(p + n - 1 - m, n)? as i64) };
    let plus: i64 = poles.iter().map(|&p| term(p)).sum::<Result<i64>>()?;
    let minus: i64 = zeros.iter().map(|&q| term(-q)).sum::<Result<i64>>()?;
    Ok(plus - minus)
}

/// Point divisor on `ℝⁿ`: a pole of order `p` at `x` carries `∂^α δ_x` with `|α| ≤ p − 1`,
/// a zero of order `q < 0` carries `|α| ≤ |q| − 1`.
pub fn point_divisor(
    poles: &[(Vec<f64>, i64)],
    zeros: &[(Vec<f64>, i64)],
) -> Result<RiggedPointDivisor<ContinuumSpan>> {
    let dim = poles.iter().chain(zeros).map(|(x, _)| x.len()).next().unwrap_or(0);
    let side = |items: &[(Vec<f64>, i64)]| -> Result<ContinuumSpan> {
        let mut span = ContinuumSpan::new(dim, Vec::new())?;
        for (x, order) in items {
            let k = order.unsigned_abs() as usize;
            if k == 0 {
                continue;
            }
            span = span.union(&ContinuumSpan::full_order(x.clone(), k - 1))?;
        }
        Ok(span)
    };
    RiggedPointDivisor::new(side(poles)?, side(zeros)?)
}

/// JSON form of a divisor: `{"plus": [...], "minus": [...]}`; lattice entries carry
/// `"point": {"g": [...], "c": 0}`, continuum entries `"point": {"x": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorFile {
    pub plus: Vec<DivisorEntry>,
    pub minus: Vec<DivisorEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: PointRecord,
    #[serde(default)]
    pub alphas: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRecord {
    Lattice { g: Vec<i64>, c: usize },
    Continuum { x: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyDivisor {
    Lattice(RiggedPointDivisor<LatticeSpan>),
    Continuum(RiggedPointDivisor<ContinuumSpan>),
}

impl DivisorFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_divisor(&self) -> Result<AnyDivisor> {
        let all: Vec<&DivisorEntry> = self.plus.iter().chain(&self.minus).collect();
        let lattice = all
            .iter()
            .filter(|e| matches!(e.point, PointRecord::Lattice { .. }))
            .count();
        if lattice > 0 && lattice < all.len() {
            return Err(Error::InvalidInput("divisor mixes lattice and continuum points".into()));
        }
        if lattice > 0 || all.is_empty() {
            let side = |entries: &[DivisorEntry]| -> Result<LatticeSpan> {
                let mut pts = Vec::new();
                for e in entries {
                    let PointRecord::Lattice { g, c } = &e.point else {
                        unreachable!()
                    };
                    if e.alphas.iter().any(|a| a.iter().any(|&x| x != 0)) {
                        return Err(Error::InvalidInput("lattice divisors carry plain deltas only".into()));
                    }
                    pts.push(LatticePoint::new(g.clone(), *c));
                }
                Ok(LatticeSpan::deltas(pts))
            };
            return Ok(AnyDivisor::Lattice(RiggedPointDivisor::new(
                side(&self.plus)?,
                side(&self.minus)?,
            )?));
        }
        let dim = match &all[0].point {
            PointRecord::Continuum { x } => x.len(),
            PointRecord::Lattice { .. } => unreachable!(),
        };
        let side = |entries: &[DivisorEntry]| -> Result<ContinuumSpan> {
            ContinuumSpan::new(
                dim,
                entries
                    .iter()
                    .map(|e| match &e.point {
                        PointRecord::Continuum { x } => (x.clone(), e.alphas.clone()),
                        PointRecord::Lattice { .. } => unreachable!(),
                    })
                    .collect(),
            )
        };
        Ok(AnyDivisor::Continuum(RiggedPointDivisor::new(
            side(&self.plus)?,
            side(&self.minus)?,
        )?))
    }

    pub fn from_lattice(mu: &RiggedPointDivisor<LatticeSpan>) -> Self {
        let side = |s: &LatticeSpan| {
            s.points
                .iter()
                .map(|p| DivisorEntry {
                    point: PointRecord::Lattice { g: p.g.clone(), c: p.c },
                    alphas: vec![vec![0; p.g.len()]],
                })
                .collect()
        };
        DivisorFile {
            plus: side(&mu.plus),
            minus: side(&mu.minus),
        }
    }

    pub fn from_continuum(mu: &RiggedPointDivisor<ContinuumSpan>) -> Self {
        let side = |s: &ContinuumSpan| {
            s.entries
                .iter()
                .map(|(x, set)| DivisorEntry {
                    point: PointRecord::Continuum { x: x.clone() },
                    alphas: set.iter().cloned().collect(),
                })
                .collect()
        };
        DivisorFile {
            plus: side(&mu.plus),
            minus: side(&mu.minus),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(g: &[i64]) -> LatticePoint {
        LatticePoint::new(g.to_vec(), 0)
    }

    #[test]
    fn binom0_values() {
        assert_eq!(binom0(1, 3).unwrap(), 0);
        assert_eq!(binom0(5, 2).unwrap(), 10);
        assert_eq!(binom0(3, 3).unwrap(), 1);
        assert_eq!(binom0(-2, 1).unwrap(), 0);
        assert_eq!(binom0(40, 20).unwrap(), 137_846_528_820);
        assert!(binom0(3, -1).is_err());
    }

    #[test]
    fn inverse_and_parts() {
        let x = LatticeSpan::deltas(vec![lp(&[0])]);
        let y = LatticeSpan::deltas(vec![lp(&[3])]);
        let mu = RiggedPointDivisor::new(x.clone(), y.clone()).unwrap();
        assert_eq!(mu.inverse().plus, y);
        assert_eq!(mu.inverse().inverse(), mu);
        assert_eq!(mu.positive_part(), RiggedPointDivisor::positive(x.clone()));
        assert_eq!(mu.negative_part(), RiggedPointDivisor::negative(y));
        assert!(RiggedPointDivisor::<LatticeSpan>::trivial().inverse().is_trivial());
        assert!(RiggedPointDivisor::negative(x).positive_part().is_trivial());
    }

    #[test]
    fn overlapping_supports_rejected() {
        let x = LatticeSpan::deltas(vec![lp(&[0])]);
        assert!(RiggedPointDivisor::new(x.clone(), x).is_err());
    }

    #[test]
    fn lattice_secondary_examples() {
        let op = models::laplacian(1);
        assert_eq!(
            secondary_dim_lattice(&op, &LatticeSpan::deltas(vec![lp(&[0])])).unwrap(),
            0
        );
        let image = op.apply(&LatticeFunction::delta(lp(&[0])));
        let d: Vec<LatticePoint> = image.support().cloned().collect();
        let span = LatticeSpan::new(d.clone(), vec![image]).unwrap();
        assert_eq!(secondary_dim_lattice(&op, &span).unwrap(), 1);
        assert_eq!(
            secondary_dim_lattice(&op, &LatticeSpan::new(d, vec![]).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn lattice_degree_of_single_delta() {
        let op = models::laplacian(2);
        let mu = RiggedPointDivisor::positive(LatticeSpan::deltas(vec![lp(&[0, 0])]));
        assert_eq!(degree(&op, &mu).unwrap().degree, 1);
        assert_eq!(degree(&op, &RiggedPointDivisor::trivial()).unwrap().degree, 0);
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = LatticeFunction::delta(lp(&[0]));
        assert!(LatticeSpan::new(vec![lp(&[0])], vec![f.clone(), f.scale(Complex64::new(2.0, 0.0))]).is_err());
    }

    #[test]
    fn lattice_degree_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let op = models::random_operator(&mut rng, 2, 2, 8);
            let mut pts: Vec<LatticePoint> = (0..6)
                .map(|_| {
                    LatticePoint::new(
                        vec![rng.random_range(-2..=2), rng.random_range(-2..=2)],
                        rng.random_range(0..2),
                    )
                })
                .collect();
            pts.sort();
            pts.dedup();
            let split = rng.random_range(0..=pts.len());
            let minus = pts.split_off(split);
            let mu = RiggedPointDivisor::new(LatticeSpan::deltas(pts), LatticeSpan::deltas(minus)).unwrap();
            let a = degree(&op, &mu).unwrap();
            let b = degree(&op.transpose(), &mu.inverse()).unwrap();
            assert_eq!(a.degree, -b.degree);
            assert!(a.ell_plus >= a.ell_tilde_plus && a.ell_minus >= a.ell_tilde_minus);
        }
    }

    #[test]
    fn continuum_secondary_examples() {
        let p = Symbol::neg_laplacian(3);
        let deltas = ContinuumSpan::new(
            3,
            vec![
                (vec![0.0; 3], vec![vec![0; 3]]),
                (vec![1.0, 0.0, 0.0], vec![vec![0; 3]]),
            ],
        )
        .unwrap();
        assert_eq!(secondary_dim_continuum(&p, &deltas).unwrap(), 0);
        assert_eq!(
            secondary_dim_continuum(&p, &ContinuumSpan::full_order(vec![0.0; 3], 2)).unwrap(),
            1
        );
        assert_eq!(secondary_dim_continuum(&p, &ContinuumSpan::empty()).unwrap(), 0);
    }

    #[test]
    fn main_example_degree() {
        // k plain deltas and all first derivatives at l points: deg = k − 3l
        for (k, l) in [(1usize, 0usize), (2, 1), (3, 2)] {
            let plus = ContinuumSpan::new(
                3,
                (0..k)
                    .map(|i| (vec![i as f64, 0.0, 0.0], vec![vec![0, 0, 0]]))
                    .collect(),
            )
            .unwrap();
            let firsts = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
            let minus = ContinuumSpan::new(
                3,
                (0..l)
                    .map(|j| (vec![0.0, 5.0 + j as f64, 0.0], firsts.clone()))
                    .collect(),
            )
            .unwrap();
            let mu = RiggedPointDivisor::new(plus, minus).unwrap();
            let p = Symbol::neg_laplacian(3);
            assert_eq!(degree(&p, &mu).unwrap().degree, k as i64 - 3 * l as i64);
            let sum = degree(&p, &mu.positive_part()).unwrap().degree + degree(&p, &mu.negative_part()).unwrap().degree;
            assert_eq!(sum, k as i64 - 3 * l as i64);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(point_divisor_degree_closed_form(3, 2, &[1], &[]).unwrap(), 1);
        assert_eq!(point_divisor_degree_closed_form(3, 2, &[], &[-2]).unwrap(), -4);
        assert_eq!(point_divisor_degree_closed_form(3, 2, &[], &[]).unwrap(), 0);
        let zero = point_divisor(&[], &[(vec![0.0; 3], -2)]).unwrap();
        assert_eq!(degree(&Symbol::neg_laplacian(3), &zero).unwrap().degree, -4);
    }

    #[test]
    fn closed_form_agrees_with_symbol_algebra() {
        for n in 2..=4usize {
            for (p, m) in [(Symbol::neg_laplacian(n), 2usize), (Symbol::bilaplacian(n), 4)] {
                for pole in 1..=4i64 {
                    for zero in 1..=4i64 {
                        let mu = point_divisor(&[(vec![0.0; n], pole)], &[(vec![1.0; n], -zero)]).unwrap();
                        let exact = degree(&p, &mu).unwrap().degree;
                        let closed = point_divisor_degree_closed_form(n, m, &[pole], &[-zero]).unwrap();
                        assert_eq!(exact, closed, "n={n} m={m} p={pole} q=-{zero}");
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_flips_odd_terms() {
        let p = Symbol::new(1, vec![(vec![1], 3), (vec![2], -1)]).unwrap();
        let t = p.transpose();
        assert_eq!(
            t.terms().map(|(a, c)| (a.clone(), *c)).collect::<Vec<_>>(),
            vec![(vec![1], -3), (vec![2], -1)]
        );
        assert_eq!(t.transpose(), p);
    }

    #[test]
    fn divisor_json_round_trip() {
        let s = r#"{"plus":[{"point":{"g":[0,0],"c":1},"alphas":[[0,0]]}],"minus":[{"point":{"g":[2,0],"c":0}}]}"#;
        let AnyDivisor::Lattice(mu) = DivisorFile::from_json(s).unwrap().to_divisor().unwrap() else {
            panic!()
        };
        assert_eq!(mu.plus.dim(), 1);
        assert_eq!(mu.minus.points()[0], lp(&[2, 0]));
        let again = DivisorFile::from_lattice(&mu).to_divisor().unwrap();
        assert_eq!(again, AnyDivisor::Lattice(mu));
        let c = r#"{"plus":[{"point":{"x":[0.0,0.5]},"alphas":[[0,0],[1,0]]}],"minus":[]}"#;
        let AnyDivisor::Continuum(mu) = DivisorFile::from_json(c).unwrap().to_divisor().unwrap() else {
            panic!()
        };
        assert_eq!(mu.plus.dim(), 2);
    }
}
