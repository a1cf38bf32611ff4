//! Discrete ℤᵈ-periodic coverings `ℤᵈ × Cell` and finite-range periodic operators on them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex64;

/// A vertex `(g, c)` of the covering: deck element `g ∈ ℤᵈ` and cell index `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub g: Vec<i64>,
    pub c: usize,
}

impl LatticePoint {
    pub fn new(g: Vec<i64>, c: usize) -> Self {
        LatticePoint { g, c }
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint { g: vec![0; dim], c: 0 }
    }

    pub fn shifted(&self, h: &[i64]) -> Self {
        LatticePoint {
            g: self.g.iter().zip(h).map(|(a, b)| a + b).collect(),
            c: self.c,
        }
    }
}

/// One hopping `(from_cell, to_cell, offset, value)`: contributes
/// `value · f(g + offset, to_cell)` to `(A f)(g, from_cell)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingTerm {
    pub from_cell: usize,
    pub to_cell: usize,
    pub offset: Vec<i64>,
    pub value: Complex64,
}

impl HoppingTerm {
    pub fn new(from_cell: usize, to_cell: usize, offset: Vec<i64>, value: Complex64) -> Self {
        HoppingTerm {
            from_cell,
            to_cell,
            offset,
            value,
        }
    }

    pub fn real(from_cell: usize, to_cell: usize, offset: Vec<i64>, value: f64) -> Self {
        Self::new(from_cell, to_cell, offset, Complex64::new(value, 0.0))
    }

    fn key(&self) -> (usize, usize, &[i64]) {
        (self.from_cell, self.to_cell, &self.offset)
    }
}

/// Finitely supported function on the covering. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeFunction {
    entries: BTreeMap<LatticePoint, Complex64>,
}

impl LatticeFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(p: LatticePoint) -> Self {
        let mut f = Self::new();
        f.set(p, Complex64::new(1.0, 0.0));
        f
    }

    pub fn from_entries<I: IntoIterator<Item = (LatticePoint, Complex64)>>(it: I) -> Self {
        let mut f = Self::new();
        for (p, v) in it {
            f.add(p, v);
        }
        f
    }

    pub fn get(&self, p: &LatticePoint) -> Complex64 {
        self.entries.get(p).copied().unwrap_or_default()
    }

    pub fn set(&mut self, p: LatticePoint, v: Complex64) {
        if v == Complex64::new(0.0, 0.0) {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, v);
        }
    }

    pub fn add(&mut self, p: LatticePoint, v: Complex64) {
        let next = self.get(&p) + v;
        self.set(p, next);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_entries(self.iter().map(|(p, v)| (p.clone(), v * a)))
    }

    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let mut out = self.scale(a);
        for (p, v) in other.iter() {
            out.add(p.clone(), v * b);
        }
        out
    }

    /// Deck shift: `(τ_h f)(g, c) = f(g − h, c)`.
    pub fn translate(&self, h: &[i64]) -> Self {
        Self::from_entries(self.iter().map(|(p, v)| (p.shifted(h), *v)))
    }

    /// Squared ℓ² norm.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sup-distance to another function.
    pub fn distance(&self, other: &Self) -> f64 {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
            .max_abs()
    }
}

/// The `G`-invariant bilinear pairing `⟨u, v⟩ = Σ u(x) v(x)` (no conjugation).
pub fn pairing(u: &LatticeFunction, v: &LatticeFunction) -> Complex64 {
    u.iter().map(|(p, a)| a * v.get(p)).sum()
}

/// Polynomial growth weight `⟨g⟩^N = (1 + |g|²)^{N/2}`.
pub fn weight(g: &[i64], n: f64) -> f64 {
    let r2: f64 = g.iter().map(|&x| (x as f64) * (x as f64)).sum();
    (1.0 + r2).powf(n / 2.0)
}

/// A finite-range periodic operator `A − λ` on `ℤᵈ × Cell`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicLatticeOperator {
    dim: usize,
    cells: usize,
    terms: Vec<HoppingTerm>,
    shift: f64,
    self_adjoint: bool,
}

impl PeriodicLatticeOperator {
    pub fn new(dim: usize, cells: usize, terms: Vec<HoppingTerm>, shift: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("deck rank must be at least 1".into()));
        }
        if cells == 0 {
            return Err(Error::InvalidInput("cell must have at least one vertex".into()));
        }
        if !shift.is_finite() {
            return Err(Error::InvalidInput("shift must be finite".into()));
        }
        for t in &terms {
            if t.from_cell >= cells || t.to_cell >= cells {
                return Err(Error::InvalidInput(format!(
                    "term cell indices ({}, {}) out of range for cell size {}",
                    t.from_cell, t.to_cell, cells
                )));
            }
            if t.offset.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "term offset {:?} has length {}, expected {}",
                    t.offset,
                    t.offset.len(),
                    dim
                )));
            }
            if !(t.value.re.is_finite() && t.value.im.is_finite()) {
                return Err(Error::InvalidInput("non-finite hopping value".into()));
            }
        }
        let terms = canonicalize(terms);
        let self_adjoint = terms.iter().all(|t| {
            let neg: Vec<i64> = t.offset.iter().map(|x| -x).collect();
            terms
                .binary_search_by(|s| s.key().cmp(&(t.to_cell, t.from_cell, neg.as_slice())))
                .map(|idx| terms[idx].value == t.value.conj())
                .unwrap_or(false)
        });
        Ok(PeriodicLatticeOperator {
            dim,
            cells,
            terms,
            shift,
            self_adjoint,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn terms(&self) -> &[HoppingTerm] {
        &self.terms
    }

    /// The λ in `A − λI`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    /// Largest ℓ¹ length of a hopping offset.
    pub fn hop_radius(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.offset.iter().map(|x| x.abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    /// True when every hopping coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.value.im == 0.0)
    }

    /// The same expression working at level `level`: `A − (λ + level)`.
    pub fn shifted(&self, level: f64) -> Self {
        let mut op = self.clone();
        op.shift += level;
        op
    }

    /// The same expression with the level set to `shift`.
    pub fn with_shift(&self, shift: f64) -> Self {
        let mut op = self.clone();
        op.shift = shift;
        op
    }

    /// `(A f)(g,i) = Σ_{(i,j,h,a)} a·f(g+h, j) − shift·f(g,i)`.
    pub fn apply(&self, f: &LatticeFunction) -> LatticeFunction {
        let mut by_target: Vec<Vec<&HoppingTerm>> = vec![Vec::new(); self.cells];
        for t in &self.terms {
            by_target[t.to_cell].push(t);
        }
        let mut acc: BTreeMap<LatticePoint, Complex64> = BTreeMap::new();
        for (p, v) in f.iter() {
            for t in &by_target[p.c] {
                let g: Vec<i64> = p.g.iter().zip(&t.offset).map(|(a, h)| a - h).collect();
                *acc.entry(LatticePoint::new(g, t.from_cell)).or_default() += t.value * v;
            }
            if self.shift != 0.0 {
                *acc.entry(p.clone()).or_default() -= v * self.shift;
            }
        }
        LatticeFunction::from_entries(acc)
    }

    /// Transpose with respect to the bilinear pairing: `(i,j,g,a) ↦ (j,i,−g,a)`.
    pub fn transpose(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| HoppingTerm {
                from_cell: t.to_cell,
                to_cell: t.from_cell,
                offset: t.offset.iter().map(|x| -x).collect(),
                value: t.value,
            })
            .collect();
        PeriodicLatticeOperator::new(self.dim, self.cells, terms, self.shift)
            .expect("transpose of a valid operator is valid")
    }

    pub fn to_file(&self) -> OperatorFile {
        OperatorFile {
            d: self.dim,
            cell: self.cells,
            shift: self.shift,
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    i: t.from_cell,
                    j: t.to_cell,
                    g: t.offset.clone(),
                    re: t.value.re,
                    im: t.value.im,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &OperatorFile) -> Result<Self> {
        let terms = file
            .terms
            .iter()
            .map(|t| HoppingTerm::new(t.i, t.j, t.g.clone(), Complex64::new(t.re, t.im)))
            .collect();
        Self::new(file.d, file.cell, terms, file.shift)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: OperatorFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }
}

fn canonicalize(mut terms: Vec<HoppingTerm>) -> Vec<HoppingTerm> {
    terms.sort_by(|a, b| a.key().cmp(&b.key()));
    let mut out: Vec<HoppingTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.key() == t.key() => last.value += t.value,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.value != Complex64::new(0.0, 0.0));
    out
}

/// On-disk operator description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub d: usize,
    pub cell: usize,
    pub shift: f64,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub i: usize,
    pub j: usize,
    pub g: Vec<i64>,
    pub re: f64,
    pub im: f64,
}
