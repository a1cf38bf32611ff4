//! Floquet transform over the deck group ℤᵈ and the fiber matrices `A(k)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use crate::linalg::{czero, CMatrix, CVector};
use crate::Complex64;

/// Tolerance under which two quasimomenta are identified modulo `(2πℤ)ᵈ`.
pub const QUASIMOMENTUM_TOL: f64 = 1e-9;

/// Wrap a real number into `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can return 2π for tiny negative inputs
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Complex quasimomentum `k ∈ ℂᵈ`, stored with its real part in `[−π, π)ᵈ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quasimomentum {
    k: Vec<Complex64>,
}

impl Quasimomentum {
    pub fn new(k: Vec<Complex64>) -> Self {
        let k = k.into_iter().map(|z| Complex64::new(wrap_angle(z.re), z.im)).collect();
        Quasimomentum { k }
    }

    pub fn real(k: &[f64]) -> Self {
        Self::new(k.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `k = iξ`, the quasimomentum of a `G`-multiplicative function with exponent `−ξ`.
    pub fn imaginary(xi: &[f64]) -> Self {
        Self::new(xi.iter().map(|&x| Complex64::new(0.0, x)).collect())
    }

    pub fn components(&self) -> &[Complex64] {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.k.iter().map(|z| z.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.k.iter().all(|z| z.im == 0.0)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.k.iter().map(|z| -z).collect())
    }

    /// Character value `e^{ik·g}`.
    pub fn character(&self, g: &[i64]) -> Complex64 {
        let phase: Complex64 = self.k.iter().zip(g).map(|(z, &x)| z * x as f64).sum();
        (Complex64::i() * phase).exp()
    }

    /// Equality modulo `(2πℤ)ᵈ` to tolerance `tol` per component.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.k.len() == other.k.len()
            && self
                .k
                .iter()
                .zip(&other.k)
                .all(|(a, b)| wrap_angle(a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol)
    }

    /// Largest componentwise distance modulo `(2πℤ)ᵈ`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.k
            .iter()
            .zip(&other.k)
            .map(|(a, b)| wrap_angle(a.re - b.re).abs().max((a.im - b.im).abs()))
            .fold(0.0, f64::max)
    }
}

/// `A(k)` as an `n_c × n_c` matrix.
#[derive(Clone, Debug)]
pub struct FiberMatrix {
    pub k: Quasimomentum,
    pub entries: CMatrix,
}

/// `A(k)_{ij} = Σ_{(i,j,g,a)} a·e^{ik·g} − shift·δ_ij`.
pub fn fiber_matrix(op: &PeriodicLatticeOperator, k: &Quasimomentum) -> FiberMatrix {
    FiberMatrix {
        k: k.clone(),
        entries: fiber_entries(op, k.components()),
    }
}

/// Fiber matrix at an arbitrary (not necessarily canonical) complex `k`.
pub fn fiber_entries(op: &PeriodicLatticeOperator, k: &[Complex64]) -> CMatrix {
    let n = op.cells();
    let mut m = CMatrix::zeros(n, n);
    for t in op.terms() {
        let phase: Complex64 = k.iter().zip(&t.offset).map(|(z, &g)| z * g as f64).sum();
        m[(t.from_cell, t.to_cell)] += t.value * (Complex64::i() * phase).exp();
    }
    for i in 0..n {
        m[(i, i)] -= Complex64::new(op.shift(), 0.0);
    }
    m
}

/// Fiber matrix at a real quasimomentum given as plain coordinates.
pub fn fiber_at(op: &PeriodicLatticeOperator, k: &[f64]) -> CMatrix {
    let kc: Vec<Complex64> = k.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fiber_entries(op, &kc)
}

/// Analytic partial derivative `∂A(k)/∂k_axis = Σ a·(i g_axis)·e^{ik·g}`.
pub fn fiber_derivative(op: &PeriodicLatticeOperator, k: &[Complex64], axis: usize) -> CMatrix {
    let n = op.cells();
    let mut m = CMatrix::zeros(n, n);
    for t in op.terms() {
        let phase: Complex64 = k.iter().zip(&t.offset).map(|(z, &g)| z * g as f64).sum();
        m[(t.from_cell, t.to_cell)] +=
            t.value * Complex64::new(0.0, t.offset[axis] as f64) * (Complex64::i() * phase).exp();
    }
    m
}

/// `(Ff)(k, c) = Σ_g f(g, c)·e^{−ik·g}`.
pub fn floquet_transform(f: &LatticeFunction, cells: usize, k: &Quasimomentum) -> CVector {
    let mut out = CVector::zeros(cells);
    for (p, v) in f.iter() {
        let minus: Vec<i64> = p.g.iter().map(|x| -x).collect();
        out[p.c] += v * k.character(&minus);
    }
    out
}

/// Uniform DFT grid with `M` (odd) points per axis: `k = 2π·m/M`, `m ∈ [−(M−1)/2, (M−1)/2]`.
/// The inverse transform is exact for functions supported in the centred window
/// `g ∈ [−(M−1)/2, (M−1)/2]ᵈ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloquetGrid {
    pub dim: usize,
    pub m: usize,
}

impl FloquetGrid {
    pub fn new(dim: usize, m: usize) -> Result<Self> {
        if m % 2 == 0 || m == 0 {
            return Err(Error::InvalidInput(format!("grid size {m} must be odd")));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("grid rank must be at least 1".into()));
        }
        Ok(FloquetGrid { dim, m })
    }

    pub fn half_width(&self) -> i64 {
        (self.m as i64 - 1) / 2
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer labels of grid point number `idx` (row-major, first axis slowest).
    pub fn labels(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = (idx % self.m) as i64 - self.half_width();
            idx /= self.m;
        }
        out
    }

    pub fn point(&self, idx: usize) -> Quasimomentum {
        let labels = self.labels(idx);
        Quasimomentum::real(
            &labels
                .iter()
                .map(|&l| 2.0 * PI * l as f64 / self.m as f64)
                .collect::<Vec<_>>(),
        )
    }

    pub fn in_window(&self, g: &[i64]) -> bool {
        g.iter().all(|x| x.abs() <= self.half_width())
    }

    /// Every deck element of the exactness window.
    pub fn window(&self) -> Vec<Vec<i64>> {
        (0..self.len()).map(|i| self.labels(i)).collect()
    }
}

/// Floquet transform sampled on a [`FloquetGrid`].
#[derive(Clone, Debug)]
pub struct FloquetSamples {
    pub grid: FloquetGrid,
    pub cells: usize,
    pub values: Vec<CVector>,
    /// True when the sampled function was not supported in the exactness window,
    /// in which case the reconstruction is the periodized (aliased) function.
    pub aliased: bool,
}

pub fn sample_transform(f: &LatticeFunction, cells: usize, grid: &FloquetGrid) -> FloquetSamples {
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| floquet_transform(f, cells, &grid.point(i)))
        .collect();
    FloquetSamples {
        grid: grid.clone(),
        cells,
        values,
        aliased: f.support().any(|p| !grid.in_window(&p.g)),
    }
}

/// `f(g,c) ≈ M^{−d} Σ_grid (Ff)(k,c)·e^{ik·g}` at a single point of the window.
pub fn inverse_floquet_at(samples: &FloquetSamples, p: &LatticePoint) -> Result<Complex64> {
    if !samples.grid.in_window(&p.g) {
        return Err(Error::WindowOverflow(p.g.clone()));
    }
    let grid = &samples.grid;
    let mut acc = czero();
    for (i, v) in samples.values.iter().enumerate() {
        acc += v[p.c] * grid.point(i).character(&p.g);
    }
    Ok(acc / grid.len() as f64)
}

/// Reconstruct the function on the whole exactness window. Values below
/// `1e−14` of the largest one are DFT roundoff and are dropped.
pub fn inverse_floquet(samples: &FloquetSamples) -> LatticeFunction {
    let grid = &samples.grid;
    let points: Vec<LatticePoint> = grid
        .window()
        .into_iter()
        .flat_map(|g| (0..samples.cells).map(move |c| LatticePoint::new(g.clone(), c)))
        .collect();
    let vals: Vec<Complex64> = points
        .par_iter()
        .map(|p| inverse_floquet_at(samples, p).expect("window point"))
        .collect();
    let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    LatticeFunction::from_entries(points.into_iter().zip(vals).filter(|(_, v)| v.norm() > 1e-14 * max))
}

/// `‖F(Af)(k) − A(k)·Ff(k)‖_∞`.
pub fn verify_fiber_action(op: &PeriodicLatticeOperator, f: &LatticeFunction, k: &Quasimomentum) -> f64 {
    let lhs = floquet_transform(&op.apply(f), op.cells(), k);
    let rhs = fiber_matrix(op, k).entries * floquet_transform(f, op.cells(), k);
    (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(Σ|f|², M^{−d} Σ_grid ‖Ff(k,·)‖²)`; equal when `f` is supported in the window.
pub fn verify_plancherel(f: &LatticeFunction, cells: usize, grid: &FloquetGrid) -> (f64, f64) {
    let samples = sample_transform(f, cells, grid);
    let rhs: f64 = samples.values.iter().map(|v| v.norm_squared()).sum::<f64>() / grid.len() as f64;
    (f.norm_sqr(), rhs)
}
