//! Location of the real Fermi surface `{k : 0 ∈ σ(A(k))}` and the spectral-edge
//! data attached to each of its points.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::bands::{BandGrid, DEFAULT_BAND_GRID};
use super::optimize::nelder_mead;
use super::riesz::{ContourSpec, ReducedFamily};
use super::taylor::{sample_directions, taylor_order, TaylorData, TaylorOptions};
use crate::error::{Error, Result};
use crate::floquet::{fiber_at, wrap_angle, Quasimomentum};
use crate::lattice::PeriodicLatticeOperator;
use crate::linalg::{eigen_general, singular_values, smallest_singular_value};

#[derive(Clone, Debug)]
pub struct FermiOptions {
    pub grid: usize,
    /// A refined point is a zero when `σ_min(A(k)) ≤ root_tol`.
    pub root_tol: f64,
    /// More distinct zeros than this signals a Fermi curve.
    pub max_points: usize,
    /// Radius of the sphere used to test that each zero is isolated.
    pub isolation_radius: f64,
    pub taylor: TaylorOptions,
}

impl Default for FermiOptions {
    fn default() -> Self {
        FermiOptions {
            grid: DEFAULT_BAND_GRID,
            root_tol: 1e-9,
            max_points: 64,
            isolation_radius: 1e-2,
            taylor: TaylorOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FermiPoint {
    pub k: Quasimomentum,
    pub sigma_min: f64,
    /// Algebraic multiplicity of the eigenvalue 0 of `A(k)`.
    pub multiplicity: usize,
    pub ell0: Option<usize>,
    pub taylor: Option<TaylorData>,
    pub hessian: Option<DMatrix<f64>>,
    pub det_leading_nonzero: bool,
    pub simple: bool,
}

impl FermiPoint {
    pub fn coordinates(&self) -> Vec<f64> {
        self.k.real_parts()
    }

    /// Dirac cone: double zero, linear leading layer with non-vanishing determinant.
    pub fn is_dirac(&self) -> bool {
        self.multiplicity == 2 && self.ell0 == Some(1) && self.det_leading_nonzero
    }

    /// Non-degenerate edge: simple zero with a definite Hessian.
    pub fn is_nondegenerate_edge(&self) -> bool {
        self.multiplicity == 1 && self.ell0 == Some(2) && self.hessian.as_ref().is_some_and(is_definite)
    }
}

/// Positive or negative definite symmetric matrix.
pub fn is_definite(h: &DMatrix<f64>) -> bool {
    let ev = h.clone().symmetric_eigenvalues();
    let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    scale > 0.0 && (ev.iter().all(|&x| x > 1e-8 * scale) || ev.iter().all(|&x| x < -1e-8 * scale))
}

fn sigma(op: &PeriodicLatticeOperator, k: &[f64]) -> f64 {
    smallest_singular_value(&fiber_at(op, k))
}

/// Newton steps on `σ_min` with a central-difference Hessian; kept only while they decrease `σ_min`.
fn polish(op: &PeriodicLatticeOperator, mut x: Vec<f64>, mut fx: f64) -> (Vec<f64>, f64) {
    let d = x.len();
    let h = 1e-4;
    for _ in 0..5 {
        let at = |dx: &[(usize, f64)]| {
            let mut y = x.clone();
            for &(i, s) in dx {
                y[i] += s;
            }
            sigma(op, &y)
        };
        let grad = DMatrix::from_fn(d, 1, |i, _| (at(&[(i, h)]) - at(&[(i, -h)])) / (2.0 * h));
        let hess = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                (at(&[(i, h)]) - 2.0 * fx + at(&[(i, -h)])) / (h * h)
            } else {
                (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)]) + at(&[(i, -h), (j, -h)]))
                    / (4.0 * h * h)
            }
        });
        let Some(chol) = hess.cholesky() else { break };
        let step = chol.solve(&grad);
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v - step[(i, 0)]).collect();
        let fy = sigma(op, &y);
        if fy < fx {
            x = y;
            fx = fy;
        } else {
            break;
        }
    }
    (x, fx)
}

fn refine(op: &PeriodicLatticeOperator, start: &[f64], step: f64) -> (Vec<f64>, f64) {
    let (x, fx) = nelder_mead(|k| sigma(op, k), start, step, 1e-17, 1e-14, 4000);
    let (x, fx) = polish(op, x, fx);
    (x.into_iter().map(wrap_angle).collect(), fx)
}

fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| wrap_angle(x - y).abs())
        .fold(0.0, f64::max)
}

/// `(min, max)` of `σ_min(A(k₀ + ρu))` over unit vectors `u`; the minimum is refined locally.
pub fn sphere_extremes(op: &PeriodicLatticeOperator, k0: &[f64], rho: f64) -> (f64, f64) {
    let d = k0.len();
    let on_sphere = |v: &[f64]| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let k: Vec<f64> = k0.iter().zip(v).map(|(a, b)| a + rho * b / n).collect();
        sigma(op, &k)
    };
    let count = if d == 1 { 0 } else { 60 * d * d };
    let dirs = sample_directions(d, count, 0x0150_1a7e);
    let mut signed = dirs.clone();
    signed.extend(dirs.iter().map(|u| u.iter().map(|x| -x).collect::<Vec<_>>()));
    let vals: Vec<f64> = signed.iter().map(|u| on_sphere(u)).collect();
    let max = vals.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut min = vals[order[0]];
    if d > 1 {
        for &i in order.iter().take(4) {
            let (_, v) = nelder_mead(on_sphere, &signed[i], 0.05, 1e-18, 1e-13, 3000);
            min = min.min(v);
        }
    }
    (min, max)
}

/// `A − λ`: the operator whose level-0 data describe level `λ` of `op`.
pub fn shift_spectrum(op: &PeriodicLatticeOperator, level: f64) -> PeriodicLatticeOperator {
    op.shifted(level)
}

/// Fermi points of `op` at `level`, sorted lexicographically by quasimomentum.
pub fn fermi_points(op: &PeriodicLatticeOperator, level: f64, opts: &FermiOptions) -> Result<Vec<FermiPoint>> {
    let op = shift_spectrum(op, level);
    let grid = BandGrid::new(op.dim(), opts.grid)?;
    let period = grid.m - 1;
    let interior: Vec<usize> = (0..grid.len())
        .filter(|&i| grid.index(i).iter().all(|&x| x < period))
        .collect();
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| sigma(&op, &grid.point(i)))
        .collect();
    let minima: Vec<usize> = interior
        .iter()
        .copied()
        .filter(|&i| grid.neighbours(i).iter().all(|&j| values[i] <= values[j]))
        .collect();
    let step = grid.spacing() / 4.0;
    let mut refined: Vec<(Vec<f64>, f64)> = minima
        .par_iter()
        .map(|&i| refine(&op, &grid.point(i), step))
        .filter(|(_, v)| *v <= opts.root_tol)
        .collect();
    refined.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.partial_cmp(&b.0).unwrap()));
    let mut reps: Vec<(Vec<f64>, f64)> = Vec::new();
    for (k, v) in refined {
        if reps.iter().all(|(r, _)| torus_distance(r, &k) >= grid.spacing() / 2.0) {
            reps.push((k, v));
        }
    }
    if reps.len() > opts.max_points {
        return Err(Error::FermiSurfaceNotFinite(format!(
            "{} distinct zeros exceed the limit {}",
            reps.len(),
            opts.max_points
        )));
    }
    if op.dim() > 1 {
        for (k, _) in &reps {
            let (min, max) = sphere_extremes(&op, k, opts.isolation_radius);
            if min <= 10.0 * opts.root_tol && min <= 1e-6 * max {
                return Err(Error::FermiSurfaceNotFinite(format!(
                    "zero at {k:?} is not isolated (σ_min on the sphere of radius {} reaches {min:e})",
                    opts.isolation_radius
                )));
            }
        }
    }
    reps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    reps.par_iter().map(|(k, v)| annotate(&op, k, *v, opts)).collect()
}

/// Multiplicity and Taylor data of a zero `k` of `A(k)`.
pub fn annotate(op: &PeriodicLatticeOperator, k: &[f64], sigma_min: f64, opts: &FermiOptions) -> Result<FermiPoint> {
    let a = fiber_at(op, k);
    let eig = eigen_general(&a).values;
    let mut multiplicity = eig.iter().filter(|z| z.norm() <= 10.0 * opts.root_tol).count();
    if multiplicity == 0 {
        // a defective zero splits to O(√σ)
        multiplicity = eig.iter().filter(|z| z.norm() <= 1e-4).count().max(1);
    }
    let scale = singular_values(&a).first().copied().unwrap_or(0.0).max(1.0);
    let taylor = ContourSpec::enclosing_smallest(&eig, multiplicity)
        .and_then(|c| ReducedFamily::with_contour(op, k, c))
        .and_then(|fam| taylor_order(|kappa| fam.eval_offset(kappa), op.dim(), scale, &opts.taylor))
        .ok();
    let hessian = taylor.as_ref().and_then(|t| t.hessian());
    Ok(FermiPoint {
        k: Quasimomentum::real(k),
        sigma_min,
        multiplicity,
        ell0: taylor.as_ref().map(|t| t.ell0),
        det_leading_nonzero: taylor.as_ref().is_some_and(|t| t.det_leading_nonzero),
        hessian,
        taylor,
        simple: multiplicity == 1,
    })
}
