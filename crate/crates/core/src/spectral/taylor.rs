//! Homogeneous Taylor layers of a matrix family `λ(k_r + κ)` fitted from samples.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMatrix};
use crate::Complex64;

#[derive(Clone, Debug)]
pub struct TaylorOptions {
    pub max_order: usize,
    pub radii: Vec<f64>,
    pub directions: usize,
    pub rel_tol: f64,
    pub det_tol: f64,
    pub seed: u64,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            max_order: 4,
            radii: vec![1e-2, 5e-3, 2.5e-3],
            directions: 50,
            rel_tol: 1e-6,
            det_tol: 1e-8,
            seed: 0x7a71_0c0d,
        }
    }
}

/// Matrix-valued homogeneous polynomial `Σ_{|α|=degree} C_α κ^α`.
#[derive(Clone, Debug)]
pub struct HomogeneousPolynomial {
    pub dim: usize,
    pub degree: usize,
    pub monomials: Vec<Vec<usize>>,
    pub coefficients: Vec<CMatrix>,
}

impl HomogeneousPolynomial {
    pub fn eval(&self, kappa: &[f64]) -> CMatrix {
        let (r, c) = self.coefficients.first().map(|m| m.shape()).unwrap_or((0, 0));
        let mut out = CMatrix::zeros(r, c);
        for (alpha, coef) in self.monomials.iter().zip(&self.coefficients) {
            out += coef * Complex64::new(monomial(alpha, kappa), 0.0);
        }
        out
    }

    pub fn coefficient(&self, alpha: &[usize]) -> Option<&CMatrix> {
        self.monomials
            .iter()
            .position(|a| a == alpha)
            .map(|i| &self.coefficients[i])
    }
}

/// All multi-indices of length `dim` and total degree `degree`, lexicographically descending.
pub fn multi_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in multi_indices(dim - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial(alpha: &[usize], x: &[f64]) -> f64 {
    alpha.iter().zip(x).map(|(&a, &v)| v.powi(a as i32)).product()
}

#[derive(Clone, Debug)]
pub struct TaylorData {
    pub ell0: usize,
    pub leading: HomogeneousPolynomial,
    pub det_leading_nonzero: bool,
    /// `layer_norms[r][j]`: largest Frobenius norm of layer `j` over the sampled
    /// directions at radius `r`, relative to the scale.
    pub layer_norms: Vec<Vec<f64>>,
    /// False when some layer was non-negligible at one radius but not reproduced at the others.
    pub consistent: bool,
    /// Relative least-squares residual of the leading-layer fit.
    pub fit_residual: f64,
}

impl TaylorData {
    /// Hessian of a scalar branch with quadratic leading term: `2C_{2e_i}` on the
    /// diagonal and `C_{e_i+e_j}` off it.
    pub fn hessian(&self) -> Option<DMatrix<f64>> {
        let l = &self.leading;
        if l.degree != 2 || l.coefficients.first().map(|c| c.shape()) != Some((1, 1)) {
            return None;
        }
        let d = l.dim;
        Some(DMatrix::from_fn(d, d, |i, j| {
            let mut alpha = vec![0; d];
            alpha[i] += 1;
            alpha[j] += 1;
            let c = l.coefficient(&alpha).map(|m| m[(0, 0)].re).unwrap_or(0.0);
            if i == j {
                2.0 * c
            } else {
                c
            }
        }))
    }

    /// Singular values of the leading layer along `u`.
    pub fn leading_singular_values(&self, u: &[f64]) -> Vec<f64> {
        singular_values(&self.leading.eval(u))
    }
}

/// Uniform random point on the unit sphere.
pub fn unit_vector<R: rand::Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Seeded unit directions: the coordinate axes followed by `count` random ones.
pub fn sample_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..count).map(|_| unit_vector(&mut rng, dim)));
    out
}

const STENCIL: [f64; 9] = [0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0];

/// Coefficients `c_0..=c_degree` of `t ↦ f(t·u)` fitted on `|t| ≤ rho`.
fn line_coefficients<F>(f: &F, u: &[f64], rho: f64, degree: usize) -> Result<Vec<CMatrix>>
where
    F: Fn(&[f64]) -> Result<CMatrix>,
{
    let samples: Vec<CMatrix> = STENCIL
        .iter()
        .map(|&s| f(&u.iter().map(|x| x * s * rho).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let (r, c) = samples[0].shape();
    let vander = DMatrix::from_fn(STENCIL.len(), degree + 1, |i, j| STENCIL[i].powi(j as i32));
    let svd = vander.svd(true, true);
    let mut coefs = vec![CMatrix::zeros(r, c); degree + 1];
    for a in 0..r {
        for b in 0..c {
            for part in 0..2 {
                let rhs = DMatrix::from_fn(STENCIL.len(), 1, |i, _| {
                    if part == 0 {
                        samples[i][(a, b)].re
                    } else {
                        samples[i][(a, b)].im
                    }
                });
                let sol = svd.solve(&rhs, 1e-14).map_err(|e| Error::SingularSystem(e.into()))?;
                for j in 0..=degree {
                    let v = sol[(j, 0)] / rho.powi(j as i32);
                    if part == 0 {
                        coefs[j][(a, b)].re = v;
                    } else {
                        coefs[j][(a, b)].im = v;
                    }
                }
            }
        }
    }
    Ok(coefs)
}

/// Least-squares fit of a homogeneous polynomial of `degree` to values along unit directions.
fn fit_homogeneous(dirs: &[Vec<f64>], values: &[CMatrix], degree: usize) -> Result<(HomogeneousPolynomial, f64)> {
    let dim = dirs[0].len();
    let monomials = multi_indices(dim, degree);
    let (r, c) = values[0].shape();
    let design = DMatrix::from_fn(dirs.len(), monomials.len(), |i, j| monomial(&monomials[j], &dirs[i]));
    let svd = design.clone().svd(true, true);
    let mut coefficients = vec![CMatrix::zeros(r, c); monomials.len()];
    for a in 0..r {
        for b in 0..c {
            let re = DMatrix::from_fn(dirs.len(), 1, |i, _| values[i][(a, b)].re);
            let im = DMatrix::from_fn(dirs.len(), 1, |i, _| values[i][(a, b)].im);
            let sr = svd.solve(&re, 1e-12).map_err(|e| Error::SingularSystem(e.into()))?;
            let si = svd.solve(&im, 1e-12).map_err(|e| Error::SingularSystem(e.into()))?;
            for j in 0..monomials.len() {
                coefficients[j][(a, b)] = Complex64::new(sr[(j, 0)], si[(j, 0)]);
            }
        }
    }
    let poly = HomogeneousPolynomial {
        dim,
        degree,
        monomials,
        coefficients,
    };
    let (num, den) = dirs.iter().zip(values).fold((0.0f64, 0.0f64), |(n, d), (u, v)| {
        (n.max((poly.eval(u) - v).norm()), d.max(v.norm()))
    });
    Ok((poly, if den > 0.0 { num / den } else { 0.0 }))
}

/// First non-vanishing homogeneous layer of `κ ↦ f(κ)` with `f(0) ≈ 0`.
/// `scale` normalizes layer norms (typically `max(1, ‖A(k_r)‖)`).
pub fn taylor_order<F>(f: F, dim: usize, scale: f64, opts: &TaylorOptions) -> Result<TaylorData>
where
    F: Fn(&[f64]) -> Result<CMatrix>,
{
    let dirs = sample_directions(dim, opts.directions, opts.seed);
    let degree = (opts.max_order + 2).min(STENCIL.len() - 1);
    let mut layers: Vec<Vec<Vec<CMatrix>>> = Vec::with_capacity(opts.radii.len());
    for &rho in &opts.radii {
        layers.push(
            dirs.iter()
                .map(|u| line_coefficients(&f, u, rho, degree))
                .collect::<Result<_>>()?,
        );
    }
    let layer_norms: Vec<Vec<f64>> = layers
        .iter()
        .map(|per_dir| {
            (0..=opts.max_order)
                .map(|j| per_dir.iter().map(|c| c[j].norm()).fold(0.0, f64::max) / scale)
                .collect()
        })
        .collect();
    let mut consistent = true;
    let mut ell0 = None;
    for j in 1..=opts.max_order {
        let norms: Vec<f64> = layer_norms.iter().map(|n| n[j]).collect();
        let above = norms.iter().filter(|&&x| x > opts.rel_tol).count();
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = norms.iter().copied().fold(0.0, f64::max);
        if above == norms.len() && hi <= 1.5 * lo {
            ell0 = Some(j);
            break;
        }
        if above > 0 {
            consistent = false;
        }
    }
    let ell0 = ell0.ok_or(Error::TaylorUndetermined(opts.max_order))?;
    let values: Vec<CMatrix> = layers[0].iter().map(|c| c[ell0].clone()).collect();
    let (leading, fit_residual) = fit_homogeneous(&dirs, &values, ell0)?;
    let probe = sample_directions(dim, 50, opts.seed ^ 0x5eed);
    let det_leading_nonzero = probe[dim..]
        .iter()
        .any(|u| leading.eval(u).determinant().norm() > opts.det_tol);
    Ok(TaylorData {
        ell0,
        leading,
        det_leading_nonzero,
        layer_norms,
        consistent,
        fit_residual,
    })
}
