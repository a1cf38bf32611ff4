//! Riesz projectors onto the eigenvalues of `A(k)` near zero and the reduced
//! matrices `λ(k)` they define.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::floquet::fiber_entries;
use crate::lattice::PeriodicLatticeOperator;
use crate::linalg::{eigen_general, null_space, solve, CMatrix};
use crate::Complex64;

/// Relative half-width of the eigenvalue-free annulus around a contour.
pub const ANNULUS: f64 = 0.1;
/// Eigenvector condition number beyond which quadrature replaces the eigendecomposition.
pub const DEFECTIVE_CONDITION: f64 = 1e8;
pub const QUADRATURE_NODES: usize = 256;
/// Eigenvalues of modulus at most this are counted as zero.
pub const ZERO_CLUSTER: f64 = 1e-8;
/// Smallest admissible Gram determinant of the transported basis.
pub const GRAM_FLOOR: f64 = 1e-8;

/// Circle `|z − center| = radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64) -> Self {
        ContourSpec { center, radius }
    }

    /// Circle about 0 at half the distance to the nearest eigenvalue outside the
    /// zero cluster; radius 1 beyond the spectral radius when every eigenvalue is in it.
    pub fn around_zero(eigenvalues: &[Complex64]) -> Self {
        let outside = eigenvalues
            .iter()
            .map(|z| z.norm())
            .filter(|&r| r > ZERO_CLUSTER)
            .fold(f64::INFINITY, f64::min);
        let radius = if outside.is_finite() { 0.5 * outside } else { 1.0 };
        ContourSpec::new(Complex64::new(0.0, 0.0), radius)
    }

    /// Circle about 0 enclosing exactly the `m` eigenvalues of smallest modulus.
    pub fn enclosing_smallest(eigenvalues: &[Complex64], m: usize) -> Result<Self> {
        let mut moduli: Vec<f64> = eigenvalues.iter().map(|z| z.norm()).collect();
        moduli.sort_by(|a, b| a.total_cmp(b));
        let radius = if m >= moduli.len() {
            1.0 + moduli.last().copied().unwrap_or(0.0)
        } else {
            0.5 * moduli[m]
        };
        let contour = ContourSpec::new(Complex64::new(0.0, 0.0), radius);
        contour.check(eigenvalues)?;
        Ok(contour)
    }

    pub fn encloses(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Fails when an eigenvalue lies in the annulus `radius·(1 ± δ)`.
    pub fn check(&self, eigenvalues: &[Complex64]) -> Result<()> {
        for z in eigenvalues {
            let distance = ((z - self.center).norm() - self.radius).abs();
            if distance <= ANNULUS * self.radius {
                return Err(Error::EigenvalueOnContour {
                    distance,
                    radius: self.radius,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorMethod {
    Eigendecomposition,
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct RieszProjector {
    pub matrix: CMatrix,
    pub rank: usize,
    pub method: ProjectorMethod,
    /// Condition number of the eigenvector matrix.
    pub condition: f64,
}

/// Spectral projector of `a` for the eigenvalues inside `contour`.
pub fn riesz_projector_matrix(a: &CMatrix, contour: &ContourSpec) -> Result<RieszProjector> {
    let n = a.nrows();
    let eig = eigen_general(a);
    contour.check(&eig.values)?;
    let inside: Vec<bool> = eig.values.iter().map(|&z| contour.encloses(z)).collect();
    let rank = inside.iter().filter(|&&b| b).count();
    let condition = eig.condition();
    if rank == 0 {
        return Ok(RieszProjector {
            matrix: CMatrix::zeros(n, n),
            rank,
            method: ProjectorMethod::Eigendecomposition,
            condition,
        });
    }
    if rank == n {
        return Ok(RieszProjector {
            matrix: CMatrix::identity(n, n),
            rank,
            method: ProjectorMethod::Eigendecomposition,
            condition,
        });
    }
    if condition <= DEFECTIVE_CONDITION {
        if let Some(vinv) = solve(&eig.vectors, &CMatrix::identity(n, n)) {
            let mut d = CMatrix::zeros(n, n);
            for (i, &b) in inside.iter().enumerate() {
                if b {
                    d[(i, i)] = Complex64::new(1.0, 0.0);
                }
            }
            return Ok(RieszProjector {
                matrix: &eig.vectors * d * vinv,
                rank,
                method: ProjectorMethod::Eigendecomposition,
                condition,
            });
        }
    }
    Ok(RieszProjector {
        matrix: quadrature_projector(a, contour)?,
        rank,
        method: ProjectorMethod::Quadrature,
        condition,
    })
}

/// Trapezoidal rule for `(2πi)^{−1} ∮ (z − A)^{−1} dz`.
pub fn quadrature_projector(a: &CMatrix, contour: &ContourSpec) -> Result<CMatrix> {
    let n = a.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for j in 0..QUADRATURE_NODES {
        let w = Complex64::from_polar(contour.radius, 2.0 * PI * j as f64 / QUADRATURE_NODES as f64);
        let z = contour.center + w;
        let mut shifted = -a.clone();
        for i in 0..n {
            shifted[(i, i)] += z;
        }
        let resolvent = solve(&shifted, &CMatrix::identity(n, n))
            .ok_or_else(|| Error::SingularSystem("resolvent on the contour".into()))?;
        acc += resolvent * w;
    }
    Ok(acc / Complex64::new(QUADRATURE_NODES as f64, 0.0))
}

/// Riesz projector of `A(k)`.
pub fn riesz_projector(op: &PeriodicLatticeOperator, k: &[Complex64], contour: &ContourSpec) -> Result<RieszProjector> {
    riesz_projector_matrix(&fiber_entries(op, k), contour)
}

/// The analytic family `λ(k)` near a Fermi point `k_r`: the matrix of
/// `A(k)Π(k)` in the transported basis `e_j(k) = Π(k)e_j`, where `{e_j}` is an
/// orthonormal basis of `range Π(k_r)`. Coordinates are taken with the Gram
/// inverse, so the eigenvalues of `λ(k)` are exactly the enclosed eigenvalues of `A(k)`.
#[derive(Clone, Debug)]
pub struct ReducedFamily {
    op: PeriodicLatticeOperator,
    k_r: Vec<f64>,
    contour: ContourSpec,
    basis: CMatrix,
}

impl ReducedFamily {
    pub fn new(op: &PeriodicLatticeOperator, k_r: &[f64]) -> Result<Self> {
        let kc = real_to_complex(k_r);
        let a = fiber_entries(op, &kc);
        let contour = ContourSpec::around_zero(&eigen_general(&a).values);
        Self::with_contour(op, k_r, contour)
    }

    pub fn with_contour(op: &PeriodicLatticeOperator, k_r: &[f64], contour: ContourSpec) -> Result<Self> {
        let p = riesz_projector(op, &real_to_complex(k_r), &contour)?;
        let n = op.cells();
        // orthonormal basis of range Π = orthogonal complement of ker Π*
        let basis = if p.rank == n {
            CMatrix::identity(n, n)
        } else {
            null_space(&(CMatrix::identity(n, n) - p.matrix.adjoint()), 1e-8)?
        };
        if basis.ncols() != p.rank {
            return Err(Error::BasisDegenerate(0.0));
        }
        Ok(ReducedFamily {
            op: op.clone(),
            k_r: k_r.to_vec(),
            contour,
            basis,
        })
    }

    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    pub fn center(&self) -> &[f64] {
        &self.k_r
    }

    pub fn contour(&self) -> &ContourSpec {
        &self.contour
    }

    /// `λ(k)` at an absolute quasimomentum `k`.
    pub fn eval(&self, k: &[f64]) -> Result<CMatrix> {
        let kc = real_to_complex(k);
        let a = fiber_entries(&self.op, &kc);
        let p = riesz_projector_matrix(&a, &self.contour)?;
        if p.rank != self.multiplicity() {
            return Err(Error::EigenvalueOnContour {
                distance: 0.0,
                radius: self.contour.radius,
            });
        }
        let e = &p.matrix * &self.basis;
        let gram = e.adjoint() * &e;
        let det = gram.determinant().norm();
        if det < GRAM_FLOOR {
            return Err(Error::BasisDegenerate(det));
        }
        let rhs = e.adjoint() * a * &e;
        solve(&gram, &rhs).ok_or(Error::BasisDegenerate(det))
    }

    /// `λ(k_r + κ)`.
    pub fn eval_offset(&self, kappa: &[f64]) -> Result<CMatrix> {
        let k: Vec<f64> = self.k_r.iter().zip(kappa).map(|(a, b)| a + b).collect();
        self.eval(&k)
    }
}

pub(crate) fn real_to_complex(k: &[f64]) -> Vec<Complex64> {
    k.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
