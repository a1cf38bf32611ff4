//! Dense linear-algebra helpers: SVD ranks with stability checks, general complex
//! eigendecompositions built on the Schur form, and exact rational ranks.

use nalgebra::{DMatrix, DVector};
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

fn rank_at(s: &[f64], rel: f64, scale: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0).max(scale);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel * smax).count()
}

/// Numerical rank with singular values `≤ rel·σ_max` treated as zero. The
/// decision must not move when the threshold is scaled by 10 either way.
pub fn stable_rank(m: &CMatrix, rel: f64) -> Result<usize> {
    stable_rank_scaled(m, rel, 0.0)
}

/// [`stable_rank`] measured against `max(σ_max, scale)`, so that a matrix made
/// entirely of roundoff is recognised as zero.
pub fn stable_rank_scaled(m: &CMatrix, rel: f64, scale: f64) -> Result<usize> {
    let s = singular_values(m);
    let r = rank_at(&s, rel, scale);
    let tight = rank_at(&s, rel / 10.0, scale);
    let loose = rank_at(&s, rel * 10.0, scale);
    if r != tight || r != loose {
        let n = m.ncols();
        return Err(Error::RankUnstable {
            at_threshold: n - r,
            tighter: n - tight,
            looser: n - loose,
        });
    }
    Ok(r)
}

/// Nullity `ncols − rank` with the stability check of [`stable_rank`].
pub fn stable_nullity(m: &CMatrix, rel: f64) -> Result<usize> {
    Ok(m.ncols() - stable_rank(m, rel)?)
}

/// Orthonormal basis of the null space (columns), with the rank decision of [`stable_rank`].
pub fn null_space(m: &CMatrix, rel: f64) -> Result<CMatrix> {
    null_space_scaled(m, rel, 0.0)
}

/// [`null_space`] with the rank decision of [`stable_rank_scaled`].
pub fn null_space_scaled(m: &CMatrix, rel: f64, scale: f64) -> Result<CMatrix> {
    let n = m.ncols();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let rank = stable_rank_scaled(m, rel, scale)?;
    // pad to at least square so the thin SVD carries a full right basis
    let padded = if m.nrows() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let mut svd = padded.svd(false, true);
    svd.sort_by_singular_values();
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut basis = CMatrix::zeros(n, n - rank);
    for (col, row) in (rank..n).enumerate() {
        for i in 0..n {
            basis[(i, col)] = v_t[(row, i)].conj();
        }
    }
    Ok(basis)
}

/// Eigenvalues of a Hermitian matrix in non-decreasing order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigenvalues and (unit) right eigenvectors of a general complex matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: CMatrix,
}

impl Eigen {
    /// 2-norm condition number of the eigenvector matrix.
    pub fn condition(&self) -> f64 {
        let s = singular_values(&self.vectors);
        match (s.first(), s.last()) {
            (Some(&a), Some(&b)) if b > 0.0 => a / b,
            _ => f64::INFINITY,
        }
    }
}

/// Complex Schur form `A = Q T Q*` followed by triangular back-substitution.
pub fn eigen_general(m: &CMatrix) -> Eigen {
    let n = m.nrows();
    if n == 0 {
        return Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    if n == 1 {
        return Eigen {
            values: vec![m[(0, 0)]],
            vectors: CMatrix::from_element(1, 1, cone()),
        };
    }
    let (q, t) = m.clone().schur().unpack();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * scale;
    let mut y_all = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        let mut y = CVector::zeros(n);
        y[k] = cone();
        for i in (0..k).rev() {
            let mut acc = czero();
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            y[i] = -acc / denom;
        }
        y_all.set_column(k, &y);
    }
    let mut vectors = q * y_all;
    for mut col in vectors.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= Complex64::new(nrm, 0.0);
        }
    }
    Eigen { values, vectors }
}

/// Solve `m x = b` by LU; `None` when the factorization is singular.
pub fn solve(m: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    m.clone().lu().solve(b)
}

/// Rank of a rational matrix by fraction-exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    rational_rref(rows).1.len()
}

/// Reduced row echelon form; returns the reduced rows and the pivot columns.
pub fn rational_rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for x in a[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..ncols {
                    let delta = factor.clone() * a[row][c].clone();
                    a[r][c] = a[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

/// Basis of the rational null space `{x : A x = 0}` (one vector per free column).
pub fn rational_null_space(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|j| {
                (0..ncols)
                    .map(|i| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
    }
    let (r, pivots) = rational_rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r[i][f].clone();
            }
            x
        })
        .collect()
}

pub fn rational_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}
