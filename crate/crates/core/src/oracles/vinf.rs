//! Brute-force kernel of `A` on Floquet polynomials `e^{ik·g} g^j` of bounded degree.

use crate::error::{Error, Result};
use crate::floquet::{Quasimomentum, QUASIMOMENTUM_TOL};
use crate::lattice::{LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use crate::linalg::{czero, null_space_scaled, CMatrix};
use crate::spectral::taylor::multi_indices;
use crate::Complex64;

/// Relative SVD threshold for the kernel decision.
pub const VINF_THRESHOLD: f64 = 1e-9;

/// Candidate space `u_{j,c}(g, c′) = e^{ik·g} g^j δ_{c,c′}` with `|j| ≤ N`.
#[derive(Clone, Debug)]
pub struct FloquetPolynomialBasis {
    pub k: Quasimomentum,
    pub degree: usize,
    pub cells: usize,
    /// Basis labels `(j, c)` in column order.
    pub labels: Vec<(Vec<usize>, usize)>,
}

impl FloquetPolynomialBasis {
    pub fn new(k: Quasimomentum, degree: usize, cells: usize) -> Self {
        let d = k.dim();
        let labels = (0..=degree)
            .flat_map(|n| multi_indices(d, n))
            .flat_map(|j| (0..cells).map(move |c| (j.clone(), c)))
            .collect();
        FloquetPolynomialBasis {
            k,
            degree,
            cells,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn position(&self, j: &[usize], c: usize) -> usize {
        self.labels
            .iter()
            .position(|(a, b)| a.as_slice() == j && *b == c)
            .expect("lower multi-index belongs to the basis")
    }

    /// Matrix of `A` in this basis; the space is invariant because translation
    /// never raises polynomial degree.
    pub fn operator_matrix(&self, op: &PeriodicLatticeOperator) -> CMatrix {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for (col, (j, c)) in self.labels.iter().enumerate() {
            for t in op.terms().iter().filter(|t| t.to_cell == *c) {
                let phase = t.value * self.k.character(&t.offset);
                for jp in lower_indices(j) {
                    let coeff = multi_binomial(j, &jp) * power(&t.offset, j, &jp);
                    if coeff != 0 {
                        let row = self.position(&jp, t.from_cell);
                        m[(row, col)] += phase * coeff as f64;
                    }
                }
            }
            m[(col, col)] -= Complex64::new(op.shift(), 0.0);
        }
        m
    }

    /// Evaluates `Σ coeffs[(j,c)] u_{j,c}` on the box `‖g‖_∞ ≤ radius`.
    pub fn materialize(&self, coeffs: &[Complex64], radius: i64) -> LatticeFunction {
        let d = self.k.dim();
        let mut out = LatticeFunction::new();
        for g in box_points(d, radius) {
            let e = self.k.character(&g);
            for c in 0..self.cells {
                let mut v = czero();
                for ((j, cc), a) in self.labels.iter().zip(coeffs) {
                    if *cc == c {
                        let mono: f64 = j.iter().zip(&g).map(|(&p, &x)| (x as f64).powi(p as i32)).product();
                        v += a * mono;
                    }
                }
                out.set(LatticePoint::new(g.clone(), c), v * e);
            }
        }
        out
    }
}

/// All `j′ ≤ j` componentwise.
fn lower_indices(j: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &x in j {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=x).map(move |y| {
                    let mut p = prefix.clone();
                    p.push(y);
                    p
                })
            })
            .collect();
    }
    out
}

fn multi_binomial(j: &[usize], jp: &[usize]) -> i128 {
    j.iter()
        .zip(jp)
        .map(|(&a, &b)| (0..b).fold(1i128, |acc, i| acc * (a - i) as i128 / (i + 1) as i128))
        .product()
}

fn power(h: &[i64], j: &[usize], jp: &[usize]) -> i128 {
    h.iter()
        .zip(j.iter().zip(jp))
        .map(|(&x, (&a, &b))| (x as i128).pow((a - b) as u32))
        .product()
}

/// Deck points of the box `‖g‖_∞ ≤ radius` in lexicographic order.
pub fn box_points(d: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-radius..=radius).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Kernel of `A` on one Floquet polynomial space.
#[derive(Clone, Debug)]
pub struct VinfBlock {
    pub basis: FloquetPolynomialBasis,
    /// Columns are coefficient vectors of kernel elements.
    pub kernel: CMatrix,
}

impl VinfBlock {
    pub fn nullity(&self) -> usize {
        self.kernel.ncols()
    }

    pub fn materialize(&self, col: usize, radius: i64) -> LatticeFunction {
        let coeffs: Vec<Complex64> = self.kernel.column(col).iter().copied().collect();
        self.basis.materialize(&coeffs, radius)
    }
}

#[derive(Clone, Debug)]
pub struct VinfOracle {
    pub total: usize,
    pub blocks: Vec<VinfBlock>,
}

/// `dim V^∞_N` by direct kernel computation at the given quasimomenta.
/// Only the locations are used; multiplicities and orders are not consulted.
pub fn vinf_dim_oracle(op: &PeriodicLatticeOperator, ks: &[Vec<f64>], n: usize) -> Result<VinfOracle> {
    let qs: Vec<Quasimomentum> = ks.iter().map(|k| Quasimomentum::real(k)).collect();
    for q in &qs {
        if q.dim() != op.dim() {
            return Err(Error::InvalidInput(format!(
                "quasimomentum of length {} for d={}",
                q.dim(),
                op.dim()
            )));
        }
    }
    for (a, qa) in qs.iter().enumerate() {
        if qs[..a].iter().any(|qb| qa.approx_eq(qb, QUASIMOMENTUM_TOL)) {
            return Err(Error::InvalidInput(
                "quasimomenta must be distinct modulo the dual lattice".into(),
            ));
        }
    }
    // singular values are judged against the size of the operator itself, so a
    // block that vanishes up to roundoff counts as zero
    let scale = op.terms().iter().map(|t| t.value.norm()).sum::<f64>() + op.shift().abs();
    let mut blocks = Vec::with_capacity(qs.len());
    for q in qs {
        let basis = FloquetPolynomialBasis::new(q, n, op.cells());
        let kernel = null_space_scaled(&basis.operator_matrix(op), VINF_THRESHOLD, scale)?;
        blocks.push(VinfBlock { basis, kernel });
    }
    Ok(VinfOracle {
        total: blocks.iter().map(VinfBlock::nullity).sum(),
        blocks,
    })
}
