//! Green's functions and solution-space estimates on truncated boxes with
//! zero exterior values.

use serde::Serialize;

use crate::divisors::{LatticeSpan, RiggedPointDivisor, RANK_THRESHOLD};
use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use crate::linalg::{czero, solve, stable_nullity, stable_rank, CMatrix, CVector};
use crate::oracles::vinf::box_points;
use crate::spectral::bands::{spectral_margin, DEFAULT_BAND_GRID};
use crate::Complex64;

pub const GREEN_MARGIN: f64 = 1e-6;
const SOLVER_TOL: f64 = 1e-15;
const ACCEPT_RESIDUAL: f64 = 1e-10;
const NOISE_FLOOR: f64 = 1e-13;
const DENSE_LIMIT: usize = 2500;

/// Sparse matrix of `A` restricted to `[−R, R]ᵈ × Cell`.
#[derive(Clone, Debug)]
pub struct BoxSystem {
    pub dim: usize,
    pub cells: usize,
    pub radius: i64,
    rows: Vec<Vec<(usize, Complex64)>>,
    hermitian: bool,
}

impl BoxSystem {
    pub fn new(op: &PeriodicLatticeOperator, radius: i64) -> Self {
        let (dim, cells) = (op.dim(), op.cells());
        let side = 2 * radius + 1;
        let n = (side as usize).pow(dim as u32) * cells;
        let mut rows = vec![Vec::new(); n];
        let sys = BoxSystem {
            dim,
            cells,
            radius,
            rows: Vec::new(),
            hermitian: op.is_self_adjoint(),
        };
        for g in box_points(dim, radius) {
            for t in op.terms() {
                let target: Vec<i64> = g.iter().zip(&t.offset).map(|(a, b)| a + b).collect();
                if let Some(col) = sys.index(&target, t.to_cell) {
                    let row = sys.index(&g, t.from_cell).expect("box point");
                    rows[row].push((col, t.value));
                }
            }
            for c in 0..cells {
                let i = sys.index(&g, c).expect("box point");
                rows[i].push((i, Complex64::new(-op.shift(), 0.0)));
            }
        }
        BoxSystem { rows, ..sys }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index(&self, g: &[i64], c: usize) -> Option<usize> {
        let side = 2 * self.radius + 1;
        let mut flat = 0i64;
        for &x in g {
            if x.abs() > self.radius {
                return None;
            }
            flat = flat * side + x + self.radius;
        }
        Some(flat as usize * self.cells + c)
    }

    pub fn point(&self, idx: usize) -> LatticePoint {
        let side = 2 * self.radius + 1;
        let c = idx % self.cells;
        let mut flat = (idx / self.cells) as i64;
        let mut g = vec![0; self.dim];
        for slot in g.iter_mut().rev() {
            *slot = flat % side - self.radius;
            flat /= side;
        }
        LatticePoint::new(g, c)
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        CVector::from_iterator(
            self.len(),
            self.rows
                .iter()
                .map(|r| r.iter().map(|(j, a)| a * x[*j]).sum::<Complex64>()),
        )
    }

    pub fn dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.len(), self.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, a) in r {
                m[(i, *j)] += a;
            }
        }
        m
    }

    fn relative_residual(&self, x: &CVector, b: &CVector) -> f64 {
        (b - self.apply(x)).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    /// Conjugate gradients for Hermitian systems, BiCGSTAB otherwise, then a
    /// dense LU for small boxes if neither converged.
    pub fn solve(&self, b: &CVector) -> Result<CVector> {
        let iters = 20 * self.len() + 100;
        let mut best: Option<(f64, CVector)> = None;
        let consider = |best: &mut Option<(f64, CVector)>, x: CVector| {
            let r = self.relative_residual(&x, b);
            if r.is_finite() && best.as_ref().is_none_or(|(b0, _)| r < *b0) {
                *best = Some((r, x));
            }
        };
        let unsolved = |best: &Option<(f64, CVector)>| best.as_ref().is_none_or(|(r, _)| *r > ACCEPT_RESIDUAL);
        if self.hermitian {
            consider(&mut best, self.cg(b, iters));
        }
        if unsolved(&best) {
            consider(&mut best, self.bicgstab(b, iters));
        }
        if unsolved(&best) && self.len() <= DENSE_LIMIT {
            if let Some(x) = solve(&self.dense(), &CMatrix::from_column_slice(self.len(), 1, b.as_slice())) {
                consider(&mut best, x.column(0).into_owned());
            }
        }
        match best {
            Some((r, x)) if r <= ACCEPT_RESIDUAL => Ok(x),
            Some((r, _)) => Err(Error::SingularSystem(format!(
                "relative residual {r:.3e} after iteration"
            ))),
            None => Err(Error::SingularSystem("solver broke down".into())),
        }
    }

    fn cg(&self, b: &CVector, iters: usize) -> CVector {
        let mut x = CVector::zeros(self.len());
        let mut r = b.clone();
        let mut p = r.clone();
        let mut rr = r.dotc(&r).re;
        let target = SOLVER_TOL * b.norm();
        for _ in 0..iters {
            if rr.sqrt() <= target {
                break;
            }
            let ap = self.apply(&p);
            let pap = p.dotc(&ap);
            if pap.norm() == 0.0 {
                break;
            }
            let alpha = Complex64::new(rr, 0.0) / pap;
            x += &p * alpha;
            r -= &ap * alpha;
            let rr_new = r.dotc(&r).re;
            p = &r + &p * Complex64::new(rr_new / rr, 0.0);
            rr = rr_new;
        }
        x
    }

    fn bicgstab(&self, b: &CVector, iters: usize) -> CVector {
        let n = self.len();
        let mut x = CVector::zeros(n);
        let mut r = b.clone();
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        let mut v = CVector::zeros(n);
        let mut p = CVector::zeros(n);
        let target = SOLVER_TOL * b.norm();
        for _ in 0..iters {
            if r.norm() <= target {
                break;
            }
            let rho_new = r_hat.dotc(&r);
            if rho_new.norm() == 0.0 || omega.norm() == 0.0 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            p = &r + (&p - &v * omega) * beta;
            v = self.apply(&p);
            let denom = r_hat.dotc(&v);
            if denom.norm() == 0.0 {
                break;
            }
            alpha = rho_new / denom;
            let s = &r - &v * alpha;
            let t = self.apply(&s);
            let tt = t.dotc(&t);
            omega = if tt.norm() == 0.0 { czero() } else { t.dotc(&s) / tt };
            x += &p * alpha + &s * omega;
            r = &s - &t * omega;
            rho = rho_new;
        }
        x
    }

    pub fn to_function(&self, x: &CVector) -> LatticeFunction {
        LatticeFunction::from_entries(x.iter().enumerate().map(|(i, v)| (self.point(i), *v)))
    }
}

fn require_margin(op: &PeriodicLatticeOperator) -> Result<f64> {
    let margin = spectral_margin(op, DEFAULT_BAND_GRID)?;
    if margin.is_nan() || margin < GREEN_MARGIN {
        return Err(Error::MarginViolation {
            margin,
            required: GREEN_MARGIN,
        });
    }
    Ok(margin)
}

/// Least-squares fit of `log‖G(g)‖ ≈ a − ε|g|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    pub annulus: (f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenFunction {
    pub radius: i64,
    pub source: LatticePoint,
    pub margin: f64,
    #[serde(skip)]
    pub values: LatticeFunction,
    /// `max |A G − δ|` over interior points, relative to `max |G|`.
    pub residual: f64,
    pub fit: DecayFit,
}

impl GreenFunction {
    /// `‖G(g, ·)‖` over the cell.
    pub fn cell_norm(&self, g: &[i64], cells: usize) -> f64 {
        (0..cells)
            .map(|c| self.values.get(&LatticePoint::new(g.to_vec(), c)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn fit_line(samples: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
    let syy: f64 = samples.iter().map(|s| (s.1 - my).powi(2)).sum();
    if samples.len() < 3 || sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = samples.iter().map(|s| (s.1 - intercept - slope * s.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some((slope, intercept, r2))
}

/// Decay fit on `R/2 ≤ |g| ≤ R−2`, ignoring values below the noise floor;
/// falls back to `1 ≤ |g| ≤ R−2` when too few samples survive.
pub fn decay_fit(norms: &[(Vec<i64>, f64)], radius: i64) -> Result<DecayFit> {
    let max = norms.iter().map(|s| s.1).fold(0.0, f64::max);
    let sample = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        norms
            .iter()
            .filter_map(|(g, v)| {
                let r = g.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
                (r >= lo && r <= hi && *v > NOISE_FLOOR * max).then(|| (r, v.ln()))
            })
            .collect()
    };
    let outer = (radius - 2) as f64;
    for (lo, hi) in [(radius as f64 / 2.0, outer), (1.0, outer)] {
        let s = sample(lo, hi);
        if let Some((slope, intercept, r2)) = fit_line(&s) {
            return Ok(DecayFit {
                rate: -slope,
                intercept,
                r_squared: r2,
                points: s.len(),
                annulus: (lo, hi),
            });
        }
    }
    Err(Error::InvalidInput(format!(
        "too few samples above the noise floor for a decay fit at R={radius}"
    )))
}

/// Solves `A G = δ_source` on `[−R, R]ᵈ × Cell` and fits the exponential decay.
pub fn green_function(op: &PeriodicLatticeOperator, source: &LatticePoint, radius: i64) -> Result<GreenFunction> {
    if source.g.len() != op.dim() || source.c >= op.cells() {
        return Err(Error::InvalidInput("source does not lie on the covering".into()));
    }
    if radius < 4 || source.g.iter().any(|x| x.abs() > radius) {
        return Err(Error::InvalidInput(format!(
            "radius {radius} too small for source {:?}",
            source.g
        )));
    }
    let margin = require_margin(op)?;
    let sys = BoxSystem::new(op, radius);
    let mut b = CVector::zeros(sys.len());
    b[sys.index(&source.g, source.c).expect("source in box")] = Complex64::new(1.0, 0.0);
    let x = sys.solve(&b)?;
    let values = sys.to_function(&x);

    let interior = radius - op.hop_radius();
    let au = op.apply(&values);
    let delta = LatticeFunction::delta(source.clone());
    let residual = au
        .combine(Complex64::new(1.0, 0.0), &delta, Complex64::new(-1.0, 0.0))
        .iter()
        .filter(|(p, _)| p.g.iter().all(|x| x.abs() <= interior))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
        / values.max_abs().max(f64::MIN_POSITIVE);

    let mut g = GreenFunction {
        radius,
        source: source.clone(),
        margin,
        values,
        residual,
        fit: DecayFit {
            rate: 0.0,
            intercept: 0.0,
            r_squared: 0.0,
            points: 0,
            annulus: (0.0, 0.0),
        },
    };
    let norms: Vec<(Vec<i64>, f64)> = box_points(op.dim(), radius)
        .into_iter()
        .map(|h| {
            let rel: Vec<i64> = h.iter().zip(&source.g).map(|(a, s)| a - s).collect();
            let v = g.cell_norm(&h, op.cells());
            (rel, v)
        })
        .collect();
    g.fit = decay_fit(&norms, radius)?;
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedEstimate {
    pub radii: Vec<i64>,
    /// `None` where the rank decision at that radius was unstable.
    pub dims: Vec<Option<usize>>,
    pub stabilized: Option<usize>,
}

/// `dim{u on the box : A u ∈ L⁺, (u, L⁻) = 0}` with zero exterior values.
pub fn truncated_dim(op: &PeriodicLatticeOperator, mu: &RiggedPointDivisor<LatticeSpan>, radius: i64) -> Result<usize> {
    let sys = BoxSystem::new(op, radius);
    let plus = mu.plus.basis();
    let minus = mu.minus.basis();
    let as_vector = |f: &LatticeFunction| -> Result<CVector> {
        let mut v = CVector::zeros(sys.len());
        for (p, a) in f.iter() {
            let i = sys.index(&p.g, p.c).ok_or_else(|| {
                Error::InvalidInput(format!("divisor point {p:?} outside the box of radius {radius}"))
            })?;
            v[i] = *a;
        }
        Ok(v)
    };
    let plus_v: Vec<CVector> = plus.iter().map(&as_vector).collect::<Result<_>>()?;
    let minus_v: Vec<CVector> = minus.iter().map(&as_vector).collect::<Result<_>>()?;
    if plus_v.is_empty() {
        // u = 0 is forced whenever the truncation is invertible
        let solved = sys.solve(&CVector::from_element(sys.len(), Complex64::new(1.0, 0.0)));
        if solved.is_ok() {
            return Ok(0);
        }
    } else {
        let solutions: Result<Vec<CVector>> = plus_v.iter().map(|b| sys.solve(b)).collect();
        if let Ok(sols) = solutions {
            if minus_v.is_empty() {
                return Ok(plus_v.len());
            }
            let m = CMatrix::from_fn(minus_v.len(), sols.len(), |i, j| minus_v[i].transpose().dot(&sols[j]));
            let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let rank = if scale == 0.0 {
                0
            } else {
                stable_rank(&m, RANK_THRESHOLD)?
            };
            return Ok(plus_v.len() - rank);
        }
    }
    if sys.len() > DENSE_LIMIT {
        return Err(Error::SingularSystem(format!(
            "box of radius {radius} is singular and too large for a dense nullity"
        )));
    }
    // singular truncation: nullity of [A | −L⁺ ; (L⁻)ᵀ | 0] projected to u
    let n = sys.len();
    let (lp, lm) = (plus_v.len(), minus_v.len());
    let mut big = CMatrix::zeros(n + lm, n + lp);
    big.view_mut((0, 0), (n, n)).copy_from(&sys.dense());
    for (j, v) in plus_v.iter().enumerate() {
        for i in 0..n {
            big[(i, n + j)] = -v[i];
        }
    }
    for (i, v) in minus_v.iter().enumerate() {
        for j in 0..n {
            big[(n + i, j)] = v[j];
        }
    }
    stable_nullity(&big, RANK_THRESHOLD)
}

/// Dimension estimates across radii; stabilized once three consecutive radii agree.
pub fn truncated_l_dim_estimate(
    op: &PeriodicLatticeOperator,
    mu: &RiggedPointDivisor<LatticeSpan>,
    radii: &[i64],
) -> Result<TruncatedEstimate> {
    require_margin(op)?;
    let mut dims = Vec::with_capacity(radii.len());
    for &r in radii {
        match truncated_dim(op, mu, r) {
            Ok(v) => dims.push(Some(v)),
            Err(Error::RankUnstable { .. }) => dims.push(None),
            Err(e) => return Err(e),
        }
    }
    let stabilized = dims
        .windows(3)
        .find(|w| w[0].is_some() && w[0] == w[1] && w[1] == w[2])
        .and_then(|w| w[0]);
    Ok(TruncatedEstimate {
        radii: radii.to_vec(),
        dims,
        stabilized,
    })
}
