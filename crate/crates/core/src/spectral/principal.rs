//! Generalized principal eigenvalue `Λ_A(ξ)` of `A(iξ)` and its maximization.

use nalgebra::DMatrix;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::floquet::fiber_entries;
use crate::lattice::PeriodicLatticeOperator;
use crate::linalg::eigen_general;
use crate::Complex64;

#[derive(Clone, Debug)]
pub struct PrincipalPair {
    pub value: f64,
    /// Entrywise positive, normalized to maximum 1.
    pub vector: Vec<f64>,
}

/// Real matrix `A(iξ)`, with entries `Σ a·e^{−ξ·g}`.
pub fn imaginary_fiber(op: &PeriodicLatticeOperator, xi: &[f64]) -> DMatrix<f64> {
    let k: Vec<Complex64> = xi.iter().map(|&x| Complex64::new(0.0, x)).collect();
    fiber_entries(op, &k).map(|z| z.re)
}

fn check_perron_structure(op: &PeriodicLatticeOperator, a: &DMatrix<f64>) -> Result<()> {
    if !op.is_real() {
        return Err(Error::NotPerronType("coefficients are not real".into()));
    }
    let n = a.nrows();
    let scale = a.amax().max(1.0);
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[(i, j)] > 1e-14 * scale {
                return Err(Error::NotPerronType(format!(
                    "off-diagonal entry ({i},{j}) = {} is positive",
                    a[(i, j)]
                )));
            }
            if a[(i, j)] != 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    if kosaraju_scc(&graph).len() != 1 {
        return Err(Error::NotPerronType("fiber matrix is reducible".into()));
    }
    Ok(())
}

/// `Λ_A(ξ)`: the eigenvalue of `A(iξ)` with an entrywise positive eigenvector,
/// i.e. the Perron root of `s·I − A(iξ)` mapped back.
pub fn principal_eigenvalue(op: &PeriodicLatticeOperator, xi: &[f64]) -> Result<PrincipalPair> {
    let a = imaginary_fiber(op, xi);
    check_perron_structure(op, &a)?;
    let n = a.nrows();
    let ev = eigen_general(&a.map(|x| Complex64::new(x, 0.0))).values;
    let lambda = ev
        .iter()
        .copied()
        .min_by(|x, y| x.re.total_cmp(&y.re).then(x.im.abs().total_cmp(&y.im.abs())))
        .ok_or_else(|| Error::InvalidInput("empty cell".into()))?;
    if lambda.im.abs() > 1e-10 * lambda.re.abs().max(1.0) {
        return Err(Error::ComplexPerron {
            re: lambda.re,
            im: lambda.im,
        });
    }
    let shifted = &a - DMatrix::from_diagonal_element(n, n, lambda.re);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty");
    let mut v: Vec<f64> = v_t.row(imin).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    v.iter_mut().for_each(|x| *x /= max);
    if v.iter().any(|&x| x <= 1e-10) {
        return Err(Error::NotPerronType(format!("eigenvector {v:?} is not positive")));
    }
    Ok(PrincipalPair {
        value: lambda.re,
        vector: v,
    })
}

#[derive(Clone, Debug)]
pub struct PrincipalOptions {
    /// The search box is `[−grid_radius, grid_radius]ᵈ`.
    pub grid_radius: f64,
    pub grid_points: usize,
    pub grad_tol: f64,
    pub fd_step: f64,
    pub max_sweeps: usize,
    pub concavity_trials: usize,
    pub concavity_slack: f64,
    pub seed: u64,
}

impl Default for PrincipalOptions {
    fn default() -> Self {
        PrincipalOptions {
            grid_radius: 2.0,
            grid_points: 21,
            grad_tol: 1e-8,
            fd_step: 1e-5,
            max_sweeps: 200,
            concavity_trials: 100,
            concavity_slack: 1e-10,
            seed: 0x9e1c,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConcavityAudit {
    pub trials: usize,
    pub violations: usize,
    /// Largest value of `(Λ(ξ)+Λ(η))/2 − Λ((ξ+η)/2)` seen.
    pub worst: f64,
}

#[derive(Clone, Debug)]
pub struct PrincipalEigenvalueCurve {
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub xi0: Vec<f64>,
    pub lambda_max: f64,
    pub gradient_norm: f64,
    pub concavity: ConcavityAudit,
}

fn gradient<F: Fn(&[f64]) -> Result<f64>>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            Ok((f(&p)? - f(&m)?) / (2.0 * h))
        })
        .collect()
}

/// Grid search for `max Λ_A(ξ)` followed by coordinate ascent with one-dimensional
/// Newton steps, and a midpoint-concavity audit on random pairs in the search box.
pub fn maximize_principal(op: &PeriodicLatticeOperator, opts: &PrincipalOptions) -> Result<PrincipalEigenvalueCurve> {
    let d = op.dim();
    let f = |xi: &[f64]| principal_eigenvalue(op, xi).map(|p| p.value);
    let n = opts.grid_points.max(2);
    let axis: Vec<f64> = (0..n)
        .map(|i| -opts.grid_radius + 2.0 * opts.grid_radius * i as f64 / (n - 1) as f64)
        .collect();
    let grid: Vec<Vec<f64>> = (0..n.pow(d as u32))
        .map(|mut idx| {
            let mut x = vec![0.0; d];
            for a in (0..d).rev() {
                x[a] = axis[idx % n];
                idx /= n;
            }
            x
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|x| f(x)).collect::<Result<_>>()?;
    let best = (0..values.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty grid");
    let mut x = grid[best].clone();
    let mut fx = values[best];
    let h = opts.fd_step;
    let mut gnorm = f64::INFINITY;
    for _ in 0..opts.max_sweeps {
        for a in 0..d {
            let mut p = x.clone();
            let mut m = x.clone();
            p[a] += h;
            m[a] -= h;
            let (fp, fm) = (f(&p)?, f(&m)?);
            let d1 = (fp - fm) / (2.0 * h);
            let d2 = (fp - 2.0 * fx + fm) / (h * h);
            let mut step = if d2 < 0.0 { -d1 / d2 } else { 0.1 * d1.signum() };
            step = step.clamp(-1.0, 1.0);
            for _ in 0..40 {
                let mut y = x.clone();
                y[a] += step;
                let fy = f(&y)?;
                if fy >= fx - 1e-15 {
                    x = y;
                    fx = fy;
                    break;
                }
                step /= 2.0;
            }
        }
        gnorm = gradient(&f, &x, h)?.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < opts.grad_tol {
            break;
        }
    }
    // a stationary point far outside the box is an escape to infinity, not a maximum
    if gnorm >= opts.grad_tol || x.iter().any(|v| v.abs() > 5.0 * opts.grid_radius) {
        return Err(Error::NoInteriorMaximum(gnorm));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut audit = ConcavityAudit {
        trials: opts.concavity_trials,
        violations: 0,
        worst: f64::NEG_INFINITY,
    };
    for _ in 0..opts.concavity_trials {
        let r = opts.grid_radius;
        let u: Vec<f64> = (0..d).map(|_| rng.random_range(-r..=r)).collect();
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-r..=r)).collect();
        let mid: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 0.5 * (a + b)).collect();
        let gap = 0.5 * (f(&u)? + f(&v)?) - f(&mid)?;
        audit.worst = audit.worst.max(gap);
        if gap > opts.concavity_slack {
            audit.violations += 1;
        }
    }
    if audit.violations > 0 {
        return Err(Error::ConcavityViolation {
            count: audit.violations,
            trials: audit.trials,
            worst: audit.worst,
        });
    }
    Ok(PrincipalEigenvalueCurve {
        grid,
        values,
        xi0: x,
        lambda_max: fx,
        gradient_norm: gnorm,
        concavity: audit,
    })
}
