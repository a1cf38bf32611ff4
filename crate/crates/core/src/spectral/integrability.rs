//! Numerical audit of the local integrability of `‖λ(k)^{−1}‖^q` near Fermi points.

use std::f64::consts::PI;

use super::fermi::{is_definite, FermiPoint};
use super::riesz::{ContourSpec, ReducedFamily};
use super::taylor::sample_directions;
use crate::error::{Error, Result};
use crate::floquet::fiber_at;
use crate::lattice::PeriodicLatticeOperator;
use crate::linalg::{eigen_general, solve, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditVerdict {
    Converged,
    Diverges,
    Inconclusive,
}

impl AuditVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            AuditVerdict::Converged => "converged",
            AuditVerdict::Diverges => "diverges",
            AuditVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Outer radius of the first annulus; halved until `λ(k)` is defined on the ball.
    pub outer_radius: f64,
    pub levels: usize,
    /// Number of deepest successive ratios used for the verdict.
    pub tail: usize,
    pub converge_ratio: f64,
    pub diverge_ratio: f64,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            outer_radius: 0.1,
            levels: 10,
            tail: 4,
            converge_ratio: 0.9,
            diverge_ratio: 0.95,
            seed: 0xa0d17,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub point: usize,
    pub q: u32,
    /// Outer radii of the dyadic annuli.
    pub radii: Vec<f64>,
    /// Integral of `‖λ^{−1}‖^q` over each annulus.
    pub annulus: Vec<f64>,
    /// Cumulative sums of the annulus contributions.
    pub partial_sums: Vec<f64>,
    pub ratios: Vec<f64>,
    pub numeric: AuditVerdict,
    /// `q·ℓ₀ < d`, available for simple points with a definite leading layer.
    pub analytic: Option<bool>,
}

impl AuditReport {
    /// Integrable by the numerical verdict, and not contradicted by the analytic one.
    pub fn satisfied(&self) -> bool {
        self.numeric == AuditVerdict::Converged && self.analytic != Some(false)
    }
}

// 8-point Gauss–Legendre rule on [−1, 1]
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Surface measure of the unit sphere `S^{d−1} ⊂ ℝᵈ`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d - 2) as f64 * sphere_area(d - 2),
    }
}

/// Angular quadrature: `(directions, weight)`.
fn angular_rule(d: usize, seed: u64) -> (Vec<Vec<f64>>, f64) {
    let dirs: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..64)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / 64.0;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => sample_directions(d, 96 * d, seed).split_off(d),
    };
    let w = sphere_area(d) / dirs.len() as f64;
    (dirs, w)
}

/// Max-row-sum operator norm.
fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `q·ℓ₀ < d` when the point is simple and its leading layer is definite.
pub fn analytic_verdict(p: &FermiPoint, d: usize, q: u32) -> Option<bool> {
    if p.multiplicity != 1 {
        return None;
    }
    let t = p.taylor.as_ref()?;
    let definite = if t.ell0 == 2 {
        p.hessian.as_ref().is_some_and(is_definite)
    } else {
        let vals: Vec<f64> = sample_directions(d, 50, 0xde7)
            .iter()
            .map(|u| t.leading.eval(u)[(0, 0)].re)
            .collect();
        let scale = vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
        scale > 0.0 && (vals.iter().all(|&x| x > 1e-6 * scale) || vals.iter().all(|&x| x < -1e-6 * scale))
    };
    definite.then_some((q as usize) * t.ell0 < d)
}

fn audit_point(
    op: &PeriodicLatticeOperator,
    index: usize,
    p: &FermiPoint,
    q: u32,
    opts: &AuditOptions,
) -> Result<AuditReport> {
    let d = op.dim();
    let k = p.coordinates();
    let eig = eigen_general(&fiber_at(op, &k)).values;
    let family = ReducedFamily::with_contour(op, &k, ContourSpec::enclosing_smallest(&eig, p.multiplicity)?)?;
    let (dirs, w) = angular_rule(d, opts.seed);
    let integrand = |kappa: &[f64]| -> Result<f64> {
        let lam = family.eval_offset(kappa)?;
        let m = lam.nrows();
        let inv =
            solve(&lam, &CMatrix::identity(m, m)).ok_or_else(|| Error::SingularSystem("λ(k) on the annulus".into()))?;
        Ok(inf_norm(&inv).powi(q as i32))
    };
    let annulus = |outer: f64| -> Result<f64> {
        let inner = outer / 2.0;
        let (mid, half) = ((outer + inner) / 2.0, (outer - inner) / 2.0);
        let mut total = 0.0;
        for (x, wx) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let r = mid + half * x;
            let mut ring = 0.0;
            for u in &dirs {
                let kappa: Vec<f64> = u.iter().map(|c| c * r).collect();
                ring += integrand(&kappa)?;
            }
            total += wx * half * r.powi(d as i32 - 1) * ring * w;
        }
        Ok(total)
    };
    let mut outer = opts.outer_radius;
    let contributions = loop {
        let radii: Vec<f64> = (0..opts.levels).map(|j| outer / 2f64.powi(j as i32)).collect();
        match radii.iter().map(|&r| annulus(r)).collect::<Result<Vec<f64>>>() {
            Ok(c) => break (radii, c),
            Err(e) if outer < opts.outer_radius / 64.0 => return Err(e),
            Err(_) => outer /= 2.0,
        }
    };
    let (radii, annuli) = contributions;
    let partial_sums = annuli
        .iter()
        .scan(0.0, |s, &x| {
            *s += x;
            Some(*s)
        })
        .collect();
    let ratios: Vec<f64> = annuli.windows(2).map(|w| w[1] / w[0]).collect();
    let tail = &ratios[ratios.len().saturating_sub(opts.tail)..];
    let numeric = if tail.iter().any(|r| !r.is_finite()) {
        AuditVerdict::Inconclusive
    } else if tail.iter().all(|&r| r < opts.converge_ratio) {
        AuditVerdict::Converged
    } else if tail.iter().all(|&r| r >= opts.diverge_ratio) {
        AuditVerdict::Diverges
    } else {
        AuditVerdict::Inconclusive
    };
    Ok(AuditReport {
        point: index,
        q,
        radii,
        annulus: annuli,
        partial_sums,
        ratios,
        numeric,
        analytic: analytic_verdict(p, d, q),
    })
}

/// Integrability of `‖λ_r(k)^{−1}‖^q` over punctured dyadic annuli around each Fermi point.
pub fn integrability_audit(
    op: &PeriodicLatticeOperator,
    points: &[FermiPoint],
    q: u32,
    opts: &AuditOptions,
) -> Result<Vec<AuditReport>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| audit_point(op, i, p, q, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::spectral::fermi::{fermi_points, FermiOptions};

    fn audit(op: &PeriodicLatticeOperator, q: u32) -> AuditReport {
        let pts = fermi_points(op, 0.0, &FermiOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        integrability_audit(op, &pts, q, &AuditOptions::default())
            .unwrap()
            .remove(0)
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn generic_edge_d3_q1_integrable() {
        let r = audit(&models::laplacian(3), 1);
        assert_eq!(r.numeric, AuditVerdict::Converged, "{:?}", r.ratios);
        assert_eq!(r.analytic, Some(true));
        assert!(r.satisfied());
    }

    #[test]
    fn generic_edge_d2_q1_diverges() {
        let r = audit(&models::laplacian(2), 1);
        assert_eq!(r.numeric, AuditVerdict::Diverges, "{:?}", r.ratios);
        assert_eq!(r.analytic, Some(false));
        assert!(!r.satisfied());
    }

    #[test]
    fn generic_edge_d3_q2_diverges() {
        let r = audit(&models::laplacian(3), 2);
        assert_eq!(r.numeric, AuditVerdict::Diverges);
        assert_eq!(r.analytic, Some(false));
    }

    #[test]
    fn dirac_point_q1_integrable_in_2d() {
        let op = models::graphene();
        let pts = fermi_points(&op, 0.0, &FermiOptions::default()).unwrap();
        for r in integrability_audit(&op, &pts, 1, &AuditOptions::default()).unwrap() {
            assert_eq!(r.numeric, AuditVerdict::Converged, "{:?}", r.ratios);
            assert_eq!(r.analytic, None);
        }
    }
}
