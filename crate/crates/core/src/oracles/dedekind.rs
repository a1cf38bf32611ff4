//! Shift tuples separating distinct unitary characters of `ℤᵈ`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{Quasimomentum, QUASIMOMENTUM_TOL};
use crate::linalg::{smallest_singular_value, CMatrix};
use crate::Complex64;

pub const MAX_SEARCH_RADIUS: i64 = 20;
pub const ACCEPT_SIGMA: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DedekindCertificate {
    pub shifts: Vec<Vec<i64>>,
    pub sigma_min: f64,
    /// `max_s |Σ_r v_r e^{ik_r·g_s}| ≥ constant · max_r |v_r|`.
    pub constant: f64,
    pub radius: i64,
}

/// `W[s][r] = e^{ik_r·g_s}`.
pub fn character_matrix(ks: &[Quasimomentum], shifts: &[Vec<i64>]) -> CMatrix {
    CMatrix::from_fn(shifts.len(), ks.len(), |s, r| ks[r].character(&shifts[s]))
}

/// Box points ordered by ℓ¹ norm, ties broken lexicographically by
/// `(|g_1|, sign, |g_2|, sign, …)` with positive entries first.
fn candidates(d: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let key = |g: &Vec<i64>| {
        let l1: i64 = g.iter().map(|x| x.abs()).sum();
        let tie: Vec<(i64, bool)> = g.iter().map(|&x| (x.abs(), x < 0)).collect();
        (l1, tie)
    };
    pts.sort_by_key(key);
    pts
}

/// Greedy search: `g₁ = 0`, then each further shift maximizes `σ_min` of the
/// leading square block of `W`. The radius grows until the full matrix is
/// certified.
pub fn dedekind_shifts(ks: &[Vec<f64>]) -> Result<DedekindCertificate> {
    let ell = ks.len();
    if ell == 0 {
        return Err(Error::InvalidInput("at least one character is required".into()));
    }
    let d = ks[0].len();
    if d == 0 || ks.iter().any(|k| k.len() != d) {
        return Err(Error::InvalidInput("characters must share a positive dimension".into()));
    }
    let qs: Vec<Quasimomentum> = ks.iter().map(|k| Quasimomentum::real(k)).collect();
    for (a, qa) in qs.iter().enumerate() {
        if qs[..a].iter().any(|qb| qa.approx_eq(qb, QUASIMOMENTUM_TOL)) {
            return Err(Error::InvalidInput(
                "characters must be distinct modulo the dual lattice".into(),
            ));
        }
    }
    for radius in 1..=MAX_SEARCH_RADIUS {
        let cands = candidates(d, radius);
        let mut shifts = vec![vec![0; d]];
        for s in 1..ell {
            let mut best: Option<(f64, &Vec<i64>)> = None;
            for g in &cands {
                let mut trial = shifts.clone();
                trial.push(g.clone());
                let sigma = smallest_singular_value(&character_matrix(&qs[..=s], &trial));
                if best.is_none_or(|(b, _)| sigma > b) {
                    best = Some((sigma, g));
                }
            }
            shifts.push(best.expect("candidate set is non-empty").1.clone());
        }
        let sigma_min = smallest_singular_value(&character_matrix(&qs, &shifts));
        if sigma_min >= ACCEPT_SIGMA {
            return Ok(DedekindCertificate {
                shifts,
                sigma_min,
                constant: sigma_min / ell as f64,
                radius,
            });
        }
    }
    Err(Error::SearchExhausted(MAX_SEARCH_RADIUS))
}

/// Checks the certified inequality on `trials` random complex vectors; returns
/// the number of violations.
pub fn verify_certificate<R: Rng>(ks: &[Vec<f64>], cert: &DedekindCertificate, trials: usize, rng: &mut R) -> usize {
    let qs: Vec<Quasimomentum> = ks.iter().map(|k| Quasimomentum::real(k)).collect();
    let w = character_matrix(&qs, &cert.shifts);
    (0..trials)
        .filter(|_| {
            let v = crate::linalg::CVector::from_fn(qs.len(), |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let lhs = (&w * &v).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            lhs < cert.constant * vmax
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn single_character() {
        let c = dedekind_shifts(&[vec![0.0]]).unwrap();
        assert_eq!(c.shifts, vec![vec![0]]);
        assert!((c.constant - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_and_pi() {
        let c = dedekind_shifts(&[vec![0.0], vec![PI]]).unwrap();
        assert_eq!(c.shifts, vec![vec![0], vec![1]]);
        assert!((c.sigma_min - 2f64.sqrt()).abs() < 1e-12);
        assert!((c.constant - 2f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_characters_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ks: Vec<Vec<f64>> = (0..4)
            .map(|_| vec![rng.random_range(-PI..PI), rng.random_range(-PI..PI)])
            .collect();
        let c = dedekind_shifts(&ks).unwrap();
        assert!(c.constant > 0.0);
        assert_eq!(verify_certificate(&ks, &c, 1000, &mut rng), 0);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(dedekind_shifts(&[vec![0.1], vec![0.1 + 2.0 * PI]]).is_err());
    }

    #[test]
    fn candidate_order_prefers_positive() {
        let c = candidates(1, 2);
        assert_eq!(c, vec![vec![0], vec![1], vec![-1], vec![2], vec![-2]]);
    }
}
