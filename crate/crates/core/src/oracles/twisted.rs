//! Twisted differences `Δ_{g;k}u(x) = e^{−ik·g}u(x+g) − u(x)` on sampled windows.

use crate::error::{Error, Result};
use crate::floquet::Quasimomentum;
use crate::lattice::{LatticeFunction, LatticePoint};

/// A function known on the deck box `lo ≤ g ≤ hi` (componentwise) times the cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub cells: usize,
    pub values: LatticeFunction,
}

impl SampledFunction {
    /// Restricts `f` to the box `‖g‖_∞ ≤ radius`.
    pub fn centered(f: &LatticeFunction, dim: usize, cells: usize, radius: i64) -> Self {
        let values = LatticeFunction::from_entries(
            f.iter()
                .filter(|(p, _)| p.g.iter().all(|x| x.abs() <= radius))
                .map(|(p, v)| (p.clone(), *v)),
        );
        SampledFunction {
            lo: vec![-radius; dim],
            hi: vec![radius; dim],
            cells,
            values,
        }
    }

    pub fn contains(&self, g: &[i64]) -> bool {
        g.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.max_abs()
    }

    fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (&a, &b) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (a..=b).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// `Δ_{g;k}u` on the part of the window where `x + g` is still sampled.
pub fn twisted_difference(u: &SampledFunction, g: &[i64], k: &Quasimomentum) -> Result<SampledFunction> {
    if g.len() != u.lo.len() || k.dim() != g.len() {
        return Err(Error::InvalidInput(
            "shift and quasimomentum must match the window dimension".into(),
        ));
    }
    let lo: Vec<i64> = u.lo.iter().zip(g).map(|(a, s)| (*a).max(a - s)).collect();
    let hi: Vec<i64> = u.hi.iter().zip(g).map(|(b, s)| (*b).min(b - s)).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err(Error::WindowUnderflow(g.to_vec()));
    }
    let twist = k.character(g).inv();
    let mut out = SampledFunction {
        lo,
        hi,
        cells: u.cells,
        values: LatticeFunction::new(),
    };
    for x in out.points() {
        for c in 0..u.cells {
            let p = LatticePoint::new(x.clone(), c);
            let v = twist * u.values.get(&p.shifted(g)) - u.values.get(&p);
            out.values.set(p, v);
        }
    }
    Ok(out)
}

/// `Δ_{g₁,…,g_r;k} = Δ_{g_r;k} ∘ ⋯ ∘ Δ_{g₁;k}`.
pub fn iterated_twisted_difference(
    u: &SampledFunction,
    shifts: &[Vec<i64>],
    k: &Quasimomentum,
) -> Result<SampledFunction> {
    shifts
        .iter()
        .try_fold(u.clone(), |acc, g| twisted_difference(&acc, g, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::vinf::FloquetPolynomialBasis;
    use crate::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(dim: usize, radius: i64, f: impl Fn(&[i64]) -> Complex64) -> SampledFunction {
        let mut values = LatticeFunction::new();
        let w = SampledFunction {
            lo: vec![-radius; dim],
            hi: vec![radius; dim],
            cells: 1,
            values: LatticeFunction::new(),
        };
        for g in w.points() {
            values.set(LatticePoint::new(g.clone(), 0), f(&g));
        }
        SampledFunction { values, ..w }
    }

    #[test]
    fn bloch_wave_is_annihilated() {
        let k = Quasimomentum::real(&[0.7, -1.3]);
        let u = sample(2, 4, |g| k.character(g));
        let du = twisted_difference(&u, &[1, 2], &k).unwrap();
        assert!(du.max_abs() < 1e-14);
    }

    #[test]
    fn linear_function_difference() {
        let k = Quasimomentum::real(&[0.0]);
        let u = sample(1, 5, |g| Complex64::new(g[0] as f64, 0.0));
        let du = twisted_difference(&u, &[1], &k).unwrap();
        assert_eq!(du.lo, vec![-5]);
        assert_eq!(du.hi, vec![4]);
        for (_, v) in du.values.iter() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let d2 = twisted_difference(&du, &[1], &k).unwrap();
        assert!(d2.max_abs() < 1e-15);
    }

    #[test]
    fn underflow_is_reported() {
        let k = Quasimomentum::real(&[0.0]);
        let u = sample(1, 1, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(
            twisted_difference(&u, &[3], &k),
            Err(Error::WindowUnderflow(_))
        ));
    }

    #[test]
    fn basis_elements_have_order_n_plus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = Quasimomentum::real(&[0.4, 2.1]);
        let n = 2;
        let basis = FloquetPolynomialBasis::new(k.clone(), n, 1);
        for idx in 0..basis.len() {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
            coeffs[idx] = Complex64::new(1.0, 0.0);
            let u = SampledFunction::centered(&basis.materialize(&coeffs, 6), 2, 1, 6);
            for _ in 0..5 {
                let shifts: Vec<Vec<i64>> = (0..=n)
                    .map(|_| vec![rng.random_range(-1..=1), rng.random_range(-1..=1)])
                    .collect();
                let du = iterated_twisted_difference(&u, &shifts, &k).unwrap();
                assert!(du.max_abs() < 1e-9 * u.max_abs());
            }
        }
    }
}
