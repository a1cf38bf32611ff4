//! Band structure on uniform grids of the Brillouin zone and spectrum assembly.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::optimize::nelder_mead;
use crate::error::{Error, Result};
use crate::floquet::fiber_at;
use crate::lattice::PeriodicLatticeOperator;
use crate::linalg::{eigen_general, hermitian_eigenvalues, smallest_singular_value};
use crate::Complex64;

pub const DEFAULT_BAND_GRID: usize = 33;

/// Inclusive grid `k_a = −π + 2π·i/(M−1)`, `i = 0..M`, per axis (contains `0` and `±π` for odd `M`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandGrid {
    pub dim: usize,
    pub m: usize,
}

impl BandGrid {
    pub fn new(dim: usize, m: usize) -> Result<Self> {
        if m < 2 || dim == 0 {
            return Err(Error::InvalidInput(format!(
                "band grid needs M ≥ 2 and d ≥ 1, got M={m}, d={dim}"
            )));
        }
        Ok(BandGrid { dim, m })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / (self.m - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.m;
            idx /= self.m;
        }
        out
    }

    pub fn flat(&self, index: &[usize]) -> usize {
        index.iter().fold(0, |acc, &i| acc * self.m + i)
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.index(idx)
            .iter()
            .map(|&i| -PI + self.spacing() * i as f64)
            .collect()
    }

    /// Neighbours along each axis, wrapping across the seam (`i = 0` and `i = M−1` coincide mod 2π).
    pub fn neighbours(&self, idx: usize) -> Vec<usize> {
        let base = self.index(idx);
        let mut out = Vec::with_capacity(2 * self.dim);
        let period = self.m - 1;
        for a in 0..self.dim {
            for step in [1usize, period - 1] {
                let mut n = base.clone();
                n[a] = (base[a] % period + step) % period;
                out.push(self.flat(&n));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum BandValues {
    /// Sorted real eigenvalues per grid point (self-adjoint operators).
    Real(Vec<Vec<f64>>),
    /// Complex eigenvalues sorted by real then imaginary part.
    Complex(Vec<Vec<Complex64>>),
}

#[derive(Clone, Debug)]
pub struct BandStructure {
    pub grid: BandGrid,
    pub points: Vec<Vec<f64>>,
    pub values: BandValues,
}

impl BandStructure {
    pub fn real_bands(&self) -> Option<&[Vec<f64>]> {
        match &self.values {
            BandValues::Real(v) => Some(v),
            BandValues::Complex(_) => None,
        }
    }
}

/// Sorted real bands of a self-adjoint operator.
pub fn band_structure(op: &PeriodicLatticeOperator, m: usize) -> Result<BandStructure> {
    if !op.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    let grid = BandGrid::new(op.dim(), m)?;
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.point(i)).collect();
    let values = points
        .par_iter()
        .map(|k| hermitian_eigenvalues(&fiber_at(op, k)))
        .collect();
    Ok(BandStructure {
        grid,
        points,
        values: BandValues::Real(values),
    })
}

/// Eigenvalue clouds of a general operator.
pub fn band_cloud(op: &PeriodicLatticeOperator, m: usize) -> Result<BandStructure> {
    let grid = BandGrid::new(op.dim(), m)?;
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.point(i)).collect();
    let values = points
        .par_iter()
        .map(|k| {
            let mut ev = eigen_general(&fiber_at(op, k)).values;
            ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            ev
        })
        .collect();
    Ok(BandStructure {
        grid,
        points,
        values: BandValues::Complex(values),
    })
}

/// Closed interval of the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Spectrum as a union of disjoint band intervals. Each band's grid extrema are
/// refined by local search on `λ_j(k)` to `tol`; overlapping bands are merged.
pub fn spectrum_intervals(op: &PeriodicLatticeOperator, bands: &BandStructure, tol: f64) -> Result<Vec<Interval>> {
    let values = bands.real_bands().ok_or(Error::NotSelfAdjoint)?;
    let nb = op.cells();
    let step = bands.grid.spacing();
    let band = |j: usize, k: &[f64]| hermitian_eigenvalues(&fiber_at(op, k))[j];
    let mut per_band: Vec<Interval> = (0..nb)
        .into_par_iter()
        .map(|j| {
            let (imin, imax) = values.iter().enumerate().fold((0, 0), |(a, b), (i, v)| {
                (
                    if v[j] < values[a][j] { i } else { a },
                    if v[j] > values[b][j] { i } else { b },
                )
            });
            let (_, lo) = nelder_mead(|k| band(j, k), &bands.points[imin], step / 4.0, tol * tol, tol, 4000);
            let (_, hi) = nelder_mead(|k| -band(j, k), &bands.points[imax], step / 4.0, tol * tol, tol, 4000);
            Interval {
                lo: lo.min(values[imin][j]),
                hi: (-hi).max(values[imax][j]),
            }
        })
        .collect();
    per_band.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut merged: Vec<Interval> = Vec::new();
    for iv in per_band {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => merged.push(iv),
        }
    }
    Ok(merged)
}

/// Open gaps between consecutive spectral intervals.
pub fn gaps(intervals: &[Interval]) -> Vec<(f64, f64)> {
    intervals.windows(2).map(|w| (w[0].hi, w[1].lo)).collect()
}

/// `min_k σ_min(A(k))`: the distance from 0 to the spectrum for self-adjoint
/// operators, and in general a lower bound certifying `0 ∉ σ(A)` when positive.
pub fn spectral_margin(op: &PeriodicLatticeOperator, m: usize) -> Result<f64> {
    let grid = BandGrid::new(op.dim(), m)?;
    let sigma = |k: &[f64]| smallest_singular_value(&fiber_at(op, k));
    let samples: Vec<(usize, f64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| (i, sigma(&grid.point(i))))
        .collect();
    let (best, value) = samples
        .iter()
        .copied()
        .fold((0, f64::INFINITY), |acc, s| if s.1 < acc.1 { s } else { acc });
    let (_, refined) = nelder_mead(sigma, &grid.point(best), grid.spacing() / 4.0, 1e-20, 1e-10, 4000);
    Ok(refined.min(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::HoppingTerm;
    use crate::models;

    #[test]
    fn laplacian_1d_bands() {
        let b = band_structure(&models::laplacian(1), 9).unwrap();
        for (k, v) in b.points.iter().zip(b.real_bands().unwrap()) {
            assert!((v[0] - (2.0 - 2.0 * k[0].cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_general_band_is_the_symbol() {
        let op = models::drift_laplacian_1d(0.3);
        let b = band_cloud(&op, 7).unwrap();
        let BandValues::Complex(v) = &b.values else { panic!() };
        for (k, ev) in b.points.iter().zip(v) {
            let z = Complex64::new(0.0, k[0]);
            let expect = 1.7 - 0.7 * z.exp() - (-z).exp();
            assert!((ev[0] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn laplacian_2d_extremes() {
        let b = band_structure(&models::laplacian(2), 9).unwrap();
        let v = b.real_bands().unwrap();
        let (imin, imax) = (0..v.len()).fold((0, 0), |(a, c), i| {
            (
                if v[i][0] < v[a][0] { i } else { a },
                if v[i][0] > v[c][0] { i } else { c },
            )
        });
        assert!(v[imin][0].abs() < 1e-14 && b.points[imin].iter().all(|x| x.abs() < 1e-14));
        assert!((v[imax][0] - 8.0).abs() < 1e-14);
    }

    #[test]
    fn non_self_adjoint_rejected_in_sorted_mode() {
        assert!(matches!(
            band_structure(&models::drift_laplacian_1d(0.5), 5),
            Err(Error::NotSelfAdjoint)
        ));
    }

    #[test]
    fn laplacian_spectrum_interval() {
        let op = models::laplacian(1);
        let iv = spectrum_intervals(&op, &band_structure(&op, 33).unwrap(), 1e-9).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].lo.abs() < 1e-6 && (iv[0].hi - 4.0).abs() < 1e-6);
    }

    #[test]
    fn shifted_laplacian_excludes_zero() {
        for d in 1..=3 {
            let op = models::laplacian(d).shifted(-1.0);
            let iv = spectrum_intervals(&op, &band_structure(&op, 9).unwrap(), 1e-9).unwrap();
            assert_eq!(iv.len(), 1);
            assert!((iv[0].lo - 1.0).abs() < 1e-6 && (iv[0].hi - (4 * d + 1) as f64).abs() < 1e-6);
            assert!(!iv[0].contains(0.0));
        }
    }

    #[test]
    fn alternating_potential_opens_gap() {
        // two-site cell of the 1-D Laplacian + 5 with on-site potential ±1
        let terms = vec![
            HoppingTerm::real(0, 0, vec![0], 8.0),
            HoppingTerm::real(1, 1, vec![0], 6.0),
            HoppingTerm::real(0, 1, vec![0], -1.0),
            HoppingTerm::real(1, 0, vec![0], -1.0),
            HoppingTerm::real(0, 1, vec![-1], -1.0),
            HoppingTerm::real(1, 0, vec![1], -1.0),
        ];
        let op = PeriodicLatticeOperator::new(1, 2, terms, 0.0).unwrap();
        let iv = spectrum_intervals(&op, &band_structure(&op, 33).unwrap(), 1e-10).unwrap();
        assert_eq!(iv.len(), 2);
        // fiber [[8, −1−e^{−ik}], [−1−e^{ik}, 6]]: eigenvalues 7 ± √(1 + 2 + 2cos k)
        let exact = [7.0 - 5f64.sqrt(), 6.0, 8.0, 7.0 + 5f64.sqrt()];
        let got = [iv[0].lo, iv[0].hi, iv[1].lo, iv[1].hi];
        for (a, b) in exact.iter().zip(got) {
            assert!((a - b).abs() < 1e-6, "{exact:?} vs {got:?}");
        }
        assert_eq!(gaps(&iv).len(), 1);
    }

    #[test]
    fn neighbours_wrap_the_seam() {
        let g = BandGrid::new(1, 5).unwrap();
        let n = g.neighbours(0);
        assert!(n.contains(&1) && n.contains(&3));
    }
}
