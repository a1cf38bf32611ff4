//! Reference operators used throughout the tests, the acceptance suite and the CLI examples.

use crate::lattice::{HoppingTerm, PeriodicLatticeOperator};
use crate::Complex64;

fn unit(dim: usize, axis: usize, sign: i64) -> Vec<i64> {
    let mut e = vec![0; dim];
    e[axis] = sign;
    e
}

/// Discrete Laplacian `(Lu)(g) = 2d·u(g) − Σ_{|h|=1} u(g+h)` on ℤᵈ with a one-vertex cell.
pub fn laplacian(dim: usize) -> PeriodicLatticeOperator {
    let mut terms = vec![HoppingTerm::real(0, 0, vec![0; dim], 2.0 * dim as f64)];
    for axis in 0..dim {
        for s in [-1, 1] {
            terms.push(HoppingTerm::real(0, 0, unit(dim, axis, s), -1.0));
        }
    }
    PeriodicLatticeOperator::new(dim, 1, terms, 0.0).expect("laplacian is well formed")
}

/// Nearest-neighbour honeycomb model with unit hopping. Its fiber is
/// `[[0, −f(k)], [−conj f(k), 0]]` with `f(k) = 1 + e^{ik₁} + e^{ik₂}`, so the two
/// bands touch conically at `±(2π/3, −2π/3)` on the level 0.
pub fn graphene() -> PeriodicLatticeOperator {
    let mut terms = Vec::new();
    for h in [vec![0, 0], vec![1, 0], vec![0, 1]] {
        let neg: Vec<i64> = h.iter().map(|x| -x).collect();
        terms.push(HoppingTerm::real(0, 1, h, -1.0));
        terms.push(HoppingTerm::real(1, 0, neg, -1.0));
    }
    PeriodicLatticeOperator::new(2, 2, terms, 0.0).expect("graphene is well formed")
}

/// Dirac points of [`graphene`].
pub fn graphene_dirac_points() -> [[f64; 2]; 2] {
    let t = 2.0 * std::f64::consts::PI / 3.0;
    [[t, -t], [-t, t]]
}

/// Two-vertex chain along the first axis with alternating on-site potential `±v`
/// (on top of the Laplacian diagonal), plus ordinary Laplacian coupling along
/// the remaining axes. Bands: `2 ± sqrt(v² + 2 + 2cos k₁) + Σ_{i≥2}(2 − 2cos kᵢ)`.
pub fn dimer_chain(dim: usize, v: f64) -> PeriodicLatticeOperator {
    let zero = vec![0; dim];
    let extra = 2.0 * (dim as f64 - 1.0);
    let mut terms = vec![
        HoppingTerm::real(0, 0, zero.clone(), 2.0 + v + extra),
        HoppingTerm::real(1, 1, zero.clone(), 2.0 - v + extra),
        HoppingTerm::real(0, 1, zero.clone(), -1.0),
        HoppingTerm::real(1, 0, zero, -1.0),
        HoppingTerm::real(1, 0, unit(dim, 0, 1), -1.0),
        HoppingTerm::real(0, 1, unit(dim, 0, -1), -1.0),
    ];
    for axis in 1..dim {
        for cell in 0..2 {
            for s in [-1, 1] {
                terms.push(HoppingTerm::real(cell, cell, unit(dim, axis, s), -1.0));
            }
        }
    }
    PeriodicLatticeOperator::new(dim, 2, terms, 0.0).expect("dimer chain is well formed")
}

/// Bottom of the spectrum of [`dimer_chain`], attained only at `k = 0`.
pub fn dimer_chain_bottom(v: f64) -> f64 {
    2.0 - (v * v + 4.0).sqrt()
}

/// [`dimer_chain`] shifted so that its non-degenerate lower band edge sits at level 0.
pub fn dimer_chain_at_edge(dim: usize, v: f64) -> PeriodicLatticeOperator {
    dimer_chain(dim, v).with_shift(dimer_chain_bottom(v))
}

/// One-dimensional Laplacian plus the forward-difference drift `b·(u(x+1) − u(x))`.
pub fn drift_laplacian_1d(b: f64) -> PeriodicLatticeOperator {
    PeriodicLatticeOperator::new(
        1,
        1,
        vec![
            HoppingTerm::real(0, 0, vec![0], 2.0 - b),
            HoppingTerm::real(0, 0, vec![1], -1.0 + b),
            HoppingTerm::real(0, 0, vec![-1], -1.0),
        ],
        0.0,
    )
    .expect("drift laplacian is well formed")
}

/// Laplacian on ℤᵈ with a two-vertex cell (the cells are the two sublattices of a
/// chain along the first axis), a non-negative on-site potential `c` and a
/// constant drift `b` along every axis.
pub fn two_cell_drift_operator(dim: usize, potential: [f64; 2], drift: &[f64]) -> PeriodicLatticeOperator {
    let zero = vec![0; dim];
    let mut terms = Vec::new();
    let bsum: f64 = drift.iter().sum();
    for cell in 0..2 {
        terms.push(HoppingTerm::real(
            cell,
            cell,
            zero.clone(),
            2.0 * dim as f64 - bsum + potential[cell],
        ));
    }
    // axis 0 alternates between the two cells
    terms.push(HoppingTerm::real(0, 1, zero.clone(), -1.0 + drift[0]));
    terms.push(HoppingTerm::real(1, 0, unit(dim, 0, 1), -1.0 + drift[0]));
    terms.push(HoppingTerm::real(0, 1, unit(dim, 0, -1), -1.0));
    terms.push(HoppingTerm::real(1, 0, zero, -1.0));
    for axis in 1..dim {
        for cell in 0..2 {
            terms.push(HoppingTerm::real(cell, cell, unit(dim, axis, 1), -1.0 + drift[axis]));
            terms.push(HoppingTerm::real(cell, cell, unit(dim, axis, -1), -1.0));
        }
    }
    PeriodicLatticeOperator::new(dim, 2, terms, 0.0).expect("two-cell drift operator is well formed")
}

/// Complex-coefficient operator with random hoppings in a radius-1 box, for property tests.
pub fn random_operator<R: rand::Rng>(rng: &mut R, dim: usize, cells: usize, nterms: usize) -> PeriodicLatticeOperator {
    let terms = (0..nterms)
        .map(|_| {
            let offset = (0..dim).map(|_| rng.random_range(-1..=1)).collect();
            HoppingTerm::new(
                rng.random_range(0..cells),
                rng.random_range(0..cells),
                offset,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    PeriodicLatticeOperator::new(dim, cells, terms, rng.random_range(-1.0..1.0))
        .expect("random operator is well formed")
}
