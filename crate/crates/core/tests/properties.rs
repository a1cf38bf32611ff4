use std::f64::consts::PI;

use floquet_lrr::divisors::ContinuumSpan;
use floquet_lrr::divisors::{degree, LatticeSpan, RiggedPointDivisor};
use floquet_lrr::floquet::Quasimomentum;
use floquet_lrr::floquet::{fiber_at, verify_plancherel, FloquetGrid};
use floquet_lrr::lattice::{pairing, HoppingTerm, LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use floquet_lrr::linalg::{hermitian_eigenvalues, null_space, singular_values, CMatrix};
use floquet_lrr::liouville::{
    crude_bound, dim_vinf, dim_vp, homogeneous_dim, lrr_bounds, AuditInputs, EdgeData, GrowthSpec,
};
use floquet_lrr::models;
use floquet_lrr::oracles::continuum::{continuum_space_dim, ContinuumGrowth};
use floquet_lrr::oracles::{
    dedekind_shifts, green_function, iterated_twisted_difference, verify_certificate, vinf_dim_oracle, SampledFunction,
};
use floquet_lrr::spectral::{fermi_points, FermiOptions};
use floquet_lrr::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(rng: &mut ChaCha8Rng, dim: usize, cells: usize, radius: i64, n: usize) -> LatticeFunction {
    LatticeFunction::from_entries((0..n).map(|_| {
        let g = (0..dim).map(|_| rng.random_range(-radius..=radius)).collect();
        (
            LatticePoint::new(g, rng.random_range(0..cells)),
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
    }))
}

fn random_op(seed: u64, dim: usize, cells: usize) -> PeriodicLatticeOperator {
    models::random_operator(&mut ChaCha8Rng::seed_from_u64(seed), dim, cells, 6)
}

/// Each random term together with its Hermitian mirror.
fn random_self_adjoint(seed: u64, dim: usize, cells: usize) -> PeriodicLatticeOperator {
    let base = random_op(seed, dim, cells);
    let terms = base
        .terms()
        .iter()
        .flat_map(|t| {
            let neg: Vec<i64> = t.offset.iter().map(|x| -x).collect();
            [
                HoppingTerm::new(t.from_cell, t.to_cell, t.offset.clone(), t.value),
                HoppingTerm::new(t.to_cell, t.from_cell, neg, t.value.conj()),
            ]
        })
        .collect();
    PeriodicLatticeOperator::new(dim, cells, terms, base.shift()).unwrap()
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_is_linear(seed in any::<u64>(), dim in 1usize..=3, cells in 1usize..=3, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let op = random_op(seed, dim, cells);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let u = random_function(&mut rng, dim, cells, 3, 8);
        let v = random_function(&mut rng, dim, cells, 3, 8);
        let (ca, cb) = (Complex64::new(a, 0.3), Complex64::new(b, -0.7));
        let lhs = op.apply(&u.combine(ca, &v, cb));
        let rhs = op.apply(&u).combine(ca, &op.apply(&v), cb);
        prop_assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn transpose_is_an_involution(seed in any::<u64>(), dim in 1usize..=3, cells in 1usize..=3) {
        let op = random_op(seed, dim, cells);
        prop_assert_eq!(op.transpose().transpose(), op);
    }

    #[test]
    fn transpose_is_adjoint_for_the_pairing(seed in any::<u64>(), dim in 1usize..=2, cells in 1usize..=2) {
        let op = random_op(seed, dim, cells);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let u = random_function(&mut rng, dim, cells, 3, 6);
        let v = random_function(&mut rng, dim, cells, 3, 6);
        let lhs = pairing(&op.apply(&u), &v);
        let rhs = pairing(&u, &op.transpose().apply(&v));
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn apply_commutes_with_deck_shifts(seed in any::<u64>(), dim in 1usize..=3, h in prop::collection::vec(-5i64..=5, 3)) {
        let op = random_op(seed, dim, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let u = random_function(&mut rng, dim, 2, 3, 8);
        let h = &h[..dim];
        prop_assert!(op.apply(&u.translate(h)).distance(&op.apply(&u).translate(h)) <= 1e-14);
    }

    #[test]
    fn fiber_of_transpose(seed in any::<u64>(), dim in 1usize..=3, cells in 1usize..=3, k in prop::collection::vec(-PI..PI, 3)) {
        let op = random_op(seed, dim, cells);
        let k = &k[..dim];
        let minus: Vec<f64> = k.iter().map(|x| -x).collect();
        let lhs = fiber_at(&op.transpose(), k);
        let rhs = fiber_at(&op, &minus).transpose();
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-14);
    }

    #[test]
    fn fiber_is_dual_lattice_periodic(seed in any::<u64>(), dim in 1usize..=3, axis in 0usize..3, k in prop::collection::vec(-PI..PI, 3)) {
        let op = random_op(seed, dim, 2);
        let k = &k[..dim];
        let mut shifted = k.to_vec();
        shifted[axis % dim] += 2.0 * PI;
        prop_assert!(max_diff(&fiber_at(&op, k), &fiber_at(&op, &shifted)) <= 1e-12);
    }

    #[test]
    fn self_adjoint_fibers_are_hermitian(seed in any::<u64>(), dim in 1usize..=3, cells in 1usize..=3, k in prop::collection::vec(-PI..PI, 3)) {
        let op = random_self_adjoint(seed, dim, cells);
        prop_assert!(op.is_self_adjoint());
        let a = fiber_at(&op, &k[..dim]);
        prop_assert!(max_diff(&a, &a.adjoint()) <= 1e-14);
    }

    #[test]
    fn real_symmetric_bands_are_even(seed in any::<u64>(), dim in 1usize..=2, k in prop::collection::vec(-PI..PI, 2)) {
        // real symmetric hoppings give A(−k) = conj A(k), so the spectra coincide
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms: Vec<HoppingTerm> = (0..5)
            .flat_map(|_| {
                let g: Vec<i64> = (0..dim).map(|_| rng.random_range(-1..=1)).collect();
                let neg: Vec<i64> = g.iter().map(|x| -x).collect();
                let (i, j, a) = (rng.random_range(0..2), rng.random_range(0..2), rng.random_range(-1.0..1.0));
                [HoppingTerm::real(i, j, g, a), HoppingTerm::real(j, i, neg, a)]
            })
            .collect();
        let op = PeriodicLatticeOperator::new(dim, 2, terms, 0.0).unwrap();
        let k = &k[..dim];
        let minus: Vec<f64> = k.iter().map(|x| -x).collect();
        let a = hermitian_eigenvalues(&fiber_at(&op, k));
        let b = hermitian_eigenvalues(&fiber_at(&op, &minus));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn plancherel_on_the_window(seed in any::<u64>(), dim in 1usize..=2, cells in 1usize..=2) {
        let grid = FloquetGrid::new(dim, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(&mut rng, dim, cells, grid.half_width(), 10);
        let (lhs, rhs) = verify_plancherel(&f, cells, &grid);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn degree_antisymmetry_and_secondary_bounds(seed in any::<u64>(), np in 0usize..4, nm in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = models::random_operator(&mut rng, 2, 2, 6);
        let mut side = |count: usize| {
            let pts: Vec<LatticePoint> = (0..count)
                .map(|_| LatticePoint::new(vec![rng.random_range(-3..=3), rng.random_range(-3..=3)], rng.random_range(0..2)))
                .collect();
            // a random subspace of the deltas, of dimension at most |D|
            let pts = LatticeSpan::deltas(pts).points().to_vec();
            let keep = if pts.is_empty() { 0 } else { rng.random_range(1..=pts.len()) };
            let basis: Vec<LatticeFunction> = (0..keep)
                .map(|_| LatticeFunction::from_entries(pts.iter().map(|p| (p.clone(), Complex64::new(rng.random_range(-1.0..1.0), 0.0)))))
                .collect();
            LatticeSpan::new(pts, basis).unwrap()
        };
        let (plus, minus) = (side(np), side(nm));
        let Ok(mu) = RiggedPointDivisor::new(plus, minus) else { return Ok(()); };
        let a = degree(&op, &mu).unwrap();
        let b = degree(&op.transpose(), &mu.inverse()).unwrap();
        prop_assert_eq!(a.degree, -b.degree);
        prop_assert!(a.ell_plus >= a.ell_tilde_plus && a.ell_minus >= a.ell_tilde_minus);
        prop_assert_eq!(degree(&op, &RiggedPointDivisor::<LatticeSpan>::trivial()).unwrap().degree, 0);
    }

    #[test]
    fn dim_vp_is_monotone(d in 1usize..=3, n1 in 0.0..6.0f64, dn in 0.0..3.0f64, pi in 0usize..4, dp in 0usize..4) {
        let ps = [1.0, 2.0, 4.0, f64::INFINITY];
        let edges = [EdgeData { multiplicity: 1, ell0: Some(2), det_leading_nonzero: true },
                     EdgeData { multiplicity: 2, ell0: Some(1), det_leading_nonzero: true }];
        let (p1, p2) = (ps[pi], ps[(pi + dp).min(3)]);
        let at = |p: f64, n: f64| {
            let g = if p.is_infinite() { GrowthSpec::infinite(n) } else { GrowthSpec::new(p, n).unwrap() };
            dim_vp(&edges, &g, d).unwrap().value
        };
        prop_assert!(at(p1, n1) <= at(p1, n1 + dn));
        prop_assert!(at(p1, n1) <= at(p2, n1));
    }

    #[test]
    fn dim_vinf_discrete_derivative(d in 1usize..=4, n in 1usize..8, ells in prop::collection::vec((1usize..4, 1usize..4), 1..4)) {
        let edges: Vec<EdgeData> = ells.iter().map(|&(m, l)| EdgeData { multiplicity: m, ell0: Some(l), det_leading_nonzero: true }).collect();
        let diff = dim_vinf(&edges, n, d).unwrap().value as i64 - dim_vinf(&edges, n - 1, d).unwrap().value as i64;
        let want: i64 = ells.iter().map(|&(m, l)| {
            let low = if n >= l { homogeneous_dim(d, n - l) } else { 0 };
            m as i64 * (homogeneous_dim(d, n) as i64 - low as i64)
        }).sum();
        prop_assert_eq!(diff, want);
    }

    #[test]
    fn trivial_divisor_bounds_coincide(pi in 0usize..4, n in 0.0..4.0f64) {
        let p = [1.0, 2.0, 4.0, f64::INFINITY][pi];
        let g = if p.is_infinite() { GrowthSpec::infinite(n) } else { GrowthSpec::new(p, n).unwrap() };
        let op = models::laplacian(3);
        let edges = [EdgeData { multiplicity: 1, ell0: Some(2), det_leading_nonzero: true }];
        let r = lrr_bounds(&op, &RiggedPointDivisor::<LatticeSpan>::trivial(), &g, 3, &edges, &AuditInputs::default()).unwrap();
        if let (Some(lo), Some(hi)) = (r.lower_bound, r.upper_bound) {
            let dim = dim_vp(&edges, &g, 3).unwrap().value as i64;
            prop_assert_eq!(lo, dim);
            prop_assert_eq!(hi, dim);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dedekind_certificate_holds(seed in any::<u64>(), d in 1usize..=3, ell in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ks: Vec<Vec<f64>> = (0..ell).map(|_| (0..d).map(|_| rng.random_range(-PI..PI)).collect()).collect();
        if let Ok(cert) = dedekind_shifts(&ks) {
            prop_assert!(cert.constant > 0.0);
            prop_assert_eq!(verify_certificate(&ks, &cert, 1000, &mut rng), 0);
        }
    }

    #[test]
    fn vinf_oracle_agrees_and_respects_crude_bound(v in 0.1..2.0f64, d in 1usize..=2, n in 0usize..=3) {
        let op = models::dimer_chain_at_edge(d, v);
        let pts = fermi_points(&op, 0.0, &FermiOptions::default()).unwrap();
        let ks: Vec<Vec<f64>> = pts.iter().map(|p| p.coordinates()).collect();
        let edges: Vec<EdgeData> = pts.iter().map(EdgeData::from).collect();
        let oracle = vinf_dim_oracle(&op, &ks, n).unwrap();
        prop_assert_eq!(oracle.total as u64, dim_vinf(&edges, n, d).unwrap().value);
        let kernels: Vec<usize> = ks.iter().map(|k| null_space(&fiber_at(&op, k), 1e-9).unwrap().ncols()).collect();
        prop_assert!(oracle.total as u64 <= crude_bound(n, d, &kernels));
    }

    #[test]
    fn vinf_kernel_is_annihilated_by_twisted_differences(seed in any::<u64>(), d in 1usize..=2, n in 0usize..=2) {
        let op = models::laplacian(d);
        let oracle = vinf_dim_oracle(&op, &[vec![0.0; d]], n).unwrap();
        let block = &oracle.blocks[0];
        let k = Quasimomentum::real(&vec![0.0; d]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for col in 0..block.nullity() {
            let f = block.materialize(col, 6);
            let u = SampledFunction::centered(&f, d, 1, 6);
            let shifts: Vec<Vec<i64>> = (0..=n).map(|_| (0..d).map(|_| rng.random_range(-1..=1)).collect()).collect();
            let out = iterated_twisted_difference(&u, &shifts, &k).unwrap();
            prop_assert!(out.max_abs() <= 1e-9 * u.max_abs().max(1.0));
        }
    }

    #[test]
    fn continuum_dimension_is_translation_invariant(seed in any::<u64>(), shift in prop::collection::vec(-3.0..3.0f64, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let build = |s: &[f64]| {
            let mv = |p: &Vec<f64>| p.iter().zip(s).map(|(a, b)| a + b).collect::<Vec<f64>>();
            let plus = ContinuumSpan::new(3, vec![(mv(&pts[0]), vec![vec![0; 3]]), (mv(&pts[1]), vec![vec![0; 3]])]).unwrap();
            let minus = ContinuumSpan::new(3, vec![(mv(&pts[2]), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])]).unwrap();
            RiggedPointDivisor::new(plus, minus).unwrap()
        };
        let g = ContinuumGrowth::Growth(GrowthSpec::infinite(1.0));
        let (Ok(a), Ok(b)) = (continuum_space_dim(&build(&[0.0; 3]), &g), continuum_space_dim(&build(&shift), &g)) else {
            return Ok(());
        };
        prop_assert_eq!(a, b);
    }

    #[test]
    fn green_function_solves_the_equation(c in 0.5..4.0f64) {
        let op = models::laplacian(2).with_shift(-c);
        let g = green_function(&op, &LatticePoint::origin(2), 12).unwrap();
        prop_assert!(g.residual <= 1e-8);
    }

    #[test]
    fn fermi_points_mirror_under_transpose(b in prop::collection::vec(0.0..0.8f64, 2), d in 1usize..=2) {
        let op = models::two_cell_drift_operator(d, [0.0, 0.0], &b[..d]);
        let pts = fermi_points(&op, 0.0, &FermiOptions::default()).unwrap();
        let dual = fermi_points(&op.transpose(), 0.0, &FermiOptions::default()).unwrap();
        for p in &pts {
            let minus = p.k.neg();
            let m = dual.iter().find(|q| q.k.approx_eq(&minus, 1e-6));
            prop_assert!(m.is_some(), "no mirror for {:?}", p.coordinates());
            prop_assert!((m.unwrap().sigma_min - p.sigma_min).abs() <= 1e-9);
        }
        let smin = |k: &[f64]| singular_values(&fiber_at(&op, k)).last().copied().unwrap();
        for p in &pts {
            prop_assert!(smin(&p.coordinates()) <= 1e-9);
        }
    }
}
