//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process exits
//! non-zero when any criterion fails.

use std::time::{Duration, Instant};

use floquet_lrr::divisors::{
    degree, point_divisor, point_divisor_degree_closed_form, LatticeSpan, RiggedPointDivisor, Symbol,
};
use floquet_lrr::floquet::{fiber_at, FloquetGrid, Quasimomentum};
use floquet_lrr::lattice::{LatticeFunction, LatticePoint, PeriodicLatticeOperator};
use floquet_lrr::liouville::{dim_vinf, dim_vp, EdgeData, GrowthSpec};
use floquet_lrr::models;
use floquet_lrr::oracles::{
    dedekind_shifts, green_function, negative_divisor_equality_experiment, riemann_roch_experiment, rrl_gap_experiment,
    truncated_l_dim_estimate, verify_certificate, vinf_dim_oracle,
};
use floquet_lrr::spectral::{
    band_structure, fermi_points, maximize_principal, principal_eigenvalue, spectrum_intervals, FermiOptions,
    PrincipalOptions,
};
use floquet_lrr::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < limit, format!("runtime {t:?} exceeds {limit:?}"))?;
    Ok(t)
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn spectrum_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for d in 1..=3 {
        let op = models::laplacian(d);
        let bands = band_structure(&op, 33).map_err(|e| e.to_string())?;
        let iv = spectrum_intervals(&op, &bands, 1e-10).map_err(|e| e.to_string())?;
        check(iv.len() == 1, format!("d={d}: {} intervals", iv.len()))?;
        worst = worst.max(iv[0].lo.abs()).max((iv[0].hi - 4.0 * d as f64).abs());
    }
    check(worst <= 1e-6, format!("endpoint error {worst:e}"))?;
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("endpoint error {worst:.1e}, {t:.2?}"))
}

fn spectral_edges() -> Outcome {
    let start = Instant::now();
    let opts = FermiOptions::default();
    for d in 2..=3 {
        let pts = fermi_points(&models::laplacian(d), 0.0, &opts).map_err(|e| e.to_string())?;
        check(pts.len() == 1, format!("d={d}: {} points", pts.len()))?;
        let p = &pts[0];
        check(
            p.coordinates().iter().all(|x| x.abs() < 1e-6),
            format!("d={d}: point at {:?}", p.coordinates()),
        )?;
        check(
            p.multiplicity == 1 && p.ell0 == Some(2),
            format!("d={d}: m={}, ell0={:?}", p.multiplicity, p.ell0),
        )?;
        let h = p.hessian.as_ref().ok_or("missing Hessian")?;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 2.0 } else { 0.0 };
                check(
                    (h[(i, j)] - want).abs() <= 1e-4,
                    format!("d={d}: H[{i},{j}] = {}", h[(i, j)]),
                )?;
            }
        }
    }
    let pts = fermi_points(&models::graphene(), 0.0, &opts).map_err(|e| e.to_string())?;
    check(pts.len() == 2, format!("graphene: {} points", pts.len()))?;
    for p in &pts {
        check(
            p.multiplicity == 2 && p.ell0 == Some(1) && p.det_leading_nonzero,
            format!(
                "graphene: m={}, ell0={:?}, det={}",
                p.multiplicity, p.ell0, p.det_leading_nonzero
            ),
        )?;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("Laplacian d=2,3 and two Dirac cones, {t:.2?}"))
}

fn formula_oracle_equality() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, PeriodicLatticeOperator, Vec<usize>)> = Vec::new();
    for d in 1..=3 {
        cases.push((format!("laplacian d={d}"), models::laplacian(d), vec![0, 1, 2, 3]));
    }
    for d in 1..=2 {
        cases.push((
            format!("dimer edge d={d}"),
            models::dimer_chain_at_edge(d, 0.5),
            vec![0, 1, 2],
        ));
    }
    cases.push(("graphene".into(), models::graphene(), vec![0, 1, 2]));
    let mut checked = 0;
    for (name, op, ns) in &cases {
        let pts = fermi_points(op, 0.0, &FermiOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let edges: Vec<EdgeData> = pts.iter().map(EdgeData::from).collect();
        let ks: Vec<Vec<f64>> = pts.iter().map(|p| p.coordinates()).collect();
        for &n in ns {
            let formula = dim_vinf(&edges, n, op.dim()).map_err(|e| e.to_string())?.value as usize;
            let oracle = vinf_dim_oracle(op, &ks, n).map_err(|e| e.to_string())?.total;
            check(
                formula == oracle,
                format!("{name} N={n}: formula {formula}, oracle {oracle}"),
            )?;
            checked += 1;
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("{checked} cases, zero mismatches, {t:.2?}"))
}

/// Largest integer strictly below `a/b` for `b > 0`.
fn strict_floor_ratio(a: i64, b: i64) -> i64 {
    (a - 1).div_euclid(b)
}

fn p_reduction() -> Outcome {
    let edge = EdgeData {
        multiplicity: 1,
        ell0: Some(2),
        det_leading_nonzero: true,
    };
    let mut checked = 0;
    for d in 1..=3usize {
        let op = models::laplacian(d);
        let origin = vec![vec![0.0; d]];
        for p in [Some(1i64), Some(2), Some(4), None] {
            for n in 0..=5i64 {
                let reduced = match p {
                    None => Some(n),
                    Some(p) if p * n <= d as i64 => None,
                    Some(p) => Some(strict_floor_ratio(p * n - d as i64, p)).filter(|&r| r >= 0),
                };
                let want = match reduced {
                    None => 0,
                    Some(r) => {
                        vinf_dim_oracle(&op, &origin, r as usize)
                            .map_err(|e| e.to_string())?
                            .total as u64
                    }
                };
                let growth = match p {
                    None => GrowthSpec::infinite(n as f64),
                    Some(p) => GrowthSpec::new(p as f64, n as f64).map_err(|e| e.to_string())?,
                };
                let got = dim_vp(&[edge], &growth, d).map_err(|e| e.to_string())?.value;
                check(got == want, format!("d={d} p={p:?} N={n}: got {got}, want {want}"))?;
                if let Some(p) = p {
                    if p * n == d as i64 {
                        check(got == 0, format!("boundary pN=d gave {got}"))?;
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} table entries"))
}

fn divisor_degrees() -> Outcome {
    let mut checked = 0;
    let x = vec![0.0; 4];
    let y = vec![1.0; 4];
    for n in 2..=4usize {
        for (symbol, m) in [(Symbol::neg_laplacian(n), 2), (Symbol::bilaplacian(n), 4)] {
            for p in 0..=4i64 {
                for q in 0..=4i64 {
                    let poles: Vec<(Vec<f64>, i64)> = if p > 0 { vec![(x[..n].to_vec(), p)] } else { vec![] };
                    let zeros: Vec<(Vec<f64>, i64)> = if q > 0 { vec![(y[..n].to_vec(), -q)] } else { vec![] };
                    if poles.is_empty() && zeros.is_empty() {
                        continue;
                    }
                    let mu = point_divisor(&poles, &zeros).map_err(|e| e.to_string())?;
                    let got = degree(&symbol, &mu).map_err(|e| e.to_string())?.degree;
                    let pj: Vec<i64> = poles.iter().map(|(_, o)| *o).collect();
                    let qj: Vec<i64> = zeros.iter().map(|(_, o)| *o).collect();
                    let closed = point_divisor_degree_closed_form(n, m, &pj, &qj).map_err(|e| e.to_string())?;
                    // independent count: derivatives of order < p that are not hit by P
                    let hand =
                        |k: i64| binom(k + n as i64 - 1, n as i64) - binom(k + n as i64 - 1 - m as i64, n as i64);
                    let want = if p > 0 { hand(p) } else { 0 } - if q > 0 { hand(q) } else { 0 };
                    check(
                        got == closed && closed == want,
                        format!("n={n} m={m} p={p} q={q}: degree {got}, closed form {closed}, hand {want}"),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..20 {
        let op = models::random_operator(&mut rng, 2, 2, 6);
        let side = |rng: &mut ChaCha8Rng| -> Result<LatticeSpan, String> {
            let count = rng.random_range(0..4);
            let pts: Vec<LatticePoint> = (0..count)
                .map(|_| {
                    LatticePoint::new(
                        vec![rng.random_range(-3..=3), rng.random_range(-3..=3)],
                        rng.random_range(0..2),
                    )
                })
                .collect();
            Ok(LatticeSpan::deltas(pts))
        };
        let plus = side(&mut rng)?;
        let minus = side(&mut rng)?;
        let mu = RiggedPointDivisor::new(plus, minus).map_err(|e| e.to_string())?;
        let a = degree(&op, &mu).map_err(|e| e.to_string())?.degree;
        let b = degree(&op.transpose(), &mu.inverse())
            .map_err(|e| e.to_string())?
            .degree;
        check(
            a + b == 0,
            format!("random divisor {trial}: deg {a} + deg inverse {b} != 0"),
        )?;
    }
    Ok(format!("{checked} closed-form cases, 20 antisymmetry cases"))
}

fn continuum_riemann_roch() -> Outcome {
    let start = Instant::now();
    let mut resamples = 0;
    for (k, l) in [(1, 0), (2, 1), (3, 2)] {
        for seed in 0..5 {
            let r = riemann_roch_experiment(k, l, 3, seed).map_err(|e| format!("(k,l)=({k},{l}) seed {seed}: {e}"))?;
            let want = k as i64 - 3 * l as i64;
            check(
                r.difference == want,
                format!("(k,l)=({k},{l}) seed {seed}: {} != {want}", r.difference),
            )?;
            resamples += r.resamples;
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("15 configurations, {resamples} resamples, {t:.2?}"))
}

fn strict_inequality() -> Outcome {
    let mut gaps = Vec::new();
    for ell in 1..=3 {
        let r = rrl_gap_experiment(ell, 3, 0.0, 7).map_err(|e| e.to_string())?;
        check(r.gap >= ell as i64, format!("ell={ell}: gap {}", r.gap))?;
        gaps.push(r.gap);
    }
    Ok(format!("gaps {gaps:?}"))
}

fn negative_divisor_equality() -> Outcome {
    let h3 = |n: i64| (n + 1) * (n + 1);
    let mut checked = 0;
    for m0 in 0..=1usize {
        for n in m0..=3 {
            let r = negative_divisor_equality_experiment(3, m0, 0, GrowthSpec::infinite(n as f64), 11)
                .map_err(|e| e.to_string())?;
            let want = h3(n as i64) - h3(m0 as i64);
            check(
                r.dim as i64 == want,
                format!("M0={m0} N={n}: dim {}, want {want}", r.dim),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cases"))
}

fn empty_fermi_surface() -> Outcome {
    let start = Instant::now();
    let op = models::laplacian(2).with_shift(-1.0);
    let mu = RiggedPointDivisor::positive(LatticeSpan::deltas(vec![LatticePoint::origin(2)]));
    let est = truncated_l_dim_estimate(&op, &mu, &[10, 14, 18]).map_err(|e| e.to_string())?;
    check(
        est.stabilized == Some(1),
        format!("estimate {:?} over radii {:?}", est.dims, est.radii),
    )?;
    let g = green_function(&op, &LatticePoint::origin(2), 30).map_err(|e| e.to_string())?;
    check(
        g.fit.rate > 0.0 && g.fit.r_squared >= 0.99,
        format!("rate {}, R² {}", g.fit.rate, g.fit.r_squared),
    )?;
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "stabilized at 1, rate {:.4}, R² {:.4}, {t:.2?}",
        g.fit.rate, g.fit.r_squared
    ))
}

fn principal_curve() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 1..=2usize {
        let op = models::laplacian(d);
        let axis: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        for idx in 0..9usize.pow(d as u32) {
            let xi: Vec<f64> = (0..d).map(|a| axis[(idx / 9usize.pow(a as u32)) % 9]).collect();
            let got = principal_eigenvalue(&op, &xi).map_err(|e| e.to_string())?.value;
            let want: f64 = xi.iter().map(|x| 2.0 - 2.0 * x.cosh()).sum();
            worst = worst.max((got - want).abs());
        }
    }
    check(worst <= 1e-10, format!("closed-form error {worst:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ops = vec![models::drift_laplacian_1d(0.5), models::laplacian(3)];
    for _ in 0..4 {
        let d = rng.random_range(1..=2);
        let drift: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..0.8)).collect();
        ops.push(models::two_cell_drift_operator(d, [0.0, 0.0], &drift));
    }
    for op in &ops {
        let at0 = principal_eigenvalue(op, &vec![0.0; op.dim()])
            .map_err(|e| e.to_string())?
            .value;
        check(at0.abs() <= 1e-12, format!("Λ(0) = {at0:e}"))?;
    }
    let mut trials = 0;
    for op in &ops[..3] {
        let curve = maximize_principal(op, &PrincipalOptions::default()).map_err(|e| e.to_string())?;
        check(
            curve.concavity.violations == 0,
            format!("{} concavity violations", curve.concavity.violations),
        )?;
        trials += curve.concavity.trials;
    }
    Ok(format!("closed-form error {worst:.1e}, {trials} midpoint tests"))
}

fn transform_dft(f: &LatticeFunction, cells: usize, k: &[f64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); cells];
    for (p, v) in f.iter() {
        let phase: f64 = p.g.iter().zip(k).map(|(&g, &x)| g as f64 * x).sum();
        out[p.c] += v * Complex64::from_polar(1.0, -phase);
    }
    out
}

fn transform_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut fiber_worst, mut planch_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let d = rng.random_range(1..=2);
        let cells = rng.random_range(1..=2);
        let op = models::random_operator(&mut rng, d, cells, 5);
        let grid = FloquetGrid::new(d, 7).map_err(|e| e.to_string())?;
        let h = grid.half_width();
        let f = LatticeFunction::from_entries((0..6).map(|_| {
            let g = (0..d).map(|_| rng.random_range(-h + 1..=h - 1)).collect();
            (
                LatticePoint::new(g, rng.random_range(0..cells)),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        }));
        let k: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let lhs = transform_dft(&op.apply(&f), cells, &k);
        let ff = transform_dft(&f, cells, &k);
        let a = fiber_at(&op, &k);
        let scale = 1.0 + ff.iter().map(|z| z.norm()).sum::<f64>();
        for r in 0..cells {
            let rhs: Complex64 = (0..cells).map(|c| a[(r, c)] * ff[c]).sum();
            fiber_worst = fiber_worst.max((lhs[r] - rhs).norm() / scale);
        }
        let mut energy = 0.0;
        for idx in 0..grid.len() {
            let q: Quasimomentum = grid.point(idx);
            energy += transform_dft(&f, cells, &q.real_parts())
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>();
        }
        energy /= grid.len() as f64;
        planch_worst = planch_worst.max((energy - f.norm_sqr()).abs() / f.norm_sqr().max(1e-300));
    }
    check(
        fiber_worst <= 1e-10 && planch_worst <= 1e-10,
        format!("fiber {fiber_worst:e}, Plancherel {planch_worst:e}"),
    )?;
    Ok(format!(
        "fiber residual {fiber_worst:.1e}, Plancherel residual {planch_worst:.1e}"
    ))
}

fn dedekind_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut min_c = f64::INFINITY;
    for set in 0..20 {
        let d = rng.random_range(1..=3);
        let ell = rng.random_range(1..=4);
        let ks: Vec<Vec<f64>> = (0..ell)
            .map(|_| {
                (0..d)
                    .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect()
            })
            .collect();
        let cert = dedekind_shifts(&ks).map_err(|e| format!("set {set}: {e}"))?;
        let bad = verify_certificate(&ks, &cert, 1000, &mut rng);
        check(
            cert.constant > 0.0 && bad == 0,
            format!("set {set}: C={}, {bad} violations", cert.constant),
        )?;
        min_c = min_c.min(cert.constant);
    }
    Ok(format!("20 sets, smallest C {min_c:.3e}, zero violations"))
}

fn inapplicability_honesty() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let out = dir.path().to_str().ok_or("non-UTF-8 temp path")?;
    let argv = [
        "floquet-lrr",
        "lrr",
        "--op",
        &format!("{configs}/laplace2d.json"),
        "--divisor",
        &format!("{configs}/onepole2d.json"),
        "--p",
        "inf",
        "--N",
        "0",
        "--out",
        out,
    ];
    let code = floquet_lrr::cli::run(argv.iter().map(|s| s.to_string()));
    check(code == 2, format!("exit code {code}"))?;
    let text = std::fs::read_to_string(dir.path().join("lrr-report.json")).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    check(
        report["failed_hypothesis"] == "A2",
        format!("failed hypothesis {}", report["failed_hypothesis"]),
    )?;
    let claims = report["equality_claims"].as_array().ok_or("equality_claims missing")?;
    check(claims.is_empty(), format!("equality claims emitted: {claims:?}"))?;
    Ok("exit 2, A2 named, no equality claim".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("spectrum exactness", spectrum_exactness),
        ("spectral-edge characterization", spectral_edges),
        ("formula-oracle equality", formula_oracle_equality),
        ("p-reduction", p_reduction),
        ("divisor degree cross-check", divisor_degrees),
        ("continuum Riemann-Roch", continuum_riemann_roch),
        ("strict inequality", strict_inequality),
        ("negative-divisor equality", negative_divisor_equality),
        ("empty Fermi surface", empty_fermi_surface),
        ("principal eigenvalue curve", principal_curve),
        ("transform identities", transform_identities),
        ("Dedekind certificate", dedekind_certificates),
        ("inapplicability honesty", inapplicability_honesty),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
