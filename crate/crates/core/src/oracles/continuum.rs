//! Rank oracle for `−Δ` on `ℝᵈ` (`d ≥ 3`) with point divisors: candidate
//! solutions are derivatives of `|x−y|^{2−d}` at the poles plus harmonic
//! polynomials, and zeros impose derivative conditions.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisors::{degree, ContinuumSpan, RiggedPointDivisor, Symbol, RANK_THRESHOLD};
use crate::error::{Error, Result};
use crate::linalg::{rational_from_int, rational_null_space, stable_rank, CMatrix};
use crate::liouville::{harmonic_dim, strict_floor, GrowthSpec};
use crate::spectral::taylor::multi_indices;
use crate::Complex64;

/// How many times a degenerate random configuration is redrawn.
pub const MAX_RESAMPLES: usize = 5;

/// Integer-coefficient polynomial in `z = x − y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], 1)
    }

    pub fn monomial(exps: Vec<u32>, coeff: i128) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: i128) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exps).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, a: i128) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * a);
        }
        out
    }

    pub fn mul_var(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += 1;
            out.add_term(e, *c);
        }
        out
    }

    /// Multiplication by `|z|²`.
    pub fn mul_r2(&self) -> Poly {
        (0..self.dim).fold(Poly::zero(self.dim), |acc, i| acc.add(&self.mul_var(i).mul_var(i)))
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * e[i] as i128);
            }
        }
        out
    }

    pub fn derivative_multi(&self, beta: &[usize]) -> Poly {
        let mut p = self.clone();
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                p = p.derivative(i);
            }
        }
        p
    }

    pub fn laplacian(&self) -> Poly {
        (0..self.dim).fold(Poly::zero(self.dim), |acc, i| {
            acc.add(&self.derivative(i).derivative(i))
        })
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, &c)| c as f64 * e.iter().zip(z).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }
}

/// `P(z)·|z|^s` with integer `P`; closed under differentiation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialTerm {
    pub poly: Poly,
    pub exponent: i32,
}

impl RadialTerm {
    /// The fundamental solution `|z|^{2−d}` up to normalization.
    pub fn fundamental(dim: usize) -> Self {
        RadialTerm {
            poly: Poly::one(dim),
            exponent: 2 - dim as i32,
        }
    }

    /// `∂_i[P r^s] = [(∂_iP) r² + s P z_i] r^{s−2}`.
    pub fn derivative(&self, i: usize) -> Self {
        let poly = self
            .poly
            .derivative(i)
            .mul_r2()
            .add(&self.poly.mul_var(i).scale(self.exponent as i128));
        RadialTerm {
            poly,
            exponent: self.exponent - 2,
        }
    }

    pub fn derivative_multi(&self, beta: &[usize]) -> Self {
        let mut t = self.clone();
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                t = t.derivative(i);
            }
        }
        t
    }

    pub fn eval(&self, z: &[f64]) -> Result<f64> {
        let r2: f64 = z.iter().map(|x| x * x).sum();
        if r2 == 0.0 {
            return Err(Error::SingularEvaluation);
        }
        Ok(self.poly.eval(z) * r2.sqrt().powi(self.exponent))
    }
}

/// A candidate element of the solution space.
#[derive(Clone, Debug, PartialEq)]
pub enum ContinuumBasisFunction {
    HarmonicPolynomial(Poly),
    /// `∂^α |x − center|^{2−d}`.
    Singular {
        center: Vec<f64>,
        alpha: Vec<usize>,
        term: RadialTerm,
    },
}

impl ContinuumBasisFunction {
    pub fn singular(center: Vec<f64>, alpha: Vec<usize>) -> Self {
        let term = RadialTerm::fundamental(center.len()).derivative_multi(&alpha);
        ContinuumBasisFunction::Singular { center, alpha, term }
    }

    /// Decay exponent at infinity (the degree for polynomials).
    pub fn exponent(&self) -> i64 {
        match self {
            ContinuumBasisFunction::HarmonicPolynomial(p) => {
                p.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(0)
            }
            ContinuumBasisFunction::Singular { center, alpha, .. } => {
                2 - center.len() as i64 - alpha.iter().sum::<usize>() as i64
            }
        }
    }

    /// `∂^β u(x)`.
    pub fn derivative_at(&self, beta: &[usize], x: &[f64]) -> Result<f64> {
        match self {
            ContinuumBasisFunction::HarmonicPolynomial(p) => Ok(p.derivative_multi(beta).eval(x)),
            ContinuumBasisFunction::Singular { center, term, .. } => {
                let z: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                term.derivative_multi(beta).eval(&z)
            }
        }
    }
}

/// Integer basis of homogeneous harmonic polynomials of each degree `≤ n`.
pub fn harmonic_basis(dim: usize, n: i64) -> Vec<Poly> {
    let mut out = Vec::new();
    for deg in 0..=n.max(-1) {
        let deg = deg as usize;
        let cols = multi_indices(dim, deg);
        let rows_idx = if deg >= 2 {
            multi_indices(dim, deg - 2)
        } else {
            Vec::new()
        };
        let mut rows = vec![vec![rational_from_int(0); cols.len()]; rows_idx.len()];
        for (c, alpha) in cols.iter().enumerate() {
            let exps: Vec<u32> = alpha.iter().map(|&a| a as u32).collect();
            let lap = Poly::monomial(exps, 1).laplacian();
            for (e, coeff) in &lap.terms {
                let key: Vec<usize> = e.iter().map(|&x| x as usize).collect();
                let r = rows_idx.iter().position(|b| *b == key).expect("degree drops by two");
                rows[r][c] = rational_from_int(*coeff as i64);
            }
        }
        for v in rational_null_space(&rows, cols.len()) {
            let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let mut p = Poly::zero(dim);
            for (alpha, q) in cols.iter().zip(&v) {
                if q.is_zero() {
                    continue;
                }
                let c = (q.numer() * (&lcm / q.denom()))
                    .to_i128()
                    .expect("harmonic coefficients fit in i128");
                p.add_term(alpha.iter().map(|&a| a as u32).collect(), c);
            }
            debug_assert!(p.laplacian().is_zero());
            if p.terms.values().next().is_some_and(|c| *c < 0) {
                p = p.scale(-1);
            }
            out.push(p);
        }
    }
    out
}

/// Growth condition at infinity for the continuum spaces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuumGrowth {
    /// `u(x) → 0` as `|x| → ∞`.
    Decaying,
    Growth(GrowthSpec),
}

impl ContinuumGrowth {
    /// Highest admissible polynomial degree, `None` if polynomials are excluded.
    pub fn polynomial_degree(&self, d: usize) -> Option<i64> {
        let n = match self {
            ContinuumGrowth::Decaying => return None,
            ContinuumGrowth::Growth(g) if g.is_infinite() => g.n.floor() as i64,
            ContinuumGrowth::Growth(g) => strict_floor(g.n - d as f64 / g.p),
        };
        (n >= 0).then_some(n)
    }

    /// Whether `|x|^e` at infinity lies in the class.
    pub fn admits_exponent(&self, e: i64, d: usize) -> bool {
        match self {
            ContinuumGrowth::Decaying => e < 0,
            ContinuumGrowth::Growth(g) if g.is_infinite() => (e as f64) <= g.n,
            ContinuumGrowth::Growth(g) => g.p * (e as f64 - g.n) < -(d as f64),
        }
    }
}

/// The admissible candidates for `μ` and the growth class.
pub fn candidate_basis(
    mu: &RiggedPointDivisor<ContinuumSpan>,
    growth: &ContinuumGrowth,
) -> Vec<ContinuumBasisFunction> {
    let d = mu.plus.space_dim().max(mu.minus.space_dim());
    let mut out: Vec<ContinuumBasisFunction> = Vec::new();
    for (y, alphas) in mu.plus.entries() {
        for alpha in alphas {
            let f = ContinuumBasisFunction::singular(y.clone(), alpha.clone());
            if growth.admits_exponent(f.exponent(), d) {
                out.push(f);
            }
        }
    }
    if let Some(n) = growth.polynomial_degree(d) {
        out.extend(
            harmonic_basis(d, n)
                .into_iter()
                .map(ContinuumBasisFunction::HarmonicPolynomial),
        );
    }
    out
}

/// `dim{u : −Δu ∈ L⁺, (u, L⁻) = 0, u in the growth class}`.
pub fn continuum_space_dim(mu: &RiggedPointDivisor<ContinuumSpan>, growth: &ContinuumGrowth) -> Result<usize> {
    let d = mu.plus.space_dim().max(mu.minus.space_dim());
    if d < 3 {
        return Err(Error::InvalidInput(format!("continuum oracle needs d ≥ 3, got {d}")));
    }
    let cands = candidate_basis(mu, growth);
    let rows: Vec<(&Vec<f64>, &Vec<usize>)> = mu
        .minus
        .entries()
        .iter()
        .flat_map(|(z, betas)| betas.iter().map(move |b| (z, b)))
        .collect();
    if cands.is_empty() {
        return Ok(0);
    }
    if rows.is_empty() {
        return Ok(cands.len());
    }
    let mut m = vec![vec![0.0; cands.len()]; rows.len()];
    for (r, (z, beta)) in rows.iter().enumerate() {
        for (c, f) in cands.iter().enumerate() {
            m[r][c] = f.derivative_at(beta, z)?;
        }
    }
    // rank is invariant under row and column scaling; equilibrate first
    for c in 0..cands.len() {
        let s = m.iter().map(|row| row[c].abs()).fold(0.0, f64::max);
        if s > 0.0 {
            m.iter_mut().for_each(|row| row[c] /= s);
        }
    }
    for row in m.iter_mut() {
        let s = row.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if s > 0.0 {
            row.iter_mut().for_each(|x| *x /= s);
        }
    }
    let mat = CMatrix::from_fn(rows.len(), cands.len(), |r, c| Complex64::new(m[r][c], 0.0));
    Ok(cands.len() - stable_rank(&mat, RANK_THRESHOLD)?)
}

/// Uniform points in `[−1, 1]^d`.
pub fn random_points<R: Rng>(rng: &mut R, count: usize, d: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

/// Runs `f` on fresh random draws until its rank decisions are stable.
pub fn with_resampling<T>(seed: u64, mut f: impl FnMut(&mut ChaCha8Rng) -> Result<T>) -> Result<(T, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..=MAX_RESAMPLES {
        match f(&mut rng) {
            Err(Error::RankUnstable { .. }) | Err(Error::SingularEvaluation) => continue,
            other => return other.map(|v| (v, attempt)),
        }
    }
    Err(Error::DegenerateConfiguration(MAX_RESAMPLES))
}

fn first_order(d: usize) -> Vec<Vec<usize>> {
    multi_indices(d, 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiemannRochReport {
    pub d: usize,
    pub poles: usize,
    pub dipole_zeros: usize,
    pub seed: u64,
    pub resamples: usize,
    pub dim_mu: usize,
    pub dim_inverse: usize,
    pub difference: i64,
    pub expected: i64,
}

/// `k` simple poles and `l` points where all first derivatives vanish, decaying class:
/// `dim L(μ) − dim L(μ⁻¹)`.
pub fn riemann_roch_experiment(k: usize, l: usize, d: usize, seed: u64) -> Result<RiemannRochReport> {
    let ((dim_mu, dim_inverse), resamples) = with_resampling(seed, |rng| {
        let pts = random_points(rng, k + l, d);
        let plus = ContinuumSpan::new(d, pts[..k].iter().map(|y| (y.clone(), vec![vec![0; d]])).collect())?;
        let minus = ContinuumSpan::new(d, pts[k..].iter().map(|z| (z.clone(), first_order(d))).collect())?;
        let mu = RiggedPointDivisor::new(plus, minus)?;
        let a = continuum_space_dim(&mu, &ContinuumGrowth::Decaying)?;
        let b = continuum_space_dim(&mu.inverse(), &ContinuumGrowth::Decaying)?;
        Ok((a, b))
    })?;
    Ok(RiemannRochReport {
        d,
        poles: k,
        dipole_zeros: l,
        seed,
        resamples,
        dim_mu,
        dim_inverse,
        difference: dim_mu as i64 - dim_inverse as i64,
        expected: k as i64 - (d * l) as i64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RrlGapReport {
    pub ell: usize,
    pub d: usize,
    pub n: f64,
    pub seed: u64,
    pub resamples: usize,
    pub dim_mu: usize,
    pub dim_inverse: usize,
    pub deg: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub gap: i64,
}

/// `μ = μ⁻` forcing all first derivatives to vanish at `ℓ` points. Compares
/// `dim L_∞(μ, N) − dim L_1(μ⁻¹, −N)` with `h_{d,[N]} + deg μ`.
pub fn rrl_gap_experiment(ell: usize, d: usize, n: f64, seed: u64) -> Result<RrlGapReport> {
    if d < 3 || n < 0.0 {
        return Err(Error::InvalidInput("gap experiment needs d ≥ 3 and N ≥ 0".into()));
    }
    let ((dim_mu, dim_inverse, deg), resamples) = with_resampling(seed, |rng| {
        let pts = random_points(rng, ell, d);
        let minus = ContinuumSpan::new(d, pts.iter().map(|z| (z.clone(), first_order(d))).collect())?;
        let mu = RiggedPointDivisor::negative(minus);
        let a = continuum_space_dim(&mu, &ContinuumGrowth::Growth(GrowthSpec::infinite(n)))?;
        let b = continuum_space_dim(&mu.inverse(), &ContinuumGrowth::Growth(GrowthSpec::new(1.0, -n)?))?;
        let deg = degree(&Symbol::neg_laplacian(d), &mu)?.degree;
        Ok((a, b, deg))
    })?;
    let lhs = dim_mu as i64 - dim_inverse as i64;
    let rhs = harmonic_dim(d, n.floor() as usize) as i64 + deg;
    Ok(RrlGapReport {
        ell,
        d,
        n,
        seed,
        resamples,
        dim_mu,
        dim_inverse,
        deg,
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegativeDivisorReport {
    pub d: usize,
    pub m0: usize,
    pub m1: usize,
    pub growth: GrowthSpec,
    pub seed: u64,
    pub resamples: usize,
    pub dim: usize,
    pub dim_vp: u64,
    pub deg: i64,
    /// `dim V^p_N + deg μ`.
    pub formula: i64,
    /// `h_{d,N_eff} − h_{d,M₀}`, available when `M₁ = 0`.
    pub closed_form: Option<i64>,
    pub equality: bool,
}

/// Zero of order `M₁..=M₀` at one generic point; checks the equality
/// `dim L_p(μ, N) = dim V^p_N + deg μ`.
pub fn negative_divisor_equality_experiment(
    d: usize,
    m0: usize,
    m1: usize,
    growth: GrowthSpec,
    seed: u64,
) -> Result<NegativeDivisorReport> {
    let ok = if growth.is_infinite() {
        growth.n >= m0 as f64
    } else {
        growth.n > d as f64 / growth.p + m0 as f64
    };
    if d < 3 || m1 > m0 || !ok {
        return Err(Error::InvalidInput(format!(
            "needs d ≥ 3, M₁ ≤ M₀ and growth above order M₀ (d={d}, M₀={m0}, M₁={m1}, p={}, N={})",
            growth.p, growth.n
        )));
    }
    let class = ContinuumGrowth::Growth(growth);
    let ((dim, deg), resamples) = with_resampling(seed, |rng| {
        let x0 = random_points(rng, 1, d).remove(0);
        let alphas: Vec<Vec<usize>> = (m1..=m0).flat_map(|k| multi_indices(d, k)).collect();
        let mu = RiggedPointDivisor::negative(ContinuumSpan::new(d, vec![(x0, alphas)])?);
        let dim = continuum_space_dim(&mu, &class)?;
        let deg = degree(&Symbol::neg_laplacian(d), &mu)?.degree;
        Ok((dim, deg))
    })?;
    let n_eff = class.polynomial_degree(d);
    let dim_vp = n_eff.map_or(0, |n| harmonic_dim(d, n as usize));
    let formula = dim_vp as i64 + deg;
    let closed_form = (m1 == 0).then(|| dim_vp as i64 - harmonic_dim(d, m0) as i64);
    Ok(NegativeDivisorReport {
        d,
        m0,
        m1,
        growth,
        seed,
        resamples,
        dim,
        dim_vp,
        deg,
        formula,
        closed_form,
        equality: dim as i64 == formula && closed_form.is_none_or(|c| c == dim as i64),
    })
}
