//! Dimension formulas for spaces of polynomially growing solutions and the
//! Liouville–Riemann–Roch bound assembler.

use serde::Serialize;

use crate::divisors::{binom_or_zero, degree, DegreeContext, DegreeReport, RiggedPointDivisor, Span};
use crate::error::{Error, Result};
use crate::spectral::{AuditReport, FermiPoint};

/// `h_{d,N}`: dimension of harmonic polynomials of degree `≤ N` in `d` variables.
pub fn harmonic_dim(d: usize, n: usize) -> u64 {
    let (d, n) = (d as i64, n as i64);
    binom_or_zero(d + n, d as u64) - binom_or_zero(d + n - 2, d as u64)
}

/// `c_{d,N}`: dimension of homogeneous polynomials of degree `N` in `d` variables.
pub fn homogeneous_dim(d: usize, n: usize) -> u64 {
    binom_or_zero(d as i64 + n as i64 - 1, n as u64)
}

/// Largest integer strictly less than `r`.
pub fn strict_floor(r: f64) -> i64 {
    r.ceil() as i64 - 1
}

/// Growth class `V^p_N`: `‖u‖_{L²(gK)}·⟨g⟩^{−N} ∈ ℓ^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthSpec {
    #[serde(serialize_with = "serialize_exponent")]
    pub p: f64,
    pub n: f64,
}

/// `p = ∞` is written as the string `"inf"`.
fn serialize_exponent<S: serde::Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if *p == f64::INFINITY {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

impl GrowthSpec {
    pub fn new(p: f64, n: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 || !n.is_finite() {
            return Err(Error::InvalidInput(format!(
                "growth needs p ≥ 1 and finite N, got p={p}, N={n}"
            )));
        }
        Ok(GrowthSpec { p, n })
    }

    pub fn infinite(n: f64) -> Self {
        GrowthSpec { p: f64::INFINITY, n }
    }

    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    /// Hölder conjugate `p′`.
    pub fn conjugate(&self) -> f64 {
        if self.is_infinite() {
            1.0
        } else if self.p == 1.0 {
            f64::INFINITY
        } else {
            self.p / (self.p - 1.0)
        }
    }

    /// Parses `"inf"` or a number.
    pub fn parse_p(s: &str) -> Result<f64> {
        match s.trim() {
            "inf" | "∞" => Ok(f64::INFINITY),
            t => t
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("invalid exponent p = {s:?}"))),
        }
    }
}

/// Per-point data entering the dimension formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeData {
    pub multiplicity: usize,
    pub ell0: Option<usize>,
    pub det_leading_nonzero: bool,
}

impl From<&FermiPoint> for EdgeData {
    fn from(p: &FermiPoint) -> Self {
        EdgeData {
            multiplicity: p.multiplicity,
            ell0: p.ell0,
            det_leading_nonzero: p.det_leading_nonzero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimStatus {
    Valid,
    ValidAllN,
    OutsideGuarantee,
}

impl DimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DimStatus::Valid => "valid",
            DimStatus::ValidAllN => "valid-all-N",
            DimStatus::OutsideGuarantee => "outside-guarantee",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimValue {
    pub value: u64,
    pub status: DimStatus,
}

/// `Σ_r m_r·[C(d+N, d) − C(d+N−ℓ₀(r), d)]`.
pub fn dim_vinf(points: &[EdgeData], n: usize, d: usize) -> Result<DimValue> {
    let mut value = 0;
    let mut min_ell = usize::MAX;
    for p in points {
        let ell = p.ell0.ok_or(Error::TaylorUndetermined(0))?;
        if ell == 0 {
            return Err(Error::InvalidInput("Taylor order must be positive".into()));
        }
        min_ell = min_ell.min(ell);
        let (dd, nn) = (d as i64, n as i64);
        value +=
            p.multiplicity as u64 * (binom_or_zero(dd + nn, d as u64) - binom_or_zero(dd + nn - ell as i64, d as u64));
    }
    let status = if n < min_ell {
        DimStatus::Valid
    } else if points.iter().all(|p| p.det_leading_nonzero) {
        DimStatus::ValidAllN
    } else {
        DimStatus::OutsideGuarantee
    };
    Ok(DimValue { value, status })
}

/// `dim V^p_N`, reduced to `V^∞` with `[N]` for `p = ∞` and with `⌊N − d/p⌋` (strict) for `pN > d`.
pub fn dim_vp(points: &[EdgeData], growth: &GrowthSpec, d: usize) -> Result<DimValue> {
    let zero = DimValue {
        value: 0,
        status: DimStatus::ValidAllN,
    };
    let n = if growth.is_infinite() {
        if growth.n < 0.0 {
            return Ok(zero);
        }
        growth.n.floor() as i64
    } else {
        if growth.p * growth.n <= d as f64 {
            return Ok(zero);
        }
        strict_floor(growth.n - d as f64 / growth.p)
    };
    if n < 0 {
        return Ok(zero);
    }
    dim_vinf(points, n as usize, d)
}

/// `C(d+N, N)·Σ_r dim Ker A(k_r)`.
pub fn crude_bound(n: usize, d: usize, kernel_dims: &[usize]) -> u64 {
    binom_or_zero((d + n) as i64, n as u64) * kernel_dims.iter().map(|&k| k as u64).sum::<u64>()
}

/// One hypothesis of the applicability gate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub satisfied: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(name: &str, satisfied: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name: name.into(),
            satisfied,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimField {
    Value(u64),
    Infinite,
    Inapplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Ok,
    UnverifiedHypothesis,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LrrReport {
    pub regime: String,
    pub status: ReportStatus,
    pub growth: GrowthSpec,
    pub dim_vpn: DimField,
    pub dim_status: Option<DimStatus>,
    pub deg: DegreeReport,
    pub deg_plus: DegreeReport,
    /// Lower bound on `dim L_p(μ,A,N) − dim L_{p′}(μ⁻¹,A*,−N)`.
    pub lower_bound: Option<i64>,
    /// Upper bound on `dim L_p(μ,A,N)`.
    pub upper_bound: Option<i64>,
    pub equality_claims: Vec<String>,
    pub existence: bool,
    pub audit: Vec<HypothesisCheck>,
    pub failed_hypothesis: Option<String>,
}

/// Verdicts of the integrability audits with exponents 1 and 2.
#[derive(Clone, Debug, Default)]
pub struct AuditInputs {
    pub q1: Vec<AuditReport>,
    pub q2: Vec<AuditReport>,
}

fn audits_hold(reports: &[AuditReport]) -> (bool, String) {
    let detail = reports
        .iter()
        .map(|r| format!("point {}: {}", r.point, r.numeric.as_str()))
        .collect::<Vec<_>>()
        .join("; ");
    (reports.iter().all(|r| r.satisfied()), detail)
}

/// Assemble the Liouville–Riemann–Roch report from precomputed degrees.
pub fn assemble_lrr(
    deg: DegreeReport,
    deg_plus: DegreeReport,
    mu_is_positive: bool,
    growth: &GrowthSpec,
    d: usize,
    points: &[EdgeData],
    audits: &AuditInputs,
) -> LrrReport {
    let (p, n, df) = (growth.p, growth.n, d as f64);
    let mut audit = vec![HypothesisCheck::new(
        "A1",
        true,
        "fiber matrices are finite; the Fermi surface was located",
    )];
    let growth_base = (growth.is_infinite() && n >= 0.0) || (!growth.is_infinite() && p * n > df);
    audit.push(HypothesisCheck::new(
        "growth-baseline",
        growth_base,
        "(p = inf and N >= 0) or p*N > d",
    ));
    let (a2, a2_detail) = audits_hold(&audits.q1);
    audit.push(HypothesisCheck::new(
        "A2",
        a2,
        format!("q = 1 integrability: {a2_detail}"),
    ));
    let growth_improved = (p >= 2.0 && n >= 0.0) || (!growth.is_infinite() && 2.0 * p * n > (2.0 - p) * df);
    audit.push(HypothesisCheck::new(
        "growth-improved",
        growth_improved,
        "(p >= 2 and N >= 0) or 2pN > (2-p)d",
    ));
    let (strength, s_detail) = audits_hold(&audits.q2);
    audit.push(HypothesisCheck::new(
        "strengthened-A2",
        strength,
        format!("q = 2 integrability: {s_detail}"),
    ));
    let baseline = growth_base && a2;
    let improved = growth_improved && strength;
    let dim = dim_vp(points, growth, d);
    let mut report = LrrReport {
        regime: "inapplicable".into(),
        status: ReportStatus::Inapplicable,
        growth: *growth,
        dim_vpn: DimField::Inapplicable,
        dim_status: None,
        deg,
        deg_plus,
        lower_bound: None,
        upper_bound: None,
        equality_claims: Vec::new(),
        existence: false,
        audit,
        failed_hypothesis: None,
    };
    let dim = match dim {
        Ok(v) => v,
        Err(e) => {
            report
                .audit
                .push(HypothesisCheck::new("taylor-order", false, e.to_string()));
            report.failed_hypothesis = Some("taylor-order".into());
            return report;
        }
    };
    if !(baseline || improved) {
        let failed = if !strength && !a2 {
            "A2"
        } else if !growth_base && !growth_improved {
            "growth-baseline"
        } else if !a2 {
            "A2"
        } else {
            "strengthened-A2"
        };
        report.failed_hypothesis = Some(failed.into());
        return report;
    }
    report.regime = if baseline { "baseline" } else { "improved" }.into();
    report.status = if dim.status == DimStatus::OutsideGuarantee {
        ReportStatus::UnverifiedHypothesis
    } else {
        ReportStatus::Ok
    };
    report.dim_vpn = DimField::Value(dim.value);
    report.dim_status = Some(dim.status);
    let lower = dim.value as i64 + deg.degree;
    let upper = dim.value as i64 + deg_plus.degree;
    report.lower_bound = Some(lower);
    report.upper_bound = Some(upper);
    report.existence = lower > 0;
    if mu_is_positive {
        report
            .equality_claims
            .push(format!("dim L_p(mu+, A, N) = dim V^p_N(A) + deg(mu+) = {upper}"));
        if p == 2.0 && n == 0.0 {
            report
                .equality_claims
                .push(format!("dim L_2(mu+, A, 0) = deg(mu+) = {}", deg_plus.degree));
        }
    }
    report
}

/// Liouville–Riemann–Roch report for `μ` with the degrees computed in context `ctx`.
pub fn lrr_bounds<S: Span, C: DegreeContext<S>>(
    ctx: &C,
    mu: &RiggedPointDivisor<S>,
    growth: &GrowthSpec,
    d: usize,
    points: &[EdgeData],
    audits: &AuditInputs,
) -> Result<LrrReport> {
    let deg = degree(ctx, mu)?;
    let deg_plus = degree(ctx, &mu.positive_part())?;
    Ok(assemble_lrr(deg, deg_plus, mu.is_positive(), growth, d, points, audits))
}

/// Report for operators with `0 ∉ σ(A)`: there `dim L(μ) = deg(μ) + dim L_∞(μ⁻¹, A*)`,
/// the correction vanishing for positive `μ` and equal to `−deg(μ)` for negative `μ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmptyFermiReport {
    pub margin: f64,
    pub deg: DegreeReport,
    pub deg_plus: DegreeReport,
    pub dim: Option<i64>,
    pub lower_bound: i64,
    pub upper_bound: i64,
    /// `dim L_∞(μ⁻¹, A*, φ₀)` when determined by the divisor type.
    pub correction: Option<i64>,
    pub all_growth_classes_equal: bool,
}

pub const EMPTY_FERMI_MARGIN: f64 = 1e-6;

pub fn assemble_empty_fermi(
    margin: f64,
    deg: DegreeReport,
    deg_plus: DegreeReport,
    positive: bool,
    negative: bool,
) -> Result<EmptyFermiReport> {
    if margin.is_nan() || margin < EMPTY_FERMI_MARGIN {
        return Err(Error::MarginViolation {
            margin,
            required: EMPTY_FERMI_MARGIN,
        });
    }
    let correction = if positive {
        Some(0)
    } else if negative {
        Some(-deg.degree)
    } else {
        None
    };
    let dim = correction.map(|c| deg.degree + c);
    Ok(EmptyFermiReport {
        margin,
        deg,
        deg_plus,
        dim,
        lower_bound: dim.unwrap_or(deg.degree.max(0)),
        upper_bound: dim.unwrap_or(deg_plus.degree),
        correction,
        all_growth_classes_equal: true,
    })
}

/// [`assemble_empty_fermi`] with degrees computed in context `ctx`; `margin` is the
/// certified distance from 0 to the spectrum.
pub fn empty_fermi_bounds<S: Span, C: DegreeContext<S>>(
    ctx: &C,
    mu: &RiggedPointDivisor<S>,
    margin: f64,
) -> Result<EmptyFermiReport> {
    let deg = degree(ctx, mu)?;
    let deg_plus = degree(ctx, &mu.positive_part())?;
    assemble_empty_fermi(margin, deg, deg_plus, mu.is_positive(), mu.plus.is_empty())
}
