//! Command-line front end. Every command is a thin composition of library
//! calls followed by deterministic artifact output.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisors::{degree, AnyDivisor, DivisorFile, Symbol};
use crate::error::Error;
use crate::lattice::{LatticePoint, PeriodicLatticeOperator};
use crate::liouville::{
    dim_vinf, dim_vp, empty_fermi_bounds, lrr_bounds, AuditInputs, EdgeData, GrowthSpec, ReportStatus,
};
use crate::oracles::{
    continuum_space_dim, dedekind_shifts, green_function, truncated_l_dim_estimate, verify_certificate,
    vinf_dim_oracle, ContinuumGrowth,
};
use crate::report::{bands_csv, emit_report, fermi_records, format_float, window_csv};
use crate::spectral::integrability::AuditOptions;
use crate::spectral::{
    band_cloud, band_structure, fermi_points, integrability_audit, maximize_principal, shift_spectrum, spectral_margin,
    spectrum_intervals, FermiOptions, PrincipalOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRASH: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;
pub const EXIT_CONFIG: i32 = 64;

/// Caps the worker pool used by sweeps.
pub const THREADS_ENV: &str = "FLOQUET_LRR_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "floquet-lrr",
    version,
    about = "Floquet-Bloch analysis and Liouville-Riemann-Roch bounds for periodic lattice operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OpArgs {
    /// Operator JSON file.
    #[arg(long)]
    op: PathBuf,
    /// Spectral level λ; the analysis runs on A − λ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    level: f64,
    /// Points per axis of the Brillouin-zone grid.
    #[arg(long, default_value_t = crate::spectral::bands::DEFAULT_BAND_GRID)]
    grid: usize,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GrowthArgs {
    /// Summability exponent; "inf" for sup-norm growth.
    #[arg(long, default_value = "inf")]
    p: String,
    /// Polynomial growth order (decimals allowed).
    #[arg(long = "N", default_value_t = 0.0, allow_negative_numbers = true)]
    n: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the band functions on the grid.
    Bands {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Spectrum as a union of closed intervals.
    Spectrum {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fermi points at the level with multiplicities, Taylor orders and Hessians.
    Fermi {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dimension of the polynomially growing solution space.
    LiouvilleDim {
        #[command(flatten)]
        op: OpArgs,
        #[command(flatten)]
        growth: GrowthArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Degree of a rigged divisor.
    DivisorDegree {
        /// Operator JSON file (lattice divisors).
        #[arg(long)]
        op: Option<PathBuf>,
        #[arg(long)]
        divisor: PathBuf,
        /// Continuum symbol: neg-laplacian or bilaplacian.
        #[arg(long, default_value = "neg-laplacian")]
        symbol: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Liouville-Riemann-Roch bounds with the hypothesis audit.
    Lrr {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        divisor: PathBuf,
        #[command(flatten)]
        growth: GrowthArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Riemann-Roch report when the level lies in a spectral gap.
    EmptyFermi {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        divisor: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Kernel dimension on Floquet polynomials at the Fermi points.
    OracleVinf {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long = "N", default_value_t = 0.0)]
        n: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solution-space dimension of −Δ on ℝᵈ for a point divisor.
    OracleContinuum {
        #[arg(long)]
        divisor: PathBuf,
        /// Summability exponent; omit with --decaying.
        #[arg(long)]
        p: Option<String>,
        #[arg(long = "N", allow_negative_numbers = true)]
        n: Option<f64>,
        /// Require decay at infinity instead of a growth class.
        #[arg(long)]
        decaying: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shift tuple certifying that characters are distinct.
    OracleDedekind {
        /// Quasimomenta: components separated by ',', points by ';'.
        #[arg(long, allow_hyphen_values = true)]
        ks: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Green's function on a truncated box and its decay rate.
    Green {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 20)]
        radius: i64,
        /// Optional lattice divisor for the truncated solution-space estimate.
        #[arg(long)]
        divisor: Option<PathBuf>,
        /// Radii for the truncated estimate, comma separated.
        #[arg(long, default_value = "10,14,18")]
        radii: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Maximum of the principal eigenvalue over imaginary quasimomenta.
    PrincipalEigenvalue {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Errors split by the exit code they map to.
#[derive(Debug)]
enum CliError {
    Config(String),
    Lib(Error),
    Inapplicable(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::SingularEvaluation => EXIT_CONFIG,
        Error::NotSelfAdjoint
        | Error::FermiSurfaceNotFinite(_)
        | Error::MarginViolation { .. }
        | Error::NotPerronType(_)
        | Error::ComplexPerron { .. }
        | Error::NoInteriorMaximum(_) => EXIT_INAPPLICABLE,
        Error::RankUnstable { .. }
        | Error::EigenvalueOnContour { .. }
        | Error::BasisDegenerate(_)
        | Error::TaylorUndetermined(_)
        | Error::WindowOverflow(_)
        | Error::WindowUnderflow(_)
        | Error::ConcavityViolation { .. }
        | Error::SearchExhausted(_)
        | Error::SingularSystem(_)
        | Error::DegenerateConfiguration(_) => EXIT_UNSTABLE,
        Error::NonFinite(_) | Error::Io(_) | Error::Json(_) => EXIT_CRASH,
    }
}

type CliResult = std::result::Result<String, CliError>;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {s:?}");
                return EXIT_CONFIG;
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_CRASH;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(CliError::Inapplicable(summary)) => {
            println!("{summary}");
            EXIT_INAPPLICABLE
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_op(path: &Path) -> std::result::Result<PeriodicLatticeOperator, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    PeriodicLatticeOperator::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn load_divisor(path: &Path) -> std::result::Result<AnyDivisor, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    DivisorFile::from_json(&text)
        .and_then(|f| f.to_divisor())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn growth_spec(g: &GrowthArgs) -> std::result::Result<GrowthSpec, CliError> {
    let p = GrowthSpec::parse_p(&g.p).map_err(|e| CliError::Config(e.to_string()))?;
    GrowthSpec::new(p, g.n).map_err(|e| CliError::Config(e.to_string()))
}

fn output(out: &OutArgs, name: &str) -> std::result::Result<PathBuf, CliError> {
    std::fs::create_dir_all(&out.out).map_err(|e| CliError::Lib(Error::Io(e)))?;
    Ok(out.out.join(name))
}

fn write_json<T: Serialize>(out: &OutArgs, name: &str, value: &T) -> std::result::Result<PathBuf, CliError> {
    let path = output(out, name)?;
    emit_report(value, &path)?;
    Ok(path)
}

fn write_text(out: &OutArgs, name: &str, text: &str) -> std::result::Result<PathBuf, CliError> {
    let path = output(out, name)?;
    std::fs::write(&path, text).map_err(Error::Io)?;
    Ok(path)
}

fn fermi_opts(op: &OpArgs) -> FermiOptions {
    FermiOptions {
        grid: op.grid,
        ..FermiOptions::default()
    }
}

fn check_grid(op: &OpArgs) -> std::result::Result<(), CliError> {
    if op.grid < 3 || op.grid % 2 == 0 {
        return Err(CliError::Config(format!(
            "--grid must be odd and at least 3, got {}",
            op.grid
        )));
    }
    if !op.level.is_finite() {
        return Err(CliError::Config("--level must be finite".into()));
    }
    Ok(())
}

fn parse_ks(s: &str) -> std::result::Result<Vec<Vec<f64>>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("invalid quasimomentum component {x:?}")))
                })
                .collect()
        })
        .collect()
}

fn parse_radii(s: &str) -> std::result::Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Config(format!("invalid radius {x:?}")))
        })
        .collect()
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Bands { op, out } => {
            check_grid(&op)?;
            let a = shift_spectrum(&load_op(&op.op)?, op.level);
            let bands = if a.is_self_adjoint() {
                band_structure(&a, op.grid)?
            } else {
                band_cloud(&a, op.grid)?
            };
            let path = write_text(&out, "bands.csv", &bands_csv(&bands))?;
            Ok(format!(
                "bands: {} points x {} bands -> {}",
                bands.points.len(),
                a.cells(),
                path.display()
            ))
        }
        Command::Spectrum { op, out } => {
            check_grid(&op)?;
            let a = shift_spectrum(&load_op(&op.op)?, op.level);
            let bands = band_structure(&a, op.grid)?;
            let intervals = spectrum_intervals(&a, &bands, 1e-10)?;
            #[derive(Serialize)]
            struct Spectrum {
                intervals: Vec<[f64; 2]>,
                gaps: Vec<[f64; 2]>,
            }
            let report = Spectrum {
                intervals: intervals.iter().map(|iv| [iv.lo, iv.hi]).collect(),
                gaps: crate::spectral::bands::gaps(&intervals)
                    .into_iter()
                    .map(|(a, b)| [a, b])
                    .collect(),
            };
            let path = write_json(&out, "spectrum.json", &report)?;
            let text: Vec<String> = report
                .intervals
                .iter()
                .map(|[a, b]| format!("[{}, {}]", format_float(*a), format_float(*b)))
                .collect();
            Ok(format!("spectrum: {} -> {}", text.join(" ∪ "), path.display()))
        }
        Command::Fermi { op, out } => {
            check_grid(&op)?;
            let a = load_op(&op.op)?;
            let pts = fermi_points(&a, op.level, &fermi_opts(&op))?;
            let path = write_json(&out, "fermi.json", &fermi_records(&pts))?;
            Ok(format!("fermi: {} point(s) -> {}", pts.len(), path.display()))
        }
        Command::LiouvilleDim { op, growth, out } => {
            check_grid(&op)?;
            let g = growth_spec(&growth)?;
            let a = load_op(&op.op)?;
            let pts = fermi_points(&a, op.level, &fermi_opts(&op))?;
            let edges: Vec<EdgeData> = pts.iter().map(EdgeData::from).collect();
            let dim = dim_vp(&edges, &g, a.dim())?;
            #[derive(Serialize)]
            struct Report<'a> {
                growth: GrowthSpec,
                dim: u64,
                status: &'a str,
                points: Vec<crate::report::FermiRecord>,
            }
            let path = write_json(
                &out,
                "liouville-dim.json",
                &Report {
                    growth: g,
                    dim: dim.value,
                    status: dim.status.as_str(),
                    points: fermi_records(&pts),
                },
            )?;
            Ok(format!(
                "liouville-dim: dim = {} ({}) -> {}",
                dim.value,
                dim.status.as_str(),
                path.display()
            ))
        }
        Command::DivisorDegree {
            op,
            divisor,
            symbol,
            out,
        } => {
            let deg = match load_divisor(&divisor)? {
                AnyDivisor::Lattice(mu) => {
                    let path = op.ok_or_else(|| CliError::Config("--op is required for lattice divisors".into()))?;
                    degree(&load_op(&path)?, &mu)?
                }
                AnyDivisor::Continuum(mu) => {
                    let d = mu.plus.space_dim().max(mu.minus.space_dim());
                    let sym = match symbol.as_str() {
                        "neg-laplacian" => Symbol::neg_laplacian(d),
                        "bilaplacian" => Symbol::bilaplacian(d),
                        s => return Err(CliError::Config(format!("unknown symbol {s:?}"))),
                    };
                    degree(&sym, &mu)?
                }
            };
            let path = write_json(&out, "divisor-degree.json", &deg)?;
            Ok(format!("divisor-degree: deg = {} -> {}", deg.degree, path.display()))
        }
        Command::Lrr {
            op,
            divisor,
            growth,
            seed,
            out,
        } => {
            check_grid(&op)?;
            let g = growth_spec(&growth)?;
            let a = load_op(&op.op)?;
            let AnyDivisor::Lattice(mu) = load_divisor(&divisor)? else {
                return Err(CliError::Config("lrr needs a lattice divisor".into()));
            };
            let pts = fermi_points(&a, op.level, &fermi_opts(&op))?;
            let shifted = shift_spectrum(&a, op.level);
            let opts = AuditOptions {
                seed,
                ..AuditOptions::default()
            };
            let audits = AuditInputs {
                q1: integrability_audit(&shifted, &pts, 1, &opts)?,
                q2: integrability_audit(&shifted, &pts, 2, &opts)?,
            };
            let edges: Vec<EdgeData> = pts.iter().map(EdgeData::from).collect();
            let report = lrr_bounds(&shifted, &mu, &g, a.dim(), &edges, &audits)?;
            let path = write_json(&out, "lrr-report.json", &report)?;
            match report.status {
                ReportStatus::Ok => Ok(format!(
                    "lrr: {} regime, lower = {}, upper = {} -> {}",
                    report.regime,
                    report.lower_bound.unwrap_or_default(),
                    report.upper_bound.unwrap_or_default(),
                    path.display()
                )),
                ReportStatus::UnverifiedHypothesis => Err(CliError::Inapplicable(format!(
                    "lrr: bounds outside the guaranteed range (unverified hypothesis) -> {}",
                    path.display()
                ))),
                ReportStatus::Inapplicable => Err(CliError::Inapplicable(format!(
                    "lrr: inapplicable, failed hypothesis {} -> {}",
                    report.failed_hypothesis.as_deref().unwrap_or("unknown"),
                    path.display()
                ))),
            }
        }
        Command::EmptyFermi { op, divisor, out } => {
            check_grid(&op)?;
            let a = shift_spectrum(&load_op(&op.op)?, op.level);
            let AnyDivisor::Lattice(mu) = load_divisor(&divisor)? else {
                return Err(CliError::Config("empty-fermi needs a lattice divisor".into()));
            };
            let margin = spectral_margin(&a, op.grid)?;
            let report = empty_fermi_bounds(&a, &mu, margin)?;
            let path = write_json(&out, "empty-fermi.json", &report)?;
            Ok(format!(
                "empty-fermi: margin = {}, lower = {}, upper = {} -> {}",
                format_float(margin),
                report.lower_bound,
                report.upper_bound,
                path.display()
            ))
        }
        Command::OracleVinf { op, n, out } => {
            check_grid(&op)?;
            if n < 0.0 || n.fract() != 0.0 {
                return Err(CliError::Config(format!(
                    "oracle-vinf needs a non-negative integer N, got {n}"
                )));
            }
            let n = n as usize;
            let a = load_op(&op.op)?;
            let pts = fermi_points(&a, op.level, &fermi_opts(&op))?;
            let ks: Vec<Vec<f64>> = pts.iter().map(|p| p.coordinates()).collect();
            let oracle = vinf_dim_oracle(&shift_spectrum(&a, op.level), &ks, n)?;
            let edges: Vec<EdgeData> = pts.iter().map(EdgeData::from).collect();
            let formula = dim_vinf(&edges, n, a.dim()).ok();
            #[derive(Serialize)]
            struct Config {
                level: f64,
                n: usize,
                grid: usize,
            }
            #[derive(Serialize)]
            struct Report {
                config: Config,
                ks: Vec<Vec<f64>>,
                per_k: Vec<usize>,
                value: usize,
                formula: Option<u64>,
                formula_status: Option<String>,
            }
            let report = Report {
                config: Config {
                    level: op.level,
                    n,
                    grid: op.grid,
                },
                ks,
                per_k: oracle.blocks.iter().map(|b| b.nullity()).collect(),
                value: oracle.total,
                formula: formula.map(|f| f.value),
                formula_status: formula.map(|f| f.status.as_str().to_string()),
            };
            let path = write_json(&out, "oracle-vinf.json", &report)?;
            Ok(format!(
                "oracle-vinf: dim = {} (formula {:?}) -> {}",
                oracle.total,
                report.formula,
                path.display()
            ))
        }
        Command::OracleContinuum {
            divisor,
            p,
            n,
            decaying,
            out,
        } => {
            let AnyDivisor::Continuum(mu) = load_divisor(&divisor)? else {
                return Err(CliError::Config("oracle-continuum needs a continuum divisor".into()));
            };
            let growth = match (decaying, p, n) {
                (true, None, None) => ContinuumGrowth::Decaying,
                (false, p, n) => growth_spec(&GrowthArgs {
                    p: p.unwrap_or_else(|| "inf".into()),
                    n: n.unwrap_or(0.0),
                })
                .map(ContinuumGrowth::Growth)?,
                _ => return Err(CliError::Config("--decaying excludes --p and --N".into())),
            };
            let value = continuum_space_dim(&mu, &growth)?;
            #[derive(Serialize)]
            struct Report {
                config: ContinuumGrowth,
                value: usize,
            }
            let path = write_json(&out, "oracle-continuum.json", &Report { config: growth, value })?;
            Ok(format!("oracle-continuum: dim = {value} -> {}", path.display()))
        }
        Command::OracleDedekind { ks, seed, out } => {
            let ks = parse_ks(&ks)?;
            let cert = dedekind_shifts(&ks)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let trials = 1000;
            let violations = verify_certificate(&ks, &cert, trials, &mut rng);
            #[derive(Serialize)]
            struct Report {
                config: Vec<Vec<f64>>,
                seed: u64,
                certificate: crate::oracles::DedekindCertificate,
                trials: usize,
                violations: usize,
            }
            let path = write_json(
                &out,
                "oracle-dedekind.json",
                &Report {
                    config: ks,
                    seed,
                    certificate: cert.clone(),
                    trials,
                    violations,
                },
            )?;
            Ok(format!(
                "oracle-dedekind: shifts = {:?}, C = {}, violations = {violations} -> {}",
                cert.shifts,
                format_float(cert.constant),
                path.display()
            ))
        }
        Command::Green {
            op,
            radius,
            divisor,
            radii,
            out,
        } => {
            check_grid(&op)?;
            let a = shift_spectrum(&load_op(&op.op)?, op.level);
            let g = green_function(&a, &LatticePoint::origin(a.dim()), radius)?;
            let estimate = match divisor {
                Some(path) => {
                    let AnyDivisor::Lattice(mu) = load_divisor(&path)? else {
                        return Err(CliError::Config("green needs a lattice divisor".into()));
                    };
                    Some(truncated_l_dim_estimate(&a, &mu, &parse_radii(&radii)?)?)
                }
                None => None,
            };
            #[derive(Serialize)]
            struct Report<'a> {
                green: &'a crate::oracles::GreenFunction,
                truncated_estimate: Option<crate::oracles::TruncatedEstimate>,
            }
            write_text(&out, "green.csv", &window_csv(&g.values, a.dim()))?;
            let path = write_json(
                &out,
                "green.json",
                &Report {
                    green: &g,
                    truncated_estimate: estimate.clone(),
                },
            )?;
            let est = estimate
                .map(|e| format!(", truncated dim = {:?}", e.stabilized))
                .unwrap_or_default();
            Ok(format!(
                "green: decay rate = {}, R² = {}{est} -> {}",
                format_float(g.fit.rate),
                format_float(g.fit.r_squared),
                path.display()
            ))
        }
        Command::PrincipalEigenvalue { op, seed, out } => {
            check_grid(&op)?;
            let a = shift_spectrum(&load_op(&op.op)?, op.level);
            let opts = PrincipalOptions {
                seed,
                ..PrincipalOptions::default()
            };
            let curve = maximize_principal(&a, &opts)?;
            #[derive(Serialize)]
            struct Concavity {
                trials: usize,
                violations: usize,
                worst: f64,
            }
            #[derive(Serialize)]
            struct Report {
                xi0: Vec<f64>,
                lambda_max: f64,
                gradient_norm: f64,
                concavity: Concavity,
                seed: u64,
            }
            let path = write_json(
                &out,
                "principal-eigenvalue.json",
                &Report {
                    xi0: curve.xi0.clone(),
                    lambda_max: curve.lambda_max,
                    gradient_norm: curve.gradient_norm,
                    concavity: Concavity {
                        trials: curve.concavity.trials,
                        violations: curve.concavity.violations,
                        worst: curve.concavity.worst,
                    },
                    seed,
                },
            )?;
            Ok(format!(
                "principal-eigenvalue: max = {} at xi = {:?} -> {}",
                format_float(curve.lambda_max),
                curve.xi0,
                path.display()
            ))
        }
    }
}
