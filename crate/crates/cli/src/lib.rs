//! Command-line front end: argument parsing, dispatch and JSON reports.
//!
//! Every report is a single JSON document with keys in alphabetical order,
//! rationals as `"p/q"` strings and floating values as fixed-width decimal
//! strings, so identical invocations give byte-identical output.

use std::str::FromStr;

use clap::{Parser, Subcommand};
use dessin_core::belyi::{
    certify, compute_belyi, solve_small_system, BelyiCertificate, BelyiError, ExactRationalFunction,
    RationalPolynomial,
};
use dessin_core::dessins::{build_family_dessin, DessinError, ExportFormat, VertexClass};
use dessin_core::hypergeometric::{
    schwarz_map, solve_hg, vertex_angle_exponent, HGParams, HypergeometricError, Vertex,
};
use dessin_core::lattice::{classify_division_points, EisensteinPoint};
use dessin_core::numeric::{to_decimal, Projective};
use dessin_core::quotients::{quotient_ramification, verify_composition_cover, QuotientError};
use dessin_core::weierstrass::{LatticeScaling, WeierstrassError};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use serde_json::{json, Value};
use thiserror::Error;

/// Environment variable read for `--precision` when the flag is absent.
pub const PRECISION_ENV: &str = "DESSIN_PRECISION";
pub const DEFAULT_PRECISION: f64 = 1e-12;
pub const PRECISION_RANGE: (f64, f64) = (1e-14, 1e-6);
pub const DEFAULT_SAMPLES: usize = 1000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("{0}")]
    Parse(String),
    /// `--help` or `--version` output.
    #[error("{0}")]
    Info(String),
    #[error(transparent)]
    Belyi(#[from] BelyiError),
    #[error(transparent)]
    Dessin(#[from] DessinError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Hypergeometric(#[from] HypergeometricError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => EXIT_OK,
            CliError::Usage { .. } | CliError::Parse(_) => EXIT_USAGE,
            _ => EXIT_VERIFICATION,
        }
    }

    fn usage(flag: &str, message: impl Into<String>) -> Self {
        CliError::Usage { flag: flag.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Generate,
    PhiValues,
    Belyi,
    Verify,
    Schwarz,
    Quotient,
    CoverCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Svg,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `--n`, `--p` or `--samples`, depending on the command; 0 for `schwarz`.
    pub n_or_p: u64,
    pub precision: f64,
    pub output_format: OutputFormat,
    pub exact: bool,
    /// Exponent differences for `schwarz`.
    pub exponents: Option<(Rational64, Rational64, Rational64)>,
}

#[derive(Debug, Parser)]
#[command(name = "dessin", about = "Dessins d'enfants, Belyi maps and related checks", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Target absolute precision, in [1e-14, 1e-6]
    #[arg(long, global = true)]
    precision: Option<f64>,
    /// Output format: json, or dot/svg for `generate`
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Permutation pair of the dessin D_n
    Generate {
        #[arg(long)]
        n: u64,
    },
    /// Classified division points and their phi values
    PhiValues {
        #[arg(long)]
        n: u64,
    },
    /// Belyi function f_n with its certificate
    Belyi {
        #[arg(long)]
        n: u64,
        /// Emit exact rational coefficients
        #[arg(long)]
        exact: bool,
    },
    /// Full consistency check of D_n and f_n
    Verify {
        #[arg(long)]
        n: u64,
    },
    /// Schwarz triangle map: boundary images and vertex angles
    Schwarz {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Riemann-Hurwitz data for an automorphism of prime order p
    Quotient {
        #[arg(long)]
        p: u64,
    },
    /// Numeric check of the degree-6 composition cover
    CoverCheck {
        #[arg(long, default_value_t = DEFAULT_SAMPLES as u64)]
        samples: u64,
    },
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational64, CliError> {
    Rational64::from_str(s.trim()).map_err(|_| CliError::usage(flag, format!("'{s}' is not a rational p/q")))
}

fn validate_precision(flag: &str, p: f64) -> Result<f64, CliError> {
    let (lo, hi) = PRECISION_RANGE;
    if !(lo..=hi).contains(&p) {
        return Err(CliError::usage(flag, format!("{p:e} is outside [{lo:e}, {hi:e}]")));
    }
    Ok(p)
}

/// Parses the command line. `--precision` wins over `env_precision`, which
/// wins over the default.
pub fn parse_args<I, T>(args: I, env_precision: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Parse(e.to_string()),
    })?;
    let precision = match (cli.precision, env_precision) {
        (Some(p), _) => validate_precision("--precision", p)?,
        (None, Some(s)) => {
            let p = s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(PRECISION_ENV, format!("'{s}' is not a number")))?;
            validate_precision(PRECISION_ENV, p)?
        }
        (None, None) => DEFAULT_PRECISION,
    };
    let output_format = match cli.format.as_str() {
        "json" => OutputFormat::Json,
        "dot" => OutputFormat::Dot,
        "svg" => OutputFormat::Svg,
        other => return Err(CliError::usage("--format", format!("'{other}' is not one of json, dot, svg"))),
    };
    let positive = |flag: &str, v: u64| {
        if v == 0 {
            Err(CliError::usage(flag, "must be positive"))
        } else {
            Ok(v)
        }
    };
    let (command, n_or_p, exact, exponents) = match cli.command {
        Sub::Generate { n } => (Command::Generate, positive("--n", n)?, false, None),
        Sub::PhiValues { n } => (Command::PhiValues, positive("--n", n)?, false, None),
        Sub::Belyi { n, exact } => (Command::Belyi, positive("--n", n)?, exact, None),
        Sub::Verify { n } => (Command::Verify, positive("--n", n)?, false, None),
        Sub::Schwarz { lambda, mu, nu } => {
            let e = (parse_rational("--lambda", &lambda)?, parse_rational("--mu", &mu)?, parse_rational("--nu", &nu)?);
            (Command::Schwarz, 0, false, Some(e))
        }
        Sub::Quotient { p } => (Command::Quotient, p, false, None),
        Sub::CoverCheck { samples } => {
            if samples < 100 {
                return Err(CliError::usage("--samples", format!("{samples} is below the minimum of 100")));
            }
            (Command::CoverCheck, samples, false, None)
        }
    };
    if command != Command::Generate && output_format != OutputFormat::Json {
        return Err(CliError::usage("--format", "graphics formats are only available for generate"));
    }
    if matches!(command, Command::Generate | Command::PhiValues | Command::Belyi | Command::Verify)
        && n_or_p > u32::MAX as u64
    {
        return Err(CliError::usage("--n", "too large"));
    }
    Ok(RunConfig { command, n_or_p, precision, output_format, exact, exponents })
}

/// Exit status and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, v: &Value) -> Self {
        let mut stdout = serde_json::to_vec(v).expect("serializable");
        stdout.push(b'\n');
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(e: &CliError) -> Self {
        let msg = e.to_string();
        let stderr = if msg.starts_with("error") { msg } else { format!("error: {msg}\n") };
        Outcome { code: e.exit_code(), stdout: Vec::new(), stderr }
    }
}

/// Parses and runs; never panics on bad input.
pub fn main_with<I, T>(args: I, env_precision: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(args, env_precision) {
        Ok(cfg) => run(&cfg),
        Err(CliError::Info(msg)) => Outcome { code: EXIT_OK, stdout: msg.into_bytes(), stderr: String::new() },
        Err(e) => Outcome::error(&e),
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let result = match config.command {
        Command::Generate => return generate(config),
        Command::PhiValues => phi_values(config),
        Command::Belyi => belyi(config),
        Command::Verify => verify(config),
        Command::Schwarz => schwarz(config),
        Command::Quotient => quotient(config),
        Command::CoverCheck => cover_check(config),
    };
    match result {
        Ok((passed, v)) => Outcome::report(if passed { EXIT_OK } else { EXIT_VERIFICATION }, &v),
        Err(e) => Outcome::error(&e),
    }
}

fn decimal(x: f64) -> String {
    to_decimal(x)
}

/// `{"im": ..., "re": ...}`, or the string `"inf"`.
pub fn complex_json(z: Option<Complex64>) -> Value {
    match z {
        Some(z) => json!({ "im": decimal(z.im), "re": decimal(z.re) }),
        None => json!("inf"),
    }
}

fn generate(config: &RunConfig) -> Outcome {
    let d = match build_family_dessin(config.n_or_p as u32) {
        Ok(d) => d,
        Err(e) => return Outcome::error(&e.into()),
    };
    let mut stdout = match config.output_format {
        OutputFormat::Json => d.to_json().into_bytes(),
        OutputFormat::Dot => d.export_graph(ExportFormat::Dot),
        OutputFormat::Svg => d.export_graph(ExportFormat::Svg),
    };
    if stdout.last() != Some(&b'\n') {
        stdout.push(b'\n');
    }
    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
}

fn point_json(p: EisensteinPoint, class: VertexClass, on_boundary: bool, phi: Projective<Complex64>) -> Value {
    json!({
        "a": p.a.to_string(),
        "b": p.b.to_string(),
        "class": class.as_str(),
        "on_boundary": on_boundary,
        "phi": complex_json(phi.finite()),
    })
}

fn phi_values(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let n = config.n_or_p as u32;
    let scaling = LatticeScaling::<f64>::new(config.precision)?;
    let classes = classify_division_points(n);
    let mut points = Vec::new();
    let corners = [
        (classes.bottom, classes.bottom_class),
        (classes.p0, VertexClass::Pole),
        (classes.top, classes.top_class),
    ];
    for (p, class) in corners {
        points.push(point_json(p, class, true, scaling.phi_point(p)));
    }
    for class in [VertexClass::Zero, VertexClass::One, VertexClass::Pole] {
        for p in classes.points(class) {
            points.push(point_json(p.point, class, p.on_boundary, scaling.phi_point(p.point)));
        }
    }
    Ok((
        true,
        json!({
            "c": decimal(scaling.c),
            "n": n,
            "points": points,
            "precision": decimal(config.precision),
        }),
    ))
}

fn polynomial_json(p: &RationalPolynomial, exact: bool) -> Value {
    if exact {
        json!(p.to_strings())
    } else {
        json!(p.coeffs().iter().map(|c| decimal(rational_to_f64(c))).collect::<Vec<_>>())
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    use dessin_core::numeric::Real;
    f64::from_ratio(q)
}

fn certificate_json(c: &BelyiCertificate) -> Value {
    json!({
        "degree": c.degree,
        "exact_pass": c.exact_pass,
        "max_critical_residual": decimal(c.max_critical_residual),
        "one_pattern": c.one_pattern,
        "passes": c.passes(),
        "passport_match": c.passport_match,
        "pole_pattern": c.pole_pattern,
        "zero_pattern": c.zero_pattern,
    })
}

fn belyi(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let c = compute_belyi(config.n_or_p as u32, config.precision)?;
    let passed = c.certificate.passes();
    Ok((
        passed,
        json!({
            "certificate": certificate_json(&c.certificate),
            "coefficients": if config.exact { "exact" } else { "decimal" },
            "denominator": polynomial_json(&c.function.denominator, config.exact),
            "n": c.n,
            "normalization_residual": decimal(c.normalization_residual),
            "numerator": polynomial_json(&c.function.numerator, config.exact),
            "working_precision": serde_json::to_value(c.working_precision).expect("serializable"),
        }),
    ))
}

/// Reads the function from a `belyi --exact` report.
pub fn parse_belyi_report(report: &str) -> Result<(u32, ExactRationalFunction), CliError> {
    let v: Value = serde_json::from_str(report).map_err(|e| CliError::Parse(e.to_string()))?;
    let n = v["n"].as_u64().ok_or_else(|| CliError::Parse("missing n".into()))? as u32;
    if v["coefficients"] != "exact" {
        return Err(CliError::Parse("report does not carry exact coefficients".into()));
    }
    let poly = |key: &str| -> Result<RationalPolynomial, CliError> {
        let arr = v[key].as_array().ok_or_else(|| CliError::Parse(format!("missing {key}")))?;
        let coeffs = arr
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| BigRational::from_str(s).ok())
                    .ok_or_else(|| CliError::Parse(format!("bad coefficient {c} in {key}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RationalPolynomial::new(coeffs))
    };
    Ok((n, ExactRationalFunction::new(poly("numerator")?, poly("denominator")?)))
}

/// Certifies a parsed report against `D_n`.
pub fn recertify(report: &str) -> Result<BelyiCertificate, CliError> {
    let (n, f) = parse_belyi_report(report)?;
    Ok(certify(&f, &build_family_dessin(n)?)?)
}

fn verify(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let n = config.n_or_p as u32;
    let d = build_family_dessin(n)?;
    let genus = d.genus()?;
    let epimorphism = d.verify_333_epimorphism();
    let mirror_passport = d.mirror().passport() == d.passport();
    let c = compute_belyi(n, config.precision)?;
    let degree_law = c.function.degree() as u64 == (n as u64) * (n as u64);
    let small_system = if n == 2 {
        json!(solve_small_system()?.rational_function() == c.function)
    } else {
        Value::Null
    };
    let passed = genus == 0
        && epimorphism
        && mirror_passport
        && degree_law
        && c.certificate.passes()
        && small_system != json!(false);
    Ok((
        passed,
        json!({
            "certificate": certificate_json(&c.certificate),
            "degree_law": degree_law,
            "edges": d.edge_count(),
            "epimorphism_333": epimorphism,
            "genus": genus,
            "mirror_passport": mirror_passport,
            "n": n,
            "passes": passed,
            "small_system_match": small_system,
        }),
    ))
}

fn schwarz(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let (l, m, nu) = config.exponents.expect("schwarz carries exponents");
    let params = HGParams::new(l, m, nu)?;
    let sol = solve_hg(params, Vertex::Zero)?;
    let mut angles = serde_json::Map::new();
    let mut boundary = serde_json::Map::new();
    let mut worst_angle = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut sum = 0.0;
    for (v, e) in Vertex::ALL.iter().zip([l, m, nu]) {
        let key = serde_json::to_value(v).expect("serializable").as_str().unwrap().to_string();
        let a = vertex_angle_exponent(&sol, *v)?;
        sum += a;
        worst_angle = worst_angle.max((a - *e.numer() as f64 / *e.denom() as f64).abs());
        angles.insert(key.clone(), json!(decimal(a)));
        // the real axis through the vertex, on the principal branches
        let local = solve_hg(params, *v)?;
        let mut images = Vec::new();
        for k in 0..=16 {
            let t = -0.85 + 1.7 * k as f64 / 16.0;
            if t.abs() < 1e-9 {
                continue;
            }
            let x = v.point(Complex64::new(t, 0.0));
            let x = Complex64::new(x.re, 0.0);
            worst_residual = worst_residual.max(local.ode_residual(x)?);
            let y = schwarz_map(&local, x)?;
            images.push(json!({ "x": decimal(x.re), "y": complex_json(Some(y)) }));
        }
        boundary.insert(key, Value::Array(images));
    }
    let passed = worst_angle < 1e-3 && worst_residual < 1e-8;
    Ok((
        passed,
        json!({
            "angle_sum": decimal(sum),
            "angles": angles,
            "boundary": boundary,
            "max_angle_error": decimal(worst_angle),
            "max_ode_residual": decimal(worst_residual),
            "params": { "lambda": l.to_string(), "mu": m.to_string(), "nu": nu.to_string() },
            "passes": passed,
            "regime": serde_json::to_value(params.regime()).expect("serializable"),
        }),
    ))
}

fn quotient(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let r = quotient_ramification(config.n_or_p).map_err(|e| match e {
        QuotientError::NotPrime(_) | QuotientError::TooSmall(_) => CliError::usage("--p", e.to_string()),
        other => other.into(),
    })?;
    Ok((r.riemann_hurwitz_holds(), serde_json::to_value(r).expect("serializable")))
}

fn cover_check(config: &RunConfig) -> Result<(bool, Value), CliError> {
    let c = verify_composition_cover(config.n_or_p as usize)?;
    let mut v = serde_json::to_value(&c).expect("serializable");
    v["max_critical_residual"] = json!(decimal(c.max_critical_residual));
    v["passes"] = json!(c.passes());
    Ok((c.passes(), v))
}
