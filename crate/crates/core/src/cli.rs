//! Command-line front end. Every subcommand prints one JSON report on stdout;
//! diagnostics go to stderr.
//!
//! Exit status: 0 when the report passes (or the command only computes),
//! 1 when a check fails or cannot be evaluated, 2 on usage and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::area::RegionSpec;
use crate::contour::{parse_reals, ContourSpec};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jet::{Complex, Elementary};
use crate::render::{render_domain_coloring, Window};
use crate::report::CheckReport;
use crate::theorems::{self as th, SamplePoints, StructuralVariant, TransformKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const GRAMMAR: &str = "\
expression grammar:
  expr   := term (('+' | '-') term)*
  term   := factor (('*' | '/') factor)*
  factor := unary ('^' factor)?
  unary  := '-' unary | atom
  atom   := NUMBER | i | pi | e | z | zbar | IDENT '(' expr ')' | '(' expr ')'
  IDENT  := exp | ln | sin | cos | sqrt | conj";

#[derive(Debug, Parser)]
#[command(
    name = "structhol",
    version,
    about = "Checks for structural holomorphic functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural residual ∂w/∂z̄ + w·∂K/∂z̄ on a grid.
    Residual(ResidualArgs),
    /// Residual of ∂w/∂z̄ + A·w + B·conj(w) = φ on a grid.
    Cbv(CbvArgs),
    /// ∮ f dz against 2i∬ ∂f/∂z̄ over a region.
    Green(GreenArgs),
    /// ∮ w̃ dz with w̃ = w, K·w or e^K·w.
    CauchyTheorem(CauchyTheoremArgs),
    /// k-th derivative at a point from the Cauchy integral formula.
    CauchyEval(CauchyEvalArgs),
    /// Taylor coefficients about the origin.
    Taylor(TaylorArgs),
    /// Cauchy's estimate |w⁽ⁿ⁾(a)| ≤ n!M/Rⁿ.
    Estimate(EstimateArgs),
    /// Cauchy–Pompeiu reconstruction of w(ζ) on a disc.
    Pompeiu(PompeiuArgs),
    /// Morera test over small probe circles.
    Morera(MoreraArgs),
    /// Builds w = φ·e^(−K) and reports its structural residual.
    Solve(SolveArgs),
    /// Recovers Φ = e^K·w and checks constancy and the modulus law.
    Liouville(LiouvilleArgs),
    /// Location of the maximum of |w| over a disc.
    Maxmod(MaxmodArgs),
    /// Domain-colouring image as binary PPM.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Sample region, `rect:x0,y0,x1,y1` or `disc:cx,cy,r`.
    #[arg(long, default_value = "rect:-1,-1,1,1", allow_hyphen_values = true)]
    pub grid: String,
    /// Grid resolution `N` or `N,M`.
    #[arg(long, default_value = "32")]
    pub res: String,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: String,
    #[command(flatten)]
    pub grid: GridArgs,
    /// `reduced` or `strong`.
    #[arg(long, default_value = "reduced")]
    pub variant: String,
    #[arg(long, default_value_t = th::JET_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CbvArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long = "A", default_value = "0", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long = "B", default_value = "0", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub phi: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = th::JET_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value = "disc:0,0,1", allow_hyphen_values = true)]
    pub region: String,
    /// Area resolution `N` or `N,M`; defaults depend on the region kind.
    #[arg(long)]
    pub res: Option<String>,
    /// Nodes on the boundary (per edge for rectangles).
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = th::GREEN_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CauchyTheoremArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long = "K", default_value = "0", allow_hyphen_values = true)]
    pub k: String,
    /// `circle:cx,cy,r[,cw|ccw]` or `poly:x,y;x,y;...`.
    #[arg(long, default_value = "circle:0,0,1", allow_hyphen_values = true)]
    pub contour: String,
    /// `none`, `K` or `expK`.
    #[arg(long, default_value = "none")]
    pub transform: String,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = th::QUADRATURE_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MoreraProbeArgs {
    /// Number of Morera probe circles.
    #[arg(long, default_value_t = 16)]
    pub probes: usize,
    #[arg(long = "probe-radius", default_value_t = 0.05)]
    pub probe_radius: f64,
}

#[derive(Debug, Args)]
pub struct CauchyEvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Centre `x,y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Evaluation point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Derivative order.
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[command(flatten)]
    pub probes: MoreraProbeArgs,
}

#[derive(Debug, Args)]
pub struct TaylorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 8)]
    pub kmax: u32,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[command(flatten)]
    pub probes: MoreraProbeArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Centre `x,y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long = "R", default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 5)]
    pub nmax: u32,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = th::ESTIMATE_SLACK)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct PompeiuArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value = "disc:0,0,1", allow_hyphen_values = true)]
    pub region: String,
    /// Point `x,y` inside the disc.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: String,
    #[arg(long)]
    pub res: Option<String>,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = th::POMPEIU_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MoreraArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value = "disc:0,0,1", allow_hyphen_values = true)]
    pub region: String,
    #[command(flatten)]
    pub probes: MoreraProbeArgs,
    #[arg(long, default_value_t = th::QUADRATURE_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = th::JET_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct LiouvilleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub probes: MoreraProbeArgs,
    #[arg(long, default_value_t = th::JET_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MaxmodArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value = "disc:0,0,1", allow_hyphen_values = true)]
    pub region: String,
    #[arg(long, default_value = "256,256")]
    pub res: String,
    #[arg(long, default_value_t = th::CONSTANT_SPREAD)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// `x0,y0,x1,y1`
    #[arg(long, default_value = "-2,-2,2,2", allow_hyphen_values = true)]
    pub window: String,
    /// `W,H` in pixels, each at least 16.
    #[arg(long, default_value = "256,256")]
    pub size: String,
    #[arg(long)]
    pub out: PathBuf,
}

/// Error classes that map onto exit codes.
enum Failure {
    /// Bad flags, specs or expressions: no report is produced.
    Usage(String),
    /// The inputs were valid but the computation broke down.
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidSpec(_)
            | Error::Placement { .. }
            | Error::PointOnContour { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

fn expression(flag: &str, text: &str) -> Result<Expr, Failure> {
    parse(text).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.offset()));
        Failure::Usage(format!("--{flag}: {e}\n  {text}\n  {caret}\n{GRAMMAR}"))
    })
}

fn point(flag: &str, text: &str) -> Result<Complex, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let v = parse_reals(&parts, flag).map_err(Failure::from)?;
    match v[..] {
        [x] => Ok(Complex::new(x, 0.0)),
        [x, y] => Ok(Complex::new(x, y)),
        _ => Err(Failure::Usage(format!(
            "--{flag}: expected x or x,y, got `{text}`"
        ))),
    }
}

fn pair(flag: &str, text: &str) -> Result<(usize, usize), Failure> {
    let parts: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    match parts.as_deref() {
        Ok([n]) => Ok((*n, *n)),
        Ok([n, m]) => Ok((*n, *m)),
        _ => Err(Failure::Usage(format!(
            "--{flag}: expected N or N,M, got `{text}`"
        ))),
    }
}

fn region(text: &str, res: Option<&str>) -> Result<RegionSpec, Failure> {
    let res = res.map(|r| pair("res", r)).transpose()?;
    Ok(RegionSpec::parse(text, res)?)
}

fn grid(g: &GridArgs) -> Result<SamplePoints, Failure> {
    Ok(region(&g.grid, Some(&g.res))?.into())
}

/// Morera precondition attached to reports of Cauchy-formula computations.
fn annotate_holomorphy(
    report: CheckReport,
    w: &Expr,
    disc: RegionSpec,
    probes: &MoreraProbeArgs,
    err: &mut dyn Write,
) -> Result<CheckReport, Failure> {
    let probe_radius = probes.probe_radius.min(0.25 * disc_radius(&disc));
    let m = th::morera_classify(
        w,
        &disc,
        probes.probes,
        probe_radius,
        th::QUADRATURE_TOLERANCE,
    )?;
    if !m.pass {
        let _ = writeln!(err, "warning: `{w}` is not numerically holomorphic on {disc}; the Cauchy formula does not apply");
    }
    Ok(report.metric("holomorphic", m.pass).metric(
        "morera_max_scaled_integral",
        m.headline().map_or(f64::NAN, |(_, v)| v.scalar()),
    ))
}

fn disc_radius(r: &RegionSpec) -> f64 {
    match r.region {
        crate::area::Region::Disc { radius, .. } => radius,
        crate::area::Region::Rectangle { min, max } => (max.re - min.re).min(max.im - min.im) / 2.0,
    }
}

fn execute(command: &Command, err: &mut dyn Write) -> Result<CheckReport, Failure> {
    Ok(match command {
        Command::Residual(a) => {
            let variant: StructuralVariant = a.variant.parse()?;
            th::structural_residual(
                &expression("w", &a.w)?,
                &expression("K", &a.k)?,
                &grid(&a.grid)?,
                variant,
                a.tol,
            )?
        }
        Command::Cbv(a) => th::cbv_residual(
            &expression("w", &a.w)?,
            &expression("A", &a.a)?,
            &expression("B", &a.b)?,
            &expression("phi", &a.phi)?,
            &grid(&a.grid)?,
            a.tol,
        )?,
        Command::Green(a) => {
            let r = region(&a.region, a.res.as_deref())?;
            th::green_identity_check(&expression("f", &a.f)?, &r, a.n, a.tol)?
        }
        Command::CauchyTheorem(a) => {
            let transform: TransformKind = a.transform.parse()?;
            let contour = ContourSpec::parse(&a.contour)?;
            th::generalized_cauchy_check(
                &expression("w", &a.w)?,
                &expression("K", &a.k)?,
                &contour,
                transform,
                a.n,
                a.tol,
            )?
        }
        Command::CauchyEval(a) => {
            let w = expression("w", &a.w)?;
            let (center, z) = (point("center", &a.center)?, point("z", &a.z)?);
            let value = th::cauchy_eval(&w, center, a.radius, z, a.k, a.n)?;
            let report = CheckReport::computation("cauchy_eval").metric("value", value);
            annotate_holomorphy(
                report,
                &w,
                RegionSpec::disc(center, a.radius),
                &a.probes,
                err,
            )?
        }
        Command::Taylor(a) => {
            let w = expression("w", &a.w)?;
            let coeffs = th::taylor_coefficients(&w, a.radius, a.kmax, a.n)?;
            let mut report = CheckReport::computation("taylor");
            for (k, c) in coeffs.iter().enumerate() {
                report = report.metric(&format!("a_{k}"), *c);
            }
            let disc = RegionSpec::disc(Complex::new(0.0, 0.0), a.radius);
            annotate_holomorphy(report, &w, disc, &a.probes, err)?
        }
        Command::Estimate(a) => th::cauchy_estimate_check(
            &expression("w", &a.w)?,
            point("a", &a.a)?,
            a.r,
            a.nmax,
            a.n,
            a.tol,
        )?,
        Command::Pompeiu(a) => th::pompeiu_check(
            &expression("w", &a.w)?,
            &region(&a.region, a.res.as_deref())?,
            point("zeta", &a.zeta)?,
            a.n,
            a.tol,
        )?,
        Command::Morera(a) => th::morera_classify(
            &expression("w", &a.w)?,
            &region(&a.region, None)?,
            a.probes.probes,
            a.probes.probe_radius,
            a.tol,
        )?,
        Command::Solve(a) => {
            let k = expression("K", &a.k)?;
            let w = th::build_structural_solution(&expression("phi", &a.phi)?, &k);
            let mut report = th::structural_residual(
                &w,
                &k,
                &grid(&a.grid)?,
                StructuralVariant::ReducedForm,
                a.tol,
            )?;
            report.check = "solve".into();
            report.input("solution", w)
        }
        Command::Liouville(a) => {
            let (w, k) = (expression("w", &a.w)?, expression("K", &a.k)?);
            let points = grid(&a.grid)?;
            let SamplePoints::Region(area) = &points else {
                unreachable!("grids are always regions")
            };
            let product = Expr::mul(Expr::call(Elementary::Exp, k.clone()), w.clone());
            let morera = th::morera_classify(
                &product,
                area,
                a.probes.probes,
                a.probes.probe_radius.min(0.25 * disc_radius(area)),
                th::QUADRATURE_TOLERANCE,
            )?;
            let _ = writeln!(
                err,
                "e^K·w is {}numerically holomorphic on {area}",
                if morera.pass { "" } else { "not " }
            );
            let phi = th::recover_phi(&w, &k, &points, a.tol)?;
            let law = th::modulus_law_check(&w, &k, &points, a.tol)?;
            let mut report = CheckReport::new("liouville", "deviation", phi.deviation, a.tol)
                .metric("phi_hat", phi.phi_hat)
                .metric("entire", morera.pass)
                .metric(
                    "morera_max_scaled_integral",
                    morera.headline().map_or(f64::NAN, |(_, v)| v.scalar()),
                )
                .require(morera.pass && law.pass);
            for (key, value) in law.metrics.iter() {
                if key != "phi_hat" && key != "phi_deviation" {
                    let key = if key == "max_deviation" {
                        "modulus_max_deviation".to_string()
                    } else {
                        format!("modulus_{key}")
                    };
                    report = report.metric(&key, *value);
                }
            }
            report.points(phi.report.n_points, phi.report.n_skipped)
        }
        Command::Maxmod(a) => {
            let w = expression("w", &a.w)?;
            let r = region(&a.region, Some(&a.res))?;
            th::max_modulus_scan(&w, &r)?.report(&w, &r, a.tol)
        }
        Command::Render(a) => {
            let f = expression("f", &a.f)?;
            let window = Window::parse(&a.window)?;
            let (width, height) = pair("size", &a.size)?;
            let image = render_domain_coloring(&f, window, width, height, &a.out)?;
            let black = image.pixels.iter().filter(|p| **p == [0, 0, 0]).count();
            CheckReport::computation("render")
                .metric("width", width)
                .metric("height", height)
                .metric("black_pixels", black)
                .points(width * height, black)
        }
    })
}

/// `--flag value` pairs in the order given, with `=` forms split.
fn echoed_flags(args: &[String]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        if let Some(flag) = args[i].strip_prefix("--") {
            if let Some((k, v)) = flag.split_once('=') {
                out.push((k.to_string(), v.to_string()));
            } else if i + 1 < args.len() {
                out.push((flag.to_string(), args[i + 1].clone()));
                i += 1;
            }
        }
        i += 1;
    }
    out
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let text: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let echoed = echoed_flags(&text[1..]);
    let (report, code) = match execute(&cli.command, err) {
        Ok(mut report) => {
            let derived = std::mem::take(&mut report.inputs);
            report.inputs = echoed;
            for (k, v) in derived {
                if !report.inputs.iter().any(|(e, _)| *e == k) {
                    report.inputs.push((k, v));
                }
            }
            let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
            (report, code)
        }
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            return EXIT_USAGE;
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            let mut report = CheckReport::computation(subcommand_name(&cli.command)).require(false);
            report.inputs = echoed;
            report.inputs.push(("error".into(), e.to_string()));
            (report, EXIT_FAIL)
        }
    };
    let _ = writeln!(out, "{}", report.to_json());
    if !report.pass {
        let _ = writeln!(err, "{}: check failed", report.check);
    }
    code
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Residual(_) => "structural_residual",
        Command::Cbv(_) => "cbv_residual",
        Command::Green(_) => "green_identity",
        Command::CauchyTheorem(_) => "generalized_cauchy",
        Command::CauchyEval(_) => "cauchy_eval",
        Command::Taylor(_) => "taylor",
        Command::Estimate(_) => "cauchy_estimate",
        Command::Pompeiu(_) => "pompeiu",
        Command::Morera(_) => "morera",
        Command::Solve(_) => "solve",
        Command::Liouville(_) => "liouville",
        Command::Maxmod(_) => "max_modulus",
        Command::Render(_) => "render",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["structhol"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn flag_echo() {
        let args: Vec<String> = ["residual", "--w", "-z", "--res=8"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            echoed_flags(&args),
            vec![("w".into(), "-z".into()), ("res".into(), "8".into())]
        );
    }

    #[test]
    fn residual_passes() {
        let (code, out, _) = call(&[
            "residual",
            "--w",
            "exp(-conj(z))",
            "--K",
            "conj(z)",
            "--grid",
            "rect:-1,-1,1,1",
            "--res",
            "32",
        ]);
        assert_eq!(code, 0);
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert!(r.pass);
        assert!(r.real("max_abs").unwrap() < 1e-10);
        assert_eq!(r.inputs[0], ("w".to_string(), "exp(-conj(z))".to_string()));
    }

    #[test]
    fn syntax_error_exit_code() {
        let (code, out, err) = call(&["residual", "--w", "z +", "--K", "0"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("offset 3"), "{err}");
        let (code, _, _) = call(&["residual", "--w", "z", "--K", "0", "--bogus", "1"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["cauchy-theorem", "--w", "z", "--transform", "sideways"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn cauchy_theorem_with_k_fails() {
        let (code, out, _) = call(&[
            "cauchy-theorem",
            "--w",
            "exp(-conj(z))",
            "--K",
            "conj(z)",
            "--contour",
            "circle:0,0,1",
            "--transform",
            "K",
        ]);
        assert_eq!(code, 1);
        let r = CheckReport::from_json(out.trim()).unwrap();
        let v = r.complex("integral_value").unwrap();
        assert!((v - Complex::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-10);
    }

    #[test]
    fn runtime_failure_still_reports() {
        let (code, out, _) = call(&[
            "cauchy-theorem",
            "--w",
            "1/(z-1)",
            "--contour",
            "circle:0,0,1",
        ]);
        assert_eq!(code, 1);
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert!(!r.pass);
        assert!(r.inputs.iter().any(|(k, _)| k == "error"));
    }

    #[test]
    fn computations_exit_zero() {
        let (code, out, err) = call(&["cauchy-eval", "--w", "conj(z)", "--z", "0.2,0"]);
        assert_eq!(code, 0);
        assert!(err.contains("not numerically holomorphic"));
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert_eq!(r.real("holomorphic"), Some(0.0));
        let (code, out, _) = call(&["taylor", "--w", "3*z", "--radius", "2", "--kmax", "4"]);
        assert_eq!(code, 0);
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert!((r.complex("a_1").unwrap() - Complex::new(3.0, 0.0)).norm() < 1e-10);
        assert_eq!(r.real("holomorphic"), Some(1.0));
    }

    #[test]
    fn solve_and_liouville() {
        let (code, out, _) = call(&["solve", "--phi", "2+i", "--K", "conj(z)^2"]);
        assert_eq!(code, 0);
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert_eq!(r.check, "solve");
        assert!(r.inputs.iter().any(|(k, _)| k == "solution"));
        let (code, out, _) = call(&["liouville", "--w", "exp(-conj(z))", "--K", "conj(z)"]);
        assert_eq!(code, 0, "{out}");
        let (code, _, _) = call(&[
            "liouville",
            "--w",
            "exp(-conj(z)) + 0.001*conj(z)",
            "--K",
            "conj(z)",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn maxmod_and_render() {
        let (code, out, _) = call(&["maxmod", "--w", "exp(z)", "--res", "32,64"]);
        assert_eq!(code, 0);
        let r = CheckReport::from_json(out.trim()).unwrap();
        assert_eq!(r.real("on_boundary"), Some(1.0));
        let dir = std::env::temp_dir().join(format!("structhol-render-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z.ppm");
        let (code, _, _) = call(&[
            "render",
            "--f",
            "z",
            "--size",
            "16,16",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(std::fs::read(&path)
            .unwrap()
            .starts_with(b"P6\n16 16\n255\n"));
        std::fs::remove_dir_all(&dir).unwrap();
        let (code, _, _) = call(&["render", "--f", "z", "--size", "4,4", "--out", "/dev/null"]);
        assert_eq!(code, 2);
    }
}
