//! Command-line surface: parses arguments and input files, dispatches to
//! the library, and emits JSON reports, CSV point clouds, and SVG figures.
//!
//! Exit codes: 0 on success (certification verdicts, including failed
//! certifications, are encoded in the JSON body); 2 on invalid input or
//! usage; 3 on operational failures (solver breakdowns, ill-conditioned
//! fits, non-convergent realization searches).

mod formats;
mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::decision::{decide_polar_poly, decide_polygon, symmetrize, SymmetrizeOptions};
use crate::linalg::{characteristic_polynomial, hermitian_parts, ComplexMatrix};
use crate::numrange::{degeneracy_report, numerical_range, ConvexPolygon};
use crate::polar::{lmi_polar_boundary, polygon_polar};
use crate::rigidity::{complex_roots, kippenhahn_poly, rz_test, BivariatePoly};
use crate::Error;
use formats::{
    polar_csv, range_csv, ConfigWire, DecideReport, KippenhahnReport, MatrixWire, PolarReport,
    PolygonPolarReport, PolygonWire, RangeReport, RzFailureWire, RzReport, SymmetrizeReport,
};

/// Exit code for invalid inputs or usage.
const EXIT_INVALID_INPUT: i32 = 2;
/// Exit code for operational failures.
const EXIT_OPERATIONAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "rangeshape",
    version,
    about = "Numerical ranges, their polar sets, and shape decisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the numerical range boundary of a matrix.
    Range(RangeArgs),
    /// Sample the polar set of a matrix range, or dualize a polygon.
    Polar(PolarArgs),
    /// Interpolate the determinant polynomial det(I - xi*H - eta*K).
    Kippenhahn(KippenhahnArgs),
    /// Certify the real-zero condition of a polynomial on sampled lines.
    RzCheck(RzCheckArgs),
    /// Decide whether a shape is a numerical range of bounded matrix size.
    Decide(DecideArgs),
    /// Search for a complex symmetric matrix with the same range.
    Symmetrize(SymmetrizeArgs),
}

#[derive(Args)]
struct RangeArgs {
    /// Matrix input file.
    #[arg(short, long)]
    input: PathBuf,
    /// Number of support angles.
    #[arg(long, default_value_t = 720)]
    angles: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Write boundary samples as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Write the combined figure as SVG.
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args)]
struct PolarArgs {
    /// Matrix input file (polar of its numerical range).
    #[arg(short, long, conflicts_with = "polygon", required_unless_present = "polygon")]
    input: Option<PathBuf>,
    /// Polygon input file (geometric polar).
    #[arg(long)]
    polygon: Option<PathBuf>,
    /// Number of boundary angles (matrix input).
    #[arg(long, default_value_t = 720)]
    angles: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Write boundary samples as CSV (matrix input only).
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Write the combined figure as SVG.
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args)]
struct KippenhahnArgs {
    /// Matrix input file.
    #[arg(short, long)]
    input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct RzCheckArgs {
    /// Polynomial input file.
    #[arg(long)]
    poly: PathBuf,
    /// Number of sampled directions in [0, pi).
    #[arg(long, default_value_t = 180)]
    directions: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    /// Polar defining polynomial input file.
    #[arg(long, conflicts_with = "polygon", required_unless_present = "polygon")]
    poly: Option<PathBuf>,
    /// Polygon input file (decided through its polar product polynomial).
    #[arg(long)]
    polygon: Option<PathBuf>,
    /// Dimension bound d of the question.
    #[arg(long)]
    dim: usize,
    /// Number of sampled directions in [0, pi).
    #[arg(long, default_value_t = 180)]
    directions: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct SymmetrizeArgs {
    /// Matrix input file.
    #[arg(short, long)]
    input: PathBuf,
    /// Number of support angles in the objective.
    #[arg(long, default_value_t = 180)]
    angles: usize,
    /// Convergence tolerance relative to the range diameter.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Maximum randomized restarts.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Seed of the restart perturbations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

/// A run abort carrying its exit code and a one-line diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidMatrix(_)
            | Error::NotHermitian { .. }
            | Error::InvalidPolygon(_)
            | Error::InvalidPolynomial(_)
            | Error::NotAnchored => EXIT_INVALID_INPUT,
            _ => EXIT_OPERATIONAL,
        };
        Self {
            code,
            message: format!("error: {e}"),
        }
    }
}

type RunResult = Result<i32, Failure>;

/// Parses `argv`, runs the requested command, and returns the process exit
/// code.  Diagnostics go to the error stream; reports go to stdout or the
/// requested output files.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Range(args) => run_range(args),
        Command::Polar(args) => run_polar(args),
        Command::Kippenhahn(args) => run_kippenhahn(args),
        Command::RzCheck(args) => run_rz_check(args),
        Command::Decide(args) => run_decide(args),
        Command::Symmetrize(args) => run_symmetrize(args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.message);
            failure.code
        }
    }
}

/// Applies the RANGESHAPE_THREADS cap to the worker pool (0 or unset means
/// automatic sizing); repeat initialization in one process is ignored.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("RANGESHAPE_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run_range(args: RangeArgs) -> RunResult {
    if args.angles < 3 {
        return Err(Failure::invalid("--angles must be at least 3"));
    }
    let matrix = load_matrix(&args.input)?;
    let profile = numerical_range(&matrix, args.angles)?;
    let polygon = profile.polygon();
    let degeneracy = degeneracy_report(&matrix)?;

    let report = RangeReport {
        config: ConfigWire {
            command: "range",
            input_path: display_path(&args.input),
            angles: args.angles,
            directions: 0,
            tol: 0.0,
            seed: 0,
            dim: None,
            restarts: None,
            json_out: args.json_out.as_deref().map(display_path),
            csv_out: args.csv_out.as_deref().map(display_path),
            svg_out: args.svg_out.as_deref().map(display_path),
        },
        matrix_dim: matrix.dim(),
        degenerate: degeneracy.degenerate,
        segment: degeneracy
            .segment_endpoints
            .map(|(a, b)| ((a.x, a.y), (b.x, b.y))),
        samples: RangeReport::samples_of(&profile),
        polygon: PolygonWire::of(&polygon),
    };
    emit_json(&report, args.json_out.as_deref())?;
    if let Some(path) = &args.csv_out {
        write_output(path, &range_csv(&profile))?;
    }
    if let Some(path) = &args.svg_out {
        let polar = lmi_polar_boundary(&hermitian_parts(&matrix), args.angles)?;
        let figure = svg::render(
            Some(&polygon),
            polar.polygon().as_ref(),
            &eigenvalue_markers(&matrix),
        );
        write_output(path, &figure)?;
    }
    Ok(0)
}

fn run_polar(args: PolarArgs) -> RunResult {
    if args.angles < 3 {
        return Err(Failure::invalid("--angles must be at least 3"));
    }
    match (&args.input, &args.polygon) {
        (Some(input), None) => {
            let matrix = load_matrix(input)?;
            let boundary = lmi_polar_boundary(&hermitian_parts(&matrix), args.angles)?;
            let polar_polygon = boundary.polygon();
            let report = PolarReport {
                config: polar_config(&args, input),
                bounded: boundary.is_bounded(),
                samples: PolarReport::samples_of(&boundary),
                polygon: polar_polygon.as_ref().map(PolygonWire::of),
            };
            emit_json(&report, args.json_out.as_deref())?;
            if let Some(path) = &args.csv_out {
                write_output(path, &polar_csv(&boundary))?;
            }
            if let Some(path) = &args.svg_out {
                let range = numerical_range(&matrix, args.angles)?.polygon();
                let figure = svg::render(
                    Some(&range),
                    polar_polygon.as_ref(),
                    &eigenvalue_markers(&matrix),
                );
                write_output(path, &figure)?;
            }
            Ok(0)
        }
        (None, Some(polygon_path)) => {
            if args.csv_out.is_some() {
                return Err(Failure::invalid(
                    "--csv-out applies only to sampled (matrix) polars",
                ));
            }
            let polygon = load_polygon(polygon_path)?;
            let (bounded, polar, constraints) = match polygon_polar(&polygon) {
                Ok(polar) => (true, Some(polar), None),
                Err(Error::UnboundedPolar { constraints }) => (
                    false,
                    None,
                    Some(constraints.iter().map(|h| (h.a, h.b)).collect()),
                ),
                Err(e) => return Err(e.into()),
            };
            let report = PolygonPolarReport {
                config: polar_config(&args, polygon_path),
                bounded,
                polar: polar.as_ref().map(PolygonWire::of),
                constraints,
            };
            emit_json(&report, args.json_out.as_deref())?;
            if let Some(path) = &args.svg_out {
                let figure = svg::render(Some(&polygon), polar.as_ref(), &[]);
                write_output(path, &figure)?;
            }
            Ok(0)
        }
        _ => Err(Failure::invalid("provide exactly one of --input/--polygon")),
    }
}

fn polar_config(args: &PolarArgs, input: &Path) -> ConfigWire {
    ConfigWire {
        command: "polar",
        input_path: display_path(input),
        angles: args.angles,
        directions: 0,
        tol: 0.0,
        seed: 0,
        dim: None,
        restarts: None,
        json_out: args.json_out.as_deref().map(display_path),
        csv_out: args.csv_out.as_deref().map(display_path),
        svg_out: args.svg_out.as_deref().map(display_path),
    }
}

fn run_kippenhahn(args: KippenhahnArgs) -> RunResult {
    let matrix = load_matrix(&args.input)?;
    let poly = kippenhahn_poly(&hermitian_parts(&matrix))?;
    let report = KippenhahnReport {
        config: ConfigWire {
            command: "kippenhahn",
            input_path: display_path(&args.input),
            angles: 0,
            directions: 0,
            tol: 0.0,
            seed: 0,
            dim: None,
            restarts: None,
            json_out: args.json_out.as_deref().map(display_path),
            csv_out: None,
            svg_out: None,
        },
        matrix_dim: matrix.dim(),
        poly,
    };
    emit_json(&report, args.json_out.as_deref())?;
    Ok(0)
}

fn run_rz_check(args: RzCheckArgs) -> RunResult {
    if args.directions < 8 {
        return Err(Failure::invalid("--directions must be at least 8"));
    }
    let poly = load_poly(&args.poly)?;
    let report = rz_test(&poly, args.directions)?;
    let body = RzReport {
        config: ConfigWire {
            command: "rz-check",
            input_path: display_path(&args.poly),
            angles: 0,
            directions: args.directions,
            tol: 0.0,
            seed: 0,
            dim: None,
            restarts: None,
            json_out: args.json_out.as_deref().map(display_path),
            csv_out: None,
            svg_out: None,
        },
        degree: poly.degree(),
        directions_tested: report.directions_tested,
        worst_margin: report.worst_margin,
        verdict: report.verdict,
        failures: report
            .failures
            .iter()
            .map(|f| RzFailureWire {
                phi: f.phi,
                root: (f.root.re, f.root.im),
            })
            .collect(),
        caveat: report.caveat.to_string(),
    };
    emit_json(&body, args.json_out.as_deref())?;
    Ok(0)
}

fn run_decide(args: DecideArgs) -> RunResult {
    if args.directions < 8 {
        return Err(Failure::invalid("--directions must be at least 8"));
    }
    if args.dim == 0 {
        return Err(Failure::invalid("--dim must be at least 1"));
    }
    let (verdict, input) = match (&args.poly, &args.polygon) {
        (Some(path), None) => {
            let poly = load_poly(path)?;
            (decide_polar_poly(&poly, args.dim, args.directions)?, path)
        }
        (None, Some(path)) => {
            let polygon = load_polygon(path)?;
            (decide_polygon(&polygon, args.dim, args.directions)?, path)
        }
        _ => return Err(Failure::invalid("provide exactly one of --poly/--polygon")),
    };
    let report = DecideReport {
        config: ConfigWire {
            command: "decide",
            input_path: display_path(input),
            angles: 0,
            directions: args.directions,
            tol: 0.0,
            seed: 0,
            dim: Some(args.dim),
            restarts: None,
            json_out: args.json_out.as_deref().map(display_path),
            csv_out: None,
            svg_out: None,
        },
        verdict: verdict.verdict,
        dimension_bound: verdict.dimension_bound,
        reason: verdict.reason,
        witness: verdict
            .witness
            .map(|pair| MatrixWire::of(&pair.reconstruct())),
        caveats: verdict.caveats,
    };
    emit_json(&report, args.json_out.as_deref())?;
    Ok(0)
}

fn run_symmetrize(args: SymmetrizeArgs) -> RunResult {
    if args.angles < 8 {
        return Err(Failure::invalid("--angles must be at least 8"));
    }
    if !args.tol.is_finite() || args.tol <= 0.0 {
        return Err(Failure::invalid("--tol must be positive"));
    }
    let matrix = load_matrix(&args.input)?;
    let opts = SymmetrizeOptions {
        n_angles: args.angles,
        tol: args.tol,
        max_restarts: args.restarts,
        seed: args.seed,
    };
    let result = symmetrize(&matrix, &opts)?;
    let report = SymmetrizeReport {
        config: ConfigWire {
            command: "symmetrize",
            input_path: display_path(&args.input),
            angles: args.angles,
            directions: 0,
            tol: args.tol,
            seed: args.seed,
            dim: None,
            restarts: Some(args.restarts),
            json_out: args.json_out.as_deref().map(display_path),
            csv_out: None,
            svg_out: None,
        },
        converged: result.converged,
        achieved_distance: result.achieved_distance,
        restarts_used: result.restarts_used,
        b: MatrixWire::of(&result.b),
    };
    emit_json(&report, args.json_out.as_deref())?;
    if result.converged {
        Ok(0)
    } else {
        Err(Failure {
            code: EXIT_OPERATIONAL,
            message: format!(
                "error: realization search did not converge (distance {})",
                result.achieved_distance
            ),
        })
    }
}

/// Complex eigenvalues of the input as marker coordinates.
fn eigenvalue_markers(matrix: &ComplexMatrix) -> Vec<(f64, f64)> {
    complex_roots(&characteristic_polynomial(matrix))
        .into_iter()
        .map(|z| (z.re, z.im))
        .collect()
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let wire: MatrixWire = load_json(path)?;
    wire.to_matrix()
        .map_err(|e| Failure::invalid(format!("{}: {e}", display_path(path))))
}

fn load_polygon(path: &Path) -> Result<ConvexPolygon, Failure> {
    let wire: PolygonWire = load_json(path)?;
    wire.to_polygon()
        .map_err(|e| Failure::invalid(format!("{}: {e}", display_path(path))))
}

fn load_poly(path: &Path) -> Result<BivariatePoly, Failure> {
    load_json(path)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", display_path(path))))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", display_path(path))))
}

/// Serializes a report (newline-terminated) to the given file, or to
/// stdout when no path was requested.
fn emit_json<T: Serialize>(report: &T, json_out: Option<&Path>) -> Result<(), Failure> {
    let body = serde_json::to_string(report).map_err(|e| Failure {
        code: EXIT_OPERATIONAL,
        message: format!("error: serialization failed: {e}"),
    })?;
    match json_out {
        Some(path) => write_output(path, &format!("{body}\n")),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn write_output(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure {
        code: EXIT_OPERATIONAL,
        message: format!("error: cannot write {}: {e}", display_path(path)),
    })
}

fn display_path(path: &Path) -> String {
    path.display().to_string()
}
