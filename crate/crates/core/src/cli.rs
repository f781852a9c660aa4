//! Command-line front end of the `specscale` binary.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::{horizontal_faces_3d_with, DEFAULT_MATCH_TOL};
use crate::io::report::{
    body_json, faces_json, num, polygon_json, sha256_hex, spectrum_json, verification_json, Report,
};
use crate::io::{export_mesh, read_matrix_file, MatrixFile, MatrixSource};
use crate::linalg::{a_t, hermitian_eigenvalues_unchecked, CartesianPair, Direction2, HERMIT_TOL};
use crate::pencil::{bottleneck_match, pencil_spectrum, Method, PencilSpectrum, DEFAULT_TOL};
use crate::scale::{horizontal_segments_2d, polygon_from_eigenvalues, scale_body, DEFAULT_DIRECTIONS};
use crate::verify::{
    case_rng, random_hermitian_pair, random_normal, random_singular_pencil, run_suite, test_directions,
    verify_subject, Status, Subject, SuiteConfig, VerificationReport, DEFAULT_GRID, DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_ZERO_A2: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_NO_CONVERGENCE: i32 = 6;

const STREAM_INPUT: u64 = 7;
const STREAM_GEN: u64 = 8;

/// Spectral scale of a complex matrix and its self-adjoint pencil.
#[derive(Debug, Parser)]
#[command(name = "specscale", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the support function of B(A) and build its hull.
    Scale(ScaleArgs),
    /// Exact polygon B(A_t) with horizontal segments flagged.
    Scale2d(Scale2dArgs),
    /// Spectrum of A1 + λ·A2.
    Pencil(PencilArgs),
    /// Horizontal faces of B(A) matched against the real pencil spectrum.
    Faces(FacesArgs),
    /// Check the face/spectrum results on an input or on seeded ensembles.
    Verify(VerifyArgs),
    /// Write a random matrix file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Matrix file (JSON).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Tolerance for the Hermitian check of A1 and A2.
    #[arg(long, default_value_t = HERMIT_TOL)]
    pub hermit_tol: f64,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
    pub directions: usize,
    /// Write the hull as Wavefront OBJ.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Scale2dArgs {
    #[command(flatten)]
    pub input: Input,
    /// Direction `T1,T2`; normalized to unit length.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub t: (f64, f64),
    /// Slopes with magnitude at most this are flagged horizontal.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Geig,
    Detpoly,
    Both,
}

#[derive(Debug, Args)]
pub struct PencilArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FacesArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Tolerance for pairing tan θ with real roots.
    #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
    pub match_tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Matrix file; without it the seeded ensemble suite is run.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = HERMIT_TOL)]
    pub hermit_tol: f64,
    /// `all`, `2.1`, `2.2`, `2.3`, `2.4` or `2.5`.
    #[arg(long, default_value = "all")]
    pub subject: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Random directions used with `--input`.
    #[arg(long, default_value_t = 64)]
    pub directions: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub hermitian_pairs: Option<usize>,
    #[arg(long)]
    pub pencil_pairs: Option<usize>,
    #[arg(long)]
    pub normal_matrices: Option<usize>,
    #[arg(long)]
    pub remark_directions: Option<usize>,
    #[arg(long)]
    pub remark_pairs: Option<usize>,
    #[arg(long)]
    pub t_per_pair: Option<usize>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Skip the built-in worked examples.
    #[arg(long)]
    pub no_fixed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Hermitian,
    Normal,
    SingularPencil,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_direction(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected T1,T2, got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Dimension(_) | Error::Validation(_) | Error::Precondition(_) | Error::Parse(_) => EXIT_INVALID,
        Error::SingularPencil => EXIT_SINGULAR,
        Error::ZeroA2 => EXIT_ZERO_A2,
        Error::Io(_) => EXIT_IO,
        Error::NoConvergence(_) => EXIT_NO_CONVERGENCE,
    }
}

/// Applies `SPECSCALE_THREADS` to the global thread pool.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("SPECSCALE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Validation(format!("SPECSCALE_THREADS must be a positive integer, got '{value}'")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match configure_threads().and_then(|_| run(&cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(command: &Command) -> Result<i32> {
    match command {
        Command::Scale(a) => cmd_scale(a),
        Command::Scale2d(a) => cmd_scale2d(a),
        Command::Pencil(a) => cmd_pencil(a),
        Command::Faces(a) => cmd_faces(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

struct Loaded {
    pair: CartesianPair,
    digest: String,
}

fn load(path: &Path, hermit_tol: f64) -> Result<Loaded> {
    let bytes = std::fs::read(path)?;
    let file = read_matrix_file(path)?;
    Ok(Loaded {
        pair: file.to_pair(hermit_tol)?,
        digest: sha256_hex(&bytes),
    })
}

/// Writes the report to `path`, or to stdout when no path is given.
fn emit(report: &Report, path: Option<&Path>, summary: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, report.to_json())?;
            println!("{summary}");
        }
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

fn cmd_scale(a: &ScaleArgs) -> Result<i32> {
    let input = load(&a.input.input, a.input.hermit_tol)?;
    let body = scale_body(&input.pair, a.directions)?;
    if let Some(mesh) = &a.mesh {
        export_mesh(&body, mesh)?;
    }
    let mut report = Report::new("scale", Some(input.digest));
    report.payload = json!({ "n": input.pair.dim(), "body": body_json(&body) });
    let summary = format!(
        "scale: {} hull vertices, {} triangles, affine dimension {}",
        body.hull_vertices.len(),
        body.hull_triangles.len(),
        body.affine_dimension
    );
    emit(&report, a.report.as_deref(), &summary)?;
    Ok(EXIT_OK)
}

fn cmd_scale2d(a: &Scale2dArgs) -> Result<i32> {
    let input = load(&a.input.input, a.input.hermit_tol)?;
    let t = Direction2::normalized(a.t.0, a.t.1)?;
    let m = a_t(&input.pair, t);
    let mut eigs = hermitian_eigenvalues_unchecked(m.matrix());
    eigs.sort_by(f64::total_cmp);
    let poly = polygon_from_eigenvalues(&eigs);
    let horizontal = horizontal_segments_2d(&poly, a.tol);
    let mut report = Report::new("scale2d", Some(input.digest)).tolerance("horizontal", a.tol);
    report.payload = json!({
        "t": [num(t.t1()), num(t.t2())],
        "eigenvalues": eigs.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "polygon": polygon_json(&poly, &horizontal),
    });
    let summary = format!("scale2d: {} horizontal segments", horizontal.len());
    emit(&report, a.report.as_deref(), &summary)?;
    Ok(EXIT_OK)
}

fn spectrum_summary(s: &PencilSpectrum) -> String {
    if s.regular {
        format!(
            "{}: regular, {} finite, {} real, infinity {}",
            s.method,
            s.finite.len(),
            s.real_subset.len(),
            s.has_infinity
        )
    } else {
        format!("{}: singular pencil", s.method)
    }
}

fn cmd_pencil(a: &PencilArgs) -> Result<i32> {
    let input = load(&a.input.input, a.input.hermit_tol)?;
    let methods: &[Method] = match a.method {
        MethodArg::Geig => &[Method::GeneralizedEig],
        MethodArg::Detpoly => &[Method::DetPoly],
        MethodArg::Both => &[Method::GeneralizedEig, Method::DetPoly],
    };
    let spectra = methods
        .iter()
        .map(|&m| pencil_spectrum(&input.pair, m, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let mut payload = json!({
        "spectra": spectra.iter().map(spectrum_json).collect::<Vec<_>>(),
    });
    if let [g, d] = spectra.as_slice() {
        let distance = if g.regular && d.regular { bottleneck_match(&g.finite, &d.finite) } else { None };
        payload["agreement"] = json!({
            "regular": g.regular == d.regular,
            "bottleneck_relative": distance.map(num),
        });
    }
    let mut report = Report::new("pencil", Some(input.digest)).tolerance("tol", a.tol);
    report.payload = payload;
    let summary = spectra.iter().map(spectrum_summary).collect::<Vec<_>>().join("; ");
    emit(&report, a.report.as_deref(), &summary)?;
    Ok(EXIT_OK)
}

fn cmd_faces(a: &FacesArgs) -> Result<i32> {
    let input = load(&a.input.input, a.input.hermit_tol)?;
    let faces = horizontal_faces_3d_with(&input.pair, a.tol, a.match_tol)?;
    let mut report = Report::new("faces", Some(input.digest))
        .tolerance("tol", a.tol)
        .tolerance("match_tol", a.match_tol);
    report.payload = faces_json(&faces);
    report.passed = Some(faces.is_consistent());
    let summary = format!(
        "faces: {} horizontal faces, {} matched, consistent {}",
        faces.faces.len(),
        faces.matched.len(),
        faces.is_consistent()
    );
    emit(&report, a.report.as_deref(), &summary)?;
    Ok(if faces.is_consistent() { EXIT_OK } else { EXIT_FAILED })
}

fn subjects(s: &str) -> Result<Vec<Subject>> {
    if s == "all" {
        Ok(Subject::ALL.to_vec())
    } else {
        Ok(vec![s.parse()?])
    }
}

fn suite_config(a: &VerifyArgs) -> SuiteConfig {
    let d = SuiteConfig::default();
    SuiteConfig {
        hermitian_pairs: a.hermitian_pairs.unwrap_or(d.hermitian_pairs),
        pencil_pairs: a.pencil_pairs.unwrap_or(d.pencil_pairs),
        normal_matrices: a.normal_matrices.unwrap_or(d.normal_matrices),
        remark_directions: a.remark_directions.unwrap_or(d.remark_directions),
        remark_pairs: a.remark_pairs.unwrap_or(d.remark_pairs),
        t_per_pair: a.t_per_pair.unwrap_or(d.t_per_pair),
        grid: a.grid,
        n_min: a.n_min.unwrap_or(d.n_min),
        n_max: a.n_max.unwrap_or(d.n_max),
        tol: a.tol,
        include_fixed: !a.no_fixed,
    }
}

/// Reports for one input pair, plus the exit code forced by a degenerate pencil.
fn verify_input(pair: &CartesianPair, a: &VerifyArgs, subjects: &[Subject]) -> Result<(Vec<VerificationReport>, i32)> {
    let mut rng = case_rng(a.seed, STREAM_INPUT, 0);
    let directions = test_directions(a.directions, &mut rng);
    let mut forced = EXIT_OK;
    let mut reports = Vec::new();
    for &subject in subjects {
        let report = match verify_subject(subject, pair, &directions, a.grid, a.tol) {
            Err(Error::ZeroA2) => {
                forced = forced.max(EXIT_ZERO_A2);
                VerificationReport::not_applicable(subject, a.tol, Error::ZeroA2.to_string())
            }
            other => other?,
        };
        if subject.needs_regular_pencil() && report.status == Status::NotApplicable && forced == EXIT_OK {
            let regular = pencil_spectrum(pair, Method::GeneralizedEig, a.tol).map(|s| s.regular).unwrap_or(true);
            if !regular {
                forced = EXIT_SINGULAR;
            }
        }
        reports.push(VerificationReport { seed: Some(a.seed), ..report });
    }
    Ok((reports, forced))
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let subjects = subjects(&a.subject)?;
    let (reports, forced, digest) = match &a.input {
        Some(path) => {
            let input = load(path, a.hermit_tol)?;
            let (reports, forced) = verify_input(&input.pair, a, &subjects)?;
            (reports, forced, Some(input.digest))
        }
        None => (run_suite(&suite_config(a), a.seed, &subjects)?, EXIT_OK, None),
    };
    let passed = reports.iter().all(VerificationReport::passed);
    let mut report = Report::new("verify", digest).tolerance("tol", a.tol);
    report.seed = Some(a.seed);
    report.passed = Some(passed);
    report.payload = json!({
        "grid": a.grid,
        "subjects": subjects.iter().map(Subject::as_str).collect::<Vec<_>>(),
        "reports": reports.iter().map(verification_json).collect::<Vec<_>>(),
    });
    if a.input.is_none() {
        let c = suite_config(a);
        report.payload["ensemble"] = json!({
            "hermitian_pairs": c.hermitian_pairs,
            "pencil_pairs": c.pencil_pairs,
            "normal_matrices": c.normal_matrices,
            "remark_directions": c.remark_directions,
            "remark_pairs": c.remark_pairs,
            "t_per_pair": c.t_per_pair,
            "n_min": c.n_min,
            "n_max": c.n_max,
            "include_fixed": c.include_fixed,
        });
    }
    let summary = reports
        .iter()
        .map(|r| format!("{} {} (max residual {:.3e}, tolerance {:.1e})", r.subject, r.status.as_str(), r.max_residual, r.tolerance))
        .collect::<Vec<_>>()
        .join("\n");
    emit(&report, a.report.as_deref(), &summary)?;
    if forced != EXIT_OK {
        eprintln!(
            "error: {}",
            if forced == EXIT_SINGULAR { Error::SingularPencil.to_string() } else { Error::ZeroA2.to_string() }
        );
        return Ok(forced);
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_gen(a: &GenArgs) -> Result<i32> {
    if a.n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    rng.set_stream(STREAM_GEN << 32);
    let (source, comment) = match a.kind {
        Kind::Hermitian => {
            let pair = random_hermitian_pair(a.n, &mut rng);
            (MatrixSource::Pair(pair.a1().clone(), pair.a2().clone()), "random Hermitian pair")
        }
        Kind::Normal => (MatrixSource::Full(random_normal(a.n, &mut rng)), "random normal matrix"),
        Kind::SingularPencil => {
            let pair = random_singular_pencil(a.n, &mut rng)?;
            (MatrixSource::Pair(pair.a1().clone(), pair.a2().clone()), "random singular pencil")
        }
    };
    let file = MatrixFile {
        source,
        comment: Some(format!("{comment}, n = {}, seed = {}", a.n, a.seed)),
    };
    file.write(&a.out)?;
    println!("gen: wrote {}", a.out.display());
    Ok(EXIT_OK)
}
