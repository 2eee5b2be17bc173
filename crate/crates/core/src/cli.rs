//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input (including an exceeded oracle
//! cap), 2 when a numerical check fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{BetaNormalization, GammaSet, Signature, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::multop::{oracle_cap_from_env, Ray};
use crate::product_spectra::{
    friedrich_torus_eigenvalues, product_oracle_check, product_point_spectrum, FiberEigenvalueList,
    FriedrichReading,
};
use crate::quasi_iso::{
    decide_quasi_isometry, parse_grid_csv, parse_grid_json, spectral_equality_report, BoostField,
    QuasiIsoVerdict, SpectralNote,
};
use crate::report::{emit_plot_data, PointValue};
use crate::torus_spectra::{
    minkowski_continuous_evidence, serialize_complex, torus_continuous_evidence,
    torus_oracle_check, torus_point_spectrum, OracleMode,
};

/// Oracle deviations above this count as a falsified invariant.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "dirac-spectra", version, about = "Dirac spectra on flat pseudo-Riemannian spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gamma matrices of a signature.
    #[command(subcommand)]
    Clifford(CliffordCommand),
    /// Point spectra and resolvent scans.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Compare closed forms against dense eigensolves of finite sections.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Quasi-isometry of frame-field metrics.
    #[command(subcommand)]
    Quasiiso(QuasiisoCommand),
    /// Dirac eigenvalues of flat tori.
    #[command(subcommand)]
    Friedrich(FriedrichCommand),
}

#[derive(Debug, Subcommand)]
enum CliffordCommand {
    /// Print the gamma matrices and beta.
    Gen(CliffordArgs),
    /// Check the Clifford relations and the signature of beta.
    Verify(CliffordArgs),
}

#[derive(Debug, Subcommand)]
enum SpectrumCommand {
    /// Resolvent norms on R^{p,q} along the null ray (or on the unit circle for lambda = 0).
    MinkowskiScan(MinkowskiArgs),
    /// Point spectrum of the torus T^{p,q}, optionally with a resolvent scan.
    Torus(TorusArgs),
    /// Point spectrum of T^{1,1} x F from an eigenvalue list of F.
    Product(ProductArgs),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    Torus(OracleTorusArgs),
    Product(ProductArgs),
}

#[derive(Debug, Subcommand)]
enum QuasiisoCommand {
    /// Compare two frame fields (or one against the identity frame).
    Check(QuasiisoArgs),
}

#[derive(Debug, Subcommand)]
enum FriedrichCommand {
    /// Write an eigenvalue list usable with `spectrum product --evs`.
    Gen(FriedrichArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Normalization {
    CaseSplit,
    PhaseExponent,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CliffordArgs {
    /// Signature as `p,q`.
    #[arg(long)]
    sig: String,
    #[arg(long, value_enum, default_value = "case-split")]
    normalization: Normalization,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MinkowskiArgs {
    #[arg(long)]
    sig: String,
    /// Spectral parameter as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value_t = 1000)]
    jmax: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TorusArgs {
    #[arg(long)]
    sig: String,
    #[arg(long)]
    window: u32,
    /// Also scan the resolvent at this `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// `null` or `custom:a,b,...`.
    #[arg(long, default_value = "null", allow_hyphen_values = true)]
    ray: String,
    #[arg(long, default_value_t = 1000)]
    jmax: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ProductArgs {
    /// JSON eigenvalue list of the fiber.
    #[arg(long)]
    evs: PathBuf,
    #[arg(long)]
    window: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct OracleTorusArgs {
    #[arg(long)]
    sig: String,
    #[arg(long)]
    window: u32,
    /// Eigensolve each diagonal block instead of the assembled matrix.
    #[arg(long)]
    blockwise: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct QuasiisoArgs {
    /// Grid file (JSON, or CSV with --sig). Give it twice to compare two fields.
    #[arg(long, required = true, num_args = 1)]
    grid: Vec<PathBuf>,
    /// Signature for CSV grid files.
    #[arg(long)]
    sig: Option<String>,
    /// Treat the grid as a torus.
    #[arg(long)]
    periodic: bool,
    /// The base manifold is compact.
    #[arg(long)]
    compact: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct FriedrichArgs {
    /// Spin structure bits, `0110` or `0,1,1,0`; the torus dimension is their count.
    #[arg(long)]
    delta: String,
    #[arg(long)]
    zmax: u32,
    /// Use `z_j (1 + δ_j/2)` instead of `z_j + δ_j/2`.
    #[arg(long)]
    friedrich_literal: bool,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Invalid(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numeric(_) => Failure::Numeric(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(stderr, "numeric check failed: {msg}");
            2
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

pub fn parse_signature(s: &str) -> Result<Signature> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, q] = parts.as_slice() else {
        return Err(Error::InvalidArgument(format!("--sig expects p,q, got {s:?}")));
    };
    let parse = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("--sig expects non-negative integers, got {s:?}")))
    };
    let sig = Signature::new(parse(p)?, parse(q)?)?;
    if sig.n() > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCapExceeded {
            n: sig.n(),
            cap: DEFAULT_DIM_CAP,
        });
    }
    Ok(sig)
}

pub fn parse_lambda(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::InvalidArgument(format!("--lambda expects re,im, got {s:?}"));
    let [re, im] = parts.as_slice() else {
        return Err(bad());
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_ray(s: &str, sig: Signature) -> Result<Ray> {
    if s == "null" {
        return Ray::null(sig.p(), sig.n());
    }
    let Some(rest) = s.strip_prefix("custom:") else {
        return Err(Error::InvalidArgument(format!("--ray expects null or custom:a,b,..., got {s:?}")));
    };
    let direction = rest
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("--ray direction must be integers, got {rest:?}")))?;
    sig.check_len(direction.len())?;
    if direction.iter().all(|&d| d == 0) {
        return Err(Error::InvalidArgument("--ray direction must be nonzero".into()));
    }
    Ok(Ray::new(direction))
}

pub fn parse_delta(s: &str) -> Result<Vec<u8>> {
    let bits: Vec<u8> = s
        .chars()
        .filter(|ch| *ch != ',' && !ch.is_whitespace())
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!("--delta expects bits 0/1, got {s:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.is_empty() || !bits.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "--delta needs an even, nonzero number of bits, got {}",
            bits.len()
        )));
    }
    Ok(bits)
}

/// Writes `bytes` to `out` via a temporary file in the same directory, or to
/// stdout.
fn write_output(output: &Output, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        None => {
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// One CSV record from a flat serializable struct; array fields are joined
/// with `;`.
fn csv_record<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let serde_json::Value::Object(fields) = serde_json::to_value(value)? else {
        return Err(Error::InvalidArgument("value is not a record".into()));
    };
    let cell = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(fields.keys())?;
    writer.write_record(fields.values().map(cell))?;
    writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn plot_bytes(values: &[PointValue]) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    emit_plot_data(values, &mut bytes)?;
    Ok(bytes)
}

fn json_only(output: &Output, command: &str) -> CliResult<()> {
    if output.format == Format::Csv {
        return Err(invalid(format!("{command} supports only --format json")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ComplexEntry {
    re: f64,
    im: f64,
}

fn matrix_json(m: &CMatrix) -> Vec<Vec<ComplexEntry>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = crate::linalg::normalize_zero(m[(i, j)]);
                    ComplexEntry { re: z.re, im: z.im }
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct GammaOutput {
    signature: [usize; 2],
    spinor_dim: usize,
    gammas: Vec<Vec<Vec<ComplexEntry>>>,
    beta: Vec<Vec<ComplexEntry>>,
}

#[derive(Serialize)]
struct GammaRow {
    matrix: String,
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ProductReport {
    window: u32,
    point: Vec<PointValue>,
}

#[derive(Serialize)]
struct ScanRow {
    parameter: f64,
    norm: f64,
    lower_bound: Option<f64>,
}

#[derive(Serialize)]
struct QuasiisoOutput {
    signature: [usize; 2],
    fields: usize,
    #[serde(flatten)]
    verdict: QuasiIsoVerdict,
    spectral: SpectralNote,
}

#[derive(Serialize)]
struct MinkowskiOutput {
    signature: [usize; 2],
    #[serde(flatten)]
    scan: crate::torus_spectra::ScanRecord,
    respects_lower_bound: bool,
}

#[derive(Serialize)]
struct LambdaOnly {
    #[serde(serialize_with = "serialize_complex")]
    lambda: Complex64,
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Clifford(CliffordCommand::Gen(args)) => {
            let sig = parse_signature(&args.sig)?;
            let gammas = build(sig, args.normalization)?;
            let bytes = match args.output.format {
                Format::Json => json_bytes(&GammaOutput {
                    signature: [sig.p(), sig.q()],
                    spinor_dim: gammas.spinor_dim(),
                    gammas: gammas.gammas().iter().map(matrix_json).collect(),
                    beta: matrix_json(gammas.beta()),
                })?,
                Format::Csv => {
                    let named = gammas
                        .gammas()
                        .iter()
                        .enumerate()
                        .map(|(j, g)| (format!("gamma{}", j + 1), g))
                        .chain(std::iter::once(("beta".to_string(), gammas.beta())));
                    let mut rows = Vec::new();
                    for (name, m) in named {
                        for i in 0..m.nrows() {
                            for j in 0..m.ncols() {
                                let z = crate::linalg::normalize_zero(m[(i, j)]);
                                rows.push(GammaRow { matrix: name.clone(), row: i, col: j, re: z.re, im: z.im });
                            }
                        }
                    }
                    csv_rows(rows)?
                }
            };
            write_output(&args.output, &bytes, stdout)?;
        }
        Command::Clifford(CliffordCommand::Verify(args)) => {
            let sig = parse_signature(&args.sig)?;
            let report = build(sig, args.normalization)?.verify();
            let bytes = match args.output.format {
                Format::Json => json_bytes(&report)?,
                Format::Csv => csv_record(&report)?,
            };
            write_output(&args.output, &bytes, stdout)?;
            if !(report.passed() && report.beta_split_even()) {
                return Err(Failure::Numeric(format!("Clifford identities fail for {:?}", report.signature)));
            }
        }
        Command::Spectrum(SpectrumCommand::MinkowskiScan(args)) => {
            let sig = parse_signature(&args.sig)?;
            let lambda = parse_lambda(&args.lambda)?;
            let scan = minkowski_continuous_evidence(sig, lambda, args.jmax)?;
            let ok = scan.respects_lower_bound();
            let bytes = match args.output.format {
                Format::Json => json_bytes(&MinkowskiOutput {
                    signature: [sig.p(), sig.q()],
                    respects_lower_bound: ok,
                    scan,
                })?,
                Format::Csv => csv_rows(scan_rows(&scan))?,
            };
            write_output(&args.output, &bytes, stdout)?;
            if !ok {
                return Err(Failure::Numeric("resolvent norm fell below the analytic lower bound".into()));
            }
        }
        Command::Spectrum(SpectrumCommand::Torus(args)) => {
            let sig = parse_signature(&args.sig)?;
            let mut report = torus_point_spectrum(sig, args.window)?;
            let ray = parse_ray(&args.ray, sig)?;
            if let Some(lambda) = &args.lambda {
                let lambda = parse_lambda(lambda)?;
                let scan = torus_continuous_evidence(sig, lambda, &ray, args.jmax, None)?;
                if !scan.respects_lower_bound() {
                    return Err(Failure::Numeric(format!(
                        "resolvent norm at {} fell below the analytic lower bound",
                        serde_json::to_string(&LambdaOnly { lambda }).unwrap_or_default()
                    )));
                }
                report.scans.push(scan.to_report_scan());
            }
            let bytes = match args.output.format {
                Format::Json => json_bytes(&report)?,
                Format::Csv => plot_bytes(&report.point)?,
            };
            write_output(&args.output, &bytes, stdout)?;
        }
        Command::Spectrum(SpectrumCommand::Product(args)) => {
            let evs = FiberEigenvalueList::read(&args.evs)?;
            let point = product_point_spectrum(&evs, args.window)?;
            let bytes = match args.output.format {
                Format::Json => json_bytes(&ProductReport { window: args.window, point })?,
                Format::Csv => plot_bytes(&point)?,
            };
            write_output(&args.output, &bytes, stdout)?;
        }
        Command::Oracle(OracleCommand::Torus(args)) => {
            let sig = parse_signature(&args.sig)?;
            let mode = if args.blockwise {
                OracleMode::Blockwise
            } else {
                OracleMode::Dense { cap: oracle_cap_from_env()? }
            };
            let check = torus_oracle_check(sig, args.window, mode)?;
            let bytes = match args.output.format {
                Format::Json => json_bytes(&check)?,
                Format::Csv => csv_record(&check)?,
            };
            write_output(&args.output, &bytes, stdout)?;
            // Raw deviations of defective fibers sit at sqrt(eps); the
            // invariant is judged on cluster means.
            if check.refined_deviation > ORACLE_TOLERANCE {
                return Err(Failure::Numeric(format!(
                    "oracle deviation {:e} exceeds {ORACLE_TOLERANCE:e}",
                    check.refined_deviation
                )));
            }
        }
        Command::Oracle(OracleCommand::Product(args)) => {
            let evs = FiberEigenvalueList::read(&args.evs)?;
            let check = product_oracle_check(&evs, args.window)?;
            let bytes = match args.output.format {
                Format::Json => json_bytes(&check)?,
                Format::Csv => csv_record(&check)?,
            };
            write_output(&args.output, &bytes, stdout)?;
            let worst = check.deviation.max(check.max_block_deviation);
            if worst > ORACLE_TOLERANCE {
                return Err(Failure::Numeric(format!(
                    "oracle deviation {worst:e} exceeds {ORACLE_TOLERANCE:e}"
                )));
            }
        }
        Command::Quasiiso(QuasiisoCommand::Check(args)) => {
            json_only(&args.output, "quasiiso check")?;
            if args.grid.len() > 2 {
                return Err(invalid("quasiiso check takes one or two --grid files"));
            }
            let sig = args.sig.as_deref().map(parse_signature).transpose()?;
            let fields = args
                .grid
                .iter()
                .map(|path| load_field(path, sig, args.periodic))
                .collect::<Result<Vec<_>>>()?;
            let (f1, f2) = match fields.as_slice() {
                [only] => (BoostField::identity(only.signature(), only.grid().clone()), only.clone()),
                [a, b] => (a.clone(), b.clone()),
                _ => unreachable!("clap requires at least one grid"),
            };
            let verdict = decide_quasi_isometry(&f1, &f2)?;
            let spectral = spectral_equality_report(&verdict, args.compact);
            let signature = [f1.signature().p(), f1.signature().q()];
            let bytes = json_bytes(&QuasiisoOutput {
                signature,
                fields: fields.len(),
                verdict,
                spectral,
            })?;
            write_output(&args.output, &bytes, stdout)?;
        }
        Command::Friedrich(FriedrichCommand::Gen(args)) => {
            let delta = parse_delta(&args.delta)?;
            let reading = if args.friedrich_literal {
                FriedrichReading::Literal
            } else {
                FriedrichReading::Standard
            };
            let evs = friedrich_torus_eigenvalues(delta.len() / 2, &delta, args.zmax, reading)?;
            let bytes = match args.output.format {
                Format::Json => json_bytes(&evs)?,
                Format::Csv => csv_rows(&evs.eigenvalues)?,
            };
            write_output(&args.output, &bytes, stdout)?;
        }
    }
    Ok(())
}

fn build(sig: Signature, normalization: Normalization) -> Result<GammaSet> {
    let normalization = match normalization {
        Normalization::CaseSplit => BetaNormalization::CaseSplit,
        Normalization::PhaseExponent => BetaNormalization::PhaseExponent,
    };
    GammaSet::build(sig, DEFAULT_DIM_CAP, normalization)
}

fn scan_rows(scan: &crate::torus_spectra::ScanRecord) -> Vec<ScanRow> {
    scan.parameters
        .iter()
        .zip(&scan.norms)
        .enumerate()
        .map(|(i, (&parameter, &norm))| ScanRow {
            parameter,
            norm,
            lower_bound: scan.lower_bounds.get(i).copied(),
        })
        .collect()
}

fn load_field(path: &Path, sig: Option<Signature>, periodic: bool) -> Result<BoostField> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let sig = sig.ok_or_else(|| Error::InvalidArgument("CSV grid files need --sig".into()))?;
        return parse_grid_csv(&text, sig, periodic);
    }
    let field = parse_grid_json(&text)?;
    if let Some(sig) = sig {
        if sig != field.signature() {
            return Err(Error::InvalidArgument(format!(
                "--sig {},{} disagrees with the grid file's signature",
                sig.p(),
                sig.q()
            )));
        }
    }
    if periodic && !field.grid().periodic {
        let mut grid = field.grid().clone();
        grid.periodic = true;
        return BoostField::from_frames(field.signature(), grid, field.frames().to_vec());
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("dirac-spectra").chain(args.iter().copied());
        let code = run_with_io(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_signature("2, 1").unwrap(), Signature::new(2, 1).unwrap());
        assert!(parse_signature("1,0").is_err());
        assert!(parse_signature("1").is_err());
        assert!(parse_signature("8,7").is_err());
        assert_eq!(parse_lambda("-1.5,2").unwrap(), Complex64::new(-1.5, 2.0));
        assert!(parse_lambda("1").is_err());
        assert!(parse_lambda("nan,0").is_err());
        let sig = Signature::new(1, 2).unwrap();
        assert_eq!(parse_ray("null", sig).unwrap().direction, vec![1, 1, 0]);
        assert_eq!(parse_ray("custom:0,1,-1", sig).unwrap().direction, vec![0, 1, -1]);
        assert!(parse_ray("custom:1,1", sig).is_err());
        assert!(parse_ray("custom:0,0,0", sig).is_err());
        assert!(parse_ray("sideways", sig).is_err());
        assert_eq!(parse_delta("0,1").unwrap(), vec![0, 1]);
        assert_eq!(parse_delta("0110").unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_delta("012").is_err());
        assert!(parse_delta("1").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["clifford", "verify", "--sig", "2,2"]).0, 0);
        let (code, _, err) = run_capture(&["spectrum", "torus", "--sig", "1,0", "--window", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("invalid signature"));
        assert_eq!(run_capture(&["spectrum", "torus", "--bogus"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
        assert_eq!(run_capture(&["quasiiso", "check", "--grid", "/nonexistent.json"]).0, 1);
    }
}
