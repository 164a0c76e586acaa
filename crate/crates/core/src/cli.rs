//! The `qsc` command line.
//!
//! Every subcommand writes either CSV or JSON to `--out` (stdout when
//! absent). Without `--format`, the format follows the extension of
//! `--out`, falling back to the subcommand's default. JSON documents carry a
//! top-level `schema_version`. Numerical failures exit with status 1 and
//! print a JSON diagnostic on stderr; argument errors exit with status 2.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::ito_algebra::{self, Basis, FrameScaling, ItoExpression};
use crate::kinematics::{self, RadarCoord, Velocity};
use crate::linalg::{self, real};
use crate::noise_repr::{self, SimConfig};
use crate::open_system::{self, DensityMatrix, HPTriple, Trajectory};
use crate::unruh_limit;

pub const SCHEMA_VERSION: u32 = 1;
/// Seed used by `ito-check` when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0;

pub const OSCILLATOR_CSV_HEADER: &str = "tau,mean_number,fidelity_gibbs,trace_drift";
pub const WEDGE_CSV_HEADER: &str = "family,param,s,t,x";
pub const FRAME_CSV_HEADER: &str = "u,v,gamma_u,gamma_v,v_prime,gamma_v_prime,zeta,gamma_ratio";
pub const ITO_CHECK_CSV_HEADER: &str = "index,dim,unitarity_defect";

#[derive(Debug, Parser)]
#[command(
    name = "qsc",
    version,
    about = "Relativistic quantum stochastic calculus (units c = hbar = 1)",
    args_override_self = true
)]
struct Cli {
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format [default: from the --out extension, else per subcommand].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Flat `key=value` file; each line acts as `--key=value` placed before
    /// the command-line flags, which take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for commands that sample randomly.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare a worldline of velocity v in the rest frame with the frame
    /// moving at u [default format: json].
    FrameTransform(FrameArgs),
    /// Check the unitarity identity of random HP generators and the frame
    /// covariance of the Ito tables [default format: json].
    ItoCheck(ItoCheckArgs),
    /// Integrate the accelerated two-level detector master equation
    /// [default format: csv].
    Detector(DetectorArgs),
    /// Integrate a truncated thermally damped oscillator [default format: csv].
    Oscillator(OscillatorArgs),
    /// Run the collision-model discretization of the thermal QSDE for the
    /// detector [default format: csv].
    QsdeSim(QsdeArgs),
    /// Sweep the accelerated detector response over a and Omega
    /// [default format: csv].
    ResponseRate(ResponseArgs),
    /// Sample curves of constant eta and constant xi of the Rindler wedge
    /// [default format: csv].
    WedgeData(WedgeArgs),
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// Velocity of the observer frame, in units of c, |u| < 1.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    u: f64,
    /// Velocity of the worldline in the rest frame, in units of c, |v| < 1.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    v: f64,
}

#[derive(Debug, Args)]
struct ItoCheckArgs {
    /// Number of random (S, L, H) triples, alternating qubit and qutrit.
    #[arg(long, default_value_t = 100)]
    triples: usize,
    /// Frame factors zeta (dimensionless, comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.8, 1.0, 2.5])]
    zetas: Vec<f64>,
}

#[derive(Debug, Args)]
struct DetectorArgs {
    /// Mean occupation n of the bath [default: 0, or n(Omega) at the Unruh
    /// temperature when --a is given].
    #[arg(long)]
    n: Option<f64>,
    /// Proper acceleration a (1/time); sets n = 1/(exp(2 pi Omega/a) - 1).
    #[arg(long, conflicts_with = "n")]
    a: Option<f64>,
    /// Detector gap Omega (1/time); accepts tokens such as `4pi` or `pi/2`.
    #[arg(long, value_parser = parse_frequency, default_value = "4pi")]
    omega: f64,
    /// Proper-time horizon tau.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Number of RK4 steps.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Initial excited-state population rho_ee.
    #[arg(long, default_value_t = 0.0)]
    rho_ee: f64,
    /// Initial real coherence Re rho_eg.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    rho_eg: f64,
}

#[derive(Debug, Args)]
struct OscillatorArgs {
    /// Number of Fock levels kept.
    #[arg(long, default_value_t = 30)]
    cutoff: usize,
    /// Mean bath occupation n.
    #[arg(long, default_value_t = 0.5)]
    n: f64,
    /// Damping rate gamma (1/time).
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Mode frequency (1/time); only used with --free-evolution.
    #[arg(long, value_parser = parse_frequency, default_value = "1")]
    omega: f64,
    /// Include the free Hamiltonian omega c*c.
    #[arg(long)]
    free_evolution: bool,
    /// Time horizon tau.
    #[arg(long, default_value_t = 40.0)]
    tau: f64,
    /// Number of RK4 steps.
    #[arg(long, default_value_t = 4000)]
    steps: usize,
    /// Write every k-th step to the trajectory.
    #[arg(long, default_value_t = 100)]
    stride: usize,
}

#[derive(Debug, Args)]
struct QsdeArgs {
    /// Mean occupation n of the thermal noise.
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Detector gap Omega (1/time); the coupling rate is Omega/4pi.
    #[arg(long, value_parser = parse_frequency, default_value = "4pi")]
    omega: f64,
    /// Slice length dtau (proper time).
    #[arg(long, default_value_t = 1e-3)]
    dtau: f64,
    /// Number of slices.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Fock levels per noise mode in each slice.
    #[arg(long, default_value_t = 2)]
    cutoff: usize,
    /// Initial excited-state population rho_ee.
    #[arg(long, default_value_t = 0.0)]
    rho_ee: f64,
}

#[derive(Debug, Args)]
struct ResponseArgs {
    /// Proper accelerations a (1/time, comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    a: Vec<f64>,
    /// Detector gaps Omega > 0 (1/time, comma separated; tokens like `pi/2`).
    #[arg(long, value_delimiter = ',', value_parser = parse_frequency, default_values = ["0.25", "0.5", "1"])]
    omega: Vec<f64>,
}

#[derive(Debug, Args)]
struct WedgeArgs {
    /// Proper acceleration a of the xi = 0 worldline (1/length).
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Number of constant-eta curves, spread over [-eta_max, eta_max].
    #[arg(long, default_value_t = 7)]
    eta_curves: usize,
    /// Number of constant-xi curves, spread over [-xi_max, xi_max]; xi = 0
    /// is always included.
    #[arg(long, default_value_t = 5)]
    xi_curves: usize,
    /// Samples per curve.
    #[arg(long, default_value_t = 41)]
    samples: usize,
    /// Largest |eta| (time).
    #[arg(long, default_value_t = 1.5)]
    eta_max: f64,
    /// Largest |xi| (length).
    #[arg(long, default_value_t = 1.0)]
    xi_max: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidVelocity(_)
            | Error::InvalidAcceleration(_)
            | Error::InvalidParameter { .. }
            | Error::InvalidDensityMatrix(_)
            | Error::DimensionCap { .. }
            | Error::DegenerateVelocityAddition { .. } => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    schema_version: u32,
    status: &'a str,
    error: String,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match inject_config(argv) {
        Ok(a) => a,
        Err(msg) => return report("argument", msg, 2),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => report("argument", msg, 2),
        Err(Failure::Numerical(e)) => report("numerical", e.to_string(), 1),
        Err(Failure::Io(e)) => report("io", e.to_string(), 1),
    }
}

fn report(status: &str, error: String, code: i32) -> i32 {
    let d = Diagnostic {
        schema_version: SCHEMA_VERSION,
        status,
        error,
    };
    eprintln!("{}", serde_json::to_string(&d).unwrap_or_default());
    code
}

const SUBCOMMANDS: [&str; 7] = [
    "frame-transform",
    "ito-check",
    "detector",
    "oscillator",
    "qsde-sim",
    "response-rate",
    "wedge-data",
];

/// Splices the entries of `--config FILE` in as `--key=value` right after
/// the subcommand name, so explicit flags later in `argv` override them.
fn inject_config(argv: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let strs: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let Some(pos) = strs.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let extra = parse_config(&text)?;
    let mut out = argv;
    out.splice(pos + 1..pos + 1, extra.into_iter().map(OsString::from));
    Ok(out)
}

/// `key=value` lines; blank lines and `#` comments are skipped. A bare
/// `key` or `key=true` becomes a switch.
pub fn parse_config(text: &str) -> std::result::Result<Vec<String>, String> {
    let mut args = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        let key = key.trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key", no + 1));
        }
        match value {
            None | Some("true") => args.push(format!("--{key}")),
            Some("false") => {}
            Some(v) => args.push(format!("--{key}={v}")),
        }
    }
    Ok(args)
}

/// Parses a frequency such as `2.5`, `pi`, `4pi`, `0.5*pi`, `pi/2` or
/// `3pi/4`.
pub fn parse_frequency(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numerator = match num.strip_suffix("pi") {
        Some(prefix) => {
            let prefix = prefix.trim().trim_end_matches('*').trim();
            let k = match prefix {
                "" => 1.0,
                "-" => -1.0,
                p => p
                    .parse::<f64>()
                    .map_err(|_| format!("invalid frequency `{s}`"))?,
            };
            k * std::f64::consts::PI
        }
        None => num
            .parse::<f64>()
            .map_err(|_| format!("invalid frequency `{s}`"))?,
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| format!("invalid frequency `{s}`"))?;
            if d == 0.0 {
                return Err(format!("invalid frequency `{s}`: zero denominator"));
            }
            numerator / d
        }
        None => numerator,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("invalid frequency `{s}`"))
    }
}

fn resolve_format(cli: &Cli, default: Format) -> Format {
    if let Some(f) = cli.format {
        return f;
    }
    match cli
        .out
        .as_deref()
        .and_then(Path::extension)
        .and_then(|e| e.to_str())
    {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        _ => default,
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Io(io::Error::other(e)))?;
    s.push('\n');
    Ok(s)
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let body = match &cli.command {
        Command::FrameTransform(a) => frame_transform(a, resolve_format(cli, Format::Json))?,
        Command::ItoCheck(a) => ito_check(a, cli.seed, resolve_format(cli, Format::Json))?,
        Command::Detector(a) => detector(a, resolve_format(cli, Format::Csv))?,
        Command::Oscillator(a) => oscillator(a, resolve_format(cli, Format::Csv))?,
        Command::QsdeSim(a) => qsde_sim(a, resolve_format(cli, Format::Csv))?,
        Command::ResponseRate(a) => response_rate(a, resolve_format(cli, Format::Csv))?,
        Command::WedgeData(a) => wedge_data(a, resolve_format(cli, Format::Csv))?,
    };
    emit(cli, &body)
}

#[derive(Serialize)]
struct FrameReport {
    schema_version: u32,
    u: f64,
    v: f64,
    gamma_u: f64,
    gamma_v: f64,
    v_prime: f64,
    gamma_v_prime: f64,
    zeta: f64,
    gamma_ratio: f64,
}

fn frame_transform(a: &FrameArgs, format: Format) -> Result<String, Failure> {
    let (u, v) = (Velocity::new(a.u)?, Velocity::new(a.v)?);
    let vp = kinematics::velocity_add(v, u)?;
    let r = FrameReport {
        schema_version: SCHEMA_VERSION,
        u: a.u,
        v: a.v,
        gamma_u: kinematics::gamma(u)?,
        gamma_v: kinematics::gamma(v)?,
        v_prime: vp.value(),
        gamma_v_prime: kinematics::gamma(vp)?,
        zeta: kinematics::zeta(u, v)?,
        gamma_ratio: kinematics::gamma(vp)? / kinematics::gamma(v)?,
    };
    Ok(match format {
        Format::Json => to_json(&r)?,
        Format::Csv => format!(
            "{FRAME_CSV_HEADER}\n{},{},{},{},{},{},{},{}\n",
            r.u, r.v, r.gamma_u, r.gamma_v, r.v_prime, r.gamma_v_prime, r.zeta, r.gamma_ratio
        ),
    })
}

#[derive(Serialize)]
struct ItoCheckReport {
    schema_version: u32,
    seed: u64,
    triples: usize,
    max_unitarity_defect: f64,
    zetas: Vec<f64>,
    max_covariance_error: f64,
    defects: Vec<TripleDefect>,
}

#[derive(Serialize)]
struct TripleDefect {
    index: usize,
    dim: usize,
    unitarity_defect: f64,
}

fn random_triple(d: usize, rng: &mut ChaCha8Rng) -> crate::error::Result<HPTriple> {
    HPTriple::new(
        linalg::random_unitary(d, rng),
        linalg::random_ginibre(d, rng),
        linalg::random_hermitian(d, rng),
    )
}

/// Largest deviation between scale-then-multiply and multiply-then-scale
/// over all pairs of Fock and thermal unit monomials.
pub fn table_covariance_error(zeta: f64) -> crate::error::Result<f64> {
    let scaling = FrameScaling::bose(zeta)?;
    let mut worst: f64 = 0.0;
    for basis in [Basis::Fock, Basis::thermal(0.7)?] {
        for &l in basis.symbols() {
            for &r in basis.symbols() {
                let (x, y) = (
                    ItoExpression::unit(basis, l)?,
                    ItoExpression::unit(basis, r)?,
                );
                let direct =
                    ito_algebra::frame_scale(&ito_algebra::ito_product(&x, &y)?, &scaling)?;
                let scaled = ito_algebra::ito_product(
                    &ito_algebra::frame_scale(&x, &scaling)?,
                    &ito_algebra::frame_scale(&y, &scaling)?,
                )?;
                worst = worst.max(direct.try_add(&scaled.scaled(real(-1.0)))?.max_abs());
            }
        }
    }
    Ok(worst)
}

fn ito_check(a: &ItoCheckArgs, seed: Option<u64>, format: Format) -> Result<String, Failure> {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut defects = Vec::with_capacity(a.triples);
    for index in 0..a.triples {
        let dim = if index % 2 == 0 { 2 } else { 3 };
        let t = random_triple(dim, &mut rng)?;
        let g = ito_algebra::hp_generator(&t)?;
        defects.push(TripleDefect {
            index,
            dim,
            unitarity_defect: ito_algebra::unitarity_defect(&g)?.max_abs(),
        });
    }
    let mut cov: f64 = 0.0;
    for &z in &a.zetas {
        cov = cov.max(table_covariance_error(z)?);
    }
    let report = ItoCheckReport {
        schema_version: SCHEMA_VERSION,
        seed,
        triples: a.triples,
        max_unitarity_defect: defects
            .iter()
            .map(|d| d.unitarity_defect)
            .fold(0.0, f64::max),
        zetas: a.zetas.clone(),
        max_covariance_error: cov,
        defects,
    };
    Ok(match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = format!("{ITO_CHECK_CSV_HEADER}\n");
            for d in &report.defects {
                let _ = writeln!(s, "{},{},{}", d.index, d.dim, d.unitarity_defect);
            }
            s
        }
    })
}

#[derive(Serialize)]
struct QubitState {
    rho_ee: f64,
    rho_gg: f64,
    re_rho_eg: f64,
    im_rho_eg: f64,
}

impl QubitState {
    fn of(rho: &linalg::Matrix) -> Self {
        Self {
            rho_ee: rho[(1, 1)].re,
            rho_gg: rho[(0, 0)].re,
            re_rho_eg: rho[(1, 0)].re,
            im_rho_eg: rho[(1, 0)].im,
        }
    }
}

#[derive(Serialize)]
struct QubitRunReport {
    schema_version: u32,
    n: f64,
    omega: f64,
    tau: f64,
    steps: usize,
    initial: QubitState,
    final_state: QubitState,
    exact_final: QubitState,
    trace_distance_to_exact: f64,
    max_trace_drift: f64,
}

fn trajectory_csv(traj: &Trajectory) -> Result<String, Failure> {
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Failure::Io(io::Error::other(e)))
}

fn qubit_report(
    traj: &Trajectory,
    rho0: &DensityMatrix,
    n: f64,
    omega: f64,
    tau: f64,
    steps: usize,
    format: Format,
) -> Result<String, Failure> {
    if format == Format::Csv {
        return trajectory_csv(traj);
    }
    let last = traj
        .last()
        .ok_or(Failure::Numerical(Error::NonFinite { step: 0 }))?;
    let exact = open_system::detector_exact(rho0, tau, n, omega)?;
    let r = QubitRunReport {
        schema_version: SCHEMA_VERSION,
        n,
        omega,
        tau,
        steps,
        initial: QubitState::of(rho0.matrix()),
        final_state: QubitState::of(&last.rho),
        exact_final: QubitState::of(exact.matrix()),
        trace_distance_to_exact: linalg::trace_distance(&last.rho, exact.matrix()),
        max_trace_drift: traj.max_trace_drift(),
    };
    to_json(&r)
}

fn detector(a: &DetectorArgs, format: Format) -> Result<String, Failure> {
    let n = match (a.n, a.a) {
        (Some(n), _) => n,
        (None, Some(acc)) => open_system::bose_occupation(a.omega, acc)?,
        (None, None) => 0.0,
    };
    let rho0 = DensityMatrix::qubit(a.rho_ee, Complex64::new(a.rho_eg, 0.0))?;
    let g = open_system::detector_generator(n, a.omega)?;
    let traj = open_system::evolve_master(&g, &rho0, a.tau, a.steps)?;
    qubit_report(&traj, &rho0, n, a.omega, a.tau, a.steps, format)
}

fn qsde_sim(a: &QsdeArgs, format: Format) -> Result<String, Failure> {
    let mut cfg = SimConfig::detector(a.n, a.omega, a.dtau, a.steps);
    cfg.cutoff = a.cutoff;
    let rho0 = DensityMatrix::qubit(a.rho_ee, Complex64::new(0.0, 0.0))?;
    let traj = noise_repr::simulate_qsde(&cfg, &linalg::sigma_minus(), &rho0)?;
    qubit_report(&traj, &rho0, a.n, a.omega, cfg.horizon(), a.steps, format)
}

#[derive(Serialize)]
struct OscillatorRow {
    tau: f64,
    mean_number: f64,
    fidelity_gibbs: f64,
    trace_drift: f64,
}

#[derive(Serialize)]
struct OscillatorReport {
    schema_version: u32,
    cutoff: usize,
    n: f64,
    rate: f64,
    tau: f64,
    steps: usize,
    final_fidelity_gibbs: f64,
    trajectory: Vec<OscillatorRow>,
}

fn oscillator(a: &OscillatorArgs, format: Format) -> Result<String, Failure> {
    if a.stride == 0 {
        return Err(Failure::Usage("stride must be at least 1".into()));
    }
    let g = open_system::oscillator_generator(a.cutoff, a.rate, a.n, a.omega, a.free_evolution)?;
    let rho0 = DensityMatrix::basis_state(a.cutoff, 0);
    let gibbs = open_system::truncated_gibbs(a.cutoff, a.n)?;
    let traj = open_system::evolve_master(&g, &rho0, a.tau, a.steps)?;
    let number = linalg::number(a.cutoff);
    let rows: Vec<OscillatorRow> = traj
        .points
        .iter()
        .enumerate()
        .filter(|(i, _)| i % a.stride == 0 || *i == a.steps)
        .map(|(_, p)| OscillatorRow {
            tau: p.tau,
            mean_number: linalg::trace(&(&number * &p.rho)).re,
            fidelity_gibbs: linalg::fidelity(&p.rho, gibbs.matrix()),
            trace_drift: p.trace_drift,
        })
        .collect();
    Ok(match format {
        Format::Csv => {
            let mut s = format!("{OSCILLATOR_CSV_HEADER}\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.tau, r.mean_number, r.fidelity_gibbs, r.trace_drift
                );
            }
            s
        }
        Format::Json => to_json(&OscillatorReport {
            schema_version: SCHEMA_VERSION,
            cutoff: a.cutoff,
            n: a.n,
            rate: a.rate,
            tau: a.tau,
            steps: a.steps,
            final_fidelity_gibbs: rows.last().map_or(f64::NAN, |r| r.fidelity_gibbs),
            trajectory: rows,
        })?,
    })
}

#[derive(Serialize)]
struct ResponseReport {
    schema_version: u32,
    rows: Vec<ResponseRow>,
}

#[derive(Serialize)]
struct ResponseRow {
    #[serde(flatten)]
    balance: unruh_limit::DetailedBalance,
    /// `response_pos / (Omega n(Omega))`.
    prefactor: f64,
}

fn response_rate(a: &ResponseArgs, format: Format) -> Result<String, Failure> {
    let mut rows = Vec::new();
    for &acc in &a.a {
        for &omega in &a.omega {
            if omega.is_nan() || omega <= 0.0 {
                return Err(Failure::Usage(format!(
                    "omega must be positive, got {omega}"
                )));
            }
            let balance = unruh_limit::detailed_balance(acc, omega)?;
            rows.push(ResponseRow {
                prefactor: balance.prefactor()?,
                balance,
            });
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut s = format!("{}\n", unruh_limit::RESPONSE_CSV_HEADER);
            for r in &rows {
                let _ = writeln!(s, "{}", r.balance.csv_row());
            }
            s
        }
        Format::Json => to_json(&ResponseReport {
            schema_version: SCHEMA_VERSION,
            rows,
        })?,
    })
}

/// One sample of a Rindler-wedge coordinate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WedgeSample {
    /// `"eta"` for curves of constant eta, `"xi"` for constant xi.
    pub family: &'static str,
    pub param: f64,
    /// The other radar coordinate along the curve.
    pub s: f64,
    pub t: f64,
    pub x: f64,
}

fn spread(count: usize, max: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|k| -max + 2.0 * max * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Curves of constant eta (over xi) and constant xi (over eta), including
/// the accelerated worldline xi = 0.
pub fn wedge_samples(
    a: f64,
    eta_curves: usize,
    xi_curves: usize,
    samples: usize,
    eta_max: f64,
    xi_max: f64,
) -> crate::error::Result<Vec<WedgeSample>> {
    for (name, v) in [("eta_max", eta_max), ("xi_max", xi_max)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                reason: "must be finite and non-negative",
            });
        }
    }
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "must be at least 2",
        });
    }
    let etas = spread(eta_curves, eta_max);
    let mut xis = spread(xi_curves, xi_max);
    if !xis.contains(&0.0) {
        xis.push(0.0);
        xis.sort_by(f64::total_cmp);
    }
    let mut out = Vec::new();
    for &eta in &etas {
        for xi in spread(samples, xi_max.max(f64::MIN_POSITIVE)) {
            let e = kinematics::radar_to_minkowski(RadarCoord::new(eta, xi, a)?)?;
            out.push(WedgeSample {
                family: "eta",
                param: eta,
                s: xi,
                t: e.t,
                x: e.x,
            });
        }
    }
    for &xi in &xis {
        for eta in spread(samples, eta_max.max(f64::MIN_POSITIVE)) {
            let e = kinematics::radar_to_minkowski(RadarCoord::new(eta, xi, a)?)?;
            out.push(WedgeSample {
                family: "xi",
                param: xi,
                s: eta,
                t: e.t,
                x: e.x,
            });
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct WedgeReport {
    schema_version: u32,
    a: f64,
    samples: Vec<WedgeSample>,
}

fn wedge_data(a: &WedgeArgs, format: Format) -> Result<String, Failure> {
    let samples = wedge_samples(
        a.a,
        a.eta_curves,
        a.xi_curves,
        a.samples,
        a.eta_max,
        a.xi_max,
    )?;
    Ok(match format {
        Format::Csv => {
            let mut s = format!("{WEDGE_CSV_HEADER}\n");
            for p in &samples {
                let _ = writeln!(s, "{},{},{},{},{}", p.family, p.param, p.s, p.t, p.x);
            }
            s
        }
        Format::Json => to_json(&WedgeReport {
            schema_version: SCHEMA_VERSION,
            a: a.a,
            samples,
        })?,
    })
}
