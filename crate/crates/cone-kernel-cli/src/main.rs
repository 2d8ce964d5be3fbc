//! Command-line surface for the cone propagator evaluators.
//!
//! Subcommands: `eval` (one kernel value), `scan` (CSV sweep of `S`),
//! `compare` (cross-validation report), `images-check`, `dispersive`,
//! `orders` (all JSON reports).  Exit codes: 0 pass, 1 comparison failure,
//! 2 input error, 3 accuracy error.

mod config_file;

use clap::{Args, Parser, Subcommand};
use cone_kernel::harness::{
    self, auto_method, eval_s_method, GridSpec, OrderMode, Report, Spacing,
};
use cone_kernel::{
    assemble_kernel, reduce, ConeGeometry, EvalError, EvalResult, KernelQuery, Method,
};
use config_file::ConfigMap;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cone-kernel",
    version,
    about = "Schrödinger propagator kernels on flat euclidean cones",
    propagate_version = true
)]
struct Cli {
    /// key=value text config mirroring the long flags (CLI flags win)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed recorded in reports, for reproducible randomized pipelines
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress the human-readable summary on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the propagator kernel at one space-time point
    Eval(EvalCmd),
    /// Sweep S(x, η) over a grid and emit CSV
    Scan(ScanCmd),
    /// Cross-validate all admissible methods over a grid
    Compare(CompareCmd),
    /// Check the series kernel against the N-image closed form on ρ = 1/N
    ImagesCheck(ImagesCmd),
    /// Scan sup |S| over a grid (the dispersive 1/t bound, rescaled)
    Dispersive(DispersiveCmd),
    /// Fit empirical convergence orders (small-x or large-x)
    Orders(OrdersCmd),
}

#[derive(Args)]
struct EvalCmd {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    th1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long)]
    th2: Option<f64>,
    /// auto|series|contour|small-x|uniform|images-N
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args)]
struct ScanCmd {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long = "x-count")]
    x_count: Option<usize>,
    #[arg(long = "eta-count")]
    eta_count: Option<usize>,
    #[arg(long = "include-interface")]
    include_interface: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareCmd {
    /// TOML grid file; overrides the grid flags
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Comma-separated cone radii
    #[arg(long)]
    rho: Option<String>,
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long = "x-count")]
    x_count: Option<usize>,
    #[arg(long = "eta-count")]
    eta_count: Option<usize>,
    #[arg(long = "include-interface")]
    include_interface: bool,
    #[arg(long)]
    tol: Option<f64>,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImagesCmd {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long = "x-count")]
    x_count: Option<usize>,
    #[arg(long = "eta-count")]
    eta_count: Option<usize>,
    #[arg(long = "include-interface")]
    include_interface: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DispersiveCmd {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long = "x-min")]
    x_min: Option<f64>,
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    #[arg(long = "x-count")]
    x_count: Option<usize>,
    #[arg(long = "eta-count")]
    eta_count: Option<usize>,
    #[arg(long = "include-interface")]
    include_interface: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrdersCmd {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// small|large
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI failure classified by exit code.
enum Failure {
    /// exit 2
    Input(String),
    /// exit 3
    Accuracy(String),
    /// exit 1
    Comparison,
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match &e {
            EvalError::Domain(_) | EvalError::OnInterface(_) => Failure::Input(e.to_string()),
            EvalError::Accuracy { .. } | EvalError::Geometry(_) => Failure::Accuracy(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => match ConfigMap::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ConfigMap::default(),
    };
    match run(&cli, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Comparison) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Accuracy(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn opt<T: std::str::FromStr + Copy>(
    cli: Option<T>,
    cfg: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T, Failure> {
    Ok(cli.or(cfg.get::<T>(key)?).unwrap_or(default))
}

fn required<T: std::str::FromStr + Copy>(
    cli: Option<T>,
    cfg: &ConfigMap,
    key: &str,
) -> Result<T, Failure> {
    cli.or(cfg.get::<T>(key)?)
        .ok_or_else(|| Failure::Input(format!("missing required --{key}")))
}

fn flag(cli: bool, cfg: &ConfigMap, key: &str) -> Result<bool, Failure> {
    Ok(cli || cfg.get_flag(key)?)
}

fn run(cli: &Cli, cfg: &ConfigMap) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval(cmd) => run_eval(cli, cfg, cmd),
        Command::Scan(cmd) => run_scan(cli, cfg, cmd),
        Command::Compare(cmd) => run_compare(cli, cfg, cmd),
        Command::ImagesCheck(cmd) => run_images(cli, cfg, cmd),
        Command::Dispersive(cmd) => run_dispersive(cli, cfg, cmd),
        Command::Orders(cmd) => run_orders(cli, cfg, cmd),
    }
}

#[derive(Serialize)]
struct EvalOut {
    value_re: f64,
    value_im: f64,
    abs_err: f64,
    method: &'static str,
    x: f64,
    eta: f64,
}

fn run_eval(cli: &Cli, cfg: &ConfigMap, cmd: &EvalCmd) -> Result<(), Failure> {
    let rho = required(cmd.rho, cfg, "rho")?;
    let t_signed = required(cmd.t, cfg, "t")?;
    let r1 = required(cmd.r1, cfg, "r1")?;
    let th1 = required(cmd.th1, cfg, "th1")?;
    let r2 = required(cmd.r2, cfg, "r2")?;
    let th2 = required(cmd.th2, cfg, "th2")?;
    let kmax = opt(cmd.kmax, cfg, "kmax", harness::DEFAULT_KMAX)?;
    // The core evaluators require t > 0; negative times go through the
    // conjugation symmetry K(−t) = conj K(t).
    let conjugate = t_signed < 0.0;
    let t = t_signed.abs();
    let method_str = cmd
        .method
        .clone()
        .or(cfg.get::<String>("method").map_err(Failure::Input)?)
        .unwrap_or_else(|| "auto".to_string());

    let g = ConeGeometry::new(rho)?;
    let q = KernelQuery::new(t, r1, th1, r2, th2)?;
    let red = reduce(&q, &g);

    let kernel: EvalResult = if let Some(n_str) = method_str.strip_prefix("images-") {
        let n: usize = n_str
            .parse()
            .map_err(|_| Failure::Input(format!("bad image count in method {method_str:?}")))?;
        if n == 0 || (rho * n as f64 - 1.0).abs() > 1e-9 {
            return Err(Failure::Input(format!(
                "images-{n} is the closed form for rho = 1/{n}; got rho = {rho}"
            )));
        }
        let value = cone_kernel::asymptotic::images_closed_form(&q, n)?;
        EvalResult {
            value,
            abs_err: 1e-15 * n as f64 * value.norm(),
            method: Method::Images,
        }
    } else {
        let m = match method_str.as_str() {
            "auto" => None,
            "series" => Some(Method::Series),
            "contour" => Some(Method::Contour),
            "small-x" | "small_x" => Some(Method::SmallX),
            "uniform" => Some(Method::Uniform),
            other => {
                return Err(Failure::Input(format!(
                "unknown method {other:?}; expected auto|series|contour|small-x|uniform|images-N"
            )))
            }
        };
        let s = match m {
            None => harness::eval_s_auto(red.x, red.eta, &g, kmax)?,
            Some(m) => eval_s_method(m, red.x, red.eta, &g, kmax)?,
        };
        assemble_kernel(&s, &q, &g)?
    };

    let value = if conjugate {
        kernel.value.conj()
    } else {
        kernel.value
    };
    let out = EvalOut {
        value_re: value.re,
        value_im: value.im,
        abs_err: kernel.abs_err,
        method: kernel.method.as_str(),
        x: red.x,
        eta: red.eta,
    };
    print_stdout(&serde_json::to_string(&out).expect("serialize"));
    if !cli.quiet {
        eprintln!(
            "eval: method {} at x = {:.6}, eta = {:.6} (auto would pick {})",
            out.method,
            red.x,
            red.eta,
            auto_method(red.x, red.eta, &g).as_str()
        );
    }
    Ok(())
}

fn run_scan(cli: &Cli, cfg: &ConfigMap, cmd: &ScanCmd) -> Result<(), Failure> {
    let rho = required(cmd.rho, cfg, "rho")?;
    let x_min = opt(cmd.x_min, cfg, "x-min", 0.5)?;
    let x_max = opt(cmd.x_max, cfg, "x-max", 20.0)?;
    let x_count = opt(cmd.x_count, cfg, "x-count", 24)?;
    let eta_count = opt(cmd.eta_count, cfg, "eta-count", 16)?;
    let include_interface = flag(cmd.include_interface, cfg, "include-interface")?;
    let kmax = harness::DEFAULT_KMAX;

    let g = ConeGeometry::new(rho)?;
    let grid = GridSpec::new(
        vec![rho],
        x_min,
        x_max,
        x_count,
        eta_count,
        include_interface,
        Spacing::Log,
    )?;

    let mut csv = String::from("rho,x,eta,method,re,im,abs_err\n");
    for x in grid.x_values() {
        for eta in grid.eta_values(&g) {
            let r = harness::eval_s_auto(x, eta, &g, kmax)?;
            csv.push_str(&format!(
                "{rho:.16e},{x:.16e},{eta:.16e},{},{:.16e},{:.16e},{:.16e}\n",
                r.method.as_str(),
                r.value.re,
                r.value.im,
                r.abs_err
            ));
        }
    }
    emit(cli, cmd.out.as_deref(), &csv)?;
    if !cli.quiet {
        eprintln!("scan: {} points written", grid.x_count * grid.eta_count);
    }
    Ok(())
}

fn parse_rho_list(raw: &str) -> Result<Vec<f64>, Failure> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("bad rho value {s:?}")))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct GridFile {
    rho: Vec<f64>,
    x_min: f64,
    x_max: f64,
    x_count: usize,
    eta_count: usize,
    #[serde(default)]
    include_interface: bool,
}

fn compare_grid(cfg: &ConfigMap, cmd: &CompareCmd) -> Result<GridSpec, Failure> {
    if let Some(path) = &cmd.grid {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read grid {}: {e}", path.display())))?;
        let gf: GridFile = toml::from_str(&text)
            .map_err(|e| Failure::Input(format!("bad grid file {}: {e}", path.display())))?;
        return Ok(GridSpec::new(
            gf.rho,
            gf.x_min,
            gf.x_max,
            gf.x_count,
            gf.eta_count,
            gf.include_interface,
            Spacing::Log,
        )?);
    }
    let rho_raw = cmd
        .rho
        .clone()
        .or(cfg.get::<String>("rho").map_err(Failure::Input)?)
        .ok_or_else(|| Failure::Input("missing --rho (or --grid FILE.toml)".into()))?;
    Ok(GridSpec::new(
        parse_rho_list(&rho_raw)?,
        opt(cmd.x_min, cfg, "x-min", 0.5)?,
        opt(cmd.x_max, cfg, "x-max", 20.0)?,
        opt(cmd.x_count, cfg, "x-count", 12)?,
        opt(cmd.eta_count, cfg, "eta-count", 16)?,
        flag(cmd.include_interface, cfg, "include-interface")?,
        Spacing::Log,
    )?)
}

fn run_compare(cli: &Cli, cfg: &ConfigMap, cmd: &CompareCmd) -> Result<(), Failure> {
    let tol = opt(cmd.tol, cfg, "tol", 1e-6)?;
    let grid = compare_grid(cfg, cmd)?;
    let mut report = harness::compare(&grid, tol)?;
    report.seed = cli.seed;
    finish_report(cli, cmd.out.as_deref(), &report, "compare")
}

fn run_images(cli: &Cli, cfg: &ConfigMap, cmd: &ImagesCmd) -> Result<(), Failure> {
    let n = required(cmd.n, cfg, "n")?;
    let grid = GridSpec::new(
        vec![1.0], // replaced by 1/N inside images_check
        opt(cmd.x_min, cfg, "x-min", 0.5)?,
        opt(cmd.x_max, cfg, "x-max", 20.0)?,
        opt(cmd.x_count, cfg, "x-count", 12)?,
        opt(cmd.eta_count, cfg, "eta-count", 16)?,
        flag(cmd.include_interface, cfg, "include-interface")?,
        Spacing::Log,
    )?;
    let mut report = harness::images_check(n, &grid)?;
    report.seed = cli.seed;
    finish_report(cli, cmd.out.as_deref(), &report, "images-check")
}

fn run_dispersive(cli: &Cli, cfg: &ConfigMap, cmd: &DispersiveCmd) -> Result<(), Failure> {
    let rho = required(cmd.rho, cfg, "rho")?;
    let g = ConeGeometry::new(rho)?;
    let grid = GridSpec::new(
        vec![rho],
        opt(cmd.x_min, cfg, "x-min", 0.0)?,
        opt(cmd.x_max, cfg, "x-max", 500.0)?,
        opt(cmd.x_count, cfg, "x-count", 100)?,
        opt(cmd.eta_count, cfg, "eta-count", 48)?,
        flag(cmd.include_interface, cfg, "include-interface")?,
        Spacing::Linear,
    )?;
    let mut report = harness::dispersive_scan(&g, &grid)?;
    report.seed = cli.seed;
    finish_report(cli, cmd.out.as_deref(), &report, "dispersive")
}

fn run_orders(cli: &Cli, cfg: &ConfigMap, cmd: &OrdersCmd) -> Result<(), Failure> {
    let rho = required(cmd.rho, cfg, "rho")?;
    let eta = required(cmd.eta, cfg, "eta")?;
    let kmax = opt(cmd.kmax, cfg, "kmax", 0)?;
    let mode_raw = cmd
        .mode
        .clone()
        .or(cfg.get::<String>("mode").map_err(Failure::Input)?)
        .ok_or_else(|| Failure::Input("missing --mode small|large".into()))?;
    let mode = match mode_raw.as_str() {
        "small" | "small-x" | "small_x" => OrderMode::SmallX,
        "large" | "large-x" | "large_x" => OrderMode::LargeX,
        other => return Err(Failure::Input(format!("unknown mode {other:?}"))),
    };
    let g = ConeGeometry::new(rho)?;
    let mut report = harness::order_check(&g, eta, mode, kmax)?;
    report.seed = cli.seed;
    // inconclusive fits are reported but not a failure
    let out_path = cmd.out.as_deref();
    emit(cli, out_path, &report.to_json())?;
    if !cli.quiet {
        summarize(&report);
    }
    if report.verdict == cone_kernel::harness::Verdict::Fail {
        return Err(Failure::Comparison);
    }
    Ok(())
}

fn finish_report(
    cli: &Cli,
    out: Option<&std::path::Path>,
    report: &Report,
    _kind: &str,
) -> Result<(), Failure> {
    emit(cli, out, &report.to_json())?;
    if !cli.quiet {
        summarize(report);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Comparison)
    }
}

fn summarize(report: &Report) {
    let s = &report.summary;
    let mut line = format!(
        "{}: {} records, {} failed, verdict {:?}",
        report.kind, s.total_records, s.failed_records, report.verdict
    );
    if let Some(d) = s.max_abs_diff {
        line.push_str(&format!(", max diff {d:.3e}"));
    }
    if let Some(v) = s.sup_abs {
        line.push_str(&format!(", sup|S| {v:.9}"));
    }
    if let Some(v) = s.slope {
        line.push_str(&format!(
            ", slope {v:.3} (target {:.3} ± {:.2})",
            s.slope_target.unwrap_or(f64::NAN),
            s.slope_window.unwrap_or(f64::NAN)
        ));
    }
    eprintln!("{line}");
}

/// Writes a line to stdout, treating a broken pipe (reader such as `head`
/// went away) as a clean exit rather than a panic.
fn print_stdout(payload: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let status = out
        .write_all(payload.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .and_then(|_| out.flush());
    if let Err(e) = status {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn emit(_cli: &Cli, out: Option<&std::path::Path>, payload: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, payload)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            print_stdout(payload);
        }
    }
    Ok(())
}
