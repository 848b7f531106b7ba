use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use harmconv::geometry::{boundary_curve, required_order, BoundaryCurve};
use harmconv::mappings::validate_normalization_slanted;
use harmconv::mapspec::{parse_dilatation, parse_number, MapExpr};
use harmconv::report::{params, Hypothesis, Report, Verdict};
use harmconv::series::{PowerSeries, DEFAULT_ORDER};
use harmconv::verify::{self, GridParams, SweepConfig, SweepRange};
use harmconv::Error;

/// Harmonic mappings of the unit disk, their convolutions, and sampled
/// verification of dilatation bounds and directional convexity.
///
/// Exit status: 0 when results are consistent, 1 when a check fails although
/// the hypotheses hold, 2 on invalid input.
#[derive(Parser)]
#[command(name = "harmconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Series truncation order (raised automatically for radii close to 1)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, default_value_t = 0.99)]
    rmax: f64,
    #[arg(long, default_value_t = 60)]
    nr: usize,
    #[arg(long, default_value_t = 240)]
    nphi: usize,
    /// Radius of the boundary curve used for the convexity test
    #[arg(long = "curve-r", default_value_t = 0.995)]
    curve_r: f64,
    /// Samples on the boundary curve
    #[arg(long = "curve-m", default_value_t = 1024)]
    curve_m: usize,
    #[arg(long = "lines", default_value_t = 200)]
    n_lines: usize,
    /// Also write the JSON report to this file
    #[arg(long)]
    json: Option<PathBuf>,
}

impl GridArgs {
    fn grid(&self) -> GridParams {
        GridParams {
            order: self.order,
            r_max: self.rmax,
            n_r: self.nr,
            n_phi: self.nphi,
            curve_r: self.curve_r,
            curve_m: self.curve_m,
            n_lines: self.n_lines,
        }
    }
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[arg(long, default_value_t = -0.95, allow_negative_numbers = true)]
    a_min: f64,
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    a_max: f64,
    #[arg(long, default_value_t = 41)]
    a_steps: usize,
    /// Lower end of the angle axis (excluded)
    #[arg(long, default_value = "-pi", value_parser = number, allow_negative_numbers = true)]
    angle_min: f64,
    /// Upper end of the angle axis (included)
    #[arg(long, default_value = "pi", value_parser = number, allow_negative_numbers = true)]
    angle_max: f64,
    #[arg(long, default_value_t = 41)]
    angle_steps: usize,
    #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
    gamma: f64,
    #[command(flatten)]
    grid: GridArgs,
}

impl SweepArgs {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            a_range: SweepRange::new(self.a_min, self.a_max, self.a_steps),
            angle_range: SweepRange::new(self.angle_min, self.angle_max, self.angle_steps),
            gamma: self.gamma,
            grid: self.grid.grid(),
            ..SweepConfig::default()
        }
    }
}

fn number(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// f0 convolved with the half-plane mapping of Möbius dilatation
    /// e^{2iγ}(z e^{iθ} + a)/(1 + a z e^{iθ})
    VerifyT1 {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, value_parser = number, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// f^a_γ convolved with the half-plane mapping of direction γ1 and dilatation e^{iθ}z^n
    VerifyT2 {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma1: f64,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// f^a_γ convolved with the strip mapping onto Ω_β with dilatation e^{iθ}z^n
    VerifyT3 {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_parser = number, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sweep the Möbius case over a and θ-γ
    SweepT1 {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep the half-plane family over n, a and θ
    SweepT2 {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        n: Vec<u32>,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma1: f64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep the strip family over n, a and θ
    SweepT3 {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        n: Vec<u32>,
        #[arg(long, default_value = "pi/2", value_parser = number)]
        beta: f64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Write the boundary curve f(r e^{iφ}) of a mapping as CSV
    Render {
        /// Mapping in the map-spec syntax, e.g. "conv(f0, fa(a=0.5))"
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 0.995)]
        r: f64,
        #[arg(long, default_value_t = 1024)]
        m: usize,
        /// Also write curves at radii 0.2, 0.4, 0.6, 0.8 and 0.95 next to the main file
        #[arg(long)]
        family: bool,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Output file; standard output when omitted
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check whether h + e^{-2iγ}g = s z/(1 - e^{iγ}z) admits a mapping with the
    /// given dilatation and h'(0) = 1
    ValidateNormalization {
        /// The factor s
        #[arg(long, default_value = "1", value_parser = number, allow_negative_numbers = true)]
        scale: f64,
        #[arg(long, default_value = "0", value_parser = number, allow_negative_numbers = true)]
        gamma: f64,
        /// Dilatation, e.g. "reflected(a=0.5,gamma=0)"
        #[arg(long)]
        dil: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Randomized cross-checks of closed forms against their oracles
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(report: &Report, path: Option<&Path>) -> Result<i32, Failure> {
    let text = report.to_json();
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            return Err(Failure::Io("<stdout>".into(), e))
        }
        _ => {}
    }
    if let Some(p) = path {
        fs::write(p, format!("{text}\n")).map_err(|e| Failure::Io(p.into(), e))?;
    }
    Ok(report.exit_code())
}

fn write_curve(curve: &BoundaryCurve, path: &Path) -> Result<(), Failure> {
    let mut file = fs::File::create(path).map_err(|e| Failure::Io(path.into(), e))?;
    curve
        .write_csv(&mut file)
        .map_err(|e| Failure::Io(path.into(), e))
}

fn family_path(path: &Path, r: f64) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.r{r}.{ext}"))
}

fn render(
    map: &str,
    r: f64,
    m: usize,
    family: bool,
    order: usize,
    csv: Option<&Path>,
) -> Result<i32, Failure> {
    let expr: MapExpr = map.parse()?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Failure::Usage(format!("r = {r} must lie in (0, 1)")));
    }
    let f = expr.build(order.max(required_order(r)))?;
    let curve = boundary_curve(&f, r, m)?;
    match csv {
        Some(path) => {
            write_curve(&curve, path)?;
            if family {
                for rf in [0.2, 0.4, 0.6, 0.8, 0.95] {
                    write_curve(&boundary_curve(&f, rf, m)?, &family_path(path, rf))?;
                }
            }
        }
        None if family => return Err(Failure::Usage("--family needs --csv".into())),
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            curve
                .write_csv(&mut out)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io("<stdout>".into(), e))?;
        }
    }
    Ok(0)
}

fn validate_normalization(
    scale: f64,
    gamma: f64,
    dil: &str,
    json_path: Option<&Path>,
) -> Result<i32, Failure> {
    let omega = parse_dilatation(dil)?;
    let comb = PowerSeries::geometric(num_complex::Complex64::from_polar(1.0, gamma), 1, 8)
        .scale(num_complex::Complex64::from(scale));
    let check = validate_normalization_slanted(&comb, gamma, &omega);
    let mut report = Report::new(
        "validate-normalization",
        params([
            ("scale", json!(scale)),
            ("gamma", json!(gamma)),
            ("dilatation", json!(omega.to_string())),
        ]),
        Hypothesis {
            case: "normalization".into(),
            satisfied: check.pass,
        },
    );
    let ok = check.pass;
    report.checks.push(check);
    report.verdict = if ok {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    emit(&report, json_path)
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::VerifyT1 {
            a,
            theta,
            gamma,
            grid,
        } => emit(
            &verify::verify_mobius(a, theta, gamma, &grid.grid())?,
            grid.json.as_deref(),
        ),
        Command::VerifyT2 {
            n,
            theta,
            gamma1,
            gamma,
            a,
            grid,
        } => emit(
            &verify::verify_half_plane(n, theta, gamma1, gamma, a, &grid.grid())?,
            grid.json.as_deref(),
        ),
        Command::VerifyT3 {
            n,
            theta,
            beta,
            gamma,
            a,
            grid,
        } => emit(
            &verify::verify_strip(n, theta, beta, gamma, a, &grid.grid())?,
            grid.json.as_deref(),
        ),
        Command::SweepT1 { sweep } => emit(
            &verify::sweep_mobius(&sweep.config())?,
            sweep.grid.json.as_deref(),
        ),
        Command::SweepT2 { n, gamma1, sweep } => {
            let cfg = SweepConfig {
                n,
                gamma1,
                ..sweep.config()
            };
            emit(&verify::sweep_half_plane(&cfg)?, sweep.grid.json.as_deref())
        }
        Command::SweepT3 { n, beta, sweep } => {
            let cfg = SweepConfig {
                n,
                beta,
                ..sweep.config()
            };
            emit(&verify::sweep_strip(&cfg)?, sweep.grid.json.as_deref())
        }
        Command::Render {
            map,
            r,
            m,
            family,
            order,
            csv,
        } => render(&map, r, m, family, order, csv.as_deref()),
        Command::ValidateNormalization {
            scale,
            gamma,
            dil,
            json,
        } => validate_normalization(scale, gamma, &dil, json.as_deref()),
        Command::Selftest { seed, json } => emit(&verify::selftest(seed)?, json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}
