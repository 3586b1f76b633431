//! Command-line front end for `oscbath`.

pub mod bath_spec;
pub mod grid;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oscbath::exec::map_ordered;
use oscbath::quadrature::{QuadError, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use oscbath::spectral::{delta_weight, weight_analytic, weight_general, weight_numeric};
use oscbath::thermo::{self, asymptotic_law, check_third_law, ThirdLawReport};
use oscbath::{BathModel, Execution, OscillatorParams, QuadConfig, ThermoOptions, ThermoPoint, WeightPath};

pub use bath_spec::{parse_bath_spec, SpecError};
pub use grid::{GridSpec, Spacing};
pub use output::{format_value, Format, Table};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

pub const EXIT_OK: u8 = 0;
/// The third-law check ran but did not pass.
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

pub const THERMO_HEADERS: [&str; 6] = ["theta", "F", "S", "U", "f_err", "s_err"];
pub const ASYMPTOTE_HEADERS: [&str; 7] = ["theta", "F_quad", "F_asym", "F_ratio", "S_quad", "S_asym", "S_ratio"];
pub const SPECTRAL_HEADERS: [&str; 4] = ["omega", "analytic", "general", "numeric"];
pub const THIRD_LAW_HEADERS: [&str; 3] = ["theta", "S", "S_asym"];

#[derive(Debug, Parser)]
#[command(name = "oscbath", version, about = "Free energy, entropy and energy of an oscillator in a heat bath")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F, S and U at a single temperature.
    Compute {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        theta: f64,
        #[command(flatten)]
        si: SiArgs,
    },
    /// F, S and U over a temperature grid, one row per temperature.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        thetas: ThetaArgs,
        #[command(flatten)]
        si: SiArgs,
    },
    /// Quadrature against the closed-form low-temperature laws.
    Asymptote {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        thetas: ThetaArgs,
        #[command(flatten)]
        si: SiArgs,
    },
    /// Check that S vanishes with the predicted power of θ. Exits 1 if not.
    CheckThirdLaw {
        #[command(flatten)]
        common: CommonArgs,
        /// Defaults to 21 log-spaced points from 1e-3 to 0.1.
        #[arg(long, value_name = "START:STOP:COUNT:log|lin")]
        theta_grid: Option<GridSpec>,
        #[command(flatten)]
        si: SiArgs,
    },
    /// Spectral weight by the three evaluation paths.
    SpectralDump {
        #[arg(long, value_name = "SPEC")]
        bath: String,
        #[arg(long, value_name = "START:STOP:COUNT:log|lin", default_value = "1e-3:1e3:200:log")]
        omega_grid: GridSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// e.g. "bath=ohmic gamma=0.1", "bath=powerlaw b=1 alpha=0.5 omega0=1 mass=1"
    #[arg(long, value_name = "SPEC")]
    pub bath: String,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    pub abs_tol: f64,
    #[arg(long, value_enum, default_value_t = PathArg::Analytic)]
    pub path: PathArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Skip the finite-difference entropy cross-check.
    #[arg(long)]
    pub no_cross_check: bool,
    /// Evaluate temperatures one at a time on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ThetaArgs {
    /// May be repeated.
    #[arg(long)]
    pub theta: Vec<f64>,
    #[arg(long, value_name = "START:STOP:COUNT:log|lin")]
    pub theta_grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Args)]
pub struct SiArgs {
    /// Oscillator frequency in rad/s. Energies are then reported in J
    /// (times ħω₀ per reduced unit, ħ = 1.054571817e-34 J s) and entropies
    /// in J/K (times k_B = 1.380649e-23 J/K). The theta column stays reduced.
    #[arg(long, value_name = "RAD_PER_S")]
    pub omega0_si: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Analytic,
    General,
    Numeric,
}

impl From<PathArg> for WeightPath {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Analytic => WeightPath::Analytic,
            PathArg::General => WeightPath::GeneralMu,
            PathArg::Numeric => WeightPath::NumericDerivative,
        }
    }
}

/// A message and the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<oscbath::Error> for Failure {
    fn from(e: oscbath::Error) -> Self {
        use oscbath::Error as E;
        let code = match &e {
            E::Quadrature(QuadError::NonConvergence { .. } | QuadError::NonFinite { .. }) | E::PoleProximity { .. } => {
                EXIT_NUMERIC
            }
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Self::config(e.to_string())
    }
}

/// Multipliers applied to reduced energies and entropies.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Units {
    energy: f64,
    entropy: f64,
}

impl Units {
    fn new(si: &SiArgs, params: &OscillatorParams) -> Result<Self, Failure> {
        match si.omega0_si {
            None => Ok(Self {
                energy: 1.0,
                entropy: 1.0,
            }),
            Some(w) if w.is_finite() && w > 0.0 => Ok(Self {
                // the oscillator frequency maps to w, so one reduced unit is w/omega0
                energy: HBAR * w / params.omega0(),
                entropy: K_B,
            }),
            Some(w) => Err(Failure::config(format!("--omega0-si must be positive and finite, got {w}"))),
        }
    }
}

struct Setup {
    bath: BathModel,
    params: OscillatorParams,
    options: ThermoOptions,
    exec: Execution,
}

fn setup(common: &CommonArgs) -> Result<Setup, Failure> {
    let (bath, params) = parse_bath_spec(&common.bath)?;
    let quad = QuadConfig {
        rel_tol: common.rel_tol,
        abs_tol: common.abs_tol,
        ..QuadConfig::default()
    };
    quad.validate().map_err(|e| Failure::config(e.to_string()))?;
    Ok(Setup {
        bath,
        params,
        options: ThermoOptions {
            quad,
            path: common.path.into(),
            cross_check: !common.no_cross_check,
        },
        exec: if common.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
    })
}

fn theta_list(args: &ThetaArgs) -> Vec<f64> {
    let mut thetas = match args.theta_grid {
        Some(g) => g.points(),
        None => args.theta.clone(),
    };
    thetas.sort_by(f64::total_cmp);
    thetas
}

fn thermo_row(p: &ThermoPoint, u: Units) -> Vec<f64> {
    vec![
        p.theta,
        p.free_energy * u.energy,
        p.entropy * u.entropy,
        p.internal_energy * u.energy,
        p.f_error * u.energy,
        p.s_error * u.entropy,
    ]
}

fn warn(theta: f64, warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: theta = {theta}: {w}");
    }
}

fn thermo_table(s: &Setup, thetas: &[f64], units: Units) -> Result<Table, Failure> {
    let results = thermo::sweep(&s.bath, &s.params, thetas, &s.options, s.exec);
    let mut table = Table::new(&THERMO_HEADERS);
    for r in results {
        let p = r?;
        warn(p.theta, &p.warnings);
        table.push(thermo_row(&p, units));
    }
    Ok(table)
}

fn asymptote_table(s: &Setup, thetas: &[f64], units: Units) -> Result<Table, Failure> {
    let laws = asymptotic_law(&s.bath, &s.params)?;
    let opts = ThermoOptions {
        cross_check: false,
        ..s.options
    };
    let results = map_ordered(thetas, s.exec, |&t| -> oscbath::Result<(f64, f64)> {
        let f = thermo::free_energy(&s.bath, &s.params, t, &opts)?.value;
        let e = thermo::entropy(&s.bath, &s.params, t, &opts)?.analytic.value;
        Ok((f, e))
    });
    let mut table = Table::new(&ASYMPTOTE_HEADERS);
    for (&t, r) in thetas.iter().zip(results) {
        let (f, e) = r?;
        let (fa, sa) = (laws.free_energy.eval(t), laws.entropy.eval(t));
        table.push(vec![
            t,
            f * units.energy,
            fa * units.energy,
            f / fa,
            e * units.entropy,
            sa * units.entropy,
            e / sa,
        ]);
    }
    Ok(table)
}

fn third_law_table(report: &ThirdLawReport, s: &Setup, units: Units) -> Result<Table, Failure> {
    let law = asymptotic_law(&s.bath, &s.params)?.entropy;
    let mut table = Table::new(&THIRD_LAW_HEADERS);
    for &(t, e) in report.samples.iter().rev() {
        table.push(vec![t, e * units.entropy, law.eval(t) * units.entropy]);
    }
    Ok(table)
}

fn spectral_table(bath: &BathModel, params: &OscillatorParams, omegas: &[f64]) -> Table {
    let mut table = Table::new(&SPECTRAL_HEADERS);
    for &w in omegas {
        let nan = |r: oscbath::Result<f64>| r.unwrap_or(f64::NAN);
        table.push(vec![
            w,
            nan(weight_analytic(bath, params, w)),
            nan(weight_general(bath, params, w)),
            nan(weight_numeric(bath, params, w)),
        ]);
    }
    table
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(table: &Table, format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut w = open_output(out)?;
    table
        .write(format, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Failure::config(format!("write failed: {e}")))
}

fn emit_third_law(report: &ThirdLawReport, table: &Table, format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            emit(table, format, out)?;
            eprintln!(
                "{}: fitted exponent {}, predicted {}, positive {}, decreasing {}: {}",
                report.bath,
                report.fitted_exponent.map_or("n/a".into(), format_value),
                report.predicted_exponent.map_or("exponential".into(), format_value),
                report.all_positive,
                report.decreasing,
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(())
        }
        Format::Json => {
            let value = serde_json::json!({
                "bath": report.bath,
                "fitted_exponent": report.fitted_exponent,
                "predicted_exponent": report.predicted_exponent,
                "all_positive": report.all_positive,
                "decreasing": report.decreasing,
                "pass": report.pass,
                "samples": table.to_json(),
            });
            let mut w = open_output(out)?;
            serde_json::to_writer_pretty(&mut w, &value)
                .map_err(io::Error::from)
                .and_then(|_| w.write_all(b"\n"))
                .and_then(|_| w.flush())
                .map_err(|e| Failure::config(format!("write failed: {e}")))
        }
    }
}

/// Run one parsed command and return the process exit code.
pub fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compute { common, theta, si } => {
            let mut s = setup(&common)?;
            // a single point: let the quadrature batches use the threads
            s.options.quad.exec = s.exec;
            let units = Units::new(&si, &s.params)?;
            let table = thermo_table(&s, &[theta], units)?;
            emit(&table, common.format, &common.out)?;
        }
        Command::Sweep { common, thetas, si } => {
            let s = setup(&common)?;
            let units = Units::new(&si, &s.params)?;
            let table = thermo_table(&s, &theta_list(&thetas), units)?;
            emit(&table, common.format, &common.out)?;
        }
        Command::Asymptote { common, thetas, si } => {
            let s = setup(&common)?;
            let units = Units::new(&si, &s.params)?;
            let table = asymptote_table(&s, &theta_list(&thetas), units)?;
            emit(&table, common.format, &common.out)?;
        }
        Command::CheckThirdLaw {
            common,
            theta_grid,
            si,
        } => {
            let s = setup(&common)?;
            let units = Units::new(&si, &s.params)?;
            let mut grid = theta_grid.map_or_else(
                || GridSpec {
                    start: 1e-3,
                    stop: 0.1,
                    count: 21,
                    spacing: Spacing::Log,
                }
                .points(),
                |g| g.points(),
            );
            grid.reverse();
            let report = check_third_law(&s.bath, &s.params, &grid, &s.options, s.exec)?;
            let table = third_law_table(&report, &s, units)?;
            emit_third_law(&report, &table, common.format, &common.out)?;
            if !report.pass {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::SpectralDump {
            bath,
            omega_grid,
            format,
            out,
        } => {
            let (bath, params) = parse_bath_spec(&bath)?;
            if let Some(d) = delta_weight(&bath, &params) {
                eprintln!(
                    "note: {bath} carries a delta weight {} at omega = {}; it is not in the table",
                    d.weight, d.pole_frequency
                );
            }
            let table = spectral_table(&bath, &params, &omega_grid.points());
            emit(&table, format, &out)?;
        }
    }
    Ok(EXIT_OK)
}
