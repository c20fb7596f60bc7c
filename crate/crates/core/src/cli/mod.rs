//! Command-line front end.

pub mod format;
pub mod spec;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{entanglement_flux, two_way_capacity, BoundReport};
use crate::channels::ChannelSpec;
use crate::composition::{fading_bound, multiband, two_way_pair, ChannelEnsemble};
use crate::error::{Error, Result};
use crate::qkd_rates::{ideal_rate, ProtocolId};
use crate::telesim::{choi_of, stretch_check, QuditChannel};
use format::{g12, json_number};
use spec::{parse_channel, parse_members, RawSpec};
use sweep::{default_axis, km_to_eta, Series, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qcap", version, about = "Two-way capacity bounds and QKD benchmark rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower and upper bounds on the two-way capacity of a channel.
    Capacity {
        spec: String,
        /// Combine `;`-separated members (`w@spec` sets fading weights).
        #[arg(long, value_enum)]
        compose: Option<Compose>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Tabulate bounds or protocol rates along one parameter.
    Sweep {
        /// Channel spec; the swept parameter may be omitted.
        spec: String,
        /// Swept parameter (default: eta, g, xi or p by family).
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Axis values are fibre lengths in km at 0.2 dB/km.
        #[arg(long)]
        distance_km: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "lower,upper")]
        series: String,
    },
    /// Convergence of the finite-mu relative entropy to the closed-form flux.
    VerifyLimit {
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        mu: Vec<f64>,
    },
    /// Teleportation-covariance verdict and Choi roundtrip distance.
    TelesimCheck { spec: String },
    /// Ideal key rate of a benchmark protocol.
    QkdRate {
        protocol: String,
        /// Transmissivity, or a distance in km with --distance-km.
        #[arg(allow_hyphen_values = true)]
        value: f64,
        #[arg(long)]
        distance_km: bool,
        /// Alice-relay transmissivity for cvmdi-asym.
        #[arg(long)]
        eta_a: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Compose {
    Fading,
    Pair,
    Multiband,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

enum Failure {
    Lib(Error),
    Verify(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Parse { .. }) {
                EXIT_PARSE
            } else {
                EXIT_DOMAIN
            }
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_VERIFY
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Capacity { spec, compose, format } => {
            let report = capacity(&spec, compose)?;
            write_report(out, &report, format)?;
        }
        Command::Sweep { spec, axis, from, to, points, distance_km, format, out: path, series } => {
            let spec = RawSpec::parse(&spec)?;
            let axis = axis.unwrap_or_else(|| default_axis(spec.family()).to_string());
            let cfg = SweepConfig { spec, axis, from, to, points, distance_km, series: Series::parse_list(&series)? };
            let table = cfg.run()?;
            let text = match format {
                TableFormat::Csv => table.to_csv(),
                TableFormat::Json => format!("{}\n", serde_json::to_string_pretty(&table.to_json()).expect("json")),
            };
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::VerifyLimit { spec, mu } => verify_limit(&parse_channel(&spec)?, &mu, out)?,
        Command::TelesimCheck { spec } => telesim_check(&parse_channel(&spec)?, out)?,
        Command::QkdRate { protocol, value, distance_km, eta_a, format } => {
            let eta = if distance_km { km_to_eta(value) } else { value };
            let p = match (protocol.as_str(), eta_a) {
                ("cvmdi-asym", Some(a)) => ProtocolId::cv_mdi_with_alice_link(a, eta)?,
                ("cvmdi-asym", None) => return Err(Error::parse(0, "cvmdi-asym requires --eta-a").into()),
                (token, _) => ProtocolId::from_token(token)
                    .ok_or_else(|| Error::parse(0, format!("unknown protocol '{token}'")))?,
            };
            let rate = ideal_rate(p, eta)?;
            let capacity = entanglement_flux(&ChannelSpec::lossy(eta)?);
            match format {
                ReportFormat::Text => {
                    writeln!(out, "protocol: {}", p.token())?;
                    writeln!(out, "eta: {}", g12(eta))?;
                    writeln!(out, "rate: {}", g12(rate.value))?;
                    writeln!(out, "clamped: {}", rate.clamped)?;
                    writeln!(out, "capacity: {}", g12(capacity))?;
                }
                ReportFormat::Json => {
                    let v = serde_json::json!({
                        "protocol": p.token(),
                        "eta": json_number(eta),
                        "rate": json_number(rate.value),
                        "raw": json_number(rate.raw),
                        "clamped": rate.clamped,
                        "capacity": json_number(capacity),
                    });
                    writeln!(out, "{v}")?;
                }
            }
        }
    }
    Ok(())
}

fn capacity(spec: &str, compose: Option<Compose>) -> Result<BoundReport> {
    let Some(mode) = compose else {
        return Ok(two_way_capacity(&parse_channel(spec)?));
    };
    let members = parse_members(spec)?;
    let specs: Vec<ChannelSpec> = members.iter().map(|(_, s)| s.clone()).collect();
    match mode {
        Compose::Fading => {
            let ensemble = if members.iter().all(|(w, _)| w.is_none()) {
                ChannelEnsemble::uniform(specs)?
            } else if members.iter().all(|(w, _)| w.is_some()) {
                ChannelEnsemble::new(members.into_iter().map(|(w, s)| (w.expect("checked"), s)).collect())?
            } else {
                return Err(Error::parse(0, "give a weight for every fading member or for none"));
            };
            let upper = fading_bound(&ensemble)?;
            Ok(BoundReport::assemble((0.0, "none"), (upper, "fading-flux"), false))
        }
        Compose::Pair => match specs.as_slice() {
            [f, b] => Ok(two_way_pair(f, b)),
            _ => Err(Error::parse(0, format!("pair needs exactly 2 members, got {}", specs.len()))),
        },
        Compose::Multiband => multiband(&specs),
    }
}

fn write_report(out: &mut dyn Write, r: &BoundReport, format: ReportFormat) -> std::io::Result<()> {
    match format {
        ReportFormat::Text => {
            writeln!(out, "lower: {} ({})", g12(r.lower), r.lower_name)?;
            writeln!(out, "upper: {} ({})", g12(r.upper), r.upper_name)?;
            writeln!(out, "exact: {}", r.exact)
        }
        ReportFormat::Json => {
            let v = serde_json::json!({
                "lower": json_number(r.lower),
                "lower_name": r.lower_name,
                "upper": json_number(r.upper),
                "upper_name": r.upper_name,
                "exact": r.exact,
            });
            writeln!(out, "{v}")
        }
    }
}

/// Largest accepted `|diff| mu`.
pub const SCALED_DIFF_MAX: f64 = 10.0;
/// Largest accepted ratio between successive `|diff| mu` values.
pub const GROWTH_FACTOR: f64 = 1.5;

/// First index where `|diff| mu` leaves the bound or grows by more than [`GROWTH_FACTOR`].
pub fn limit_failure(scaled: &[f64]) -> Option<usize> {
    scaled.iter().enumerate().position(|(i, &s)| {
        s.is_nan() || s > SCALED_DIFF_MAX || (i > 0 && s > scaled[i - 1] * GROWTH_FACTOR + 1e-9)
    })
}

fn verify_limit(ch: &ChannelSpec, mus: &[f64], out: &mut dyn Write) -> std::result::Result<(), Failure> {
    if !ch.is_gaussian() {
        return Err(Error::NotGaussianFamily(ch.family()).into());
    }
    if mus.is_empty() {
        return Err(Error::range("no mu values").into());
    }
    let closed = entanglement_flux(ch);
    writeln!(out, "mu,s_mu,closed_form,abs_diff,scaled_diff")?;
    let mut scaled = Vec::with_capacity(mus.len());
    for &mu in mus {
        let s = crate::bounds::flux_numeric_limit(ch, mu)?;
        let diff = if s == closed { 0.0 } else { (s - closed).abs() };
        scaled.push(diff * mu);
        writeln!(out, "{},{},{},{},{}", g12(mu), g12(s), g12(closed), g12(diff), g12(diff * mu))?;
    }
    if let Some(i) = limit_failure(&scaled) {
        return Err(Failure::Verify(format!("|diff| mu = {} at mu = {}", g12(scaled[i]), g12(mus[i]))));
    }
    Ok(())
}

fn telesim_check(ch: &ChannelSpec, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let q = QuditChannel::from_spec(ch)?;
    let choi = choi_of(&q);
    match stretch_check(&q) {
        Ok(report) => {
            writeln!(out, "covariant: true")?;
            writeln!(out, "choi_distance: {}", g12(report.distance))?;
        }
        Err(Error::NotCovariant) => writeln!(out, "covariant: false")?,
        Err(e) => return Err(e.into()),
    }
    writeln!(out, "choi_entropy: {}", g12(choi.entropy()))?;
    Ok(())
}
