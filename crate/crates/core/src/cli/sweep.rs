//! Parameter sweeps producing one row per grid point.

use rayon::prelude::*;

use super::spec::RawSpec;
use crate::bounds::{
    cc_cost, coherent_info, entanglement_flux, reverse_coherent_info, squashed_damping_bound,
    squashed_damping_maxmin, tgw_bound, two_way_capacity, TgwForm,
};
use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::qkd_rates::{ideal_rate, ProtocolId};

/// `eta = 10^(-0.02 d)`: 0.2 dB per km.
pub fn km_to_eta(km: f64) -> f64 {
    10f64.powf(-km / 50.0)
}

/// A column of a sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Series {
    Lower,
    Upper,
    Gap,
    /// The two-way capacity where bounds coincide, NaN elsewhere.
    Capacity,
    Flux,
    Rci,
    RciClamped,
    CoherentInfo,
    CoherentInfoClamped,
    Tgw,
    Squashed,
    SquashedMaxMin,
    CcCost,
    Protocol(ProtocolId),
    /// CV-MDI at fixed Alice-relay transmissivity.
    CvMdiAlice(f64),
}

impl Series {
    pub fn parse(token: &str, position: usize) -> Result<Self> {
        let t = token.trim();
        Ok(match t {
            "lower" => Series::Lower,
            "upper" => Series::Upper,
            "gap" => Series::Gap,
            "capacity" => Series::Capacity,
            "flux" => Series::Flux,
            "rci" => Series::Rci,
            "rci-clamped" => Series::RciClamped,
            "coherent-info" => Series::CoherentInfo,
            "coherent-info-clamped" => Series::CoherentInfoClamped,
            "tgw" => Series::Tgw,
            "squashed" => Series::Squashed,
            "squashed-maxmin" => Series::SquashedMaxMin,
            "cc-cost" => Series::CcCost,
            _ => {
                if let Some(p) = ProtocolId::from_token(t) {
                    Series::Protocol(p)
                } else if let Some(v) = t.strip_prefix("cvmdi-asym:eta_a=") {
                    let eta_a = v
                        .parse::<f64>()
                        .map_err(|_| Error::parse(position + 17, format!("expected a number, got '{v}'")))?;
                    Series::CvMdiAlice(eta_a)
                } else if t == "cvmdi-asym" {
                    return Err(Error::parse(position, "cvmdi-asym needs the relay split, e.g. cvmdi-asym:eta_a=0.9"));
                } else {
                    return Err(Error::parse(position, format!("unknown series '{t}'")));
                }
            }
        })
    }

    /// Comma-separated list.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        let mut pos = 0;
        let mut out = Vec::new();
        for token in text.split(',') {
            out.push(Self::parse(token, pos)?);
            pos += token.len() + 1;
        }
        Ok(out)
    }

    pub fn name(&self) -> String {
        match self {
            Series::Lower => "lower".into(),
            Series::Upper => "upper".into(),
            Series::Gap => "gap".into(),
            Series::Capacity => "capacity".into(),
            Series::Flux => "flux".into(),
            Series::Rci => "rci".into(),
            Series::RciClamped => "rci-clamped".into(),
            Series::CoherentInfo => "coherent-info".into(),
            Series::CoherentInfoClamped => "coherent-info-clamped".into(),
            Series::Tgw => "tgw".into(),
            Series::Squashed => "squashed".into(),
            Series::SquashedMaxMin => "squashed-maxmin".into(),
            Series::CcCost => "cc-cost".into(),
            Series::Protocol(p) => p.token().into(),
            Series::CvMdiAlice(a) => format!("cvmdi-asym:eta_a={a}"),
        }
    }

    pub fn eval(&self, ch: &ChannelSpec) -> Result<f64> {
        let lossy_eta = || match ch {
            ChannelSpec::ThermalLoss { eta, nbar } if *nbar == 0.0 => Ok(*eta),
            other => Err(Error::Unsupported { op: "protocol rates", family: other.family() }),
        };
        Ok(match self {
            Series::Lower => two_way_capacity(ch).lower,
            Series::Upper => two_way_capacity(ch).upper,
            Series::Gap => two_way_capacity(ch).gap(),
            Series::Capacity => {
                let r = two_way_capacity(ch);
                if r.exact {
                    r.upper
                } else {
                    f64::NAN
                }
            }
            Series::Flux => entanglement_flux(ch),
            Series::Rci => reverse_coherent_info(ch)?.raw,
            Series::RciClamped => reverse_coherent_info(ch)?.value,
            Series::CoherentInfo => coherent_info(ch)?.raw,
            Series::CoherentInfoClamped => coherent_info(ch)?.value,
            Series::Tgw => match ch {
                ChannelSpec::ThermalLoss { eta, nbar } if *nbar == 0.0 => tgw_bound(*eta, TgwForm::Lossy)?,
                ChannelSpec::ThermalLoss { eta, nbar } => tgw_bound(*eta, TgwForm::Thermal { nbar: *nbar })?,
                other => return Err(Error::Unsupported { op: "tgw bound", family: other.family() }),
            },
            Series::Squashed | Series::SquashedMaxMin => match ch {
                ChannelSpec::AmplitudeDamping { p } if *self == Series::Squashed => squashed_damping_bound(*p),
                ChannelSpec::AmplitudeDamping { p } => squashed_damping_maxmin(*p).value,
                other => return Err(Error::Unsupported { op: "squashed bound", family: other.family() }),
            },
            Series::CcCost => cc_cost(lossy_eta()?)?,
            Series::Protocol(p) => ideal_rate(*p, lossy_eta()?)?.value,
            Series::CvMdiAlice(eta_a) => {
                let eta = lossy_eta()?;
                if eta > *eta_a {
                    f64::NAN
                } else {
                    let p = ProtocolId::cv_mdi_with_alice_link(*eta_a, eta)?;
                    ideal_rate(p, eta)?.value
                }
            }
        })
    }
}

/// Default swept parameter of a family.
pub fn default_axis(family: &str) -> &'static str {
    match family {
        "lossy" | "thermal-loss" => "eta",
        "amplifier" => "g",
        "additive" => "xi",
        _ => "p",
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: RawSpec,
    pub axis: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// Axis values are kilometres of fibre, converted to `eta`.
    pub distance_km: bool,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::range(format!("need at least 2 points, got {}", self.points)));
        }
        if self.series.is_empty() {
            return Err(Error::range("no series requested"));
        }
        let keys = RawSpec::keys_of(self.spec.family()).unwrap_or(&[]);
        if !keys.contains(&self.axis.as_str()) || self.axis == "d" || self.axis == "probs" {
            return Err(Error::range(format!("'{}' is not a sweepable parameter of {}", self.axis, self.spec.family())));
        }
        if self.distance_km {
            if self.axis != "eta" {
                return Err(Error::range("distance mode sweeps eta"));
            }
            if !(self.from >= 0.0 && self.to >= 0.0) {
                return Err(Error::range("distances must be nonnegative"));
            }
        }
        for x in [self.from, self.to] {
            self.channel_at(x)?;
        }
        Ok(())
    }

    fn channel_at(&self, x: f64) -> Result<ChannelSpec> {
        let v = if self.distance_km { km_to_eta(x) } else { x };
        self.spec.build_with(Some((&self.axis, v)))
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| if i == n { self.to } else { self.from + (self.to - self.from) * i as f64 / n as f64 })
            .collect()
    }

    /// Rows in axis order; points are evaluated in parallel.
    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        let rows = self
            .grid()
            .into_par_iter()
            .map(|x| {
                let ch = self.channel_at(x)?;
                let mut row = Vec::with_capacity(self.series.len() + 1);
                row.push(x);
                for s in &self.series {
                    row.push(s.eval(&ch)?);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let axis = if self.distance_km { "km".to_string() } else { self.axis.clone() };
        Ok(Table { axis, columns: self.series.iter().map(Series::name).collect(), rows })
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| super::format::g12(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        use super::format::json_number;
        serde_json::json!({
            "axis": self.axis,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(|&v| json_number(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}
