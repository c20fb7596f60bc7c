//! Ideal asymptotic key rates of benchmark QKD protocols over a lossy channel.

use std::f64::consts::E;

use crate::bounds::ClampedRate;
use crate::entropy::symplectic as s;
use crate::error::{Error, Result};

/// Benchmark protocol. `CvMdiAsym` carries the two relay-link transmissivities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolId {
    NoSwitching,
    Switching,
    CvMdiSym,
    CvMdiAsym { eta_a: f64, eta_b: f64 },
    TwoWayHet,
    TwoWayHom,
    Bb84SinglePhoton,
    Bb84Decoy,
    DvMdi,
}

impl ProtocolId {
    /// Every protocol whose rate depends on the total transmissivity only.
    pub const ONE_PARAMETER: [ProtocolId; 8] = [
        ProtocolId::NoSwitching,
        ProtocolId::Switching,
        ProtocolId::CvMdiSym,
        ProtocolId::TwoWayHet,
        ProtocolId::TwoWayHom,
        ProtocolId::Bb84SinglePhoton,
        ProtocolId::Bb84Decoy,
        ProtocolId::DvMdi,
    ];

    /// CV-MDI with links `eta_a`, `eta_b`; equal links give the symmetric protocol.
    pub fn cv_mdi(eta_a: f64, eta_b: f64) -> Self {
        if eta_a == eta_b {
            ProtocolId::CvMdiSym
        } else {
            ProtocolId::CvMdiAsym { eta_a, eta_b }
        }
    }

    /// CV-MDI with Alice's link fixed at `eta_a` and total transmissivity `eta`.
    pub fn cv_mdi_with_alice_link(eta_a: f64, eta: f64) -> Result<Self> {
        if !(eta_a > 0.0 && eta_a <= 1.0) || eta > eta_a {
            return Err(Error::range(format!("need 0 < eta <= eta_a <= 1, got eta_a={eta_a}, eta={eta}")));
        }
        Ok(Self::cv_mdi(eta_a, eta / eta_a))
    }

    pub fn token(&self) -> &'static str {
        match self {
            ProtocolId::NoSwitching => "no-switching",
            ProtocolId::Switching => "switching",
            ProtocolId::CvMdiSym => "cvmdi-sym",
            ProtocolId::CvMdiAsym { .. } => "cvmdi-asym",
            ProtocolId::TwoWayHet => "twoway-het",
            ProtocolId::TwoWayHom => "twoway-hom",
            ProtocolId::Bb84SinglePhoton => "bb84-1ph",
            ProtocolId::Bb84Decoy => "bb84-decoy",
            ProtocolId::DvMdi => "dvmdi",
        }
    }

    /// Parses a one-parameter protocol token.
    pub fn from_token(token: &str) -> Option<Self> {
        Self::ONE_PARAMETER.iter().copied().find(|p| p.token() == token)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::range(format!("transmissivity must lie in (0, 1], got {eta}")))
    }
}

fn log2_ratio_minus_one(eta: f64) -> f64 {
    // log2(eta / (1 - eta)) without losing digits near 0
    (eta.ln() - (-eta).ln_1p()) / std::f64::consts::LN_2
}

/// Ideal key rate in bits per channel use; negative closed-form values clamp to 0.
pub fn ideal_rate(p: ProtocolId, eta: f64) -> Result<ClampedRate> {
    check_eta(eta)?;
    let raw = match p {
        ProtocolId::NoSwitching => {
            if eta == 1.0 {
                f64::INFINITY
            } else {
                log2_ratio_minus_one(eta) - E.log2() + s((2.0 - eta) / (2.0 * eta))
            }
        }
        ProtocolId::Switching => {
            if eta == 1.0 {
                f64::INFINITY
            } else {
                -0.5 * (-eta).ln_1p() / std::f64::consts::LN_2
            }
        }
        ProtocolId::CvMdiSym => {
            let r = eta.sqrt();
            if r == 1.0 {
                f64::INFINITY
            } else {
                (eta / (E * E * (1.0 - r))).log2() + s(1.0 / r - 0.5)
            }
        }
        ProtocolId::CvMdiAsym { eta_a, eta_b } => {
            check_eta(eta_a)?;
            check_eta(eta_b)?;
            if (eta_a * eta_b - eta).abs() > 1e-12 {
                return Err(Error::range(format!(
                    "eta = {eta} does not match eta_a * eta_b = {}",
                    eta_a * eta_b
                )));
            }
            if eta_a == eta_b {
                return ideal_rate(ProtocolId::CvMdiSym, eta);
            }
            let gap = (eta_a - eta_b).abs();
            s(1.0 / eta_b - 0.5) - s((2.0 - eta_a - eta_b) / (2.0 * gap))
                + (eta_a * eta_b / (E * gap)).log2()
        }
        ProtocolId::TwoWayHet => {
            if eta == 1.0 {
                f64::INFINITY
            } else {
                let arg = (2.0 - eta + eta * eta) / (2.0 * eta * (1.0 + eta));
                0.5 * (s(arg) + log2_ratio_minus_one(eta) + (1.0 + eta).log2() - E.log2())
            }
        }
        ProtocolId::TwoWayHom => {
            if eta == 1.0 {
                f64::INFINITY
            } else {
                0.25 * ((1.0 + eta * eta).log2() - (-eta).ln_1p() / std::f64::consts::LN_2)
            }
        }
        ProtocolId::Bb84SinglePhoton => eta / 2.0,
        ProtocolId::Bb84Decoy => bb84_decoy_rate(eta, 1.0),
        ProtocolId::DvMdi => dv_mdi_rate(eta, 1.0, 1.0, 1.0),
    };
    Ok(ClampedRate::new(raw))
}

/// Decoy-state BB84 at source intensity `mu`: `e^{-mu} eta mu / 2`.
pub fn bb84_decoy_rate(eta: f64, mu: f64) -> f64 {
    (-mu).exp() * eta * mu / 2.0
}

/// DV-MDI at intensities `mu_a`, `mu_b`: `e^{-(mu_a + mu_b)} eta_a eta_b mu_a mu_b / 2`.
pub fn dv_mdi_rate(eta_a: f64, eta_b: f64, mu_a: f64, mu_b: f64) -> f64 {
    0.5 * (-(mu_a + mu_b)).exp() * eta_a * eta_b * mu_a * mu_b
}

/// High-loss slope `lim rate / eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    /// Richardson extrapolation of the two samples below.
    pub slope: f64,
    pub at_1e5: f64,
    pub at_1e6: f64,
}

/// `rate(eta) / eta` at `1e-5` and `1e-6`, extrapolated linearly to `eta = 0`.
pub fn asymptotic_slope(p: ProtocolId) -> Result<SlopeEstimate> {
    let ratio = |eta: f64| -> Result<f64> {
        let p = match p {
            ProtocolId::CvMdiAsym { eta_a, .. } => ProtocolId::cv_mdi_with_alice_link(eta_a, eta)?,
            other => other,
        };
        Ok(ideal_rate(p, eta)?.raw / eta)
    };
    let (coarse, fine) = (ratio(1e-5)?, ratio(1e-6)?);
    Ok(SlopeEstimate { slope: fine + (fine - coarse) / 9.0, at_1e5: coarse, at_1e6: fine })
}
