//! Lower and upper bounds on the two-way capacities (Q2 = D2, K) of single-mode
//! bosonic and finite-dimensional channels.

use std::f64::consts::{E, LN_2, PI};

use serde::Serialize;

use crate::channels::{
    closest_separable_cm, gaussian_choi_cm, is_entanglement_breaking, ChannelSpec, QuasiChoiCM,
};
use crate::entropy::{binary as h2, shannon, symplectic as s_nu, thermal as h};
use crate::error::{Error, Result};
use crate::gaussian_calculus::{relative_entropy, GaussianState};
use crate::optimize::{golden_max, golden_min, ARG_TOL};

/// Tolerance below which closed-form lower and upper bounds count as coinciding.
pub const EXACT_TOL: f64 = 1e-12;

/// `log2(3 pi e)`, the `eta -> 0` limit of the classical-communication cost.
pub fn cc_cost_limit() -> f64 {
    (3.0 * PI * E).log2()
}

/// A rate floored at zero; `raw` keeps the unclamped value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClampedRate {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

impl ClampedRate {
    pub fn new(raw: f64) -> Self {
        if raw < 0.0 {
            Self { value: 0.0, raw, clamped: true }
        } else {
            Self { value: raw, raw, clamped: false }
        }
    }
}

/// Sandwich `lower <= C <= upper` in bits per channel use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_name: &'static str,
    pub upper_name: &'static str,
}

impl BoundReport {
    pub(crate) fn assemble(lower: (f64, &'static str), upper: (f64, &'static str), exact: bool) -> Self {
        Self { lower: lower.0, upper: upper.0, exact, lower_name: lower.1, upper_name: upper.1 }
    }

    pub fn gap(&self) -> f64 {
        if self.lower == self.upper {
            0.0
        } else {
            self.upper - self.lower
        }
    }
}

pub(crate) fn coincide(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() < EXACT_TOL
}

fn neg_log2_one_minus(eta: f64) -> f64 {
    if eta >= 1.0 {
        f64::INFINITY
    } else {
        -(-eta).ln_1p() / LN_2
    }
}

/// `log2 d - S(rho_E)` for the unital DV families.
fn unital_rci(ch: &ChannelSpec) -> Option<f64> {
    match ch {
        ChannelSpec::PauliQudit { d, probs } => Some((*d as f64).log2() - shannon(probs)),
        ChannelSpec::Depolarizing { d, p } => {
            let (d, f) = (*d as f64, depolarizing_f(*d, *p));
            Some(kappa(d, f) - f * (d + 1.0).log2())
        }
        ChannelSpec::Dephasing { d, probs } => Some((*d as f64).log2() - shannon(probs)),
        _ => None,
    }
}

fn depolarizing_f(d: usize, p: f64) -> f64 {
    let d2 = (d * d) as f64;
    (d2 - 1.0) * p / d2
}

fn kappa(d: f64, f: f64) -> f64 {
    let tail = if f > 0.0 { f * (d - 1.0).log2() } else { 0.0 };
    d.log2() - h2(f) - tail
}

fn unsupported(op: &'static str, ch: &ChannelSpec) -> Error {
    Error::Unsupported { op, family: ch.family() }
}

/// Reverse coherent information of the channel (asymptotic Choi state for bosonic families).
pub fn reverse_coherent_info(ch: &ChannelSpec) -> Result<ClampedRate> {
    let raw = match ch {
        ChannelSpec::ThermalLoss { eta, nbar } => neg_log2_one_minus(*eta) - h(*nbar),
        ChannelSpec::AdditiveNoise { xi } => additive_ci(*xi),
        ChannelSpec::AmplitudeDamping { p } => damping_rci(*p).1,
        other => unital_rci(other).ok_or_else(|| unsupported("reverse coherent information", other))?,
    };
    Ok(ClampedRate::new(raw))
}

/// Coherent information of the channel.
pub fn coherent_info(ch: &ChannelSpec) -> Result<ClampedRate> {
    let raw = match ch {
        ChannelSpec::Amplifier { gain, nbar } => (gain / (gain - 1.0)).log2() - h(*nbar),
        ChannelSpec::AdditiveNoise { xi } => additive_ci(*xi),
        ChannelSpec::Erasure { d, p } => (1.0 - 2.0 * p) * (*d as f64).log2(),
        ChannelSpec::AmplitudeDamping { p } => damping_ci(*p),
        other => unital_rci(other).ok_or_else(|| unsupported("coherent information", other))?,
    };
    Ok(ClampedRate::new(raw))
}

fn additive_ci(xi: f64) -> f64 {
    if xi == 0.0 {
        f64::INFINITY
    } else {
        -xi.log2() - 1.0 / LN_2
    }
}

/// `(u*, max_u {H2(u) - H2(u p)})`.
pub fn damping_rci(p: f64) -> (f64, f64) {
    golden_max(|u| h2(u) - h2(u * p), 0.0, 1.0, ARG_TOL)
}

/// `max_u {H2(u (1-p)) - H2(u p)}`, the unassisted quantum capacity of damping.
pub fn damping_ci(p: f64) -> f64 {
    if p >= 0.5 {
        return 0.0;
    }
    golden_max(|u| h2(u * (1.0 - p)) - h2(u * p), 0.0, 1.0, ARG_TOL).1
}

/// Symplectic eigenvalues `(nu_-, nu_+)` of a quasi-Choi CM, from
/// `nu_+ nu_- = mu beta - gamma^2` and `nu_+^2 + nu_-^2 = mu^2 + beta^2 - 2 gamma^2`.
pub fn quasi_choi_spectrum(ch: &ChannelSpec, q: &QuasiChoiCM) -> Result<(f64, f64)> {
    let (eta, c0) = match ch {
        ChannelSpec::ThermalLoss { eta, nbar } => (*eta, (1.0 - eta).abs() * (nbar + 0.5)),
        ChannelSpec::Amplifier { gain, nbar } => (*gain, (gain - 1.0) * (nbar + 0.5)),
        ChannelSpec::AdditiveNoise { xi } => (1.0, *xi),
        other => return Err(Error::NotGaussianFamily(other.family())),
    };
    let mu = q.mu;
    // cancellation-free forms of mu beta - gamma^2 and Delta
    let prod = mu * c0 + eta / 4.0;
    let delta = (mu * (1.0 - eta)).powi(2) + 2.0 * eta * mu * c0 + c0 * c0 + eta / 2.0;
    let disc = (delta * delta - 4.0 * prod * prod).max(0.0).sqrt();
    let nu_plus = ((delta + disc) / 2.0).sqrt();
    let nu_minus = (prod / nu_plus).max(0.5);
    Ok((nu_minus, nu_plus))
}

/// `I(A<B) = s(mu) - s(nu_-) - s(nu_+)` of the quasi-Choi state.
pub fn finite_mu_rci(ch: &ChannelSpec, mu: f64) -> Result<f64> {
    let q = gaussian_choi_cm(ch, mu)?;
    let (nm, np) = quasi_choi_spectrum(ch, &q)?;
    Ok(s_nu(mu) - s_nu(nm) - s_nu(np))
}

/// `I(A>B) = s(beta) - s(nu_-) - s(nu_+)` of the quasi-Choi state.
pub fn finite_mu_ci(ch: &ChannelSpec, mu: f64) -> Result<f64> {
    let q = gaussian_choi_cm(ch, mu)?;
    let (nm, np) = quasi_choi_spectrum(ch, &q)?;
    Ok(s_nu(q.beta) - s_nu(nm) - s_nu(np))
}

/// Closed-form entanglement flux (REE of the Choi matrix), in bits.
pub fn entanglement_flux(ch: &ChannelSpec) -> f64 {
    if is_entanglement_breaking(ch) {
        return 0.0;
    }
    match ch {
        ChannelSpec::ThermalLoss { eta, nbar } => {
            if *eta >= 1.0 {
                return f64::INFINITY;
            }
            let photons = if *nbar > 0.0 { nbar * eta.log2() } else { 0.0 };
            neg_log2_one_minus(*eta) - photons - h(*nbar)
        }
        ChannelSpec::Amplifier { gain, nbar } => {
            (gain / (gain - 1.0)).log2() + nbar * gain.log2() - h(*nbar)
        }
        ChannelSpec::AdditiveNoise { xi } => {
            if *xi == 0.0 {
                f64::INFINITY
            } else {
                (xi - 1.0) / LN_2 - xi.log2()
            }
        }
        ChannelSpec::ConjugateAmplifier | ChannelSpec::FormA2 => 0.0,
        ChannelSpec::FormB1 => f64::INFINITY,
        ChannelSpec::PauliQudit { d, probs } => pauli_flux(*d, probs),
        ChannelSpec::Depolarizing { d, p } => {
            if *p > *d as f64 / (*d as f64 + 1.0) {
                0.0
            } else {
                kappa(*d as f64, depolarizing_f(*d, *p))
            }
        }
        ChannelSpec::Dephasing { d, probs } => (*d as f64).log2() - shannon(probs),
        ChannelSpec::Erasure { d, p } => (1.0 - p) * (*d as f64).log2(),
        ChannelSpec::AmplitudeDamping { p } => {
            if *p == 0.0 {
                1.0
            } else {
                (-p.log2()).min(1.0)
            }
        }
    }
}

fn pauli_flux(d: usize, probs: &[f64]) -> f64 {
    if d == 2 {
        let pmax = probs.iter().copied().fold(0.0, f64::max);
        return if pmax >= 0.5 { 1.0 - h2(pmax) } else { 0.0 };
    }
    let marginal: Vec<f64> = (0..d).map(|a| probs[a * d..(a + 1) * d].iter().sum()).collect();
    (d as f64).log2() - shannon(probs) + shannon(&marginal)
}

/// `S(rho_E^mu || sigma_s^mu)` between the quasi-Choi state and its closest separable
/// companion; tends to the flux as `mu -> inf`. Entanglement-breaking channels give 0.
pub fn flux_numeric_limit(ch: &ChannelSpec, mu: f64) -> Result<f64> {
    match ch {
        ChannelSpec::ConjugateAmplifier | ChannelSpec::FormA2 => return Ok(0.0),
        ChannelSpec::FormB1 => return Err(unsupported("finite-mu flux", ch)),
        _ => {}
    }
    if is_entanglement_breaking(ch) {
        return Ok(0.0);
    }
    let q = gaussian_choi_cm(ch, mu)?;
    let sep = closest_separable_cm(&q)?;
    if sep.already_separable {
        return Ok(0.0);
    }
    let rho = GaussianState::zero_mean(q.cm);
    let sigma = GaussianState::zero_mean(sep.cm);
    relative_entropy(&rho, &sigma)
}

/// `H2(1/2 - p/4) - H2(1 - p/4)`: the squashing bound for amplitude damping with a
/// balanced squashing channel, evaluated at the maximally mixed input.
pub fn squashed_damping_bound(p: f64) -> f64 {
    h2(0.5 - p / 4.0) - h2(1.0 - p / 4.0)
}

/// Nested optimization of the generic-squashing functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquashedMaxMin {
    pub value: f64,
    /// Maximizing input population.
    pub gamma: f64,
    /// Minimizing squashing damping probability at `gamma`.
    pub eta: f64,
}

fn squashing_functional(p: f64, g: f64, e: f64) -> f64 {
    0.5 * (h2(g - p * g * e) + h2(g * (1.0 - p + p * e)) - h2(p * g * (1.0 - e)) - h2(p * g * e))
}

/// `1/2 max_gamma min_eta {...}` over input populations and squashing probabilities.
pub fn squashed_damping_maxmin(p: f64) -> SquashedMaxMin {
    let inner = |g: f64| golden_min(|e| squashing_functional(p, g, e), 0.0, 1.0, ARG_TOL);
    let (gamma, value) = golden_max(|g| inner(g).1, 0.0, 1.0, ARG_TOL);
    SquashedMaxMin { value, gamma, eta: inner(gamma).0 }
}

/// Smallest grid point where the squashed bound exceeds `min{1, -log2 p}`, or 1 if none.
pub fn squashed_crossover(points: usize) -> f64 {
    let flux = |p: f64| entanglement_flux(&ChannelSpec::AmplitudeDamping { p });
    (1..points)
        .map(|i| i as f64 / points as f64)
        .find(|&p| squashed_damping_maxmin(p).value > flux(p) + 1e-12)
        .unwrap_or(1.0)
}

/// Form of the Takeoka-Guha-Wilde squashed-entanglement bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TgwForm {
    Lossy,
    Thermal { nbar: f64 },
    EnergyConstrained { mbar: f64 },
}

/// TGW comparison bound in bits.
pub fn tgw_bound(eta: f64, form: TgwForm) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::range(format!("eta must lie in [0, 1], got {eta}")));
    }
    Ok(match form {
        TgwForm::Lossy => ((1.0 + eta) / (1.0 - eta)).log2(),
        TgwForm::Thermal { nbar } => {
            let base = (1.0 - eta) * nbar + 1.0;
            ((base + eta) / (base - eta)).log2()
        }
        TgwForm::EnergyConstrained { mbar } => {
            h((1.0 + eta) * mbar / 2.0) - h((1.0 - eta) * mbar / 2.0)
        }
    })
}

/// `h(mbar) - h((1 - eta) mbar)`: reverse coherent information of a lossy channel fed
/// by a TMSV with `mbar` mean photons.
pub fn constrained_rci(eta: f64, mbar: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) || mbar.is_nan() || mbar < 0.0 {
        return Err(Error::range(format!("need eta in [0, 1] and mbar >= 0, got {eta}, {mbar}")));
    }
    Ok(h(mbar) - h((1.0 - eta) * mbar))
}

/// Classical bits per use consumed by the optimal one-way protocol over a lossy channel.
pub fn cc_cost(eta: f64) -> Result<f64> {
    if eta == 0.0 {
        return Err(Error::DivergentAtZero);
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::range(format!("eta must lie in (0, 1], got {eta}")));
    }
    let num = 2.0 * eta * PI.log2() + (2.0 * eta - 3.0) * (3.0 - 2.0 * eta).log2() + 3.0 * 3f64.log2();
    Ok(num / (2.0 * eta))
}

/// Best closed-form lower and upper bounds on the two-way capacity.
pub fn two_way_capacity(ch: &ChannelSpec) -> BoundReport {
    let mut lower = (0.0, "none");
    let mut consider = |value: f64, name: &'static str| {
        if value > lower.0 || (lower.1 == "none" && value >= lower.0) {
            lower = (value, name);
        }
    };
    if let Ok(r) = reverse_coherent_info(ch) {
        consider(r.value, "reverse-coherent-information");
    }
    if let Ok(r) = coherent_info(ch) {
        consider(r.value, "coherent-information");
    }
    if let ChannelSpec::Erasure { d, p } = ch {
        consider((1.0 - p) * (*d as f64).log2(), "erasure-strategy");
    }

    let mut upper = (entanglement_flux(ch), "entanglement-flux");
    if let ChannelSpec::AmplitudeDamping { p } = ch {
        let sq = squashed_damping_maxmin(*p).value;
        if sq < upper.0 {
            upper = (sq, "squashed-entanglement");
        }
    }
    if let Some(d) = ch.dim_in() {
        let dim = (d as f64).log2();
        if dim < upper.0 {
            upper = (dim, "dimension");
        }
    }
    let exact = coincide(lower.0, upper.0);
    BoundReport::assemble(lower, upper, exact)
}
