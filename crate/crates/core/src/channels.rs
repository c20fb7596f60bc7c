//! Channel specifications, finite-mu quasi-Choi covariance matrices and exact
//! discrete-variable Choi matrices.

use crate::error::{Error, Result};
use crate::qudit::{c, generalized_pauli, max_entangled_vector, CMatrix, DensityMatrix};
use crate::symplectic::CovarianceMatrix;

const PROB_TOL: f64 = 1e-12;

/// A channel in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// Thermal-loss channel; `nbar = 0` is the pure-loss channel.
    ThermalLoss { eta: f64, nbar: f64 },
    /// Phase-insensitive amplifier with gain `g > 1`.
    Amplifier { gain: f64, nbar: f64 },
    /// Additive Gaussian noise of variance `xi`.
    AdditiveNoise { xi: f64 },
    ConjugateAmplifier,
    FormA2,
    FormB1,
    /// Weyl channel with probabilities `p_ab` at index `a d + b`.
    PauliQudit { d: usize, probs: Vec<f64> },
    Depolarizing { d: usize, p: f64 },
    /// `sum_i P_i Z^i rho Z^-i`.
    Dephasing { d: usize, probs: Vec<f64> },
    Erasure { d: usize, p: f64 },
    /// Qubit amplitude damping with damping probability `p`.
    AmplitudeDamping { p: f64 },
}

impl ChannelSpec {
    pub fn lossy(eta: f64) -> Result<Self> {
        Self::ThermalLoss { eta, nbar: 0.0 }.validated()
    }

    pub fn thermal_loss(eta: f64, nbar: f64) -> Result<Self> {
        Self::ThermalLoss { eta, nbar }.validated()
    }

    pub fn amplifier(gain: f64, nbar: f64) -> Result<Self> {
        Self::Amplifier { gain, nbar }.validated()
    }

    pub fn additive(xi: f64) -> Result<Self> {
        Self::AdditiveNoise { xi }.validated()
    }

    pub fn pauli(d: usize, probs: Vec<f64>) -> Result<Self> {
        Self::PauliQudit { d, probs }.validated()
    }

    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        Self::Depolarizing { d, p }.validated()
    }

    pub fn dephasing(d: usize, probs: Vec<f64>) -> Result<Self> {
        Self::Dephasing { d, probs }.validated()
    }

    /// Qubit dephasing `(1-p) rho + p Z rho Z`.
    pub fn qubit_dephasing(p: f64) -> Result<Self> {
        Self::dephasing(2, vec![1.0 - p, p])
    }

    pub fn erasure(d: usize, p: f64) -> Result<Self> {
        Self::Erasure { d, p }.validated()
    }

    pub fn damping(p: f64) -> Result<Self> {
        Self::AmplitudeDamping { p }.validated()
    }

    /// Checks parameter ranges and normalization.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::ThermalLoss { eta, nbar } => {
                unit_interval("eta", *eta)?;
                nonnegative("nbar", *nbar)
            }
            Self::Amplifier { gain, nbar } => {
                if !(gain.is_finite() && *gain > 1.0) {
                    return Err(Error::range(format!("gain must exceed 1, got {gain}")));
                }
                nonnegative("nbar", *nbar)
            }
            Self::AdditiveNoise { xi } => nonnegative("xi", *xi),
            Self::ConjugateAmplifier | Self::FormA2 | Self::FormB1 => Ok(()),
            Self::PauliQudit { d, probs } => {
                dimension(*d)?;
                distribution(probs, d * d)
            }
            Self::Dephasing { d, probs } => {
                dimension(*d)?;
                distribution(probs, *d)
            }
            Self::Depolarizing { d, p } | Self::Erasure { d, p } => {
                dimension(*d)?;
                unit_interval("p", *p)
            }
            Self::AmplitudeDamping { p } => unit_interval("p", *p),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::ThermalLoss { nbar, .. } if *nbar == 0.0 => "lossy",
            Self::ThermalLoss { .. } => "thermal-loss",
            Self::Amplifier { .. } => "amplifier",
            Self::AdditiveNoise { .. } => "additive",
            Self::ConjugateAmplifier => "conjugate-amplifier",
            Self::FormA2 => "a2",
            Self::FormB1 => "b1",
            Self::PauliQudit { .. } => "pauli",
            Self::Depolarizing { .. } => "depolarizing",
            Self::Dephasing { .. } => "dephasing",
            Self::Erasure { .. } => "erasure",
            Self::AmplitudeDamping { .. } => "damping",
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(
            self,
            Self::ThermalLoss { .. }
                | Self::Amplifier { .. }
                | Self::AdditiveNoise { .. }
                | Self::ConjugateAmplifier
                | Self::FormA2
                | Self::FormB1
        )
    }

    pub fn is_dv(&self) -> bool {
        !self.is_gaussian()
    }

    /// Families whose two-way capacity is fixed by matching bounds: pure loss,
    /// quantum-limited amplifier, dephasing and erasure.
    pub fn is_distillable(&self) -> bool {
        match self {
            Self::ThermalLoss { nbar, .. } | Self::Amplifier { nbar, .. } => *nbar == 0.0,
            Self::Dephasing { .. } | Self::Erasure { .. } => true,
            _ => false,
        }
    }

    /// Input dimension for DV families.
    pub fn dim_in(&self) -> Option<usize> {
        match self {
            Self::PauliQudit { d, .. }
            | Self::Depolarizing { d, .. }
            | Self::Dephasing { d, .. }
            | Self::Erasure { d, .. } => Some(*d),
            Self::AmplitudeDamping { .. } => Some(2),
            _ => None,
        }
    }

    /// Output dimension for DV families; erasure adds the flag state.
    pub fn dim_out(&self) -> Option<usize> {
        match self {
            Self::Erasure { d, .. } => Some(d + 1),
            _ => self.dim_in(),
        }
    }

    /// Canonical triple `(eta, nbar, xi)` of the phase-insensitive Gaussian families.
    fn canonical(&self) -> Result<(f64, f64, f64)> {
        match self {
            Self::ThermalLoss { eta, nbar } => Ok((*eta, *nbar, 0.0)),
            Self::Amplifier { gain, nbar } => Ok((*gain, *nbar, 0.0)),
            Self::AdditiveNoise { xi } => Ok((1.0, 0.0, *xi)),
            other => Err(Error::NotGaussianFamily(other.family())),
        }
    }
}

fn unit_interval(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::range(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::range(format!("{name} must be finite and nonnegative, got {x}")))
    }
}

fn dimension(d: usize) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::range(format!("dimension must be at least 2, got {d}")))
    }
}

fn distribution(probs: &[f64], len: usize) -> Result<()> {
    if probs.len() != len {
        return Err(Error::range(format!("expected {len} probabilities, got {}", probs.len())));
    }
    if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::range("probabilities must be nonnegative"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::range(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// Two-mode Gaussian state obtained by sending one arm of a TMSV with marginal
/// variance `mu` through a phase-insensitive channel.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiChoiCM {
    pub mu: f64,
    pub beta: f64,
    pub gamma: f64,
    pub cm: CovarianceMatrix,
}

/// Quasi-Choi CM `[[mu I, gamma Z], [gamma Z, beta I]]` in `(qA, qB, pA, pB)` order.
pub fn gaussian_choi_cm(ch: &ChannelSpec, mu: f64) -> Result<QuasiChoiCM> {
    let (eta, nbar, xi) = ch.canonical()?;
    if mu.is_nan() || mu <= 0.5 || !mu.is_finite() {
        return Err(Error::range(format!("mu must exceed 1/2, got {mu}")));
    }
    let beta = eta * mu + (1.0 - eta).abs() * (nbar + 0.5) + xi;
    let gamma = (eta * (mu * mu - 0.25)).sqrt();
    let cm = CovarianceMatrix::two_mode_standard(mu, beta, gamma, -gamma)?;
    Ok(QuasiChoiCM { mu, beta, gamma, cm })
}

/// Output of [`closest_separable_cm`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableApprox {
    pub cm: CovarianceMatrix,
    /// True when the input already satisfied the separability condition and was returned unchanged.
    pub already_separable: bool,
}

/// Lowers the correlation entry to `sqrt((mu - 1/2)(beta - 1/2))`, the most-correlated
/// separable state with the same marginals.
pub fn closest_separable_cm(q: &QuasiChoiCM) -> Result<SeparableApprox> {
    let bound = ((q.mu - 0.5) * (q.beta - 0.5)).max(0.0).sqrt();
    if q.gamma <= bound {
        return Ok(SeparableApprox { cm: q.cm.clone(), already_separable: true });
    }
    let cm = CovarianceMatrix::two_mode_standard(q.mu, q.beta, bound, -bound)?;
    Ok(SeparableApprox { cm, already_separable: false })
}

/// Exact Choi matrix `(I (x) E)(Phi)` with the reference system first.
pub fn dv_choi(ch: &ChannelSpec) -> Result<DensityMatrix> {
    let entries = match ch {
        ChannelSpec::PauliQudit { d, probs } => {
            let d = *d;
            let phi = max_entangled_vector(d);
            let id = CMatrix::identity(d, d);
            let mut rho = CMatrix::zeros(d * d, d * d);
            for (k, &pk) in probs.iter().enumerate() {
                if pk == 0.0 {
                    continue;
                }
                let u = generalized_pauli(d, k / d, k % d)?;
                let v = id.kronecker(&u) * &phi;
                rho += &v * v.adjoint() * c(pk);
            }
            rho
        }
        ChannelSpec::Depolarizing { d, p } => {
            let n = d * d;
            let phi = max_entangled_vector(*d);
            &phi * phi.adjoint() * c(1.0 - p) + CMatrix::identity(n, n) * c(p / n as f64)
        }
        ChannelSpec::Dephasing { d, probs } => {
            let d = *d;
            let w = crate::qudit::root_of_unity(d);
            let mut rho = CMatrix::zeros(d * d, d * d);
            for j in 0..d {
                for l in 0..d {
                    let coherence: num_complex::Complex64 = probs
                        .iter()
                        .enumerate()
                        .map(|(m, &pm)| w.powi(((j + d - l) * m % d) as i32) * pm)
                        .sum();
                    rho[(j * d + j, l * d + l)] = coherence / d as f64;
                }
            }
            rho
        }
        ChannelSpec::Erasure { d, p } => {
            let (d, dout) = (*d, d + 1);
            let mut rho = CMatrix::zeros(d * dout, d * dout);
            let amp = (1.0 - p) / d as f64;
            for j in 0..d {
                for l in 0..d {
                    rho[(j * dout + j, l * dout + l)] = c(amp);
                }
                rho[(j * dout + d, j * dout + d)] = c(p / d as f64);
            }
            rho
        }
        ChannelSpec::AmplitudeDamping { p } => {
            let mut rho = CMatrix::zeros(4, 4);
            let coh = (1.0 - p).sqrt() / 2.0;
            rho[(0, 0)] = c(0.5);
            rho[(0, 3)] = c(coh);
            rho[(3, 0)] = c(coh);
            rho[(2, 2)] = c(p / 2.0);
            rho[(3, 3)] = c((1.0 - p) / 2.0);
            rho
        }
        other => return Err(Error::NotDvFamily(other.family())),
    };
    DensityMatrix::new(entries)
}

/// Entanglement-breaking test for the bosonic families, boundary inclusive.
/// DV families return false.
pub fn is_entanglement_breaking(ch: &ChannelSpec) -> bool {
    match ch {
        ChannelSpec::ThermalLoss { eta, nbar } => *eta < 1.0 && *nbar >= eta / (1.0 - eta),
        ChannelSpec::Amplifier { gain, nbar } => *nbar >= 1.0 / (gain - 1.0),
        ChannelSpec::AdditiveNoise { xi } => *xi >= 1.0,
        ChannelSpec::ConjugateAmplifier | ChannelSpec::FormA2 => true,
        _ => false,
    }
}
