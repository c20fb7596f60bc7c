//! Entropy and relative entropy of multimode Gaussian states from their first
//! and second moments.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};

use crate::entropy;
use crate::error::{Error, Result};
use crate::symplectic::{gibbs_matrix, gibbs_weight, CovarianceMatrix, EPS_PURE};

/// Tolerance on the `alpha^-` coefficient of a pure mode of the reference state;
/// below it the mode contributes zero, above it the functional diverges.
pub const SINGULAR_COEFF_TOL: f64 = 1e-9;

pub use crate::entropy::{symplectic as s_entropy, thermal as h_entropy};

/// Gaussian state `rho(u, V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cm: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cm: CovarianceMatrix) -> Result<Self> {
        if mean.len() != cm.entries().nrows() {
            return Err(Error::DimensionMismatch(format!(
                "mean has length {}, CM is {}x{}",
                mean.len(),
                cm.entries().nrows(),
                cm.entries().nrows()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCm("non-finite mean".into()));
        }
        Ok(Self { mean, cm })
    }

    pub fn zero_mean(cm: CovarianceMatrix) -> Self {
        let mean = DVector::zeros(cm.entries().nrows());
        Self { mean, cm }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::zero_mean(CovarianceMatrix::vacuum(modes))
    }

    pub fn thermal(nbar: f64) -> Self {
        Self::zero_mean(CovarianceMatrix::thermal(nbar))
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cm(&self) -> &CovarianceMatrix {
        &self.cm
    }

    pub fn modes(&self) -> usize {
        self.cm.modes()
    }

    /// Shifts the mean by `d`.
    pub fn displaced(&self, d: &DVector<f64>) -> Result<Self> {
        Self::new(&self.mean + d, self.cm.clone())
    }
}

/// `S(rho) = sum_k h(nbar_k)` in bits.
pub fn von_neumann_entropy(s: &GaussianState) -> f64 {
    s.cm.spectrum().thermal_numbers().into_iter().map(entropy::thermal).sum()
}

/// The cross-entropy functional `Sigma(V1, V2, delta) = -Tr(rho1 log2 rho2)` in bits.
///
/// When `V2` has no pure modes this is
/// `[ln det(V2 + i Omega/2) + Tr(V1 G2) + delta^T G2 delta] / (2 ln 2)`.
/// Otherwise it is evaluated mode by mode in the Williamson basis of `V2`, where a pure
/// mode contributes zero if `V1` is vacuum along it and `+inf` if not.
pub fn sigma_functional(
    v1: &CovarianceMatrix,
    v2: &CovarianceMatrix,
    delta: &DVector<f64>,
) -> Result<f64> {
    check_dims(v1, v2, delta)?;
    match gibbs_matrix(v2) {
        Ok(g2) => {
            let ln_det: f64 =
                v2.spectrum().eigenvalues.iter().map(|nu| (nu * nu - 0.25).ln()).sum();
            let trace = (v1.entries() * &g2.entries).trace();
            let shift = (delta.transpose() * &g2.entries * delta)[(0, 0)];
            Ok((ln_det + trace + shift) / (2.0 * LN_2))
        }
        Err(Error::SingularSpectrum { .. }) => Ok(sigma_williamson_sum(v1, v2, delta)),
        Err(e) => Err(e),
    }
}

/// `Sigma` as the sum `1/2 sum_k sum_pm alpha_k^pm log2(nu_k pm 1/2)` over the
/// Williamson modes of `V2`, with `alpha_k^pm = 1 pm t_k` and `t_k` the q- plus
/// p-variance of `V1 + delta delta^T` along mode `k`.
pub fn sigma_williamson_sum(
    v1: &CovarianceMatrix,
    v2: &CovarianceMatrix,
    delta: &DVector<f64>,
) -> f64 {
    let w = v2.williamson();
    let n = w.nu.len();
    let s_inv = w.symplectic_inverse();
    let moments = v1.entries() + delta * delta.transpose();
    let local = &s_inv * moments * s_inv.transpose();
    let mut total = 0.0;
    for (k, &nu) in w.nu.iter().enumerate() {
        let t = local[(k, k)] + local[(n + k, n + k)];
        if nu <= 0.5 + EPS_PURE {
            let alpha_minus = 1.0 - t;
            if alpha_minus.abs() > SINGULAR_COEFF_TOL {
                return f64::INFINITY;
            }
            total += 0.5 * (1.0 + t) * (nu + 0.5).log2();
        } else {
            total += 0.5 * ((nu * nu - 0.25).log2() + t * gibbs_weight(nu) / LN_2);
        }
    }
    total
}

/// `S(rho1 || rho2) = -S(rho1) + Sigma(V1, V2, u1 - u2)` in bits; `+inf` when the
/// support of `rho1` exceeds that of `rho2`.
pub fn relative_entropy(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.mean.len() != s2.mean.len() {
        return Err(Error::DimensionMismatch(format!(
            "states have {} and {} modes",
            s1.modes(),
            s2.modes()
        )));
    }
    let delta = &s1.mean - &s2.mean;
    let cross = sigma_functional(&s1.cm, &s2.cm, &delta)?;
    if cross.is_infinite() {
        return Ok(cross);
    }
    Ok(cross - von_neumann_entropy(s1))
}

fn check_dims(v1: &CovarianceMatrix, v2: &CovarianceMatrix, delta: &DVector<f64>) -> Result<()> {
    let d = v2.entries().nrows();
    if v1.entries().nrows() != d || delta.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "V1 {}x{}, V2 {d}x{d}, delta {}",
            v1.entries().nrows(),
            v1.entries().nrows(),
            delta.len()
        )));
    }
    Ok(())
}

/// Symplectic matrix of a single-mode squeezer `diag(e^{-r}, e^{r})`.
pub fn squeezer(r: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![(-r).exp(), r.exp()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_cm, random_symplectic};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn random_state(n: usize, seed: u64) -> GaussianState {
        let cm = random_cm(n, seed, 0.5, 3.0);
        let mean = DVector::from_fn(2 * n, |i, _| ((seed as f64 + 1.0) * (i as f64 + 0.3)).sin());
        GaussianState::new(mean, cm).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(von_neumann_entropy(&GaussianState::vacuum(1)), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(von_neumann_entropy(&GaussianState::thermal(1.0)), 2.0, epsilon = 1e-14);
        let tmsv = GaussianState::zero_mean(CovarianceMatrix::tmsv(5.0).unwrap());
        assert!(von_neumann_entropy(&tmsv).abs() < 1e-8);
    }

    #[test]
    fn sigma_reduces_to_entropy() {
        let v = CovarianceMatrix::thermal(1.0);
        let z = DVector::zeros(2);
        assert_abs_diff_eq!(sigma_functional(&v, &v, &z).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn sigma_vacuum_against_thermal() {
        // -Tr(|0><0| log2 rho_th) = -log2 p_0 = log2(nbar + 1)
        let vac = CovarianceMatrix::vacuum(1);
        let th = CovarianceMatrix::thermal(1.0);
        let z = DVector::zeros(2);
        assert_abs_diff_eq!(sigma_functional(&vac, &th, &z).unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn sigma_diverges_against_pure_reference() {
        let vac = CovarianceMatrix::vacuum(1);
        let th = CovarianceMatrix::thermal(0.3);
        let z = DVector::zeros(2);
        assert_eq!(sigma_functional(&th, &vac, &z).unwrap(), f64::INFINITY);
        // same pure state: finite, zero
        assert_abs_diff_eq!(sigma_functional(&vac, &vac, &z).unwrap(), 0.0, epsilon = 1e-12);
        // displaced vacuum against vacuum: support mismatch
        let d = DVector::from_vec(vec![0.1, 0.0]);
        assert_eq!(sigma_functional(&vac, &vac, &d).unwrap(), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_examples() {
        let vac = GaussianState::vacuum(1);
        let th = GaussianState::thermal(1.0);
        assert_abs_diff_eq!(relative_entropy(&vac, &th).unwrap(), 1.0, epsilon = 1e-13);
        assert_eq!(relative_entropy(&th, &vac).unwrap(), f64::INFINITY);
        assert_abs_diff_eq!(relative_entropy(&th, &th).unwrap(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn gibbs_route_and_basis_sum_agree() {
        for seed in 0..30 {
            let n = 1 + seed as usize % 2;
            let a = random_state(n, seed);
            let b = random_state(n, seed + 1000);
            let d = a.mean() - b.mean();
            let via_g = sigma_functional(a.cm(), b.cm(), &d).unwrap();
            let via_sum = sigma_williamson_sum(a.cm(), b.cm(), &d);
            assert!((via_g - via_sum).abs() < 1e-10, "seed {seed}: {via_g} vs {via_sum}");
        }
    }

    #[test]
    fn tmsv_reference_with_matching_state() {
        let t = GaussianState::zero_mean(CovarianceMatrix::tmsv(3.0).unwrap());
        assert!(relative_entropy(&t, &t).unwrap().abs() < 1e-9);
        let other = GaussianState::zero_mean(CovarianceMatrix::tmsv(2.0).unwrap());
        assert_eq!(relative_entropy(&other, &t).unwrap(), f64::INFINITY);
    }

    #[test]
    fn mismatched_dimensions() {
        let a = GaussianState::vacuum(1);
        let b = GaussianState::vacuum(2);
        assert!(matches!(relative_entropy(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn nonnegative(n in 1usize..=2, seed1 in 0u64..5000, seed2 in 0u64..5000) {
            let a = random_state(n, seed1);
            let b = random_state(n, seed2 + 7919);
            let r = relative_entropy(&a, &b).unwrap();
            prop_assert!(r >= -1e-10, "{r}");
        }

        #[test]
        fn entropy_identity(n in 1usize..=3, seed in 0u64..5000) {
            let cm = random_cm(n, seed, 0.55, 3.0);
            let z = DVector::zeros(2 * n);
            let s = von_neumann_entropy(&GaussianState::zero_mean(cm.clone()));
            let sigma = sigma_functional(&cm, &cm, &z).unwrap();
            prop_assert!((s - sigma).abs() < 1e-10, "{s} vs {sigma}");
        }

        #[test]
        fn displacement_covariance(n in 1usize..=2, seed in 0u64..5000, shift in -2.0f64..2.0) {
            let a = random_state(n, seed);
            let b = random_state(n, seed + 31);
            let d = DVector::from_fn(2 * n, |i, _| shift * (i as f64 + 1.0) / 3.0);
            let r0 = relative_entropy(&a, &b).unwrap();
            let r1 = relative_entropy(&a.displaced(&d).unwrap(), &b.displaced(&d).unwrap()).unwrap();
            prop_assert!((r0 - r1).abs() < 1e-10);
        }

        #[test]
        fn symplectic_invariance(seed in 0u64..5000) {
            let a = random_state(2, seed);
            let b = random_state(2, seed + 77);
            let s = random_symplectic(2, seed + 5);
            let a2 = GaussianState::new(&s * a.mean(), a.cm().transformed(&s).unwrap()).unwrap();
            let b2 = GaussianState::new(&s * b.mean(), b.cm().transformed(&s).unwrap()).unwrap();
            let r0 = relative_entropy(&a, &b).unwrap();
            let r1 = relative_entropy(&a2, &b2).unwrap();
            prop_assert!((r0 - r1).abs() < 1e-8, "{r0} vs {r1}");
        }
    }
}
