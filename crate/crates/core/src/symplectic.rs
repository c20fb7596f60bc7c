//! Phase-space linear algebra for a handful of bosonic modes.
//!
//! Quadratures are ordered `(q1..qn, p1..pn)` with vacuum variance 1/2, so the
//! symplectic form is `Omega = [[0, I], [-I, 0]]`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Symplectic eigenvalues within this distance of 1/2 mark pure (vacuum-like) modes.
pub const EPS_PURE: f64 = 1e-9;

/// Tolerance on the uncertainty principle `nu >= 1/2`, scaled by `max(1, max |V_ij|)`
/// since the symplectic spectrum is only resolved to that relative precision.
pub const UNCERTAINTY_TOL: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-12;

/// The symplectic form for `n` modes.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        om[(k, n + k)] = 1.0;
        om[(n + k, k)] = -1.0;
    }
    om
}

/// A bona fide covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates shape, symmetry and the uncertainty principle.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let entries = symmetrized(entries)?;
        validate_entries(&entries)?;
        Ok(Self { entries })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::thermal_modes(&vec![0.0; modes])
    }

    /// Single-mode thermal state with mean photon number `nbar`.
    pub fn thermal(nbar: f64) -> Self {
        Self::thermal_modes(&[nbar])
    }

    /// Product of thermal modes; `nbars[k]` photons in mode `k`.
    pub fn thermal_modes(nbars: &[f64]) -> Self {
        let n = nbars.len();
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for (k, nb) in nbars.iter().enumerate() {
            v[(k, k)] = nb + 0.5;
            v[(n + k, n + k)] = nb + 0.5;
        }
        Self { entries: v }
    }

    /// Two-mode squeezed vacuum with marginal variance `mu >= 1/2`.
    pub fn tmsv(mu: f64) -> Result<Self> {
        if mu.is_nan() || mu < 0.5 {
            return Err(Error::range(format!("TMSV requires mu >= 1/2, got {mu}")));
        }
        let c = (mu * mu - 0.25).max(0.0).sqrt();
        Self::two_mode_standard(mu, mu, c, -c)
    }

    /// Two-mode CM `[[a, cq], [cq, b]] (+) [[a, cp], [cp, b]]`.
    pub fn two_mode_standard(a: f64, b: f64, cq: f64, cp: f64) -> Result<Self> {
        Self::new(two_mode_entries(a, b, cq, cp))
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn spectrum(&self) -> SymplecticSpectrum {
        self.williamson().spectrum()
    }

    /// Williamson form; eigenvalues within tolerance below 1/2 are reported as 1/2.
    pub fn williamson(&self) -> Williamson {
        // construction already checked the uncertainty principle
        let mut w = williamson_raw(&self.entries).expect("validated CM");
        w.nu.iter_mut().for_each(|nu| *nu = nu.max(0.5));
        w
    }

    /// `S V S^T` for a symplectic `S` of matching size.
    pub fn transformed(&self, s: &DMatrix<f64>) -> Result<Self> {
        if s.nrows() != self.entries.nrows() || !s.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symplectic {}x{} vs CM {}x{}",
                s.nrows(),
                s.ncols(),
                self.entries.nrows(),
                self.entries.ncols()
            )));
        }
        Self::new(s * &self.entries * s.transpose())
    }
}

pub(crate) fn two_mode_entries(a: f64, b: f64, cq: f64, cp: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            a, cq, 0.0, 0.0, //
            cq, b, 0.0, 0.0, //
            0.0, 0.0, a, cp, //
            0.0, 0.0, cp, b,
        ],
    )
}

/// Symplectic eigenvalues, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn thermal_numbers(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|nu| (nu - 0.5).max(0.0)).collect()
    }

    /// Per-mode flag: `true` where `nu <= 1/2 + EPS_PURE`.
    pub fn pure_flags(&self) -> Vec<bool> {
        self.eigenvalues.iter().map(|&nu| nu <= 0.5 + EPS_PURE).collect()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Computes the symplectic spectrum (moduli of the eigenvalues of `i Omega V`) and
/// rejects matrices that are asymmetric or violate the uncertainty principle.
pub fn validate_cm(entries: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let v = symmetrized(entries.clone())?;
    validate_entries(&v)
}

fn validate_entries(v: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let spec = williamson_raw(v)?.spectrum();
    let min_nu = spec.min();
    if min_nu < 0.5 - UNCERTAINTY_TOL * v.amax().max(1.0) {
        return Err(Error::UncertaintyViolation { min_nu });
    }
    Ok(clamp_spectrum(spec))
}

fn clamp_spectrum(mut spec: SymplecticSpectrum) -> SymplecticSpectrum {
    spec.eigenvalues.iter_mut().for_each(|nu| *nu = nu.max(0.5));
    spec
}

fn symmetrized(v: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (r, c) = v.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::BadShape { rows: r, cols: c });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidCm("non-finite entry".into()));
    }
    let scale = v.amax().max(1.0);
    let asym = (&v - v.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok((&v + v.transpose()) * 0.5)
}

/// Williamson normal form `V = S diag(nu, nu) S^T` with `S Omega S^T = Omega`.
#[derive(Debug, Clone)]
pub struct Williamson {
    /// Symplectic eigenvalues in mode order, descending.
    pub nu: Vec<f64>,
    pub symplectic: DMatrix<f64>,
}

impl Williamson {
    pub fn spectrum(&self) -> SymplecticSpectrum {
        SymplecticSpectrum { eigenvalues: self.nu.clone() }
    }

    /// `S^{-1} = -Omega S^T Omega`, exact for a symplectic `S`.
    pub fn symplectic_inverse(&self) -> DMatrix<f64> {
        let om = omega(self.nu.len());
        -(&om * self.symplectic.transpose() * &om)
    }
}

/// Williamson decomposition via the Hermitian matrix `V^{1/2} (i Omega) V^{1/2}`,
/// whose eigenvalues are `+-nu_k`. The real and imaginary parts of the `+nu_k`
/// eigenvectors give an orthogonal `O` with `O^T V^{1/2} Omega V^{1/2} O = [[0, D], [-D, 0]]`,
/// and `S = V^{1/2} O (D (+) D)^{-1/2}`.
fn williamson_raw(v: &DMatrix<f64>) -> Result<Williamson> {
    let dim = v.nrows();
    let n = dim / 2;
    let eig = SymmetricEigen::new(v.clone());
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::UncertaintyViolation { min_nu: 0.0 });
    }
    let sqrt_d = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_d * eig.eigenvectors.transpose();
    let root_c = root.map(|x| Complex64::new(x, 0.0));
    let i_omega = omega(n).map(|x| Complex64::new(0.0, x));
    let h = &root_c * i_omega * &root_c;
    let h = (&h + h.adjoint()).scale(0.5);
    let heig = SymmetricEigen::new(h);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| heig.eigenvalues[b].total_cmp(&heig.eigenvalues[a]));
    let positive = &order[..n];

    let mut o = DMatrix::zeros(dim, dim);
    let mut nu = Vec::with_capacity(n);
    for (k, &idx) in positive.iter().enumerate() {
        let w = heig.eigenvectors.column(idx);
        nu.push(heig.eigenvalues[idx]);
        for r in 0..dim {
            o[(r, k)] = std::f64::consts::SQRT_2 * w[r].im;
            o[(r, n + k)] = std::f64::consts::SQRT_2 * w[r].re;
        }
    }
    let mut scale = DMatrix::zeros(dim, dim);
    for k in 0..n {
        let f = 1.0 / nu[k].sqrt();
        scale[(k, k)] = f;
        scale[(n + k, n + k)] = f;
    }
    let symplectic = root * o * scale;
    Ok(Williamson { nu, symplectic })
}

/// The Gibbs matrix `G = 2 i Omega coth^{-1}(2 V i Omega)` of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsMatrix {
    pub entries: DMatrix<f64>,
}

/// `2 coth^{-1}(2 nu) = ln((nu + 1/2)/(nu - 1/2))`, the Gibbs weight of a mode.
pub(crate) fn gibbs_weight(nu: f64) -> f64 {
    let x = nu - 0.5;
    (1.0 / x).ln_1p()
}

/// Computes `G` from the Williamson basis. There `2 V i Omega = S (2 D i Omega) S^{-1}`,
/// each mode block `2 nu_k i Omega_1` squares to `(2 nu_k)^2 I`, and `coth^{-1}` acts on
/// its eigenvalues `+-2 nu_k`; mapping back gives `G = S^{-T} diag(g_k, g_k) S^{-1}` with
/// `g_k = 2 coth^{-1}(2 nu_k)`.
pub fn gibbs_matrix(v: &CovarianceMatrix) -> Result<GibbsMatrix> {
    let w = v.williamson();
    let pure: Vec<usize> = w
        .nu
        .iter()
        .enumerate()
        .filter(|(_, &nu)| nu <= 0.5 + EPS_PURE)
        .map(|(k, _)| k)
        .collect();
    if !pure.is_empty() {
        return Err(Error::SingularSpectrum { modes: pure });
    }
    let n = w.nu.len();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for (k, &nu) in w.nu.iter().enumerate() {
        let g = gibbs_weight(nu);
        d[(k, k)] = g;
        d[(n + k, n + k)] = g;
    }
    let s_inv = w.symplectic_inverse();
    let g = s_inv.transpose() * d * &s_inv;
    Ok(GibbsMatrix { entries: (&g + g.transpose()) * 0.5 })
}

/// Random symplectic matrix `O1 Z O2` built from two passive rotations and a
/// layer of single-mode squeezers, drawn deterministically from `seed`.
pub fn random_symplectic(n: usize, seed: u64) -> DMatrix<f64> {
    random_symplectic_scaled(n, seed, 1.0)
}

/// As [`random_symplectic`], with every generator scaled by `strength`.
/// `strength = 0` yields the identity.
pub fn random_symplectic_scaled(n: usize, seed: u64, strength: f64) -> DMatrix<f64> {
    assert!(n >= 1, "need at least one mode");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o1 = random_passive(n, &mut rng, strength);
    let o2 = random_passive(n, &mut rng, strength);
    let mut z = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let r: f64 = strength * rng.gen_range(-1.0..1.0);
        z[(k, k)] = (-r).exp();
        z[(n + k, n + k)] = r.exp();
    }
    o1 * z * o2
}

/// Orthogonal symplectic matrix `[[Re U, -Im U], [Im U, Re U]]` for `U = exp(i t H)`.
fn random_passive(n: usize, rng: &mut ChaCha8Rng, t: f64) -> DMatrix<f64> {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.gen_range(-3.0..3.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    let eig = SymmetricEigen::new(h);
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|l| Complex64::from_polar(1.0, t * l)),
    );
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            o[(i, j)] = u[(i, j)].re;
            o[(i, n + j)] = -u[(i, j)].im;
            o[(n + i, j)] = u[(i, j)].im;
            o[(n + i, n + j)] = u[(i, j)].re;
        }
    }
    o
}

/// Random bona fide CM: random symplectic applied to thermal modes with
/// `nu_k` drawn from `[nu_min, nu_max]`.
pub fn random_cm(n: usize, seed: u64, nu_min: f64, nu_max: f64) -> CovarianceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let nbars: Vec<f64> = (0..n).map(|_| rng.gen_range(nu_min..=nu_max) - 0.5).collect();
    let s = random_symplectic_scaled(n, seed, 0.6);
    CovarianceMatrix::thermal_modes(&nbars)
        .transformed(&s)
        .expect("symplectic image of a bona fide CM")
}
