//! Finite-dimensional states and the generalized Pauli group.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Density matrix on a (possibly composite) finite-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub entries: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::BadShape { rows: entries.nrows(), cols: entries.ncols() });
        }
        let asym = max_abs(&(&entries - entries.adjoint()));
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({asym:e})")));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("density matrix trace {tr}")));
        }
        let h = hermitian_part(&entries);
        let min = eigenvalues(&h).into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("density matrix eigenvalue {min:e}")));
        }
        Ok(Self { dim: h.nrows(), entries: h })
    }

    pub(crate) fn from_hermitian(entries: CMatrix) -> Self {
        let h = hermitian_part(&entries);
        Self { dim: h.nrows(), entries: h }
    }

    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi / c(norm);
        Ok(Self::from_hermitian(&v * v.adjoint()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { dim, entries: CMatrix::identity(dim, dim) / c(dim as f64) }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.entries)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues().into_iter().filter(|&l| l > 1e-300).map(|l| -l * l.log2()).sum()
    }

    /// Trace distance `||rho - sigma||_1 / 2`.
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(trace_norm_hermitian(&(&self.entries - &other.entries)) / 2.0)
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

pub(crate) fn eigenvalues(h: &CMatrix) -> Vec<f64> {
    h.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
}

pub(crate) fn trace_norm_hermitian(h: &CMatrix) -> f64 {
    eigenvalues(&hermitian_part(h)).into_iter().map(f64::abs).sum()
}

/// `omega = exp(2 pi i / d)`.
pub fn root_of_unity(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

/// `U_ab = X^a Z^b` with `X|j> = |j+1 mod d>` and `Z|j> = omega^j |j>`.
pub fn generalized_pauli(d: usize, a: usize, b: usize) -> Result<CMatrix> {
    if d < 2 || a >= d || b >= d {
        return Err(Error::IndexOutOfRange { d, a, b });
    }
    let w = root_of_unity(d);
    let mut u = CMatrix::zeros(d, d);
    for j in 0..d {
        // X^a Z^b |j> = omega^{bj} |j + a>
        u[((j + a) % d, j)] = w.powu((b * j % d) as u32);
    }
    Ok(u)
}

/// All `d^2` teleportation unitaries, indexed `k = a d + b`.
pub fn pauli_group(d: usize) -> Vec<CMatrix> {
    (0..d * d).map(|k| generalized_pauli(d, k / d, k % d).expect("valid index")).collect()
}

/// `|Phi> = d^{-1/2} sum_j |j j>` on `d x d`.
pub fn max_entangled_vector(d: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(d * d);
    let amp = c(1.0 / (d as f64).sqrt());
    for j in 0..d {
        v[j * d + j] = amp;
    }
    v
}

pub fn max_entangled(d: usize) -> DensityMatrix {
    let v = max_entangled_vector(d);
    DensityMatrix::from_hermitian(&v * v.adjoint())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Partial trace over the first factor of a `d1 x d2` operator.
pub fn trace_first(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d2, d2);
    for i in 0..d1 {
        out += m.view((i * d2, i * d2), (d2, d2));
    }
    out
}

/// Partial trace over the second factor of a `d1 x d2` operator.
pub fn trace_second(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d1, d1, |r, s| (0..d2).map(|k| m[(r * d2 + k, s * d2 + k)]).sum())
}
