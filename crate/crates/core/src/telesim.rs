//! Qudit teleportation over arbitrary resource states and tele-covariance detection.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::qudit::{c, generalized_pauli, max_abs, max_entangled_vector, pauli_group, CMatrix};

pub use crate::qudit::DensityMatrix;

const KRAUS_TOL: f64 = 1e-10;
const COVARIANCE_TOL: f64 = 1e-9;
const NULL_TOL: f64 = 1e-9;
/// Largest input dimension accepted by the covariance search.
pub const MAX_COVARIANT_DIM: usize = 4;

/// Bell POVM `M_k = (U_k ⊗ I)† Φ (U_k ⊗ I)`, indexed `k = a d + b`.
pub fn bell_povm(d: usize) -> Vec<CMatrix> {
    let phi = max_entangled_vector(d);
    let id = CMatrix::identity(d, d);
    pauli_group(d)
        .iter()
        .map(|u| {
            let v = u.adjoint().kronecker(&id) * &phi;
            &v * v.adjoint()
        })
        .collect()
}

/// Channel in Kraus form, `dim_out x dim_in` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditChannel {
    pub dim_in: usize,
    pub dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl QuditChannel {
    /// Checks shapes and `Σ K†K = I`.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidState("empty Kraus list".into()))?;
        let (dim_out, dim_in) = first.shape();
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {}x{} among {dim_out}x{dim_in}",
                k.nrows(),
                k.ncols()
            )));
        }
        let sum = kraus.iter().fold(CMatrix::zeros(dim_in, dim_in), |acc, k| acc + k.adjoint() * k);
        let err = max_abs(&(sum - CMatrix::identity(dim_in, dim_in)));
        if err > KRAUS_TOL {
            return Err(Error::InvalidState(format!("Kraus completeness violated by {err:e}")));
        }
        Ok(Self { dim_in, dim_out, kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, kraus: vec![CMatrix::identity(d, d)] }
    }

    /// Mixture `Σ p_k U_k ρ U_k†` of generalized Paulis.
    pub fn pauli(d: usize, probs: &[f64]) -> Result<Self> {
        ChannelSpec::pauli(d, probs.to_vec())?;
        let kraus = pauli_group(d)
            .into_iter()
            .zip(probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(u, &p)| u * c(p.sqrt()))
            .collect();
        Self::new(kraus)
    }

    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        ChannelSpec::depolarizing(d, p)?;
        let n = (d * d) as f64;
        let mut probs = vec![p / n; d * d];
        probs[0] += 1.0 - p;
        Self::pauli(d, &probs)
    }

    /// `Σ_k p_k Z^k ρ Z^{-k}`.
    pub fn dephasing(d: usize, probs: &[f64]) -> Result<Self> {
        ChannelSpec::dephasing(d, probs.to_vec())?;
        let kraus = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| generalized_pauli(d, 0, k).map(|z| z * c(p.sqrt())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(kraus)
    }

    /// Output space `d + 1` with the erasure flag `|e>` last.
    pub fn erasure(d: usize, p: f64) -> Result<Self> {
        ChannelSpec::erasure(d, p)?;
        let mut kraus = Vec::with_capacity(d + 1);
        let mut keep = CMatrix::zeros(d + 1, d);
        for j in 0..d {
            keep[(j, j)] = c((1.0 - p).sqrt());
        }
        kraus.push(keep);
        for j in 0..d {
            let mut k = CMatrix::zeros(d + 1, d);
            k[(d, j)] = c(p.sqrt());
            kraus.push(k);
        }
        Self::new(kraus)
    }

    /// `A0 = |0><0| + sqrt(1-p)|1><1|`, `A1 = sqrt(p)|0><1|`.
    pub fn damping(p: f64) -> Result<Self> {
        ChannelSpec::damping(p)?;
        let mut a0 = CMatrix::zeros(2, 2);
        a0[(0, 0)] = c(1.0);
        a0[(1, 1)] = c((1.0 - p).sqrt());
        let mut a1 = CMatrix::zeros(2, 2);
        a1[(0, 1)] = c(p.sqrt());
        Self::new(vec![a0, a1])
    }

    /// Kraus form of a discrete-variable family.
    pub fn from_spec(spec: &ChannelSpec) -> Result<Self> {
        match spec {
            ChannelSpec::PauliQudit { d, probs } => Self::pauli(*d, probs),
            ChannelSpec::Depolarizing { d, p } => Self::depolarizing(*d, *p),
            ChannelSpec::Dephasing { d, probs } => Self::dephasing(*d, probs),
            ChannelSpec::Erasure { d, p } => Self::erasure(*d, *p),
            ChannelSpec::AmplitudeDamping { p } => Self::damping(*p),
            other => Err(Error::NotDvFamily(other.family())),
        }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} into channel on {}",
                rho.dim, self.dim_in
            )));
        }
        let out = self
            .kraus
            .iter()
            .fold(CMatrix::zeros(self.dim_out, self.dim_out), |acc, k| acc + k * &rho.entries * k.adjoint());
        Ok(DensityMatrix::from_hermitian(out))
    }
}

/// `(I ⊗ E)(Φ)` on `dim_in x dim_out`.
pub fn choi_of(ch: &QuditChannel) -> DensityMatrix {
    let d = ch.dim_in;
    let phi = max_entangled_vector(d);
    let id = CMatrix::identity(d, d);
    let n = d * ch.dim_out;
    let out = ch.kraus.iter().fold(CMatrix::zeros(n, n), |acc, k| {
        let v = id.kronecker(k) * &phi;
        acc + &v * v.adjoint()
    });
    DensityMatrix::from_hermitian(out)
}


fn split(sigma: &DensityMatrix, d: usize) -> Result<usize> {
    if d < 2 || !sigma.dim.is_multiple_of(d) {
        return Err(Error::DimensionMismatch(format!(
            "resource of dimension {} does not split as {d} x n",
            sigma.dim
        )));
    }
    Ok(sigma.dim / d)
}

fn square_side(sigma: &DensityMatrix) -> Result<usize> {
    let d = (sigma.dim as f64).sqrt().round() as usize;
    if d * d != sigma.dim {
        return Err(Error::DimensionMismatch(format!("resource of dimension {} is not d x d", sigma.dim)));
    }
    Ok(d)
}

/// Teleportation of a qudit over a resource `σ` on `d x d`.
/// `None` applies the inverse teleportation unitaries `U_k†`.
pub fn teleport_channel(sigma: &DensityMatrix, corrections: Option<&[CMatrix]>) -> Result<QuditChannel> {
    teleport_channel_split(sigma, square_side(sigma)?, corrections)
}

/// As [`teleport_channel`] for a resource on `d x d_out`; Bob's corrections act on `d_out`.
pub fn teleport_channel_split(
    sigma: &DensityMatrix,
    d: usize,
    corrections: Option<&[CMatrix]>,
) -> Result<QuditChannel> {
    let dout = split(sigma, d)?;
    let paulis = pauli_group(d);
    let defaults: Vec<CMatrix>;
    let corrections = match corrections {
        Some(cs) => cs,
        None if dout == d => {
            defaults = paulis.iter().map(|u| u.adjoint()).collect();
            &defaults
        }
        None => {
            return Err(Error::DimensionMismatch(format!(
                "default corrections need a {d} x {d} resource, got {d} x {dout}"
            )))
        }
    };
    if corrections.len() != d * d || corrections.iter().any(|c| c.shape() != (dout, dout)) {
        return Err(Error::DimensionMismatch(format!("need {} corrections of size {dout}", d * d)));
    }
    let eig = sigma.entries.clone().symmetric_eigen();
    let scale = 1.0 / (d as f64).sqrt();
    let mut kraus = Vec::new();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 1e-15 {
            continue;
        }
        let s = eig.eigenvectors.column(j);
        // |s_j> reshaped so that rows index the output and columns index A'
        let st = CMatrix::from_fn(dout, d, |b, a| s[a * dout + b]);
        for (u, corr) in paulis.iter().zip(corrections) {
            kraus.push(corr * &st * u * c(lambda.sqrt() * scale));
        }
    }
    QuditChannel::new(kraus)
}

/// Bell-POVM weights `Tr(σ M_k)` of a `d x d` resource.
pub fn bell_weights(sigma: &DensityMatrix) -> Result<Vec<f64>> {
    let d = square_side(sigma)?;
    Ok(bell_povm(d).iter().map(|m| (&sigma.entries * m).trace().re).collect())
}

/// Weights `<Φ|(I ⊗ U_k)† σ (I ⊗ U_k)|Φ>`; for Bell-diagonal `σ` these are the
/// probabilities of the simulated Pauli channel.
pub fn pauli_weights(sigma: &DensityMatrix) -> Result<Vec<f64>> {
    let d = square_side(sigma)?;
    let phi = max_entangled_vector(d);
    let id = CMatrix::identity(d, d);
    Ok(pauli_group(d)
        .iter()
        .map(|u| {
            let v = id.kronecker(u) * &phi;
            (v.adjoint() * &sigma.entries * &v)[(0, 0)].re
        })
        .collect())
}

fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested") * svd.v_t.expect("requested")
}

/// A unitary `V` with `(I ⊗ V) ρ (I ⊗ V)† = target`, if one exists.
fn correcting_unitary(rho: &CMatrix, target: &CMatrix, din: usize, dout: usize, rng: &mut ChaCha8Rng) -> Option<CMatrix> {
    let n = din * dout;
    let id = CMatrix::identity(din, din);
    let unknowns = dout * dout;
    let mut lin = CMatrix::zeros(n * n, unknowns);
    for a in 0..dout {
        for b in 0..dout {
            let mut e = CMatrix::zeros(dout, dout);
            e[(a, b)] = c(1.0);
            let ie = id.kronecker(&e);
            let r = &ie * rho - target * &ie;
            lin.column_mut(a * dout + b).copy_from_slice(r.as_slice());
        }
    }
    let svd = lin.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let cutoff = NULL_TOL * svd.singular_values.max().max(1.0);
    let null: Vec<DVector<Complex64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if null.is_empty() {
        return None;
    }
    for _ in 0..3 {
        let mut x = DVector::<Complex64>::zeros(unknowns);
        for v in &null {
            x += v * Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let w = polar_unitary(&CMatrix::from_fn(dout, dout, |a, b| x[a * dout + b]));
        let iw = id.kronecker(&w);
        if max_abs(&(&iw * rho * iw.adjoint() - target)) <= COVARIANCE_TOL {
            return Some(w);
        }
    }
    None
}

/// Output corrections `V_k` with `E(U_k ρ U_k†) = V_k E(ρ) V_k†` for every `k`,
/// or `None` when some `U_k` admits no correction.
pub fn covariance_corrections(ch: &QuditChannel) -> Result<Option<Vec<CMatrix>>> {
    let (din, dout) = (ch.dim_in, ch.dim_out);
    if din > MAX_COVARIANT_DIM {
        return Err(Error::DimensionTooLarge(din));
    }
    if din < 2 {
        return Err(Error::DimensionMismatch(format!("input dimension {din}")));
    }
    let rho = choi_of(ch).entries;
    let id = CMatrix::identity(dout, dout);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1e);
    let mut out = Vec::with_capacity(din * din);
    for u in pauli_group(din) {
        // (I ⊗ E)((I ⊗ U)Φ(I ⊗ U)†) = (Uᵀ ⊗ I) ρ (U* ⊗ I)
        let left = u.transpose().kronecker(&id);
        let target = &left * &rho * left.adjoint();
        match correcting_unitary(&rho, &target, din, dout, &mut rng) {
            Some(v) => out.push(v),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

pub fn is_tele_covariant(ch: &QuditChannel) -> Result<bool> {
    Ok(covariance_corrections(ch)?.is_some())
}

/// Result of simulating a channel by teleportation over its own Choi matrix.
#[derive(Debug, Clone)]
pub struct StretchReport {
    /// Trace distance between the Choi matrices of the simulation and the channel.
    pub distance: f64,
    pub corrections: Vec<CMatrix>,
}

pub fn stretch_check(ch: &QuditChannel) -> Result<StretchReport> {
    let corrections = covariance_corrections(ch)?.ok_or(Error::NotCovariant)?;
    let bob: Vec<CMatrix> = corrections.iter().map(|v| v.adjoint()).collect();
    let choi = choi_of(ch);
    let sim = teleport_channel_split(&choi, ch.dim_in, Some(&bob))?;
    let distance = choi_of(&sim).distance(&choi)?;
    Ok(StretchReport { distance, corrections })
}
