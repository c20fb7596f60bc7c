//! Truncated Fock-space reference for single-mode relative entropies.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Working dimension for operator exponentials; results are read off the first `KEEP` levels.
const WORK: usize = 280;
pub const KEEP: usize = 200;

fn annihilation(n: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

fn dagger(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.adjoint()
}

/// `D(alpha) S(r)` on the working space.
pub fn displaced_squeezer(r: f64, alpha: Complex64) -> DMatrix<Complex64> {
    let a = annihilation(WORK);
    let ad = dagger(&a);
    let half_r = Complex64::new(r / 2.0, 0.0);
    let squeeze = ((&a * &a - &ad * &ad) * half_r).exp();
    let displace = (&ad * alpha - &a * alpha.conj()).exp();
    displace * squeeze
}

/// `U rho_th(nbar) U^dag` in the Fock basis, truncated to `KEEP` levels.
pub fn transformed_thermal(u: &DMatrix<Complex64>, nbar: f64) -> DMatrix<Complex64> {
    let mut th = DMatrix::zeros(WORK, WORK);
    for k in 0..WORK {
        th[(k, k)] = Complex64::new(thermal_population(nbar, k), 0.0);
    }
    let rho = u * th * dagger(u);
    rho.view((0, 0), (KEEP, KEEP)).into_owned()
}

/// Fock-basis vacuum truncated to `KEEP` levels.
pub fn vacuum() -> DMatrix<Complex64> {
    let mut rho = DMatrix::zeros(KEEP, KEEP);
    rho[(0, 0)] = Complex64::new(1.0, 0.0);
    rho
}

pub fn thermal_population(nbar: f64, k: usize) -> f64 {
    if nbar == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (nbar / (nbar + 1.0)).powi(k as i32) / (nbar + 1.0)
}

/// Von Neumann entropy in bits from the eigenvalues of a density matrix.
pub fn entropy(rho: &DMatrix<Complex64>) -> f64 {
    rho.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.log2())
        .sum()
}

/// `S(rho || rho_th(nbar2))` in bits, with `rho` given in the Fock basis.
pub fn relative_entropy_to_thermal(rho: &DMatrix<Complex64>, nbar2: f64) -> f64 {
    let mut cross = 0.0;
    for k in 0..rho.nrows() {
        let pop = rho[(k, k)].re;
        if pop.abs() < 1e-300 {
            continue;
        }
        let p = thermal_population(nbar2, k);
        cross -= pop * p.log2();
    }
    cross - entropy(rho)
}
