//! Scalar entropy functions. All logarithms are base 2.

use std::f64::consts::LN_2;

/// Binary Shannon entropy `H2(x)`, with `H2(0) = H2(1) = 0`.
pub fn binary(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.log2() + (1.0 - x) * (1.0 - x).log2())
}

/// Shannon entropy of a probability vector; zero entries contribute nothing.
pub fn shannon(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Bosonic entropy `h(n) = (n+1) log2(n+1) - n log2 n` of a thermal state with mean
/// photon number `n`, written to stay accurate when `n` is large.
pub fn thermal(nbar: f64) -> f64 {
    if nbar <= 0.0 {
        return 0.0;
    }
    if nbar.is_infinite() {
        return f64::INFINITY;
    }
    (nbar.ln_1p() + nbar * (1.0 / nbar).ln_1p()) / LN_2
}

/// `s(nu) = h(nu - 1/2)`, the entropy of a mode with symplectic eigenvalue `nu`.
pub fn symplectic(nu: f64) -> f64 {
    thermal(nu - 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_values() {
        assert_eq!(thermal(0.0), 0.0);
        assert!((thermal(1.0) - 2.0).abs() < 1e-15);
        // direct definition at moderate n
        let n: f64 = 3.7;
        let direct = (n + 1.0) * (n + 1.0).log2() - n * n.log2();
        assert!((thermal(n) - direct).abs() < 1e-13);
    }

    #[test]
    fn binary_symmetry() {
        assert!((binary(0.5) - 1.0).abs() < 1e-15);
        assert!((binary(0.2) - binary(0.8)).abs() < 1e-15);
        assert_eq!(binary(0.0), 0.0);
        assert_eq!(binary(1.0), 0.0);
    }

    #[test]
    fn shannon_uniform() {
        assert!((shannon(&[0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(shannon(&[1.0, 0.0]), 0.0);
    }
}
