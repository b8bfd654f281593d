//! Hermitian linear algebra over ℂ via the real embedding.
//!
//! A complex matrix `M = A + iB` embeds as the real matrix
//! `[[A, −B], [B, A]]`. The embedding is a *-algebra homomorphism, so a
//! hermitian `M` embeds as a symmetric real matrix whose spectrum is that
//! of `M` with every eigenvalue doubled, and real spectral functions
//! commute with the embedding: `f(embed(M)) = embed(f(M))`. This lets the
//! crate use a real symmetric eigensolver for every spectral task
//! (eigenvalue bounds, spectral clipping, positive-semidefinite square
//! roots) without ever extracting complex eigenvectors.

use crate::{CMatrix, C64};
use nalgebra::DMatrix;

/// Real embedding `A + iB ↦ [[A, −B], [B, A]]`.
pub fn embed(m: &CMatrix) -> DMatrix<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "embedding requires a square matrix");
    let mut e = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            e[(i, j)] = z.re;
            e[(i, j + n)] = -z.im;
            e[(i + n, j)] = z.im;
            e[(i + n, j + n)] = z.re;
        }
    }
    e
}

/// Inverse of [`embed`] (averages the two copies to shed round-off).
pub fn unembed(e: &DMatrix<f64>) -> CMatrix {
    let n = e.nrows() / 2;
    assert_eq!(e.nrows(), 2 * n);
    assert_eq!(e.ncols(), 2 * n);
    CMatrix::from_fn(n, n, |i, j| {
        C64::new(
            0.5 * (e[(i, j)] + e[(i + n, j + n)]),
            0.5 * (e[(i + n, j)] - e[(i, j + n)]),
        )
    })
}

/// `(M + M†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues of a hermitian matrix, ascending. The embedded spectrum is
/// doubled; adjacent pairs are collapsed back to single eigenvalues.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let se = nalgebra::SymmetricEigen::new(embed(m));
    let mut evs: Vec<f64> = se.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    // Average each adjacent pair: both members approximate the same
    // eigenvalue of M.
    (0..n).map(|i| 0.5 * (evs[2 * i] + evs[2 * i + 1])).collect()
}

/// Applies a real function to the spectrum of a hermitian matrix.
pub fn spectral_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let se = nalgebra::SymmetricEigen::new(embed(m));
    let d = DMatrix::from_diagonal(&se.eigenvalues.map(f));
    unembed(&(&se.eigenvectors * d * se.eigenvectors.transpose()))
}

/// Clips the spectrum of a hermitian matrix to `[lo, hi]`.
pub fn spectral_clip(m: &CMatrix, lo: f64, hi: f64) -> CMatrix {
    spectral_map(m, |x| x.clamp(lo, hi))
}

/// Eigenvalues of the compression `R M R†` where `R†R = G` and `G` is
/// hermitian positive semidefinite (negative round-off eigenvalues of `G`
/// are clamped to zero). The nonzero spectrum equals that of `M G`, so
/// this computes the spectrum of a large operator `A† M A` from its small
/// Gram matrix `G = A A†` without forming the large operator.
pub fn congruence_spectrum(m: &CMatrix, g: &CMatrix) -> Vec<f64> {
    let n = g.nrows();
    assert_eq!(m.nrows(), n, "M and G must share dimensions");
    if n == 0 {
        return Vec::new();
    }
    let se = nalgebra::SymmetricEigen::new(embed(g));
    let sqrt_d = DMatrix::from_diagonal(&se.eigenvalues.map(|x| x.max(0.0).sqrt()));
    let r = sqrt_d * se.eigenvectors.transpose();
    let h = &r * embed(m) * r.transpose();
    let h = 0.5 * (&h + h.transpose());
    let se_h = nalgebra::SymmetricEigen::new(h);
    let mut evs: Vec<f64> = se_h.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    (0..n).map(|i| 0.5 * (evs[2 * i] + evs[2 * i + 1])).collect()
}

/// Largest singular value of a small hermitian matrix (operator norm).
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Max-norm of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_hermitian() -> CMatrix {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(3.0, 0.0),
            ],
        );
        m
    }

    #[test]
    fn embed_roundtrip() {
        let m = sample_hermitian();
        assert_relative_eq!(max_abs(&(unembed(&embed(&m)) - &m)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn embed_is_multiplicative() {
        let m = sample_hermitian();
        let p = embed(&m) * embed(&m);
        assert!(max_abs(&(unembed(&p) - &m * &m)) < 1e-13);
    }

    #[test]
    fn eigenvalues_of_pauli_like_matrix() {
        // [[2, -i], [i, 3]] has eigenvalues (5 ± √5)/2.
        let evs = hermitian_eigenvalues(&sample_hermitian());
        let s5 = 5f64.sqrt();
        assert_relative_eq!(evs[0], (5.0 - s5) / 2.0, max_relative = 1e-12);
        assert_relative_eq!(evs[1], (5.0 + s5) / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn clip_is_identity_inside_range() {
        let m = sample_hermitian();
        let c = spectral_clip(&m, 0.0, 10.0);
        assert!(max_abs(&(c - &m)) < 1e-12);
    }

    #[test]
    fn clip_projects_onto_range() {
        let m = sample_hermitian();
        let c = spectral_clip(&m, 0.0, 1.0);
        let evs = hermitian_eigenvalues(&c);
        assert!(evs.iter().all(|&x| x >= -1e-12 && x <= 1.0 + 1e-12));
    }

    #[test]
    fn congruence_spectrum_matches_direct_product() {
        // With G = I the compression spectrum is just the spectrum of M.
        let m = sample_hermitian();
        let g = CMatrix::identity(2, 2);
        let a = congruence_spectrum(&m, &g);
        let b = hermitian_eigenvalues(&m);
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, max_relative = 1e-11);
        }
    }

    #[test]
    fn congruence_spectrum_scales_with_gram() {
        // G = 4I scales every eigenvalue by 4.
        let m = sample_hermitian();
        let g = CMatrix::identity(2, 2) * C64::new(4.0, 0.0);
        let a = congruence_spectrum(&m, &g);
        let b = hermitian_eigenvalues(&m);
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(*x, 4.0 * y, max_relative = 1e-11);
        }
    }
}
