//! Dense complex linear algebra kernel.
//!
//! Hermitian eigendecomposition, SVD, positive-semidefinite square roots
//! and pseudo-inverse square roots, operator norms, and numerical rank,
//! all on dense `Complex<f64>` matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::Error;
use crate::Result;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Numerical tolerances used throughout the crate.
///
/// `rank` is the relative singular-value threshold for rank decisions,
/// `eq` the relative tolerance for equality of matrices and scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub rank: f64,
    pub eq: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rank: 1e-10,
            eq: 1e-9,
        }
    }
}

impl Tol {
    pub fn with_eq(eq: f64) -> Self {
        Tol {
            eq,
            ..Tol::default()
        }
    }
}

/// Maximum deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Checks Hermitian symmetry relative to the matrix scale.
pub fn is_hermitian(a: &CMat, tol: &Tol) -> bool {
    let scale = a.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    hermitian_deviation(a) <= tol.eq * scale
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary matrix whose
/// columns are the corresponding eigenvectors. Each eigenvector is
/// phase-normalized so that its first nonzero component is real positive,
/// making the output deterministic across runs.
pub fn hermitian_eig(a: &CMat, tol: &Tol) -> Result<(Vec<f64>, CMat)> {
    let scale = a.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let dev = hermitian_deviation(a);
    if dev > tol.eq * scale {
        return Err(Error::NotHermitian {
            max_dev: dev,
            tol: tol.eq * scale,
        });
    }
    // Symmetrize exactly so roundoff in the input cannot leak through.
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let se = h.clone().symmetric_eigen();
    let raw: Vec<f64> = se.eigenvalues.iter().copied().collect();
    let (eigenvalues, vecs) = sort_and_phase(&raw, &se.eigenvectors);
    // symmetric_eigen occasionally fails to converge on clustered spectra;
    // fall back to the (slower but robust) SVD when the residual is poor.
    if eig_residual(&h, &eigenvalues, &vecs) > 1e-12 * scale {
        let (u, sigma, v) = svd(&h);
        let signed: Vec<f64> = (0..sigma.len())
            .map(|i| {
                let align = u.column(i).dotc(&v.column(i)).re;
                if align < 0.0 {
                    -sigma[i]
                } else {
                    sigma[i]
                }
            })
            .collect();
        let (ev, vv) = sort_and_phase(&signed, &u);
        if eig_residual(&h, &ev, &vv) < eig_residual(&h, &eigenvalues, &vecs) {
            return Ok((ev, vv));
        }
    }
    Ok((eigenvalues, vecs))
}

fn sort_and_phase(lambda: &[f64], vectors: &CMat) -> (Vec<f64>, CMat) {
    let n = lambda.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lambda[i].partial_cmp(&lambda[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| lambda[i]).collect();
    let mut vecs = CMat::zeros(vectors.nrows(), n);
    for (k, &i) in order.iter().enumerate() {
        let mut col: CVec = vectors.column(i).into_owned();
        fix_phase(&mut col);
        vecs.set_column(k, &col);
    }
    (sorted, vecs)
}

fn eig_residual(h: &CMat, lambda: &[f64], v: &CMat) -> f64 {
    let d = CMat::from_diagonal(&CVec::from_iterator(
        lambda.len(),
        lambda.iter().map(|&x| C64::new(x, 0.0)),
    ));
    operator_norm(&(v * d * v.adjoint() - h))
}

/// Makes the first component of magnitude above 1e-12 real positive.
fn fix_phase(v: &mut CVec) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = z / z.norm();
        for x in v.iter_mut() {
            *x /= phase;
        }
    }
}

/// Unique positive square root of a PSD matrix.
///
/// Eigenvalues in `[-tol.rank * ||S||, 0)` are clamped to zero; anything
/// more negative is rejected as not PSD.
pub fn psd_sqrt(s: &CMat, tol: &Tol) -> Result<CMat> {
    let (lambda, v) = hermitian_eig(s, tol)?;
    let scale = lambda.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let clamped = clamp_psd(&lambda, scale, tol)?;
    Ok(apply_spectral(&v, &clamped, f64::sqrt))
}

/// Pseudo-inverse square root: `lambda^{-1/2}` on the range, zero on the
/// kernel of `S`.
pub fn psd_inv_sqrt_on_range(s: &CMat, tol: &Tol) -> Result<CMat> {
    let (lambda, v) = hermitian_eig(s, tol)?;
    let scale = lambda.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let clamped = clamp_psd(&lambda, scale, tol)?;
    let thresh = tol.rank * scale;
    Ok(apply_spectral(&v, &clamped, |x| {
        if x > thresh {
            1.0 / x.sqrt()
        } else {
            0.0
        }
    }))
}

/// Pseudo-inverse of a PSD matrix (inverse on the range, zero on the kernel).
pub fn psd_pinv(s: &CMat, tol: &Tol) -> Result<CMat> {
    let (lambda, v) = hermitian_eig(s, tol)?;
    let scale = lambda.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let clamped = clamp_psd(&lambda, scale, tol)?;
    let thresh = tol.rank * scale;
    Ok(apply_spectral(&v, &clamped, |x| {
        if x > thresh {
            1.0 / x
        } else {
            0.0
        }
    }))
}

/// Orthogonal projection onto the range of a PSD matrix.
pub fn psd_range_projection(s: &CMat, tol: &Tol) -> Result<CMat> {
    let (lambda, v) = hermitian_eig(s, tol)?;
    let scale = lambda.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let thresh = tol.rank * scale;
    Ok(apply_spectral(&v, &lambda, |x| {
        if x > thresh {
            1.0
        } else {
            0.0
        }
    }))
}

fn clamp_psd(lambda: &[f64], scale: f64, tol: &Tol) -> Result<Vec<f64>> {
    let floor = -tol.rank * scale.max(1.0);
    let mut out = Vec::with_capacity(lambda.len());
    for &x in lambda {
        if x < floor {
            return Err(Error::NotPsd { eigenvalue: x });
        }
        out.push(x.max(0.0));
    }
    Ok(out)
}

fn apply_spectral(v: &CMat, lambda: &[f64], f: impl Fn(f64) -> f64) -> CMat {
    let d = CMat::from_diagonal(&CVec::from_iterator(
        lambda.len(),
        lambda.iter().map(|&x| C64::new(f(x), 0.0)),
    ));
    v * d * v.adjoint()
}

/// Singular value decomposition `A = U diag(sigma) V^*` with the singular
/// values sorted in descending order.
pub fn svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let decomp = a.clone().svd(true, true);
    let u = decomp.u.expect("svd: U requested");
    let v_t = decomp.v_t.expect("svd: V^* requested");
    let sigma: Vec<f64> = decomp.singular_values.iter().copied().collect();
    let k = sigma.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let mut us = CMat::zeros(u.nrows(), k);
    let mut vs = CMat::zeros(v_t.ncols(), k);
    for (pos, &i) in order.iter().enumerate() {
        us.set_column(pos, &u.column(i).into_owned());
        vs.set_column(pos, &v_t.row(i).adjoint());
    }
    (us, sorted, vs)
}

/// Singular values only, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Number of singular values above `tol.rank * sigma_max`.
pub fn numerical_rank(a: &CMat, tol: &Tol) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.rank * smax).count()
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Singular-value summary of a matrix: descending singular values,
/// numerical rank, and the extreme nonzero singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub sigma_max: f64,
    pub sigma_min_nonzero: f64,
}

impl SpectralSummary {
    pub fn of(a: &CMat, tol: &Tol) -> Self {
        let sv = singular_values(a);
        let sigma_max = sv.first().copied().unwrap_or(0.0);
        let rank = if sigma_max == 0.0 {
            0
        } else {
            sv.iter().filter(|&&s| s > tol.rank * sigma_max).count()
        };
        let sigma_min_nonzero = if rank > 0 { sv[rank - 1] } else { 0.0 };
        SpectralSummary {
            singular_values: sv,
            rank,
            sigma_max,
            sigma_min_nonzero,
        }
    }
}

/// Frobenius-scaled distance used by equality assertions: `||A - B||
/// <= tol * max(1, ||A||)` in operator norm.
pub fn mats_close(a: &CMat, b: &CMat, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = operator_norm(a).max(1.0);
    operator_norm(&(a - b)) <= tol * scale
}

/// Identity matrix of size `n`.
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, re: &[f64]) -> CMat {
        CMat::from_iterator(rows, cols, re.iter().map(|&x| C64::new(x, 0.0)))
    }

    #[test]
    fn eig_diagonal() {
        let a = cm(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let (l, v) = hermitian_eig(&a, &Tol::default()).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-12 && (l[1] - 2.0).abs() < 1e-12);
        assert!(mats_close(&(&v * v.adjoint()), &identity(2), 1e-12));
    }

    #[test]
    fn eig_symmetric_2x2() {
        // [[5,3],[3,5]] has eigenvalues 2 and 8 (characteristic polynomial
        // x^2 - 10x + 16), checked via A v = lambda v below.
        let a = cm(2, 2, &[5.0, 3.0, 3.0, 5.0]);
        let tol = Tol::default();
        let (l, v) = hermitian_eig(&a, &tol).unwrap();
        assert!((l[0] - 2.0).abs() < 1e-12);
        assert!((l[1] - 8.0).abs() < 1e-12);
        for k in 0..2 {
            let col = v.column(k).into_owned();
            let resid = &a * &col - &col * C64::new(l[k], 0.0);
            assert!(resid.norm() < 1e-12 * operator_norm(&a));
        }
    }

    #[test]
    fn eig_identity() {
        let a = identity(4);
        let (l, v) = hermitian_eig(&a, &Tol::default()).unwrap();
        assert!(l.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        assert!(mats_close(&(&v * v.adjoint()), &identity(4), 1e-12));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = cm(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            hermitian_eig(&a, &Tol::default()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sqrt_diagonal() {
        let s = cm(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let r = psd_sqrt(&s, &Tol::default()).unwrap();
        assert!((r[(0, 0)].re - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((r[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_symmetric_2x2() {
        let s = cm(2, 2, &[5.0, 3.0, 3.0, 5.0]);
        let r = psd_sqrt(&s, &Tol::default()).unwrap();
        // Expected [[3/sqrt(2), 1/sqrt(2)], [1/sqrt(2), 3/sqrt(2)]];
        // verified by squaring.
        let h = 1.0 / 2.0f64.sqrt();
        assert!((r[(0, 0)].re - 3.0 * h).abs() < 1e-12);
        assert!((r[(0, 1)].re - h).abs() < 1e-12);
        assert!(mats_close(&(&r * &r), &s, 1e-12));
    }

    #[test]
    fn sqrt_identity() {
        let r = psd_sqrt(&identity(3), &Tol::default()).unwrap();
        assert!(mats_close(&r, &identity(3), 1e-14));
    }

    #[test]
    fn sqrt_rejects_negative() {
        let s = cm(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        assert!(matches!(
            psd_sqrt(&s, &Tol::default()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn inv_sqrt_with_kernel() {
        let s = cm(2, 2, &[4.0, 0.0, 0.0, 0.0]);
        let r = psd_inv_sqrt_on_range(&s, &Tol::default()).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!(r[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn inv_sqrt_matches_sqrt_inverse() {
        let s = cm(2, 2, &[5.0, 3.0, 3.0, 5.0]);
        let tol = Tol::default();
        let r = psd_sqrt(&s, &tol).unwrap();
        let ri = psd_inv_sqrt_on_range(&s, &tol).unwrap();
        assert!(mats_close(&(&r * &ri), &identity(2), 1e-12));
    }

    #[test]
    fn svd_diagonal_and_zero() {
        let a = cm(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        let (u, s, v) = svd(&a);
        assert!((s[0] - 3.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
        let d = CMat::from_diagonal(&CVec::from_iterator(
            2,
            s.iter().map(|&x| C64::new(x, 0.0)),
        ));
        assert!(mats_close(&(&u * d * v.adjoint()), &a, 1e-12));

        let z = CMat::zeros(3, 2);
        assert!(singular_values(&z).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn svd_single_column() {
        // [1;1] has Gram 2, hence the single singular value sqrt(2).
        let a = cm(2, 1, &[1.0, 1.0]);
        let s = singular_values(&a);
        assert!((s[0] - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rank_and_norm() {
        let tol = Tol::default();
        assert_eq!(numerical_rank(&identity(3), &tol), 3);
        assert!((operator_norm(&identity(3)) - 1.0).abs() < 1e-14);

        let rep = cm(2, 2, &[1.0, 0.0, 1.0, 0.0]); // columns e1, e1
        assert_eq!(numerical_rank(&rep, &tol), 1);

        let tiny = cm(2, 2, &[1.0, 0.0, 0.0, 1e-16]);
        assert_eq!(numerical_rank(&tiny, &Tol { rank: 1e-12, eq: 1e-9 }), 1);
    }
}
