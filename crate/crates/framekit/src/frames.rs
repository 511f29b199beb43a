//! Finite sequences of vectors as frames, frame sequences, and Riesz
//! sequences: synthesis/analysis/frame/Gram operators, optimal bounds,
//! classification, canonical duals, canonical tight frames, and the
//! norm-preserving operator extension used by the type-III machinery.

use crate::error::Error;
use crate::linalg::{
    self, hermitian_eig, identity, numerical_rank, operator_norm, psd_inv_sqrt_on_range, psd_pinv,
    singular_values, CMat, CVec, SpectralSummary, Tol, C64,
};
use crate::Result;

/// An indexed finite family of complex vectors in a common ambient space,
/// stored as the `D x M` synthesis matrix (column `i` is `f_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence {
    mat: CMat,
}

/// Frame-theoretic classification of a finite vector family.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub is_frame_for_h: bool,
    pub is_frame_sequence: bool,
    pub is_riesz_sequence: bool,
    pub is_riesz_basis: bool,
    pub is_onb: bool,
    pub is_tight: bool,
    pub excess: usize,
    pub deficit: usize,
    pub bounds: (f64, f64),
}

impl VectorSequence {
    /// Wraps a `D x M` synthesis matrix.
    pub fn from_matrix(mat: CMat) -> Self {
        VectorSequence { mat }
    }

    pub fn from_columns(columns: &[CVec]) -> Self {
        let d = columns.first().map(|c| c.len()).unwrap_or(0);
        let mat = CMat::from_columns(
            &columns
                .iter()
                .map(|c| {
                    assert_eq!(c.len(), d, "all vectors must share the ambient dimension");
                    c.clone()
                })
                .collect::<Vec<_>>(),
        );
        VectorSequence { mat }
    }

    /// Standard orthonormal basis of `C^d`.
    pub fn standard_basis(d: usize) -> Self {
        VectorSequence {
            mat: identity(d),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn len(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.mat.ncols() == 0
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.mat.column(i).into_owned()
    }

    /// The `D x M` synthesis matrix (coefficients to vectors).
    pub fn synthesis(&self) -> &CMat {
        &self.mat
    }

    /// The `M x D` analysis matrix, adjoint of synthesis.
    pub fn analysis(&self) -> CMat {
        self.mat.adjoint()
    }

    /// Frame operator `S = T T^*`, a `D x D` Hermitian PSD matrix.
    pub fn frame_operator(&self) -> CMat {
        &self.mat * self.mat.adjoint()
    }

    /// Gram matrix `T^* T`, `M x M`.
    pub fn gram(&self) -> CMat {
        self.mat.adjoint() * &self.mat
    }

    pub fn spectral_summary(&self, tol: &Tol) -> SpectralSummary {
        SpectralSummary::of(&self.mat, tol)
    }

    /// Optimal frame-sequence bounds over the span: the squared extreme
    /// nonzero singular values of the synthesis matrix.
    pub fn optimal_bounds(&self, tol: &Tol) -> Result<(f64, f64)> {
        let s = self.spectral_summary(tol);
        if s.rank == 0 {
            return Err(Error::ZeroSequence);
        }
        Ok((s.sigma_min_nonzero.powi(2), s.sigma_max.powi(2)))
    }

    pub fn classify(&self, tol: &Tol) -> Classification {
        let summary = self.spectral_summary(tol);
        let d = self.ambient_dim();
        let m = self.len();
        let rank = summary.rank;
        let bounds = if rank > 0 {
            (summary.sigma_min_nonzero.powi(2), summary.sigma_max.powi(2))
        } else {
            (0.0, 0.0)
        };
        let is_frame_for_h = rank == d;
        let is_riesz_sequence = rank == m && rank > 0;
        let is_tight = rank > 0 && (bounds.1 - bounds.0).abs() <= tol.eq * bounds.1;
        Classification {
            is_frame_for_h,
            is_frame_sequence: rank > 0,
            is_riesz_sequence,
            is_riesz_basis: is_frame_for_h && is_riesz_sequence,
            is_onb: self.is_onb(tol) && is_frame_for_h,
            is_tight,
            excess: m - rank,
            deficit: d - rank,
            bounds,
        }
    }

    /// True when the Gram matrix is the identity within `tol.eq`.
    pub fn is_onb(&self, tol: &Tol) -> bool {
        if self.ambient_dim() != self.len() {
            return false;
        }
        linalg::mats_close(&self.gram(), &identity(self.len()), tol.eq)
    }

    /// Canonical dual `{S^\dagger f_i}`, with the frame operator
    /// pseudo-inverted on the span.
    pub fn canonical_dual(&self, tol: &Tol) -> Result<VectorSequence> {
        let s = self.frame_operator();
        let pinv = psd_pinv(&s, tol)?;
        Ok(VectorSequence {
            mat: pinv * &self.mat,
        })
    }

    /// Canonical tight (Parseval) frame `{S^{-1/2,\dagger} f_i}`.
    pub fn canonical_tight(&self, tol: &Tol) -> Result<VectorSequence> {
        let s = self.frame_operator();
        let inv_sqrt = psd_inv_sqrt_on_range(&s, tol)?;
        Ok(VectorSequence {
            mat: inv_sqrt * &self.mat,
        })
    }

    /// The subfamily of the first `k` vectors, in the same ambient space.
    pub fn prefix(&self, k: usize) -> VectorSequence {
        VectorSequence {
            mat: self.mat.columns(0, k).into_owned(),
        }
    }

    /// Applies an operator to every vector in the sequence.
    pub fn map_by(&self, op: &CMat) -> VectorSequence {
        VectorSequence {
            mat: op * &self.mat,
        }
    }

    /// Number of linearly independent vectors.
    pub fn rank(&self, tol: &Tol) -> usize {
        numerical_rank(&self.mat, tol)
    }

    /// `count - rank`: how many vectors are redundant.
    pub fn excess(&self, tol: &Tol) -> usize {
        self.len() - self.rank(tol)
    }

    /// `dim - rank`: codimension of the span.
    pub fn deficit(&self, tol: &Tol) -> usize {
        self.ambient_dim() - self.rank(tol)
    }

    /// Dimension of the kernel of the synthesis operator.
    pub fn kernel_dim(&self, tol: &Tol) -> usize {
        self.excess(tol)
    }
}

/// `{Q e_i}` for an invertible `Q` and an orthonormal basis `E`: a Riesz
/// basis with frame operator `Q Q^*` and optimal bounds
/// `(1/||Q^{-1}||^2, ||Q||^2)`.
pub fn riesz_from_operator(q: &CMat, e: &VectorSequence, tol: &Tol) -> Result<VectorSequence> {
    if q.nrows() != e.ambient_dim() || q.ncols() != e.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "operator is {}x{} but basis lives in dimension {}",
                q.nrows(),
                q.ncols(),
                e.ambient_dim()
            ),
        });
    }
    if !e.is_onb(tol) {
        return Err(Error::NotOnb {
            context: "riesz_from_operator requires an orthonormal basis".into(),
        });
    }
    if numerical_rank(q, tol) != q.nrows() {
        return Err(Error::SingularQ);
    }
    Ok(e.map_by(q))
}

/// Checks `<f_j, g_k> = delta_{jk}` within `tau` for all pairs.
pub fn is_biorthogonal(f: &VectorSequence, g: &VectorSequence, tau: f64) -> Result<bool> {
    if f.ambient_dim() != g.ambient_dim() || f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "sequences are {}x{} and {}x{}",
                f.ambient_dim(),
                f.len(),
                g.ambient_dim(),
                g.len()
            ),
        });
    }
    // cross[k][j] = <f_j, g_k> with the inner product linear in the first entry.
    let cross = g.synthesis().adjoint() * f.synthesis();
    let m = f.len();
    for k in 0..m {
        for j in 0..m {
            let expect = if j == k {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            if (cross[(k, j)] - expect).norm() > tau {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Norm-preserving extension of an operator that acts bijectively on a
/// subspace `V`: the extension agrees with `phi` on `V` and scales the
/// orthogonal complement by `1 / ||(phi|_V)^{-1}||`, so that both the norm
/// of the operator and of its inverse are unchanged. Hermitian inputs with
/// invariant `V` yield Hermitian extensions.
pub fn extend_operator(phi: &CMat, v_basis: &CMat, tol: &Tol) -> Result<CMat> {
    let d = phi.nrows();
    if phi.ncols() != d || v_basis.nrows() != d {
        return Err(Error::DimensionMismatch {
            context: "extend_operator: operator must be square over the ambient space".into(),
        });
    }
    let k = v_basis.ncols();
    if k == 0 || numerical_rank(v_basis, tol) != k {
        return Err(Error::NotBijectiveOnV);
    }
    // Orthonormal basis of V via QR.
    let qr = v_basis.clone().qr();
    let b = qr.q();
    let p = &b * b.adjoint();
    // phi must map V into V.
    let image = phi * &b;
    let off = &image - &p * &image;
    if operator_norm(&off) > tol.eq * operator_norm(phi).max(1.0) {
        return Err(Error::NotBijectiveOnV);
    }
    // Restriction of phi in the orthonormal basis of V.
    let m_v = b.adjoint() * phi * &b;
    let sv = singular_values(&m_v);
    let smin = sv.last().copied().unwrap_or(0.0);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 || smin <= tol.rank * smax {
        return Err(Error::NotBijectiveOnV);
    }
    // ||(phi|_V)^{-1}||^{-1} is the smallest singular value of the restriction.
    let c = C64::new(smin, 0.0);
    let id = identity(d);
    Ok(phi * &p + (id - p) * c)
}

/// Extension of the positive powers `S^{1/2}` / `S^{-1/2}` of a PSD matrix
/// restricted to its range, as produced by [`extend_operator`].
///
/// Returns `(sqrt_ext, inv_sqrt_ext)`. On the range these are the usual
/// spectral powers; on the kernel, `sqrt_ext` multiplies by
/// `sqrt(lambda_min_nonzero)` and `inv_sqrt_ext` by its reciprocal, which
/// keeps the operator norms and the norms of the inverses unchanged.
pub fn extended_sqrt_powers(s: &CMat, tol: &Tol) -> Result<(CMat, CMat)> {
    let (lambda, v) = hermitian_eig(s, tol)?;
    let scale = lambda.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let thresh = tol.rank * scale;
    let nonzero: Vec<f64> = lambda.iter().copied().filter(|&x| x > thresh).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroSequence);
    }
    let lmin = nonzero.iter().copied().fold(f64::INFINITY, f64::min);
    let sqrt_ext = spectral_with_fill(&v, &lambda, thresh, f64::sqrt, lmin.sqrt());
    let inv_sqrt_ext =
        spectral_with_fill(&v, &lambda, thresh, |x| 1.0 / x.sqrt(), 1.0 / lmin.sqrt());
    Ok((sqrt_ext, inv_sqrt_ext))
}

fn spectral_with_fill(
    v: &CMat,
    lambda: &[f64],
    thresh: f64,
    f: impl Fn(f64) -> f64,
    fill: f64,
) -> CMat {
    let d = CMat::from_diagonal(&CVec::from_iterator(
        lambda.len(),
        lambda
            .iter()
            .map(|&x| C64::new(if x > thresh { f(x) } else { fill }, 0.0)),
    ));
    v * d * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mats_close;

    fn e(d: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        v
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// {e1, e1, e2} in C^3.
    fn repeated_family() -> VectorSequence {
        VectorSequence::from_columns(&[e(3, 0), e(3, 0), e(3, 1)])
    }

    #[test]
    fn frame_operator_direct_sum() {
        let f = repeated_family();
        let s = f.frame_operator();
        let expect = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(1.0), re(0.0)]));
        assert!(mats_close(&s, &expect, 1e-14));
        assert!(mats_close(&f.analysis(), &f.synthesis().adjoint(), 1e-15));
    }

    #[test]
    fn frame_operator_of_onb_is_identity() {
        let f = VectorSequence::standard_basis(4);
        assert!(mats_close(&f.frame_operator(), &identity(4), 1e-15));
    }

    #[test]
    fn frame_operator_scaled_basis() {
        let f = VectorSequence::from_columns(&[e(2, 0) * re(2.0f64.sqrt()), e(2, 1)]);
        let expect = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(1.0)]));
        assert!(mats_close(&f.frame_operator(), &expect, 1e-14));
    }

    #[test]
    fn bounds_of_repeated_family() {
        let (a, b) = repeated_family().optimal_bounds(&Tol::default()).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_of_onb() {
        let (a, b) = VectorSequence::standard_basis(5)
            .optimal_bounds(&Tol::default())
            .unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_reject_zero_sequence() {
        let z = VectorSequence::from_matrix(CMat::zeros(3, 2));
        assert!(matches!(
            z.optimal_bounds(&Tol::default()),
            Err(Error::ZeroSequence)
        ));
    }

    #[test]
    fn classify_repeated_family() {
        let c = repeated_family().classify(&Tol::default());
        assert!(c.is_frame_sequence && !c.is_frame_for_h && !c.is_riesz_sequence);
        assert_eq!(c.excess, 1);
        assert_eq!(c.deficit, 1);
    }

    #[test]
    fn classify_onb() {
        let c = VectorSequence::standard_basis(4).classify(&Tol::default());
        assert!(c.is_riesz_basis && c.is_onb && c.is_tight);
        assert_eq!((c.excess, c.deficit), (0, 0));
    }

    #[test]
    fn classify_scaled_basis() {
        let f = VectorSequence::from_columns(&[e(2, 0) * re(2.0), e(2, 1)]);
        let c = f.classify(&Tol::default());
        assert!(c.is_riesz_basis && !c.is_tight);
        assert!((c.bounds.0 - 1.0).abs() < 1e-12 && (c.bounds.1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_dual_diagonal() {
        let f = repeated_family();
        let dual = f.canonical_dual(&Tol::default()).unwrap();
        assert!((dual.vector(0) - e(3, 0) * re(0.5)).norm() < 1e-12);
        assert!((dual.vector(1) - e(3, 0) * re(0.5)).norm() < 1e-12);
        assert!((dual.vector(2) - e(3, 1)).norm() < 1e-12);

        let onb = VectorSequence::standard_basis(3);
        let dual = onb.canonical_dual(&Tol::default()).unwrap();
        assert!(mats_close(dual.synthesis(), onb.synthesis(), 1e-14));
    }

    #[test]
    fn canonical_tight_diagonal() {
        let f = repeated_family();
        let t = f.canonical_tight(&Tol::default()).unwrap();
        let h = 1.0 / 2.0f64.sqrt();
        assert!((t.vector(0) - e(3, 0) * re(h)).norm() < 1e-12);
        assert!((t.vector(2) - e(3, 1)).norm() < 1e-12);

        let g = VectorSequence::from_columns(&[e(2, 0) * re(2.0), e(2, 1)]);
        let t = g.canonical_tight(&Tol::default()).unwrap();
        assert!(mats_close(t.synthesis(), &identity(2), 1e-12));
    }

    #[test]
    fn extend_operator_scalar_on_line() {
        // phi = 2 I on span{e1} in C^2: the complement is scaled by the
        // same factor because ||phi^{-1}||^{-1} = 2.
        let phi = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(0.0)]));
        let v = CMat::from_columns(&[e(2, 0)]);
        let ext = extend_operator(&phi, &v, &Tol::default()).unwrap();
        let expect = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(2.0)]));
        assert!(mats_close(&ext, &expect, 1e-12));
    }

    #[test]
    fn extend_operator_diag_in_c3() {
        let phi = CMat::from_diagonal(&CVec::from_vec(vec![re(3.0), re(0.5), re(0.0)]));
        let v = CMat::from_columns(&[e(3, 0), e(3, 1)]);
        let ext = extend_operator(&phi, &v, &Tol::default()).unwrap();
        let expect = CMat::from_diagonal(&CVec::from_vec(vec![re(3.0), re(0.5), re(0.5)]));
        assert!(mats_close(&ext, &expect, 1e-12));
    }

    #[test]
    fn extend_operator_full_space_is_identity_extension() {
        let phi = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(1.5)]));
        let v = identity(2);
        let ext = extend_operator(&phi, &v, &Tol::default()).unwrap();
        assert!(mats_close(&ext, &phi, 1e-12));
    }

    #[test]
    fn extend_operator_rejects_rank_deficient() {
        let phi = CMat::from_diagonal(&CVec::from_vec(vec![re(0.0), re(1.0)]));
        let v = CMat::from_columns(&[e(2, 0)]);
        assert!(matches!(
            extend_operator(&phi, &v, &Tol::default()),
            Err(Error::NotBijectiveOnV)
        ));
    }

    #[test]
    fn riesz_from_operator_diagonal() {
        let tol = Tol::default();
        let e_basis = VectorSequence::standard_basis(2);
        let q = CMat::from_diagonal(&CVec::from_vec(vec![re(2.0), re(1.0)]));
        let r = riesz_from_operator(&q, &e_basis, &tol).unwrap();
        let (a, b) = r.optimal_bounds(&tol).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 4.0).abs() < 1e-12);
        assert!(mats_close(&r.frame_operator(), &(&q * q.adjoint()), 1e-12));

        let id = riesz_from_operator(&identity(2), &e_basis, &tol).unwrap();
        assert!(mats_close(id.synthesis(), e_basis.synthesis(), 1e-14));
    }

    #[test]
    fn biorthogonality_checks() {
        let onb = VectorSequence::standard_basis(3);
        assert!(is_biorthogonal(&onb, &onb, 1e-12).unwrap());

        let f = VectorSequence::from_columns(&[e(2, 0) * re(2.0), e(2, 1)]);
        let g = VectorSequence::from_columns(&[e(2, 0) * re(0.5), e(2, 1)]);
        assert!(is_biorthogonal(&f, &g, 1e-12).unwrap());
        assert!(!is_biorthogonal(&f, &f, 1e-9).unwrap());
    }
}
