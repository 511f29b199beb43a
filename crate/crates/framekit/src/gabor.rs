//! Finite Gabor systems on the cyclic group of order `L`.
//!
//! Lattice generation, adjoint systems, a numerical verification of the
//! duality principle, commutation checks for the frame operator and its
//! half powers, and the cardinality diagnostic that explains why a literal
//! finite R-dual relation between a Gabor system and its adjoint exists
//! only at critical density.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::Error;
use crate::frames::VectorSequence;
use crate::linalg::{
    hermitian_eig, operator_norm, psd_inv_sqrt_on_range, psd_sqrt, CMat, CVec, Tol, C64,
};
use crate::Result;

/// Lattice parameters for a Gabor system on `Z_L`: translation step `a`
/// and modulation step `b`, both dividing `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lattice {
    pub l: usize,
    pub a: usize,
    pub b: usize,
}

impl Lattice {
    pub fn new(l: usize, a: usize, b: usize) -> Result<Self> {
        if l == 0 || a == 0 || b == 0 || l % a != 0 || l % b != 0 {
            return Err(Error::BadLattice { l, a, b });
        }
        Ok(Lattice { l, a, b })
    }

    /// Number of elements in the Gabor system, `L^2 / (a b)`.
    pub fn system_size(&self) -> usize {
        (self.l / self.a) * (self.l / self.b)
    }

    /// Number of elements in the adjoint system, `a b`.
    pub fn adjoint_size(&self) -> usize {
        self.a * self.b
    }

    /// Critical density: system and adjoint have equal cardinality `L`.
    pub fn is_critical(&self) -> bool {
        self.a * self.b == self.l
    }

    /// Finite analogue of integer oversampling: the adjoint lattice is a
    /// sublattice of the primal one.
    pub fn adjoint_is_sublattice(&self) -> bool {
        self.l % (self.a * self.b) == 0
    }
}

/// Cyclic translation `(T_c x)(t) = x(t - c mod L)`.
pub fn translate(x: &CVec, c: usize) -> CVec {
    let l = x.len();
    CVec::from_fn(l, |t, _| x[(t + l - c % l) % l])
}

/// Modulation `(E_c x)(t) = exp(2 pi i c t / L) x(t)`.
pub fn modulate(x: &CVec, c: usize) -> CVec {
    let l = x.len();
    CVec::from_fn(l, |t, _| {
        let phase = 2.0 * PI * (c as f64) * (t as f64) / (l as f64);
        C64::new(phase.cos(), phase.sin()) * x[t]
    })
}

/// Matrix of the combined time-frequency shift `E_m T_n` on `C^L`.
pub fn shift_matrix(l: usize, m: usize, n: usize) -> CMat {
    let mut mat = CMat::zeros(l, l);
    for t in 0..l {
        let phase = 2.0 * PI * (m as f64) * (t as f64) / (l as f64);
        mat[(t, (t + l - n % l) % l)] = C64::new(phase.cos(), phase.sin());
    }
    mat
}

fn check_window(g: &CVec, lattice: &Lattice) -> Result<()> {
    if g.len() != lattice.l {
        return Err(Error::DimensionMismatch {
            context: format!(
                "window has length {} but the lattice lives on Z_{}",
                g.len(),
                lattice.l
            ),
        });
    }
    if g.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroSequence);
    }
    Ok(())
}

/// The Gabor system `{E_{mb} T_{na} g}` with modulation-first
/// lexicographic ordering: `m = 0..L/b - 1` outer, `n = 0..L/a - 1` inner.
pub fn gabor_system(g: &CVec, lattice: &Lattice) -> Result<VectorSequence> {
    check_window(g, lattice)?;
    let mut cols = Vec::with_capacity(lattice.system_size());
    for m in 0..lattice.l / lattice.b {
        for n in 0..lattice.l / lattice.a {
            cols.push(modulate(&translate(g, n * lattice.a), m * lattice.b));
        }
    }
    Ok(VectorSequence::from_columns(&cols))
}

/// The scaled adjoint system `{sqrt(L/(ab)) E_{m L/a} T_{n L/b} g}`,
/// `m = 0..a - 1` outer, `n = 0..b - 1` inner.
pub fn adjoint_system(g: &CVec, lattice: &Lattice) -> Result<VectorSequence> {
    check_window(g, lattice)?;
    let scale = C64::new(
        (lattice.l as f64 / (lattice.a * lattice.b) as f64).sqrt(),
        0.0,
    );
    let mut cols = Vec::with_capacity(lattice.adjoint_size());
    for m in 0..lattice.a {
        for n in 0..lattice.b {
            cols.push(modulate(&translate(g, n * (lattice.l / lattice.b)), m * (lattice.l / lattice.a)) * scale);
        }
    }
    Ok(VectorSequence::from_columns(&cols))
}

/// Outcome of the finite duality-principle verification.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub frame_bounds: (f64, f64),
    pub adjoint_bounds: (f64, f64),
    /// Distinct nonzero eigenvalues of the system's frame operator.
    pub system_spectrum: Vec<f64>,
    /// Distinct nonzero eigenvalues of the scaled adjoint's Gram matrix.
    pub adjoint_spectrum: Vec<f64>,
    pub ker_dim: usize,
    pub adjoint_deficit: usize,
    pub verdict: bool,
}

fn nonzero_ascending(eigs: &[f64], tol: &Tol) -> Vec<f64> {
    let scale = eigs.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    eigs.iter()
        .copied()
        .filter(|&x| x > tol.rank * scale.max(1e-300))
        .collect()
}

/// Collapses eigenvalues that agree within `tau` (relative to the largest)
/// into single representatives, ascending.
fn distinct(values: &[f64], tau: f64) -> Vec<f64> {
    let scale = values.iter().fold(1.0f64, |m, &x| m.max(x));
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        match out.last() {
            Some(&last) if (v - last).abs() <= tau * scale => {}
            _ => out.push(v),
        }
    }
    out
}

/// Every element of `xs` is within `tau * scale` of some element of `ys`
/// and vice versa.
fn spectra_match(xs: &[f64], ys: &[f64], tau: f64) -> bool {
    let scale = xs
        .iter()
        .chain(ys)
        .fold(1.0f64, |m, &x| m.max(x));
    let near = |v: f64, set: &[f64]| set.iter().any(|&w| (v - w).abs() <= tau * scale);
    xs.iter().all(|&v| near(v, ys)) && ys.iter().all(|&v| near(v, xs))
}

/// Finite duality principle: the nonzero eigenvalues of the frame operator
/// of the Gabor system coincide with the nonzero eigenvalues of the Gram
/// matrix of the scaled adjoint system (as sets of distinct values; the
/// multiplicities differ by the lattice density factor). Consequently both
/// sides share the optimal bounds.
pub fn duality_check(g: &CVec, lattice: &Lattice, tau: f64, tol: &Tol) -> Result<DualityReport> {
    let system = gabor_system(g, lattice)?;
    let adjoint = adjoint_system(g, lattice)?;

    let s = system.frame_operator();
    let (s_eigs, _) = hermitian_eig(&s, tol)?;
    let gram = adjoint.gram();
    let (g_eigs, _) = hermitian_eig(&gram, tol)?;

    let sys_nz = nonzero_ascending(&s_eigs, tol);
    let adj_nz = nonzero_ascending(&g_eigs, tol);
    let system_spectrum = distinct(&sys_nz, tau);
    let adjoint_spectrum = distinct(&adj_nz, tau);
    let verdict = spectra_match(&system_spectrum, &adjoint_spectrum, tau);

    let bounds = |nz: &[f64]| -> (f64, f64) {
        match (nz.first(), nz.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0.0, 0.0),
        }
    };
    Ok(DualityReport {
        frame_bounds: bounds(&sys_nz),
        adjoint_bounds: bounds(&adj_nz),
        system_spectrum,
        adjoint_spectrum,
        ker_dim: system.kernel_dim(tol),
        adjoint_deficit: adjoint.deficit(tol),
        verdict,
    })
}

/// Commutator norms of one operator against the lattice generators.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationEntry {
    pub operator: String,
    pub with_modulation: f64,
    pub with_translation: f64,
    pub pass: bool,
}

/// Commutation results for `S`, `S^{1/2}`, `S^{-1/2}` against the primal
/// lattice generators and, when the adjoint lattice is a sublattice,
/// against the adjoint generators as well.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationReport {
    pub lattice_generators: Vec<CommutationEntry>,
    /// `None` when `ab` does not divide `L` (adjoint commutation is not
    /// asserted in that case).
    pub adjoint_generators: Option<Vec<CommutationEntry>>,
    pub pass: bool,
}

fn commutator_entry(
    name: &str,
    op: &CMat,
    e_gen: &CMat,
    t_gen: &CMat,
    threshold: f64,
) -> CommutationEntry {
    let cm = operator_norm(&(op * e_gen - e_gen * op));
    let ct = operator_norm(&(op * t_gen - t_gen * op));
    CommutationEntry {
        operator: name.into(),
        with_modulation: cm,
        with_translation: ct,
        pass: cm <= threshold && ct <= threshold,
    }
}

/// Verifies that the frame operator and its half powers commute with the
/// lattice generators within `tol.eq * ||S||`.
pub fn commutation_check(g: &CVec, lattice: &Lattice, tol: &Tol) -> Result<CommutationReport> {
    let system = gabor_system(g, lattice)?;
    let s = system.frame_operator();
    let s_sqrt = psd_sqrt(&s, tol)?;
    let s_inv_sqrt = psd_inv_sqrt_on_range(&s, tol)?;
    let threshold = tol.eq * operator_norm(&s).max(1.0);

    let l = lattice.l;
    let ops = [("S", &s), ("S^{1/2}", &s_sqrt), ("S^{-1/2}", &s_inv_sqrt)];

    let e_gen = shift_matrix(l, lattice.b, 0);
    let t_gen = shift_matrix(l, 0, lattice.a);
    let lattice_generators: Vec<CommutationEntry> = ops
        .iter()
        .map(|(name, op)| commutator_entry(name, op, &e_gen, &t_gen, threshold))
        .collect();

    let adjoint_generators = if lattice.adjoint_is_sublattice() {
        let e_adj = shift_matrix(l, l / lattice.a, 0);
        let t_adj = shift_matrix(l, 0, l / lattice.b);
        Some(
            ops.iter()
                .map(|(name, op)| commutator_entry(name, op, &e_adj, &t_adj, threshold))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let pass = lattice_generators.iter().all(|e| e.pass)
        && adjoint_generators
            .as_ref()
            .map_or(true, |v| v.iter().all(|e| e.pass));
    Ok(CommutationReport {
        lattice_generators,
        adjoint_generators,
        pass,
    })
}

/// Counting diagnostic for the finite obstruction to literal Gabor
/// R-duality: a finite R-dual relation needs equal index cardinalities on
/// both sides, which holds exactly at critical density `ab = L`.
#[derive(Debug, Clone, Serialize)]
pub struct CardinalityReport {
    pub system_count: usize,
    pub adjoint_count: usize,
    pub system_rank: usize,
    pub adjoint_rank: usize,
    pub ker_dim: usize,
    pub adjoint_deficit: usize,
    pub critical_density: bool,
    /// System rank below the ambient dimension: cannot be a frame for the
    /// whole space (always the case when `ab > L`).
    pub not_frame_for_h: bool,
    pub literal_rdual_possible: bool,
}

pub fn cardinality_report(g: &CVec, lattice: &Lattice, tol: &Tol) -> Result<CardinalityReport> {
    let system = gabor_system(g, lattice)?;
    let adjoint = adjoint_system(g, lattice)?;
    let system_rank = system.rank(tol);
    let adjoint_rank = adjoint.rank(tol);
    Ok(CardinalityReport {
        system_count: lattice.system_size(),
        adjoint_count: lattice.adjoint_size(),
        system_rank,
        adjoint_rank,
        ker_dim: lattice.system_size() - system_rank,
        adjoint_deficit: lattice.l - adjoint_rank,
        critical_density: lattice.is_critical(),
        not_frame_for_h: system_rank < lattice.l,
        literal_rdual_possible: lattice.is_critical(),
    })
}

/// Named window generators: `dirac`, `constant`, and a periodized
/// `gaussian` with standard deviation `L/8`, all unit-normalized.
pub fn named_window(name: &str, l: usize) -> Option<CVec> {
    match name {
        "dirac" => {
            let mut g = CVec::zeros(l);
            g[0] = C64::new(1.0, 0.0);
            Some(g)
        }
        "constant" => {
            let v = 1.0 / (l as f64).sqrt();
            Some(CVec::from_element(l, C64::new(v, 0.0)))
        }
        "gaussian" => {
            let sigma = l as f64 / 8.0;
            let mut g = CVec::from_fn(l, |t, _| {
                let mut v = 0.0;
                for k in -4i64..=4 {
                    let x = t as f64 - k as f64 * l as f64;
                    v += (-x * x / (2.0 * sigma * sigma)).exp();
                }
                C64::new(v, 0.0)
            });
            let norm = g.norm();
            g /= C64::new(norm, 0.0);
            Some(g)
        }
        _ => None,
    }
}
