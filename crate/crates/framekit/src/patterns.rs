//! Truncations of the classical eventually-identity example families.
//!
//! Each family is an infinite sequence that agrees with an orthonormal
//! basis from some index on; the truncation at dimension `n` keeps `n`
//! vectors in `C^n` and reproduces the infinite pattern at all interior
//! indices. The last index can carry a boundary artifact (typically a
//! trailing zero vector in a constructed dual), which callers should
//! exclude from assertions.

use crate::frames::VectorSequence;
use crate::linalg::{CMat, C64};

fn unit(d: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn from_cols(cols: Vec<Vec<C64>>) -> VectorSequence {
    let d = cols.len();
    let mut m = CMat::zeros(d, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    VectorSequence::from_matrix(m)
}

/// `{e1, e1, e2, e3, ...}` truncated: `n` vectors in `C^n`, spanning the
/// first `n - 1` coordinates. Optimal bounds `(1, 2)`.
pub fn repeated_first_frame(n: usize) -> VectorSequence {
    assert!(n >= 4, "pattern needs at least 3 interior indices");
    let mut cols = vec![unit(n, 0), unit(n, 0)];
    for i in 1..n - 1 {
        cols.push(unit(n, i));
    }
    from_cols(cols)
}

/// `{sqrt(2) z1, z2, sqrt(2) z3, sqrt(2) z4, ...}` truncated: a Riesz
/// basis of `C^n` with optimal bounds `(1, 2)`.
pub fn sqrt2_pattern_frame(n: usize) -> VectorSequence {
    assert!(n >= 4);
    let r2 = C64::new(2.0f64.sqrt(), 0.0);
    let cols = (0..n)
        .map(|i| {
            let mut v = unit(n, i);
            if i != 1 {
                v[i] *= r2;
            }
            v
        })
        .collect();
    from_cols(cols)
}

/// `{sqrt(2) z1, z2, z3, z4, ...}` truncated: a Riesz basis of `C^n`
/// with optimal bounds `(1, 2)`, sharing its bounds with
/// [`sqrt2_pattern_frame`] but not tight.
pub fn sqrt2_pattern_riesz(n: usize) -> VectorSequence {
    assert!(n >= 4);
    let r2 = C64::new(2.0f64.sqrt(), 0.0);
    let cols = (0..n)
        .map(|i| {
            let mut v = unit(n, i);
            if i == 0 {
                v[i] *= r2;
            }
            v
        })
        .collect();
    from_cols(cols)
}

/// `{alpha e1, (1 - alpha) e1, e2, e3, ...}` truncated: the dual frames
/// of [`repeated_first_frame`] are exactly the members of this family.
pub fn alpha_dual_family(n: usize, alpha: f64) -> VectorSequence {
    assert!(n >= 4);
    let mut first = unit(n, 0);
    first[0] = C64::new(alpha, 0.0);
    let mut second = unit(n, 0);
    second[0] = C64::new(1.0 - alpha, 0.0);
    let mut cols = vec![first, second];
    for i in 1..n - 1 {
        cols.push(unit(n, i));
    }
    from_cols(cols)
}
