//! Scaled symmetric vectorization.
//!
//! A symmetric s×s matrix is stored as its upper triangle in column-major
//! order with off-diagonal entries scaled by √2, so that
//! `⟨svec(X), svec(Y)⟩ = ⟨X, Y⟩_F` exactly.

use nalgebra::DMatrix;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Storage length of the upper triangle.
pub fn tri(side: usize) -> usize {
    side * (side + 1) / 2
}

/// Index of entry (i, j) with i ≤ j.
pub fn index(i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    j * (j + 1) / 2 + i
}

/// Coefficient placed on the svec component for a symmetric-matrix entry
/// (i, j): a constraint Σ c_ij X_ij translates to Σ entry_coeff·v_idx.
pub fn entry_coeff(i: usize, j: usize, c: f64) -> f64 {
    if i == j {
        c
    } else {
        c / SQRT2
    }
}

pub fn to_svec(m: &DMatrix<f64>) -> Vec<f64> {
    let s = m.nrows();
    let mut v = Vec::with_capacity(tri(s));
    for j in 0..s {
        for i in 0..=j {
            v.push(if i == j { m[(i, j)] } else { SQRT2 * m[(i, j)] });
        }
    }
    v
}

pub fn from_svec(v: &[f64], side: usize) -> DMatrix<f64> {
    debug_assert_eq!(v.len(), tri(side));
    let mut m = DMatrix::zeros(side, side);
    let mut idx = 0;
    for j in 0..side {
        for i in 0..=j {
            let val = if i == j { v[idx] } else { v[idx] / SQRT2 };
            m[(i, j)] = val;
            m[(j, i)] = val;
            idx += 1;
        }
    }
    m
}

/// Writes svec(m) into `out` in place.
pub fn write_svec(m: &DMatrix<f64>, out: &mut [f64]) {
    let s = m.nrows();
    debug_assert_eq!(out.len(), tri(s));
    let mut idx = 0;
    for j in 0..s {
        for i in 0..=j {
            out[idx] = if i == j { m[(i, j)] } else { SQRT2 * m[(i, j)] };
            idx += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_products_are_isometric() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.5, 1.0, 3.0, -1.0, 0.5, -1.0, 4.0]);
        let b = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, -1.0, 2.0, 0.0, 2.0, 0.5]);
        let frob = (a.transpose() * &b).trace();
        let dot: f64 = to_svec(&a).iter().zip(to_svec(&b).iter()).map(|(x, y)| x * y).sum();
        assert!((frob - dot).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 2.0]);
        let v = to_svec(&a);
        assert_eq!(v.len(), tri(2));
        let back = from_svec(&v, 2);
        assert!((a - back).abs().max() < 1e-15);
    }
}
