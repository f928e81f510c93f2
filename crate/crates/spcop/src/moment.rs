//! Symbolic moment and localizing matrices.
//!
//! A `SymbolicMatrix` stores, per upper-triangle entry, a sparse linear
//! combination of label slots. The same structure serves both SDP assembly
//! (constraint coefficients) and post-solve instantiation at a concrete
//! moment vector, so it is built once per (block, order).
//!
//! For a block Δ and order k, the localizing matrix of p uses the basis
//! `[x_Δ]_{k1}` with `k1 = k − ⌈deg(p)/2⌉`, so all referenced labels stay
//! within degree 2k. With p = 1 this is the order-k moment matrix.

use crate::basis::{block_basis, BasisError, LabelSet, MomentVector};
use crate::poly::Polynomial;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("polynomial degree {0} exceeds 2k = {1}")]
    DegreeMismatch(u32, u32),
    #[error("polynomial support leaves the block")]
    SupportMismatch,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Symmetric matrix whose entries are linear in the label slots.
#[derive(Debug, Clone)]
pub struct SymbolicMatrix {
    side: usize,
    /// Upper triangle in column-major svec order: entry (i, j), i ≤ j,
    /// lives at index j(j+1)/2 + i.
    entries: Vec<Vec<(usize, f64)>>,
}

impl SymbolicMatrix {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn entry(&self, i: usize, j: usize) -> &[(usize, f64)] {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        &self.entries[c * (c + 1) / 2 + r]
    }

    pub fn upper_entries(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, f64)])> {
        (0..self.side).flat_map(move |j| {
            (0..=j).map(move |i| ((i, j), self.entry(i, j)))
        })
    }

    /// Instantiates at y, producing a dense symmetric matrix.
    pub fn instantiate(&self, y: &MomentVector) -> DMatrix<f64> {
        self.instantiate_values(y.values())
    }

    pub fn instantiate_values(&self, values: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.side, self.side);
        for ((i, j), combo) in self.upper_entries() {
            let v: f64 = combo.iter().map(|&(slot, c)| c * values[slot]).sum();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }
}

/// The order-k moment matrix of block `block_idx`: entry (α, β) = slot(α+β)
/// over the basis [x_Δ]_k.
pub fn moment_matrix(labels: &LabelSet, block_idx: usize, k: u32) -> SymbolicMatrix {
    localizing_matrix(labels, block_idx, &Polynomial::constant(labels.pattern().dimension(), 1.0), k)
        .expect("constant localizer is always valid")
}

/// The order-k localizing matrix of p on a block: entry (α, β) =
/// Σ_γ p_γ · slot(α+β+γ) over [x_Δ]_{k1}.
pub fn localizing_matrix(
    labels: &LabelSet,
    block_idx: usize,
    p: &Polynomial,
    k: u32,
) -> Result<SymbolicMatrix, MomentError> {
    let pattern = labels.pattern();
    let block = pattern.block(block_idx);
    if 2 * k < p.degree() {
        return Err(MomentError::DegreeMismatch(p.degree(), 2 * k));
    }
    if !p.supported_on(block) {
        return Err(MomentError::SupportMismatch);
    }
    let k1 = k - p.degree().div_ceil(2);
    let basis = block_basis(pattern.dimension(), block, k1);
    let side = basis.len();
    let mut entries = Vec::with_capacity(side * (side + 1) / 2);
    for j in 0..side {
        for i in 0..=j {
            let prod = basis.monomial(i).mul(basis.monomial(j));
            let mut combo = Vec::with_capacity(p.num_terms());
            for (gamma, coeff) in p.terms() {
                let label = prod.mul(gamma);
                let slot = labels
                    .slot(&label)
                    .unwrap_or_else(|| panic!("label {} must exist by degree bounds", label));
                combo.push((slot, coeff));
            }
            entries.push(combo);
        }
    }
    Ok(SymbolicMatrix { side, entries })
}

/// Instantiated moment matrices of one block for all orders 0..=k.
pub fn block_moment_ladder(y: &MomentVector, block_idx: usize, k: u32) -> Vec<DMatrix<f64>> {
    (0..=k)
        .map(|t| moment_matrix(y.label_set(), block_idx, t).instantiate(y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::union_label_set;
    use crate::poly::{Monomial, Polynomial, SparsityPattern};
    use nalgebra::DVector;

    fn pattern_4() -> SparsityPattern {
        SparsityPattern::new(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap()
    }

    fn mono(exps: [u32; 4]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    #[test]
    fn moment_matrix_matches_displayed_3x3() {
        // M_{Δ1}^{(1)} over basis [1, x1, x2] with entries y_0000 … y_0200
        let ls = union_label_set(&pattern_4(), 2);
        let m = moment_matrix(&ls, 0, 1);
        assert_eq!(m.side(), 3);
        let expected: [[[u32; 4]; 3]; 3] = [
            [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]],
            [[1, 0, 0, 0], [2, 0, 0, 0], [1, 1, 0, 0]],
            [[0, 1, 0, 0], [1, 1, 0, 0], [0, 2, 0, 0]],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let combo = m.entry(i, j);
                assert_eq!(combo.len(), 1);
                assert_eq!(combo[0].1, 1.0);
                assert_eq!(ls.label(combo[0].0), &mono(expected[i][j]));
            }
        }
    }

    #[test]
    fn localizing_matrix_matches_displayed_4x4() {
        // L_{x2}^{Δ2,2} over basis [1, x2, x3, x4]
        let ls = union_label_set(&pattern_4(), 4);
        let p = Polynomial::variable(4, 1);
        let l = localizing_matrix(&ls, 1, &p, 2).unwrap();
        assert_eq!(l.side(), 4);
        let expected: [[[u32; 4]; 4]; 4] = [
            [[0, 1, 0, 0], [0, 2, 0, 0], [0, 1, 1, 0], [0, 1, 0, 1]],
            [[0, 2, 0, 0], [0, 3, 0, 0], [0, 2, 1, 0], [0, 2, 0, 1]],
            [[0, 1, 1, 0], [0, 2, 1, 0], [0, 1, 2, 0], [0, 1, 1, 1]],
            [[0, 1, 0, 1], [0, 2, 0, 1], [0, 1, 1, 1], [0, 1, 0, 2]],
        ];
        for i in 0..4 {
            for j in 0..4 {
                let combo = l.entry(i, j);
                assert_eq!(combo.len(), 1);
                assert_eq!(ls.label(combo[0].0), &mono(expected[i][j]));
            }
        }
    }

    #[test]
    fn unit_localizer_is_moment_matrix() {
        let ls = union_label_set(&pattern_4(), 2);
        let one = Polynomial::constant(4, 1.0);
        let l = localizing_matrix(&ls, 0, &one, 1).unwrap();
        let m = moment_matrix(&ls, 0, 1);
        let y = MomentVector::from_point(ls, &[0.7, 1.2, 0.4, 2.0]);
        assert_eq!(l.instantiate(&y), m.instantiate(&y));
    }

    #[test]
    fn order_zero_moment_matrix_is_y0() {
        let ls = union_label_set(&pattern_4(), 2);
        let m = moment_matrix(&ls, 0, 0);
        assert_eq!(m.side(), 1);
        let y = MomentVector::from_point(ls, &[0.3, 0.4, 0.5, 0.6]);
        assert_eq!(m.instantiate(&y)[(0, 0)], 1.0);
    }

    #[test]
    fn point_moment_matrix_is_rank_one_outer_product() {
        let ls = union_label_set(&pattern_4(), 2);
        let u = [0.5, 1.5, 0.0, 2.0];
        let y = MomentVector::from_point(ls.clone(), &u);
        let m = moment_matrix(&ls, 0, 1).instantiate(&y);
        // [u_Δ]_1 = (1, u1, u2)
        let v = DVector::from_vec(vec![1.0, u[0], u[1]]);
        let outer = &v * v.transpose();
        assert!((m - outer).abs().max() < 1e-12);
    }

    #[test]
    fn point_matrices_are_psd_on_nonneg_points() {
        // membership direction: moment and variable localizers are PSD at
        // moments of nonnegative points
        let pattern = pattern_4();
        let ls = union_label_set(&pattern, 4);
        let pts = [[0.2, 1.1, 0.7, 0.05], [2.0, 0.0, 0.3, 1.0]];
        for u in pts {
            let y = MomentVector::from_point(ls.clone(), &u);
            for b in 0..2 {
                let m = moment_matrix(&ls, b, 2).instantiate(&y);
                let eig = m.symmetric_eigen();
                assert!(eig.eigenvalues.min() >= -1e-10);
                for &j in pattern.block(b) {
                    let l = localizing_matrix(&ls, b, &Polynomial::variable(4, j), 2)
                        .unwrap()
                        .instantiate(&y);
                    let eig = l.symmetric_eigen();
                    assert!(eig.eigenvalues.min() >= -1e-10, "x{} localizer", j + 1);
                }
            }
        }
    }

    #[test]
    fn riesz_of_product_at_point_moments() {
        let ls = union_label_set(&pattern_4(), 4);
        let u = [0.9, 0.3, 1.4, 0.2];
        let y = MomentVector::from_point(ls, &u);
        let p = Polynomial::parse("x2^2 - x2", 4).unwrap();
        let q = Polynomial::parse("2*x2 + 1", 4).unwrap();
        let lhs = y.riesz(&p.mul(&q)).unwrap();
        assert!((lhs - p.eval(&u) * q.eval(&u)).abs() < 1e-12);
    }

    #[test]
    fn quadratic_form_equals_riesz_of_square() {
        // vᵀ M^{(k)}[y] v = ⟨(vᵀ[x]_k)², y⟩
        let pattern = pattern_4();
        let ls = union_label_set(&pattern, 4);
        let mut y = MomentVector::zeros(ls.clone());
        // fill with a deterministic mixture of two point measures
        let y1 = MomentVector::from_point(ls.clone(), &[0.4, 1.1, 0.2, 0.9]);
        let y2 = MomentVector::from_point(ls.clone(), &[1.3, 0.5, 0.8, 0.1]);
        for (i, v) in y.values_mut().iter_mut().enumerate() {
            *v = 0.3 * y1.values()[i] + 0.7 * y2.values()[i];
        }
        let basis = block_basis(4, pattern.block(1), 2);
        let m = moment_matrix(&ls, 1, 2).instantiate(&y);
        let v: Vec<f64> = (0..basis.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let quad = {
            let vv = DVector::from_column_slice(&v);
            (vv.transpose() * &m * &vv)[(0, 0)]
        };
        let mut sigma = Polynomial::zero(4);
        for (i, mi) in basis.monomials().iter().enumerate() {
            sigma.add_term(mi.clone(), v[i]);
        }
        let sq = sigma.mul(&sigma);
        assert!((quad - y.riesz(&sq).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn localizing_rejects_bad_inputs() {
        let ls = union_label_set(&pattern_4(), 2);
        let p = Polynomial::parse("x2^4 + x2", 4).unwrap();
        assert!(matches!(
            localizing_matrix(&ls, 0, &p, 1),
            Err(MomentError::DegreeMismatch(4, 2))
        ));
        let q = Polynomial::parse("x3", 4).unwrap();
        assert!(matches!(localizing_matrix(&ls, 0, &q, 1), Err(MomentError::SupportMismatch)));
    }
}
