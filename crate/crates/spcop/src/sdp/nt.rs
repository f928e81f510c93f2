//! Nesterov–Todd scalings per cone block.
//!
//! For a PSD block with primal X ≻ 0 and dual S ≻ 0 the scaling point is
//! computed from Cholesky factors and the SVD of LsᵀLx: with
//! `W = Lx V Σ^{-1/2}` one has `W⁻¹ X W⁻ᵀ = Wᵀ S W = Σ`, so the scaled
//! primal and dual agree on the diagonal matrix Σ (the scaled point λ).
//! The operator T = W Wᵀ satisfies T S T = X; H = T⁻¹·T⁻¹ sandwiching maps
//! x to s. Nonnegative components reduce to w_i = √(s_i/x_i).

use super::svec;
use nalgebra::{DMatrix, DVector};

pub enum BlockScaling {
    Free {
        dim: usize,
    },
    Nonneg {
        /// λ_i = √(x_i s_i)
        lambda: Vec<f64>,
        /// H⁻¹ diagonal x_i/s_i
        hinv: Vec<f64>,
        /// H diagonal s_i/x_i
        h: Vec<f64>,
        /// w_i = √(s_i/x_i)
        w: Vec<f64>,
    },
    Psd {
        side: usize,
        /// Scaled point Σ (diagonal).
        lambda: DVector<f64>,
        /// W matrix.
        w: DMatrix<f64>,
        /// W⁻¹.
        winv: DMatrix<f64>,
        /// T = W Wᵀ.
        t: DMatrix<f64>,
        /// T⁻¹ = W⁻ᵀ W⁻¹.
        tinv: DMatrix<f64>,
    },
}

impl BlockScaling {
    /// Computes the NT scaling for one block from interior x and s slices.
    pub fn compute(kind: &super::ConeSpec, x: &[f64], s: &[f64]) -> Option<BlockScaling> {
        match *kind {
            super::ConeSpec::Free { dim } => Some(BlockScaling::Free { dim }),
            super::ConeSpec::Nonneg { dim } => {
                let mut lambda = Vec::with_capacity(dim);
                let mut hinv = Vec::with_capacity(dim);
                let mut h = Vec::with_capacity(dim);
                let mut w = Vec::with_capacity(dim);
                for i in 0..dim {
                    if x[i] <= 0.0 || s[i] <= 0.0 {
                        return None;
                    }
                    lambda.push((x[i] * s[i]).sqrt());
                    hinv.push(x[i] / s[i]);
                    h.push(s[i] / x[i]);
                    w.push((s[i] / x[i]).sqrt());
                }
                Some(BlockScaling::Nonneg { lambda, hinv, h, w })
            }
            super::ConeSpec::Psd { side } => {
                let xm = svec::from_svec(x, side);
                let sm = svec::from_svec(s, side);
                let lx = robust_cholesky(&xm)?;
                let ls = robust_cholesky(&sm)?;
                let prod = ls.transpose() * &lx;
                let svd = prod.svd(true, true);
                let u = svd.u.as_ref()?;
                let vt = svd.v_t.as_ref()?;
                let sigma = &svd.singular_values;
                if sigma.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
                    return None;
                }
                let _ = u;
                // W = Lx V Σ^{-1/2}
                let mut v = vt.transpose();
                for (j, mut col) in v.column_iter_mut().enumerate() {
                    col *= 1.0 / sigma[j].sqrt();
                }
                let w = &lx * &v;
                // W⁻¹ = Σ^{1/2} Vᵀ Lx⁻¹
                let lx_inv = invert_lower_triangular(&lx)?;
                let mut vt_scaled = vt.clone();
                for (i, mut row) in vt_scaled.row_iter_mut().enumerate() {
                    row *= sigma[i].sqrt();
                }
                let winv = &vt_scaled * &lx_inv;
                let t = &w * w.transpose();
                let tinv = winv.transpose() * &winv;
                Some(BlockScaling::Psd { side, lambda: sigma.clone(), w, winv, t, tinv })
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockScaling::Free { dim } => *dim,
            BlockScaling::Nonneg { lambda, .. } => lambda.len(),
            BlockScaling::Psd { side, .. } => svec::tri(*side),
        }
    }

    /// out = H⁻¹·input (zero on free blocks).
    pub fn apply_hinv(&self, input: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { hinv, .. } => {
                for (o, (v, hi)) in out.iter_mut().zip(input.iter().zip(hinv.iter())) {
                    *o = v * hi;
                }
            }
            BlockScaling::Psd { side, t, .. } => sandwich(t, input, out, *side),
        }
    }

    /// out = H·input (zero on free blocks).
    pub fn apply_h(&self, input: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { h, .. } => {
                for (o, (v, hi)) in out.iter_mut().zip(input.iter().zip(h.iter())) {
                    *o = v * hi;
                }
            }
            BlockScaling::Psd { side, tinv, .. } => sandwich(tinv, input, out, *side),
        }
    }

    /// Scaled primal direction: out = 𝒲·input = svec(W⁻¹ · mat(input) · W⁻ᵀ).
    pub fn apply_w(&self, input: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { w, .. } => {
                for (o, (v, wi)) in out.iter_mut().zip(input.iter().zip(w.iter())) {
                    *o = v * wi;
                }
            }
            BlockScaling::Psd { side, winv, .. } => {
                let m = svec::from_svec(input, *side);
                let res = winv * m * winv.transpose();
                svec::write_svec(&res, out);
            }
        }
    }

    /// Adjoint scaling: out = 𝒲ᵀ·input = svec(W⁻ᵀ · mat(input) · W⁻¹).
    pub fn apply_wt(&self, input: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { w, .. } => {
                for (o, (v, wi)) in out.iter_mut().zip(input.iter().zip(w.iter())) {
                    *o = v * wi;
                }
            }
            BlockScaling::Psd { side, winv, .. } => {
                let m = svec::from_svec(input, *side);
                let res = winv.transpose() * m * winv;
                svec::write_svec(&res, out);
            }
        }
    }

    /// Scaled dual direction: out = 𝒲⁻ᵀ·input = svec(Wᵀ · mat(input) · W).
    pub fn apply_winv_t(&self, input: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { w, .. } => {
                for (o, (v, wi)) in out.iter_mut().zip(input.iter().zip(w.iter())) {
                    *o = v / wi;
                }
            }
            BlockScaling::Psd { side, w, .. } => {
                let m = svec::from_svec(input, *side);
                let res = w.transpose() * m * w;
                svec::write_svec(&res, out);
            }
        }
    }

    /// Largest α with λ + α·dir staying in the cone (dir in scaled space);
    /// +∞ when the direction never leaves the cone.
    pub fn step_to_boundary(&self, dir: &[f64]) -> f64 {
        match self {
            BlockScaling::Free { .. } => f64::INFINITY,
            BlockScaling::Nonneg { lambda, .. } => {
                let mut alpha = f64::INFINITY;
                for (l, d) in lambda.iter().zip(dir.iter()) {
                    if *d < 0.0 {
                        alpha = alpha.min(-l / d);
                    }
                }
                alpha
            }
            BlockScaling::Psd { side, lambda, .. } => {
                // λ + αU ⪰ 0 ⇔ I + α Λ^{-1/2} U Λ^{-1/2} ⪰ 0
                let u = svec::from_svec(dir, *side);
                let mut scaled = u;
                for i in 0..*side {
                    for j in 0..*side {
                        scaled[(i, j)] /= (lambda[i] * lambda[j]).sqrt();
                    }
                }
                let eig = scaled.symmetric_eigen();
                let min = eig.eigenvalues.min();
                if min >= 0.0 {
                    f64::INFINITY
                } else {
                    -1.0 / min
                }
            }
        }
    }

    /// Jordan division d = λ⁻¹ ∘ rhs, with rhs given in scaled-space svec
    /// (for PSD) or componentwise (nonneg).
    pub fn jordan_div_lambda(&self, rhs: &[f64], out: &mut [f64]) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { lambda, .. } => {
                for (o, (r, l)) in out.iter_mut().zip(rhs.iter().zip(lambda.iter())) {
                    *o = r / l;
                }
            }
            BlockScaling::Psd { side, lambda, .. } => {
                let r = svec::from_svec(rhs, *side);
                let mut d = DMatrix::zeros(*side, *side);
                for i in 0..*side {
                    for j in 0..*side {
                        d[(i, j)] = 2.0 * r[(i, j)] / (lambda[i] + lambda[j]);
                    }
                }
                svec::write_svec(&d, out);
            }
        }
    }

    /// Writes the scaled complementarity right-hand side
    /// `−λ∘λ − corr + σμ·e` into `out` (scaled-space svec for PSD blocks).
    /// `corr` is the Mehrotra product U_aff ∘ V_aff, or None on the affine
    /// pass.
    pub fn comp_rhs(
        &self,
        corr: Option<(&[f64], &[f64])>,
        sigma_mu: f64,
        out: &mut [f64],
    ) {
        match self {
            BlockScaling::Free { dim } => out[..*dim].fill(0.0),
            BlockScaling::Nonneg { lambda, .. } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let mut v = -lambda[i] * lambda[i] + sigma_mu;
                    if let Some((u, w)) = corr {
                        v -= u[i] * w[i];
                    }
                    *o = v;
                }
            }
            BlockScaling::Psd { side, lambda, .. } => {
                let mut r = DMatrix::zeros(*side, *side);
                for i in 0..*side {
                    r[(i, i)] = -lambda[i] * lambda[i] + sigma_mu;
                }
                if let Some((u, w)) = corr {
                    let um = svec::from_svec(u, *side);
                    let wm = svec::from_svec(w, *side);
                    let p = (&um * &wm + &wm * &um) * 0.5;
                    r -= p;
                }
                svec::write_svec(&r, out);
            }
        }
    }
}

/// Cholesky with a small diagonal jitter retry; matrices stay PD along the
/// interior path but can lose definiteness to rounding near convergence.
fn robust_cholesky(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.l());
    }
    let scale = m.diagonal().amax().max(1e-300);
    for jitter_exp in [-14.0f64, -12.0, -10.0] {
        let jitter = scale * 10f64.powf(jitter_exp);
        let mut mm = m.clone();
        for i in 0..m.nrows() {
            mm[(i, i)] += jitter;
        }
        if let Some(ch) = mm.cholesky() {
            return Some(ch.l());
        }
    }
    None
}

fn invert_lower_triangular(l: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = l.nrows();
    l.solve_lower_triangular(&DMatrix::identity(n, n))
}

/// out = svec(T · mat(input) · T).
pub fn sandwich(t: &DMatrix<f64>, input: &[f64], out: &mut [f64], side: usize) {
    let m = svec::from_svec(input, side);
    let res = t * m * t;
    svec::write_svec(&res, out);
}

#[cfg(test)]
mod nt_tests {
    use super::*;
    use crate::sdp::ConeSpec;

    #[test]
    fn psd_scaling_identities() {
        // random-ish PD pair
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 2.0]);
        let b = DMatrix::from_row_slice(3, 3, &[2.0, -0.5, 0.1, -0.5, 5.0, 0.3, 0.1, 0.3, 1.5]);
        let x = svec::to_svec(&a);
        let s = svec::to_svec(&b);
        let sc = BlockScaling::compute(&ConeSpec::Psd { side: 3 }, &x, &s).unwrap();
        if let BlockScaling::Psd { t, tinv, w, winv, lambda, .. } = &sc {
            // T S T = X
            let tst = t * &b * t;
            assert!((tst - &a).abs().max() < 1e-10);
            // W⁻¹ X W⁻ᵀ = Σ = Wᵀ S W
            let sx = winv * &a * winv.transpose();
            let ss = w.transpose() * &b * w;
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { lambda[i] } else { 0.0 };
                    assert!((sx[(i, j)] - expect).abs() < 1e-10);
                    assert!((ss[(i, j)] - expect).abs() < 1e-10);
                }
            }
            assert!((t * tinv - DMatrix::identity(3, 3)).abs().max() < 1e-10);
        } else {
            panic!("expected psd scaling");
        }
        // H maps x to s
        let mut hx = vec![0.0; x.len()];
        sc.apply_h(&x, &mut hx);
        for (a, b) in hx.iter().zip(s.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn nonneg_scaling_maps_x_to_s() {
        let x = [0.5, 2.0, 1.0];
        let s = [3.0, 0.25, 1.0];
        let sc = BlockScaling::compute(&ConeSpec::Nonneg { dim: 3 }, &x, &s).unwrap();
        let mut hx = vec![0.0; 3];
        sc.apply_h(&x, &mut hx);
        for (a, b) in hx.iter().zip(s.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
        // step to boundary from λ along -λ is exactly 1
        if let BlockScaling::Nonneg { lambda, .. } = &sc {
            let dir: Vec<f64> = lambda.iter().map(|l| -l).collect();
            assert!((sc.step_to_boundary(&dir) - 1.0).abs() < 1e-12);
        }
    }
}
