//! Assembly of the moment and SOS relaxations as standard-form conic
//! programs.
//!
//! Sparse moment side, order k: one free slot per label in U_k, a
//! nonnegative slack per row of Cx ≥ d, and one PSD block per
//! (block, generator) pair with generators {1} ∪ {x_j : j ∈ Δi}. Tie rows
//! bind every PSD entry to its label combination, plus y_0 = 1, Aπ(y) = b,
//! Cπ(y) − s = d. The objective is Σ_i ⟨f_i, y_{Δi}⟩.
//!
//! Sparse SOS side: maximize γ subject to one coefficient-matching
//! equality per label in U_k for
//! f − g(x;λ,μ) − γ = Σ_i (σ_{i,0} + Σ_{j∈Δi} x_j σ_{i,j}), with PSD Gram
//! matrices for the σ's, free λ, and nonnegative μ. This program is, up to
//! sign conventions, the conic dual of the moment program.
//!
//! The dense baselines use the single-block pattern with the ideal
//! generated by the rows of Ax−b (free multiplier polynomials) and the
//! quadratic module of h = (Cx−d, x).
//!
//! Every equality row is scaled to unit ∞-norm before solving; objectives
//! are untouched so reported values are unscaled.

use crate::basis::{basis_size, block_basis, union_label_set, BlockBasis, LabelSet, MomentVector};
use crate::moment::{localizing_matrix, moment_matrix, SymbolicMatrix};
use crate::poly::{Monomial, Polynomial, ProblemInstance, SparsityPattern};
use crate::sdp::{svec, ConeSpec, ConicProgram, ConicSolution};
use nalgebra::DMatrix;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RelaxError {
    #[error("relaxation order {k} is below the minimum k0 = {k0}")]
    OrderTooSmall { k: usize, k0: usize },
    #[error("monomial {0} of the objective lies outside every block label set")]
    UncoveredMonomial(String),
    #[error(transparent)]
    Moment(#[from] crate::moment::MomentError),
}

/// Generator attached to a Gram or localizing block.
#[derive(Debug, Clone)]
pub enum Generator {
    One,
    /// Coordinate generator x_j (0-based).
    Var(usize),
    /// General polynomial generator (dense path: rows of Cx−d).
    Poly(Polynomial),
}

impl Generator {
    fn polynomial(&self, n: usize) -> Polynomial {
        match self {
            Generator::One => Polynomial::constant(n, 1.0),
            Generator::Var(j) => Polynomial::variable(n, *j),
            Generator::Poly(p) => p.clone(),
        }
    }
}

/// One PSD block of a moment program, with its symbolic entries.
pub struct MomentBlockInfo {
    pub block_idx: usize,
    pub generator: Generator,
    pub symbolic: SymbolicMatrix,
    pub var_offset: usize,
}

/// A built moment relaxation plus its decoding map.
pub struct MomentRelaxation {
    pub program: ConicProgram,
    pub labels: Arc<LabelSet>,
    pub k: usize,
    pub psd_blocks: Vec<MomentBlockInfo>,
}

/// Decoded moment solution: the truncated multi-sequence and its value.
pub struct MomentSolution {
    pub y: MomentVector,
    pub objective: f64,
}

impl MomentRelaxation {
    pub fn decode(&self, sol: &ConicSolution) -> MomentSolution {
        let values = sol.x[..self.labels.len()].to_vec();
        MomentSolution {
            y: MomentVector::new(self.labels.clone(), values),
            objective: sol.primal_objective,
        }
    }

    /// Instantiates every PSD block at the decoded y and reports the worst
    /// deviation from the solver's block variables.
    pub fn tie_residual(&self, sol: &ConicSolution) -> f64 {
        let y = self.decode(sol);
        let mut worst = 0.0f64;
        for info in &self.psd_blocks {
            let m = info.symbolic.instantiate(&y.y);
            let stored = svec::from_svec(
                &sol.x[info.var_offset..info.var_offset + svec::tri(info.symbolic.side())],
                info.symbolic.side(),
            );
            worst = worst.max((m - stored).abs().max());
        }
        worst
    }
}

/// Builds the sparse moment relaxation of order k.
pub fn build_sparse_moment_sdp(
    instance: &ProblemInstance,
    k: usize,
) -> Result<MomentRelaxation, RelaxError> {
    let k0 = instance.initial_order();
    if k < k0 {
        return Err(RelaxError::OrderTooSmall { k, k0 });
    }
    let pattern = instance.pattern();
    let labels = union_label_set(pattern, 2 * k as u32);
    let n = instance.dimension();
    let cons = instance.constraints();
    let m1 = cons.num_equalities();
    let m2 = cons.num_inequalities();
    let n_labels = labels.len();

    let mut cones = vec![ConeSpec::Free { dim: n_labels }];
    if m2 > 0 {
        cones.push(ConeSpec::Nonneg { dim: m2 });
    }
    let slack_offset = n_labels;
    let mut var_offset = n_labels + m2;

    let mut psd_blocks = Vec::new();
    for i in 0..pattern.num_blocks() {
        let symbolic = moment_matrix(&labels, i, k as u32);
        cones.push(ConeSpec::Psd { side: symbolic.side() });
        psd_blocks.push(MomentBlockInfo {
            block_idx: i,
            generator: Generator::One,
            var_offset,
            symbolic,
        });
        var_offset += svec::tri(psd_blocks.last().unwrap().symbolic.side());
        for &j in pattern.block(i) {
            let symbolic =
                localizing_matrix(&labels, i, &Polynomial::variable(n, j), k as u32)?;
            cones.push(ConeSpec::Psd { side: symbolic.side() });
            psd_blocks.push(MomentBlockInfo {
                block_idx: i,
                generator: Generator::Var(j),
                var_offset,
                symbolic,
            });
            var_offset += svec::tri(psd_blocks.last().unwrap().symbolic.side());
        }
    }
    let num_vars = var_offset;

    // objective Σ_i ⟨f_i, y_{Δi}⟩ lands on the shared label slots
    let mut obj = vec![0.0; num_vars];
    for f_i in instance.objectives() {
        for (m, c) in f_i.terms() {
            let slot = labels
                .slot(m)
                .ok_or_else(|| RelaxError::UncoveredMonomial(m.to_string()))?;
            obj[slot] += c;
        }
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // y_0 = 1
    rows.push(vec![(labels.constant_slot(), 1.0)]);
    rhs.push(1.0);
    // Aπ(y) = b
    for l in 0..m1 {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v = cons.eq_a[(l, j)];
            if v != 0.0 {
                row.push((labels.var_slot(j), v));
            }
        }
        rows.push(row);
        rhs.push(cons.eq_b[l]);
    }
    // Cπ(y) − s = d
    for r in 0..m2 {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..n {
            let v = cons.ineq_c[(r, j)];
            if v != 0.0 {
                row.push((labels.var_slot(j), v));
            }
        }
        row.push((slack_offset + r, -1.0));
        rows.push(row);
        rhs.push(cons.ineq_d[r]);
    }
    // tie rows: X_ij = Σ c_β y_β
    for info in &psd_blocks {
        for ((i, j), combo) in info.symbolic.upper_entries() {
            let mut row = Vec::with_capacity(combo.len() + 1);
            row.push((info.var_offset + svec::index(i, j), svec::entry_coeff(i, j, 1.0)));
            for &(slot, c) in combo {
                row.push((slot, -c));
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }

    let mut program = ConicProgram { obj, rows, rhs, cones };
    program.normalize_rows();
    Ok(MomentRelaxation { program, labels, k, psd_blocks })
}

/// One Gram block of an SOS program.
pub struct GramInfo {
    pub block_idx: usize,
    pub generator: Generator,
    pub basis: BlockBasis,
    pub var_offset: usize,
}

/// A built SOS relaxation plus its decoding map.
pub struct SosRelaxation {
    pub program: ConicProgram,
    pub labels: Arc<LabelSet>,
    pub k: usize,
    gamma_col: usize,
    lambda_cols: std::ops::Range<usize>,
    mu_cols: std::ops::Range<usize>,
    ideal_multiplier_cols: Vec<(usize, BlockBasis)>,
    pub grams: Vec<GramInfo>,
}

/// Multipliers and Gram certificates recovered from an SOS solve: γ, λ,
/// μ ≥ 0, per-(block, generator) Gram matrices, and for the dense path the
/// free multiplier polynomials of the equality ideal.
pub struct MultiplierCertificate {
    pub gamma: f64,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub grams: Vec<(usize, Generator, BlockBasis, DMatrix<f64>)>,
    pub ideal_multipliers: Vec<Polynomial>,
}

impl SosRelaxation {
    pub fn decode(&self, sol: &ConicSolution) -> MultiplierCertificate {
        let gamma = sol.x[self.gamma_col];
        let lambda = sol.x[self.lambda_cols.clone()].to_vec();
        let mu = sol.x[self.mu_cols.clone()].to_vec();
        let grams = self
            .grams
            .iter()
            .map(|g| {
                let side = g.basis.len();
                let m = svec::from_svec(&sol.x[g.var_offset..g.var_offset + svec::tri(side)], side);
                (g.block_idx, g.generator.clone(), g.basis.clone(), m)
            })
            .collect();
        let n = self.labels.pattern().dimension();
        let ideal_multipliers = self
            .ideal_multiplier_cols
            .iter()
            .map(|(off, basis)| {
                let mut p = Polynomial::zero(n);
                for (t, m) in basis.monomials().iter().enumerate() {
                    p.add_term(m.clone(), sol.x[off + t]);
                }
                p
            })
            .collect();
        MultiplierCertificate { gamma, lambda, mu, grams, ideal_multipliers }
    }
}

impl MultiplierCertificate {
    /// The σ-part: Σ over Grams of gen · (basisᵀ G basis).
    pub fn sigma_polynomial(&self, n: usize) -> Polynomial {
        let mut acc = Polynomial::zero(n);
        for (_, gen, basis, g) in &self.grams {
            let mut quad = Polynomial::zero(n);
            for a in 0..basis.len() {
                for b in 0..basis.len() {
                    quad.add_term(basis.monomial(a).mul(basis.monomial(b)), g[(a, b)]);
                }
            }
            acc = acc.add(&gen.polynomial(n).mul(&quad));
        }
        acc
    }

    /// Max coefficient residual of
    /// f − g(x;λ,μ) − γ − (ideal part) − (σ part) over the monomial span.
    pub fn reconstruction_residual(&self, instance: &ProblemInstance) -> f64 {
        let n = instance.dimension();
        let f = instance.total_objective();
        let g = instance.constraints().multiplier_polynomial(&self.lambda, &self.mu);
        let mut target = f.sub(&g).sub(&Polynomial::constant(n, self.gamma));
        let cons = instance.constraints();
        for (l, phi) in self.ideal_multipliers.iter().enumerate() {
            let mut row = Polynomial::zero(n);
            for j in 0..n {
                row.add_term(Monomial::var(n, j), cons.eq_a[(l, j)]);
            }
            row.add_term(Monomial::one(n), -cons.eq_b[l]);
            target = target.sub(&phi.mul(&row));
        }
        target.sub(&self.sigma_polynomial(n)).max_abs_coeff()
    }
}

/// Builds the sparse SOS relaxation of order k (objective max γ, posed as
/// min −γ).
pub fn build_sparse_sos_sdp(
    instance: &ProblemInstance,
    k: usize,
) -> Result<SosRelaxation, RelaxError> {
    let k0 = instance.initial_order();
    if k < k0 {
        return Err(RelaxError::OrderTooSmall { k, k0 });
    }
    let pattern = instance.pattern();
    let labels = union_label_set(pattern, 2 * k as u32);
    let n = instance.dimension();
    let cons = instance.constraints();
    let (m1, m2) = (cons.num_equalities(), cons.num_inequalities());

    let gamma_col = 0;
    let lambda_cols = 1..1 + m1;
    let mu_cols = 1 + m1..1 + m1 + m2;
    let mut cones = vec![ConeSpec::Free { dim: 1 + m1 }];
    if m2 > 0 {
        cones.push(ConeSpec::Nonneg { dim: m2 });
    }
    let mut var_offset = 1 + m1 + m2;
    let mut grams = Vec::new();
    for i in 0..pattern.num_blocks() {
        let b0 = block_basis(n, pattern.block(i), k as u32);
        cones.push(ConeSpec::Psd { side: b0.len() });
        grams.push(GramInfo { block_idx: i, generator: Generator::One, var_offset, basis: b0 });
        var_offset += svec::tri(grams.last().unwrap().basis.len());
        for &j in pattern.block(i) {
            let b1 = block_basis(n, pattern.block(i), k as u32 - 1);
            cones.push(ConeSpec::Psd { side: b1.len() });
            grams.push(GramInfo {
                block_idx: i,
                generator: Generator::Var(j),
                var_offset,
                basis: b1,
            });
            var_offset += svec::tri(grams.last().unwrap().basis.len());
        }
    }
    let num_vars = var_offset;

    // one coefficient-matching row per label in U_k
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); labels.len()];
    let mut rhs = vec![0.0; labels.len()];
    for f_i in instance.objectives() {
        for (m, c) in f_i.terms() {
            let slot = labels
                .slot(m)
                .ok_or_else(|| RelaxError::UncoveredMonomial(m.to_string()))?;
            rhs[slot] += c;
        }
    }
    // γ and multiplier terms of f − λᵀ(Ax−b) − μᵀ(Cx−d) − γ
    rows[labels.constant_slot()].push((gamma_col, 1.0));
    for l in 0..m1 {
        rows[labels.constant_slot()].push((1 + l, -cons.eq_b[l]));
        for j in 0..n {
            let v = cons.eq_a[(l, j)];
            if v != 0.0 {
                rows[labels.var_slot(j)].push((1 + l, v));
            }
        }
    }
    for r in 0..m2 {
        rows[labels.constant_slot()].push((1 + m1 + r, -cons.ineq_d[r]));
        for j in 0..n {
            let v = cons.ineq_c[(r, j)];
            if v != 0.0 {
                rows[labels.var_slot(j)].push((1 + m1 + r, v));
            }
        }
    }
    // Gram contributions
    for info in &grams {
        let gen = match &info.generator {
            Generator::One => Monomial::one(n),
            Generator::Var(j) => Monomial::var(n, *j),
            Generator::Poly(_) => unreachable!("sparse SOS generators are 1 or x_j"),
        };
        add_gram_rows(&mut rows, &labels, info, &[(gen, 1.0)]);
    }

    let mut obj = vec![0.0; num_vars];
    obj[gamma_col] = -1.0;
    let mut program = ConicProgram { obj, rows, rhs, cones };
    program.normalize_rows();
    Ok(SosRelaxation {
        program,
        labels,
        k,
        gamma_col,
        lambda_cols,
        mu_cols,
        ideal_multiplier_cols: Vec::new(),
        grams,
    })
}

fn add_gram_rows(
    rows: &mut [Vec<(usize, f64)>],
    labels: &LabelSet,
    info: &GramInfo,
    gen_terms: &[(Monomial, f64)],
) {
    let basis = &info.basis;
    for b in 0..basis.len() {
        for a in 0..=b {
            let prod = basis.monomial(a).mul(basis.monomial(b));
            let var = info.var_offset + svec::index(a, b);
            // [x]ᵀG[x] puts 2·G_ab on off-diagonal pairs
            let weight = if a == b { 1.0 } else { 2.0 };
            for (gm, gc) in gen_terms {
                let target = prod.mul(gm);
                let slot = labels
                    .slot(&target)
                    .unwrap_or_else(|| panic!("gram product {} outside label set", target));
                rows[slot].push((var, svec::entry_coeff(a, b, weight * gc)));
            }
        }
    }
}

/// Builds the dense moment relaxation of order k (single-block pattern,
/// ideal from the rows of Ax−b, quadratic module of h = (Cx−d, x)).
pub fn build_dense_moment_sdp(
    instance: &ProblemInstance,
    k: usize,
) -> Result<MomentRelaxation, RelaxError> {
    let n = instance.dimension();
    let d = instance.degree() as usize;
    if 2 * k < d {
        return Err(RelaxError::OrderTooSmall { k, k0: d.div_ceil(2) });
    }
    let dense = SparsityPattern::dense(n);
    let labels = union_label_set(&dense, 2 * k as u32);
    let cons = instance.constraints();
    let (m1, m2) = (cons.num_equalities(), cons.num_inequalities());

    let mut cones = vec![ConeSpec::Free { dim: labels.len() }];
    let mut var_offset = labels.len();
    let mut psd_blocks: Vec<MomentBlockInfo> = Vec::new();
    let push_block = |symbolic: SymbolicMatrix,
                          generator: Generator,
                          cones: &mut Vec<ConeSpec>,
                          var_offset: &mut usize,
                          psd_blocks: &mut Vec<MomentBlockInfo>| {
        cones.push(ConeSpec::Psd { side: symbolic.side() });
        let tri = svec::tri(symbolic.side());
        psd_blocks.push(MomentBlockInfo {
            block_idx: 0,
            generator,
            var_offset: *var_offset,
            symbolic,
        });
        *var_offset += tri;
    };
    push_block(
        moment_matrix(&labels, 0, k as u32),
        Generator::One,
        &mut cones,
        &mut var_offset,
        &mut psd_blocks,
    );
    for r in 0..m2 {
        let p = ineq_row_poly(instance, r);
        push_block(
            localizing_matrix(&labels, 0, &p, k as u32)?,
            Generator::Poly(p),
            &mut cones,
            &mut var_offset,
            &mut psd_blocks,
        );
    }
    for j in 0..n {
        let p = Polynomial::variable(n, j);
        push_block(
            localizing_matrix(&labels, 0, &p, k as u32)?,
            Generator::Var(j),
            &mut cones,
            &mut var_offset,
            &mut psd_blocks,
        );
    }
    let num_vars = var_offset;

    let mut obj = vec![0.0; num_vars];
    for f_i in instance.objectives() {
        for (m, c) in f_i.terms() {
            let slot = labels
                .slot(m)
                .ok_or_else(|| RelaxError::UncoveredMonomial(m.to_string()))?;
            obj[slot] += c;
        }
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    rows.push(vec![(labels.constant_slot(), 1.0)]);
    rhs.push(1.0);
    // ideal: ⟨(Ax−b)_l · x^γ, y⟩ = 0 for deg(γ) ≤ 2k−1
    let shift_basis = block_basis(n, dense.block(0), 2 * k as u32 - 1);
    for l in 0..m1 {
        let g_l = eq_row_poly(instance, l);
        for shift in shift_basis.monomials() {
            let mut row = Vec::new();
            for (m, c) in g_l.terms() {
                let slot = labels.slot(&m.mul(shift)).expect("ideal product in label set");
                row.push((slot, c));
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }
    for info in &psd_blocks {
        for ((i, j), combo) in info.symbolic.upper_entries() {
            let mut row = Vec::with_capacity(combo.len() + 1);
            row.push((info.var_offset + svec::index(i, j), svec::entry_coeff(i, j, 1.0)));
            for &(slot, c) in combo {
                row.push((slot, -c));
            }
            rows.push(row);
            rhs.push(0.0);
        }
    }

    let mut program = ConicProgram { obj, rows, rhs, cones };
    program.normalize_rows();
    Ok(MomentRelaxation { program, labels, k, psd_blocks })
}

/// Builds the dense SOS relaxation of order k:
/// max γ s.t. f − γ ∈ Idl[Ax−b]_{2k} + Qmod[(Cx−d, x)]_{2k}.
pub fn build_dense_sos_sdp(
    instance: &ProblemInstance,
    k: usize,
) -> Result<SosRelaxation, RelaxError> {
    let n = instance.dimension();
    let d = instance.degree() as usize;
    if 2 * k < d {
        return Err(RelaxError::OrderTooSmall { k, k0: d.div_ceil(2) });
    }
    let dense = SparsityPattern::dense(n);
    let labels = union_label_set(&dense, 2 * k as u32);
    let cons = instance.constraints();
    let (m1, m2) = (cons.num_equalities(), cons.num_inequalities());

    let gamma_col = 0;
    let mut cones = Vec::new();
    let mut var_offset = 1;
    // free multiplier polynomial coefficients for each equality row
    let mut ideal_multiplier_cols = Vec::new();
    for _ in 0..m1 {
        let basis = block_basis(n, dense.block(0), 2 * k as u32 - 1);
        let len = basis.len();
        ideal_multiplier_cols.push((var_offset, basis));
        var_offset += len;
    }
    cones.push(ConeSpec::Free { dim: var_offset });

    let mut grams = Vec::new();
    let b0 = block_basis(n, dense.block(0), k as u32);
    cones.push(ConeSpec::Psd { side: b0.len() });
    grams.push(GramInfo { block_idx: 0, generator: Generator::One, var_offset, basis: b0 });
    var_offset += svec::tri(grams.last().unwrap().basis.len());
    for r in 0..m2 {
        let p = ineq_row_poly(instance, r);
        let b1 = block_basis(n, dense.block(0), k as u32 - 1);
        cones.push(ConeSpec::Psd { side: b1.len() });
        grams.push(GramInfo { block_idx: 0, generator: Generator::Poly(p), var_offset, basis: b1 });
        var_offset += svec::tri(grams.last().unwrap().basis.len());
    }
    for j in 0..n {
        let b1 = block_basis(n, dense.block(0), k as u32 - 1);
        cones.push(ConeSpec::Psd { side: b1.len() });
        grams.push(GramInfo { block_idx: 0, generator: Generator::Var(j), var_offset, basis: b1 });
        var_offset += svec::tri(grams.last().unwrap().basis.len());
    }
    let num_vars = var_offset;

    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); labels.len()];
    let mut rhs = vec![0.0; labels.len()];
    for f_i in instance.objectives() {
        for (m, c) in f_i.terms() {
            let slot = labels
                .slot(m)
                .ok_or_else(|| RelaxError::UncoveredMonomial(m.to_string()))?;
            rhs[slot] += c;
        }
    }
    rows[labels.constant_slot()].push((gamma_col, 1.0));
    // ideal part: φ_l · (Ax−b)_l, linear in the φ coefficients
    for (l, (off, basis)) in ideal_multiplier_cols.iter().enumerate() {
        let g_l = eq_row_poly(instance, l);
        for (t, shift) in basis.monomials().iter().enumerate() {
            for (m, c) in g_l.terms() {
                let slot = labels.slot(&m.mul(shift)).expect("ideal product in label set");
                rows[slot].push((off + t, c));
            }
        }
    }
    for info in &grams {
        let gen_terms: Vec<(Monomial, f64)> = match &info.generator {
            Generator::One => vec![(Monomial::one(n), 1.0)],
            Generator::Var(j) => vec![(Monomial::var(n, *j), 1.0)],
            Generator::Poly(p) => p.terms().map(|(m, c)| (m.clone(), c)).collect(),
        };
        add_gram_rows(&mut rows, &labels, info, &gen_terms);
    }

    let mut obj = vec![0.0; num_vars];
    obj[gamma_col] = -1.0;
    let mut program = ConicProgram { obj, rows, rhs, cones };
    program.normalize_rows();
    Ok(SosRelaxation {
        program,
        labels,
        k,
        gamma_col,
        lambda_cols: 0..0,
        mu_cols: 0..0,
        ideal_multiplier_cols,
        grams,
    })
}

fn eq_row_poly(instance: &ProblemInstance, l: usize) -> Polynomial {
    let n = instance.dimension();
    let cons = instance.constraints();
    let mut p = Polynomial::zero(n);
    for j in 0..n {
        p.add_term(Monomial::var(n, j), cons.eq_a[(l, j)]);
    }
    p.add_term(Monomial::one(n), -cons.eq_b[l]);
    p
}

fn ineq_row_poly(instance: &ProblemInstance, r: usize) -> Polynomial {
    let n = instance.dimension();
    let cons = instance.constraints();
    let mut p = Polynomial::zero(n);
    for j in 0..n {
        p.add_term(Monomial::var(n, j), cons.ineq_c[(r, j)]);
    }
    p.add_term(Monomial::one(n), -cons.ineq_d[r]);
    p
}

/// Size report for sparse-vs-dense comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct SizeReport {
    pub n: usize,
    pub num_blocks: usize,
    pub k: usize,
    /// |U_k|: number of sparse moment variables.
    pub sparse_dim: usize,
    /// C(n+2k, 2k): dense moment variable count.
    pub dense_dim: u128,
    /// Per block: moment side and variable-localizer side.
    pub block_sides: Vec<(usize, usize)>,
    /// Equality-row count of the sparse moment program.
    pub sparse_equalities: usize,
    /// Coefficient-matching row count of the sparse SOS program.
    pub sparse_sos_equalities: usize,
}

pub fn relaxation_sizes(instance: &ProblemInstance, k: usize) -> SizeReport {
    let pattern = instance.pattern();
    let n = instance.dimension();
    let labels = union_label_set(pattern, 2 * k as u32);
    let cons = instance.constraints();
    let mut block_sides = Vec::new();
    let mut ties = 0usize;
    for i in 0..pattern.num_blocks() {
        let ni = pattern.block(i).len();
        let m_side = basis_size(ni, k) as usize;
        let l_side = basis_size(ni, k - 1) as usize;
        block_sides.push((m_side, l_side));
        ties += svec::tri(m_side) + ni * svec::tri(l_side);
    }
    SizeReport {
        n,
        num_blocks: pattern.num_blocks(),
        k,
        sparse_dim: labels.len(),
        dense_dim: basis_size(n, 2 * k),
        block_sides,
        sparse_equalities: 1 + cons.num_equalities() + cons.num_inequalities() + ties,
        sparse_sos_equalities: labels.len(),
    }
}

#[cfg(test)]
mod tests;
