//! Monomial bases per block, the union label set, and moment vectors.
//!
//! For a block Δ and degree k, `N_k^Δ` is the graded-lex ordered set of
//! power vectors supported on Δ with total degree ≤ k; its size is
//! C(|Δ|+k, k). The union label set `U_k = N_{2k}^{Δ1} ∪ … ∪ N_{2k}^{Δm}`
//! indexes sparse truncated multi-sequences: a monomial shared by several
//! blocks has exactly one slot, so overlapping block views automatically
//! agree on shared moments.

use crate::poly::{Monomial, Polynomial, SparsityPattern};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("degree {0} exceeds the label set degree {1}")]
    DegreeOutOfRange(u32, u32),
    #[error("label {0} is missing from the label set")]
    MissingLabel(String),
}

/// C(n+k, k) as u128 to survive the large dense baselines.
pub fn basis_size(n_vars: usize, k: usize) -> u128 {
    binomial((n_vars + k) as u128, k as u128)
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The graded-lex ordered monomial basis of degree ≤ k supported on a block.
#[derive(Debug, Clone)]
pub struct BlockBasis {
    block: Vec<usize>,
    degree: u32,
    monomials: Vec<Monomial>,
}

impl BlockBasis {
    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }
}

/// Enumerates `N_k^Δ` in graded lexicographic order.
pub fn block_basis(n: usize, block: &[usize], k: u32) -> BlockBasis {
    let mut monomials = Vec::with_capacity(basis_size(block.len(), k as usize) as usize);
    let mut exps = vec![0u32; n];
    enumerate_rec(n, block, 0, k, &mut exps, &mut monomials);
    monomials.sort();
    BlockBasis { block: block.to_vec(), degree: k, monomials }
}

fn enumerate_rec(
    n: usize,
    block: &[usize],
    pos: usize,
    remaining: u32,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == block.len() {
        out.push(Monomial::new(exps.clone()));
        return;
    }
    let var = block[pos];
    for e in 0..=remaining {
        exps[var] = e;
        enumerate_rec(n, block, pos + 1, remaining - e, exps, out);
    }
    exps[var] = 0;
    let _ = n;
}

/// Per-block view into the union label set: the block's `N_{2k}^{Δi}` in
/// graded-lex order, mapped to union slot ids.
#[derive(Debug, Clone)]
pub struct BlockLabels {
    pub monomials: Vec<Monomial>,
    pub slots: Vec<usize>,
}

/// The union label set U_k with O(1) slot lookup and per-block index maps.
#[derive(Debug)]
pub struct LabelSet {
    pattern: SparsityPattern,
    degree: u32,
    labels: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    per_block: Vec<BlockLabels>,
    var_slots: Vec<usize>,
}

impl LabelSet {
    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    /// The label degree 2k.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn label(&self, slot: usize) -> &Monomial {
        &self.labels[slot]
    }

    pub fn slot(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn slot_or_err(&self, m: &Monomial) -> Result<usize, BasisError> {
        self.slot(m).ok_or_else(|| BasisError::MissingLabel(m.to_string()))
    }

    /// Slot of the constant label y_0.
    pub fn constant_slot(&self) -> usize {
        0
    }

    /// Slot of the degree-one label e_j (0-based variable).
    pub fn var_slot(&self, var: usize) -> usize {
        self.var_slots[var]
    }

    pub fn num_blocks(&self) -> usize {
        self.per_block.len()
    }

    pub fn block_labels(&self, i: usize) -> &BlockLabels {
        &self.per_block[i]
    }

    /// Monomials shared by blocks i and j.
    pub fn block_intersection(&self, i: usize, j: usize) -> Vec<Monomial> {
        let set: std::collections::HashSet<usize> =
            self.per_block[j].slots.iter().copied().collect();
        self.per_block[i]
            .monomials
            .iter()
            .zip(self.per_block[i].slots.iter())
            .filter(|(_, s)| set.contains(s))
            .map(|(m, _)| m.clone())
            .collect()
    }
}

/// Builds U_k = ∪_i N_{2k}^{Δi}, deduplicated, globally graded-lex ordered,
/// with per-block slot maps. Blocks are processed in order, so construction
/// is deterministic.
pub fn union_label_set(pattern: &SparsityPattern, two_k: u32) -> Arc<LabelSet> {
    let n = pattern.dimension();
    let mut all: Vec<Vec<Monomial>> = Vec::with_capacity(pattern.num_blocks());
    for i in 0..pattern.num_blocks() {
        all.push(block_basis(n, pattern.block(i), two_k).monomials);
    }
    let mut labels: Vec<Monomial> = Vec::new();
    let mut seen: HashMap<Monomial, ()> = HashMap::new();
    for block in &all {
        for m in block {
            if seen.insert(m.clone(), ()).is_none() {
                labels.push(m.clone());
            }
        }
    }
    labels.sort();
    let index: HashMap<Monomial, usize> =
        labels.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let per_block = all
        .into_iter()
        .map(|monomials| {
            let slots = monomials.iter().map(|m| index[m]).collect();
            BlockLabels { monomials, slots }
        })
        .collect();
    let var_slots = (0..n).map(|j| index[&Monomial::var(n, j)]).collect();
    Arc::new(LabelSet {
        pattern: pattern.clone(),
        degree: two_k,
        labels,
        index,
        per_block,
        var_slots,
    })
}

/// A sparse truncated multi-sequence: one real value per union label.
#[derive(Debug, Clone)]
pub struct MomentVector {
    labels: Arc<LabelSet>,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn new(labels: Arc<LabelSet>, values: Vec<f64>) -> Self {
        assert_eq!(labels.len(), values.len());
        MomentVector { labels, values }
    }

    pub fn zeros(labels: Arc<LabelSet>) -> Self {
        let len = labels.len();
        MomentVector { labels, values: vec![0.0; len] }
    }

    /// Point-evaluation moments [u]: y_α = u^α per label.
    pub fn from_point(labels: Arc<LabelSet>, u: &[f64]) -> Self {
        let values = labels.labels().iter().map(|m| m.eval(u)).collect();
        MomentVector { labels, values }
    }

    pub fn label_set(&self) -> &Arc<LabelSet> {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get_slot(&self, slot: usize) -> f64 {
        self.values[slot]
    }

    pub fn get(&self, m: &Monomial) -> Result<f64, BasisError> {
        Ok(self.values[self.labels.slot_or_err(m)?])
    }

    /// y_0.
    pub fn constant(&self) -> f64 {
        self.values[self.labels.constant_slot()]
    }

    /// π(y) = (y_{e1}, …, y_{en}).
    pub fn project_point(&self) -> Vec<f64> {
        (0..self.labels.pattern().dimension())
            .map(|j| self.values[self.labels.var_slot(j)])
            .collect()
    }

    /// Restriction to labels of total degree ≤ 2k0, on the same pattern.
    pub fn truncate(&self, two_k0: u32) -> Result<MomentVector, BasisError> {
        if two_k0 > self.labels.degree() {
            return Err(BasisError::DegreeOutOfRange(two_k0, self.labels.degree()));
        }
        let new_labels = union_label_set(self.labels.pattern(), two_k0);
        let values = new_labels
            .labels()
            .iter()
            .map(|m| self.get(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MomentVector { labels: new_labels, values })
    }

    /// ⟨p, y⟩ = Σ_α p_α y_α via the Riesz functional.
    pub fn riesz(&self, p: &Polynomial) -> Result<f64, BasisError> {
        let mut acc = 0.0;
        for (m, c) in p.terms() {
            acc += c * self.values[self.labels.slot_or_err(m)?];
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, SparsityPattern};

    fn pattern_4() -> SparsityPattern {
        SparsityPattern::new(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn block_basis_matches_displayed_n2_delta1() {
        // N_2^{Δ1} for Δ1 = {1,2} in n = 4
        let b = block_basis(4, &[0, 1], 2);
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![2, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 2, 0, 0],
        ];
        let got: Vec<Vec<u32>> = b.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(got, expected);
        assert_eq!(b.len() as u128, basis_size(2, 2));
    }

    #[test]
    fn block_basis_matches_displayed_n2_delta2() {
        let b = block_basis(4, &[1, 2, 3], 2);
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 2, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 2, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 2],
        ];
        let got: Vec<Vec<u32>> = b.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn block_basis_degree_zero() {
        let b = block_basis(3, &[0, 2], 0);
        assert_eq!(b.len(), 1);
        assert!(b.monomial(0).is_one());
    }

    #[test]
    fn block_basis_sizes() {
        for n_block in 1..=6usize {
            for k in 0..=4u32 {
                let block: Vec<usize> = (0..n_block).collect();
                let b = block_basis(n_block, &block, k);
                assert_eq!(b.len() as u128, basis_size(n_block, k as usize));
            }
        }
    }

    #[test]
    fn union_overlap_matches_display() {
        let ls = union_label_set(&pattern_4(), 2);
        let overlap = ls.block_intersection(0, 1);
        let got: Vec<Vec<u32>> = overlap.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 2, 0, 0]]);
    }

    #[test]
    fn union_contains_all_canonical_vectors() {
        let ls = union_label_set(&pattern_4(), 2);
        for j in 0..4 {
            assert_eq!(ls.label(ls.var_slot(j)), &Monomial::var(4, j));
        }
        assert!(ls.label(0).is_one());
    }

    #[test]
    fn union_size_cyclic_20_3() {
        let pattern = crate::bench::cyclic_pattern(20, 20, 3).unwrap();
        let ls = union_label_set(&pattern, 4);
        assert_eq!(ls.len(), 401);
    }

    #[test]
    fn union_size_stride2_20_10_5() {
        let pattern = crate::bench::cyclic_pattern(20, 10, 5).unwrap();
        let ls = union_label_set(&pattern, 4);
        assert_eq!(ls.len(), 911);
    }

    #[test]
    fn dense_union_is_full_basis() {
        let pattern = SparsityPattern::dense(4);
        let ls = union_label_set(&pattern, 4);
        assert_eq!(ls.len() as u128, basis_size(4, 4));
    }

    #[test]
    fn moment_vector_point_consistency() {
        let ls = union_label_set(&pattern_4(), 4);
        let u = [0.5, 1.5, 2.0, 0.25];
        let y = MomentVector::from_point(ls, &u);
        assert_eq!(y.project_point(), u.to_vec());
        assert!((y.constant() - 1.0).abs() < 1e-15);
        // truncation of point moments equals point moments of the truncation
        let t = y.truncate(2).unwrap();
        let y2 = MomentVector::from_point(t.label_set().clone(), &u);
        for (a, b) in t.values().iter().zip(y2.values().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        // truncating to the same degree is a no-op
        let same = y.truncate(4).unwrap();
        assert_eq!(same.values(), y.values());
    }

    #[test]
    fn truncate_rejects_higher_degree() {
        let ls = union_label_set(&pattern_4(), 2);
        let y = MomentVector::zeros(ls);
        assert!(y.truncate(4).is_err());
    }

    #[test]
    fn shared_slot_reads_identically_across_blocks() {
        let ls = union_label_set(&pattern_4(), 2);
        let mut y = MomentVector::zeros(ls.clone());
        // write x2^2 through block 1's view
        let m = Monomial::new(vec![0, 2, 0, 0]);
        let slot = ls.slot(&m).unwrap();
        y.values_mut()[slot] = 7.5;
        // read through both block maps
        for i in 0..2 {
            let bl = ls.block_labels(i);
            let pos = bl.monomials.iter().position(|mm| mm == &m).unwrap();
            assert_eq!(y.get_slot(bl.slots[pos]), 7.5);
        }
    }

    #[test]
    fn riesz_point_evaluation() {
        let ls = union_label_set(&pattern_4(), 2);
        let y = MomentVector::from_point(ls, &[1.0, 2.0, 0.5, 3.0]);
        let p = Polynomial::parse("x2^2 - 2*x2*x3 + 1", 4).unwrap();
        let expect = 4.0 - 2.0 * 2.0 * 0.5 + 1.0;
        assert!((y.riesz(&p).unwrap() - expect).abs() < 1e-12);
        // constant polynomial pairs to y_0
        let one = Polynomial::constant(4, 1.0);
        assert!((y.riesz(&one).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn riesz_missing_label_errors() {
        let ls = union_label_set(&pattern_4(), 2);
        let y = MomentVector::zeros(ls);
        // x1*x3 spans two blocks, not in any N_2 set
        let p = Polynomial::parse("x1*x3", 4).unwrap();
        assert!(y.riesz(&p).is_err());
    }
}
