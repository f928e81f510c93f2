//! Multivariate polynomials, sparsity patterns, and problem instances.
//!
//! Polynomials are sparse exponent-vector → coefficient maps over a fixed
//! ambient dimension `n`. Variables are `x1..xn` externally and 0-based
//! internally. Terms are kept in graded lexicographic order (total degree
//! first, then lexicographic with `x1` heaviest), which fixes printing and
//! makes every decomposition deterministic.

mod parse;

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Coefficients below this magnitude are dropped after arithmetic.
pub const COEFF_EPS: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable x{var} out of range at position {pos} (dimension is {n})")]
    VarOutOfRange { var: usize, n: usize, pos: usize },
    #[error("term {term} is covered by no block of the sparsity pattern")]
    UncoveredTerm { term: String },
    #[error("invalid sparsity pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("problem file: {0}")]
    File(String),
}

/// A power vector α ∈ ℕⁿ. Total degree is the sum of the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps: exps.into() }
    }

    /// The constant monomial 1 in dimension `n`.
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n].into() }
    }

    /// The monomial x_{var} (0-based).
    pub fn var(n: usize, var: usize) -> Self {
        debug_assert!(var < n);
        let mut exps = vec![0u32; n];
        exps[var] = 1;
        Monomial { exps: exps.into() }
    }

    pub fn dimension(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.dimension(), other.dimension());
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial { exps: exps.into() }
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j)
            .collect()
    }

    /// True if all variables with positive exponent lie in `block` (sorted).
    pub fn supported_on(&self, block: &[usize]) -> bool {
        self.exps
            .iter()
            .enumerate()
            .all(|(j, &e)| e == 0 || block.binary_search(&j).is_ok())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension());
        self.exps
            .iter()
            .zip(x.iter())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &v)| v.powi(e as i32))
            .product()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Graded lexicographic: total degree first, then lexicographic with x1
/// heaviest (so x1² precedes x1·x2 precedes x2²).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.dimension(), other.dimension());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            match b.cmp(a) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "x{}^{}", j + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A sparse multivariate polynomial with real coefficients.
///
/// Zero coefficients are never stored; the term map is ordered graded-lex so
/// iteration, printing, and decompositions are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(n);
        if c.abs() >= COEFF_EPS {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    /// The coordinate polynomial x_{var} (0-based).
    pub fn variable(n: usize, var: usize) -> Self {
        let mut p = Polynomial::zero(n);
        p.terms.insert(Monomial::var(n, var), 1.0);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            debug_assert_eq!(m.dimension(), n);
            p.add_term(m, c);
        }
        p
    }

    /// Parse an arithmetic expression in `x1..xn` with `+ - * ^`, numeric
    /// literals and parentheses, expanding it into the sparse term map.
    pub fn parse(text: &str, n: usize) -> Result<Polynomial, PolyError> {
        parse::parse_polynomial(text, n)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, m: Monomial, c: f64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().abs() < COEFF_EPS {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if c.abs() >= COEFF_EPS {
                    e.insert(c);
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        if c.abs() < COEFF_EPS {
            return out;
        }
        for (m, v) in self.terms() {
            let cv = c * v;
            if cv.abs() >= COEFF_EPS {
                out.terms.insert(m.clone(), cv);
            }
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n, other.n);
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.n, 1.0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact term-by-term evaluation.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.terms().map(|(m, c)| c * m.eval(x)).sum()
    }

    /// ∂p/∂x_{var}, computed termwise.
    pub fn partial(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in self.terms() {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c * e as f64);
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.n).map(|j| self.partial(j)).collect()
    }

    /// Full n×n Hessian; symmetric by construction.
    pub fn hessian(&self) -> Vec<Vec<Polynomial>> {
        let grad = self.gradient();
        let mut h = vec![vec![Polynomial::zero(self.n); self.n]; self.n];
        for r in 0..self.n {
            for c in r..self.n {
                let p = grad[r].partial(c);
                h[r][c] = p.clone();
                if c != r {
                    h[c][r] = p;
                }
            }
        }
        h
    }

    /// Variables appearing with positive exponent in some term.
    pub fn support_variables(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for (m, _) in self.terms() {
            s.extend(m.support());
        }
        s
    }

    pub fn supported_on(&self, block: &[usize]) -> bool {
        self.terms().all(|(m, _)| m.supported_on(block))
    }

    /// Largest absolute coefficient; 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(mag))?;
            } else if (mag - 1.0).abs() < COEFF_EPS {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", fmt_coeff(mag), m)?;
            }
        }
        Ok(())
    }
}

fn fmt_coeff(c: f64) -> String {
    if c == c.trunc() && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{}", c)
    }
}

/// An ordered cover Δ_1, …, Δ_m of the variable index set.
///
/// Blocks are stored 0-based with strictly increasing indices; their union
/// must be the full index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityPattern {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SparsityPattern {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PolyError> {
        if blocks.is_empty() {
            return Err(PolyError::InvalidPattern("no blocks given".into()));
        }
        let mut covered = vec![false; n];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(PolyError::InvalidPattern(format!("block {} is empty", i + 1)));
            }
            for w in b.windows(2) {
                if w[0] >= w[1] {
                    return Err(PolyError::InvalidPattern(format!(
                        "block {} is not strictly increasing",
                        i + 1
                    )));
                }
            }
            for &j in b {
                if j >= n {
                    return Err(PolyError::InvalidPattern(format!(
                        "block {} contains x{} beyond dimension {}",
                        i + 1,
                        j + 1,
                        n
                    )));
                }
                covered[j] = true;
            }
        }
        if let Some(j) = covered.iter().position(|&c| !c) {
            return Err(PolyError::InvalidPattern(format!(
                "variable x{} lies in no block",
                j + 1
            )));
        }
        Ok(SparsityPattern { n, blocks })
    }

    /// The trivial single-block (dense) pattern.
    pub fn dense(n: usize) -> Self {
        SparsityPattern { n, blocks: vec![(0..n).collect()] }
    }

    /// Groups variables by connected components of the term-support graph
    /// of `f`. A convenience, not prescribed by the problem formulation.
    pub fn detect(f: &Polynomial) -> Result<Self, PolyError> {
        let n = f.dimension();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for (m, _) in f.terms() {
            let sup = m.support();
            for w in sup.windows(2) {
                let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..n {
            let r = find(&mut parent, j);
            groups.entry(r).or_default().push(j);
        }
        SparsityPattern::new(n, groups.into_values().collect())
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Blocks with 1-based indices, for file and report formats.
    pub fn blocks_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&j| j + 1).collect())
            .collect()
    }

    /// Index of the first block containing all of `vars`, if any.
    pub fn covering_block(&self, m: &Monomial) -> Option<usize> {
        (0..self.blocks.len()).find(|&i| m.supported_on(&self.blocks[i]))
    }
}

/// Splits `f` into per-block summands `f_i` with `support(f_i) ⊆ Δ_i`.
///
/// A term covered by several blocks goes to the lowest-index covering block,
/// so decompositions are deterministic and reports reproducible.
pub fn decompose_objective(
    f: &Polynomial,
    pattern: &SparsityPattern,
) -> Result<Vec<Polynomial>, PolyError> {
    let n = f.dimension();
    let mut parts = vec![Polynomial::zero(n); pattern.num_blocks()];
    for (m, c) in f.terms() {
        match pattern.covering_block(m) {
            Some(i) => parts[i].add_term(m.clone(), c),
            None => {
                return Err(PolyError::UncoveredTerm { term: m.to_string() });
            }
        }
    }
    Ok(parts)
}

/// Linear data of the feasible set K = { x : Ax = b, Cx ≥ d, x ≥ 0 }.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraints {
    pub eq_a: DMatrix<f64>,
    pub eq_b: DVector<f64>,
    pub ineq_c: DMatrix<f64>,
    pub ineq_d: DVector<f64>,
}

impl LinearConstraints {
    pub fn new(
        eq_a: DMatrix<f64>,
        eq_b: DVector<f64>,
        ineq_c: DMatrix<f64>,
        ineq_d: DVector<f64>,
    ) -> Result<Self, PolyError> {
        if eq_a.nrows() != eq_b.len() {
            return Err(PolyError::DimensionMismatch(format!(
                "A has {} rows but b has {} entries",
                eq_a.nrows(),
                eq_b.len()
            )));
        }
        if ineq_c.nrows() != ineq_d.len() {
            return Err(PolyError::DimensionMismatch(format!(
                "C has {} rows but d has {} entries",
                ineq_c.nrows(),
                ineq_d.len()
            )));
        }
        if ineq_c.nrows() > 0 && eq_a.nrows() > 0 && ineq_c.ncols() != eq_a.ncols() {
            return Err(PolyError::DimensionMismatch(
                "A and C disagree on the number of columns".into(),
            ));
        }
        Ok(LinearConstraints { eq_a, eq_b, ineq_c, ineq_d })
    }

    /// No constraints beyond x ≥ 0.
    pub fn none(n: usize) -> Self {
        LinearConstraints {
            eq_a: DMatrix::zeros(0, n),
            eq_b: DVector::zeros(0),
            ineq_c: DMatrix::zeros(0, n),
            ineq_d: DVector::zeros(0),
        }
    }

    pub fn num_equalities(&self) -> usize {
        self.eq_a.nrows()
    }

    pub fn num_inequalities(&self) -> usize {
        self.ineq_c.nrows()
    }

    /// (max |Ax−b|, min of Cx−d, min of x); empty parts report +inf slack.
    pub fn residuals(&self, x: &[f64]) -> (f64, f64, f64) {
        let xv = DVector::from_column_slice(x);
        let eq = if self.eq_a.nrows() > 0 {
            (&self.eq_a * &xv - &self.eq_b).abs().max()
        } else {
            0.0
        };
        let ineq = if self.ineq_c.nrows() > 0 {
            (&self.ineq_c * &xv - &self.ineq_d).min()
        } else {
            f64::INFINITY
        };
        let nonneg = x.iter().copied().fold(f64::INFINITY, f64::min);
        (eq, ineq, nonneg)
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        let (eq, ineq, nonneg) = self.residuals(x);
        eq <= tol && ineq >= -tol && nonneg >= -tol
    }

    /// The multiplier polynomial g(x; λ, μ) = λᵀ(Ax−b) + μᵀ(Cx−d).
    pub fn multiplier_polynomial(&self, lambda: &[f64], mu: &[f64]) -> Polynomial {
        let n = self.eq_a.ncols().max(self.ineq_c.ncols());
        let mut g = Polynomial::zero(n);
        for (l, &lam) in lambda.iter().enumerate() {
            for j in 0..n {
                g.add_term(Monomial::var(n, j), lam * self.eq_a[(l, j)]);
            }
            g.add_term(Monomial::one(n), -lam * self.eq_b[l]);
        }
        for (r, &m) in mu.iter().enumerate() {
            for j in 0..n {
                g.add_term(Monomial::var(n, j), m * self.ineq_c[(r, j)]);
            }
            g.add_term(Monomial::one(n), -m * self.ineq_d[r]);
        }
        g
    }
}

/// A sparse polynomial optimization instance: block objectives plus the
/// linear data of K.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pattern: SparsityPattern,
    objectives: Vec<Polynomial>,
    constraints: LinearConstraints,
}

impl ProblemInstance {
    pub fn new(
        pattern: SparsityPattern,
        objectives: Vec<Polynomial>,
        constraints: LinearConstraints,
    ) -> Result<Self, PolyError> {
        let n = pattern.dimension();
        if objectives.len() != pattern.num_blocks() {
            return Err(PolyError::InvalidInstance(format!(
                "{} objectives for {} blocks",
                objectives.len(),
                pattern.num_blocks()
            )));
        }
        for (i, f_i) in objectives.iter().enumerate() {
            if f_i.dimension() != n {
                return Err(PolyError::InvalidInstance(format!(
                    "objective {} has dimension {} (expected {})",
                    i + 1,
                    f_i.dimension(),
                    n
                )));
            }
            if !f_i.supported_on(pattern.block(i)) {
                return Err(PolyError::InvalidInstance(format!(
                    "objective {} uses variables outside its block",
                    i + 1
                )));
            }
        }
        if constraints.num_equalities() > 0 && constraints.eq_a.ncols() != n {
            return Err(PolyError::DimensionMismatch("A column count != n".into()));
        }
        if constraints.num_inequalities() > 0 && constraints.ineq_c.ncols() != n {
            return Err(PolyError::DimensionMismatch("C column count != n".into()));
        }
        Ok(ProblemInstance { pattern, objectives, constraints })
    }

    /// Builds an instance from a total objective, splitting it over the
    /// pattern with [`decompose_objective`].
    pub fn from_total_objective(
        pattern: SparsityPattern,
        f: &Polynomial,
        constraints: LinearConstraints,
    ) -> Result<Self, PolyError> {
        let objectives = decompose_objective(f, &pattern)?;
        ProblemInstance::new(pattern, objectives, constraints)
    }

    pub fn dimension(&self) -> usize {
        self.pattern.dimension()
    }

    pub fn pattern(&self) -> &SparsityPattern {
        &self.pattern
    }

    pub fn objectives(&self) -> &[Polynomial] {
        &self.objectives
    }

    pub fn constraints(&self) -> &LinearConstraints {
        &self.constraints
    }

    /// The total objective Σ f_i.
    pub fn total_objective(&self) -> Polynomial {
        let mut f = Polynomial::zero(self.dimension());
        for f_i in &self.objectives {
            f = f.add(f_i);
        }
        f
    }

    /// d = max_i deg(f_i).
    pub fn degree(&self) -> u32 {
        self.objectives.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    /// Initial relaxation order k0 = ⌈d/2⌉ (at least 1).
    pub fn initial_order(&self) -> usize {
        (self.degree() as usize).div_ceil(2).max(1)
    }

    pub fn evaluate_objective(&self, x: &[f64]) -> f64 {
        self.objectives.iter().map(|f| f.eval(x)).sum()
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.constraints.is_feasible(x, tol)
    }
}

/// JSON problem file: dimensions, 1-based blocks, objective text (total or
/// per block), and dense A, b, C, d arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub objective: ObjectiveSpec,
    #[serde(default, rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(default)]
    pub b: Vec<f64>,
    #[serde(default, rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(default)]
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectiveSpec {
    Total(String),
    PerBlock(Vec<String>),
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        serde_json::from_str(text).map_err(|e| PolyError::File(e.to_string()))
    }

    pub fn to_instance(&self) -> Result<ProblemInstance, PolyError> {
        let blocks0: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&j| {
                        if j == 0 || j > self.n {
                            Err(PolyError::File(format!("block index {} out of range", j)))
                        } else {
                            Ok(j - 1)
                        }
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let pattern = SparsityPattern::new(self.n, blocks0)?;
        let constraints = LinearConstraints::new(
            rows_to_matrix(&self.a, self.n)?,
            DVector::from_vec(self.b.clone()),
            rows_to_matrix(&self.c, self.n)?,
            DVector::from_vec(self.d.clone()),
        )?;
        match &self.objective {
            ObjectiveSpec::Total(text) => {
                let f = Polynomial::parse(text, self.n)?;
                if f.is_zero() && text.trim().is_empty() {
                    return Err(PolyError::File("empty objective".into()));
                }
                ProblemInstance::from_total_objective(pattern, &f, constraints)
            }
            ObjectiveSpec::PerBlock(texts) => {
                let objectives: Vec<Polynomial> = texts
                    .iter()
                    .map(|t| Polynomial::parse(t, self.n))
                    .collect::<Result<_, _>>()?;
                ProblemInstance::new(pattern, objectives, constraints)
            }
        }
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>, PolyError> {
    if rows.is_empty() {
        return Ok(DMatrix::zeros(0, n));
    }
    for r in rows {
        if r.len() != n {
            return Err(PolyError::File(format!(
                "matrix row has {} entries, expected {}",
                r.len(),
                n
            )));
        }
    }
    Ok(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}
