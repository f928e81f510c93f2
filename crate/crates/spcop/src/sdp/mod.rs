//! Embedded conic solver for standard-form programs
//!
//! ```text
//!     min cᵀx   s.t.   A x = b,   x ∈ K,
//! ```
//!
//! where K is an ordered product of free, nonnegative, and PSD-vectorized
//! cones. The solver is a homogeneous self-dual-embedding primal-dual
//! path-following method with Nesterov–Todd scaling for PSD blocks and a
//! Mehrotra predictor-corrector. The per-iteration KKT systems are solved by
//! group-wise Schur-complement elimination: equality rows that share no cone
//! block decouple in A·H⁻¹·Aᵀ, which makes moment-style programs (where each
//! PSD entry is tied to label slots by its own row) cheap to factor.
//!
//! PSD blocks are stored as the scaled upper triangle (√2 on off-diagonal
//! entries, column-major), so Euclidean inner products of vectorized
//! matrices equal Frobenius inner products exactly.
//!
//! One solve is single-threaded and deterministic: fixed orderings, no
//! randomized pivoting, bitwise-identical iterates across runs.

mod kkt;
mod nt;
mod solver;
pub mod svec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("backend failure: {0}")]
    Backend(String),
}

/// One cone block of the decision vector, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConeSpec {
    Free { dim: usize },
    Nonneg { dim: usize },
    Psd { side: usize },
}

impl ConeSpec {
    /// Storage length in the decision vector.
    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::Free { dim } | ConeSpec::Nonneg { dim } => dim,
            ConeSpec::Psd { side } => side * (side + 1) / 2,
        }
    }

    /// Contribution to the barrier degree ν.
    pub fn barrier_degree(&self) -> usize {
        match *self {
            ConeSpec::Free { .. } => 0,
            ConeSpec::Nonneg { dim } => dim,
            ConeSpec::Psd { side } => side,
        }
    }
}

/// Standard-form conic program with a sparse equality map.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    /// Objective coefficients c.
    pub obj: Vec<f64>,
    /// Sparse equality rows of A (column, coefficient).
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Right-hand side b.
    pub rhs: Vec<f64>,
    /// Cone layout covering the decision vector.
    pub cones: Vec<ConeSpec>,
}

impl ConicProgram {
    pub fn num_vars(&self) -> usize {
        self.obj.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self) -> Result<(), SdpError> {
        let n: usize = self.cones.iter().map(|c| c.dim()).sum();
        if n != self.obj.len() {
            return Err(SdpError::Malformed(format!(
                "cone dimension {} != objective length {}",
                n,
                self.obj.len()
            )));
        }
        if self.rows.len() != self.rhs.len() {
            return Err(SdpError::Malformed("row/rhs count mismatch".into()));
        }
        for (r, row) in self.rows.iter().enumerate() {
            for &(col, v) in row {
                if col >= n {
                    return Err(SdpError::Malformed(format!("row {} references column {}", r, col)));
                }
                if !v.is_finite() {
                    return Err(SdpError::Malformed(format!("row {} has a non-finite entry", r)));
                }
            }
        }
        Ok(())
    }

    /// Scales every equality row (and its rhs) to unit ∞-norm.
    pub fn normalize_rows(&mut self) {
        for (row, rhs) in self.rows.iter_mut().zip(self.rhs.iter_mut()) {
            let scale = row
                .iter()
                .map(|&(_, v)| v.abs())
                .fold(rhs.abs(), f64::max);
            if scale > 0.0 && scale.is_finite() {
                for (_, v) in row.iter_mut() {
                    *v /= scale;
                }
                *rhs /= scale;
            }
        }
    }

    pub fn to_interchange(&self) -> InterchangeProgram {
        let mut triplets = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                triplets.push((r, c, v));
            }
        }
        InterchangeProgram {
            num_vars: self.num_vars(),
            num_rows: self.num_rows(),
            objective: self.obj.clone(),
            rhs: self.rhs.clone(),
            a_triplets: triplets,
            cones: self.cones.clone(),
        }
    }

    pub fn from_interchange(ip: InterchangeProgram) -> Result<Self, SdpError> {
        let mut rows = vec![Vec::new(); ip.num_rows];
        for (r, c, v) in ip.a_triplets {
            if r >= ip.num_rows {
                return Err(SdpError::Malformed(format!("triplet row {} out of range", r)));
            }
            rows[r].push((c, v));
        }
        let prog = ConicProgram { obj: ip.objective, rows, rhs: ip.rhs, cones: ip.cones };
        prog.validate()?;
        Ok(prog)
    }
}

/// Triplet-form JSON interchange for debugging against external solvers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterchangeProgram {
    pub num_vars: usize,
    pub num_rows: usize,
    pub objective: Vec<f64>,
    pub rhs: Vec<f64>,
    pub a_triplets: Vec<(usize, usize, f64)>,
    pub cones: Vec<ConeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    MaxIterations,
    NumericalFailure,
}

/// Primal-dual solution with residual bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConicSolution {
    pub status: Status,
    /// Primal decision vector x (divided out by τ).
    pub x: Vec<f64>,
    /// Equality multipliers z.
    pub z: Vec<f64>,
    /// Cone duals s = c − Aᵀz.
    pub s: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub relative_gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative primal/dual feasibility tolerance.
    pub feas_tol: f64,
    /// Relative duality-gap tolerance.
    pub gap_tol: f64,
    pub max_iterations: usize,
    /// Fraction of the distance to the cone boundary taken each step.
    pub step_fraction: f64,
    /// Static Schur-complement regularization.
    pub static_reg: f64,
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iterations: 120,
            step_fraction: 0.99,
            static_reg: 1e-11,
            verbose: false,
        }
    }
}

/// Solves with the embedded interior-point method.
pub fn solve(program: &ConicProgram, options: &SolveOptions) -> Result<ConicSolution, SdpError> {
    program.validate()?;
    Ok(solver::Solver::new(program, options).run())
}

/// Pluggable solver seam. The embedded IPM is the default; a process-level
/// adapter can shell out to external conic software via the JSON
/// interchange form.
pub trait SolverBackend {
    fn solve(&self, program: &ConicProgram, options: &SolveOptions)
        -> Result<ConicSolution, SdpError>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct EmbeddedBackend;

impl SolverBackend for EmbeddedBackend {
    fn solve(
        &self,
        program: &ConicProgram,
        options: &SolveOptions,
    ) -> Result<ConicSolution, SdpError> {
        solve(program, options)
    }
}

/// Writes the interchange JSON to a temp file, invokes `command <in> <out>`,
/// and reads back a [`ConicSolution`] from `<out>`. Disabled by default;
/// intended for cross-checking against external SDP software.
#[derive(Debug, Clone)]
pub struct JsonProcessBackend {
    pub command: String,
}

impl SolverBackend for JsonProcessBackend {
    fn solve(
        &self,
        program: &ConicProgram,
        options: &SolveOptions,
    ) -> Result<ConicSolution, SdpError> {
        let _ = options;
        let dir = std::env::temp_dir();
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_err(|e| SdpError::Backend(e.to_string()))?
            .as_nanos();
        let in_path = dir.join(format!("spcop-sdp-{stamp}.json"));
        let out_path = dir.join(format!("spcop-sdp-{stamp}-out.json"));
        let payload = serde_json::to_string(&program.to_interchange())
            .map_err(|e| SdpError::Backend(e.to_string()))?;
        std::fs::write(&in_path, payload).map_err(|e| SdpError::Backend(e.to_string()))?;
        let status = std::process::Command::new(&self.command)
            .arg(&in_path)
            .arg(&out_path)
            .status()
            .map_err(|e| SdpError::Backend(format!("spawning {}: {}", self.command, e)))?;
        if !status.success() {
            return Err(SdpError::Backend(format!("{} exited with {}", self.command, status)));
        }
        let text =
            std::fs::read_to_string(&out_path).map_err(|e| SdpError::Backend(e.to_string()))?;
        let _ = std::fs::remove_file(&in_path);
        let _ = std::fs::remove_file(&out_path);
        serde_json::from_str(&text).map_err(|e| SdpError::Backend(e.to_string()))
    }
}

#[cfg(test)]
mod tests;
