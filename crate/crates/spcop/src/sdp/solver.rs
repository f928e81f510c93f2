//! Homogeneous self-dual embedding with Mehrotra predictor-corrector.
//!
//! State (x, z, s, τ, κ) follows the extended system
//!
//! ```text
//!     A x − b τ           = 0
//!     −Aᵀ z + c τ − s     = 0
//!     bᵀ z − cᵀ x − κ     = 0
//! ```
//!
//! with x ∈ K, s ∈ K*, τ, κ ≥ 0. Complementarity is linearized in the
//! NT-scaled space, where both scaled primal and dual equal the scaled
//! point λ; Jordan division by λ is diagonal there. τ > 0 at convergence
//! recovers an optimal pair; τ → 0 with κ > 0 yields an infeasibility
//! certificate which is validated against the Farkas conditions before a
//! status is declared.

use super::kkt::KktContext;
use super::nt::BlockScaling;
use super::svec;
use super::{ConeSpec, ConicProgram, ConicSolution, SolveOptions, Status};

pub struct Solver<'a> {
    prog: &'a ConicProgram,
    opts: &'a SolveOptions,
    ctx: KktContext,
    x: Vec<f64>,
    z: Vec<f64>,
    s: Vec<f64>,
    tau: f64,
    kappa: f64,
    nu: f64,
    norm_b: f64,
    norm_c: f64,
}

#[derive(Clone)]
struct Metrics {
    pres: f64,
    dres: f64,
    gap: f64,
    pobj: f64,
    dobj: f64,
}

impl Metrics {
    fn score(&self) -> f64 {
        self.pres.max(self.dres).max(self.gap)
    }
}

/// Best iterate seen so far, reported when the path stalls.
struct Snapshot {
    x: Vec<f64>,
    z: Vec<f64>,
    s: Vec<f64>,
    tau: f64,
    metrics: Metrics,
}

impl<'a> Solver<'a> {
    pub fn new(prog: &'a ConicProgram, opts: &'a SolveOptions) -> Self {
        let ctx = KktContext::new(prog);
        let n = prog.num_vars();
        let m = prog.num_rows();
        let mut x = vec![0.0; n];
        let mut s = vec![0.0; n];
        let mut off = 0;
        for cone in &prog.cones {
            match *cone {
                ConeSpec::Free { dim } => off += dim,
                ConeSpec::Nonneg { dim } => {
                    for i in 0..dim {
                        x[off + i] = 1.0;
                        s[off + i] = 1.0;
                    }
                    off += dim;
                }
                ConeSpec::Psd { side } => {
                    for i in 0..side {
                        x[off + svec::index(i, i)] = 1.0;
                        s[off + svec::index(i, i)] = 1.0;
                    }
                    off += svec::tri(side);
                }
            }
        }
        let nu: usize = prog.cones.iter().map(|c| c.barrier_degree()).sum();
        Solver {
            prog,
            opts,
            ctx,
            x,
            z: vec![0.0; m],
            s,
            tau: 1.0,
            kappa: 1.0,
            nu: nu as f64,
            norm_b: prog.rhs.iter().fold(0.0f64, |a, &v| a.max(v.abs())),
            norm_c: prog.obj.iter().fold(0.0f64, |a, &v| a.max(v.abs())),
        }
    }

    pub fn run(mut self) -> ConicSolution {
        let mut iterations = 0;
        let mut best: Option<Snapshot> = None;
        let mut stalled = 0usize;
        let mut mu_at_progress = f64::INFINITY;
        for iter in 0..self.opts.max_iterations {
            iterations = iter;
            let metrics = self.metrics();
            let mu_now = (dot(&self.x, &self.s) + self.tau * self.kappa) / (self.nu + 1.0);
            let improved = metrics.score().is_finite()
                && best.as_ref().map_or(true, |b| metrics.score() < 0.9 * b.metrics.score());
            if improved {
                best = Some(Snapshot {
                    x: self.x.clone(),
                    z: self.z.clone(),
                    s: self.s.clone(),
                    tau: self.tau,
                    metrics: metrics.clone(),
                });
            }
            // progress = better residual score, or the complementarity
            // still shrinking (long central paths move μ first)
            if improved || mu_now <= 0.9 * mu_at_progress {
                stalled = 0;
                mu_at_progress = mu_now;
            } else {
                stalled += 1;
                if stalled >= 8 {
                    return self.finish_best(Status::MaxIterations, iter, best);
                }
            }
            if self.opts.verbose {
                let mu_dbg = (dot(&self.x, &self.s) + self.tau * self.kappa) / (self.nu + 1.0);
                eprintln!(
                    "iter {:3}  pobj {:+.6e}  dobj {:+.6e}  pres {:.2e}  dres {:.2e}  gap {:.2e}  tau {:.2e}  kappa {:.2e}  mu {:.2e}",
                    iter, metrics.pobj, metrics.dobj, metrics.pres, metrics.dres, metrics.gap, self.tau, self.kappa, mu_dbg
                );
            }
            if !metrics.pres.is_finite() || !metrics.dres.is_finite() {
                return self.finish_best(Status::NumericalFailure, iter, best);
            }
            if metrics.pres <= self.opts.feas_tol
                && metrics.dres <= self.opts.feas_tol
                && metrics.gap <= self.opts.gap_tol
            {
                return self.finish(Status::Optimal, iter, &metrics);
            }
            if self.tau < 0.01 * self.kappa.max(1e-10) {
                if let Some(status) = self.infeasibility_status() {
                    return self.finish(status, iter, &metrics);
                }
            }

            let Some(scalings) = self.compute_scalings() else {
                return self.finish_best(Status::NumericalFailure, iter, best);
            };
            let Some(factors) = self.ctx.factorize(&scalings, self.opts.static_reg) else {
                return self.finish_best(Status::NumericalFailure, iter, best);
            };

            let mu = (dot(&self.x, &self.s) + self.tau * self.kappa) / (self.nu + 1.0);
            let res_p = self.residual_p();
            let res_d = self.residual_d();
            let res_g = self.residual_g();

            // constant-rhs solve used for the τ elimination
            let neg_c: Vec<f64> = self.prog.obj.iter().map(|&v| -v).collect();
            let (u1, v1) = factors.solve(&neg_c, &self.prog.rhs);
            let denom_base = dot(&self.prog.rhs, &v1) - dot(&self.prog.obj, &u1);

            // --- affine predictor ---
            // jordan division of −λ∘λ gives 𝒲ᵀ(−λ) = −s exactly
            let f_aff: Vec<f64> =
                res_d.iter().zip(self.s.iter()).map(|(rd, si)| -rd - si).collect();
            let g_aff: Vec<f64> = res_p.iter().map(|v| -v).collect();
            let (u2, v2) = factors.solve(&f_aff, &g_aff);
            let rtau_aff = -self.tau * self.kappa;
            let denom = denom_base + self.kappa / self.tau;
            let dtau_aff = (-res_g - dot(&self.prog.rhs, &v2)
                + dot(&self.prog.obj, &u2)
                + rtau_aff / self.tau)
                / denom;
            let dx_aff = add_scaled(&u2, &u1, dtau_aff);
            let dz_aff = add_scaled(&v2, &v1, dtau_aff);
            let dkappa_aff = (rtau_aff - self.kappa * dtau_aff) / self.tau;

            let (u_sc_aff, v_sc_aff, ds_aff) =
                self.scaled_directions(&scalings, &dx_aff, &dz_aff, dtau_aff, &res_d);

            let alpha_aff = self
                .step_length(&scalings, &u_sc_aff, &v_sc_aff, dtau_aff, dkappa_aff)
                .min(1.0);
            let mu_aff = {
                let mut acc = 0.0;
                for i in 0..self.x.len() {
                    acc += (self.x[i] + alpha_aff * dx_aff[i]) * (self.s[i] + alpha_aff * ds_aff[i]);
                }
                acc += (self.tau + alpha_aff * dtau_aff) * (self.kappa + alpha_aff * dkappa_aff);
                acc / (self.nu + 1.0)
            };
            let sigma = ((mu_aff / mu).max(0.0).powi(3)).clamp(1e-8, 0.999);

            // --- combined corrector ---
            let d_comb = self.corrector_rhs(&scalings, &u_sc_aff, &v_sc_aff, sigma * mu);
            let wt_d = self.apply_wt_blocks(&scalings, &d_comb);
            let f_comb: Vec<f64> =
                res_d.iter().zip(wt_d.iter()).map(|(rd, w)| -rd + w).collect();
            let (u2c, v2c) = factors.solve(&f_comb, &g_aff);
            let rtau_comb = -self.tau * self.kappa - dtau_aff * dkappa_aff + sigma * mu;
            let dtau = (-res_g - dot(&self.prog.rhs, &v2c)
                + dot(&self.prog.obj, &u2c)
                + rtau_comb / self.tau)
                / denom;
            let dx = add_scaled(&u2c, &u1, dtau);
            let dz = add_scaled(&v2c, &v1, dtau);
            let dkappa = (rtau_comb - self.kappa * dtau) / self.tau;
            let (u_sc, v_sc, ds) = self.scaled_directions(&scalings, &dx, &dz, dtau, &res_d);

            let alpha_max = self.step_length(&scalings, &u_sc, &v_sc, dtau, dkappa);
            // close to convergence, hug the boundary harder so the affine
            // residual contraction (1−α) keeps pace
            let frac = if metrics.score() < 1e-5 {
                self.opts.step_fraction.max(0.999)
            } else {
                self.opts.step_fraction
            };
            let alpha = (frac * alpha_max).min(1.0);
            if self.opts.verbose {
                eprintln!("          alpha_aff {:.3e}  sigma {:.3e}  alpha {:.3e}", alpha_aff, sigma, alpha);
            }
            if !alpha.is_finite() {
                return self.finish_best(Status::NumericalFailure, iter, best);
            }
            if alpha <= 1e-11 {
                // step collapse: the path cannot be followed further
                return self.finish_best(Status::MaxIterations, iter, best);
            }

            for i in 0..self.x.len() {
                self.x[i] += alpha * dx[i];
                self.s[i] += alpha * ds[i];
            }
            for (zi, d) in self.z.iter_mut().zip(dz.iter()) {
                *zi += alpha * d;
            }
            self.tau += alpha * dtau;
            self.kappa += alpha * dkappa;
        }
        let metrics = self.metrics();
        if metrics.pres <= self.opts.feas_tol
            && metrics.dres <= self.opts.feas_tol
            && metrics.gap <= self.opts.gap_tol
        {
            return self.finish(Status::Optimal, iterations, &metrics);
        }
        if let Some(status) = self.infeasibility_status() {
            return self.finish(status, iterations, &metrics);
        }
        self.finish_best(Status::MaxIterations, iterations, best)
    }

    fn finish_best(self, status: Status, iterations: usize, best: Option<Snapshot>) -> ConicSolution {
        match best {
            Some(b) => {
                let status = if b.metrics.pres <= self.opts.feas_tol
                    && b.metrics.dres <= self.opts.feas_tol
                    && b.metrics.gap <= self.opts.gap_tol
                {
                    Status::Optimal
                } else {
                    status
                };
                ConicSolution {
                    status,
                    x: b.x.iter().map(|v| v / b.tau).collect(),
                    z: b.z.iter().map(|v| v / b.tau).collect(),
                    s: b.s.iter().map(|v| v / b.tau).collect(),
                    primal_objective: b.metrics.pobj,
                    dual_objective: b.metrics.dobj,
                    primal_residual: b.metrics.pres,
                    dual_residual: b.metrics.dres,
                    relative_gap: b.metrics.gap,
                    iterations: iterations + 1,
                }
            }
            None => {
                let metrics = self.metrics();
                self.finish(status, iterations, &metrics)
            }
        }
    }

    fn metrics(&self) -> Metrics {
        let res_p = self.residual_p();
        let res_d = self.residual_d();
        let pres = inf_norm(&res_p) / self.tau / (1.0 + self.norm_b);
        let dres = inf_norm(&res_d) / self.tau / (1.0 + self.norm_c);
        let pobj = dot(&self.prog.obj, &self.x) / self.tau;
        let dobj = dot(&self.prog.rhs, &self.z) / self.tau;
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs()));
        Metrics { pres, dres, gap, pobj, dobj }
    }

    fn finish(self, status: Status, iterations: usize, metrics: &Metrics) -> ConicSolution {
        let t = if matches!(status, Status::PrimalInfeasible | Status::DualInfeasible) {
            1.0
        } else {
            self.tau
        };
        ConicSolution {
            status,
            x: self.x.iter().map(|v| v / t).collect(),
            z: self.z.iter().map(|v| v / t).collect(),
            s: self.s.iter().map(|v| v / t).collect(),
            primal_objective: metrics.pobj,
            dual_objective: metrics.dobj,
            primal_residual: metrics.pres,
            dual_residual: metrics.dres,
            relative_gap: metrics.gap,
            iterations: iterations + 1,
        }
    }

    fn residual_p(&self) -> Vec<f64> {
        let mut r = Vec::with_capacity(self.prog.num_rows());
        for (row, &b) in self.prog.rows.iter().zip(self.prog.rhs.iter()) {
            let mut acc = -b * self.tau;
            for &(col, v) in row {
                acc += v * self.x[col];
            }
            r.push(acc);
        }
        r
    }

    fn residual_d(&self) -> Vec<f64> {
        let mut at_z = vec![0.0; self.prog.num_vars()];
        for (row, &zr) in self.prog.rows.iter().zip(self.z.iter()) {
            for &(col, v) in row {
                at_z[col] += v * zr;
            }
        }
        (0..self.prog.num_vars())
            .map(|i| -at_z[i] + self.prog.obj[i] * self.tau - self.s[i])
            .collect()
    }

    fn residual_g(&self) -> f64 {
        dot(&self.prog.rhs, &self.z) - dot(&self.prog.obj, &self.x) - self.kappa
    }

    fn compute_scalings(&self) -> Option<Vec<BlockScaling>> {
        let mut out = Vec::with_capacity(self.prog.cones.len());
        let mut off = 0;
        for spec in &self.prog.cones {
            let d = spec.dim();
            out.push(BlockScaling::compute(spec, &self.x[off..off + d], &self.s[off..off + d])?);
            off += d;
        }
        Some(out)
    }

    /// Recovers Δs exactly from the dual Newton equation
    /// Δs = res_d − AᵀΔz + cΔτ, so the dual residual contracts by (1−α)
    /// without scaled-space roundoff; then forms the scaled directions
    /// U = 𝒲Δx and V = 𝒲⁻ᵀΔs used for step lengths and correctors.
    fn scaled_directions(
        &self,
        scalings: &[BlockScaling],
        dx: &[f64],
        dz: &[f64],
        dtau: f64,
        res_d: &[f64],
    ) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.prog.num_vars();
        let mut ds = vec![0.0; n];
        for (i, (&rd, &c)) in res_d.iter().zip(self.prog.obj.iter()).enumerate() {
            ds[i] = rd + c * dtau;
        }
        for (row, &zr) in self.prog.rows.iter().zip(dz.iter()) {
            if zr == 0.0 {
                continue;
            }
            for &(col, v) in row {
                ds[col] -= v * zr;
            }
        }
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut off = 0;
        for sc in scalings {
            let d = sc.dim();
            if matches!(sc, BlockScaling::Free { .. }) {
                // free components carry no dual slack
                for i in off..off + d {
                    ds[i] = 0.0;
                }
            } else {
                sc.apply_w(&dx[off..off + d], &mut u[off..off + d]);
                sc.apply_winv_t(&ds[off..off + d], &mut v[off..off + d]);
            }
            off += d;
        }
        (u, v, ds)
    }

    fn corrector_rhs(
        &self,
        scalings: &[BlockScaling],
        u_aff: &[f64],
        v_aff: &[f64],
        sigma_mu: f64,
    ) -> Vec<f64> {
        let n = self.prog.num_vars();
        let mut rhs = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut off = 0;
        for sc in scalings {
            let dim = sc.dim();
            if !matches!(sc, BlockScaling::Free { .. }) {
                sc.comp_rhs(
                    Some((&u_aff[off..off + dim], &v_aff[off..off + dim])),
                    sigma_mu,
                    &mut rhs[off..off + dim],
                );
                sc.jordan_div_lambda(&rhs[off..off + dim], &mut d[off..off + dim]);
            }
            off += dim;
        }
        d
    }

    /// 𝒲ᵀ applied blockwise.
    fn apply_wt_blocks(&self, scalings: &[BlockScaling], input: &[f64]) -> Vec<f64> {
        let n = self.prog.num_vars();
        let mut out = vec![0.0; n];
        let mut off = 0;
        for sc in scalings {
            let d = sc.dim();
            if !matches!(sc, BlockScaling::Free { .. }) {
                sc.apply_wt(&input[off..off + d], &mut out[off..off + d]);
            }
            off += d;
        }
        out
    }

    fn step_length(
        &self,
        scalings: &[BlockScaling],
        u: &[f64],
        v: &[f64],
        dtau: f64,
        dkappa: f64,
    ) -> f64 {
        let mut alpha = f64::INFINITY;
        let mut off = 0;
        for sc in scalings {
            let d = sc.dim();
            if !matches!(sc, BlockScaling::Free { .. }) {
                alpha = alpha.min(sc.step_to_boundary(&u[off..off + d]));
                alpha = alpha.min(sc.step_to_boundary(&v[off..off + d]));
            }
            off += d;
        }
        if dtau < 0.0 {
            alpha = alpha.min(-self.tau / dtau);
        }
        if dkappa < 0.0 {
            alpha = alpha.min(-self.kappa / dkappa);
        }
        alpha
    }

    /// Validates Farkas-type certificates from the current iterate.
    fn infeasibility_status(&self) -> Option<Status> {
        let tol = self.opts.feas_tol;
        // primal infeasibility: −Aᵀz ∈ K*, z free rows arbitrary, bᵀz > 0
        let btz = dot(&self.prog.rhs, &self.z);
        if btz > 1e-12 {
            let mut at_z = vec![0.0; self.prog.num_vars()];
            for (row, &zr) in self.prog.rows.iter().zip(self.z.iter()) {
                for &(col, v) in row {
                    at_z[col] += v * zr;
                }
            }
            let neg: Vec<f64> = at_z.iter().map(|v| -v).collect();
            let viol = self.dual_cone_violation(&neg);
            let scale = btz.max(inf_norm(&at_z));
            if viol <= tol * scale {
                return Some(Status::PrimalInfeasible);
            }
        }
        // dual infeasibility: x ∈ K, Ax ≈ 0, cᵀx < 0
        let ctx = dot(&self.prog.obj, &self.x);
        if ctx < -1e-12 {
            let mut ax = vec![0.0; self.prog.num_rows()];
            for (r, row) in self.prog.rows.iter().enumerate() {
                for &(col, v) in row {
                    ax[r] += v * self.x[col];
                }
            }
            let scale = (-ctx).max(inf_norm(&self.x));
            let viol = inf_norm(&ax).max(self.cone_violation(&self.x));
            if viol <= tol * scale {
                return Some(Status::DualInfeasible);
            }
        }
        None
    }

    /// Distance-like violation of membership in K* (free components must
    /// vanish).
    fn dual_cone_violation(&self, v: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        let mut off = 0;
        for spec in &self.prog.cones {
            let d = spec.dim();
            match *spec {
                ConeSpec::Free { .. } => {
                    for &x in &v[off..off + d] {
                        worst = worst.max(x.abs());
                    }
                }
                ConeSpec::Nonneg { .. } => {
                    for &x in &v[off..off + d] {
                        worst = worst.max(-x);
                    }
                }
                ConeSpec::Psd { side } => {
                    let m = svec::from_svec(&v[off..off + d], side);
                    let eig = m.symmetric_eigen();
                    worst = worst.max(-eig.eigenvalues.min());
                }
            }
            off += d;
        }
        worst
    }

    fn cone_violation(&self, v: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        let mut off = 0;
        for spec in &self.prog.cones {
            let d = spec.dim();
            match *spec {
                ConeSpec::Free { .. } => {}
                ConeSpec::Nonneg { .. } => {
                    for &x in &v[off..off + d] {
                        worst = worst.max(-x);
                    }
                }
                ConeSpec::Psd { side } => {
                    let m = svec::from_svec(&v[off..off + d], side);
                    let eig = m.symmetric_eigen();
                    worst = worst.max(-eig.eigenvalues.min());
                }
            }
            off += d;
        }
        worst
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

fn add_scaled(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x + t * y).collect()
}
