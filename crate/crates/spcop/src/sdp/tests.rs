use super::*;
use crate::bench::GaussianSource;

fn solve_default(prog: &ConicProgram) -> ConicSolution {
    solve(prog, &SolveOptions::default()).unwrap()
}

#[test]
fn lp_sanity() {
    // min x s.t. x = 1, x ≥ 0
    let prog = ConicProgram {
        obj: vec![1.0],
        rows: vec![vec![(0, 1.0)]],
        rhs: vec![1.0],
        cones: vec![ConeSpec::Nonneg { dim: 1 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective - 1.0).abs() < 1e-7);
    assert!((sol.x[0] - 1.0).abs() < 1e-7);
}

#[test]
fn psd_sanity() {
    // min tr(X) s.t. X_11 = 1, X ⪰ 0 (2×2) → 1 with X = e1 e1ᵀ
    let prog = ConicProgram {
        obj: vec![1.0, 0.0, 1.0], // trace in svec coords: diag entries
        rows: vec![vec![(0, 1.0)]],
        rhs: vec![1.0],
        cones: vec![ConeSpec::Psd { side: 2 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective - 1.0).abs() < 1e-7);
    assert!((sol.x[0] - 1.0).abs() < 1e-6);
    assert!(sol.x[1].abs() < 1e-6);
    assert!(sol.x[2].abs() < 1e-6);
}

#[test]
fn lp_with_free_variable() {
    // min x1 + x2 s.t. x1 + f = 1, x2 − f = 1; x ≥ 0, f free → value 2
    let prog = ConicProgram {
        obj: vec![1.0, 1.0, 0.0],
        rows: vec![vec![(0, 1.0), (2, 1.0)], vec![(1, 1.0), (2, -1.0)]],
        rhs: vec![1.0, 1.0],
        cones: vec![ConeSpec::Nonneg { dim: 2 }, ConeSpec::Free { dim: 1 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective - 2.0).abs() < 1e-7);
}

#[test]
fn infeasible_lp_certificate() {
    // x = −1, x ≥ 0 is primal infeasible
    let prog = ConicProgram {
        obj: vec![1.0],
        rows: vec![vec![(0, 1.0)]],
        rhs: vec![-1.0],
        cones: vec![ConeSpec::Nonneg { dim: 1 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::PrimalInfeasible);
    // Farkas: −Aᵀz ∈ K*, bᵀz > 0
    let btz: f64 = prog.rhs.iter().zip(sol.z.iter()).map(|(b, z)| b * z).sum();
    assert!(btz > 0.0);
    let atz = sol.z[0];
    assert!(-atz >= -1e-6 * btz.max(1.0));
}

#[test]
fn unbounded_lp_is_dual_infeasible() {
    // min −x1 s.t. x2 = 1, x ≥ 0: unbounded below
    let prog = ConicProgram {
        obj: vec![-1.0, 0.0],
        rows: vec![vec![(1, 1.0)]],
        rhs: vec![1.0],
        cones: vec![ConeSpec::Nonneg { dim: 2 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::DualInfeasible);
}

#[test]
fn infeasible_psd() {
    // X ⪰ 0 with X_11 = −1: infeasible
    let prog = ConicProgram {
        obj: vec![0.0, 0.0, 0.0],
        rows: vec![vec![(0, 1.0)]],
        rhs: vec![-1.0],
        cones: vec![ConeSpec::Psd { side: 2 }],
    };
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::PrimalInfeasible);
}

/// Builds a random program with a known optimal pair: pick complementary
/// x* ∈ K, s* ∈ K* (x*ᵀs* = 0), z* arbitrary; set b = Ax*, c = Aᵀz* + s*.
/// Strong duality holds with value cᵀx* = bᵀz*.
fn constructed_optimum(seed: u64, cones: Vec<ConeSpec>, m: usize) -> (ConicProgram, f64) {
    let mut src = GaussianSource::seeded(seed);
    let n: usize = cones.iter().map(|c| c.dim()).sum();
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut row = Vec::new();
        for col in 0..n {
            let v = src.gaussian();
            if v.abs() > 0.8 {
                row.push((col, v));
            }
        }
        if row.is_empty() {
            row.push((0, 1.0));
        }
        rows.push(row);
    }
    // complementary boundary points per cone
    let mut xstar = vec![0.0; n];
    let mut sstar = vec![0.0; n];
    let mut off = 0;
    for cone in &cones {
        match *cone {
            ConeSpec::Free { dim } => {
                for i in 0..dim {
                    xstar[off + i] = src.gaussian();
                    sstar[off + i] = 0.0;
                }
                off += dim;
            }
            ConeSpec::Nonneg { dim } => {
                for i in 0..dim {
                    if src.uniform() < 0.5 {
                        xstar[off + i] = 0.5 + src.uniform();
                        sstar[off + i] = 0.0;
                    } else {
                        xstar[off + i] = 0.0;
                        sstar[off + i] = 0.5 + src.uniform();
                    }
                }
                off += dim;
            }
            ConeSpec::Psd { side } => {
                let d = svec::tri(side);
                // shared eigenbasis, disjoint eigenvalue supports
                let g = nalgebra::DMatrix::from_fn(side, side, |_, _| src.gaussian());
                let q = g.qr().q();
                let split = 1 + (src.uniform() * (side as f64 - 1.0)) as usize;
                let mut lx = nalgebra::DMatrix::zeros(side, side);
                let mut ls = nalgebra::DMatrix::zeros(side, side);
                for i in 0..side {
                    if i < split {
                        lx[(i, i)] = 0.5 + src.uniform();
                    } else {
                        ls[(i, i)] = 0.5 + src.uniform();
                    }
                }
                let xm = &q * lx * q.transpose();
                let sm = &q * ls * q.transpose();
                svec::write_svec(&xm, &mut xstar[off..off + d]);
                svec::write_svec(&sm, &mut sstar[off..off + d]);
                off += d;
            }
        }
    }
    let zstar: Vec<f64> = (0..m).map(|_| src.gaussian()).collect();
    let mut rhs = vec![0.0; m];
    for (r, row) in rows.iter().enumerate() {
        for &(col, v) in row {
            rhs[r] += v * xstar[col];
        }
    }
    let mut obj = sstar.clone();
    for (r, row) in rows.iter().enumerate() {
        for &(col, v) in row {
            obj[col] += v * zstar[r];
        }
    }
    let value = obj.iter().zip(xstar.iter()).map(|(c, x)| c * x).sum();
    (ConicProgram { obj, rows, rhs, cones }, value)
}

#[test]
fn random_mixed_cone_programs_reach_constructed_optimum() {
    for seed in 0..5u64 {
        let cones = vec![
            ConeSpec::Free { dim: 2 },
            ConeSpec::Nonneg { dim: 4 },
            ConeSpec::Psd { side: 3 },
            ConeSpec::Psd { side: 2 },
        ];
        let (prog, value) = constructed_optimum(seed, cones, 6);
        let sol = solve_default(&prog);
        assert_eq!(sol.status, Status::Optimal, "seed {}", seed);
        assert!(
            (sol.primal_objective - value).abs() <= 1e-6 * (1.0 + value.abs()),
            "seed {}: pobj {} vs {}",
            seed,
            sol.primal_objective,
            value
        );
        // gap invariant on Optimal
        assert!(
            (sol.primal_objective - sol.dual_objective).abs()
                <= 1e-7 * (1.0 + sol.primal_objective.abs())
        );
    }
}

#[test]
fn psd_blocks_satisfy_cone_membership_on_optimal() {
    let cones = vec![ConeSpec::Nonneg { dim: 2 }, ConeSpec::Psd { side: 4 }];
    let (prog, _) = constructed_optimum(11, cones, 5);
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::Optimal);
    let block = svec::from_svec(&sol.x[2..], 4);
    let eig = block.symmetric_eigen();
    assert!(eig.eigenvalues.min() >= -1e-7);
}

#[test]
fn solving_twice_is_bitwise_identical() {
    let cones = vec![ConeSpec::Free { dim: 1 }, ConeSpec::Nonneg { dim: 3 }, ConeSpec::Psd { side: 3 }];
    let (prog, _) = constructed_optimum(3, cones, 4);
    let a = solve_default(&prog);
    let b = solve_default(&prog);
    assert_eq!(a.x, b.x);
    assert_eq!(a.z, b.z);
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn interchange_round_trip() {
    let cones = vec![ConeSpec::Free { dim: 1 }, ConeSpec::Psd { side: 2 }];
    let (prog, _) = constructed_optimum(9, cones, 3);
    let ip = prog.to_interchange();
    let text = serde_json::to_string(&ip).unwrap();
    let back = ConicProgram::from_interchange(serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(prog.obj, back.obj);
    assert_eq!(prog.rhs, back.rhs);
    assert_eq!(prog.cones, back.cones);
    let a = solve_default(&prog);
    let b = solve_default(&back);
    assert_eq!(a.x, b.x);
}

#[test]
fn row_normalization_preserves_solution() {
    let cones = vec![ConeSpec::Nonneg { dim: 3 }, ConeSpec::Psd { side: 2 }];
    let (mut prog, value) = constructed_optimum(17, cones, 4);
    for row in prog.rows.iter_mut() {
        for (_, v) in row.iter_mut() {
            *v *= 37.0;
        }
    }
    for b in prog.rhs.iter_mut() {
        *b *= 37.0;
    }
    prog.normalize_rows();
    let sol = solve_default(&prog);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective - value).abs() <= 1e-6 * (1.0 + value.abs()));
}

#[test]
fn process_backend_reports_spawn_failure() {
    let prog = ConicProgram {
        obj: vec![1.0],
        rows: vec![vec![(0, 1.0)]],
        rhs: vec![1.0],
        cones: vec![ConeSpec::Nonneg { dim: 1 }],
    };
    let backend = JsonProcessBackend { command: "/nonexistent/solver/binary".into() };
    assert!(backend.solve(&prog, &SolveOptions::default()).is_err());
}

#[test]
fn malformed_programs_are_rejected() {
    let prog = ConicProgram {
        obj: vec![1.0],
        rows: vec![vec![(3, 1.0)]],
        rhs: vec![1.0],
        cones: vec![ConeSpec::Nonneg { dim: 1 }],
    };
    assert!(solve(&prog, &SolveOptions::default()).is_err());
}
