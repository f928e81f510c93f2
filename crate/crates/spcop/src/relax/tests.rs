use super::*;
use crate::poly::{LinearConstraints, ProblemFile};
use crate::sdp::{self, SolveOptions, Status};
use nalgebra::DVector;

fn load(name: &str) -> ProblemInstance {
    let path = format!("{}/../../problems/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(path).unwrap();
    ProblemFile::from_json(&text).unwrap().to_instance().unwrap()
}

fn solve(prog: &ConicProgram) -> crate::sdp::ConicSolution {
    sdp::solve(prog, &SolveOptions::default()).unwrap()
}

#[test]
fn quartic_chain_moment_value_is_four() {
    let inst = load("quartic_chain3");
    let relax = build_sparse_moment_sdp(&inst, 2).unwrap();
    let sol = solve(&relax.program);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective - 4.0).abs() < 1e-5, "got {}", sol.primal_objective);
    let dec = relax.decode(&sol);
    assert!((dec.y.constant() - 1.0).abs() < 1e-6);
    // π(y*) = (1,1,1)
    let pt = dec.y.project_point();
    for v in &pt {
        assert!((v - 1.0).abs() < 1e-4, "π(y*) = {:?}", pt);
    }
    assert!(relax.tie_residual(&sol) < 1e-6);
    // block moment matrices are 6×6 = C(4,2)
    assert_eq!(relax.psd_blocks[0].symbolic.side(), 6);
}

#[test]
fn quartic_chain_sos_value_and_certificate() {
    let inst = load("quartic_chain3");
    let relax = build_sparse_sos_sdp(&inst, 2).unwrap();
    let sol = solve(&relax.program);
    assert_eq!(sol.status, Status::Optimal);
    let cert = relax.decode(&sol);
    // max γ posed as min −γ
    assert!((cert.gamma - 4.0).abs() < 1e-5, "γ = {}", cert.gamma);
    assert!((sol.primal_objective + 4.0).abs() < 1e-5);
    // reconstructed decomposition matches f coefficient-wise
    assert!(cert.reconstruction_residual(&inst) < 1e-6);
    // Gram blocks are PSD
    for (_, _, _, g) in &cert.grams {
        assert!(g.clone().symmetric_eigen().eigenvalues.min() >= -1e-7);
    }
}

#[test]
fn weak_duality_on_worked_instances() {
    for (name, k) in [("quartic_chain3", 2), ("bilinear_chain4", 2), ("quartic_triple", 2)] {
        let inst = load(name);
        let mom = build_sparse_moment_sdp(&inst, k).unwrap();
        let sos = build_sparse_sos_sdp(&inst, k).unwrap();
        let f_smo = solve(&mom.program).primal_objective;
        let f_spa = -solve(&sos.program).primal_objective;
        assert!(
            f_spa <= f_smo + 1e-6 * (1.0 + f_smo.abs()),
            "{}: f_spa {} vs f_smo {}",
            name,
            f_spa,
            f_smo
        );
    }
}

#[test]
fn univariate_boundary_moment_value() {
    let inst = load("univariate_boundary");
    let relax = build_sparse_moment_sdp(&inst, 2).unwrap();
    let sol = solve(&relax.program);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.primal_objective + 1.0).abs() < 1e-5, "got {}", sol.primal_objective);
}

#[test]
fn single_block_sparse_equals_dense() {
    // on a single-block instance the sparse construction degenerates to the
    // dense one (without the equality ideal refinement)
    let n = 2;
    let f = Polynomial::parse("x1^2 + x2^2 - x1*x2 - x1", n).unwrap();
    let cons = LinearConstraints::new(
        DMatrix::zeros(0, n),
        DVector::zeros(0),
        DMatrix::from_row_slice(1, n, &[1.0, 1.0]),
        DVector::from_vec(vec![1.0]),
    )
    .unwrap();
    let inst =
        ProblemInstance::from_total_objective(SparsityPattern::dense(n), &f, cons).unwrap();
    let sparse = build_sparse_moment_sdp(&inst, 2).unwrap();
    let dense = build_dense_moment_sdp(&inst, 2).unwrap();
    let vs = solve(&sparse.program).primal_objective;
    let vd = solve(&dense.program).primal_objective;
    // dense adds the Cx−d localizer, so it can only be tighter
    assert!(vs <= vd + 1e-6, "sparse {} dense {}", vs, vd);
    assert!((vs - vd).abs() < 1e-6, "sparse {} dense {}", vs, vd);
}

#[test]
fn dense_cycle5_order1_is_unbounded() {
    // At k = 1 the quadratic module contributes no products x_i·x_j, and an
    // explicit PSD ray W = wwᵀ with W·1 = W·s = 0 and negative cyclic sum
    // keeps all order-1 constraints while driving ⟨f, y⟩ to −∞ (w lives in
    // the negative eigenspace of the 5-cycle adjacency matrix, orthogonal
    // to both equality rows). The order-1 dense relaxation is therefore
    // unbounded below; order 2 is the first bounded dense order.
    let inst = load("cycle5");
    let relax = build_dense_moment_sdp(&inst, 1).unwrap();
    let sol = solve(&relax.program);
    assert_eq!(sol.status, Status::DualInfeasible);
    let relax2 = build_dense_moment_sdp(&inst, 2).unwrap();
    let sol2 = solve(&relax2.program);
    assert!(
        sol2.primal_objective > -1e-4,
        "dense order-2 bound {}",
        sol2.primal_objective
    );
}

#[test]
fn sparse_cycle5_order1_is_unbounded() {
    // at order 1 no nonnegative product information ties the blocks, so the
    // moment program is unbounded below and the SOS program infeasible
    let inst = load("cycle5");
    let mom = build_sparse_moment_sdp(&inst, 1).unwrap();
    let sol = solve(&mom.program);
    assert_eq!(sol.status, Status::DualInfeasible);
    let sos = build_sparse_sos_sdp(&inst, 1).unwrap();
    let sol = solve(&sos.program);
    assert_eq!(sol.status, Status::PrimalInfeasible);
}

#[test]
fn constant_objective_reaches_gamma_equals_c() {
    let n = 2;
    let f = Polynomial::constant(n, 2.5);
    let inst = ProblemInstance::from_total_objective(
        SparsityPattern::dense(n),
        &f,
        LinearConstraints::none(n),
    )
    .unwrap();
    let sos = build_sparse_sos_sdp(&inst, 1).unwrap();
    let sol = solve(&sos.program);
    assert_eq!(sol.status, Status::Optimal);
    assert!((-sol.primal_objective - 2.5).abs() < 1e-6);
}

#[test]
fn order_below_k0_is_rejected() {
    let inst = load("quartic_chain3");
    assert!(matches!(
        build_sparse_moment_sdp(&inst, 1),
        Err(RelaxError::OrderTooSmall { k: 1, k0: 2 })
    ));
}

#[test]
fn size_report_matches_window_benchmarks() {
    use crate::bench::cyclic_pattern;
    // representative (n, m, w, expected |U_2|) rows
    for (n, m, w, expect) in [
        (20usize, 20usize, 3usize, 401usize),
        (20, 10, 5, 911),
        (30, 15, 6, 2101),
        (50, 25, 8, 7126),
        (100, 50, 5, 4551),
    ] {
        let pattern = cyclic_pattern(n, m, w).unwrap();
        let mut objectives = Vec::new();
        for i in 0..pattern.num_blocks() {
            let vars = pattern.block(i).to_vec();
            let mut f = Polynomial::zero(n);
            f.add_term(Monomial::var(n, vars[0]).mul(&Monomial::var(n, vars[1])), 1.0);
            objectives.push(f);
        }
        let inst =
            ProblemInstance::new(pattern, objectives, LinearConstraints::none(n)).unwrap();
        let report = relaxation_sizes(&inst, 2);
        assert_eq!(report.sparse_dim, expect, "(n,m,w)=({},{},{})", n, m, w);
        assert_eq!(report.dense_dim, basis_size(n, 4));
        assert_eq!(report.block_sides[0], (basis_size(w, 2) as usize, basis_size(w, 1) as usize));
    }
}

#[test]
fn moment_block_sides_match_basis_counts() {
    use crate::bench::cyclic_pattern;
    let pattern = cyclic_pattern(20, 20, 3).unwrap();
    let mut objectives = Vec::new();
    for i in 0..20 {
        let vars = pattern.block(i).to_vec();
        let mut f = Polynomial::zero(20);
        f.add_term(Monomial::var(20, vars[0]).mul(&Monomial::var(20, vars[1])), 1.0);
        objectives.push(f);
    }
    let inst = ProblemInstance::new(pattern, objectives, LinearConstraints::none(20)).unwrap();
    let relax = build_sparse_moment_sdp(&inst, 2).unwrap();
    assert_eq!(relax.labels.len(), 401);
    // moment side C(5,2) = 10, localizing side C(4,1) = 4
    assert_eq!(relax.psd_blocks[0].symbolic.side(), 10);
    assert_eq!(relax.psd_blocks[1].symbolic.side(), 4);
}
