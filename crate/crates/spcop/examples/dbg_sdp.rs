// Scratch driver for solver debugging (not part of the library API).
use spcop::poly::ProblemFile;
use spcop::relax;
use spcop::sdp::{self, SolveOptions};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "univariate_boundary".into());
    let k: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let dense = std::env::args().nth(3).unwrap_or_default();
    let path = format!("{}/problems/{}.json", env!("CARGO_MANIFEST_DIR").replace("/crates/spcop", ""), name);
    let text = std::fs::read_to_string(path).unwrap();
    let inst = ProblemFile::from_json(&text).unwrap().to_instance().unwrap();
    let opts = SolveOptions { verbose: true, ..Default::default() };
    let prog = match dense.as_str() {
        "dense" => relax::build_dense_moment_sdp(&inst, k).unwrap().program,
        "densesos" => relax::build_dense_sos_sdp(&inst, k).unwrap().program,
        "sos" => relax::build_sparse_sos_sdp(&inst, k).unwrap().program,
        _ => relax::build_sparse_moment_sdp(&inst, k).unwrap().program,
    };
    let t0 = std::time::Instant::now();
    let sol = sdp::solve(&prog, &opts).unwrap();
    println!("status {:?} pobj {} iters {} time {:.2}s", sol.status, sol.primal_objective, sol.iterations, t0.elapsed().as_secs_f64());
}
