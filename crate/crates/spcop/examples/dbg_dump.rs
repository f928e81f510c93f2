// Dumps a built relaxation in interchange JSON (debugging aid).
use spcop::poly::ProblemFile;
use spcop::relax;

fn main() {
    let name = std::env::args().nth(1).unwrap();
    let k: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2);
    let kind = std::env::args().nth(3).unwrap_or_default();
    let out = std::env::args().nth(4).unwrap_or("/tmp/prog.json".into());
    let path = format!("{}/problems/{}.json", env!("CARGO_MANIFEST_DIR").replace("/crates/spcop", ""), name);
    let text = std::fs::read_to_string(path).unwrap();
    let inst = ProblemFile::from_json(&text).unwrap().to_instance().unwrap();
    let prog = match kind.as_str() {
        "dense" => relax::build_dense_moment_sdp(&inst, k).unwrap().program,
        "densesos" => relax::build_dense_sos_sdp(&inst, k).unwrap().program,
        "sos" => relax::build_sparse_sos_sdp(&inst, k).unwrap().program,
        _ => relax::build_sparse_moment_sdp(&inst, k).unwrap().program,
    };
    std::fs::write(&out, serde_json::to_string(&prog.to_interchange()).unwrap()).unwrap();
    eprintln!("wrote {} ({} vars, {} rows)", out, prog.num_vars(), prog.num_rows());
}
