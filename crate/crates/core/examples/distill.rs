//! Self-play distillation of the n-qubit inverse QFT (default n = 1).
//!
//! `cargo run --release --example distill -- 2` takes a few minutes.
use qdistill::distiller::{distill, ActionSpace, MctsConfig};
use qdistill::metrics::Target;
use qdistill::neuralnet::{DualNet, NetConfig, TrainConfig};

fn main() -> qdistill::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(1, |s| s.parse().expect("qubit count"));
    let target = Target::iqft(n)?;
    let search = MctsConfig { seed: 7, ..MctsConfig::for_qubits(n) };
    let g = ActionSpace::new(n)?.len();
    let mut net = DualNet::new(NetConfig { seed: 7, ..NetConfig::new(g, search.max_len) })?;
    let out = distill(&target, &search, &TrainConfig::default(), &mut net)?;

    for e in &out.history {
        println!("episode {:>3}  length {:>2}  z {:+.0}", e.episode, e.length, e.z);
    }
    println!("{} gates after {} episodes: {}", out.circuit.len(), out.episodes, out.circuit);
    println!("B_ave {:.6}", out.report.b_ave()?);
    Ok(())
}
