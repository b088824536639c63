//! One tree search from the empty circuit with a uniform prior.
use qdistill::distiller::{mcts_policy, ActionSpace, MctsConfig, PolicyValue};
use qdistill::metrics::Target;

struct Uniform(usize);

impl PolicyValue for Uniform {
    fn predict(&self, _state: &[u16]) -> qdistill::Result<(Vec<f64>, f64)> {
        Ok((vec![-(self.0 as f64).ln(); self.0], 0.0))
    }
}

fn main() -> qdistill::Result<()> {
    let n = 2;
    let space = ActionSpace::new(n)?;
    let config = MctsConfig { sims_per_move: 400, ..MctsConfig::for_qubits(n) };
    let root = space.circuit(&[])?;
    let pi = mcts_policy(&root, &Target::iqft(n)?, &Uniform(space.len()), &config)?;
    for (a, p) in pi.iter().enumerate() {
        println!("{:<16} {p:.4}", space.gate(a).to_string());
    }
    Ok(())
}
