//! Average output overlap of both 4-qubit inverse-QFT variants under noise.
use qdistill::circuits::{conventional_iqft, generalized_iqft};
use qdistill::metrics::{b_ave, bootstrap_se, EvalMode, Target};
use qdistill::qsim::NoiseModel;

fn main() -> qdistill::Result<()> {
    let n = 4;
    let target = Target::iqft(n)?;
    let conv = conventional_iqft(n)?.decomposed();
    let gen = generalized_iqft(n)?.decomposed();
    println!("p2      B(conv)          B(gen)");
    for p2 in [0.0, 0.005, 0.01, 0.02, 0.05] {
        let noise = NoiseModel::new(p2 / 10.0, p2, 0.0)?;
        let mode = EvalMode::Sampled { shots: 2048, noise };
        let mut cells = Vec::new();
        for c in [&conv, &gen] {
            let r = b_ave(c, &target, 20, mode, 3)?;
            cells.push(format!("{:.4}±{:.4}", r.b_ave()?, bootstrap_se(&r.values(), 500, 9)?));
        }
        println!("{p2:<7} {}  {}", cells[0], cells[1]);
    }
    Ok(())
}
