//! Order finding for 37 mod 57, exact and with gate noise.
use qdistill::circuits::{
    conventional_iqft, generalized_iqft, post_process_order, shor57_circuit, shor_counting_dist,
    OrderFindingOutcome,
};
use qdistill::metrics::bhattacharyya;
use qdistill::qsim::{measure_dist, run_circuit, run_noisy, NoiseModel, StateVector};

fn main() -> qdistill::Result<()> {
    let conv = shor57_circuit(&conventional_iqft(4)?)?;
    let gen = shor57_circuit(&generalized_iqft(4)?)?;
    let zero = StateVector::zero(conv.n());
    let ideal = shor_counting_dist(&measure_dist(&run_circuit(&conv, &zero)?))?;
    println!("ideal support {:?}", ideal.support(1e-12));

    for k in ideal.support(1e-12) {
        match post_process_order(k as u64, 4, 37, 57) {
            OrderFindingOutcome::Factors { order, factors } => {
                println!("outcome {k:04b}: order {order}, 57 = {} x {}", factors.0, factors.1)
            }
            other => println!("outcome {k:04b}: {other:?}"),
        }
    }

    let noise = NoiseModel::new(0.001, 0.02, 0.0)?;
    for (name, c) in [("conventional", &conv), ("generalized", &gen)] {
        let p = shor_counting_dist(&run_noisy(c, &zero, &noise, 8192, 11)?)?;
        println!(
            "{name:<12} B vs ideal {:.4}  P(0)+P(8) {:.4}",
            bhattacharyya(&p, &ideal)?,
            p.probs()[0] + p.probs()[8]
        );
    }
    Ok(())
}
