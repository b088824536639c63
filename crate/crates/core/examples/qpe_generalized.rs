//! Phase estimation with the conventional and generalized inverse QFT.
use qdistill::circuits::{conventional_iqft, generalized_iqft, qpe_circuit, qpe_generalized_oracle};
use qdistill::qsim::{measure_dist, run_circuit, StateVector};

fn main() -> qdistill::Result<()> {
    let n = 4;
    let theta: f64 = std::env::args().nth(1).map_or(5.0 / 16.0, |s| s.parse().expect("theta"));
    let run = |iqft| -> qdistill::Result<_> {
        let c = qpe_circuit(n, theta, &iqft)?;
        Ok(measure_dist(&run_circuit(&c, &StateVector::zero(n))?))
    };
    let conv = run(conventional_iqft(n)?)?;
    let gen = run(generalized_iqft(n)?)?;
    let oracle = qpe_generalized_oracle(n, theta)?;

    println!("theta = {theta}");
    println!("k     bits  conventional  generalized  oracle");
    for k in 0..1 << n {
        println!(
            "{k:<5} {k:04b}  {:.6}      {:.6}     {:.6}",
            conv.probs()[k],
            gen.probs()[k],
            oracle.probs()[k]
        );
    }
    println!("argmax conventional {:?}", conv.argmax_set(1e-9));
    println!("argmax generalized  {:?}", gen.argmax_set(1e-9));
    println!("max |gen - oracle|  {:.2e}", gen.max_abs_diff(&oracle)?);
    Ok(())
}
