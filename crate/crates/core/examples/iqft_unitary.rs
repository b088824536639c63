//! Builds both inverse-QFT variants and compares them with the exact transform.
use qdistill::circuits::{conventional_iqft, gate_count, generalized_iqft, CountConvention};
use qdistill::metrics::{gate_fidelity, Target};
use qdistill::qsim::unitary_of;

fn main() -> qdistill::Result<()> {
    println!("n  conv(abs/dec)  gen(abs/dec)  F(conv)  F(gen)");
    for n in 1..=6 {
        let exact = Target::iqft(n)?;
        let reference = unitary_of(exact.reference())?;
        let conv = conventional_iqft(n)?;
        let gen = generalized_iqft(n)?;
        let f = |c: &qdistill::qsim::Circuit| gate_fidelity(&unitary_of(c)?, &reference);
        println!(
            "{n}  {:>4}/{:<4}      {:>4}/{:<4}     {:.4}   {:.4}",
            gate_count(&conv, CountConvention::Abstract),
            gate_count(&conv, CountConvention::Decomposed),
            gate_count(&gen, CountConvention::Abstract),
            gate_count(&gen, CountConvention::Decomposed),
            f(&conv)?,
            f(&gen)?,
        );
    }
    Ok(())
}
