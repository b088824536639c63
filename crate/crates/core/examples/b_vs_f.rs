//! Output-distribution overlap against gate fidelity for the generalized IQFT.
use qdistill::circuits::generalized_iqft;
use qdistill::metrics::{b_ave, gate_fidelity, EvalMode, Target};
use qdistill::qsim::unitary_of;

fn main() -> qdistill::Result<()> {
    println!("n  B_ave   F");
    for n in 2..=6 {
        let (c, t) = (generalized_iqft(n)?, Target::iqft(n)?);
        let r = b_ave(&c, &t, 20, EvalMode::Exact, 1)?;
        let f = gate_fidelity(&unitary_of(&c)?, &unitary_of(t.reference())?)?;
        println!("{n}  {:.4}  {f:.4}", r.b_ave()?);
    }
    Ok(())
}
