//! Fits the policy/value network to a handful of fixed examples, then
//! round-trips it through a checkpoint.
use qdistill::distiller::TrainingExample;
use qdistill::neuralnet::{checkpoint_load, checkpoint_save, DualNet, NetConfig, TrainConfig, TrainMode};

fn main() -> qdistill::Result<()> {
    let (g, max_len) = (6, 4);
    let net_cfg = NetConfig { channels: 32, seed: 1, ..NetConfig::new(g, max_len) };
    let mut net = DualNet::new(net_cfg)?;
    println!("{} parameters", net.num_params());

    let batch: Vec<TrainingExample> = (0..4u16)
        .map(|i| {
            let mut pi = vec![0.0; g];
            pi[i as usize] = 0.75;
            pi[(i as usize + 1) % g] = 0.25;
            TrainingExample {
                state: vec![i + 1, 0, 0, 0],
                pi,
                z: if i % 2 == 0 { 1.0 } else { -1.0 },
            }
        })
        .collect();
    let train = TrainConfig { batch_size: 4, ..TrainConfig::default() };
    let plain = TrainMode { dropout: 0.0, seed: 0 };
    for step in 0..=600 {
        if step % 100 == 0 {
            println!("step {step:>4}  loss {:.5}", net.batch_loss(&batch, plain)?);
        }
        net.train_step(&batch, &train)?;
    }

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("net.ckpt");
    checkpoint_save(&net, &path)?;
    let back = checkpoint_load(&path)?;
    let same = batch.iter().all(|ex| net.predict(&ex.state).ok() == back.predict(&ex.state).ok());
    println!("checkpoint round trip identical: {same}");
    Ok(())
}
