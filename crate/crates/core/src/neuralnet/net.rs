use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distiller::{PolicyValue, TrainingExample};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

use super::layers::*;
use super::TrainConfig;

/// Shape of a [`DualNet`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetConfig {
    /// Number of actions.
    pub g: usize,
    /// Length of the encoded circuit.
    pub max_len: usize,
    pub channels: usize,
    pub conv_layers: usize,
    pub leaky_slope: f64,
    /// Initialisation and dropout seed.
    pub seed: u64,
}

impl NetConfig {
    pub fn new(g: usize, max_len: usize) -> Self {
        NetConfig {
            g,
            max_len,
            channels: 256,
            conv_layers: 5,
            leaky_slope: 0.01,
            seed: 0,
        }
    }

    /// Sequence length seen by the convolutions: the encoding zero padded to
    /// at least `g` so the flattened trunk input is `channels * g` wide.
    pub fn seq_len(&self) -> usize {
        self.max_len.max(self.g)
    }

    /// One-hot symbols: empty slot plus one per action.
    pub fn in_channels(&self) -> usize {
        self.g + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.g == 0 || self.max_len == 0 || self.channels == 0 || self.conv_layers == 0 {
            return Err(Error::InvalidConfig(
                "network dimensions must be positive".into(),
            ));
        }
        if self.g >= u16::MAX as usize {
            return Err(Error::InvalidConfig("too many actions".into()));
        }
        Ok(())
    }
}

/// A named parameter or buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    fn zeros(name: String, shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Tensor {
            name,
            shape,
            data: vec![0.0; len],
        }
    }

    fn filled(name: String, shape: Vec<usize>, v: f64) -> Self {
        let mut t = Tensor::zeros(name, shape);
        t.data.iter_mut().for_each(|x| *x = v);
        t
    }
}

/// Dual policy/value network: a convolution stack over the one-hot circuit
/// encoding, two fully connected layers, a log-softmax policy head and a
/// tanh value head.
///
/// Parameters and batch-norm statistics are kept at `f32` precision so a
/// checkpoint round trip is exact; arithmetic is `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualNet {
    pub(crate) cfg: NetConfig,
    pub(crate) params: Vec<Tensor>,
    pub(crate) buffers: Vec<Tensor>,
    adam_m: Vec<Vec<f64>>,
    adam_v: Vec<Vec<f64>>,
    pub(crate) steps: u64,
}

/// Dropout rate and mask seed for a training-mode pass.
#[derive(Debug, Clone, Copy)]
pub struct TrainMode {
    pub dropout: f64,
    pub seed: u64,
}

struct Tape {
    conv_in: Vec<Vec<f64>>,
    conv_bn: Vec<BnCache>,
    conv_pre: Vec<Vec<f64>>,
    fc_in: [Vec<f64>; 2],
    fc_bn: Vec<BnCache>,
    fc_pre: [Vec<f64>; 2],
    masks: [Vec<f64>; 2],
    trunk: Vec<f64>,
}

struct Output {
    logp: Vec<f64>,
    v: Vec<f64>,
    tape: Option<Tape>,
}

fn round32(v: &mut [f64]) {
    v.iter_mut().for_each(|x| *x = *x as f32 as f64);
}

impl DualNet {
    pub fn new(cfg: NetConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0x1417));
        let c = cfg.channels;
        let g = cfg.g;
        let gain = 2.0 / (1.0 + cfg.leaky_slope * cfg.leaky_slope);
        let mut params = Vec::new();
        let mut buffers = Vec::new();
        // layers feeding batch norm carry no bias: the normalisation removes it
        let mut dense = |params: &mut Vec<Tensor>, name: &str, shape: Vec<usize>, fan_in: usize, bias: bool| {
            let wb = (3.0 * gain / fan_in as f64).sqrt();
            let bb = 1.0 / (fan_in as f64).sqrt();
            let mut w = Tensor::zeros(format!("{name}.weight"), shape.clone());
            w.data.iter_mut().for_each(|x| *x = rng.gen_range(-wb..wb));
            params.push(w);
            if bias {
                let mut b = Tensor::zeros(format!("{name}.bias"), vec![shape[0]]);
                b.data.iter_mut().for_each(|x| *x = rng.gen_range(-bb..bb));
                params.push(b);
            }
        };
        let bn = |params: &mut Vec<Tensor>, buffers: &mut Vec<Tensor>, name: &str, c: usize| {
            params.push(Tensor::filled(format!("{name}.weight"), vec![c], 1.0));
            params.push(Tensor::zeros(format!("{name}.bias"), vec![c]));
            buffers.push(Tensor::zeros(format!("{name}.running_mean"), vec![c]));
            buffers.push(Tensor::filled(format!("{name}.running_var"), vec![c], 1.0));
        };
        let mut cin = cfg.in_channels();
        for i in 0..cfg.conv_layers {
            dense(&mut params, &format!("conv{i}"), vec![c, cin, 3], cin * 3, false);
            bn(&mut params, &mut buffers, &format!("conv{i}.bn"), c);
            cin = c;
        }
        let flat = c * cfg.seq_len();
        dense(&mut params, "fc1", vec![4 * g, flat], flat, false);
        bn(&mut params, &mut buffers, "fc1.bn", 4 * g);
        dense(&mut params, "fc2", vec![2 * g, 4 * g], 4 * g, false);
        bn(&mut params, &mut buffers, "fc2.bn", 2 * g);
        dense(&mut params, "policy", vec![g, 2 * g], 2 * g, true);
        dense(&mut params, "value", vec![1, 2 * g], 2 * g, true);
        params.iter_mut().for_each(|t| round32(&mut t.data));
        Ok(DualNet::from_parts(cfg, params, buffers))
    }

    pub(crate) fn from_parts(cfg: NetConfig, params: Vec<Tensor>, buffers: Vec<Tensor>) -> Self {
        let zeros: Vec<Vec<f64>> = params.iter().map(|t| vec![0.0; t.data.len()]).collect();
        DualNet {
            cfg,
            params,
            buffers,
            adam_m: zeros.clone(),
            adam_v: zeros,
            steps: 0,
        }
    }

    pub fn config(&self) -> &NetConfig {
        &self.cfg
    }

    pub fn params(&self) -> &[Tensor] {
        &self.params
    }

    /// Mutable access for diagnostics such as finite-difference checks.
    pub fn params_mut(&mut self) -> &mut [Tensor] {
        &mut self.params
    }

    pub fn buffers(&self) -> &[Tensor] {
        &self.buffers
    }

    pub fn num_params(&self) -> usize {
        self.params.iter().map(|t| t.data.len()).sum()
    }

    /// Number of completed training steps.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn one_hot(&self, states: &[&[u16]]) -> Result<Vec<f64>> {
        let (c0, l) = (self.cfg.in_channels(), self.cfg.seq_len());
        let mut x = vec![0.0; states.len() * c0 * l];
        for (b, s) in states.iter().enumerate() {
            if s.len() != self.cfg.max_len {
                return Err(Error::ShapeMismatch(format!(
                    "state of length {} for a network expecting {}",
                    s.len(),
                    self.cfg.max_len
                )));
            }
            for p in 0..l {
                let sym = s.get(p).copied().unwrap_or(0) as usize;
                if sym > self.cfg.g {
                    return Err(Error::ShapeMismatch(format!(
                        "symbol {sym} exceeds action count {}",
                        self.cfg.g
                    )));
                }
                x[(b * c0 + sym) * l + p] = 1.0;
            }
        }
        Ok(x)
    }

    fn forward(&self, states: &[&[u16]], mode: Option<TrainMode>) -> Result<Output> {
        let cfg = &self.cfg;
        let (b, l, c, g) = (states.len(), cfg.seq_len(), cfg.channels, cfg.g);
        let slope = cfg.leaky_slope;
        let p = &self.params;
        let train = mode.is_some();
        let mut tape = Tape {
            conv_in: Vec::new(),
            conv_bn: Vec::new(),
            conv_pre: Vec::new(),
            fc_in: [Vec::new(), Vec::new()],
            fc_bn: Vec::new(),
            fc_pre: [Vec::new(), Vec::new()],
            masks: [Vec::new(), Vec::new()],
            trunk: Vec::new(),
        };
        let mut x = self.one_hot(states)?;
        let zero_c = vec![0.0; c];
        let mut cin = cfg.in_channels();
        for i in 0..cfg.conv_layers {
            let k = 3 * i;
            let y = conv_fwd(&x, b, cin, c, l, &p[k].data, &zero_c);
            let mut z = if train {
                let (z, cache) = bn_train(&y, b, c, l, &p[k + 1].data, &p[k + 2].data);
                tape.conv_bn.push(cache);
                z
            } else {
                bn_eval(&y, b, c, l, &p[k + 1].data, &p[k + 2].data, &self.buffers[2 * i].data, &self.buffers[2 * i + 1].data)
            };
            if train {
                tape.conv_pre.push(z.clone());
                tape.conv_in.push(std::mem::take(&mut x));
            }
            leaky(&mut z, slope);
            x = z;
            cin = c;
        }
        let widths = [(c * l, 4 * g), (4 * g, 2 * g)];
        for (j, &(fin, fout)) in widths.iter().enumerate() {
            let k = 3 * cfg.conv_layers + 3 * j;
            let bi = 2 * (cfg.conv_layers + j);
            let y = linear_fwd(&x, b, fin, fout, &p[k].data, &vec![0.0; fout]);
            let mut z = if train {
                let (z, cache) = bn_train(&y, b, fout, 1, &p[k + 1].data, &p[k + 2].data);
                tape.fc_bn.push(cache);
                z
            } else {
                bn_eval(&y, b, fout, 1, &p[k + 1].data, &p[k + 2].data, &self.buffers[bi].data, &self.buffers[bi + 1].data)
            };
            if let Some(m) = mode {
                tape.fc_pre[j] = z.clone();
                tape.fc_in[j] = std::mem::take(&mut x);
                leaky(&mut z, slope);
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(m.seed, j as u64));
                let keep = 1.0 - m.dropout;
                let mask: Vec<f64> = (0..z.len())
                    .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
                    .collect();
                z.iter_mut().zip(&mask).for_each(|(a, m)| *a *= m);
                tape.masks[j] = mask;
            } else {
                leaky(&mut z, slope);
            }
            x = z;
        }
        let k = 3 * cfg.conv_layers + 6;
        let logits = linear_fwd(&x, b, 2 * g, g, &p[k].data, &p[k + 1].data);
        let logp: Vec<f64> = logits.chunks(g).flat_map(log_softmax).collect();
        let v: Vec<f64> = linear_fwd(&x, b, 2 * g, 1, &p[k + 2].data, &p[k + 3].data)
            .into_iter()
            .map(f64::tanh)
            .collect();
        if train {
            tape.trunk = x;
        }
        Ok(Output {
            logp,
            v,
            tape: train.then_some(tape),
        })
    }

    /// Inference-mode log-policy and value for one encoded circuit.
    pub fn predict(&self, state: &[u16]) -> Result<(Vec<f64>, f64)> {
        let out = self.forward(&[state], None)?;
        Ok((out.logp, out.v[0]))
    }

    /// Inference-mode outputs for several states.
    pub fn predict_batch(&self, states: &[&[u16]]) -> Result<Vec<(Vec<f64>, f64)>> {
        let out = self.forward(states, None)?;
        let g = self.cfg.g;
        Ok(out
            .logp
            .chunks(g)
            .zip(out.v)
            .map(|(q, v)| (q.to_vec(), v))
            .collect())
    }

    fn check_batch(&self, batch: &[TrainingExample]) -> Result<()> {
        if batch.is_empty() {
            return Err(Error::EmptyAverage);
        }
        if let Some(e) = batch.iter().find(|e| e.pi.len() != self.cfg.g) {
            return Err(Error::ShapeMismatch(format!(
                "policy target of length {} for {} actions",
                e.pi.len(),
                self.cfg.g
            )));
        }
        Ok(())
    }

    /// Mean training-mode loss over `batch`.
    pub fn batch_loss(&self, batch: &[TrainingExample], mode: TrainMode) -> Result<f64> {
        self.check_batch(batch)?;
        let states: Vec<&[u16]> = batch.iter().map(|e| e.state.as_slice()).collect();
        let out = self.forward(&states, Some(mode))?;
        Ok(mean_loss(&out.logp, &out.v, batch, self.cfg.g))
    }

    /// Mean inference-mode loss over `batch`.
    pub fn eval_loss(&self, batch: &[TrainingExample]) -> Result<f64> {
        self.check_batch(batch)?;
        let states: Vec<&[u16]> = batch.iter().map(|e| e.state.as_slice()).collect();
        let out = self.forward(&states, None)?;
        Ok(mean_loss(&out.logp, &out.v, batch, self.cfg.g))
    }

    /// Mean training-mode loss and its gradient for every parameter tensor.
    pub fn loss_and_gradients(&self, batch: &[TrainingExample], mode: TrainMode) -> Result<(f64, Vec<Vec<f64>>)> {
        let (loss, grads, _) = self.backward(batch, mode)?;
        Ok((loss, grads))
    }

    fn backward(&self, batch: &[TrainingExample], mode: TrainMode) -> Result<(f64, Vec<Vec<f64>>, Tape)> {
        self.check_batch(batch)?;
        let cfg = &self.cfg;
        let (b, l, c, g) = (batch.len(), cfg.seq_len(), cfg.channels, cfg.g);
        let slope = cfg.leaky_slope;
        let p = &self.params;
        let states: Vec<&[u16]> = batch.iter().map(|e| e.state.as_slice()).collect();
        let out = self.forward(&states, Some(mode))?;
        let tape = out.tape.expect("training pass records a tape");
        let loss = mean_loss(&out.logp, &out.v, batch, g);
        let mut grads: Vec<Vec<f64>> = p.iter().map(|t| vec![0.0; t.data.len()]).collect();
        let bf = b as f64;

        let mut dlogits = vec![0.0; b * g];
        let mut du = vec![0.0; b];
        for (i, ex) in batch.iter().enumerate() {
            let mass: f64 = ex.pi.iter().sum();
            for a in 0..g {
                dlogits[i * g + a] = (out.logp[i * g + a].exp() * mass - ex.pi[a]) / bf;
            }
            let v = out.v[i];
            du[i] = -2.0 * (ex.z - v) * (1.0 - v * v) / bf;
        }
        let k = 3 * cfg.conv_layers + 6;
        let (mut dx, dw, db) = linear_bwd(&dlogits, &tape.trunk, b, 2 * g, g, &p[k].data);
        grads[k] = dw;
        grads[k + 1] = db;
        let (dxv, dw, db) = linear_bwd(&du, &tape.trunk, b, 2 * g, 1, &p[k + 2].data);
        grads[k + 2] = dw;
        grads[k + 3] = db;
        dx.iter_mut().zip(dxv).for_each(|(a, d)| *a += d);

        let widths = [(c * l, 4 * g), (4 * g, 2 * g)];
        for j in (0..2).rev() {
            let (fin, fout) = widths[j];
            let k = 3 * cfg.conv_layers + 3 * j;
            dx.iter_mut().zip(&tape.masks[j]).for_each(|(a, m)| *a *= m);
            leaky_bwd(&mut dx, &tape.fc_pre[j], slope);
            let (dy, dgam, dbet) = bn_bwd(&dx, &tape.fc_bn[j], b, fout, 1, &p[k + 1].data);
            grads[k + 1] = dgam;
            grads[k + 2] = dbet;
            let (dxi, dw, _) = linear_bwd(&dy, &tape.fc_in[j], b, fin, fout, &p[k].data);
            grads[k] = dw;
            dx = dxi;
        }
        for i in (0..cfg.conv_layers).rev() {
            let k = 3 * i;
            let cin = if i == 0 { cfg.in_channels() } else { c };
            leaky_bwd(&mut dx, &tape.conv_pre[i], slope);
            let (dy, dgam, dbet) = bn_bwd(&dx, &tape.conv_bn[i], b, c, l, &p[k + 1].data);
            grads[k + 1] = dgam;
            grads[k + 2] = dbet;
            let (dxi, dw, _) = conv_bwd(&dy, &tape.conv_in[i], b, cin, c, l, &p[k].data, i > 0);
            grads[k] = dw;
            dx = dxi;
        }
        Ok((loss, grads, tape))
    }

    /// One Adam step on the mean loss of `batch` with dropout active;
    /// batch-norm running statistics are updated. Returns the loss before
    /// the step.
    pub fn train_step(&mut self, batch: &[TrainingExample], cfg: &TrainConfig) -> Result<f64> {
        cfg.validate()?;
        let mode = TrainMode {
            dropout: cfg.dropout,
            seed: derive_seed(self.cfg.seed, 0xD0 + self.steps),
        };
        let (loss, grads, tape) = self.backward(batch, mode)?;
        self.steps += 1;
        let t = self.steps as i32;
        let (b1, b2) = cfg.betas;
        let c1 = 1.0 - b1.powi(t);
        let c2 = 1.0 - b2.powi(t);
        for (i, g) in grads.iter().enumerate() {
            let (m, v) = (&mut self.adam_m[i], &mut self.adam_v[i]);
            let w = &mut self.params[i].data;
            for k in 0..g.len() {
                m[k] = b1 * m[k] + (1.0 - b1) * g[k];
                v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
                w[k] -= cfg.lr * (m[k] / c1) / ((v[k] / c2).sqrt() + cfg.eps);
            }
            round32(w);
        }
        let stats = tape.conv_bn.iter().chain(&tape.fc_bn);
        for (i, cache) in stats.enumerate() {
            for (buf, batch) in [(2 * i, &cache.mean), (2 * i + 1, &cache.var_unbiased)] {
                let r = &mut self.buffers[buf].data;
                r.iter_mut()
                    .zip(batch)
                    .for_each(|(a, x)| *a = (1.0 - BN_MOMENTUM) * *a + BN_MOMENTUM * x);
                round32(r);
            }
        }
        Ok(loss)
    }
}

fn mean_loss(logp: &[f64], v: &[f64], batch: &[TrainingExample], g: usize) -> f64 {
    batch
        .iter()
        .enumerate()
        .map(|(i, ex)| loss(&logp[i * g..(i + 1) * g], v[i], &ex.pi, ex.z))
        .sum::<f64>()
        / batch.len() as f64
}

/// `(z - v)^2 - Σ_a π(a) log q(a)`.
pub fn loss(log_q: &[f64], v: f64, pi: &[f64], z: f64) -> f64 {
    let ce: f64 = pi
        .iter()
        .zip(log_q)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, q)| p * q)
        .sum();
    (z - v).powi(2) - ce
}

impl PolicyValue for DualNet {
    fn predict(&self, state: &[u16]) -> Result<(Vec<f64>, f64)> {
        DualNet::predict(self, state)
    }

    fn train(&mut self, batch: &[TrainingExample], cfg: &TrainConfig) -> Result<Option<f64>> {
        self.train_step(batch, cfg).map(Some)
    }
}

/// Per-tensor `‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖, 1e-6)`
/// using central differences of step `h` on the training-mode loss.
pub fn gradient_check(net: &DualNet, batch: &[TrainingExample], mode: TrainMode, h: f64) -> Result<Vec<(String, f64)>> {
    let (_, grads) = net.loss_and_gradients(batch, mode)?;
    let mut probe = net.clone();
    let mut out = Vec::new();
    for (i, analytic) in grads.iter().enumerate() {
        let mut diff = 0.0;
        let mut na = 0.0;
        let mut nn = 0.0;
        for k in 0..analytic.len() {
            let orig = probe.params[i].data[k];
            probe.params[i].data[k] = orig + h;
            let up = probe.batch_loss(batch, mode)?;
            probe.params[i].data[k] = orig - h;
            let down = probe.batch_loss(batch, mode)?;
            probe.params[i].data[k] = orig;
            let numeric = (up - down) / (2.0 * h);
            diff += (analytic[k] - numeric).powi(2);
            na += analytic[k].powi(2);
            nn += numeric.powi(2);
        }
        let rel = diff.sqrt() / na.sqrt().max(nn.sqrt()).max(1e-6);
        out.push((net.params[i].name.clone(), rel));
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn mini() -> DualNet {
        DualNet::new(NetConfig {
            channels: 2,
            seed: 3,
            ..NetConfig::new(6, 4)
        })
        .unwrap()
    }

    pub(crate) fn examples(g: usize, max_len: usize) -> Vec<TrainingExample> {
        let mut out = Vec::new();
        for i in 0..4 {
            let mut state = vec![0u16; max_len];
            for (p, s) in state.iter_mut().enumerate().take(i % max_len + 1) {
                *s = ((i * 3 + p * 5) % g + 1) as u16;
            }
            let mut pi = vec![0.0; g];
            pi[i % g] = 0.7;
            pi[(i + 2) % g] = 0.3;
            out.push(TrainingExample {
                state,
                pi,
                z: if i % 2 == 0 { 1.0 } else { -1.0 },
            });
        }
        out
    }

    #[test]
    fn outputs_are_well_formed() {
        let net = mini();
        let (q, v) = net.predict(&[0, 0, 0, 0]).unwrap();
        assert_eq!(q.len(), 6);
        assert!((q.iter().map(|x| x.exp()).sum::<f64>() - 1.0).abs() < 1e-5);
        assert!((-1.0..=1.0).contains(&v));
        assert_eq!(net.predict(&[1, 2, 0, 0]).unwrap(), net.predict(&[1, 2, 0, 0]).unwrap());
        assert!(net.predict(&[0, 0, 0]).is_err());
        assert!(net.predict(&[7, 0, 0, 0]).is_err());
        assert_eq!(net.config().seq_len(), 6);
    }

    #[test]
    fn loss_examples() {
        let pi = [0.25, 0.75];
        let lq: Vec<f64> = pi.iter().map(|p: &f64| p.ln()).collect();
        let entropy = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((loss(&lq, 0.3, &pi, 0.3) - entropy).abs() < 1e-12);
        let g = 6;
        let uniform = vec![-(g as f64).ln(); g];
        let mut delta = vec![0.0; g];
        delta[2] = 1.0;
        assert!((loss(&uniform, 1.0, &delta, 1.0) - (g as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let net = mini();
        let batch = examples(6, 4);
        let mode = TrainMode { dropout: 0.3, seed: 17 };
        for (name, rel) in gradient_check(&net, &batch, mode, 1e-6).unwrap() {
            assert!(rel < 1e-4, "{name}: {rel}");
        }
    }

    #[test]
    fn zero_learning_rate_keeps_parameters() {
        let mut net = mini();
        let before = net.params().to_vec();
        let cfg = TrainConfig { lr: 0.0, ..TrainConfig::default() };
        net.train_step(&examples(6, 4), &cfg).unwrap();
        assert_eq!(net.params(), &before[..]);
    }

    #[test]
    fn training_is_deterministic() {
        let run = || {
            let mut net = mini();
            for _ in 0..5 {
                net.train_step(&examples(6, 4), &TrainConfig::default()).unwrap();
            }
            net
        };
        assert_eq!(run(), run());
        assert!(mini().train_step(&[], &TrainConfig::default()).is_err());
    }

    #[test]
    fn memorizes_one_example() {
        let mut net = DualNet::new(NetConfig {
            channels: 8,
            seed: 1,
            ..NetConfig::new(6, 4)
        })
        .unwrap();
        let mut pi = vec![0.0; 6];
        pi[4] = 1.0;
        let ex = TrainingExample {
            state: vec![1, 3, 0, 0],
            pi,
            z: 1.0,
        };
        let batch = vec![ex.clone(); 4];
        for _ in 0..500 {
            net.train_step(&batch, &TrainConfig::default()).unwrap();
        }
        let (q, v) = net.predict(&ex.state).unwrap();
        let arg = (0..6).max_by(|&a, &b| q[a].total_cmp(&q[b])).unwrap();
        assert_eq!(arg, 4);
        assert!(v > 0.9, "{v}");
    }
}
