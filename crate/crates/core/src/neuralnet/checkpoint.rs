use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::layers::{BN_EPS, BN_MOMENTUM};
use super::net::{DualNet, NetConfig, Tensor};

const MAGIC: &str = "QDISTILL-DUALNET";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorSpec {
    name: String,
    shape: Vec<usize>,
}

/// Self-describing header written as one JSON line after the magic line.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    version: u32,
    g: usize,
    max_len: usize,
    seq_len: usize,
    /// True when the encoding was zero padded to reach `seq_len`.
    padded_to_g: bool,
    channels: usize,
    conv_layers: usize,
    leaky_slope: f64,
    bn_eps: f64,
    bn_momentum: f64,
    seed: u64,
    steps: u64,
    params: Vec<TensorSpec>,
    buffers: Vec<TensorSpec>,
}

fn specs(ts: &[Tensor]) -> Vec<TensorSpec> {
    ts.iter()
        .map(|t| TensorSpec {
            name: t.name.clone(),
            shape: t.shape.clone(),
        })
        .collect()
}

/// Writes `net` as a magic line, a JSON header line and a little-endian
/// `f32` blob of parameters followed by batch-norm statistics.
pub fn checkpoint_save(net: &DualNet, path: &Path) -> Result<()> {
    let cfg = net.config();
    let header = Header {
        version: VERSION,
        g: cfg.g,
        max_len: cfg.max_len,
        seq_len: cfg.seq_len(),
        padded_to_g: cfg.seq_len() != cfg.max_len,
        channels: cfg.channels,
        conv_layers: cfg.conv_layers,
        leaky_slope: cfg.leaky_slope,
        bn_eps: BN_EPS,
        bn_momentum: BN_MOMENTUM,
        seed: cfg.seed,
        steps: net.steps,
        params: specs(&net.params),
        buffers: specs(&net.buffers),
    };
    let mut buf = format!("{MAGIC}\n").into_bytes();
    buf.extend(serde_json::to_string(&header).expect("header serializes").into_bytes());
    buf.push(b'\n');
    for t in net.params.iter().chain(&net.buffers) {
        for x in &t.data {
            buf.extend_from_slice(&(*x as f32).to_le_bytes());
        }
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&buf))
        .map_err(|e| Error::io(path, e))
}

/// Reads a checkpoint, validating every shape before building the network.
pub fn checkpoint_load(path: &Path) -> Result<DualNet> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let bad = |m: String| Error::Checkpoint(format!("{}: {m}", path.display()));
    let mut line = String::new();
    r.read_line(&mut line).map_err(|e| Error::io(path, e))?;
    if line.trim_end() != MAGIC {
        return Err(bad("missing magic line".into()));
    }
    line.clear();
    r.read_line(&mut line).map_err(|e| Error::io(path, e))?;
    let h: Header = serde_json::from_str(line.trim_end()).map_err(|e| bad(format!("header: {e}")))?;
    if h.version != VERSION {
        return Err(bad(format!("unsupported version {}", h.version)));
    }
    let cfg = NetConfig {
        g: h.g,
        max_len: h.max_len,
        channels: h.channels,
        conv_layers: h.conv_layers,
        leaky_slope: h.leaky_slope,
        seed: h.seed,
    };
    cfg.validate()?;
    // reference layout from a fresh net of the declared shape
    let template = DualNet::new(cfg.clone())?;
    let same = |a: &[TensorSpec], b: &[Tensor]| {
        a.len() == b.len() && a.iter().zip(b).all(|(s, t)| s.name == t.name && s.shape == t.shape)
    };
    if h.seq_len != cfg.seq_len() || !same(&h.params, &template.params) || !same(&h.buffers, &template.buffers) {
        return Err(bad("tensor layout does not match the declared shape".into()));
    }
    let mut blob = Vec::new();
    r.read_to_end(&mut blob).map_err(|e| Error::io(path, e))?;
    let total: usize = template.params.iter().chain(&template.buffers).map(|t| t.data.len()).sum();
    if blob.len() != 4 * total {
        return Err(bad(format!("expected {} bytes of weights, found {}", 4 * total, blob.len())));
    }
    let mut values = blob
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64);
    let mut fill = |ts: Vec<Tensor>| -> Vec<Tensor> {
        ts.into_iter()
            .map(|mut t| {
                t.data.iter_mut().for_each(|x| *x = values.next().unwrap());
                t
            })
            .collect()
    };
    let params = fill(template.params);
    let buffers = fill(template.buffers);
    let mut net = DualNet::from_parts(cfg, params, buffers);
    net.steps = h.steps;
    Ok(net)
}

/// As [`checkpoint_load`], failing unless the network has `g` actions and
/// encodings of length `max_len`.
pub fn checkpoint_load_expecting(path: &Path, g: usize, max_len: usize) -> Result<DualNet> {
    let net = checkpoint_load(path)?;
    let cfg = net.config();
    if cfg.g != g || cfg.max_len != max_len {
        return Err(Error::ShapeMismatch(format!(
            "{}: checkpoint has G={}, N={}; expected G={g}, N={max_len}",
            path.display(),
            cfg.g,
            cfg.max_len
        )));
    }
    Ok(net)
}
