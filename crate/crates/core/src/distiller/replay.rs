use std::collections::VecDeque;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"QDRB";
const VERSION: u32 = 1;

/// One `(state, π, z)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample {
    /// Encoded circuit, zero padded to `max_len`.
    pub state: Vec<u16>,
    pub pi: Vec<f64>,
    pub z: f64,
}

/// Bounded FIFO of training examples.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayBuffer {
    capacity: usize,
    max_len: usize,
    g: usize,
    items: VecDeque<TrainingExample>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize, max_len: usize, g: usize) -> Self {
        ReplayBuffer {
            capacity: capacity.max(1),
            max_len,
            g,
            items: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn examples(&self) -> impl Iterator<Item = &TrainingExample> {
        self.items.iter()
    }

    pub fn push(&mut self, ex: TrainingExample) -> Result<()> {
        if ex.state.len() != self.max_len || ex.pi.len() != self.g {
            return Err(Error::ShapeMismatch(format!(
                "example ({}, {}) does not fit buffer ({}, {})",
                ex.state.len(),
                ex.pi.len(),
                self.max_len,
                self.g
            )));
        }
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(ex);
        Ok(())
    }

    /// `size` examples drawn uniformly with replacement.
    pub fn sample<R: Rng>(&self, size: usize, rng: &mut R) -> Vec<TrainingExample> {
        if self.items.is_empty() {
            return Vec::new();
        }
        (0..size)
            .map(|_| self.items[rng.gen_range(0..self.items.len())].clone())
            .collect()
    }

    /// Binary pack: magic, version, max_len, G, count (u32 LE each), then per
    /// example `max_len` u16 states, `G` f32 policy entries and an f32 reward.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        for v in [VERSION, self.max_len as u32, self.g as u32, self.items.len() as u32] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for ex in &self.items {
            ex.state.iter().for_each(|s| buf.extend_from_slice(&s.to_le_bytes()));
            ex.pi
                .iter()
                .for_each(|p| buf.extend_from_slice(&(*p as f32).to_le_bytes()));
            buf.extend_from_slice(&(ex.z as f32).to_le_bytes());
        }
        std::fs::File::create(path)
            .and_then(|mut f| f.write_all(&buf))
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path, capacity: usize) -> Result<Self> {
        let mut raw = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut raw))
            .map_err(|e| Error::io(path, e))?;
        let bad = |m: &str| Error::Checkpoint(format!("{}: {m}", path.display()));
        if raw.len() < 20 || &raw[..4] != MAGIC {
            return Err(bad("not a replay pack"));
        }
        let word = |i: usize| u32::from_le_bytes(raw[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as usize;
        if word(0) != VERSION as usize {
            return Err(bad("unsupported version"));
        }
        let (max_len, g, count) = (word(1), word(2), word(3));
        let stride = 2 * max_len + 4 * g + 4;
        if raw.len() != 20 + stride * count {
            return Err(bad("truncated or oversized body"));
        }
        let mut buffer = ReplayBuffer::new(capacity, max_len, g);
        for rec in raw[20..].chunks_exact(stride) {
            let (s, rest) = rec.split_at(2 * max_len);
            let (p, z) = rest.split_at(4 * g);
            let f = |b: &[u8]| f32::from_le_bytes(b.try_into().unwrap()) as f64;
            buffer.push(TrainingExample {
                state: s
                    .chunks_exact(2)
                    .map(|b| u16::from_le_bytes([b[0], b[1]]))
                    .collect(),
                pi: p.chunks_exact(4).map(f).collect(),
                z: f(z),
            })?;
        }
        Ok(buffer)
    }
}
