use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qsim::Circuit;

/// First 16 hex digits of the SHA-256 of `description`.
pub fn config_hash(description: &str) -> String {
    let digest = Sha256::digest(description.as_bytes());
    hex::encode(&digest[..8])
}

pub fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Circuit::from_json(&text).map_err(|e| match e {
        Error::CircuitFormat(m) => Error::CircuitFormat(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_circuit(circuit: &Circuit, path: &Path) -> Result<()> {
    let mut text = circuit.to_json();
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// A file or stdout.
pub(crate) struct Sink {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Sink {
    pub(crate) fn open(path: Option<&Path>) -> Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?)),
            None => Box::new(io::stdout()),
        };
        Ok(Sink {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    pub(crate) fn is_file(&self) -> bool {
        self.path.is_some()
    }

    pub(crate) fn err(&self, e: io::Error) -> Error {
        Error::io(self.path.clone().unwrap_or_else(|| PathBuf::from("<stdout>")), e)
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| self.err(e))
    }
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.inner.write(buf)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Writes `# ` prefixed preamble lines, a header row and data rows.
pub(crate) fn write_table<W: Write>(
    out: &mut W,
    preamble: &[String],
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let io_err = |e| Error::io("<csv>", e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(io_err)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(config_hash("abc"), "ba7816bf8f01cfea");
        assert_ne!(config_hash("abc"), config_hash("abd"));
    }

    #[test]
    fn table_layout() {
        let mut buf = Vec::new();
        write_table(
            &mut buf,
            &["config_hash=00".into()],
            &["a", "b"],
            &[vec!["1".into(), "2".into()]],
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# config_hash=00\na,b\n1,2\n");
    }
}
