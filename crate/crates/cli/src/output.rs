use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip text for `x`, switching to exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Effective parameters echoed as `# key=value` comment lines ahead of the
/// CSV body, together with the tool version and a SHA-256 over the parameters.
#[derive(Debug, Clone, Default)]
pub struct Header {
    params: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        let mut h = Self::default();
        h.push("command", command);
        h
    }

    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in &self.params {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# weylcdma {VERSION}")?;
        writeln!(w, "# config_sha256={}", self.config_hash())?;
        for (k, v) in &self.params {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// Opens `path` for writing, or stdout when `None`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes the header, the column names and every record to `path` (stdout if `None`).
pub fn write_csv<I, R>(
    path: Option<&Path>,
    header: &Header,
    columns: &[&str],
    records: I,
) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    write_csv_to(sink(path)?, header, columns, records)
}

pub fn write_csv_to<I, R>(
    mut out: Box<dyn Write>,
    header: &Header,
    columns: &[&str],
    records: I,
) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    header.write_to(&mut out)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush().context("cannot write output")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for x in [
            0.0,
            -0.0,
            1.0,
            0.1,
            1.8e-14,
            -3.5e-7,
            2.5e20,
            316.22776601683796,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.8e-14), "1.8e-14");
        assert_eq!(num(0.25), "0.25");
    }

    #[test]
    fn hash_depends_on_every_parameter() {
        let mut a = Header::new("snr");
        a.push("n", 31).push("k", 7);
        let mut b = Header::new("snr");
        b.push("n", 31).push("k", 8);
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash(), a.clone().config_hash());
        assert_eq!(a.config_hash().len(), 64);
    }

    #[test]
    fn header_lines_are_comments() {
        let mut h = Header::new("solve");
        h.push("k", 3);
        let mut buf = Vec::new();
        h.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().all(|l| l.starts_with("# ")));
        assert!(text.contains("# k=3\n"));
    }
}
