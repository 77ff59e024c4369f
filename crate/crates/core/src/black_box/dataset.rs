//! Plain-text dataset files.
//!
//! One observation per line: `r + 1` comma-separated 0/1 values, the last one
//! being the output. Lines starting with `#` are comments, except that a
//! comment of the exact form `# r=<r> n=<n>` is a header and is checked
//! against the rows that follow.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub inputs: BitMatrix,
    pub outputs: BitVector,
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut parts = rest.split_whitespace();
    let r = parts.next()?.strip_prefix("r=")?.parse().ok()?;
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((r, n))
}

impl Dataset {
    pub fn new(inputs: BitMatrix, outputs: BitVector) -> Result<Self> {
        Error::check_len(inputs.n_rows(), outputs.len())?;
        Ok(Dataset { inputs, outputs })
    }

    pub fn r(&self) -> usize {
        self.inputs.n_cols()
    }

    pub fn n(&self) -> usize {
        self.inputs.n_rows()
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut header = None;
        let mut rows = Vec::new();
        let mut outputs = Vec::new();
        let mut width = None;
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let lineno = lineno + 1;
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if let Some(h) = parse_header(line) {
                    header = Some((h, lineno));
                }
                continue;
            }
            let values = line
                .split(',')
                .map(|field| match field.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::Parse { line: lineno, msg: format!("expected 0 or 1, found {other:?}") }),
                })
                .collect::<Result<Vec<bool>>>()?;
            if values.len() < 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "need at least one input column and the output column".into(),
                });
            }
            match width {
                None => width = Some(values.len()),
                Some(w) if w != values.len() => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected {w} columns, found {}", values.len()),
                    })
                }
                _ => {}
            }
            let (input, output) = values.split_at(values.len() - 1);
            rows.push(BitVector::from_bools(input));
            outputs.push(output[0]);
        }
        if rows.is_empty() {
            return Err(Error::Parse { line: 0, msg: "no observations".into() });
        }
        if let Some(((r, n), lineno)) = header {
            let found = (rows[0].len(), rows.len());
            if (r, n) != found {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("header says r={r} n={n} but rows give r={} n={}", found.0, found.1),
                });
            }
        }
        Dataset::new(BitMatrix::new(rows)?, BitVector::from_bools(&outputs))
    }

    /// Writes `comments` as `#` lines, then the header, then the rows.
    pub fn write<W: Write>(&self, mut out: W, comments: &[String]) -> Result<()> {
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "# r={} n={}", self.r(), self.n())?;
        let mut line = String::with_capacity(2 * (self.r() + 1));
        for (row, y) in self.inputs.rows().iter().zip(self.outputs.iter()) {
            line.clear();
            for bit in row.iter() {
                line.push(if bit { '1' } else { '0' });
                line.push(',');
            }
            line.push(if y { '1' } else { '0' });
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Dataset::read(File::open(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, comments: &[String]) -> Result<()> {
        self.write(BufWriter::new(File::create(path)?), comments)
    }
}
