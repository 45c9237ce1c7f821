//! Minimal FASTA / FASTQ reading.
//!
//! The format is picked from the first non-blank byte (`>` or `@`). FASTA
//! sequences may span lines; FASTQ records are the usual four lines, with the
//! sequence on a single line. Record ids are the header up to the first
//! whitespace.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeqError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("no records found")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqRecord {
    pub id: String,
    pub seq: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqFormat {
    Fasta,
    Fastq,
}

pub fn read_path(path: impl AsRef<Path>) -> Result<Vec<SeqRecord>, SeqError> {
    read(BufReader::new(File::open(path)?))
}

/// Reads every record; fails on an input with none.
pub fn read(mut input: impl BufRead) -> Result<Vec<SeqRecord>, SeqError> {
    let mut text = Vec::new();
    input.read_to_end(&mut text)?;
    let records = parse(&text)?;
    if records.is_empty() {
        return Err(SeqError::Empty);
    }
    Ok(records)
}

pub fn detect(text: &[u8]) -> Option<SeqFormat> {
    match text.iter().find(|b| !b.is_ascii_whitespace())? {
        b'>' => Some(SeqFormat::Fasta),
        b'@' => Some(SeqFormat::Fastq),
        _ => None,
    }
}

pub fn parse(text: &[u8]) -> Result<Vec<SeqRecord>, SeqError> {
    let lines = text
        .split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));
    match detect(text) {
        None if text.iter().all(u8::is_ascii_whitespace) => Ok(Vec::new()),
        None => Err(SeqError::Format {
            line: 1,
            message: "expected a FASTA ('>') or FASTQ ('@') header".into(),
        }),
        Some(SeqFormat::Fasta) => parse_fasta(lines),
        Some(SeqFormat::Fastq) => parse_fastq(lines),
    }
}

fn header_id(line: usize, header: &[u8]) -> Result<String, SeqError> {
    let id = header.split(|b| b.is_ascii_whitespace()).next().unwrap_or_default();
    if id.is_empty() {
        return Err(SeqError::Format {
            line,
            message: "empty record id".into(),
        });
    }
    Ok(String::from_utf8_lossy(id).into_owned())
}

fn parse_fasta<'a>(lines: impl Iterator<Item = (usize, &'a [u8])>) -> Result<Vec<SeqRecord>, SeqError> {
    let mut out: Vec<SeqRecord> = Vec::new();
    for (n, line) in lines {
        if let Some(header) = line.strip_prefix(b">") {
            out.push(SeqRecord {
                id: header_id(n, header)?,
                seq: Vec::new(),
            });
        } else if let Some(rec) = out.last_mut() {
            rec.seq.extend(line.iter().filter(|b| !b.is_ascii_whitespace()));
        } else if !line.iter().all(u8::is_ascii_whitespace) {
            return Err(SeqError::Format {
                line: n,
                message: "sequence before the first header".into(),
            });
        }
    }
    Ok(out)
}

fn parse_fastq<'a>(lines: impl Iterator<Item = (usize, &'a [u8])>) -> Result<Vec<SeqRecord>, SeqError> {
    let mut out = Vec::new();
    let mut lines = lines.filter(|(_, l)| !l.is_empty());
    while let Some((n, header)) = lines.next() {
        let Some(h) = header.strip_prefix(b"@") else {
            return Err(SeqError::Format {
                line: n,
                message: "expected '@' header".into(),
            });
        };
        let truncated = || SeqError::Format {
            line: n,
            message: "truncated record".into(),
        };
        let (_, seq) = lines.next().ok_or_else(truncated)?;
        let (plus_line, plus) = lines.next().ok_or_else(truncated)?;
        if !plus.starts_with(b"+") {
            return Err(SeqError::Format {
                line: plus_line,
                message: "expected '+' separator".into(),
            });
        }
        let (qual_line, qual) = lines.next().ok_or_else(truncated)?;
        if qual.len() != seq.len() {
            return Err(SeqError::Format {
                line: qual_line,
                message: format!(
                    "quality length {} differs from sequence length {}",
                    qual.len(),
                    seq.len()
                ),
            });
        }
        out.push(SeqRecord {
            id: header_id(n, h)?,
            seq: seq.to_vec(),
        });
    }
    Ok(out)
}
