//! Binary index file.
//!
//! Little-endian layout: magic, format version, alphabet, text length,
//! sampling rate, record table, both BWTs with their sentinel rows, the
//! sampled-row bit vector and the samples, then a SHA-256 of everything
//! before it. Rank tables are rebuilt on load.

use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use sha2::{Digest, Sha256};

use super::{c_table_of, Alphabet, BidirectionalIndex, Bwt, IndexError, RankBits, Record, SENTINEL};

pub const MAGIC: &[u8; 8] = b"SSFMIDX\0";
pub const FORMAT_VERSION: u32 = 1;

const DIGEST_LEN: usize = 32;

impl BidirectionalIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_payload(&mut out).expect("writing to memory cannot fail");
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    fn write_payload(&self, w: &mut Vec<u8>) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_u32::<LE>(FORMAT_VERSION)?;
        let symbols = self.alphabet.symbols();
        w.write_u32::<LE>(symbols.len() as u32)?;
        w.write_all(symbols)?;
        w.write_u8(u8::from(self.alphabet.wildcard().is_some()))?;
        w.write_u8(self.alphabet.wildcard().unwrap_or(0))?;
        w.write_u64::<LE>(self.text_len as u64)?;
        w.write_u64::<LE>(self.sa_rate as u64)?;
        w.write_u64::<LE>(self.records.len() as u64)?;
        for r in &self.records {
            w.write_u32::<LE>(r.name.len() as u32)?;
            w.write_all(r.name.as_bytes())?;
            w.write_u64::<LE>(r.start as u64)?;
            w.write_u64::<LE>(r.len as u64)?;
        }
        for bwt in [&self.fwd, &self.rev] {
            w.write_u64::<LE>(bwt.sentinel_row as u64)?;
            w.write_all(&bwt.symbols)?;
        }
        for &word in self.sampled_rows.words() {
            w.write_u64::<LE>(word)?;
        }
        w.write_u64::<LE>(self.sa_samples.len() as u64)?;
        for &s in &self.sa_samples {
            w.write_u32::<LE>(s)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let mut file = fs::File::create(path)?;
        file.write_all(&self.to_bytes())?;
        file.sync_all()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(IndexError::BadMagic);
        }
        if bytes.len() < MAGIC.len() + 4 + DIGEST_LEN {
            return Err(corrupt("file truncated"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
        if version != FORMAT_VERSION {
            return Err(IndexError::Version {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let (payload, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
        if Sha256::digest(payload).as_slice() != digest {
            return Err(corrupt("checksum mismatch"));
        }
        parse_payload(&payload[12..]).map_err(|e| match e {
            IndexError::Io(io) => corrupt(&io.to_string()),
            other => other,
        })
    }
}

fn corrupt(msg: &str) -> IndexError {
    IndexError::Corrupt(msg.to_string())
}

fn read_vec(r: &mut Cursor<&[u8]>, len: usize) -> Result<Vec<u8>, IndexError> {
    let left = r.get_ref().len() as u64 - r.position();
    if len as u64 > left {
        return Err(corrupt("file truncated"));
    }
    let mut v = vec![0u8; len];
    r.read_exact(&mut v)?;
    Ok(v)
}

fn parse_payload(bytes: &[u8]) -> Result<BidirectionalIndex, IndexError> {
    let mut r = Cursor::new(bytes);
    let sigma = r.read_u32::<LE>()? as usize;
    let symbols = read_vec(&mut r, sigma)?;
    let has_wildcard = r.read_u8()? != 0;
    let wildcard = r.read_u8()?;
    let alphabet = Alphabet::new(&symbols, has_wildcard.then_some(wildcard))?;
    let text_len = r.read_u64::<LE>()? as usize;
    let sa_rate = r.read_u64::<LE>()? as usize;
    if sa_rate == 0 {
        return Err(corrupt("sampling rate is zero"));
    }
    let n_records = r.read_u64::<LE>()? as usize;
    let mut records = Vec::new();
    for _ in 0..n_records {
        let name_len = r.read_u32::<LE>()? as usize;
        let name = String::from_utf8(read_vec(&mut r, name_len)?).map_err(|_| corrupt("record name is not UTF-8"))?;
        let start = r.read_u64::<LE>()? as usize;
        let len = r.read_u64::<LE>()? as usize;
        if start + len > text_len {
            return Err(corrupt("record outside the text"));
        }
        records.push(Record { name, start, len });
    }

    let codes = sigma + 1;
    let mut bwts = Vec::with_capacity(2);
    for _ in 0..2 {
        let sentinel_row = r.read_u64::<LE>()? as usize;
        let symbols = read_vec(&mut r, text_len + 1)?;
        if symbols.get(sentinel_row) != Some(&SENTINEL)
            || symbols
                .iter()
                .enumerate()
                .any(|(i, &c)| i != sentinel_row && c as usize >= codes)
        {
            return Err(corrupt("invalid BWT"));
        }
        bwts.push(Bwt::from_symbols(symbols, sentinel_row, codes));
    }
    let rev = bwts.pop().expect("two BWTs");
    let fwd = bwts.pop().expect("two BWTs");

    let n_words = (text_len + 1).div_ceil(64);
    let mut words = Vec::with_capacity(n_words);
    for _ in 0..n_words {
        words.push(r.read_u64::<LE>()?);
    }
    let sampled_rows = RankBits::from_words(words, text_len + 1);
    let n_samples = r.read_u64::<LE>()? as usize;
    if n_samples != sampled_rows.count_ones() || n_samples == 0 {
        return Err(corrupt("sample count does not match the sampled rows"));
    }
    let mut sa_samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        sa_samples.push(r.read_u32::<LE>()?);
    }
    if r.position() != bytes.len() as u64 {
        return Err(corrupt("trailing bytes"));
    }

    // Symbol counts are the BWT's counts minus the sentinel.
    let mut text: Vec<u8> = fwd.symbols.iter().copied().filter(|&c| c != SENTINEL).collect();
    text.sort_unstable();
    let c_table = c_table_of(&text, codes);

    Ok(BidirectionalIndex {
        alphabet,
        text_len,
        fwd,
        rev,
        c_table,
        sa_rate,
        sampled_rows,
        sa_samples,
        records,
    })
}
