use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("symbol {symbol:?} at position {position} is not in the alphabet")]
    InvalidSymbol { position: usize, symbol: char },
    #[error("alphabet needs between 2 and 254 distinct symbols, got {0}")]
    Size(usize),
    #[error("duplicate symbol {0:?} in alphabet")]
    Duplicate(char),
}

const INVALID: u8 = u8::MAX;

/// Maps text bytes to dense codes.
///
/// Real symbols get codes `0..sigma`. Code `sigma` is the wildcard class: it
/// is stored in the index (for `N` runs and record separators) but never
/// matches anything and is never branched on during search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    wildcard: Option<u8>,
    lookup: [u8; 256],
}

impl Alphabet {
    /// `symbols` in code order; matching is case-insensitive for ASCII letters.
    pub fn new(symbols: &[u8], wildcard: Option<u8>) -> Result<Self, AlphabetError> {
        if symbols.len() < 2 || symbols.len() > 254 {
            return Err(AlphabetError::Size(symbols.len()));
        }
        let mut lookup = [INVALID; 256];
        for (code, &b) in symbols.iter().enumerate() {
            for v in [b.to_ascii_uppercase(), b.to_ascii_lowercase()] {
                if lookup[v as usize] != INVALID {
                    return Err(AlphabetError::Duplicate(b as char));
                }
                lookup[v as usize] = code as u8;
                if b.to_ascii_uppercase() == b.to_ascii_lowercase() {
                    break;
                }
            }
        }
        if let Some(w) = wildcard {
            for v in [w.to_ascii_uppercase(), w.to_ascii_lowercase()] {
                if lookup[v as usize] != INVALID && lookup[v as usize] != symbols.len() as u8 {
                    return Err(AlphabetError::Duplicate(w as char));
                }
                lookup[v as usize] = symbols.len() as u8;
            }
        }
        Ok(Alphabet {
            symbols: symbols.to_vec(),
            wildcard,
            lookup,
        })
    }

    /// `A C G T` with `N` as the wildcard.
    pub fn dna() -> Self {
        Alphabet::new(b"ACGT", Some(b'N')).expect("static alphabet")
    }

    /// Number of real (matchable) symbols.
    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    /// The code of the wildcard/separator class.
    pub fn wildcard_code(&self) -> u8 {
        self.symbols.len() as u8
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn wildcard(&self) -> Option<u8> {
        self.wildcard
    }

    pub fn encode_byte(&self, b: u8) -> Option<u8> {
        match self.lookup[b as usize] {
            INVALID => None,
            code => Some(code),
        }
    }

    pub fn encode(&self, text: &[u8]) -> Result<Vec<u8>, AlphabetError> {
        text.iter()
            .enumerate()
            .map(|(position, &b)| {
                self.encode_byte(b).ok_or(AlphabetError::InvalidSymbol {
                    position,
                    symbol: b as char,
                })
            })
            .collect()
    }

    pub fn decode(&self, codes: &[u8]) -> Vec<u8> {
        codes
            .iter()
            .map(|&c| match self.symbols.get(c as usize) {
                Some(&b) => b,
                None => self.wildcard.unwrap_or(b'#'),
            })
            .collect()
    }

    /// Complement of a code under `A<->T`, `C<->G`; identity for other alphabets.
    pub fn complement(&self, code: u8) -> u8 {
        if self.symbols == b"ACGT" && code < 4 {
            3 - code
        } else {
            code
        }
    }
}
