use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::ModelError;

/// Ordered set of distinct symbols. The declared order fixes lexicographic
/// comparison everywhere downstream (string ordering, class ranking).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Arc<Self>, ModelError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(ModelError::AlphabetTooSmall {
                size: symbols.len(),
            });
        }
        if symbols.len() > 256 {
            return Err(ModelError::AlphabetTooLarge {
                size: symbols.len(),
            });
        }
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(ModelError::DuplicateSymbol { symbol: c });
            }
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    /// The two-symbol alphabet `{a, b}`.
    pub fn binary() -> Arc<Self> {
        Self::new(['a', 'b']).expect("binary alphabet is valid")
    }

    /// The three-symbol alphabet `{a, b, c}`.
    pub fn ternary() -> Arc<Self> {
        Self::new(['a', 'b', 'c']).expect("ternary alphabet is valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        self.symbols.iter().position(|&c| c == symbol)
    }

    /// Bits needed to address one symbol: `ceil(log2 |A|)`.
    pub fn bits_per_symbol(&self) -> usize {
        (self.symbols.len() - 1).ilog2() as usize + 1
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A covertext or stegotext: a finite sequence of symbols from one alphabet.
///
/// Stored as symbol indices; ordering is lexicographic in the alphabet's
/// declared symbol order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolString {
    alphabet: Arc<Alphabet>,
    indices: Vec<u8>,
}

impl SymbolString {
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self, ModelError> {
        let mut indices = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let idx = alphabet
                .index_of(ch)
                .ok_or(ModelError::SymbolNotInAlphabet { symbol: ch })?;
            indices.push(idx as u8);
        }
        Ok(SymbolString {
            alphabet: alphabet.clone(),
            indices,
        })
    }

    pub fn from_indices(alphabet: Arc<Alphabet>, indices: Vec<u8>) -> Result<Self, ModelError> {
        if let Some(&bad) = indices.iter().find(|&&i| (i as usize) >= alphabet.len()) {
            return Err(ModelError::SymbolNotInAlphabet {
                symbol: char::from_digit(bad as u32, 36).unwrap_or('?'),
            });
        }
        Ok(SymbolString { alphabet, indices })
    }

    pub(crate) fn from_indices_unchecked(alphabet: Arc<Alphabet>, indices: Vec<u8>) -> Self {
        SymbolString { alphabet, indices }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn index_at(&self, pos: usize) -> usize {
        self.indices[pos] as usize
    }

    pub fn symbol_at(&self, pos: usize) -> char {
        self.alphabet.symbol(self.indices[pos] as usize)
    }

    pub fn same_alphabet(&self, other: &Arc<Alphabet>) -> bool {
        Arc::ptr_eq(&self.alphabet, other) || *self.alphabet == **other
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &i in &self.indices {
            write!(f, "{}", self.alphabet.symbol(i as usize))?;
        }
        Ok(())
    }
}

/// A finite sequence of secret bits. `Λ` (nothing embedded) is the empty
/// sequence, displayed as the empty string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.0.get(index).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }
}

impl FromStr for Bits {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(ModelError::InvalidBit { ch: other }),
            }
        }
        Ok(Bits(bits))
    }
}

impl From<Vec<bool>> for Bits {
    fn from(bits: Vec<bool>) -> Self {
        Bits(bits)
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Bits(iter.into_iter().collect())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}
