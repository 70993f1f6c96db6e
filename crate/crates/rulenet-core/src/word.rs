use std::fmt;

use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Finite alphabet of atoms `0..size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: u32,
    width: u8,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self, CoreError> {
        if size < 2 {
            return Err(CoreError::AlphabetTooSmall(size));
        }
        if size > 256 {
            return Err(CoreError::AlphabetTooLarge(size));
        }
        let width = (32 - (size - 1).leading_zeros()) as u8;
        Ok(Self { size, width })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Bits per packed atom, `ceil(log2 |A|)`.
    pub fn width(&self) -> u8 {
        self.width
    }

    /// Longest word (in atoms) that fits the packed representation.
    pub fn capacity(&self) -> usize {
        128 / self.width as usize
    }

    /// Highest level a word can reach before packing fails.
    pub fn max_level(&self) -> u32 {
        self.capacity() as u32 - 1
    }

    pub fn atom(&self, a: u32) -> Result<Word, CoreError> {
        if a >= self.size {
            return Err(CoreError::AtomOutOfRange {
                atom: a,
                size: self.size,
            });
        }
        Ok(Word {
            len: 1,
            width: self.width,
            code: a as u128,
        })
    }

    pub fn atoms(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.size).map(move |a| Word {
            len: 1,
            width: self.width,
            code: a as u128,
        })
    }

    pub fn word(&self, atoms: &[u32]) -> Result<Word, CoreError> {
        if atoms.is_empty() {
            return Err(CoreError::EmptyWord);
        }
        if atoms.len() > self.capacity() {
            return Err(CoreError::Capacity {
                len: atoms.len(),
                capacity: self.capacity(),
            });
        }
        let mut code = 0u128;
        for &a in atoms {
            if a >= self.size {
                return Err(CoreError::AtomOutOfRange {
                    atom: a,
                    size: self.size,
                });
            }
            code = (code << self.width) | a as u128;
        }
        Ok(Word {
            len: atoms.len() as u8,
            width: self.width,
            code,
        })
    }

    /// Rebuilds a word from its packed code. The caller guarantees that `code`
    /// holds `len` valid atoms.
    pub fn from_code(&self, len: usize, code: u128) -> Word {
        debug_assert!(len >= 1 && len <= self.capacity());
        Word {
            len: len as u8,
            width: self.width,
            code,
        }
    }

    /// Parses letters `a, b, c, …` (alphabets up to 26 atoms) or a
    /// dot-separated list of atom indices such as `0.2.1`.
    pub fn parse_word(&self, s: &str) -> Result<Word, CoreError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CoreError::EmptyWord);
        }
        let atoms: Vec<u32> = if s.contains('.') || s.chars().all(|c| c.is_ascii_digit()) {
            s.split('.')
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| CoreError::ParseWord(s.to_string()))
                })
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| {
                    if c.is_ascii_lowercase() {
                        Ok(c as u32 - 'a' as u32)
                    } else {
                        Err(CoreError::ParseWord(s.to_string()))
                    }
                })
                .collect::<Result<_, _>>()?
        };
        self.word(&atoms)
    }

    /// Every word of the given level, in lexicographic order.
    pub fn words_of_level(&self, level: u32) -> impl Iterator<Item = Word> + '_ {
        let len = level as usize + 1;
        let count = (self.size as u128).pow(len as u32);
        (0..count).map(move |mut idx| {
            let mut code = 0u128;
            let mut shift = 0;
            for _ in 0..len {
                code |= (idx % self.size as u128) << shift;
                idx /= self.size as u128;
                shift += self.width as u32;
            }
            Word {
                len: len as u8,
                width: self.width,
                code,
            }
        })
    }
}

fn mask(bits: u32) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

/// Oriented word over an [`Alphabet`], packed with the first atom in the
/// most significant position so that code order is lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    len: u8,
    width: u8,
    code: u128,
}

impl Word {
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of bonds.
    pub fn level(&self) -> u32 {
        self.len as u32 - 1
    }

    pub fn code(&self) -> u128 {
        self.code
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn atom(&self, i: usize) -> u32 {
        debug_assert!(i < self.len());
        let shift = (self.len() - 1 - i) as u32 * self.width as u32;
        ((self.code >> shift) & mask(self.width as u32)) as u32
    }

    pub fn atoms(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.atom(i)).collect()
    }

    pub fn first(&self) -> u32 {
        self.atom(0)
    }

    pub fn last(&self) -> u32 {
        (self.code & mask(self.width as u32)) as u32
    }

    fn capacity(&self) -> usize {
        128 / self.width as usize
    }

    /// Appends one atom on the right.
    pub fn push(&self, a: u32) -> Result<Word, CoreError> {
        if self.len() + 1 > self.capacity() {
            return Err(CoreError::Capacity {
                len: self.len() + 1,
                capacity: self.capacity(),
            });
        }
        Ok(Word {
            len: self.len + 1,
            width: self.width,
            code: (self.code << self.width) | a as u128,
        })
    }

    pub fn concat(&self, other: &Word) -> Result<Word, CoreError> {
        if self.width != other.width {
            return Err(CoreError::AlphabetMismatch);
        }
        let len = self.len() + other.len();
        if len > self.capacity() {
            return Err(CoreError::Capacity {
                len,
                capacity: self.capacity(),
            });
        }
        let code = (self.code << (other.len() as u32 * self.width as u32)) | other.code;
        Ok(Word {
            len: len as u8,
            width: self.width,
            code,
        })
    }

    /// Factor of `k` atoms starting at position `start` (0-based).
    pub fn subword(&self, start: usize, k: usize) -> Word {
        debug_assert!(k >= 1 && start + k <= self.len());
        let w = self.width as u32;
        let shift = (self.len() - start - k) as u32 * w;
        Word {
            len: k as u8,
            width: self.width,
            code: (self.code >> shift) & mask(k as u32 * w),
        }
    }

    /// Last `k` atoms.
    pub fn suffix(&self, k: usize) -> Word {
        self.subword(self.len() - k, k)
    }

    /// First `k` atoms.
    pub fn prefix(&self, k: usize) -> Word {
        self.subword(0, k)
    }

    pub fn reversed(&self) -> Word {
        let mut code = 0u128;
        let mut rest = self.code;
        let m = mask(self.width as u32);
        for _ in 0..self.len() {
            code = (code << self.width) | (rest & m);
            rest >>= self.width;
        }
        Word {
            len: self.len,
            width: self.width,
            code,
        }
    }

    pub fn is_palindrome(&self) -> bool {
        self.reversed() == *self
    }

    /// True when `self` occurs as a contiguous factor of `other`.
    pub fn is_subword_of(&self, other: &Word) -> bool {
        if self.len() > other.len() || self.width != other.width {
            return false;
        }
        (0..=other.len() - self.len()).any(|s| other.subword(s, self.len()) == *self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width <= 4 {
            for i in 0..self.len() {
                write!(f, "{}", (b'a' + self.atom(i) as u8) as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.atoms().iter().map(|a| a.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
