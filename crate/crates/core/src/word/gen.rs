use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three Coxeter generators. The derived order `r < s < t` is the
/// ShortLex letter order used everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    R = 0,
    S = 1,
    T = 2,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::R, Gen::S, Gen::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Gen {
        Gen::ALL[i]
    }

    pub fn as_char(self) -> char {
        match self {
            Gen::R => 'r',
            Gen::S => 's',
            Gen::T => 't',
        }
    }

    pub fn from_char(c: char) -> Result<Gen> {
        match c {
            'r' => Ok(Gen::R),
            's' => Ok(Gen::S),
            't' => Ok(Gen::T),
            other => Err(Error::Word(format!("unknown generator '{other}'"))),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parse a word over `r`, `s`, `t`. Both `""` and `"e"` denote the empty word.
pub fn parse_word(s: &str) -> Result<Vec<Gen>> {
    let s = s.trim();
    if s == "e" {
        return Ok(Vec::new());
    }
    s.chars().map(Gen::from_char).collect()
}

pub fn word_to_string(w: &[Gen]) -> String {
    w.iter().map(|g| g.as_char()).collect()
}

/// A subset of `{r, s, t}` as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenSet(u8);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);
    pub const FULL: GenSet = GenSet(0b111);

    pub fn singleton(g: Gen) -> GenSet {
        GenSet(1 << g.index())
    }

    pub fn pair(a: Gen, b: Gen) -> GenSet {
        GenSet::singleton(a).with(b)
    }

    pub fn from_bits(bits: u8) -> GenSet {
        GenSet(bits & 0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn with(self, g: Gen) -> GenSet {
        GenSet(self.0 | (1 << g.index()))
    }

    pub fn contains(self, g: Gen) -> bool {
        self.0 & (1 << g.index()) != 0
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: GenSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn complement(self) -> GenSet {
        GenSet(!self.0 & 0b111)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Gen> {
        Gen::ALL.into_iter().filter(move |g| self.contains(*g))
    }

    pub fn parse(s: &str) -> Result<GenSet> {
        let mut set = GenSet::EMPTY;
        for c in s.chars() {
            set = set.with(Gen::from_char(c)?);
        }
        Ok(set)
    }
}

impl FromIterator<Gen> for GenSet {
    fn from_iter<I: IntoIterator<Item = Gen>>(iter: I) -> Self {
        iter.into_iter().fold(GenSet::EMPTY, GenSet::with)
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in self.iter() {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}
