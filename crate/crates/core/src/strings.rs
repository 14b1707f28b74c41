//! String model over Z_q: tandem duplication, descendant enumeration,
//! irreducibility, duplication roots and cone equivalence.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Ring Z_q the strings are written over. Guards q >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    q: u32,
}

impl Alphabet {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        Ok(Alphabet { q })
    }

    pub fn size(&self) -> u32 {
        self.q
    }
}

/// A finite string over Z_q carrying its duplication-window length k.
///
/// Construction enforces q >= 2, k >= 2 and length >= k, so every value can be
/// fed to the channel and transform operations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GString {
    symbols: Vec<u32>,
    q: u32,
    k: usize,
}

impl GString {
    pub fn new(symbols: Vec<u32>, q: u32, k: usize) -> Result<Self> {
        Alphabet::new(q)?;
        if k < 2 {
            return Err(Error::WindowTooSmall(k));
        }
        if symbols.len() < k {
            return Err(Error::StringTooShort {
                len: symbols.len(),
                k,
            });
        }
        if let Some(&sym) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange { sym, q });
        }
        Ok(GString { symbols, q, k })
    }

    /// Parses the on-disk representation: one digit per symbol for q <= 10,
    /// comma-separated integers otherwise.
    pub fn parse(text: &str, q: u32, k: usize) -> Result<Self> {
        let text = text.trim();
        let symbols: Vec<u32> = if q <= 10 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| Error::InvalidInput(format!("bad symbol '{c}'")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidInput(format!("bad symbol '{tok}'")))
                })
                .collect::<Result<_>>()?
        };
        GString::new(symbols, q, k)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Tandem duplication T_i: copy the length-k window starting at i and
    /// insert the copy right after it.
    pub fn tandem_duplicate(&self, i: usize) -> Result<GString> {
        if i + self.k > self.symbols.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.symbols.len(),
                k: self.k,
            });
        }
        let mut out = Vec::with_capacity(self.symbols.len() + self.k);
        out.extend_from_slice(&self.symbols[..i + self.k]);
        out.extend_from_slice(&self.symbols[i..i + self.k]);
        out.extend_from_slice(&self.symbols[i + self.k..]);
        Ok(GString {
            symbols: out,
            q: self.q,
            k: self.k,
        })
    }

    /// Position of the leftmost square block vv with |v| = k, if any.
    fn find_square(&self) -> Option<usize> {
        let k = self.k;
        if self.symbols.len() < 2 * k {
            return None;
        }
        (0..=self.symbols.len() - 2 * k)
            .find(|&j| self.symbols[j..j + k] == self.symbols[j + k..j + 2 * k])
    }

    /// A string is irreducible when it contains no square vv with |v| = k.
    pub fn is_irreducible(&self) -> bool {
        self.find_square().is_none()
    }

    /// The unique irreducible ancestor, obtained by repeatedly deleting the
    /// leftmost square block. Uniqueness of the root makes the deletion order
    /// irrelevant; leftmost-first keeps the procedure deterministic.
    pub fn root(&self) -> GString {
        let mut cur = self.clone();
        while let Some(j) = cur.find_square() {
            cur.symbols.drain(j..j + cur.k);
        }
        cur
    }

    /// Exact set of t-descendants; D^0(x) = {x}.
    pub fn descendants(&self, t: u64) -> BTreeSet<GString> {
        let mut level: BTreeSet<GString> = BTreeSet::new();
        level.insert(self.clone());
        for _ in 0..t {
            let mut next = BTreeSet::new();
            for s in &level {
                for i in 0..=s.len() - s.k {
                    next.insert(s.tandem_duplicate(i).expect("index in range"));
                }
            }
            level = next;
        }
        level
    }

    /// True when both strings reduce to the same duplication root.
    pub fn same_cone(&self, other: &GString) -> Result<bool> {
        if self.q != other.q || self.k != other.k {
            return Err(Error::ParameterMismatch);
        }
        Ok(self.root() == other.root())
    }
}

impl fmt::Display for GString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// A descendant cone, identified by its irreducible root and a level within.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    root: GString,
    level: u64,
}

impl Cone {
    /// Classifies y into its cone: root plus level (|y| - |root|) / k.
    pub fn of(y: &GString) -> Cone {
        let root = y.root();
        let level = ((y.len() - root.len()) / y.k()) as u64;
        Cone { root, level }
    }

    pub fn root(&self) -> &GString {
        &self.root
    }

    pub fn level(&self) -> u64 {
        self.level
    }
}
