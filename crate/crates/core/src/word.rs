//! Letters of the symplectic alphabet and words over it.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Genus `g`; the alphabet has `2g` letters.
pub type Genus = u8;

pub fn check_genus(g: Genus) -> Result<()> {
    if g == 0 {
        Err(Error::InvalidGenus)
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    A,
    B,
}

/// A symplectic basis letter `A_i` or `B_i`.
///
/// Letters are ordered `a1 < b1 < a2 < b2 < ...`, which fixes the
/// lexicographic order of words and necklaces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    /// `index` is 1-based.
    pub fn new(kind: LetterKind, index: u8) -> Self {
        assert!(index >= 1, "letter index is 1-based");
        let k = match kind {
            LetterKind::A => 0,
            LetterKind::B => 1,
        };
        Letter(2 * (index - 1) + k)
    }

    pub fn a(index: u8) -> Self {
        Self::new(LetterKind::A, index)
    }

    pub fn b(index: u8) -> Self {
        Self::new(LetterKind::B, index)
    }

    pub fn kind(self) -> LetterKind {
        if self.0 % 2 == 0 {
            LetterKind::A
        } else {
            LetterKind::B
        }
    }

    pub fn index(self) -> u8 {
        self.0 / 2 + 1
    }

    /// Position in the ordered alphabet, starting at 0.
    pub fn code(self) -> u8 {
        self.0
    }

    pub fn from_code(code: u8) -> Self {
        Letter(code)
    }

    /// The symplectic partner: `A_i <-> B_i`.
    pub fn partner(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// `A_i . B_i = 1`, `B_i . A_i = -1`, everything else 0.
    #[inline]
    pub fn pair(self, other: Letter) -> i64 {
        if self.0 ^ 1 != other.0 {
            0
        } else if self.0 % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Torus weight: `+1` in slot `i` for `A_i`, `-1` for `B_i`.
    pub fn charge(self) -> (usize, i32) {
        let slot = (self.0 / 2) as usize;
        match self.kind() {
            LetterKind::A => (slot, 1),
            LetterKind::B => (slot, -1),
        }
    }

    pub fn check(self, g: Genus) -> Result<()> {
        if self.index() > g {
            Err(Error::LetterOutOfRange {
                index: self.index(),
                genus: g,
            })
        } else {
            Ok(())
        }
    }

    /// All `2g` letters in alphabet order.
    pub fn alphabet(g: Genus) -> impl Iterator<Item = Letter> {
        (0..2 * g).map(Letter)
    }
}

/// The symplectic pairing `x . y` as a scalar.
pub fn pairing(x: Letter, y: Letter) -> Scalar {
    Scalar::from_int(x.pair(y))
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind() {
            LetterKind::A => 'a',
            LetterKind::B => 'b',
        };
        write!(f, "{k}{}", self.index())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            offset: 1,
            message: format!("invalid letter `{s}`"),
        };
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('a') | Some('A') => LetterKind::A,
            Some('b') | Some('B') => LetterKind::B,
            _ => return Err(bad()),
        };
        let index: u8 = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 || index > 127 {
            return Err(bad());
        }
        Ok(Letter::new(kind, index))
    }
}

/// A word in the letters; the empty word is the unit of the tensor algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub SmallVec<[Letter; 12]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The rotation starting at position `i`.
    pub fn rotate(&self, i: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let mut v = SmallVec::with_capacity(n);
        v.extend_from_slice(&self.0[i % n..]);
        v.extend_from_slice(&self.0[..i % n]);
        Word(v)
    }

    /// Smallest `d` with `rotate(d) == self`.
    pub fn period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|k| self.0[k] == self.0[(k + d) % n]))
            .unwrap_or(0)
    }

    /// Summed torus weight, one entry per symplectic pair.
    pub fn charge(&self, g: Genus) -> Vec<i32> {
        let mut c = vec![0; g as usize];
        for l in &self.0 {
            let (slot, s) = l.charge();
            c[slot] += s;
        }
        c
    }

    pub fn check(&self, g: Genus) -> Result<()> {
        self.0.iter().try_for_each(|l| l.check(g))
    }

    /// All words of length `m` over the `2g` letters, lexicographically.
    pub fn all(g: Genus, m: usize) -> Vec<Word> {
        let k = 2 * g as usize;
        let total = k.pow(m as u32);
        (0..total)
            .map(|mut n| {
                let mut v: SmallVec<[Letter; 12]> = SmallVec::from_elem(Letter(0), m);
                for slot in (0..m).rev() {
                    v[slot] = Letter((n % k) as u8);
                    n /= k;
                }
                Word(v)
            })
            .collect()
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("1")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Space-separated letters; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_table() {
        let (a1, b1, a2) = (Letter::a(1), Letter::b(1), Letter::a(2));
        assert_eq!(pairing(a1, b1), Scalar::one());
        assert_eq!(pairing(b1, a1), Scalar::from_int(-1));
        assert_eq!(pairing(a1, Letter::b(2)), Scalar::zero());
        assert_eq!(pairing(a1, a1), Scalar::zero());
        assert_eq!(pairing(a1, a2), Scalar::zero());
    }

    #[test]
    fn pairing_matrix_has_determinant_one() {
        // Block-diagonal with blocks [[0,1],[-1,0]]; compute the determinant
        // by cofactor expansion on the 2g x 2g integer matrix.
        fn det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            (0..n)
                .filter(|&j| m[0][j] != 0)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(k, _)| k != j)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * det(&minor)
                })
                .sum()
        }
        for g in 1..=3u8 {
            let letters: Vec<Letter> = Letter::alphabet(g).collect();
            let m: Vec<Vec<i64>> = letters
                .iter()
                .map(|x| letters.iter().map(|y| x.pair(*y)).collect())
                .collect();
            for x in &letters {
                for y in &letters {
                    assert_eq!(x.pair(*y), -y.pair(*x));
                }
            }
            assert_eq!(det(&m), 1);
        }
    }

    #[test]
    fn word_text_round_trip() {
        let w: Word = "a1 b2 a1".parse().unwrap();
        assert_eq!(w.weight(), 3);
        assert_eq!(w.to_string(), "a1 b2 a1");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("c1".parse::<Word>().is_err());
    }

    #[test]
    fn period_and_rotation() {
        let w: Word = "a1 b1 a1 b1".parse().unwrap();
        assert_eq!(w.period(), 2);
        assert_eq!(w.rotate(1).to_string(), "b1 a1 b1 a1");
        assert_eq!("a1 a1 b1".parse::<Word>().unwrap().period(), 3);
    }

    #[test]
    fn all_words_count() {
        assert_eq!(Word::all(2, 3).len(), 64);
        assert_eq!(Word::all(1, 0), vec![Word::empty()]);
    }
}
