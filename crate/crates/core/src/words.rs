//! Objects of the Heisenberg category: finite words in `↑` and `↓`.
//!
//! Words serialize over the alphabet `u`/`d`, with `"1"` standing for the
//! empty word (the tensor unit).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::HeisError;

/// Orientation of a single strand endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Orientation::Up => 'u',
            Orientation::Down => 'd',
        }
    }
}

/// A tensor product of generating objects, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Orientation>);

impl Word {
    pub fn new(letters: Vec<Orientation>) -> Self {
        Word(letters)
    }

    /// The tensor unit.
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn up() -> Self {
        Word(vec![Orientation::Up])
    }

    pub fn down() -> Self {
        Word(vec![Orientation::Down])
    }

    pub fn ups(n: usize) -> Self {
        Word(vec![Orientation::Up; n])
    }

    pub fn downs(n: usize) -> Self {
        Word(vec![Orientation::Down; n])
    }

    pub fn letters(&self) -> &[Orientation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Orientation {
        self.0[i]
    }

    pub fn count_up(&self) -> usize {
        self.0.iter().filter(|&&o| o == Orientation::Up).count()
    }

    pub fn count_down(&self) -> usize {
        self.0.len() - self.count_up()
    }

    /// Tensor product: concatenation.
    pub fn tensor(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The dual object: reversed, every orientation flipped.
    pub fn dual(&self) -> Word {
        Word(self.0.iter().rev().map(|o| o.flip()).collect())
    }

    /// `Some(Simple(i, j))` exactly when the word is `u^i d^j`.
    pub fn as_simple(&self) -> Option<Simple> {
        let ups = self.0.iter().take_while(|&&o| o == Orientation::Up).count();
        if self.0[ups..].iter().all(|&o| o == Orientation::Down) {
            Some(Simple::new(ups, self.0.len() - ups))
        } else {
            None
        }
    }

    /// Index of the leftmost `du` factor, if any.
    pub fn leftmost_du(&self) -> Option<usize> {
        self.0
            .windows(2)
            .position(|w| w[0] == Orientation::Down && w[1] == Orientation::Up)
    }

    /// Sub-word on `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// All words of length exactly `len`, in lexicographic order (`u < d`).
    pub fn all_of_length(len: usize) -> Vec<Word> {
        (0..1usize << len)
            .map(|bits| {
                Word(
                    (0..len)
                        .map(|i| {
                            if bits >> (len - 1 - i) & 1 == 1 {
                                Orientation::Down
                            } else {
                                Orientation::Up
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(Word::all_of_length).collect()
    }
}

pub fn tensor(a: &Word, b: &Word) -> Word {
    a.tensor(b)
}

pub fn dual_word(w: &Word) -> Word {
    w.dual()
}

pub fn as_simple(w: &Word) -> Option<Simple> {
    w.as_simple()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for o in &self.0 {
            write!(f, "{}", o.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = HeisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::unit());
        }
        s.chars()
            .map(|c| match c {
                'u' | 'U' | '↑' => Ok(Orientation::Up),
                'd' | 'D' | '↓' => Ok(Orientation::Down),
                other => Err(HeisError::BadWord(format!("unexpected character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The simple object `↑^ups ⊗ ↓^downs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simple {
    pub ups: usize,
    pub downs: usize,
}

impl Simple {
    pub fn new(ups: usize, downs: usize) -> Self {
        Simple { ups, downs }
    }

    pub fn word(&self) -> Word {
        Word::ups(self.ups).tensor(&Word::downs(self.downs))
    }
}

impl fmt::Display for Simple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.ups, self.downs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&w("du"), &w("u")), w("duu"));
        assert_eq!(tensor(&w(""), &w("ud")), w("ud"));
        assert_eq!(tensor(&w("u"), &w("d")), w("ud"));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_word(&w("udd")), w("uud"));
        assert_eq!(dual_word(&w("")), w(""));
        assert_eq!(dual_word(&w("u")), w("d"));
    }

    #[test]
    fn simple_recognition() {
        assert_eq!(as_simple(&w("uudd")), Some(Simple::new(2, 2)));
        assert_eq!(as_simple(&w("du")), None);
        assert_eq!(as_simple(&w("")), Some(Simple::new(0, 0)));
    }

    #[test]
    fn unit_serializes_as_one() {
        assert_eq!(Word::unit().to_string(), "1");
        assert_eq!(w("1"), Word::unit());
        assert!("ux".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Word::all_of_length(3).len(), 8);
        assert_eq!(Word::all_up_to(3).len(), 15);
    }

    #[test]
    fn dual_involution_and_antihomomorphism() {
        let words = Word::all_up_to(6);
        for a in &words {
            assert_eq!(a.dual().dual(), *a);
        }
        for a in Word::all_up_to(3) {
            for b in Word::all_up_to(3) {
                assert_eq!(a.tensor(&b).dual(), b.dual().tensor(&a.dual()));
            }
        }
    }

    #[test]
    fn simple_iff_no_du() {
        for x in Word::all_up_to(6) {
            let has_du = x.to_string().contains("du");
            assert_eq!(x.as_simple().is_none(), has_du, "{x}");
        }
    }
}
