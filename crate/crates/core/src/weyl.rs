//! The integral Weyl algebra `ℤ⟨x, ∂⟩ / (∂x − x∂ − 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::engine::SumObject;
use crate::error::{HeisError, Result};
use crate::words::{Orientation, Simple, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylLetter {
    X,
    D,
}

/// A coefficient times a product of letters, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylWord {
    pub letters: Vec<WeylLetter>,
    pub coefficient: BigInt,
}

impl WeylWord {
    pub fn new(letters: Vec<WeylLetter>) -> Self {
        WeylWord { letters, coefficient: BigInt::one() }
    }

    pub fn from_word(w: &Word) -> Self {
        WeylWord::new(
            w.letters()
                .iter()
                .map(|o| match o {
                    Orientation::Up => WeylLetter::X,
                    Orientation::Down => WeylLetter::D,
                })
                .collect(),
        )
    }
}

impl FromStr for WeylWord {
    type Err = HeisError;

    /// Letters `x` and `d` (or `∂`); `1` or the empty string is the unit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(WeylWord::new(Vec::new()));
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(WeylLetter::X),
                'd' | '∂' => Ok(WeylLetter::D),
                _ => Err(HeisError::BadWord(format!("unexpected letter {c:?} in Weyl word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(WeylWord::new)
    }
}

/// Parse a formal sum such as `ddxx + 2xd - 3`.
pub fn parse_weyl_sum(text: &str) -> Result<Vec<WeylWord>> {
    let cleaned = text.replace(' ', "");
    if cleaned.is_empty() {
        return Err(HeisError::BadWord("empty Weyl expression".into()));
    }
    let mut out = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if out.is_empty() => (1, rest),
            _ => return Err(HeisError::BadWord(format!("expected + or - in {text:?}"))),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let digits = term.chars().take_while(char::is_ascii_digit).count();
        let (coeff, letters) = term.split_at(digits);
        let coeff: BigInt = if coeff.is_empty() { BigInt::one() } else { coeff.parse().expect("digits") };
        let mut w: WeylWord = if letters.is_empty() && digits > 0 { WeylWord::new(Vec::new()) } else { letters.parse()? };
        w.coefficient = coeff * sign;
        out.push(w);
    }
    Ok(out)
}

/// `Σ c_ij xⁱ∂ʲ` in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylElement {
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t))
}

fn binomial(n: u32, k: u32) -> BigInt {
    falling(n, k) / falling(k, k)
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    pub fn one() -> Self {
        WeylElement::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(i: u32, j: u32, c: BigInt) -> Self {
        let mut e = WeylElement::zero();
        e.add_term(i, j, c);
        e
    }

    pub fn x() -> Self {
        WeylElement::monomial(1, 0, BigInt::one())
    }

    pub fn d() -> Self {
        WeylElement::monomial(0, 1, BigInt::one())
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = WeylElement::zero();
        for (&(i, j), v) in &self.coeffs {
            out.add_term(i, j, v * c);
        }
        out
    }

    /// Total degree `i + j` of the highest monomial; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    /// The element as simple multiplicities, when all coefficients are
    /// nonnegative.
    pub fn as_multiplicities(&self) -> Option<BTreeMap<Simple, u64>> {
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| {
                let n = u64::try_from(c).ok()?;
                Some((Simple::new(i as usize, j as usize), n))
            })
            .collect()
    }

    /// Apply as a differential operator (`x` = multiply by `t`, `∂` = `d/dt`)
    /// to a polynomial given as exponent → coefficient.
    pub fn apply(&self, poly: &BTreeMap<u32, BigInt>) -> BTreeMap<u32, BigInt> {
        let mut out: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (&(i, j), c) in &self.coeffs {
            for (&k, a) in poly {
                if k < j {
                    continue;
                }
                *out.entry(k - j + i).or_default() += c * a * falling(k, j);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;

    fn add(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.coeffs {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;

    /// `(xᵃ∂ᵇ)(xᶜ∂ᵈ) = Σₖ C(b,k)·c!/(c−k)!·xᵃ⁺ᶜ⁻ᵏ∂ᵇ⁺ᵈ⁻ᵏ`.
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        let mut out = WeylElement::zero();
        for (&(a, b), u) in &self.coeffs {
            for (&(c, d), v) in &rhs.coeffs {
                for k in 0..=b.min(c) {
                    out.add_term(a + c - k, b + d - k, u * v * binomial(b, k) * falling(c, k));
                }
            }
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let power = |v: &str, e: u32| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        for (n, (&(i, j), c)) in self.coeffs.iter().rev().enumerate() {
            let mono = format!("{}{}", power("x", i), power("∂", j));
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct CoeffEntry<'a> {
    i: u32,
    j: u32,
    #[serde(serialize_with = "integer")]
    c: &'a BigInt,
}

/// A JSON number when it fits in `i64`, a decimal string otherwise.
fn integer<S: Serializer>(c: &&BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&c.to_string()),
    }
}

impl Serialize for WeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<CoeffEntry> =
            self.coeffs.iter().map(|(&(i, j), c)| CoeffEntry { i, j, c }).collect();
        let mut st = s.serialize_struct("WeylElement", 1)?;
        st.serialize_field("coeffs", &entries)?;
        st.end()
    }
}

/// Normal form of a formal sum of Weyl words.
pub fn normal_order(terms: &[WeylWord]) -> WeylElement {
    let mut out = WeylElement::zero();
    for t in terms {
        let mut acc = WeylElement::monomial(0, 0, t.coefficient.clone());
        for l in &t.letters {
            acc = &acc
                * &match l {
                    WeylLetter::X => WeylElement::x(),
                    WeylLetter::D => WeylElement::d(),
                };
        }
        out = &out + &acc;
    }
    out
}

/// The class of a word in `K₀ ≅ A₁`: `↑ ↦ x`, `↓ ↦ ∂`.
pub fn k0(w: &Word) -> WeylElement {
    normal_order(&[WeylWord::from_word(w)])
}

pub fn k0_sum(s: &SumObject) -> WeylElement {
    s.summands.iter().fold(WeylElement::zero(), |acc, w| &acc + &k0(w))
}

/// Isomorphism of objects, decided by equality of `K₀` classes.
pub fn iso_objects(a: &SumObject, b: &SumObject) -> bool {
    k0_sum(a) == k0_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ww(s: &str) -> WeylWord {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(normal_order(&[ww("dx")]).to_string(), "x∂ + 1");
        assert_eq!(normal_order(&[ww("xd")]).to_string(), "x∂");
        assert_eq!(normal_order(&[ww("ddxx")]).to_string(), "x^2∂^2 + 4x∂ + 2");
        assert_eq!(k0(&"".parse().unwrap()), WeylElement::one());
    }

    #[test]
    fn sums_parse() {
        let e = normal_order(&parse_weyl_sum("dx - xd").unwrap());
        assert_eq!(e, WeylElement::one());
        assert_eq!(normal_order(&parse_weyl_sum("2xd + 3").unwrap()).to_string(), "2x∂ + 3");
        assert!(parse_weyl_sum("xq").is_err());
    }

    #[test]
    fn signed_display() {
        let mut e = WeylElement::monomial(1, 0, BigInt::from(-2));
        e.add_term(0, 0, BigInt::from(-1));
        assert_eq!(e.to_string(), "-2x - 1");
    }
}
