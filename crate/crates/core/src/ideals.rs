//! Thick tensor ideals of the bounded homotopy category of the semisimple
//! fragment, described through simple multiplicities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::engine::SumObject;
use crate::weyl::{k0, k0_sum, WeylElement};
use crate::words::{Simple, Word};

/// A split complex: simple multiplicities in each degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SplitObject {
    pub degrees: BTreeMap<i64, BTreeMap<Simple, u64>>,
}

fn multiplicities(e: &WeylElement) -> BTreeMap<Simple, u64> {
    e.as_multiplicities().expect("classes of objects have nonnegative coefficients")
}

impl SplitObject {
    pub fn zero() -> Self {
        SplitObject::default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    fn from_class(e: &WeylElement, degree: i64) -> Self {
        let m = multiplicities(e);
        let mut out = SplitObject::zero();
        if !m.is_empty() {
            out.degrees.insert(degree, m);
        }
        out
    }

    pub fn simples(&self) -> BTreeSet<Simple> {
        self.degrees.values().flat_map(|m| m.keys().copied()).collect()
    }

    /// Shift every degree by `k`.
    pub fn shift(&self, k: i64) -> Self {
        SplitObject { degrees: self.degrees.iter().map(|(&d, m)| (d + k, m.clone())).collect() }
    }

    pub fn direct_sum(&self, other: &SplitObject) -> Self {
        let mut out = self.clone();
        for (&d, m) in &other.degrees {
            let slot = out.degrees.entry(d).or_default();
            for (&s, &n) in m {
                *slot.entry(s).or_insert(0) += n;
            }
        }
        out
    }

    /// Tensor product, degrees adding.
    pub fn tensor(&self, other: &SplitObject) -> Self {
        let mut out = SplitObject::zero();
        for ((&d1, m1), (&d2, m2)) in self.degrees.iter().cartesian_product(&other.degrees) {
            for ((s1, &n1), (s2, &n2)) in m1.iter().cartesian_product(m2) {
                let class = k0(&s1.word().tensor(&s2.word())).scale(&(n1 * n2).into());
                out = out.direct_sum(&SplitObject::from_class(&class, d1 + d2));
            }
        }
        out
    }

    /// Largest `k` with `k · other` a summand of `self` degreewise;
    /// `None` when `other` is zero.
    pub fn summand_multiplicity(&self, other: &SplitObject) -> Option<u64> {
        other
            .degrees
            .iter()
            .flat_map(|(d, m)| m.iter().map(move |(s, &n)| (d, s, n)))
            .map(|(d, s, n)| {
                let have = self.degrees.get(d).and_then(|m| m.get(s)).copied().unwrap_or(0);
                have / n
            })
            .min()
    }
}

/// Homology of a word placed in one degree.
pub fn split(w: &Word, degree: i64) -> SplitObject {
    SplitObject::from_class(&k0(w), degree)
}

pub fn split_sum(s: &SumObject, degree: i64) -> SplitObject {
    SplitObject::from_class(&k0_sum(s), degree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// Canonical form of a thick ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "form", content = "index")]
pub enum IdealDescriptor {
    Whole,
    RightChain(u32),
    LeftChain(u32),
    Zero,
}

impl IdealDescriptor {
    pub fn right(i: u32) -> Self {
        if i == 0 {
            IdealDescriptor::Whole
        } else {
            IdealDescriptor::RightChain(i)
        }
    }

    pub fn left(j: u32) -> Self {
        if j == 0 {
            IdealDescriptor::Whole
        } else {
            IdealDescriptor::LeftChain(j)
        }
    }

    pub fn contains_simple(&self, s: Simple) -> bool {
        match *self {
            IdealDescriptor::Whole => true,
            IdealDescriptor::Zero => false,
            IdealDescriptor::RightChain(i) => s.ups >= i as usize,
            IdealDescriptor::LeftChain(j) => s.downs >= j as usize,
        }
    }

    /// Simples with both exponents at most `bound` lying in the ideal.
    pub fn simples_up_to(&self, bound: usize) -> BTreeSet<Simple> {
        simples_up_to(bound).into_iter().filter(|&s| self.contains_simple(s)).collect()
    }

    /// Left and right chains exchanged.
    pub fn mirror(&self) -> Self {
        match *self {
            IdealDescriptor::RightChain(i) => IdealDescriptor::LeftChain(i),
            IdealDescriptor::LeftChain(j) => IdealDescriptor::RightChain(j),
            other => other,
        }
    }
}

impl fmt::Display for IdealDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealDescriptor::Whole => f.write_str("Whole"),
            IdealDescriptor::Zero => f.write_str("Zero"),
            IdealDescriptor::RightChain(i) => write!(f, "RightChain({i})"),
            IdealDescriptor::LeftChain(j) => write!(f, "LeftChain({j})"),
        }
    }
}

fn simples_up_to(bound: usize) -> Vec<Simple> {
    (0..=bound).cartesian_product(0..=bound).map(|(a, b)| Simple::new(a, b)).collect()
}

/// The thick ideal generated on `side` by `gens`.
pub fn ideal_generated(side: Side, gens: &[SplitObject]) -> IdealDescriptor {
    let simples: Vec<Simple> = gens.iter().flat_map(|g| g.simples()).collect();
    if simples.is_empty() {
        return IdealDescriptor::Zero;
    }
    match side {
        Side::Right => IdealDescriptor::right(simples.iter().map(|s| s.ups).min().expect("nonempty") as u32),
        Side::Left => IdealDescriptor::left(simples.iter().map(|s| s.downs).min().expect("nonempty") as u32),
        Side::TwoSided => IdealDescriptor::Whole,
    }
}

pub fn ideal_member(ideal: IdealDescriptor, x: &SplitObject) -> bool {
    x.simples().into_iter().all(|s| ideal.contains_simple(s))
}

/// Whether `a ⊆ b`, compared on simples with exponents at most `bound`.
pub fn included(a: IdealDescriptor, b: IdealDescriptor, bound: usize) -> bool {
    a.simples_up_to(bound).is_subset(&b.simples_up_to(bound))
}

/// Distinct ideals generated by single words of length at most `max_len`,
/// plus the zero ideal, from largest to smallest.
///
/// # Panics
/// If the ideals found do not form a chain.
pub fn enumerate_ideals(side: Side, max_len: usize) -> Vec<IdealDescriptor> {
    let mut found: BTreeSet<IdealDescriptor> =
        Word::all_up_to(max_len).iter().map(|w| ideal_generated(side, &[split(w, 0)])).collect();
    found.insert(IdealDescriptor::Zero);
    let mut out: Vec<IdealDescriptor> = found.into_iter().collect();
    let size = |d: &IdealDescriptor| d.simples_up_to(max_len).len();
    out.sort_by_key(|d| std::cmp::Reverse(size(d)));
    for (a, b) in out.iter().tuple_windows() {
        assert!(included(*b, *a, max_len) && a != b, "{a} and {b} are not nested");
    }
    out
}

/// Saturation of a set of simples under one-sided tensoring by words,
/// truncated to simples with both exponents at most `cap`.
#[derive(Clone, Debug)]
pub struct BruteClosure {
    pub side: Side,
    pub tensor_len: usize,
    pub cap: usize,
    pub simples: BTreeSet<Simple>,
}

impl BruteClosure {
    pub fn generate(side: Side, gens: &[Word], tensor_len: usize, cap: usize) -> Self {
        let mut simples: BTreeSet<Simple> =
            gens.iter().flat_map(|g| split(g, 0).simples()).filter(|s| s.ups <= cap && s.downs <= cap).collect();
        let words = Word::all_up_to(tensor_len);
        let mut frontier: Vec<Simple> = simples.iter().copied().collect();
        while let Some(s) = frontier.pop() {
            for y in &words {
                let mut products = Vec::new();
                if side != Side::Left {
                    products.push(s.word().tensor(y));
                }
                if side != Side::Right {
                    products.push(y.tensor(&s.word()));
                }
                for p in products {
                    for t in split(&p, 0).simples() {
                        if t.ups <= cap && t.downs <= cap && simples.insert(t) {
                            frontier.push(t);
                        }
                    }
                }
            }
        }
        BruteClosure { side, tensor_len, cap, simples }
    }

    pub fn contains(&self, s: Simple) -> bool {
        self.simples.contains(&s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportCheck {
    pub object: String,
    pub zero: bool,
    pub support: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpcReport {
    pub sample_length: usize,
    pub primes: Vec<IdealDescriptor>,
    pub completely_prime: bool,
    pub zero_divisor_pairs_checked: usize,
    pub supports: Vec<SupportCheck>,
    pub support_of_nonzero_is_point: bool,
    pub support_of_zero_is_empty: bool,
    pub tensor_pairs_checked: usize,
    pub tensor_product_property: bool,
}

fn sample_objects(len: usize) -> Vec<(String, SplitObject)> {
    let mut out = vec![("0".to_string(), SplitObject::zero())];
    let words = Word::all_up_to(len);
    out.extend(words.iter().map(|w| (w.to_string(), split(w, 0))));
    for (a, b) in words.iter().filter(|w| w.len() <= 1).tuple_combinations() {
        out.push((format!("{a} + {b}[1]"), split(a, 0).direct_sum(&split(b, 1))));
    }
    out
}

/// Whether a two-sided ideal is prime on the sample.
fn is_prime_on(ideal: IdealDescriptor, samples: &[(String, SplitObject)]) -> bool {
    if ideal == IdealDescriptor::Whole {
        return false;
    }
    samples.iter().cartesian_product(samples).all(|((_, x), (_, y))| {
        !ideal_member(ideal, &x.tensor(y)) || ideal_member(ideal, x) || ideal_member(ideal, y)
    })
}

/// Prime ideals, supports, and the tensor product property on objects built
/// from words of length at most `sample_length`.
pub fn spc_report(sample_length: usize) -> SpcReport {
    let samples = sample_objects(sample_length);
    let primes: Vec<IdealDescriptor> = enumerate_ideals(Side::TwoSided, sample_length)
        .into_iter()
        .filter(|&p| is_prime_on(p, &samples))
        .collect();
    let support = |x: &SplitObject| -> Vec<String> {
        primes.iter().filter(|&&p| !ideal_member(p, x)).map(|_| "*".to_string()).collect()
    };
    let words = Word::all_up_to(sample_length);
    let classes: Vec<WeylElement> = words.iter().map(k0).collect();
    let completely_prime = classes.iter().cartesian_product(&classes).all(|(a, b)| !(a * b).is_zero());
    let supports: Vec<SupportCheck> = samples
        .iter()
        .map(|(name, x)| SupportCheck { object: name.clone(), zero: x.is_zero(), support: support(x) })
        .collect();
    let support_of_nonzero_is_point = supports.iter().filter(|s| !s.zero).all(|s| s.support == ["*"]);
    let support_of_zero_is_empty = supports.iter().filter(|s| s.zero).all(|s| s.support.is_empty());
    let tensor_product_property = samples.iter().cartesian_product(&samples).all(|((_, x), (_, y))| {
        let (sx, sy): (BTreeSet<String>, BTreeSet<String>) = (support(x).into_iter().collect(), support(y).into_iter().collect());
        let sxy: BTreeSet<String> = support(&x.tensor(y)).into_iter().collect();
        sxy == sx.intersection(&sy).cloned().collect()
    });
    SpcReport {
        sample_length,
        primes,
        completely_prime,
        zero_divisor_pairs_checked: classes.len() * classes.len(),
        supports,
        support_of_nonzero_is_point,
        support_of_zero_is_empty,
        tensor_pairs_checked: samples.len() * samples.len(),
        tensor_product_property,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OpenSet {
    pub n: usize,
    pub support: Vec<IdealDescriptor>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiSupport {
    pub truncation: usize,
    pub points: Vec<IdealDescriptor>,
    pub all_meet_prime: bool,
    pub opens: Vec<OpenSet>,
}

/// Proper right ideals at truncation `l`, checked meet-prime in the
/// truncated lattice, with the supports of `↑ⁿ` for `n < l`.
pub fn quasi_support_points(l: usize) -> QuasiSupport {
    let lattice = enumerate_ideals(Side::Right, l);
    let points: Vec<IdealDescriptor> = lattice.iter().copied().filter(|&d| d != IdealDescriptor::Whole).collect();
    let set = |d: IdealDescriptor| d.simples_up_to(l);
    let meet = |a: IdealDescriptor, b: IdealDescriptor| -> IdealDescriptor {
        let m: BTreeSet<Simple> = set(a).intersection(&set(b)).copied().collect();
        *lattice.iter().find(|&&d| set(d) == m).expect("lattice closed under meets")
    };
    let all_meet_prime = points.iter().all(|&p| {
        lattice.iter().cartesian_product(&lattice).all(|(&a, &b)| {
            !included(meet(a, b), p, l) || included(a, p, l) || included(b, p, l)
        })
    });
    let opens = (0..l)
        .map(|n| {
            let x = split(&Word::ups(n), 0);
            OpenSet { n, support: points.iter().copied().filter(|&p| !ideal_member(p, &x)).collect() }
        })
        .collect();
    QuasiSupport { truncation: l, points, all_meet_prime, opens }
}
