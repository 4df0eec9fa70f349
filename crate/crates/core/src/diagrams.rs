//! The standard basis of Hom spaces.
//!
//! A basis diagram is an `(X,Y)`-matching together with per-string dot counts
//! and a multiset of clockwise bubbles. Crossings are never stored: the
//! crossing-minimal realization of a matching has a crossing between two
//! strings exactly when their endpoints interleave in the cyclic boundary order
//! (bottom left to right, then top right to left).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{HeisError, Result};
use crate::words::{Orientation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundarySide {
    Bottom,
    Top,
}

/// A point on the bottom (source) or top (target) boundary. `index` is 0-based;
/// the text and JSON forms are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    pub side: BoundarySide,
    pub index: usize,
}

impl BoundaryPoint {
    pub fn bottom(index: usize) -> Self {
        BoundaryPoint { side: BoundarySide::Bottom, index }
    }

    pub fn top(index: usize) -> Self {
        BoundaryPoint { side: BoundarySide::Top, index }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            BoundarySide::Bottom => 'B',
            BoundarySide::Top => 'T',
        };
        write!(f, "{}{}", s, self.index + 1)
    }
}

/// A perfect matching of the boundary points of `source → target` respecting
/// orientations. Pairs are stored canonically: each pair is ordered by cyclic
/// position and the list is sorted by the first point's cyclic position, so the
/// first point of a pair is the string's canonical name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    source: Word,
    target: Word,
    pairs: Vec<(BoundaryPoint, BoundaryPoint)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StringKind {
    Cup,
    Cap,
    Bridge,
    Bubble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StringOrientation {
    Clockwise,
    Counterclockwise,
    Upward,
    Downward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StringProfile {
    pub kind: StringKind,
    pub orientation: StringOrientation,
}

impl Matching {
    /// Validates and canonicalizes a list of pairs.
    pub fn new(
        source: Word,
        target: Word,
        pairs: Vec<(BoundaryPoint, BoundaryPoint)>,
    ) -> Result<Self> {
        let n = source.len() + target.len();
        let mut seen = BTreeSet::new();
        let m = Matching { source, target, pairs: Vec::new() };
        for &(a, b) in &pairs {
            for p in [a, b] {
                let bound = match p.side {
                    BoundarySide::Bottom => m.source.len(),
                    BoundarySide::Top => m.target.len(),
                };
                if p.index >= bound {
                    return Err(HeisError::BadDiagram(format!("point {p} out of range")));
                }
                if !seen.insert(p) {
                    return Err(HeisError::BadDiagram(format!("point {p} used twice")));
                }
            }
            if m.is_outgoing(a) == m.is_outgoing(b) {
                return Err(HeisError::BadDiagram(format!(
                    "pair {a}-{b} joins two endpoints of the same kind"
                )));
            }
        }
        if seen.len() != n {
            return Err(HeisError::BadDiagram("not every boundary point is matched".into()));
        }
        Ok(Matching::from_pairs_unchecked(m.source, m.target, pairs))
    }

    pub(crate) fn from_pairs_unchecked(
        source: Word,
        target: Word,
        pairs: Vec<(BoundaryPoint, BoundaryPoint)>,
    ) -> Self {
        let mut m = Matching { source, target, pairs: Vec::new() };
        let mut canon: Vec<_> = pairs
            .into_iter()
            .map(|(a, b)| if m.cyclic(a) <= m.cyclic(b) { (a, b) } else { (b, a) })
            .collect();
        canon.sort_by_key(|&(a, _)| m.cyclic(a));
        m.pairs = canon;
        m
    }

    pub fn identity(w: &Word) -> Self {
        let pairs = (0..w.len())
            .map(|i| (BoundaryPoint::bottom(i), BoundaryPoint::top(i)))
            .collect();
        Matching::from_pairs_unchecked(w.clone(), w.clone(), pairs)
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn pairs(&self) -> &[(BoundaryPoint, BoundaryPoint)] {
        &self.pairs
    }

    pub fn num_strings(&self) -> usize {
        self.pairs.len()
    }

    /// Position in the cyclic boundary order.
    pub fn cyclic(&self, p: BoundaryPoint) -> usize {
        match p.side {
            BoundarySide::Bottom => p.index,
            BoundarySide::Top => self.source.len() + (self.target.len() - 1 - p.index),
        }
    }

    /// Orientation of the boundary letter at `p`.
    pub fn orientation_at(&self, p: BoundaryPoint) -> Orientation {
        match p.side {
            BoundarySide::Bottom => self.source.get(p.index),
            BoundarySide::Top => self.target.get(p.index),
        }
    }

    /// Whether the strand leaves the diagram's boundary point going into the
    /// interior in its direction of travel (bottom `↑`, top `↓`).
    pub fn is_outgoing(&self, p: BoundaryPoint) -> bool {
        matches!(
            (p.side, self.orientation_at(p)),
            (BoundarySide::Bottom, Orientation::Up) | (BoundarySide::Top, Orientation::Down)
        )
    }

    /// String index containing `p`.
    pub fn string_at(&self, p: BoundaryPoint) -> usize {
        self.pairs
            .iter()
            .position(|&(a, b)| a == p || b == p)
            .expect("boundary point belongs to a string")
    }

    pub fn partner(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (a, b) = self.pairs[self.string_at(p)];
        if a == p {
            b
        } else {
            a
        }
    }

    /// Whether strings `i` and `j` cross in the reduced lift.
    pub fn strings_cross(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = self.pairs[i];
        let (c, d) = self.pairs[j];
        let (a, b, c, d) = (self.cyclic(a), self.cyclic(b), self.cyclic(c), self.cyclic(d));
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    /// All crossing string pairs `(i, j)` with `i < j`.
    pub fn forced_crossings(&self) -> Vec<(usize, usize)> {
        (0..self.pairs.len())
            .tuple_combinations()
            .filter(|&(i, j)| self.strings_cross(i, j))
            .collect()
    }

    pub fn string_profile(&self, s: usize) -> StringProfile {
        let (a, b) = self.pairs[s];
        let kind = match (a.side, b.side) {
            (BoundarySide::Top, BoundarySide::Top) => StringKind::Cup,
            (BoundarySide::Bottom, BoundarySide::Bottom) => StringKind::Cap,
            _ => StringKind::Bridge,
        };
        let orientation = match kind {
            StringKind::Bridge => match self.orientation_at(a) {
                Orientation::Up => StringOrientation::Upward,
                Orientation::Down => StringOrientation::Downward,
            },
            _ => {
                let (left, right) = if a.index < b.index { (a, b) } else { (b, a) };
                debug_assert_ne!(self.orientation_at(left), self.orientation_at(right));
                if self.orientation_at(left) == Orientation::Up {
                    StringOrientation::Clockwise
                } else {
                    StringOrientation::Counterclockwise
                }
            }
        };
        StringProfile { kind, orientation }
    }

    /// Side-by-side juxtaposition: `self` on the left.
    pub fn juxtapose(&self, other: &Matching) -> Matching {
        let (bs, ts) = (self.source.len(), self.target.len());
        let shift = |p: BoundaryPoint| match p.side {
            BoundarySide::Bottom => BoundaryPoint::bottom(p.index + bs),
            BoundarySide::Top => BoundaryPoint::top(p.index + ts),
        };
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().map(|&(a, b)| (shift(a), shift(b))));
        Matching::from_pairs_unchecked(
            self.source.tensor(&other.source),
            self.target.tensor(&other.target),
            pairs,
        )
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {{", self.source, self.target)?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        f.write_str("}")
    }
}

/// A standard basis morphism: matching, dots per string, clockwise bubbles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisDiagram {
    matching: Matching,
    /// Keyed by the string's canonical name; zero counts are never stored.
    dots: BTreeMap<BoundaryPoint, u32>,
    /// Dot labels of clockwise bubbles, sorted.
    bubbles: Vec<u32>,
}

impl BasisDiagram {
    pub fn plain(matching: Matching) -> Self {
        BasisDiagram { matching, dots: BTreeMap::new(), bubbles: Vec::new() }
    }

    pub fn new(
        matching: Matching,
        dots: BTreeMap<BoundaryPoint, u32>,
        mut bubbles: Vec<u32>,
    ) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (p, n) in dots {
            let s = matching
                .pairs
                .iter()
                .position(|&(a, b)| a == p || b == p)
                .ok_or_else(|| HeisError::BadDiagram(format!("dot on unknown point {p}")))?;
            if n > 0 {
                *clean.entry(matching.pairs[s].0).or_insert(0) += n;
            }
        }
        bubbles.sort_unstable();
        Ok(BasisDiagram { matching, dots: clean, bubbles })
    }

    pub fn identity(w: &Word) -> Self {
        BasisDiagram::plain(Matching::identity(w))
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn source(&self) -> &Word {
        self.matching.source()
    }

    pub fn target(&self) -> &Word {
        self.matching.target()
    }

    pub fn dots(&self) -> &BTreeMap<BoundaryPoint, u32> {
        &self.dots
    }

    pub fn bubbles(&self) -> &[u32] {
        &self.bubbles
    }

    /// Dots on string `s`.
    pub fn dots_on(&self, s: usize) -> u32 {
        self.dots.get(&self.matching.pairs[s].0).copied().unwrap_or(0)
    }

    /// Element of `B₀`: no dots, no bubbles.
    pub fn is_undecorated(&self) -> bool {
        self.dots.is_empty() && self.bubbles.is_empty()
    }

    pub fn juxtapose(&self, other: &BasisDiagram) -> BasisDiagram {
        let matching = self.matching.juxtapose(&other.matching);
        let mut dots = BTreeMap::new();
        for s in 0..self.matching.num_strings() {
            let n = self.dots_on(s);
            if n > 0 {
                let (a, _) = self.matching.pairs[s];
                dots.insert(matching.pairs[matching.string_at(a)].0, n);
            }
        }
        let (bs, ts) = (self.source().len(), self.target().len());
        for s in 0..other.matching.num_strings() {
            let n = other.dots_on(s);
            if n > 0 {
                let (a, _) = other.matching.pairs[s];
                let p = match a.side {
                    BoundarySide::Bottom => BoundaryPoint::bottom(a.index + bs),
                    BoundarySide::Top => BoundaryPoint::top(a.index + ts),
                };
                dots.insert(matching.pairs[matching.string_at(p)].0, n);
            }
        }
        let mut bubbles = self.bubbles.clone();
        bubbles.extend_from_slice(&other.bubbles);
        bubbles.sort_unstable();
        BasisDiagram { matching, dots, bubbles }
    }
}

impl fmt::Display for BasisDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matching)?;
        if !self.dots.is_empty() {
            f.write_str(" dots[")?;
            for (k, (p, n)) in self.dots.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}:{n}")?;
            }
            f.write_str("]")?;
        }
        if !self.bubbles.is_empty() {
            write!(f, " bubbles{:?}", self.bubbles)?;
        }
        Ok(())
    }
}

/// All `(X,Y)`-matchings, ordered lexicographically by the image sequence of the
/// outgoing endpoints (bottom `↑` points, then top `↓` points).
pub fn enumerate_matchings(x: &Word, y: &Word) -> Vec<Matching> {
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for i in 0..x.len() {
        match x.get(i) {
            Orientation::Up => sources.push(BoundaryPoint::bottom(i)),
            Orientation::Down => targets.push(BoundaryPoint::bottom(i)),
        }
    }
    for j in 0..y.len() {
        match y.get(j) {
            Orientation::Down => sources.push(BoundaryPoint::top(j)),
            Orientation::Up => targets.push(BoundaryPoint::top(j)),
        }
    }
    if sources.len() != targets.len() {
        return Vec::new();
    }
    let n = sources.len();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let pairs = perm.iter().enumerate().map(|(k, &t)| (sources[k], targets[t])).collect();
            Matching::from_pairs_unchecked(x.clone(), y.clone(), pairs)
        })
        .collect()
}

pub fn forced_crossings(m: &Matching) -> Vec<(usize, usize)> {
    m.forced_crossings()
}

pub fn string_profile(m: &Matching, s: usize) -> StringProfile {
    m.string_profile(s)
}

/// Membership in the semisimple fragment: no decorations, only counterclockwise
/// cups and caps, and bridges cross only when oppositely oriented.
pub fn is_restricted(d: &BasisDiagram) -> bool {
    if !d.is_undecorated() {
        return false;
    }
    let m = d.matching();
    let profiles: Vec<_> = (0..m.num_strings()).map(|s| m.string_profile(s)).collect();
    if profiles.iter().any(|p| p.orientation == StringOrientation::Clockwise) {
        return false;
    }
    m.forced_crossings().into_iter().all(|(i, j)| {
        let (p, q) = (profiles[i], profiles[j]);
        !(p.kind == StringKind::Bridge && q.kind == StringKind::Bridge && p.orientation == q.orientation)
    })
}

pub fn restricted_basis(x: &Word, y: &Word) -> Vec<BasisDiagram> {
    enumerate_matchings(x, y)
        .into_iter()
        .map(BasisDiagram::plain)
        .filter(is_restricted)
        .collect()
}

pub fn hom_dim_restricted(x: &Word, y: &Word) -> usize {
    restricted_basis(x, y).len()
}

/// Truncation bounds for enumerating the (infinite) full basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BasisBounds {
    pub max_dots: u32,
    pub max_bubble_label: u32,
    pub max_bubbles: usize,
}

/// Basis diagrams of the full category within `bounds`. With default bounds
/// this is `B₀(X,Y)`.
pub fn enumerate_basis(x: &Word, y: &Word, bounds: BasisBounds) -> Vec<BasisDiagram> {
    let bubble_sets: Vec<Vec<u32>> = (0..=bounds.max_bubbles)
        .flat_map(|k| {
            (0..=bounds.max_bubble_label)
                .combinations_with_replacement(k)
                .collect::<Vec<_>>()
        })
        .collect();
    let mut out = Vec::new();
    for m in enumerate_matchings(x, y) {
        let names: Vec<BoundaryPoint> = m.pairs().iter().map(|&(a, _)| a).collect();
        let dot_choices = (0..names.len())
            .map(|_| 0..=bounds.max_dots)
            .multi_cartesian_product()
            .collect::<Vec<_>>();
        let dot_choices = if names.is_empty() { vec![Vec::new()] } else { dot_choices };
        for dots in dot_choices {
            let map: BTreeMap<_, _> =
                names.iter().copied().zip(dots).filter(|&(_, n)| n > 0).collect();
            for bubbles in &bubble_sets {
                out.push(BasisDiagram { matching: m.clone(), dots: map.clone(), bubbles: bubbles.clone() });
            }
        }
    }
    out
}

/// Elementary generating morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `↑↑ → ↑↑` crossing.
    S,
    /// `↓↓ → ↓↓` crossing.
    SPrime,
    /// `↑↓ → ↓↑` crossing.
    T,
    /// `↓↑ → ↑↓` crossing.
    TPrime,
    /// Counterclockwise cup `𝟙 → ↓↑`.
    C,
    /// Clockwise cup `𝟙 → ↑↓`.
    CPrime,
    /// Clockwise cap `↑↓ → 𝟙`.
    D,
    /// Counterclockwise cap `↓↑ → 𝟙`.
    DPrime,
    /// Dot on `↑`.
    X,
    /// Dot on `↓`.
    XPrime,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::S,
        Generator::SPrime,
        Generator::T,
        Generator::TPrime,
        Generator::C,
        Generator::CPrime,
        Generator::D,
        Generator::DPrime,
        Generator::X,
        Generator::XPrime,
    ];

    pub fn source(self) -> Word {
        use Orientation::{Down as D, Up as U};
        Word::new(match self {
            Generator::S => vec![U, U],
            Generator::SPrime => vec![D, D],
            Generator::T => vec![U, D],
            Generator::TPrime => vec![D, U],
            Generator::C | Generator::CPrime => vec![],
            Generator::D => vec![U, D],
            Generator::DPrime => vec![D, U],
            Generator::X => vec![U],
            Generator::XPrime => vec![D],
        })
    }

    pub fn target(self) -> Word {
        use Orientation::{Down as D, Up as U};
        Word::new(match self {
            Generator::S => vec![U, U],
            Generator::SPrime => vec![D, D],
            Generator::T => vec![D, U],
            Generator::TPrime => vec![U, D],
            Generator::C => vec![D, U],
            Generator::CPrime => vec![U, D],
            Generator::D | Generator::DPrime => vec![],
            Generator::X => vec![U],
            Generator::XPrime => vec![D],
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::S => "s",
            Generator::SPrime => "s'",
            Generator::T => "t",
            Generator::TPrime => "t'",
            Generator::C => "c",
            Generator::CPrime => "c'",
            Generator::D => "d",
            Generator::DPrime => "d'",
            Generator::X => "x",
            Generator::XPrime => "x'",
        }
    }

    /// Whether the generator is itself a restricted basis diagram.
    pub fn is_restricted(self) -> bool {
        matches!(self, Generator::T | Generator::TPrime | Generator::C | Generator::DPrime)
    }

    pub(crate) fn crossing(left: Orientation, right: Orientation) -> Generator {
        match (left, right) {
            (Orientation::Up, Orientation::Up) => Generator::S,
            (Orientation::Down, Orientation::Down) => Generator::SPrime,
            (Orientation::Up, Orientation::Down) => Generator::T,
            (Orientation::Down, Orientation::Up) => Generator::TPrime,
        }
    }

    pub(crate) fn cup(left: Orientation) -> Generator {
        match left {
            Orientation::Down => Generator::C,
            Orientation::Up => Generator::CPrime,
        }
    }

    pub(crate) fn cap(left: Orientation) -> Generator {
        match left {
            Orientation::Up => Generator::D,
            Orientation::Down => Generator::DPrime,
        }
    }

    fn dot(o: Orientation) -> Generator {
        match o {
            Orientation::Up => Generator::X,
            Orientation::Down => Generator::XPrime,
        }
    }

    /// The generator as a basis diagram (dots become one dot on the strand).
    pub fn diagram(self) -> BasisDiagram {
        let b = BoundaryPoint::bottom;
        let t = BoundaryPoint::top;
        let pairs = match self {
            Generator::S | Generator::SPrime | Generator::T | Generator::TPrime => {
                vec![(b(0), t(1)), (b(1), t(0))]
            }
            Generator::C | Generator::CPrime => vec![(t(0), t(1))],
            Generator::D | Generator::DPrime => vec![(b(0), b(1))],
            Generator::X | Generator::XPrime => vec![(b(0), t(0))],
        };
        let m = Matching::from_pairs_unchecked(self.source(), self.target(), pairs);
        let mut dots = BTreeMap::new();
        if matches!(self, Generator::X | Generator::XPrime) {
            dots.insert(b(0), 1);
        }
        BasisDiagram { matching: m, dots, bubbles: Vec::new() }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `left ⊗ generator ⊗ right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slice {
    pub left: Word,
    pub generator: Generator,
    pub right: Word,
}

impl Slice {
    pub fn new(left: Word, generator: Generator, right: Word) -> Self {
        Slice { left, generator, right }
    }

    pub fn source(&self) -> Word {
        self.left.tensor(&self.generator.source()).tensor(&self.right)
    }

    pub fn target(&self) -> Word {
        self.left.tensor(&self.generator.target()).tensor(&self.right)
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.left, self.generator, self.right)
    }
}

/// A vertical composite of slices, listed bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SliceWord {
    pub source: Word,
    pub slices: Vec<Slice>,
}

impl SliceWord {
    pub fn target(&self) -> Word {
        self.slices.last().map(|s| s.target()).unwrap_or_else(|| self.source.clone())
    }

    pub fn identity(w: &Word) -> Self {
        SliceWord { source: w.clone(), slices: Vec::new() }
    }

    /// `self` on the left of `other`: `other` runs first, then `self`.
    pub fn tensor(&self, other: &SliceWord) -> SliceWord {
        let mut slices = Vec::new();
        for s in &other.slices {
            slices.push(Slice::new(self.source.tensor(&s.left), s.generator, s.right.clone()));
        }
        let right = other.target();
        for s in &self.slices {
            slices.push(Slice::new(s.left.clone(), s.generator, s.right.tensor(&right)));
        }
        SliceWord { source: self.source.tensor(&other.source), slices }
    }

    /// `self` stacked on top of `below`.
    pub fn after(&self, below: &SliceWord) -> Result<SliceWord> {
        if below.target() != self.source {
            return Err(HeisError::TypeMismatch { expected: self.source.clone(), found: below.target() });
        }
        let mut slices = below.slices.clone();
        slices.extend(self.slices.iter().cloned());
        Ok(SliceWord { source: below.source.clone(), slices })
    }
}

fn word_of(seq: &[(usize, Orientation)]) -> Word {
    Word::new(seq.iter().map(|&(_, o)| o).collect())
}

fn split_word(seq: &[(usize, Orientation)], at: usize, skip: usize) -> (Word, Word) {
    (word_of(&seq[..at]), word_of(&seq[at + skip..]))
}

/// Sweep-line factorization of a bubble-free basis diagram into elementary
/// slices realizing exactly the forced crossings.
pub fn to_slices(d: &BasisDiagram) -> Result<SliceWord> {
    if !d.bubbles().is_empty() {
        return Err(HeisError::UnsupportedBubbles);
    }
    let m = d.matching();
    let profiles: Vec<_> = (0..m.num_strings()).map(|s| m.string_profile(s)).collect();
    let mut slices = Vec::new();

    // Strands crossing the current horizontal line: (string, orientation).
    let mut seq: Vec<(usize, Orientation)> = (0..m.source().len())
        .map(|i| (m.string_at(BoundaryPoint::bottom(i)), m.source().get(i)))
        .collect();

    // Dots on strings touching the bottom boundary go first.
    let mut dotted = vec![false; m.num_strings()];
    for p in 0..seq.len() {
        let (s, o) = seq[p];
        if !dotted[s] {
            dotted[s] = true;
            for _ in 0..d.dots_on(s) {
                let (l, r) = split_word(&seq, p, 1);
                slices.push(Slice::new(l, Generator::dot(o), r));
            }
        }
    }

    // Close caps, innermost first; the left arm crosses every strand it encloses.
    loop {
        let cap = (0..seq.len())
            .filter_map(|i| {
                let s = seq[i].0;
                if profiles[s].kind != StringKind::Cap {
                    return None;
                }
                let j = (i + 1..seq.len()).find(|&j| seq[j].0 == s)?;
                Some((j - i, i, j))
            })
            .min();
        let Some((_, i, j)) = cap else { break };
        for p in i..j - 1 {
            let g = Generator::crossing(seq[p].1, seq[p + 1].1);
            let (l, r) = split_word(&seq, p, 2);
            slices.push(Slice::new(l, g, r));
            seq.swap(p, p + 1);
        }
        let g = Generator::cap(seq[j - 1].1);
        let (l, r) = split_word(&seq, j - 1, 2);
        slices.push(Slice::new(l, g, r));
        seq.drain(j - 1..=j);
    }

    // Bridges: bubble sort toward the top order.
    let top_index = |s: usize| {
        let (a, b) = m.pairs()[s];
        if a.side == BoundarySide::Top {
            a.index
        } else {
            b.index
        }
    };
    loop {
        let Some(p) = (0..seq.len().saturating_sub(1)).find(|&p| top_index(seq[p].0) > top_index(seq[p + 1].0))
        else {
            break;
        };
        let g = Generator::crossing(seq[p].1, seq[p + 1].1);
        let (l, r) = split_word(&seq, p, 2);
        slices.push(Slice::new(l, g, r));
        seq.swap(p, p + 1);
    }

    // Cups: peel from the top, innermost first, then replay in reverse.
    let mut top: Vec<(usize, Orientation)> = (0..m.target().len())
        .map(|j| (m.string_at(BoundaryPoint::top(j)), m.target().get(j)))
        .collect();
    let mut peeled: Vec<Vec<Slice>> = Vec::new();
    loop {
        let cup = (0..top.len())
            .filter_map(|i| {
                let s = top[i].0;
                if profiles[s].kind != StringKind::Cup {
                    return None;
                }
                let j = (i + 1..top.len()).find(|&j| top[j].0 == s)?;
                Some((j - i, i, j))
            })
            .min();
        let Some((_, i, j)) = cup else { break };
        let mut forward = Vec::new();
        let s = top[i].0;
        // Top-down: move the left arm right until adjacent to the right arm.
        let mut steps = Vec::new();
        for p in i..j - 1 {
            top.swap(p, p + 1);
            // Forward time: crossing at p in the word below (after the swap).
            let g = Generator::crossing(top[p].1, top[p + 1].1);
            let (l, r) = split_word(&top, p, 2);
            steps.push(Slice::new(l, g, r));
        }
        let cup_left = top[j - 1].1;
        let (l, r) = split_word(&top, j - 1, 2);
        let mut cup_slices = vec![Slice::new(l.clone(), Generator::cup(cup_left), r.clone())];
        for _ in 0..d.dots_on(s) {
            // Dot on the cup's left arm right after creation.
            cup_slices.push(Slice::new(l.clone(), Generator::dot(cup_left), Word::new(vec![cup_left.flip()]).tensor(&r)));
        }
        top.drain(j - 1..=j);
        steps.reverse();
        forward.extend(cup_slices);
        forward.extend(steps);
        peeled.push(forward);
    }
    for block in peeled.into_iter().rev() {
        slices.extend(block);
    }

    Ok(SliceWord { source: m.source().clone(), slices })
}

/// Formal gluing of a slice word back into a basis diagram (connectivity and
/// dot counts only). Fails on closed components.
pub fn from_slices(sw: &SliceWord) -> Result<BasisDiagram> {
    // Union-find over strand pieces.
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let n = parent[c];
            parent[c] = r;
            c = n;
        }
        r
    }
    let mut ends: Vec<Vec<BoundaryPoint>> = Vec::new();
    let mut dots: Vec<u32> = Vec::new();
    let fresh = |parent: &mut Vec<usize>, ends: &mut Vec<Vec<BoundaryPoint>>, dots: &mut Vec<u32>| {
        parent.push(parent.len());
        ends.push(Vec::new());
        dots.push(0);
        parent.len() - 1
    };

    let mut current = sw.source.clone();
    let mut seq: Vec<usize> = Vec::new();
    for i in 0..sw.source.len() {
        let id = fresh(&mut parent, &mut ends, &mut dots);
        ends[id].push(BoundaryPoint::bottom(i));
        seq.push(id);
    }
    for slice in &sw.slices {
        if slice.source() != current {
            return Err(HeisError::TypeMismatch { expected: current, found: slice.source() });
        }
        let p = slice.left.len();
        match slice.generator {
            Generator::S | Generator::SPrime | Generator::T | Generator::TPrime => seq.swap(p, p + 1),
            Generator::C | Generator::CPrime => {
                let id = fresh(&mut parent, &mut ends, &mut dots);
                seq.insert(p, id);
                seq.insert(p, id);
            }
            Generator::D | Generator::DPrime => {
                let a = find(&mut parent, seq[p]);
                let b = find(&mut parent, seq[p + 1]);
                if a != b {
                    parent[b] = a;
                    let moved = std::mem::take(&mut ends[b]);
                    ends[a].extend(moved);
                    dots[a] += dots[b];
                } else {
                    return Err(HeisError::UnsupportedBubbles);
                }
                seq.drain(p..p + 2);
            }
            Generator::X | Generator::XPrime => {
                let a = find(&mut parent, seq[p]);
                dots[a] += 1;
            }
        }
        current = slice.target();
    }
    for (j, &id) in seq.iter().enumerate() {
        let a = find(&mut parent, id);
        ends[a].push(BoundaryPoint::top(j));
    }
    let mut pairs = Vec::new();
    let mut dot_map = BTreeMap::new();
    for id in 0..parent.len() {
        if find(&mut parent, id) != id {
            continue;
        }
        match ends[id].as_slice() {
            [a, b] => {
                pairs.push((*a, *b));
                if dots[id] > 0 {
                    dot_map.insert(*a, dots[id]);
                }
            }
            [] => return Err(HeisError::UnsupportedBubbles),
            other => {
                return Err(HeisError::BadDiagram(format!("component with {} endpoints", other.len())))
            }
        }
    }
    let m = Matching::new(sw.source.clone(), current, pairs)?;
    BasisDiagram::new(m, dot_map, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn m(src: &str, tgt: &str, pairs: &[(&str, &str)]) -> Matching {
        let pt = |s: &str| {
            let idx: usize = s[1..].parse().unwrap();
            match &s[..1] {
                "B" => BoundaryPoint::bottom(idx - 1),
                _ => BoundaryPoint::top(idx - 1),
            }
        };
        Matching::new(w(src), w(tgt), pairs.iter().map(|&(a, b)| (pt(a), pt(b))).collect()).unwrap()
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn matching_examples() {
        assert_eq!(enumerate_matchings(&w("ud"), &w("du")).len(), 2);
        assert!(enumerate_matchings(&w("u"), &w("d")).is_empty());
        assert_eq!(enumerate_matchings(&w(""), &w("")).len(), 1);
    }

    #[test]
    fn matching_count_is_factorial() {
        for x in Word::all_up_to(4) {
            for y in Word::all_up_to(4) {
                let src = x.count_up() + y.count_down();
                let tgt = x.count_down() + y.count_up();
                let expected = if src == tgt { factorial(src) } else { 0 };
                assert_eq!(enumerate_matchings(&x, &y).len(), expected, "{x} {y}");
            }
        }
    }

    #[test]
    fn crossing_examples() {
        assert!(m("du", "du", &[("B1", "T1"), ("B2", "T2")]).forced_crossings().is_empty());
        assert_eq!(m("ud", "du", &[("B1", "T2"), ("B2", "T1")]).forced_crossings().len(), 1);
        assert!(m("du", "du", &[("B1", "B2"), ("T1", "T2")]).forced_crossings().is_empty());
    }

    #[test]
    fn crossings_symmetric_irreflexive() {
        for x in Word::all_up_to(3) {
            for y in Word::all_up_to(3) {
                for mm in enumerate_matchings(&x, &y) {
                    for i in 0..mm.num_strings() {
                        assert!(!mm.strings_cross(i, i));
                        for j in 0..mm.num_strings() {
                            assert_eq!(mm.strings_cross(i, j), mm.strings_cross(j, i));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let dp = Generator::DPrime.diagram();
        assert_eq!(
            dp.matching().string_profile(0),
            StringProfile { kind: StringKind::Cap, orientation: StringOrientation::Counterclockwise }
        );
        let c = Generator::C.diagram();
        assert_eq!(
            c.matching().string_profile(0),
            StringProfile { kind: StringKind::Cup, orientation: StringOrientation::Counterclockwise }
        );
        let id = Matching::identity(&w("u"));
        assert_eq!(
            id.string_profile(0),
            StringProfile { kind: StringKind::Bridge, orientation: StringOrientation::Upward }
        );
    }

    #[test]
    fn restriction_examples() {
        assert!(!is_restricted(&Generator::S.diagram()));
        assert!(!is_restricted(&Generator::CPrime.diagram()));
        assert!(!is_restricted(&Generator::D.diagram()));
        assert!(is_restricted(&Generator::T.diagram()));
        assert!(is_restricted(&Generator::TPrime.diagram()));
        assert!(!is_restricted(&Generator::X.diagram()));
        for x in Word::all_up_to(4) {
            assert!(is_restricted(&BasisDiagram::identity(&x)));
        }
    }

    #[test]
    fn restricted_basis_examples() {
        let b = restricted_basis(&w("uudd"), &w("uudd"));
        assert_eq!(b, vec![BasisDiagram::identity(&w("uudd"))]);
        let b = restricted_basis(&w("du"), &w("du"));
        assert_eq!(b.len(), 2);
        assert!(b.contains(&BasisDiagram::identity(&w("du"))));
        assert!(b.contains(&BasisDiagram::plain(m("du", "du", &[("B1", "B2"), ("T1", "T2")]))));
        assert!(restricted_basis(&w("u"), &w("d")).is_empty());
    }

    #[test]
    fn simples_have_trivial_homs() {
        let simples: Vec<_> = (0..=4).flat_map(|n| (0..=n).map(move |i| (i, n - i))).collect();
        for &(i, j) in &simples {
            for &(a, b) in &simples {
                let x = Word::ups(i).tensor(&Word::downs(j));
                let y = Word::ups(a).tensor(&Word::downs(b));
                let expect = usize::from((i, j) == (a, b));
                assert_eq!(hom_dim_restricted(&x, &y), expect, "{x} {y}");
            }
        }
    }

    #[test]
    fn slice_examples() {
        let t = to_slices(&Generator::T.diagram()).unwrap();
        assert_eq!(t.slices, vec![Slice::new(Word::unit(), Generator::T, Word::unit())]);
        let turnback = BasisDiagram::plain(m("du", "du", &[("B1", "B2"), ("T1", "T2")]));
        let sw = to_slices(&turnback).unwrap();
        let gens: Vec<_> = sw.slices.iter().map(|s| s.generator).collect();
        assert_eq!(gens, vec![Generator::DPrime, Generator::C]);
        assert!(to_slices(&BasisDiagram::identity(&w("ud"))).unwrap().slices.is_empty());
    }

    #[test]
    fn slices_round_trip_with_forced_crossings() {
        let bounds = BasisBounds { max_dots: 1, ..Default::default() };
        for x in Word::all_up_to(3) {
            for y in Word::all_up_to(3) {
                for d in enumerate_basis(&x, &y, bounds) {
                    let sw = to_slices(&d).unwrap();
                    assert_eq!(sw.target(), y);
                    assert_eq!(from_slices(&sw).unwrap(), d, "{d}");
                    let crossings = sw
                        .slices
                        .iter()
                        .filter(|s| matches!(s.generator, Generator::S | Generator::SPrime | Generator::T | Generator::TPrime))
                        .count();
                    assert_eq!(crossings, d.matching().forced_crossings().len(), "{d}");
                }
            }
        }
    }

    #[test]
    fn bubbles_rejected_by_slicer() {
        let d = BasisDiagram::new(Matching::identity(&Word::unit()), BTreeMap::new(), vec![0]).unwrap();
        assert_eq!(to_slices(&d), Err(HeisError::UnsupportedBubbles));
    }

    #[test]
    fn bounded_basis_sizes() {
        let bounds = BasisBounds { max_dots: 1, max_bubble_label: 1, max_bubbles: 1 };
        // 2 matchings, 2 strings with 2 dot choices each, 3 bubble multisets.
        assert_eq!(enumerate_basis(&w("du"), &w("du"), bounds).len(), 2 * 4 * 3);
        assert_eq!(enumerate_basis(&w("du"), &w("du"), BasisBounds::default()).len(), 2);
    }
}
