//! Composition and normal forms inside the restricted fragment.

mod glue;
mod planar;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use glue::{glue, reduce, reduce_with_stats, GluedDiagram, GluedString, Layer, ReduceStats, Rule, Substrand};

use crate::diagrams::{BasisDiagram, Generator};
use crate::error::{HeisError, Result};
use crate::words::{Simple, Word};

/// An integer combination of basis diagrams sharing source and target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Word,
    target: Word,
    terms: BTreeMap<BasisDiagram, i64>,
}

impl Morphism {
    pub fn zero(source: Word, target: Word) -> Self {
        Morphism { source, target, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: BasisDiagram) -> Self {
        let (source, target) = (d.source().clone(), d.target().clone());
        Morphism { source, target, terms: BTreeMap::from([(d, 1)]) }
    }

    pub fn identity(w: &Word) -> Self {
        Morphism::from_diagram(BasisDiagram::identity(w))
    }

    pub fn generator(g: Generator) -> Self {
        Morphism::from_diagram(g.diagram())
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn terms(&self) -> &BTreeMap<BasisDiagram, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: BasisDiagram, c: i64) {
        debug_assert_eq!((d.source(), d.target()), (&self.source, &self.target));
        let e = self.terms.entry(d.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&d);
        }
    }

    pub fn scale(&self, c: i64) -> Morphism {
        let mut m = Morphism::zero(self.source.clone(), self.target.clone());
        if c != 0 {
            m.terms = self.terms.iter().map(|(d, &v)| (d.clone(), v * c)).collect();
        }
        m
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        let mut m = self.clone();
        for (d, &c) in &other.terms {
            m.add_term(d.clone(), c);
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(-1))
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if self.source != other.source {
            return Err(HeisError::TypeMismatch { expected: self.source.clone(), found: other.source.clone() });
        }
        if self.target != other.target {
            return Err(HeisError::TypeMismatch { expected: self.target.clone(), found: other.target.clone() });
        }
        Ok(())
    }

    /// Whether every term lies in the restricted fragment.
    pub fn is_restricted(&self) -> bool {
        self.terms.keys().all(crate::diagrams::is_restricted)
    }

    /// Coefficients reduced modulo a prime, as representatives in `0..p`.
    pub fn reduce_mod(&self, p: i64) -> Morphism {
        let mut m = Morphism::zero(self.source.clone(), self.target.clone());
        for (d, &c) in &self.terms {
            m.add_term(d.clone(), c.rem_euclid(p));
        }
        m
    }

    /// Integer multiple of the identity, if the morphism is one.
    pub fn as_scalar(&self) -> Option<i64> {
        if self.source != self.target {
            return None;
        }
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (d, &c) = self.terms.iter().next().expect("one term");
                (*d == BasisDiagram::identity(&self.source)).then_some(c)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 : {} -> {}", self.source, self.target);
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*[{d}]")?;
        }
        Ok(())
    }
}

/// `g ∘ f`, the bilinear extension of reduction of glued diagrams.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    compose_with_stats(g, f).map(|(m, _)| m)
}

pub fn compose_with_stats(g: &Morphism, f: &Morphism) -> Result<(Morphism, ReduceStats)> {
    if f.target != g.source {
        return Err(HeisError::TypeMismatch { expected: g.source.clone(), found: f.target.clone() });
    }
    let pairs: Vec<(&BasisDiagram, i64, &BasisDiagram, i64)> = g
        .terms
        .iter()
        .flat_map(|(gd, &gc)| f.terms.iter().map(move |(fd, &fc)| (gd, gc, fd, fc)))
        .collect();
    let parts: Vec<Result<(Morphism, ReduceStats, i64)>> = pairs
        .par_iter()
        .map(|&(gd, gc, fd, fc)| {
            let (m, s) = reduce_with_stats(&glue(gd, fd)?)?;
            Ok((m, s, gc * fc))
        })
        .collect();
    let mut out = Morphism::zero(f.source.clone(), g.target.clone());
    let mut stats = ReduceStats::default();
    for part in parts {
        let (m, s, c) = part?;
        stats.merge(&s);
        for (d, v) in m.terms {
            out.add_term(d, v * c);
        }
    }
    Ok((out, stats))
}

/// `a ⊗ b`: `a` on the left.
pub fn hcompose(a: &Morphism, b: &Morphism) -> Morphism {
    let mut out = Morphism::zero(a.source.tensor(&b.source), a.target.tensor(&b.target));
    for (da, &ca) in &a.terms {
        for (db, &cb) in &b.terms {
            out.add_term(da.juxtapose(db), ca * cb);
        }
    }
    out
}

/// A formal direct sum of words; order indexes matrix rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SumObject {
    pub summands: Vec<Word>,
}

impl SumObject {
    pub fn new(summands: Vec<Word>) -> Self {
        SumObject { summands }
    }

    pub fn single(w: Word) -> Self {
        SumObject { summands: vec![w] }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }
}

impl std::str::FromStr for SumObject {
    type Err = HeisError;

    /// Summands separated by `+` or `⊕`, each optionally prefixed by a
    /// multiplicity `k*`, e.g. `uudd + 4*ud + 2*1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut summands = Vec::new();
        for part in s.split(['+', '⊕']) {
            let part = part.trim();
            let (k, w) = match part.split_once('*') {
                Some((k, w)) => (
                    k.trim().parse::<usize>().map_err(|_| HeisError::BadWord(format!("bad multiplicity in {part:?}")))?,
                    w.trim(),
                ),
                None => (1, part),
            };
            let w: Word = w.parse()?;
            summands.extend(std::iter::repeat(w).take(k));
        }
        Ok(SumObject { summands })
    }
}

impl fmt::Display for SumObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A matrix of morphisms; entry `(r, c)` maps `source[c]` to `target[r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismMatrix {
    source: SumObject,
    target: SumObject,
    entries: Vec<Vec<Morphism>>,
}

impl MorphismMatrix {
    pub fn new(source: SumObject, target: SumObject, entries: Vec<Vec<Morphism>>) -> Result<Self> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(HeisError::DimensionMismatch(format!(
                "expected {}x{} entries",
                target.len(),
                source.len()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if e.source != source.summands[c] || e.target != target.summands[r] {
                    return Err(HeisError::TypeMismatch { expected: source.summands[c].clone(), found: e.source.clone() });
                }
            }
        }
        Ok(MorphismMatrix { source, target, entries })
    }

    pub fn identity(obj: &SumObject) -> Self {
        let entries = (0..obj.len())
            .map(|r| {
                (0..obj.len())
                    .map(|c| {
                        if r == c {
                            Morphism::identity(&obj.summands[r])
                        } else {
                            Morphism::zero(obj.summands[c].clone(), obj.summands[r].clone())
                        }
                    })
                    .collect()
            })
            .collect();
        MorphismMatrix { source: obj.clone(), target: obj.clone(), entries }
    }

    pub fn source(&self) -> &SumObject {
        &self.source
    }

    pub fn target(&self) -> &SumObject {
        &self.target
    }

    pub fn entries(&self) -> &[Vec<Morphism>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> &Morphism {
        &self.entries[r][c]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == MorphismMatrix::identity(&self.source)
    }

    /// `id_left ⊗ self ⊗ id_right`, entrywise.
    pub fn whisker(&self, left: &Word, right: &Word) -> MorphismMatrix {
        let wrap = |w: &Word| left.tensor(w).tensor(right);
        let (il, ir) = (Morphism::identity(left), Morphism::identity(right));
        MorphismMatrix {
            source: SumObject::new(self.source.summands.iter().map(wrap).collect()),
            target: SumObject::new(self.target.summands.iter().map(wrap).collect()),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| hcompose(&hcompose(&il, e), &ir)).collect())
                .collect(),
        }
    }
}

/// `a ∘ b`: row-by-column composition.
pub fn matrix_compose(a: &MorphismMatrix, b: &MorphismMatrix) -> Result<MorphismMatrix> {
    if a.source != b.target {
        return Err(HeisError::DimensionMismatch(format!("cannot compose {} <- {} after {} <- {}", a.target, a.source, b.target, b.source)));
    }
    let cells: Vec<(usize, usize)> =
        (0..a.target.len()).flat_map(|r| (0..b.source.len()).map(move |c| (r, c))).collect();
    let values: Vec<Result<Morphism>> = cells
        .par_iter()
        .map(|&(r, c)| {
            let mut acc = Morphism::zero(b.source.summands[c].clone(), a.target.summands[r].clone());
            for k in 0..a.source.len() {
                let (x, y) = (&a.entries[r][k], &b.entries[k][c]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = acc.add(&compose(x, y)?)?;
            }
            Ok(acc)
        })
        .collect();
    let mut entries = vec![Vec::with_capacity(b.source.len()); a.target.len()];
    for (&(r, _), v) in cells.iter().zip(values) {
        entries[r].push(v?);
    }
    Ok(MorphismMatrix { source: b.source.clone(), target: a.target.clone(), entries })
}

fn w(s: &str) -> Word {
    s.parse().expect("static word")
}

/// The isomorphism `↑↓ ⊕ 𝟙 ≅ ↓↑`: forward `[t c]` and backward `[t′ ; d′]`.
pub fn heisenberg_iso() -> (MorphismMatrix, MorphismMatrix) {
    let split = SumObject::new(vec![w("ud"), w("")]);
    let du = SumObject::single(w("du"));
    let forward = MorphismMatrix {
        source: split.clone(),
        target: du.clone(),
        entries: vec![vec![Morphism::generator(Generator::T), Morphism::generator(Generator::C)]],
    };
    let backward = MorphismMatrix {
        source: du,
        target: split,
        entries: vec![vec![Morphism::generator(Generator::TPrime)], vec![Morphism::generator(Generator::DPrime)]],
    };
    (forward, backward)
}

/// Summands of a word, together with mutually inverse matrices
/// `forward: ⊕ summands → w` and `backward: w → ⊕ summands`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub word: Word,
    pub summands: SumObject,
    pub forward: MorphismMatrix,
    pub backward: MorphismMatrix,
}

impl Decomposition {
    pub fn multiplicities(&self) -> BTreeMap<Simple, u64> {
        count_simples(&self.summands.summands)
    }

    /// Both round trips are identity matrices.
    pub fn verify(&self) -> Result<bool> {
        let there = matrix_compose(&self.forward, &self.backward)?;
        let back = matrix_compose(&self.backward, &self.forward)?;
        Ok(there.is_identity() && back.is_identity())
    }
}

fn count_simples(words: &[Word]) -> BTreeMap<Simple, u64> {
    let mut out = BTreeMap::new();
    for s in words {
        *out.entry(s.as_simple().expect("fully split")).or_insert(0) += 1;
    }
    out
}

/// Split `w` into simples by repeatedly replacing the leftmost `↓↑` using the
/// Heisenberg isomorphism.
pub fn decompose_object(word: &Word) -> Result<Decomposition> {
    let obj = SumObject::single(word.clone());
    let mut summands = obj.clone();
    let mut forward = MorphismMatrix::identity(&obj);
    let mut backward = MorphismMatrix::identity(&obj);
    let (iso_f, iso_b) = heisenberg_iso();
    while let Some(k) = summands.summands.iter().position(|s| s.leftmost_du().is_some()) {
        let s = &summands.summands[k];
        let at = s.leftmost_du().expect("has du");
        let (left, right) = (s.slice(0..at), s.slice(at + 2..s.len()));
        let local_f = iso_f.whisker(&left, &right);
        let local_b = iso_b.whisker(&left, &right);
        let mut next = summands.summands.clone();
        next.splice(k..k + 1, local_f.source.summands.iter().cloned());
        let next = SumObject::new(next);
        let step_f = block_replace(&summands, &next, k, &local_f, true);
        let step_b = block_replace(&summands, &next, k, &local_b, false);
        forward = matrix_compose(&forward, &step_f)?;
        backward = matrix_compose(&step_b, &backward)?;
        summands = next;
    }
    Ok(Decomposition { word: word.clone(), summands, forward, backward })
}

/// Identity on every summand except `k`, which is replaced by `local`.
/// `into_old` selects the direction `next → old` (else `old → next`).
fn block_replace(old: &SumObject, next: &SumObject, k: usize, local: &MorphismMatrix, into_old: bool) -> MorphismMatrix {
    let width = local.entries.first().map_or(0, Vec::len).max(local.entries.len());
    let expand = |i: usize| if i < k { (i, None) } else if i < k + width { (k, Some(i - k)) } else { (i - width + 1, None) };
    let (src, tgt) = if into_old { (next, old) } else { (old, next) };
    let entries = (0..tgt.len())
        .map(|r| {
            (0..src.len())
                .map(|c| {
                    let zero = || Morphism::zero(src.summands[c].clone(), tgt.summands[r].clone());
                    if into_old {
                        let (oc, part) = expand(c);
                        match part {
                            Some(j) if r == k => local.entries[0][j].clone(),
                            None if r == oc && r != k => Morphism::identity(&src.summands[c]),
                            _ => zero(),
                        }
                    } else {
                        let (or, part) = expand(r);
                        match part {
                            Some(j) if c == k => local.entries[j][0].clone(),
                            None if c == or && c != k => Morphism::identity(&src.summands[c]),
                            _ => zero(),
                        }
                    }
                })
                .collect()
        })
        .collect();
    MorphismMatrix { source: src.clone(), target: tgt.clone(), entries }
}

/// Simple multiplicities only, by the same splitting recursion.
pub fn decompose_multiplicities(word: &Word) -> BTreeMap<Simple, u64> {
    let mut out = BTreeMap::new();
    let mut stack = vec![word.clone()];
    while let Some(s) = stack.pop() {
        match s.leftmost_du() {
            None => *out.entry(s.as_simple().expect("no du left")).or_insert(0) += 1,
            Some(at) => {
                let (left, right) = (s.slice(0..at), s.slice(at + 2..s.len()));
                stack.push(left.tensor(&w("ud")).tensor(&right));
                stack.push(left.tensor(&right));
            }
        }
    }
    out
}
