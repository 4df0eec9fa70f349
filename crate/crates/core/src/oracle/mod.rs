//! Semantic model used as ground truth for the diagrammatic engine.
//!
//! A word acts on the regular module of the symmetric group `S_n` as a composite
//! of induction (`↑`, level `+1`) and restriction (`↓`, level `-1`), rightmost
//! letter first. The resulting space has a basis of labels: one coset
//! representative index per `↑` letter (coset representatives of
//! `S_{ℓ+1}/S_ℓ` are the transpositions `(k ℓ)`) followed by a permutation of
//! `S_n`. Generating morphisms act as explicit natural transformations.

mod perm;
pub mod selftest;
mod sparse;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use perm::{factorial, Perm};
pub use sparse::SparseMatrix;

use crate::diagrams::{to_slices, BasisDiagram, Generator, Slice, SliceWord};
use crate::engine::Morphism;
use crate::error::{HeisError, Result};
use crate::words::{Orientation, Word};

/// Default truncation level.
pub const DEFAULT_LEVEL: usize = 4;

/// The value of a word on the regular module at a given level.
#[derive(Debug)]
pub struct LevelSpace {
    word: Word,
    level: usize,
    /// Outer level of each letter (level after applying it); `None` if the
    /// space vanishes.
    outer: Option<Vec<usize>>,
    labels: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, u32>,
}

impl LevelSpace {
    fn build(word: &Word, level: usize) -> Self {
        let letters = word.letters();
        let mut outer = vec![0; letters.len()];
        let mut cur = level as isize;
        let mut valid = true;
        for (p, o) in letters.iter().enumerate().rev() {
            cur += match o {
                Orientation::Up => 1,
                Orientation::Down => -1,
            };
            if cur < 0 {
                valid = false;
                break;
            }
            outer[p] = cur as usize;
        }
        let mut labels: Vec<Vec<u8>> = Vec::new();
        if valid {
            let ranges: Vec<usize> = letters
                .iter()
                .enumerate()
                .filter(|(_, &o)| o == Orientation::Up)
                .map(|(p, _)| outer[p])
                .collect();
            let perms = perm::all_perms(level);
            let mut prefix: Vec<Vec<u8>> = vec![Vec::new()];
            for r in ranges {
                prefix = prefix
                    .into_iter()
                    .flat_map(|v| {
                        (0..r as u8).map(move |k| {
                            let mut w = v.clone();
                            w.push(k);
                            w
                        })
                    })
                    .collect();
            }
            for pre in prefix {
                for p in &perms {
                    let mut l = pre.clone();
                    l.extend_from_slice(&p.0);
                    labels.push(l);
                }
            }
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        LevelSpace { word: word.clone(), level, outer: valid.then_some(outer), labels, index }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Vec<u8>] {
        &self.labels
    }

    fn index_of(&self, label: &[u8]) -> u32 {
        self.index[label]
    }
}

/// Letters of a suffix together with their outer levels, used to push a group
/// element through nested inductions and restrictions.
struct Tail<'a> {
    letters: &'a [Orientation],
    outer: &'a [usize],
}

impl Tail<'_> {
    /// Left action of `h` (a permutation of the suffix's outer level) on the
    /// label part `[↑ indices…, perm…]`.
    fn act(&self, h: &Perm, part: &mut [u8]) {
        let mut h = h.clone();
        let mut slot = 0;
        for (o, &out) in self.letters.iter().zip(self.outer) {
            debug_assert_eq!(h.len(), out);
            match o {
                Orientation::Up => {
                    let inner = out - 1;
                    let k = part[slot] as usize;
                    let k2 = h.apply(k);
                    part[slot] = k2 as u8;
                    h = Perm::coset_rep(inner, k2).compose(&h.compose(&Perm::coset_rep(inner, k))).shrink();
                    slot += 1;
                }
                Orientation::Down => h = h.extend(out + 1),
            }
        }
        let perm = &mut part[slot..];
        let new: Vec<u8> = perm.iter().map(|&i| h.0[i as usize]).collect();
        perm.copy_from_slice(&new);
    }
}

/// Component of a primitive generator at a module of level `m`: maps
/// `(A indices, M part)` to a combination of `(B indices, M part)`.
fn component(
    g: Generator,
    m: usize,
    a_idx: &[u8],
    tail: &Tail<'_>,
    part: &[u8],
) -> Vec<(Vec<u8>, Vec<u8>, i64)> {
    let acted = |h: &Perm| {
        let mut p = part.to_vec();
        tail.act(h, &mut p);
        p
    };
    match g {
        Generator::S => {
            let g1 = Perm::coset_rep(m + 1, a_idx[0] as usize);
            let g2 = Perm::coset_rep(m, a_idx[1] as usize).extend(m + 2);
            let tau = Perm::transposition(m + 2, m, m + 1);
            let (ks, h) = g1.compose(&g2).compose(&tau).decompose(2);
            vec![(ks, acted(&h), 1)]
        }
        Generator::SPrime => {
            let tau = Perm::transposition(m, m - 2, m - 1);
            vec![(Vec::new(), acted(&tau), 1)]
        }
        Generator::T => {
            let g = Perm::coset_rep(m - 1, a_idx[0] as usize).extend(m + 1);
            let tau = Perm::transposition(m + 1, m - 1, m);
            let (ks, h) = g.compose(&tau).decompose(1);
            vec![(ks, acted(&h), 1)]
        }
        Generator::TPrime => {
            let rj = Perm::coset_rep(m, a_idx[0] as usize);
            let tau = Perm::transposition(m + 1, m - 1, m);
            (0..m)
                .filter_map(|k| {
                    let rk = Perm::coset_rep(m - 1, k);
                    let y = rj.compose(&rk.extend(m + 1)).compose(&tau);
                    if y.apply(m) != m {
                        return None;
                    }
                    let (bs, h) = y.shrink().decompose(1);
                    Some((bs, acted(&h.extend(m).compose(&rk)), 1))
                })
                .collect()
        }
        Generator::C => vec![(vec![m as u8], part.to_vec(), 1)],
        Generator::CPrime => (0..m)
            .map(|k| (vec![k as u8], acted(&Perm::coset_rep(m - 1, k)), 1))
            .collect(),
        Generator::D => vec![(Vec::new(), acted(&Perm::coset_rep(m - 1, a_idx[0] as usize)), 1)],
        Generator::DPrime => {
            if a_idx[0] as usize == m {
                vec![(Vec::new(), part.to_vec(), 1)]
            } else {
                Vec::new()
            }
        }
        Generator::X | Generator::XPrime => unreachable!("dots are expanded before evaluation"),
    }
}

/// Composite slice words defining the derived generators.
pub fn definition(g: Generator) -> Option<SliceWord> {
    use Generator::*;
    let u = Word::up;
    let d = Word::down;
    let sl = |l: Word, g: Generator, r: Word| Slice::new(l, g, r);
    Some(match g {
        X => SliceWord {
            source: u(),
            slices: vec![sl(u(), CPrime, Word::unit()), sl(Word::unit(), S, d()), sl(u(), D, Word::unit())],
        },
        XPrime => SliceWord {
            source: d(),
            slices: vec![
                sl(Word::unit(), C, d()),
                sl(d(), X, d()),
                sl(d(), D, Word::unit()),
            ],
        },
        _ => return None,
    })
}

/// Evaluator with cached level spaces.
#[derive(Default)]
pub struct Oracle {
    spaces: Mutex<HashMap<(Word, usize), Arc<LevelSpace>>>,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::default()
    }

    pub fn eval_object(&self, w: &Word, n: usize) -> Arc<LevelSpace> {
        let key = (w.clone(), n);
        if let Some(s) = self.spaces.lock().unwrap().get(&key) {
            return s.clone();
        }
        let space = Arc::new(LevelSpace::build(w, n));
        self.spaces.lock().unwrap().entry(key).or_insert(space).clone()
    }

    /// Matrix of one slice at base level `n`.
    pub fn eval_slice(&self, slice: &Slice, n: usize) -> SparseMatrix {
        if let Some(def) = definition(slice.generator) {
            let lifted = SliceWord {
                source: slice.source(),
                slices: def
                    .slices
                    .iter()
                    .map(|s| Slice::new(slice.left.tensor(&s.left), s.generator, s.right.tensor(&slice.right)))
                    .collect(),
            };
            return self.eval_slice_word(&lifted, n);
        }
        let src = self.eval_object(&slice.source(), n);
        let tgt = self.eval_object(&slice.target(), n);
        let mut cols = vec![Vec::new(); src.dim()];
        if src.dim() == 0 || tgt.dim() == 0 {
            return SparseMatrix::from_columns(tgt.dim(), cols);
        }
        let l_ups = slice.left.count_up();
        let a = slice.generator.source();
        let a_ups = a.count_up();
        let r_start = slice.left.len() + a.len();
        let outer = src.outer.as_ref().expect("nonzero space");
        let letters = slice.source().letters().to_vec();
        let tail = Tail { letters: &letters[r_start..], outer: &outer[r_start..] };
        let m = (n as isize + slice.right.count_up() as isize - slice.right.count_down() as isize) as usize;
        for (j, label) in src.labels().iter().enumerate() {
            let l_part = &label[..l_ups];
            let a_idx = &label[l_ups..l_ups + a_ups];
            let part = &label[l_ups + a_ups..];
            for (b_idx, new_part, coeff) in component(slice.generator, m, a_idx, &tail, part) {
                let mut out = l_part.to_vec();
                out.extend(b_idx);
                out.extend(new_part);
                cols[j].push((tgt.index_of(&out), coeff));
            }
        }
        SparseMatrix::from_columns(tgt.dim(), cols)
    }

    pub fn eval_slice_word(&self, sw: &SliceWord, n: usize) -> SparseMatrix {
        let dim = self.eval_object(&sw.source, n).dim();
        sw.slices
            .iter()
            .fold(SparseMatrix::identity(dim), |acc, s| self.eval_slice(s, n).mul(&acc))
    }

    pub fn eval_basis_diagram(&self, d: &BasisDiagram, n: usize) -> Result<SparseMatrix> {
        Ok(self.eval_slice_word(&to_slices(d)?, n))
    }

    /// Matrix of a morphism at level `n`; linear in its coefficients.
    pub fn eval_morphism(&self, f: &Morphism, n: usize) -> Result<SparseMatrix> {
        let rows = self.eval_object(f.target(), n).dim();
        let cols = self.eval_object(f.source(), n).dim();
        let mut acc = SparseMatrix::zero(rows, cols);
        for (d, &c) in f.terms() {
            acc = acc.add_scaled(&self.eval_basis_diagram(d, n)?, c);
        }
        Ok(acc)
    }

    /// Semantic equality at every level `n ≤ max_level`.
    pub fn morphisms_equal(&self, a: &Morphism, b: &Morphism, max_level: usize) -> Result<bool> {
        if a.source() != b.source() || a.target() != b.target() {
            return Err(HeisError::TypeMismatch { expected: a.source().clone(), found: b.source().clone() });
        }
        for n in 0..=max_level {
            if self.eval_morphism(a, n)? != self.eval_morphism(b, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A formal integer combination of slice words sharing source and target.
#[derive(Clone, Debug)]
pub struct SliceSum {
    pub source: Word,
    pub target: Word,
    pub terms: Vec<(i64, SliceWord)>,
}

impl SliceSum {
    pub fn single(sw: SliceWord) -> Self {
        SliceSum { source: sw.source.clone(), target: sw.target(), terms: vec![(1, sw)] }
    }

    pub fn zero(source: Word, target: Word) -> Self {
        SliceSum { source, target, terms: Vec::new() }
    }

    pub fn eval(&self, oracle: &Oracle, n: usize) -> SparseMatrix {
        let rows = oracle.eval_object(&self.target, n).dim();
        let cols = oracle.eval_object(&self.source, n).dim();
        self.terms.iter().fold(SparseMatrix::zero(rows, cols), |acc, (c, sw)| {
            acc.add_scaled(&oracle.eval_slice_word(sw, n), *c)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn object_dimensions() {
        let o = Oracle::new();
        assert_eq!(o.eval_object(&w(""), 2).dim(), 2);
        assert_eq!(o.eval_object(&w("u"), 1).dim(), 2);
        assert_eq!(o.eval_object(&w("du"), 1).dim(), 2);
        assert_eq!(o.eval_object(&w("d"), 0).dim(), 0);
        assert_eq!(o.eval_object(&w("ud"), 0).dim(), 0);
    }

    /// Dimension predicted stepwise: induction from level ℓ multiplies by ℓ+1,
    /// restriction keeps the dimension while the level stays nonnegative.
    #[test]
    fn dimension_consistency() {
        let o = Oracle::new();
        for word in Word::all_up_to(4) {
            for n in 0..=4 {
                let mut dim = factorial(n);
                let mut level = n as isize;
                for l in word.letters().iter().rev() {
                    match l {
                        Orientation::Up => {
                            dim *= (level + 1) as usize;
                            level += 1;
                        }
                        Orientation::Down => {
                            level -= 1;
                            if level < 0 {
                                dim = 0;
                                break;
                            }
                        }
                    }
                }
                assert_eq!(o.eval_object(&word, n).dim(), dim, "{word} at {n}");
            }
        }
    }
}
