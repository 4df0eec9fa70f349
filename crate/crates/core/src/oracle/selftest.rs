//! Defining relations evaluated in the semantic model.

use serde::Serialize;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Oracle, SliceSum};
use crate::diagrams::{restricted_basis, to_slices, BasisDiagram, Generator, Slice, SliceWord};
use crate::engine::{compose, glue, hcompose, reduce_with_stats, Morphism, ReduceStats};
use crate::words::Word;

fn word(s: &str) -> Word {
    s.parse().expect("static word")
}

/// Slice word from `(left, generator, right)` triples listed bottom to top.
pub fn slices(source: &str, parts: &[(&str, Generator, &str)]) -> SliceWord {
    SliceWord {
        source: word(source),
        slices: parts.iter().map(|&(l, g, r)| Slice::new(word(l), g, word(r))).collect(),
    }
}

fn single(source: &str, parts: &[(&str, Generator, &str)]) -> SliceSum {
    SliceSum::single(slices(source, parts))
}

fn id(w: &str) -> SliceSum {
    SliceSum::single(SliceWord::identity(&word(w)))
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: SliceSum,
    pub rhs: SliceSum,
}

/// Every defining relation, plus the definitional identities of the derived
/// generators and the horizontally mirrored adjunctions.
pub fn relations() -> Vec<Relation> {
    use Generator::*;
    let rel = |name, lhs, rhs| Relation { name, lhs, rhs };
    let mut t_tp = id("du");
    t_tp.terms.push((-1, slices("du", &[("", DPrime, ""), ("", C, "")])));
    vec![
        rel("hecke_square", single("uu", &[("", S, ""), ("", S, "")]), id("uu")),
        rel(
            "hecke_braid",
            single("uuu", &[("", S, "u"), ("u", S, ""), ("", S, "u")]),
            single("uuu", &[("u", S, ""), ("", S, "u"), ("u", S, "")]),
        ),
        rel("right_zigzag_up", single("u", &[("u", C, ""), ("", D, "u")]), id("u")),
        rel("right_zigzag_down", single("d", &[("", C, "d"), ("d", D, "")]), id("d")),
        rel("left_zigzag_up", single("u", &[("", CPrime, "u"), ("u", DPrime, "")]), id("u")),
        rel("left_zigzag_down", single("d", &[("d", CPrime, ""), ("", DPrime, "d")]), id("d")),
        rel("tprime_after_t", single("ud", &[("", T, ""), ("", TPrime, "")]), id("ud")),
        rel("t_after_tprime", single("du", &[("", TPrime, ""), ("", T, "")]), t_tp),
        rel(
            "left_curl",
            single("u", &[("", C, "u"), ("d", S, ""), ("", DPrime, "u")]),
            SliceSum::zero(word("u"), word("u")),
        ),
        rel("bubble", single("", &[("", C, ""), ("", DPrime, "")]), id("")),
        rel(
            "t_definition",
            single("ud", &[("", T, "")]),
            single("ud", &[("", C, "ud"), ("d", S, "d"), ("du", D, "")]),
        ),
        rel(
            "tprime_definition",
            single("du", &[("", TPrime, "")]),
            single("du", &[("du", CPrime, ""), ("d", S, "d"), ("", DPrime, "ud")]),
        ),
        rel(
            "sprime_definition",
            single("dd", &[("", SPrime, "")]),
            single("dd", &[("", C, "dd"), ("d", T, "d"), ("dd", D, "")]),
        ),
        rel(
            "xprime_rotations",
            single("d", &[("", XPrime, "")]),
            single("d", &[("d", CPrime, ""), ("d", X, "d"), ("", DPrime, "d")]),
        ),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub rows: usize,
    pub cols: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub name: &'static str,
    pub pass: bool,
    pub levels: Vec<LevelCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub max_level: usize,
    pub pass: bool,
    pub relations: Vec<RelationReport>,
}

pub fn relations_selftest(oracle: &Oracle, max_level: usize) -> SelftestReport {
    let relations: Vec<RelationReport> = relations()
        .par_iter()
        .map(|r| {
            let levels: Vec<LevelCheck> = (0..=max_level)
                .map(|n| {
                    let a = r.lhs.eval(oracle, n);
                    let b = r.rhs.eval(oracle, n);
                    LevelCheck { level: n, rows: a.rows(), cols: a.cols(), pass: a == b }
                })
                .collect();
            RelationReport { name: r.name, pass: levels.iter().all(|l| l.pass), levels }
        })
        .collect();
    SelftestReport { max_level, pass: relations.iter().all(|r| r.pass), relations }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureFailure {
    pub upper: String,
    pub lower: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub max_len: usize,
    pub level: usize,
    pub pairs: usize,
    pub nonzero_results: usize,
    pub rules: ReduceStats,
    pub failures: Vec<ClosureFailure>,
    pub pass: bool,
}

/// Every composable pair of restricted basis diagrams with word lengths at
/// most `max_len`.
pub fn composable_pairs(max_len: usize) -> Vec<(BasisDiagram, BasisDiagram)> {
    let words = Word::all_up_to(max_len);
    let mut out = Vec::new();
    for x in &words {
        for y in &words {
            let lower = restricted_basis(x, y);
            if lower.is_empty() {
                continue;
            }
            for z in &words {
                for g in restricted_basis(y, z) {
                    out.extend(lower.iter().map(|f| (g.clone(), f.clone())));
                }
            }
        }
    }
    out
}

/// Reduce every composable pair and compare with the semantic model at all
/// levels up to `level`.
pub fn closure_selftest(oracle: &Oracle, max_len: usize, level: usize) -> ClosureReport {
    let pairs = composable_pairs(max_len);
    let results: Vec<(Option<ClosureFailure>, ReduceStats, bool)> = pairs
        .par_iter()
        .map(|(g, f)| {
            let fail = |reason: String| ClosureFailure { upper: g.to_string(), lower: f.to_string(), reason };
            let (m, stats) = match glue(g, f).and_then(|gd| reduce_with_stats(&gd)) {
                Ok(r) => r,
                Err(e) => return (Some(fail(e.to_string())), ReduceStats::default(), false),
            };
            let nonzero = !m.is_zero();
            if !m.is_restricted() {
                return (Some(fail(format!("non-restricted result {m}"))), stats, nonzero);
            }
            let sw = to_slices(g).and_then(|gs| gs.after(&to_slices(f)?));
            let sw = match sw {
                Ok(sw) => sw,
                Err(e) => return (Some(fail(e.to_string())), stats, nonzero),
            };
            for n in 0..=level {
                match oracle.eval_morphism(&m, n) {
                    Ok(a) if a == oracle.eval_slice_word(&sw, n) => {}
                    Ok(_) => return (Some(fail(format!("disagrees with the model at level {n}"))), stats, nonzero),
                    Err(e) => return (Some(fail(e.to_string())), stats, nonzero),
                }
            }
            (None, stats, nonzero)
        })
        .collect();
    let mut rules = ReduceStats::default();
    let mut failures = Vec::new();
    let mut nonzero_results = 0;
    for (f, s, nz) in results {
        rules.merge(&s);
        nonzero_results += usize::from(nz);
        failures.extend(f);
    }
    ClosureReport { max_len, level, pairs: pairs.len(), nonzero_results, rules, pass: failures.is_empty(), failures }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawsReport {
    pub seed: u64,
    pub samples: usize,
    pub associativity: bool,
    pub interchange: bool,
    pub pass: bool,
}

fn random_chain(rng: &mut ChaCha8Rng, words: &[Word], len: usize) -> Option<Vec<Morphism>> {
    let mut src = words.choose(rng)?.clone();
    let mut out = Vec::new();
    for _ in 0..len {
        let options: Vec<BasisDiagram> = words.iter().flat_map(|t| restricted_basis(&src, t)).collect();
        let d = options.choose(rng)?.clone();
        src = d.target().clone();
        out.push(Morphism::from_diagram(d));
    }
    Some(out)
}

/// Associativity and interchange on pseudorandom composable chains of
/// restricted basis diagrams with word lengths at most `max_len`.
pub fn laws_selftest(seed: u64, samples: usize, max_len: usize) -> crate::Result<LawsReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = Word::all_up_to(max_len);
    let (mut associativity, mut interchange) = (true, true);
    let mut done = 0;
    while done < samples {
        let Some(c) = random_chain(&mut rng, &words, 3) else { continue };
        let left = compose(&compose(&c[2], &c[1])?, &c[0])?;
        let right = compose(&c[2], &compose(&c[1], &c[0])?)?;
        associativity &= left == right;
        let Some(e) = random_chain(&mut rng, &words, 2) else { continue };
        let lhs = compose(&hcompose(&c[1], &e[1]), &hcompose(&c[0], &e[0]))?;
        let rhs = hcompose(&compose(&c[1], &c[0])?, &compose(&e[1], &e[0])?);
        interchange &= lhs == rhs;
        done += 1;
    }
    Ok(LawsReport { seed, samples, associativity, interchange, pass: associativity && interchange })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_relations_hold() {
        let report = relations_selftest(&Oracle::new(), 3);
        for r in &report.relations {
            assert!(r.pass, "{} fails: {:?}", r.name, r.levels);
        }
    }

    #[test]
    fn dot_is_not_identity() {
        let o = Oracle::new();
        let x = single("u", &[("", Generator::X, "")]);
        let differs = (0..=2).any(|n| x.eval(&o, n) != id("u").eval(&o, n));
        assert!(differs);
    }
}
