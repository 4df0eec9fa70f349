use std::collections::BTreeMap;

use serde::Serialize;

use super::planar::{Planar, Step};
use super::Morphism;
use crate::diagrams::{is_restricted, to_slices, BasisDiagram, BoundaryPoint, BoundarySide, StringKind};
use crate::error::{HeisError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Lower,
    Upper,
}

/// One piece of a glued string: a string of one of the two layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Substrand {
    pub layer: Layer,
    pub string: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedString {
    /// Substrands in order along the string.
    pub substrands: Vec<Substrand>,
    pub closed: bool,
}

/// The unreduced vertical composite `upper ∘ lower`.
#[derive(Clone, Debug)]
pub struct GluedDiagram {
    lower: BasisDiagram,
    upper: BasisDiagram,
    strings: Vec<GluedString>,
}

/// Reduction rules, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Curl,
    Zigzag,
    Loop,
    Bubble,
    /// Double crossing of strings running the same way.
    Parallel,
    Coherent,
    Anti,
    Terminal,
}

/// How often each rule fired while reducing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReduceStats(pub BTreeMap<Rule, u64>);

impl ReduceStats {
    fn bump(&mut self, r: Rule) {
        *self.0.entry(r).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &ReduceStats) {
        for (&r, &n) in &other.0 {
            *self.0.entry(r).or_insert(0) += n;
        }
    }
}

/// Trace strings of `upper ∘ lower` through the shared boundary.
pub fn glue(upper: &BasisDiagram, lower: &BasisDiagram) -> Result<GluedDiagram> {
    if lower.target() != upper.source() {
        return Err(HeisError::TypeMismatch { expected: upper.source().clone(), found: lower.target().clone() });
    }
    if !lower.is_undecorated() || !upper.is_undecorated() {
        return Err(HeisError::NonRestrictedInput("decorated diagram".into()));
    }
    let (fm, gm) = (lower.matching(), upper.matching());
    let mut seen = [vec![false; fm.num_strings()], vec![false; gm.num_strings()]];
    let layer_idx = |l: Layer| match l {
        Layer::Lower => 0,
        Layer::Upper => 1,
    };
    // Follow a string starting at one endpoint of a substrand.
    let trace = |start: Substrand, entry: BoundaryPoint, seen: &mut [Vec<bool>; 2]| {
        let mut subs = Vec::new();
        let mut cur = start;
        let mut at = entry;
        loop {
            seen[layer_idx(cur.layer)][cur.string] = true;
            subs.push(cur);
            let m = if cur.layer == Layer::Lower { fm } else { gm };
            let exit = m.partner(at);
            let crosses = match (cur.layer, exit.side) {
                (Layer::Lower, BoundarySide::Top) => Some((Layer::Upper, BoundaryPoint::bottom(exit.index))),
                (Layer::Upper, BoundarySide::Bottom) => Some((Layer::Lower, BoundaryPoint::top(exit.index))),
                _ => None,
            };
            let Some((layer, p)) = crosses else { return (subs, false) };
            let next = Substrand { layer, string: if layer == Layer::Lower { fm.string_at(p) } else { gm.string_at(p) } };
            if seen[layer_idx(layer)][next.string] {
                return (subs, true);
            }
            cur = next;
            at = p;
        }
    };
    let mut strings = Vec::new();
    for i in 0..lower.source().len() {
        let p = BoundaryPoint::bottom(i);
        let s = Substrand { layer: Layer::Lower, string: fm.string_at(p) };
        if !seen[0][s.string] {
            let (substrands, _) = trace(s, p, &mut seen);
            strings.push(GluedString { substrands, closed: false });
        }
    }
    for i in 0..upper.target().len() {
        let p = BoundaryPoint::top(i);
        let s = Substrand { layer: Layer::Upper, string: gm.string_at(p) };
        if !seen[1][s.string] {
            let (substrands, _) = trace(s, p, &mut seen);
            strings.push(GluedString { substrands, closed: false });
        }
    }
    for s in 0..fm.num_strings() {
        if !seen[0][s] {
            let p = fm.pairs()[s].0;
            let (substrands, _) = trace(Substrand { layer: Layer::Lower, string: s }, p, &mut seen);
            strings.push(GluedString { substrands, closed: true });
        }
    }
    Ok(GluedDiagram { lower: lower.clone(), upper: upper.clone(), strings })
}

impl GluedDiagram {
    pub fn lower(&self) -> &BasisDiagram {
        &self.lower
    }

    pub fn upper(&self) -> &BasisDiagram {
        &self.upper
    }

    pub fn strings(&self) -> &[GluedString] {
        &self.strings
    }

    fn layer(&self, l: Layer) -> &BasisDiagram {
        match l {
            Layer::Lower => &self.lower,
            Layer::Upper => &self.upper,
        }
    }

    fn kind(&self, s: Substrand) -> StringKind {
        self.layer(s.layer).matching().string_profile(s.string).kind
    }

    /// Number of crossings between glued strings `i` and `j` (or of string `i`
    /// with itself when `i == j`).
    pub fn crossings_between(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.strings[i].substrands, &self.strings[j].substrands);
        let mut n = 0;
        for (x, sx) in a.iter().enumerate() {
            for (y, sy) in b.iter().enumerate() {
                if i == j && y <= x {
                    continue;
                }
                if sx.layer == sy.layer && self.layer(sx.layer).matching().strings_cross(sx.string, sy.string) {
                    n += 1;
                }
            }
        }
        n
    }

    fn string_of(&self, s: Substrand) -> usize {
        self.strings.iter().position(|g| g.substrands.contains(&s)).expect("every substrand is traced")
    }

    /// Substrand of `layer` touching middle point `k`.
    fn at_middle(&self, layer: Layer, k: usize) -> Substrand {
        let p = match layer {
            Layer::Lower => BoundaryPoint::top(k),
            Layer::Upper => BoundaryPoint::bottom(k),
        };
        Substrand { layer, string: self.layer(layer).matching().string_at(p) }
    }

    /// The glued-level rules that force the composite to vanish.
    fn vanishing_rule(&self) -> Option<Rule> {
        if (0..self.strings.len()).any(|i| self.crossings_between(i, i) > 0) {
            return Some(Rule::Curl);
        }
        let mid = self.lower.target().len();
        for k in 0..mid {
            let cup = self.at_middle(Layer::Lower, k);
            let cap = self.at_middle(Layer::Upper, k);
            if self.kind(cup) == StringKind::Cup
                && self.kind(cap) == StringKind::Cap
                && !self.strings[self.string_of(cup)].closed
            {
                return Some(Rule::Zigzag);
            }
        }
        for (layer, other, kind) in [(Layer::Lower, Layer::Upper, StringKind::Cup), (Layer::Upper, Layer::Lower, StringKind::Cap)] {
            let m = self.layer(layer).matching();
            for s in 0..m.num_strings() {
                if m.string_profile(s).kind != kind {
                    continue;
                }
                let (a, b) = m.pairs()[s];
                let (x, y) = (self.at_middle(other, a.index), self.at_middle(other, b.index));
                if x != y && self.layer(other).matching().strings_cross(x.string, y.string) {
                    return Some(Rule::Loop);
                }
            }
        }
        None
    }
}

/// Normal form of a glued diagram of two restricted layers.
pub fn reduce(gd: &GluedDiagram) -> Result<Morphism> {
    reduce_with_stats(gd).map(|(m, _)| m)
}

pub fn reduce_with_stats(gd: &GluedDiagram) -> Result<(Morphism, ReduceStats)> {
    for d in [&gd.lower, &gd.upper] {
        if !is_restricted(d) {
            return Err(HeisError::NonRestrictedInput(d.to_string()));
        }
    }
    let (source, target) = (gd.lower.source().clone(), gd.upper.target().clone());
    let mut stats = ReduceStats::default();
    if let Some(rule) = gd.vanishing_rule() {
        stats.bump(rule);
        return Ok((Morphism::zero(source, target), stats));
    }
    let sw = to_slices(&gd.upper)?.after(&to_slices(&gd.lower)?)?;
    let (terms, s) = reduce_planar(&Planar::from_slice_word(&sw)?)?;
    stats.merge(&s);
    let mut m = Morphism::zero(source, target);
    for (d, c) in terms {
        if !is_restricted(&d) {
            return Err(HeisError::InternalNonClosure(d.to_string()));
        }
        m.add_term(d, c);
    }
    Ok((m, stats))
}

type Terms = BTreeMap<BasisDiagram, i64>;

fn reduce_planar(p: &Planar) -> Result<(Terms, ReduceStats)> {
    let mut stats = ReduceStats::default();
    let mut current = p.clone();
    loop {
        match current.step()? {
            Step::Zero => {
                stats.bump(Rule::Curl);
                return Ok((Terms::new(), stats));
            }
            Step::Terminal(d) => {
                stats.bump(Rule::Terminal);
                return Ok((Terms::from([(d, 1)]), stats));
            }
            Step::Children(rule, mut children) => {
                stats.bump(rule);
                if children.len() == 1 && children[0].0 == 1 {
                    current = children.pop().expect("one child").1;
                    continue;
                }
                let results: Vec<Result<(Terms, ReduceStats)>> = {
                    use rayon::prelude::*;
                    children.par_iter().map(|(_, c)| reduce_planar(c)).collect()
                };
                let mut terms = Terms::new();
                for ((coeff, _), r) in children.iter().zip(results) {
                    let (t, s) = r?;
                    stats.merge(&s);
                    for (d, c) in t {
                        *terms.entry(d).or_insert(0) += coeff * c;
                    }
                }
                terms.retain(|_, c| *c != 0);
                return Ok((terms, stats));
            }
        }
    }
}
