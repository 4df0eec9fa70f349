//! Diagrams in general position, stored as stacks of elementary slices, with
//! the local moves used during reduction: curl detection, bubble deletion and
//! bigon resolution.

use std::collections::{BTreeSet, VecDeque};

use super::glue::Rule;
use crate::diagrams::{from_slices, BasisDiagram, Generator, Slice, SliceWord};
use crate::error::{HeisError, Result};
use crate::words::{Orientation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Geo {
    Cross(usize),
    Cup(usize),
    Cap(usize),
}

/// A segment: position `q` on the horizontal line between slices `i-1` and `i`.
pub(crate) type Seg = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    /// Neighbor segment; `true` when reached through a slice rather than
    /// around a cup or cap.
    Seg(Seg, bool),
    Bottom,
    Top,
}

/// Unoriented slice geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Shape {
    widths: Vec<usize>,
    geo: Vec<Geo>,
}

impl Shape {
    fn height(&self) -> usize {
        self.geo.len()
    }

    fn up(&self, (i, q): Seg) -> Link {
        if i == self.height() {
            return Link::Top;
        }
        match self.geo[i] {
            Geo::Cross(p) if q == p => Link::Seg((i + 1, p + 1), true),
            Geo::Cross(p) if q == p + 1 => Link::Seg((i + 1, p), true),
            Geo::Cross(_) => Link::Seg((i + 1, q), true),
            Geo::Cap(p) if q == p => Link::Seg((i, p + 1), false),
            Geo::Cap(p) if q == p + 1 => Link::Seg((i, p), false),
            Geo::Cap(p) if q < p => Link::Seg((i + 1, q), true),
            Geo::Cap(_) => Link::Seg((i + 1, q - 2), true),
            Geo::Cup(p) if q < p => Link::Seg((i + 1, q), true),
            Geo::Cup(_) => Link::Seg((i + 1, q + 2), true),
        }
    }

    fn down(&self, (i, q): Seg) -> Link {
        if i == 0 {
            return Link::Bottom;
        }
        match self.geo[i - 1] {
            Geo::Cross(p) if q == p => Link::Seg((i - 1, p + 1), true),
            Geo::Cross(p) if q == p + 1 => Link::Seg((i - 1, p), true),
            Geo::Cross(_) => Link::Seg((i - 1, q), true),
            Geo::Cup(p) if q == p => Link::Seg((i, p + 1), false),
            Geo::Cup(p) if q == p + 1 => Link::Seg((i, p), false),
            Geo::Cup(p) if q < p => Link::Seg((i - 1, q), true),
            Geo::Cup(_) => Link::Seg((i - 1, q - 2), true),
            Geo::Cap(p) if q < p => Link::Seg((i - 1, q), true),
            Geo::Cap(_) => Link::Seg((i - 1, q + 2), true),
        }
    }

    fn segments(&self) -> impl Iterator<Item = Seg> + '_ {
        self.widths.iter().enumerate().flat_map(|(i, &w)| (0..w).map(move |q| (i, q)))
    }

    /// Undirected connected components of the segment graph.
    fn components(&self) -> Vec<Vec<Seg>> {
        let mut seen: Vec<Vec<bool>> = self.widths.iter().map(|&w| vec![false; w]).collect();
        let mut out = Vec::new();
        for s in self.segments() {
            if seen[s.0][s.1] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s.0][s.1] = true;
            while let Some(c) = queue.pop_front() {
                comp.push(c);
                for l in [self.up(c), self.down(c)] {
                    if let Link::Seg(n, _) = l {
                        if !seen[n.0][n.1] {
                            seen[n.0][n.1] = true;
                            queue.push_back(n);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

/// Per-segment data carried through surgery.
#[derive(Clone, Copy, Debug)]
struct Mark {
    hint: Option<Orientation>,
    mid: bool,
}

struct Surgery {
    shape: Shape,
    marks: Vec<Vec<Mark>>,
}

impl Surgery {
    /// Replace the crossing at slice `s` by two parallel strands.
    fn smooth_vertical(&mut self, s: usize) {
        let Geo::Cross(p) = self.shape.geo[s] else { unreachable!("smoothing a non-crossing") };
        let above = self.marks.remove(s + 1);
        for q in [p, p + 1] {
            let m = &mut self.marks[s][q];
            m.hint = m.hint.or(above[q].hint);
            m.mid = m.mid && above[q].mid;
        }
        self.shape.geo.remove(s);
        self.shape.widths.remove(s + 1);
    }

    /// Replace the crossing at slice `s` by a cap followed by a cup.
    fn smooth_horizontal(&mut self, s: usize) {
        let Geo::Cross(p) = self.shape.geo[s] else { unreachable!("smoothing a non-crossing") };
        let mut middle = self.marks[s].clone();
        middle.drain(p..p + 2);
        self.marks.insert(s + 1, middle);
        self.shape.widths.insert(s + 1, self.shape.widths[s] - 2);
        self.shape.geo.splice(s..s + 1, [Geo::Cap(p), Geo::Cup(p)]);
    }

    /// Remove a set of segments forming whole components.
    fn delete(&mut self, removed: &BTreeSet<Seg>) {
        let keep = |i: usize, q: usize| !removed.contains(&(i, q));
        let shift = |i: usize, p: usize| p - (0..p).filter(|&q| !keep(i, q)).count();
        let filtered = |i: usize, marks: &[Mark]| -> Vec<Mark> {
            marks.iter().enumerate().filter(|&(q, _)| keep(i, q)).map(|(_, m)| *m).collect()
        };
        let mut widths = vec![self.shape.widths[0] - (0..self.shape.widths[0]).filter(|&q| !keep(0, q)).count()];
        let mut marks = vec![filtered(0, &self.marks[0])];
        let mut geo = Vec::new();
        for (i, &g) in self.shape.geo.iter().enumerate() {
            let dropped = match g {
                Geo::Cross(p) => !keep(i, p) || !keep(i, p + 1),
                Geo::Cup(p) => !keep(i + 1, p),
                Geo::Cap(p) => !keep(i, p),
            };
            if dropped {
                continue;
            }
            geo.push(match g {
                Geo::Cross(p) => Geo::Cross(shift(i, p)),
                Geo::Cup(p) => Geo::Cup(shift(i, p)),
                Geo::Cap(p) => Geo::Cap(shift(i, p)),
            });
            let m = filtered(i + 1, &self.marks[i + 1]);
            widths.push(m.len());
            marks.push(m);
        }
        self.shape = Shape { widths, geo };
        self.marks = marks;
    }

    /// Assign orientations consistent with the boundary words and the hints.
    fn orient(self, source: &Word, target: &Word) -> Result<Planar> {
        let shape = self.shape;
        let top = shape.height();
        let mut letters: Vec<Vec<Option<Orientation>>> =
            shape.widths.iter().map(|&w| vec![None; w]).collect();
        let mut seeds: Vec<(Seg, Orientation)> = Vec::new();
        for (q, &o) in source.letters().iter().enumerate() {
            seeds.push(((0, q), o));
        }
        for (q, &o) in target.letters().iter().enumerate() {
            seeds.push(((top, q), o));
        }
        for s in shape.segments() {
            if let Some(o) = self.marks[s.0][s.1].hint {
                seeds.push((s, o));
            }
        }
        let conflict = || HeisError::InternalNonClosure("inconsistent orientation after surgery".into());
        for (seed, o) in seeds {
            match letters[seed.0][seed.1] {
                Some(x) if x == o => continue,
                Some(_) => return Err(conflict()),
                None => {}
            }
            letters[seed.0][seed.1] = Some(o);
            let mut queue = VecDeque::from([seed]);
            while let Some(c) = queue.pop_front() {
                let here = letters[c.0][c.1].expect("assigned");
                for l in [shape.up(c), shape.down(c)] {
                    if let Link::Seg(n, vertical) = l {
                        let want = if vertical { here } else { here.flip() };
                        match letters[n.0][n.1] {
                            Some(x) if x != want => return Err(conflict()),
                            Some(_) => {}
                            None => {
                                letters[n.0][n.1] = Some(want);
                                queue.push_back(n);
                            }
                        }
                    }
                }
            }
        }
        let levels = letters
            .into_iter()
            .map(|l| l.into_iter().collect::<Option<Vec<_>>>().ok_or_else(conflict))
            .collect::<Result<Vec<_>>>()?;
        Ok(Planar { levels, geo: shape.geo })
    }
}

/// An oriented diagram in general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Planar {
    levels: Vec<Vec<Orientation>>,
    geo: Vec<Geo>,
}

/// A string traversed in its direction of travel.
#[derive(Clone, Debug)]
struct Strand {
    segs: Vec<Seg>,
    closed: bool,
    /// `(step, slice)`: the crossing slice passed between `segs[step]` and the
    /// following segment.
    crossings: Vec<(usize, usize)>,
}

impl Strand {
    fn next_index(&self, k: usize) -> usize {
        if k + 1 == self.segs.len() {
            0
        } else {
            k + 1
        }
    }
}

/// Outcome of one reduction step.
pub(crate) enum Step {
    Zero,
    Terminal(BasisDiagram),
    Children(Rule, Vec<(i64, Planar)>),
}

/// A pair of crossings between two strings bounding an innermost disk.
#[derive(Clone, Debug)]
struct Bigon {
    a: usize,
    b: usize,
    c1: usize,
    c2: usize,
    /// Segments of each side, in the order of travel of its string.
    a_arc: Vec<Seg>,
    b_arc: Vec<Seg>,
    /// Whether `a` (resp. `b`) travels from `c1` to `c2` along its side.
    a_forward: bool,
    b_forward: bool,
}

impl Planar {
    pub(crate) fn from_slice_word(sw: &SliceWord) -> Result<Self> {
        let mut levels = vec![sw.source.letters().to_vec()];
        let mut geo = Vec::new();
        for s in &sw.slices {
            let p = s.left.len();
            geo.push(match s.generator {
                Generator::S | Generator::SPrime | Generator::T | Generator::TPrime => Geo::Cross(p),
                Generator::C | Generator::CPrime => Geo::Cup(p),
                Generator::D | Generator::DPrime => Geo::Cap(p),
                Generator::X | Generator::XPrime => {
                    return Err(HeisError::NonRestrictedInput("dotted slice".into()))
                }
            });
            levels.push(s.target().letters().to_vec());
        }
        Ok(Planar { levels, geo })
    }

    pub(crate) fn to_slice_word(&self) -> SliceWord {
        let slices = self
            .geo
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let below = &self.levels[i];
                let above = &self.levels[i + 1];
                let (p, generator) = match g {
                    Geo::Cross(p) => (p, Generator::crossing(below[p], below[p + 1])),
                    Geo::Cap(p) => (p, Generator::cap(below[p])),
                    Geo::Cup(p) => (p, Generator::cup(above[p])),
                };
                let skip = if matches!(g, Geo::Cup(_)) { 0 } else { 2 };
                Slice::new(Word::new(below[..p].to_vec()), generator, Word::new(below[p + skip..].to_vec()))
            })
            .collect();
        SliceWord { source: self.source(), slices }
    }

    pub(crate) fn source(&self) -> Word {
        Word::new(self.levels[0].clone())
    }

    pub(crate) fn target(&self) -> Word {
        Word::new(self.levels.last().expect("at least one level").clone())
    }

    fn shape(&self) -> Shape {
        Shape { widths: self.levels.iter().map(Vec::len).collect(), geo: self.geo.clone() }
    }

    fn letter(&self, (i, q): Seg) -> Orientation {
        self.levels[i][q]
    }

    fn strands(&self) -> (Vec<Strand>, Vec<Vec<usize>>) {
        let shape = self.shape();
        let top = shape.height();
        let next = |s: Seg| match self.letter(s) {
            Orientation::Up => shape.up(s),
            Orientation::Down => shape.down(s),
        };
        let prev_is_boundary = |s: Seg| {
            let l = match self.letter(s) {
                Orientation::Up => shape.down(s),
                Orientation::Down => shape.up(s),
            };
            matches!(l, Link::Bottom | Link::Top)
        };
        let crossing_between = |a: Seg, b: Seg| -> Option<usize> {
            let slice = a.0.min(b.0);
            (a.0 != b.0 && matches!(self.geo[slice], Geo::Cross(p) if {
                let q = if a.0 == slice { a.1 } else { b.1 };
                q == p || q == p + 1
            }))
            .then_some(slice)
        };
        let mut owner: Vec<Vec<usize>> = self.levels.iter().map(|l| vec![usize::MAX; l.len()]).collect();
        let mut strands = Vec::new();
        let starts: Vec<Seg> = (0..self.levels[0].len())
            .map(|q| (0, q))
            .chain((0..self.levels[top].len()).map(|q| (top, q)))
            .filter(|&s| prev_is_boundary(s))
            .chain(shape.segments())
            .collect();
        for start in starts {
            if owner[start.0][start.1] != usize::MAX {
                continue;
            }
            let id = strands.len();
            let mut segs = vec![start];
            let mut crossings = Vec::new();
            owner[start.0][start.1] = id;
            let mut cur = start;
            let closed = loop {
                match next(cur) {
                    Link::Seg(n, _) => {
                        if let Some(slice) = crossing_between(cur, n) {
                            crossings.push((segs.len() - 1, slice));
                        }
                        if n == start {
                            break true;
                        }
                        owner[n.0][n.1] = id;
                        segs.push(n);
                        cur = n;
                    }
                    _ => break false,
                }
            };
            strands.push(Strand { segs, closed, crossings });
        }
        (strands, owner)
    }

    fn crossing_strands(&self, owner: &[Vec<usize>], slice: usize) -> (usize, usize) {
        let Geo::Cross(p) = self.geo[slice] else { unreachable!() };
        (owner[slice][p], owner[slice][p + 1])
    }

    /// Integer coordinates of the path through `segs` (scaled by 10), with
    /// corners for cups and caps.
    fn path_points(&self, segs: &[Seg], closed: bool, out: &mut Vec<(i64, i64)>) {
        let shape = self.shape();
        for (k, &s) in segs.iter().enumerate() {
            out.push((10 * s.1 as i64, 10 * s.0 as i64));
            let n = if k + 1 < segs.len() {
                segs[k + 1]
            } else if closed {
                segs[0]
            } else {
                break;
            };
            if n.0 == s.0 {
                let dy = if shape.up(s) == Link::Seg(n, false) { 1 } else { -1 };
                out.push((10 * s.1 as i64, 10 * s.0 as i64 + dy));
                out.push((10 * n.1 as i64, 10 * n.0 as i64 + dy));
            }
        }
    }

    fn crossing_center(&self, slice: usize) -> (i64, i64) {
        let Geo::Cross(p) = self.geo[slice] else { unreachable!() };
        (10 * p as i64 + 5, 10 * slice as i64 + 5)
    }

    /// Twice the signed area; positive means counterclockwise.
    fn signed_area(points: &[(i64, i64)]) -> i64 {
        let n = points.len();
        (0..n)
            .map(|k| {
                let (x1, y1) = points[k];
                let (x2, y2) = points[(k + 1) % n];
                x1 * y2 - x2 * y1
            })
            .sum()
    }

    /// One reduction step: curl, isolated bubble, bigon, or terminal.
    pub(crate) fn step(&self) -> Result<Step> {
        let (strands, owner) = self.strands();

        for (id, st) in strands.iter().enumerate() {
            for (k, &(step, slice)) in st.crossings.iter().enumerate() {
                if let Some(&(step2, _)) = st.crossings[k + 1..].iter().find(|&&(_, s)| s == slice) {
                    let mut pts = vec![self.crossing_center(slice)];
                    self.path_points(&st.segs[step + 1..=step2], false, &mut pts);
                    if Self::signed_area(&pts) < 0 {
                        return Err(HeisError::InternalNonClosure(format!("clockwise curl on string {id}")));
                    }
                    return Ok(Step::Zero);
                }
            }
        }

        if let Some(st) = strands.iter().find(|s| s.closed && s.crossings.is_empty()) {
            let mut pts = Vec::new();
            self.path_points(&st.segs, true, &mut pts);
            if Self::signed_area(&pts) < 0 {
                return Err(HeisError::InternalNonClosure("clockwise bubble".into()));
            }
            let removed: BTreeSet<Seg> = st.segs.iter().copied().collect();
            let mut surgery = self.surgery(&BTreeSet::new());
            surgery.delete(&removed);
            return Ok(Step::Children(Rule::Bubble, vec![(1, surgery.orient(&self.source(), &self.target())?)]));
        }

        if let Some(bigon) = self.find_bigon(&strands, &owner) {
            return self.resolve(&bigon);
        }

        let d = from_slices(&self.to_slice_word())?;
        Ok(Step::Terminal(d))
    }

    fn surgery(&self, mid: &BTreeSet<Seg>) -> Surgery {
        let marks = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.iter()
                    .enumerate()
                    .map(|(q, &o)| {
                        let m = mid.contains(&(i, q));
                        Mark { hint: (!m).then_some(o), mid: m }
                    })
                    .collect()
            })
            .collect();
        Surgery { shape: self.shape(), marks }
    }

    /// Segments strictly between crossings `c1` and `c2` along strand `st`,
    /// in travel order, together with whether travel runs from `c1` to `c2`.
    /// For closed strands, `which` selects one of the two arcs.
    fn arc(st: &Strand, c1: usize, c2: usize, which: bool) -> Option<(Vec<Seg>, bool)> {
        let k1 = st.crossings.iter().find(|&&(_, s)| s == c1)?.0;
        let k2 = st.crossings.iter().find(|&&(_, s)| s == c2)?.0;
        let (from, to, forward) = match (st.closed, which) {
            (false, _) if k1 < k2 => (k1, k2, true),
            (false, _) => (k2, k1, false),
            (true, true) => (k1, k2, true),
            (true, false) => (k2, k1, false),
        };
        let mut segs = Vec::new();
        let mut k = st.next_index(from);
        loop {
            segs.push(st.segs[k]);
            if k == to {
                break;
            }
            k = st.next_index(k);
        }
        Some((segs, forward))
    }

    fn find_bigon(&self, strands: &[Strand], owner: &[Vec<usize>]) -> Option<Bigon> {
        let n = strands.len();
        let mut between: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
        for slice in 0..self.geo.len() {
            if matches!(self.geo[slice], Geo::Cross(_)) {
                let (x, y) = self.crossing_strands(owner, slice);
                if x != y {
                    let (lo, hi) = (x.min(y), x.max(y));
                    between[lo][hi].push(slice);
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let cs = &between[a][b];
                if cs.len() < 2 {
                    continue;
                }
                for (i, &c1) in cs.iter().enumerate() {
                    for &c2 in &cs[i + 1..] {
                        for wa in [true, false] {
                            for wb in [true, false] {
                                if (!strands[a].closed && !wa) || (!strands[b].closed && !wb) {
                                    continue;
                                }
                                let Some((a_arc, a_forward)) = Self::arc(&strands[a], c1, c2, wa) else { continue };
                                let Some((b_arc, b_forward)) = Self::arc(&strands[b], c1, c2, wb) else { continue };
                                let bigon = Bigon { a, b, c1, c2, a_arc, b_arc, a_forward, b_forward };
                                if self.is_clean(strands, &bigon) {
                                    return Some(bigon);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Whether the disk bounded by the bigon contains nothing but arcs running
    /// from one side to the other, pairwise crossing at most once.
    fn is_clean(&self, strands: &[Strand], bg: &Bigon) -> bool {
        let side: BTreeSet<Seg> = bg.a_arc.iter().chain(&bg.b_arc).copied().collect();
        let on_a: BTreeSet<Seg> = bg.a_arc.iter().copied().collect();
        // The sides must meet only at the two corners.
        let crossing_sides = |slice: usize| {
            let Geo::Cross(p) = self.geo[slice] else { return None };
            let below = [(slice, p), (slice, p + 1)];
            let above = [(slice + 1, p), (slice + 1, p + 1)];
            Some((below, above))
        };
        for slice in 0..self.geo.len() {
            if slice == bg.c1 || slice == bg.c2 {
                continue;
            }
            if let Some((below, above)) = crossing_sides(slice) {
                let hits = below.iter().chain(&above).filter(|s| side.contains(s)).count();
                if hits == 4 {
                    return false;
                }
            }
        }
        let mut per_level: Vec<Vec<usize>> = vec![Vec::new(); self.levels.len()];
        for &(i, q) in &side {
            per_level[i].push(q);
        }
        let inside = |(i, q): Seg| per_level[i].iter().filter(|&&x| x < q).count() % 2 == 1;

        // Runs of inside segments, each tagged with its entry and exit sides.
        let mut run_of: Vec<Vec<Option<usize>>> = self.levels.iter().map(|l| vec![None; l.len()]).collect();
        let mut runs = 0;
        for (id, st) in strands.iter().enumerate() {
            if id == bg.a || id == bg.b {
                if st.segs.iter().any(|&s| !side.contains(&s) && inside(s)) {
                    return false;
                }
                continue;
            }
            let len = st.segs.len();
            let ins: Vec<bool> = st.segs.iter().map(|&s| inside(s)).collect();
            let Some(out) = ins.iter().position(|&x| !x) else { return false };
            if !st.closed && (ins[0] || ins[len - 1]) {
                return false;
            }
            let side_at_step = |k: usize| -> Option<bool> {
                let &(_, slice) = st.crossings.iter().find(|&&(s, _)| s == k)?;
                let Geo::Cross(p) = self.geo[slice] else { return None };
                let other = [(slice, p), (slice, p + 1), (slice + 1, p), (slice + 1, p + 1)]
                    .into_iter()
                    .find(|s| side.contains(s))?;
                Some(on_a.contains(&other))
            };
            // Walk once around (or along) the strand starting just after an
            // outside segment.
            let order: Vec<usize> = if st.closed { (1..=len).map(|t| (out + t) % len).collect() } else { (0..len).collect() };
            let mut t = 0;
            while t < order.len() {
                if !ins[order[t]] {
                    t += 1;
                    continue;
                }
                let first = order[t];
                let entry = if first == 0 { len - 1 } else { first - 1 };
                let mut last = first;
                while t < order.len() && ins[order[t]] {
                    last = order[t];
                    run_of[st.segs[last].0][st.segs[last].1] = Some(runs);
                    t += 1;
                }
                match (side_at_step(entry), side_at_step(last)) {
                    (Some(x), Some(y)) if x != y => {}
                    _ => return false,
                }
                runs += 1;
            }
        }
        let mut pair_count = std::collections::BTreeMap::new();
        for slice in 0..self.geo.len() {
            if let Geo::Cross(p) = self.geo[slice] {
                if let (Some(x), Some(y)) = (run_of[slice][p], run_of[slice][p + 1]) {
                    if x == y {
                        return false;
                    }
                    let c = pair_count.entry((x.min(y), x.max(y))).or_insert(0);
                    *c += 1;
                    if *c > 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The arms of strand `st` at a crossing, as (outer, mid) segments, given
    /// the arc between the two corners.
    fn arms(&self, slice: usize, arc: &[Seg], forward: bool, at_first: bool) -> (Seg, Seg) {
        let Geo::Cross(p) = self.geo[slice] else { unreachable!() };
        let mid = if at_first == forward { arc[0] } else { *arc.last().expect("nonempty arc") };
        let own = |s: Seg| match s {
            (i, q) if i == slice && q == p => (slice + 1, p + 1),
            (i, q) if i == slice && q == p + 1 => (slice + 1, p),
            (_, q) if q == p => (slice, p + 1),
            _ => (slice, p),
        };
        (own(mid), mid)
    }

    fn resolve(&self, bg: &Bigon) -> Result<Step> {
        let mid: BTreeSet<Seg> = bg.a_arc.iter().chain(&bg.b_arc).copied().collect();
        let corner = |slice: usize, at_first: bool| {
            let (ao, am) = self.arms(slice, &bg.a_arc, bg.a_forward, at_first);
            let (bo, bm) = self.arms(slice, &bg.b_arc, bg.b_forward, at_first);
            (ao, am, bo, bm)
        };
        let vertical = |x: Seg, y: Seg| x.1 == y.1;
        let (a1o, _, b1o, b1m) = corner(bg.c1, true);
        let (a2o, _, b2o, b2m) = corner(bg.c2, false);
        let (hi, lo) = (bg.c1.max(bg.c2), bg.c1.min(bg.c2));
        let apply = |s: &mut Surgery, at: usize, x: Seg, y: Seg| {
            if vertical(x, y) {
                s.smooth_vertical(at)
            } else {
                s.smooth_horizontal(at)
            }
        };
        let (source, target) = (self.source(), self.target());

        let mut removal = self.surgery(&mid);
        let pairs = [(bg.c1, a1o, b1m), (bg.c2, a2o, b2m)];
        for &(at, x, y) in pairs.iter().filter(|p| p.0 == hi).chain(pairs.iter().filter(|p| p.0 == lo)) {
            apply(&mut removal, at, x, y);
        }
        let mut out = vec![(1, removal.orient(&source, &target)?)];

        let cyclic = bg.a_forward != bg.b_forward;
        let mut rule = Rule::Parallel;
        if cyclic {
            rule = Rule::Coherent;
            let mut pts = vec![self.crossing_center(bg.c1)];
            let a_path: Vec<Seg> = if bg.a_forward { bg.a_arc.clone() } else { bg.a_arc.iter().rev().copied().collect() };
            self.path_points(&a_path, false, &mut pts);
            pts.push(self.crossing_center(bg.c2));
            let b_path: Vec<Seg> = if bg.b_forward { bg.b_arc.iter().rev().copied().collect() } else { bg.b_arc.clone() };
            self.path_points(&b_path, false, &mut pts);
            let clockwise = (Self::signed_area(&pts) < 0) == bg.a_forward;
            if clockwise {
                rule = Rule::Anti;
                let mut turnback = self.surgery(&mid);
                let pairs = [(bg.c1, a1o, b1o), (bg.c2, a2o, b2o)];
                for &(at, x, y) in pairs.iter().filter(|p| p.0 == hi).chain(pairs.iter().filter(|p| p.0 == lo)) {
                    apply(&mut turnback, at, x, y);
                }
                let loop_segs: BTreeSet<Seg> = turnback
                    .shape
                    .components()
                    .into_iter()
                    .find(|c| c.iter().all(|&(i, q)| turnback.marks[i][q].mid))
                    .ok_or_else(|| HeisError::InternalNonClosure("turnback left no inner loop".into()))?
                    .into_iter()
                    .collect();
                turnback.delete(&loop_segs);
                out.push((-1, turnback.orient(&source, &target)?));
            }
        }
        Ok(Step::Children(rule, out))
    }
}
