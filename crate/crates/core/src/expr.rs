//! A small expression language for morphisms.
//!
//! Atoms: `s s' t t' tp c c' d d' x x'` and `id:WORD`. Binary operators, from
//! loosest to tightest: `+`/`-`, `.` (vertical, left operand on top), `*`
//! (horizontal). An integer prefix scales: `2 t`, `-3*(t . t')`.

use std::fmt;

use crate::diagrams::{Generator, Slice, SliceWord};
use crate::engine::{compose, hcompose, Morphism};
use crate::error::{HeisError, Result};
use crate::oracle::SliceSum;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Atom(Generator),
    Id(Word),
    Scalar(i64, Box<Expr>),
    /// Left operand on top.
    Vertical(Box<Expr>, Box<Expr>),
    Horizontal(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Difference(Box<Expr>, Box<Expr>),
}

/// A typed expression node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub source: Word,
    pub target: Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Restricted,
    Oracle,
}

fn type_error(what: &str, expected: &Word, found: &Word) -> HeisError {
    HeisError::Type(format!("{what}: expected {expected}, found {found}"))
}

impl Expr {
    pub fn atom(g: Generator) -> Self {
        Expr { kind: ExprKind::Atom(g), source: g.source(), target: g.target() }
    }

    pub fn id(w: Word) -> Self {
        Expr { source: w.clone(), target: w.clone(), kind: ExprKind::Id(w) }
    }

    pub fn scalar(k: i64, e: Expr) -> Self {
        Expr { source: e.source.clone(), target: e.target.clone(), kind: ExprKind::Scalar(k, Box::new(e)) }
    }

    pub fn vertical(top: Expr, bottom: Expr) -> Result<Self> {
        if top.source != bottom.target {
            return Err(type_error("vertical composition", &top.source, &bottom.target));
        }
        Ok(Expr {
            source: bottom.source.clone(),
            target: top.target.clone(),
            kind: ExprKind::Vertical(Box::new(top), Box::new(bottom)),
        })
    }

    pub fn horizontal(left: Expr, right: Expr) -> Self {
        Expr {
            source: left.source.tensor(&right.source),
            target: left.target.tensor(&right.target),
            kind: ExprKind::Horizontal(Box::new(left), Box::new(right)),
        }
    }

    fn linear(a: Expr, b: Expr, negate: bool) -> Result<Self> {
        if a.source != b.source {
            return Err(type_error("sum source", &a.source, &b.source));
        }
        if a.target != b.target {
            return Err(type_error("sum target", &a.target, &b.target));
        }
        let (source, target) = (a.source.clone(), a.target.clone());
        let kind = if negate {
            ExprKind::Difference(Box::new(a), Box::new(b))
        } else {
            ExprKind::Sum(Box::new(a), Box::new(b))
        };
        Ok(Expr { kind, source, target })
    }

    fn atoms(&self, out: &mut Vec<Generator>) {
        match &self.kind {
            ExprKind::Atom(g) => out.push(*g),
            ExprKind::Id(_) => {}
            ExprKind::Scalar(_, e) => e.atoms(out),
            ExprKind::Vertical(a, b) | ExprKind::Horizontal(a, b) | ExprKind::Sum(a, b) | ExprKind::Difference(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    /// Normal form in the restricted fragment.
    pub fn evaluate(&self) -> Result<Morphism> {
        let mut atoms = Vec::new();
        self.atoms(&mut atoms);
        if let Some(g) = atoms.into_iter().find(|g| !g.is_restricted()) {
            return Err(HeisError::NonRestrictedAtom(g.name().to_string()));
        }
        self.eval_restricted()
    }

    fn eval_restricted(&self) -> Result<Morphism> {
        Ok(match &self.kind {
            ExprKind::Atom(g) => Morphism::generator(*g),
            ExprKind::Id(w) => Morphism::identity(w),
            ExprKind::Scalar(k, e) => e.eval_restricted()?.scale(*k),
            ExprKind::Vertical(a, b) => compose(&a.eval_restricted()?, &b.eval_restricted()?)?,
            ExprKind::Horizontal(a, b) => hcompose(&a.eval_restricted()?, &b.eval_restricted()?),
            ExprKind::Sum(a, b) => a.eval_restricted()?.add(&b.eval_restricted()?)?,
            ExprKind::Difference(a, b) => a.eval_restricted()?.sub(&b.eval_restricted()?)?,
        })
    }

    /// Formal sum of slice words, for evaluation in the semantic model.
    pub fn slice_sum(&self) -> Result<SliceSum> {
        let (s, t) = (self.source.clone(), self.target.clone());
        Ok(match &self.kind {
            ExprKind::Atom(g) => SliceSum::single(SliceWord {
                source: g.source(),
                slices: vec![Slice::new(Word::unit(), *g, Word::unit())],
            }),
            ExprKind::Id(w) => SliceSum::single(SliceWord::identity(w)),
            ExprKind::Scalar(k, e) => {
                let mut x = e.slice_sum()?;
                x.terms.iter_mut().for_each(|(c, _)| *c *= k);
                x
            }
            ExprKind::Vertical(a, b) | ExprKind::Horizontal(a, b) => {
                let (x, y) = (a.slice_sum()?, b.slice_sum()?);
                let mut terms = Vec::new();
                for (c1, w1) in &x.terms {
                    for (c2, w2) in &y.terms {
                        let w = match self.kind {
                            ExprKind::Vertical(..) => w1.after(w2)?,
                            _ => w1.tensor(w2),
                        };
                        terms.push((c1 * c2, w));
                    }
                }
                SliceSum { source: s, target: t, terms }
            }
            ExprKind::Sum(a, b) | ExprKind::Difference(a, b) => {
                let sign = if matches!(self.kind, ExprKind::Sum(..)) { 1 } else { -1 };
                let mut x = a.slice_sum()?;
                x.terms.extend(b.slice_sum()?.terms.into_iter().map(|(c, w)| (sign * c, w)));
                x
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Sum(..) | ExprKind::Difference(..) => 0,
            ExprKind::Vertical(..) => 1,
            ExprKind::Horizontal(..) => 2,
            ExprKind::Scalar(..) => 3,
            ExprKind::Atom(_) | ExprKind::Id(_) => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8, f: &mut fmt::Formatter<'_>| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        let binary = |a: &Expr, op: &str, b: &Expr, p: u8, f: &mut fmt::Formatter<'_>| {
            wrap(a, p, f)?;
            write!(f, " {op} ")?;
            wrap(b, p + 1, f)
        };
        match &self.kind {
            ExprKind::Atom(g) => f.write_str(g.name()),
            ExprKind::Id(w) => write!(f, "id:{w}"),
            ExprKind::Scalar(k, e) => {
                write!(f, "{k} ")?;
                wrap(e, 4, f)
            }
            ExprKind::Vertical(a, b) => binary(a, ".", b, 1, f),
            ExprKind::Horizontal(a, b) => binary(a, "*", b, 2, f),
            ExprKind::Sum(a, b) => binary(a, "+", b, 0, f),
            ExprKind::Difference(a, b) => binary(a, "-", b, 0, f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(Generator),
    Id(Word),
    Int(i64),
    Plus,
    Minus,
    Dot,
    Star,
    Open,
    Close,
}

fn syntax(pos: usize, msg: impl Into<String>) -> HeisError {
    HeisError::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, ch) = chars[k];
        k += 1;
        let tok = match ch {
            c if c.is_whitespace() => continue,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '.' | '∘' => Tok::Dot,
            '*' | '⊗' => Tok::Star,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if c.is_ascii_digit() => {
                let mut end = k;
                while end < chars.len() && chars[end].1.is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[k - 1..end].iter().map(|&(_, c)| c).collect();
                k = end;
                Tok::Int(digits.parse().map_err(|_| syntax(pos, "integer too large"))?)
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = k;
                while end < chars.len() && (chars[end].1.is_ascii_alphanumeric() || chars[end].1 == '_') {
                    end += 1;
                }
                let mut name: String = chars[k - 1..end].iter().map(|&(_, c)| c).collect();
                k = end;
                if k < chars.len() && matches!(chars[k].1, '\'' | '′') {
                    name.push('\'');
                    k += 1;
                }
                if name == "id" {
                    if k >= chars.len() || chars[k].1 != ':' {
                        return Err(syntax(pos, "expected ':' after id"));
                    }
                    k += 1;
                    let mut end = k;
                    while end < chars.len() && matches!(chars[end].1, 'u' | 'd' | '1' | '↑' | '↓') {
                        end += 1;
                    }
                    let word: String = chars[k..end].iter().map(|&(_, c)| c).collect();
                    k = end;
                    Tok::Id(word.parse().map_err(|e: HeisError| syntax(pos, e.to_string()))?)
                } else {
                    let g = match name.as_str() {
                        "tp" => Generator::TPrime,
                        other => Generator::ALL
                            .into_iter()
                            .find(|g| g.name() == other)
                            .ok_or_else(|| syntax(pos, format!("unknown atom `{other}`")))?,
                    };
                    Tok::Atom(g)
                }
            }
            c => return Err(syntax(pos, format!("unexpected character {c:?}"))),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.vertical()?;
        loop {
            let negate = if self.eat(&Tok::Plus) {
                false
            } else if self.eat(&Tok::Minus) {
                true
            } else {
                return Ok(e);
            };
            let rhs = self.vertical()?;
            e = Expr::linear(e, rhs, negate)?;
        }
    }

    fn vertical(&mut self) -> Result<Expr> {
        let mut e = self.horizontal()?;
        while self.eat(&Tok::Dot) {
            let rhs = self.horizontal()?;
            e = Expr::vertical(e, rhs)?;
        }
        Ok(e)
    }

    fn horizontal(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat(&Tok::Star) {
            let rhs = self.factor()?;
            e = Expr::horizontal(e, rhs);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let negative = self.eat(&Tok::Minus);
        if let Some(&Tok::Int(k)) = self.peek() {
            self.at += 1;
            self.eat(&Tok::Star);
            let inner = self.factor()?;
            return Ok(Expr::scalar(if negative { -k } else { k }, inner));
        }
        if negative {
            return Ok(Expr::scalar(-1, self.factor()?));
        }
        match self.toks.get(self.at).cloned() {
            Some((_, Tok::Atom(g))) => {
                self.at += 1;
                Ok(Expr::atom(g))
            }
            Some((_, Tok::Id(w))) => {
                self.at += 1;
                Ok(Expr::id(w))
            }
            Some((_, Tok::Open)) => {
                self.at += 1;
                let e = self.sum()?;
                if !self.eat(&Tok::Close) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Some((p, t)) => Err(syntax(p, format!("unexpected {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parse and type-check an expression.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, at: 0, end: text.len() };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn typing() {
        let e = parse("t . t'").unwrap();
        assert_eq!((e.source, e.target), (w("du"), w("du")));
        let e = parse("c * id:u").unwrap();
        assert_eq!((e.source, e.target), (w("u"), w("duu")));
        assert!(matches!(parse("t . c"), Err(HeisError::Type(_))));
        assert!(matches!(parse("t . "), Err(HeisError::Syntax { .. })));
    }

    #[test]
    fn precedence_and_printing() {
        let e = parse("id:d * t . id:d * t'").unwrap();
        assert!(matches!(e.kind, ExprKind::Vertical(..)));
        for text in ["t . t' - c . d'", "2 (t . t')", "-3 t * c", "(c * c) . d'", "id:1 * tp", "t - (t - t)"] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }

    #[test]
    fn restricted_evaluation() {
        let tt = parse("t . t'").unwrap().evaluate().unwrap();
        let expected = parse("id:du - c . d'").unwrap().evaluate().unwrap();
        assert_eq!(tt, expected);
        assert!(parse("t' . c").unwrap().evaluate().unwrap().is_zero());
        assert_eq!(parse("d' . c").unwrap().evaluate().unwrap(), Morphism::identity(&Word::unit()));
        assert!(matches!(parse("s").unwrap().evaluate(), Err(HeisError::NonRestrictedAtom(_))));
    }
}
