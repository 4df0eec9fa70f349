//! Deterministic text renderings: ASCII art, TikZ and JSON.

use std::fmt::Write;

use serde::Serialize;

use crate::diagrams::{to_slices, BasisDiagram, BoundarySide, Generator, StringKind, StringOrientation};
use crate::engine::Morphism;
use crate::error::Result;
use crate::words::{Orientation, Word};

pub const SCHEMA: &str = "heis/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Tikz,
    Json,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the schema tag first.
pub fn to_json<T: Serialize>(kind: &str, body: &T) -> String {
    serde_json::to_string_pretty(&Envelope { schema: SCHEMA, kind, body }).expect("serializable")
}

#[derive(Clone, Debug, Serialize)]
pub struct StringJson {
    pub from: String,
    pub to: String,
    pub kind: &'static str,
    pub orientation: &'static str,
    pub dots: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramJson {
    pub source: String,
    pub target: String,
    pub strings: Vec<StringJson>,
    pub bubbles: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: i64,
    pub diagram: DiagramJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismJson {
    pub source: String,
    pub target: String,
    pub terms: Vec<TermJson>,
}

pub fn diagram_json(d: &BasisDiagram) -> DiagramJson {
    let m = d.matching();
    let strings = m
        .pairs()
        .iter()
        .enumerate()
        .map(|(s, &(a, b))| {
            let p = m.string_profile(s);
            let (from, to) = if m.is_outgoing(a) { (a, b) } else { (b, a) };
            StringJson {
                from: from.to_string(),
                to: to.to_string(),
                kind: match p.kind {
                    StringKind::Cup => "cup",
                    StringKind::Cap => "cap",
                    StringKind::Bridge => "bridge",
                    StringKind::Bubble => "bubble",
                },
                orientation: match p.orientation {
                    StringOrientation::Clockwise => "clockwise",
                    StringOrientation::Counterclockwise => "counterclockwise",
                    StringOrientation::Upward => "upward",
                    StringOrientation::Downward => "downward",
                },
                dots: d.dots_on(s),
            }
        })
        .collect();
    DiagramJson {
        source: d.source().to_string(),
        target: d.target().to_string(),
        strings,
        bubbles: d.bubbles().to_vec(),
    }
}

pub fn morphism_json(f: &Morphism) -> MorphismJson {
    MorphismJson {
        source: f.source().to_string(),
        target: f.target().to_string(),
        terms: f.terms().iter().map(|(d, &c)| TermJson { coeff: c, diagram: diagram_json(d) }).collect(),
    }
}

fn arrows(w: &Word) -> String {
    w.letters()
        .iter()
        .map(|o| match o {
            Orientation::Up => "^",
            Orientation::Down => "v",
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn strands(n: usize) -> String {
    vec!["|"; n].join(" ")
}

/// ASCII picture, top of the diagram first. Crossings are `X`, cups `\u/`,
/// caps `/n\`; arrowheads mark the boundary orientations.
pub fn ascii_diagram(d: &BasisDiagram) -> Result<String> {
    let sw = to_slices(d)?;
    let mut rows = vec![arrows(d.target())];
    let mut levels = vec![sw.source.clone()];
    for s in &sw.slices {
        levels.push(s.target());
    }
    for (i, s) in sw.slices.iter().enumerate().rev() {
        rows.push(strands(levels[i + 1].len()));
        let p = s.left.len();
        let width = levels[i].len().max(levels[i + 1].len());
        let mut cells: Vec<char> = strands(width).chars().collect();
        let glyph = match s.generator {
            Generator::C | Generator::CPrime => "\\u/",
            Generator::D | Generator::DPrime => "/n\\",
            _ => " X ",
        };
        for (k, ch) in glyph.chars().enumerate() {
            cells[2 * p + k] = ch;
        }
        rows.push(cells.into_iter().collect::<String>().trim_end().to_string());
    }
    rows.push(strands(sw.source.len()));
    rows.push(arrows(&sw.source));
    if !d.is_undecorated() {
        let dots: Vec<String> = d.dots().iter().map(|(p, n)| format!("{p}:{n}")).collect();
        rows.push(format!("dots {}", dots.join(" ")));
        if !d.bubbles().is_empty() {
            rows.push(format!("bubbles {:?}", d.bubbles()));
        }
    }
    let rows: Vec<&str> = rows.iter().map(|r| r.trim_end()).filter(|r| !r.is_empty()).collect();
    if rows.is_empty() {
        return Ok("(empty)\n".to_string());
    }
    Ok(rows.join("\n") + "\n")
}

pub fn ascii_morphism(f: &Morphism) -> Result<String> {
    let mut out = format!("{} -> {}\n", f.source(), f.target());
    if f.is_zero() {
        out.push_str("0\n");
    }
    for (d, c) in f.terms() {
        let _ = writeln!(out, "coefficient {c}");
        out.push_str(&ascii_diagram(d)?);
    }
    Ok(out)
}

fn x_of(i: usize) -> f64 {
    i as f64
}

/// TikZ picture with strings as Bézier arcs, arrowheads in the direction of
/// travel and dots as filled circles.
pub fn tikz_diagram(d: &BasisDiagram) -> String {
    let m = d.matching();
    let h = 2.0_f64;
    let mut out = String::from("\\begin{tikzpicture}[baseline=(current bounding box.center), thick, >=stealth]\n");
    for (s, &(a, b)) in m.pairs().iter().enumerate() {
        let (from, to) = if m.is_outgoing(a) { (a, b) } else { (b, a) };
        let pt = |p: crate::diagrams::BoundaryPoint| {
            (x_of(p.index), if p.side == BoundarySide::Bottom { 0.0 } else { h })
        };
        let ((x1, y1), (x2, y2)) = (pt(from), pt(to));
        let bend = |y: f64| {
            let depth = 0.4 + 0.3 * (x1 - x2).abs();
            if y == 0.0 { depth } else { h - depth }
        };
        let (c1, c2) = match m.string_profile(s).kind {
            StringKind::Bridge => ((x1, h / 2.0), (x2, h / 2.0)),
            _ => ((x1, bend(y1)), (x2, bend(y2))),
        };
        let _ = writeln!(
            out,
            "  \\draw[->] ({x1:.2},{y1:.2}) .. controls ({:.2},{:.2}) and ({:.2},{:.2}) .. ({x2:.2},{y2:.2});",
            c1.0, c1.1, c2.0, c2.1
        );
        let dots = d.dots_on(s);
        if dots > 0 {
            let (mx, my) = (0.125 * (x1 + x2) + 0.375 * (c1.0 + c2.0), 0.125 * (y1 + y2) + 0.375 * (c1.1 + c2.1));
            let _ = writeln!(out, "  \\fill ({mx:.2},{my:.2}) circle (2pt);");
            if dots > 1 {
                let _ = writeln!(out, "  \\node[right] at ({mx:.2},{my:.2}) {{${dots}$}};");
            }
        }
    }
    let right = x_of(d.source().len().max(d.target().len())) + 0.5;
    for (k, &n) in d.bubbles().iter().enumerate() {
        let cx = right + k as f64;
        let _ = writeln!(out, "  \\draw[->] ({:.2},{:.2}) arc (0:-360:0.3);", cx + 0.3, h / 2.0);
        let _ = writeln!(out, "  \\node at ({cx:.2},{:.2}) {{${n}$}};", h / 2.0);
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

pub fn tikz_morphism(f: &Morphism) -> String {
    if f.is_zero() {
        return "0\n".to_string();
    }
    let mut out = String::new();
    for (k, (d, c)) in f.terms().iter().enumerate() {
        let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
        let mag = c.abs();
        if mag != 1 || !sign.is_empty() {
            let _ = writeln!(out, "{sign}{}", if mag != 1 { mag.to_string() } else { String::new() });
        }
        out.push_str(&tikz_diagram(d));
    }
    out
}

pub fn render_morphism(f: &Morphism, format: Format) -> Result<String> {
    Ok(match format {
        Format::Ascii => ascii_morphism(f)?,
        Format::Tikz => tikz_morphism(f),
        Format::Json => to_json("morphism", &morphism_json(f)) + "\n",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::compose;

    #[test]
    fn identity_on_up() {
        let d = BasisDiagram::identity(&"u".parse().unwrap());
        assert_eq!(ascii_diagram(&d).unwrap(), "^\n|\n^\n");
    }

    #[test]
    fn turnback_is_cup_over_cap() {
        let f = compose(&Morphism::generator(Generator::C), &Morphism::generator(Generator::DPrime)).unwrap();
        let (d, _) = f.terms().iter().next().unwrap();
        let art = ascii_diagram(d).unwrap();
        let cup = art.find('u').unwrap();
        let cap = art.find('n').unwrap();
        assert!(cup < cap, "{art}");
    }

    #[test]
    fn json_is_tagged() {
        let f = Morphism::generator(Generator::T);
        let j = render_morphism(&f, Format::Json).unwrap();
        assert!(j.starts_with("{\n  \"schema\": \"heis/1\""));
        assert_eq!(j, render_morphism(&f, Format::Json).unwrap());
    }
}
