//! Command dispatch for the `heis` binary.

use std::ffi::OsString;
use std::fmt::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use heis::diagrams::{hom_dim_restricted, restricted_basis};
use heis::engine::{decompose_multiplicities, decompose_object, Morphism, SumObject};
use heis::expr::{parse, Expr};
use heis::ideals::{
    enumerate_ideals, ideal_generated, ideal_member, quasi_support_points, spc_report, split_sum, IdealDescriptor,
    Side,
};
use heis::oracle::selftest::{closure_selftest, laws_selftest, relations_selftest};
use heis::oracle::{Oracle, SliceSum, DEFAULT_LEVEL};
use heis::render::{diagram_json, morphism_json, render_morphism, to_json, Format};
use heis::weyl::{iso_objects, k0_sum, normal_order, parse_weyl_sum};
use heis::words::Word;
use heis::HeisError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TYPE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "heis", version, about = "Diagram calculus for the degenerate Heisenberg category")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Evaluate expressions in the restricted engine or in the semantic model.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Restricted)]
    mode: Mode,
    /// Highest symmetric-group level used by the semantic model.
    #[arg(long, global = true, default_value_t = DEFAULT_LEVEL)]
    level: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Seed for sampled property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Restricted,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Ascii,
    Tikz,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression.
    Normalize { expr: String },
    /// Vertical composite, first expression on top.
    Compose { upper: String, lower: String },
    /// Restricted basis of a Hom space.
    Basis { source: String, target: String },
    /// Dimension of a restricted Hom space.
    Homdim { source: String, target: String },
    /// Split a word into simples.
    Decompose {
        word: String,
        /// Include the forward and backward matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Class in the Weyl algebra of a sum of words.
    K0 { object: String },
    /// Normal form of a sum of words in x and d.
    NormalOrder { expr: String },
    /// Decide isomorphism of two sums of words.
    Iso { a: String, b: String },
    /// Tensor ideals and their lattice.
    #[command(subcommand)]
    Ideal(IdealCommand),
    /// Spectrum and supports of the sampled category.
    Spc {
        #[arg(long, default_value_t = 3)]
        sample: usize,
    },
    /// Points and opens of the truncated right-ideal lattice.
    QuasiSupport {
        #[arg(short = 'L', default_value_t = 4)]
        l: usize,
    },
    /// Self-checks against the semantic model.
    #[command(subcommand)]
    Selftest(SelftestCommand),
    /// Compare two expressions in the semantic model.
    OracleEqual { a: String, b: String },
    /// Draw an expression.
    Render { expr: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
    TwoSided,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::TwoSided => Side::TwoSided,
        }
    }
}

#[derive(Subcommand, Debug)]
enum IdealCommand {
    /// Ideal generated by objects.
    Gen {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(required = true)]
        objects: Vec<String>,
    },
    /// Membership of an object in the ideal generated by another.
    Member {
        #[arg(long, value_enum)]
        side: SideArg,
        generator: String,
        object: String,
    },
    /// Chain of ideals generated by words up to a length.
    Lattice {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(short = 'L', default_value_t = 4)]
        l: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SelftestCommand {
    /// Defining relations in the semantic model.
    Relations,
    /// Exhaustive composition check against the semantic model.
    Closure {
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Sampled associativity and interchange.
    Laws {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_code(e: &HeisError) -> i32 {
    match e {
        HeisError::Type(_) | HeisError::TypeMismatch { .. } | HeisError::DimensionMismatch(_) => EXIT_TYPE,
        HeisError::InternalNonClosure(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

/// Parse arguments (including the program name) and run one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli) {
        Ok((stdout, pass)) => Outcome { code: if pass { EXIT_OK } else { EXIT_VERIFY }, stdout, stderr: String::new() },
        Err(e) => Outcome { code: error_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

type Res<T> = heis::Result<T>;

fn word(s: &str) -> Res<Word> {
    s.parse()
}

fn json_or_text<T: Serialize>(g: &Global, kind: &str, body: &T, text: impl FnOnce() -> String) -> String {
    if g.format == OutFormat::Json {
        to_json(kind, body) + "\n"
    } else {
        text()
    }
}

#[derive(Serialize)]
struct LevelMatrix {
    level: usize,
    rows: usize,
    cols: usize,
    entries: Vec<[i64; 3]>,
}

#[derive(Serialize)]
struct OracleValue {
    source: String,
    target: String,
    levels: Vec<LevelMatrix>,
}

fn oracle_value(sum: &SliceSum, level: usize) -> OracleValue {
    let oracle = Oracle::new();
    let levels = (0..=level)
        .map(|n| {
            let m = sum.eval(&oracle, n);
            let mut entries = Vec::new();
            for c in 0..m.cols() {
                for &(r, v) in m.column(c) {
                    entries.push([r as i64, c as i64, v]);
                }
            }
            entries.sort();
            LevelMatrix { level: n, rows: m.rows(), cols: m.cols(), entries }
        })
        .collect();
    OracleValue { source: sum.source.to_string(), target: sum.target.to_string(), levels }
}

fn morphism_text(f: &Morphism) -> String {
    let mut out = format!("{} -> {}\n", f.source(), f.target());
    if f.is_zero() {
        out.push_str("0\n");
    }
    for (d, c) in f.terms() {
        let _ = writeln!(out, "{c:+} {d}");
    }
    out
}

fn show_expr(g: &Global, e: &Expr) -> Res<String> {
    match g.mode {
        Mode::Restricted => {
            let f = e.evaluate()?;
            Ok(match g.format {
                OutFormat::Text => morphism_text(&f),
                OutFormat::Json => render_morphism(&f, Format::Json)?,
                OutFormat::Ascii => render_morphism(&f, Format::Ascii)?,
                OutFormat::Tikz => render_morphism(&f, Format::Tikz)?,
            })
        }
        Mode::Oracle => {
            let v = oracle_value(&e.slice_sum()?, g.level);
            Ok(json_or_text(g, "oracle_value", &v, || {
                let mut out = format!("{} -> {}\n", v.source, v.target);
                for l in &v.levels {
                    let _ = writeln!(out, "level {}: {}x{} matrix, {} nonzero entries", l.level, l.rows, l.cols, l.entries.len());
                }
                out
            }))
        }
    }
}

#[derive(Serialize)]
struct BasisOut {
    source: String,
    target: String,
    dim: usize,
    diagrams: Vec<heis::render::DiagramJson>,
}

#[derive(Serialize)]
struct DecomposeOut {
    word: String,
    summands: Vec<String>,
    multiplicities: Vec<(String, u64)>,
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forward: Option<Vec<Vec<heis::render::MorphismJson>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    backward: Option<Vec<Vec<heis::render::MorphismJson>>>,
}

/// Words up to this length get explicit matrices and a round-trip check.
const MATRIX_LIMIT: usize = 6;

fn decompose(g: &Global, w: &Word, matrices: bool) -> Res<(String, bool)> {
    let mults = decompose_multiplicities(w);
    let multiplicities: Vec<(String, u64)> = mults.iter().map(|(s, &n)| (s.to_string(), n)).collect();
    let mut out = DecomposeOut {
        word: w.to_string(),
        summands: mults.iter().flat_map(|(s, &n)| std::iter::repeat(s.word().to_string()).take(n as usize)).collect(),
        multiplicities,
        verified: None,
        forward: None,
        backward: None,
    };
    if w.len() <= MATRIX_LIMIT || matrices {
        let d = decompose_object(w)?;
        out.summands = d.summands.summands.iter().map(|s| s.to_string()).collect();
        out.verified = Some(d.verify()?);
        if matrices {
            let conv = |m: &heis::engine::MorphismMatrix| {
                m.entries().iter().map(|row| row.iter().map(morphism_json).collect()).collect()
            };
            out.forward = Some(conv(&d.forward));
            out.backward = Some(conv(&d.backward));
        }
    }
    let pass = out.verified != Some(false);
    let text = json_or_text(g, "decomposition", &out, || {
        let mut s = format!("{} = {}\n", out.word, out.summands.iter().map(|x| if x.is_empty() { "1" } else { x }).collect::<Vec<_>>().join(" + "));
        for (name, n) in &out.multiplicities {
            let _ = writeln!(s, "  {name}: {n}");
        }
        if let Some(v) = out.verified {
            let _ = writeln!(s, "round trips are identities: {v}");
        }
        s
    });
    Ok((text, pass))
}

#[derive(Serialize)]
struct WeylOut {
    input: String,
    normal_form: String,
    #[serde(flatten)]
    element: heis::weyl::WeylElement,
}

#[derive(Serialize)]
struct IsoOut {
    a: String,
    b: String,
    k0_a: String,
    k0_b: String,
    isomorphic: bool,
}

#[derive(Serialize)]
struct IdealOut {
    side: Side,
    generators: Vec<String>,
    ideal: IdealDescriptor,
}

#[derive(Serialize)]
struct MemberOut {
    side: Side,
    generator: String,
    ideal: IdealDescriptor,
    object: String,
    member: bool,
}

#[derive(Serialize)]
struct LatticeOut {
    side: Side,
    truncation: usize,
    chain: Vec<IdealDescriptor>,
}

#[derive(Serialize)]
struct EqualOut {
    a: String,
    b: String,
    level: usize,
    equal: bool,
}

fn dispatch(cli: &Cli) -> Res<(String, bool)> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Normalize { expr } => (show_expr(g, &parse(expr)?)?, true),
        Command::Compose { upper, lower } => (show_expr(g, &Expr::vertical(parse(upper)?, parse(lower)?)?)?, true),
        Command::Render { expr } => {
            let f = parse(expr)?.evaluate()?;
            let format = match g.format {
                OutFormat::Tikz => Format::Tikz,
                OutFormat::Json => Format::Json,
                _ => Format::Ascii,
            };
            (render_morphism(&f, format)?, true)
        }
        Command::Basis { source, target } => {
            let (x, y) = (word(source)?, word(target)?);
            let basis = restricted_basis(&x, &y);
            let out = BasisOut {
                source: x.to_string(),
                target: y.to_string(),
                dim: basis.len(),
                diagrams: basis.iter().map(diagram_json).collect(),
            };
            let text = json_or_text(g, "basis", &out, || {
                let mut s = format!("{x} -> {y}: {} diagrams\n", basis.len());
                for d in &basis {
                    let _ = writeln!(s, "  {d}");
                }
                s
            });
            (text, true)
        }
        Command::Homdim { source, target } => {
            let (x, y) = (word(source)?, word(target)?);
            let dim = hom_dim_restricted(&x, &y);
            #[derive(Serialize)]
            struct Out {
                source: String,
                target: String,
                dim: usize,
            }
            let out = Out { source: x.to_string(), target: y.to_string(), dim };
            (json_or_text(g, "homdim", &out, || format!("{dim}\n")), true)
        }
        Command::Decompose { word: w, matrices } => decompose(g, &word(w)?, *matrices)?,
        Command::K0 { object } => {
            let s: SumObject = object.parse()?;
            let e = k0_sum(&s);
            let out = WeylOut { input: s.to_string(), normal_form: e.to_string(), element: e };
            (json_or_text(g, "weyl", &out, || format!("{}\n", out.normal_form)), true)
        }
        Command::NormalOrder { expr } => {
            let e = normal_order(&parse_weyl_sum(expr)?);
            let out = WeylOut { input: expr.clone(), normal_form: e.to_string(), element: e };
            (json_or_text(g, "weyl", &out, || format!("{}\n", out.normal_form)), true)
        }
        Command::Iso { a, b } => {
            let (sa, sb): (SumObject, SumObject) = (a.parse()?, b.parse()?);
            let out = IsoOut {
                a: sa.to_string(),
                b: sb.to_string(),
                k0_a: k0_sum(&sa).to_string(),
                k0_b: k0_sum(&sb).to_string(),
                isomorphic: iso_objects(&sa, &sb),
            };
            (json_or_text(g, "iso", &out, || format!("{}\n", out.isomorphic)), true)
        }
        Command::Ideal(IdealCommand::Gen { side, objects }) => {
            let gens = objects.iter().map(|o| Ok(split_sum(&o.parse()?, 0))).collect::<Res<Vec<_>>>()?;
            let out = IdealOut { side: (*side).into(), generators: objects.clone(), ideal: ideal_generated((*side).into(), &gens) };
            (json_or_text(g, "ideal", &out, || format!("{}\n", out.ideal)), true)
        }
        Command::Ideal(IdealCommand::Member { side, generator, object }) => {
            let ideal = ideal_generated((*side).into(), &[split_sum(&generator.parse()?, 0)]);
            let member = ideal_member(ideal, &split_sum(&object.parse()?, 0));
            let out = MemberOut { side: (*side).into(), generator: generator.clone(), ideal, object: object.clone(), member };
            (json_or_text(g, "ideal_member", &out, || format!("{member}\n")), true)
        }
        Command::Ideal(IdealCommand::Lattice { side, l }) => {
            let chain = enumerate_ideals((*side).into(), *l);
            let out = LatticeOut { side: (*side).into(), truncation: *l, chain };
            let text = json_or_text(g, "ideal_lattice", &out, || {
                out.chain.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" > ") + "\n"
            });
            (text, true)
        }
        Command::Spc { sample } => {
            let r = spc_report(*sample);
            let pass = r.completely_prime
                && r.support_of_nonzero_is_point
                && r.support_of_zero_is_empty
                && r.tensor_product_property
                && r.primes.len() == 1;
            let text = json_or_text(g, "spc", &r, || {
                format!(
                    "primes: {}\ncompletely prime: {}\nsupp(x) = {{*}} for nonzero samples: {}\nsupp(0) empty: {}\ntensor product property on {} pairs: {}\n",
                    r.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
                    r.completely_prime,
                    r.support_of_nonzero_is_point,
                    r.support_of_zero_is_empty,
                    r.tensor_pairs_checked,
                    r.tensor_product_property
                )
            });
            (text, pass)
        }
        Command::QuasiSupport { l } => {
            let q = quasi_support_points(*l);
            let text = json_or_text(g, "quasi_support", &q, || {
                let names = |v: &[IdealDescriptor]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
                let mut s = format!("points: {}\nall meet-prime: {}\n", names(&q.points), q.all_meet_prime);
                for o in &q.opens {
                    let _ = writeln!(s, "supp(u^{}) = {{{}}}", o.n, names(&o.support));
                }
                s
            });
            (text, q.all_meet_prime)
        }
        Command::Selftest(SelftestCommand::Relations) => {
            let r = relations_selftest(&Oracle::new(), g.level);
            let text = json_or_text(g, "selftest_relations", &r, || {
                let mut s = String::new();
                for rel in &r.relations {
                    let _ = writeln!(s, "{} {}", if rel.pass { "pass" } else { "FAIL" }, rel.name);
                }
                s
            });
            (text, r.pass)
        }
        Command::Selftest(SelftestCommand::Closure { max_len }) => {
            let r = closure_selftest(&Oracle::new(), *max_len, g.level);
            let text = json_or_text(g, "selftest_closure", &r, || {
                let mut s = format!(
                    "{} composable pairs, {} nonzero, {} failures\n",
                    r.pairs,
                    r.nonzero_results,
                    r.failures.len()
                );
                for (rule, n) in &r.rules.0 {
                    let _ = writeln!(s, "  {rule:?}: {n}");
                }
                for f in &r.failures {
                    let _ = writeln!(s, "FAIL {} after {}: {}", f.upper, f.lower, f.reason);
                }
                s
            });
            (text, r.pass)
        }
        Command::Selftest(SelftestCommand::Laws { samples, max_len }) => {
            let r = laws_selftest(g.seed, *samples, *max_len)?;
            let text = json_or_text(g, "selftest_laws", &r, || {
                format!("associativity: {}\ninterchange: {}\n", r.associativity, r.interchange)
            });
            (text, r.pass)
        }
        Command::OracleEqual { a, b } => {
            let (ea, eb) = (parse(a)?, parse(b)?);
            if ea.source != eb.source || ea.target != eb.target {
                return Err(HeisError::Type(format!(
                    "{} -> {} versus {} -> {}",
                    ea.source, ea.target, eb.source, eb.target
                )));
            }
            let oracle = Oracle::new();
            let (sa, sb) = (ea.slice_sum()?, eb.slice_sum()?);
            let equal = (0..=g.level).all(|n| sa.eval(&oracle, n) == sb.eval(&oracle, n));
            let out = EqualOut { a: a.clone(), b: b.clone(), level: g.level, equal };
            (json_or_text(g, "oracle_equal", &out, || format!("{equal}\n")), true)
        }
    })
}
