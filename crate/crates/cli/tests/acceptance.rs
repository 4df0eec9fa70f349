//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde_json::{json, Value};

use heis::diagrams::hom_dim_restricted;
use heis::engine::{decompose_multiplicities, heisenberg_iso, matrix_compose};
use heis::ideals::{
    enumerate_ideals, ideal_generated, ideal_member, quasi_support_points, spc_report, split, BruteClosure,
    IdealDescriptor, Side,
};
use heis::oracle::selftest::{closure_selftest, relations_selftest};
use heis::oracle::Oracle;
use heis::weyl::{k0, normal_order, WeylElement, WeylLetter, WeylWord};
use heis::words::{Simple, Word};

struct Check {
    pass: bool,
    detail: String,
    data: Value,
}

fn check(pass: bool, detail: impl Into<String>, data: Value) -> Check {
    Check { pass, detail: detail.into(), data }
}

fn relations() -> Check {
    let start = Instant::now();
    let r = relations_selftest(&Oracle::new(), 4);
    let elapsed = start.elapsed();
    let names: Vec<&str> = r.relations.iter().map(|x| x.name).collect();
    let required = [
        "hecke_square",
        "hecke_braid",
        "right_zigzag_up",
        "right_zigzag_down",
        "tprime_after_t",
        "t_after_tprime",
        "left_curl",
        "bubble",
    ];
    let all_present = required.iter().all(|n| names.contains(n));
    let cli = heis_cli::run(["heis", "selftest", "relations", "--level", "4"]);
    let pass = r.pass && all_present && cli.code == 0 && elapsed < Duration::from_secs(60);
    check(
        pass,
        format!("{} relations exact at levels 0..=4", r.relations.len()),
        json!({ "relations": names, "pass": r.pass }),
    )
}

fn heisenberg() -> Check {
    let (f, b) = heisenberg_iso();
    let there = matrix_compose(&f, &b).map(|m| m.is_identity()).unwrap_or(false);
    let back = matrix_compose(&b, &f).map(|m| m.is_identity()).unwrap_or(false);
    let mut whiskered = true;
    for w in Word::all_up_to(2) {
        for (l, r) in [(w.clone(), Word::unit()), (Word::unit(), w.clone())] {
            let (fw, bw) = (f.whisker(&l, &r), b.whisker(&l, &r));
            whiskered &= matrix_compose(&fw, &bw).map(|m| m.is_identity()).unwrap_or(false)
                && matrix_compose(&bw, &fw).map(|m| m.is_identity()).unwrap_or(false);
        }
    }
    check(
        there && back && whiskered,
        "[t c][t' ; d'] and [t' ; d'][t c] are identity matrices",
        json!({ "forward_after_backward": there, "backward_after_forward": back, "whiskered": whiskered }),
    )
}

fn closure() -> Check {
    let start = Instant::now();
    let r = closure_selftest(&Oracle::new(), 3, 4);
    let pass = r.pass && r.pairs > 0 && start.elapsed() < Duration::from_secs(600);
    check(
        pass,
        format!("{} composable pairs reduced and confirmed at N = 4, {} failures", r.pairs, r.failures.len()),
        json!({ "pairs": r.pairs, "nonzero": r.nonzero_results, "rules": r.rules, "failures": r.failures.len() }),
    )
}

fn simples() -> Check {
    let simples: Vec<Simple> =
        (0..=4).flat_map(|i| (0..=4 - i).map(move |j| Simple::new(i, j))).collect();
    let mut bad = Vec::new();
    for s in &simples {
        for t in &simples {
            let dim = hom_dim_restricted(&s.word(), &t.word());
            if dim != usize::from(s == t) {
                bad.push(format!("{s}->{t}:{dim}"));
            }
        }
    }
    check(bad.is_empty(), format!("{} pairs of simples, Hom is Kronecker delta", simples.len().pow(2)), json!({ "bad": bad }))
}

fn poly(k: u32) -> BTreeMap<u32, BigInt> {
    BTreeMap::from([(k, BigInt::from(1))])
}

fn apply_letters(ls: &[WeylLetter], k: u32) -> BTreeMap<u32, BigInt> {
    ls.iter().rev().fold(poly(k), |p, l| match l {
        WeylLetter::X => WeylElement::x().apply(&p),
        WeylLetter::D => WeylElement::d().apply(&p),
    })
}

fn k0_weyl() -> Check {
    let words = Word::all_up_to(8);
    let decomposition_ok = words
        .iter()
        .all(|w| k0(w).as_multiplicities().map(|m| m == decompose_multiplicities(w)).unwrap_or(false));
    let operator_ok = Word::all_up_to(6).iter().all(|w| {
        let letters = WeylWord::from_word(w).letters;
        (0..=6).all(|k| k0(w).apply(&poly(k)) == apply_letters(&letters, k))
    });
    let witness = normal_order(&["ddxx".parse().expect("word")]);
    let witness_ok = witness.to_string() == "x^2∂^2 + 4x∂ + 2";
    check(
        decomposition_ok && operator_ok && witness_ok,
        format!("{} words, decomposition = normal order; ∂²x² = {witness}", words.len()),
        json!({ "words": words.len(), "decomposition": decomposition_ok, "operators": operator_ok, "witness": witness.to_string() }),
    )
}

fn lattices() -> Check {
    use IdealDescriptor::*;
    let right = enumerate_ideals(Side::Right, 4);
    let left = enumerate_ideals(Side::Left, 4);
    let two = enumerate_ideals(Side::TwoSided, 4);
    let chains_ok = right == [Whole, RightChain(1), RightChain(2), RightChain(3), RightChain(4), Zero]
        && left == [Whole, LeftChain(1), LeftChain(2), LeftChain(3), LeftChain(4), Zero]
        && two == [Whole, Zero];
    let mut disagreements = 0;
    for side in [Side::Left, Side::Right, Side::TwoSided] {
        for g in Word::all_up_to(3) {
            let closure = BruteClosure::generate(side, std::slice::from_ref(&g), 3, 8);
            let ideal = ideal_generated(side, &[split(&g, 0)]);
            for a in 0..=3 {
                for b in 0..=3 {
                    let s = Simple::new(a, b);
                    if closure.contains(s) != ideal_member(ideal, &split(&s.word(), 0)) {
                        disagreements += 1;
                    }
                }
            }
        }
    }
    check(
        chains_ok && disagreements == 0,
        "right, left and two-sided chains at L = 4; brute-force closure agrees",
        json!({ "right": right, "left": left, "two_sided": two, "disagreements": disagreements }),
    )
}

fn spectrum() -> Check {
    let r = spc_report(3);
    let pass = r.primes == [IdealDescriptor::Zero]
        && r.completely_prime
        && r.support_of_nonzero_is_point
        && r.support_of_zero_is_empty
        && r.tensor_product_property;
    check(
        pass,
        format!("one prime, completely prime, tpp on {} pairs", r.tensor_pairs_checked),
        json!({ "primes": r.primes, "pairs": r.tensor_pairs_checked }),
    )
}

fn non_duo() -> Check {
    let u = split(&Word::up(), 0);
    let right = ideal_generated(Side::Right, std::slice::from_ref(&u));
    let two = ideal_generated(Side::TwoSided, std::slice::from_ref(&u));
    check(
        right != IdealDescriptor::Whole && two == IdealDescriptor::Whole,
        format!("<u>_r = {right}, two-sided <u> = {two}"),
        json!({ "right": right, "two_sided": two }),
    )
}

fn remarks() -> Check {
    let dual_ok = Word::all_up_to(6).iter().all(|w| w.dual().dual() == *w);
    let summand_ok = Word::all_up_to(3).iter().all(|x| {
        let big = split(&x.tensor(&x.dual()).tensor(x), 0);
        big.summand_multiplicity(&split(x, 0)).is_some_and(|m| m >= 1)
    });
    let q = quasi_support_points(4);
    let opens_ok = q.opens.iter().all(|o| {
        let mut expected: Vec<IdealDescriptor> =
            (o.n + 1..=4).map(|m| IdealDescriptor::RightChain(m as u32)).collect();
        expected.push(IdealDescriptor::Zero);
        o.support == expected
    });
    check(
        dual_ok && summand_ok && q.all_meet_prime && opens_ok,
        "dual involution, X a summand of X X* X, truncated right ideals meet-prime with the expected opens",
        json!({ "dual": dual_ok, "summand": summand_ok, "meet_prime": q.all_meet_prime, "opens": q.opens }),
    )
}

const SUITE: &[&[&str]] = &[
    &["selftest", "relations", "--level", "4", "--format", "json"],
    &["selftest", "closure", "--format", "json"],
    &["selftest", "laws", "--seed", "7", "--samples", "50", "--format", "json"],
    &["normalize", "t . t'", "--format", "json"],
    &["decompose", "dduu", "--matrices", "--format", "json"],
    &["k0", "dduu", "--format", "json"],
    &["ideal", "lattice", "--side", "right", "-L", "4", "--format", "json"],
    &["spc", "--sample", "3", "--format", "json"],
    &["quasi-support", "-L", "4", "--format", "json"],
    &["oracle-equal", "t . t'", "id:du - c . d'", "--format", "json"],
    &["render", "id:u * (t . t')", "--format", "tikz"],
];

fn run_suite_binary() -> Option<Vec<u8>> {
    let mut out = Vec::new();
    for args in SUITE {
        let o = Command::new(env!("CARGO_BIN_EXE_heis")).args(*args).output().ok()?;
        if !o.status.success() {
            return None;
        }
        out.extend(o.stdout);
    }
    Some(out)
}

fn full_report() -> (Vec<(usize, Check)>, String) {
    let checks: Vec<(usize, Check)> = vec![
        relations(),
        heisenberg(),
        closure(),
        simples(),
        k0_weyl(),
        lattices(),
        spectrum(),
        non_duo(),
        remarks(),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, c)| (i + 1, c))
    .collect();
    let report = json!({
        "schema": "heis/1",
        "criteria": checks.iter().map(|(n, c)| json!({ "criterion": n, "pass": c.pass, "data": c.data })).collect::<Vec<_>>(),
    });
    (checks, serde_json::to_string_pretty(&report).expect("json"))
}

fn main() {
    let (checks, first) = full_report();
    let mut all = true;
    for (n, c) in &checks {
        println!("criterion {n}: {} - {}", if c.pass { "pass" } else { "FAIL" }, c.detail);
        all &= c.pass;
    }
    let (_, second) = full_report();
    let (a, b) = (run_suite_binary(), run_suite_binary());
    let binary_same = a.is_some() && a == b;
    let deterministic = first == second && binary_same;
    println!(
        "criterion 10: {} - in-process reports identical: {}, two binary runs of {} commands byte-identical: {}",
        if deterministic { "pass" } else { "FAIL" },
        first == second,
        SUITE.len(),
        binary_same
    );
    all &= deterministic;
    if !all {
        std::process::exit(1);
    }
}
