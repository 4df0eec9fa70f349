use std::collections::BTreeMap;

use heis::engine::{decompose_multiplicities, SumObject};
use heis::weyl::{iso_objects, k0, normal_order, WeylElement, WeylLetter, WeylWord};
use heis::words::Word;
use num_bigint::BigInt;

/// Leftmost `∂x → x∂ + 1` rewriting on letter strings.
fn rewrite(word: Vec<WeylLetter>, coeff: i64, out: &mut BTreeMap<(u32, u32), i64>) {
    match word.windows(2).position(|p| p == [WeylLetter::D, WeylLetter::X]) {
        None => {
            let i = word.iter().filter(|&&l| l == WeylLetter::X).count() as u32;
            *out.entry((i, word.len() as u32 - i)).or_insert(0) += coeff;
        }
        Some(k) => {
            let mut swapped = word.clone();
            swapped.swap(k, k + 1);
            rewrite(swapped, coeff, out);
            let mut dropped = word;
            dropped.drain(k..k + 2);
            rewrite(dropped, coeff, out);
        }
    }
}

fn letters(w: &Word) -> Vec<WeylLetter> {
    WeylWord::from_word(w).letters
}

fn poly_monomial(k: u32) -> BTreeMap<u32, BigInt> {
    BTreeMap::from([(k, BigInt::from(1))])
}

/// Apply letters right to left to `t^k`.
fn apply_letters(ls: &[WeylLetter], k: u32) -> BTreeMap<u32, BigInt> {
    let mut p = poly_monomial(k);
    for l in ls.iter().rev() {
        let op = match l {
            WeylLetter::X => WeylElement::x(),
            WeylLetter::D => WeylElement::d(),
        };
        p = op.apply(&p);
    }
    p
}

#[test]
fn normal_order_matches_leftmost_rewriting() {
    for w in Word::all_up_to(8) {
        let mut expected = BTreeMap::new();
        rewrite(letters(&w), 1, &mut expected);
        expected.retain(|_, c| *c != 0);
        let got: BTreeMap<(u32, u32), i64> =
            k0(&w).coeffs().iter().map(|(&k, c)| (k, i64::try_from(c).unwrap())).collect();
        assert_eq!(got, expected, "{w}");
    }
}

#[test]
fn differential_operator_model() {
    for w in Word::all_up_to(6) {
        let e = k0(&w);
        for k in 0..=6 {
            assert_eq!(e.apply(&poly_monomial(k)), apply_letters(&letters(&w), k), "{w} on t^{k}");
        }
    }
}

#[test]
fn witness_ddxx() {
    let e = normal_order(&["ddxx".parse().unwrap()]);
    let mut expected = WeylElement::monomial(2, 2, 1.into());
    expected.add_term(1, 1, 4.into());
    expected.add_term(0, 0, 2.into());
    assert_eq!(e, expected);
    for k in 0..=6 {
        assert_eq!(e.apply(&poly_monomial(k)), apply_letters(&letters(&"dduu".parse().unwrap()), k));
    }
}

#[test]
fn multiplicative() {
    let words = Word::all_up_to(6);
    for a in &words {
        for b in words.iter().filter(|b| a.len() + b.len() <= 6) {
            assert_eq!(k0(&a.tensor(b)), &k0(a) * &k0(b), "{a} {b}");
        }
    }
}

#[test]
fn no_zero_divisors_in_low_degree() {
    let words = Word::all_up_to(3);
    let elems: Vec<WeylElement> = words
        .iter()
        .flat_map(|a| words.iter().map(move |b| &k0(a) + &k0(b).scale(&BigInt::from(-1))))
        .filter(|e| !e.is_zero())
        .collect();
    for a in &elems {
        for b in elems.iter().step_by(7) {
            assert!(!(a * b).is_zero());
        }
    }
}

#[test]
fn decomposition_matches_normal_order() {
    for w in Word::all_up_to(8) {
        assert_eq!(decompose_multiplicities(&w), k0(&w).as_multiplicities().unwrap(), "{w}");
    }
}

#[test]
fn isomorphism_examples() {
    let s = |ws: &[&str]| SumObject::new(ws.iter().map(|w| w.parse().unwrap()).collect());
    assert!(iso_objects(&s(&["du"]), &s(&["ud", ""])));
    assert!(!iso_objects(&s(&["u"]), &s(&["d"])));
    assert!(iso_objects(&s(&["dduu"]), &s(&["uudd", "ud", "ud", "ud", "ud", "", ""])));
}

#[test]
fn large_coefficients_stay_exact() {
    let w: Word = format!("{}{}", "d".repeat(12), "u".repeat(12)).parse().unwrap();
    let e = k0(&w);
    let factorial: BigInt = (1..=12u32).map(BigInt::from).product();
    assert_eq!(e.coeff(0, 0), factorial);
}
