use heis::ideals::{
    enumerate_ideals, ideal_generated, ideal_member, quasi_support_points, spc_report, split, BruteClosure,
    IdealDescriptor, Side, SplitObject,
};
use heis::words::{Simple, Word};

use IdealDescriptor::*;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn gen(side: Side, s: &str) -> IdealDescriptor {
    ideal_generated(side, &[split(&w(s), 0)])
}

#[test]
fn generation_examples() {
    assert_eq!(gen(Side::Right, "u"), RightChain(1));
    assert_eq!(gen(Side::Right, "d"), Whole);
    assert_eq!(gen(Side::TwoSided, "du"), Whole);
    assert_eq!(gen(Side::Left, "uudd"), LeftChain(2));
    assert_eq!(ideal_generated(Side::Right, &[SplitObject::zero()]), Zero);
}

#[test]
fn membership_examples() {
    let simple = |a, b| split(&Simple::new(a, b).word(), 0);
    assert!(ideal_member(RightChain(2), &simple(2, 3)));
    assert!(!ideal_member(RightChain(2), &simple(1, 0)));
    assert!(ideal_member(Zero, &SplitObject::zero()));
}

#[test]
fn split_examples() {
    let s = split(&w("dduu"), 2);
    let m = &s.degrees[&2];
    assert_eq!((m[&Simple::new(2, 2)], m[&Simple::new(1, 1)], m[&Simple::new(0, 0)]), (1, 4, 2));
}

#[test]
fn lattices() {
    assert_eq!(enumerate_ideals(Side::Right, 4), vec![Whole, RightChain(1), RightChain(2), RightChain(3), RightChain(4), Zero]);
    assert_eq!(enumerate_ideals(Side::Left, 4), vec![Whole, LeftChain(1), LeftChain(2), LeftChain(3), LeftChain(4), Zero]);
    assert_eq!(enumerate_ideals(Side::TwoSided, 4), vec![Whole, Zero]);
    assert_eq!(enumerate_ideals(Side::Left, 1), vec![Whole, LeftChain(1), Zero]);
}

#[test]
fn brute_force_closure_agrees() {
    for side in [Side::Left, Side::Right, Side::TwoSided] {
        for g in Word::all_up_to(3) {
            let closure = BruteClosure::generate(side, &[g.clone()], 3, 8);
            let descriptor = gen(side, &g.to_string());
            for a in 0..=3 {
                for b in 0..=3 {
                    let s = Simple::new(a, b);
                    assert_eq!(closure.contains(s), descriptor.contains_simple(s), "{side:?} {g} {s}");
                }
            }
        }
    }
}

#[test]
fn strict_chain() {
    for i in 0..=4 {
        let (a, b) = (gen(Side::Right, &"u".repeat(i)), gen(Side::Right, &"u".repeat(i + 1)));
        assert!(!ideal_member(b, &split(&Word::ups(i), 0)));
        assert!(ideal_member(a, &split(&Word::ups(i + 1), 0)));
    }
}

#[test]
fn absorption_and_duality() {
    let words = Word::all_up_to(3);
    for x in &words {
        let right = gen(Side::Right, &x.to_string());
        let left = gen(Side::Left, &x.to_string());
        for y in &words {
            assert!(ideal_member(right, &split(&x.tensor(y), 0)));
            assert!(ideal_member(left, &split(&y.tensor(x), 0)));
        }
        assert_eq!(gen(Side::Left, &x.dual().to_string()), right.mirror());
    }
}

#[test]
fn summand_of_triple() {
    for x in Word::all_up_to(3) {
        let big = split(&x.tensor(&x.dual()).tensor(&x), 0);
        assert!(big.summand_multiplicity(&split(&x, 0)).unwrap() >= 1, "{x}");
    }
}

#[test]
fn degree_independence() {
    for x in Word::all_up_to(3) {
        for d in [-2, 0, 3] {
            for ideal in [RightChain(1), LeftChain(2), Zero, Whole] {
                assert_eq!(ideal_member(ideal, &split(&x, d)), ideal_member(ideal, &split(&x, 0)));
            }
        }
    }
}

#[test]
fn non_duo() {
    assert_ne!(gen(Side::Right, "u"), Whole);
    assert_eq!(gen(Side::TwoSided, "u"), Whole);
}

#[test]
fn spectrum() {
    let r = spc_report(3);
    assert_eq!(r.primes, vec![Zero]);
    assert!(r.completely_prime && r.support_of_nonzero_is_point && r.support_of_zero_is_empty);
    assert!(r.tensor_product_property);
}

#[test]
fn quasi_support() {
    let q = quasi_support_points(3);
    assert_eq!(q.points, vec![RightChain(1), RightChain(2), RightChain(3), Zero]);
    assert!(q.all_meet_prime);
    assert_eq!(q.opens[1].support, vec![RightChain(2), RightChain(3), Zero]);
    assert_eq!(q.opens[0].support, q.points);
}
