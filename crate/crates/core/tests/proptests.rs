use heis::expr::parse;
use heis::weyl::{WeylElement, WeylLetter, WeylWord, normal_order};
use heis::words::Word;
use proptest::prelude::*;

fn weyl_element() -> impl Strategy<Value = WeylElement> {
    proptest::collection::vec((0u32..4, 0u32..4, -5i64..6), 0..5).prop_map(|terms| {
        let mut e = WeylElement::zero();
        for (i, j, c) in terms {
            e.add_term(i, j, c.into());
        }
        e
    })
}

fn word() -> impl Strategy<Value = Word> {
    "[ud]{0,6}".prop_map(|s| s.parse().unwrap())
}

proptest! {
    #[test]
    fn weyl_multiplication_is_associative(a in weyl_element(), b in weyl_element(), c in weyl_element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn weyl_distributes(a in weyl_element(), b in weyl_element(), c in weyl_element()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn normal_order_is_multiplicative(x in "[xd]{0,6}", y in "[xd]{0,6}") {
        let (wx, wy): (WeylWord, WeylWord) = (x.parse().unwrap(), y.parse().unwrap());
        let mut joined = wx.clone();
        joined.letters.extend(wy.letters.iter().copied());
        prop_assert_eq!(normal_order(&[joined]), &normal_order(&[wx]) * &normal_order(&[wy]));
    }

    #[test]
    fn dual_is_involutive(w in word()) {
        prop_assert_eq!(w.dual().dual(), w);
    }

    #[test]
    fn identity_expressions_round_trip(w in word(), k in -3i64..4) {
        let text = format!("{k} id:{w} + id:{w}");
        let e = parse(&text).unwrap();
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}

#[test]
fn letters_parse() {
    let w: WeylWord = "xd∂".parse().unwrap();
    assert_eq!(w.letters, vec![WeylLetter::X, WeylLetter::D, WeylLetter::D]);
}
