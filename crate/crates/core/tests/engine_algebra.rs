use heis::diagrams::{restricted_basis, BasisDiagram, Generator};
use heis::engine::{
    compose, decompose_multiplicities, decompose_object, hcompose, heisenberg_iso, matrix_compose, Morphism,
};
use heis::words::Word;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn gen(g: Generator) -> Morphism {
    Morphism::generator(g)
}

#[test]
fn worked_examples() {
    use Generator::*;
    let t_tp = compose(&gen(T), &gen(TPrime)).unwrap();
    let turnback = compose(&gen(C), &gen(DPrime)).unwrap();
    assert_eq!(t_tp, Morphism::identity(&w("du")).sub(&turnback).unwrap());
    assert_eq!(turnback.terms().len(), 1);
    assert_eq!(compose(&gen(TPrime), &gen(T)).unwrap(), Morphism::identity(&w("ud")));
    assert_eq!(compose(&gen(DPrime), &gen(C)).unwrap(), Morphism::identity(&w("")));
    assert!(compose(&gen(TPrime), &gen(C)).unwrap().is_zero());
    assert!(compose(&gen(DPrime), &gen(T)).unwrap().is_zero());
}

#[test]
fn composition_type_checks() {
    assert!(compose(&gen(Generator::T), &gen(Generator::T)).is_err());
}

#[test]
fn heisenberg_iso_round_trips() {
    let (f, b) = heisenberg_iso();
    assert!(matrix_compose(&f, &b).unwrap().is_identity());
    assert!(matrix_compose(&b, &f).unwrap().is_identity());
}

#[test]
fn decompositions_are_isomorphisms() {
    for word in Word::all_up_to(5) {
        let d = decompose_object(&word).unwrap();
        assert!(d.verify().unwrap(), "{word}");
        assert_eq!(d.multiplicities(), decompose_multiplicities(&word), "{word}");
    }
}

fn sample_chain(rng: &mut ChaCha8Rng, words: &[Word], len: usize) -> Option<Vec<BasisDiagram>> {
    let mut src = words.choose(rng)?.clone();
    let mut out = Vec::new();
    for _ in 0..len {
        let options: Vec<BasisDiagram> =
            words.iter().flat_map(|t| restricted_basis(&src, t)).collect();
        let d = options.choose(rng)?.clone();
        src = d.target().clone();
        out.push(d);
    }
    Some(out)
}

#[test]
fn composition_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let words = Word::all_up_to(3);
    let mut checked = 0;
    while checked < 200 {
        let Some(chain) = sample_chain(&mut rng, &words, 3) else { continue };
        let [f, g, h] = [0, 1, 2].map(|i| Morphism::from_diagram(chain[i].clone()));
        let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        assert_eq!(left, right, "{h} o {g} o {f}");
        checked += 1;
    }
}

#[test]
fn interchange_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let words = Word::all_up_to(2);
    let mut checked = 0;
    while checked < 200 {
        let (Some(a), Some(b)) = (sample_chain(&mut rng, &words, 2), sample_chain(&mut rng, &words, 2)) else {
            continue;
        };
        let m = |d: &BasisDiagram| Morphism::from_diagram(d.clone());
        let lhs = compose(&hcompose(&m(&a[1]), &m(&b[1])), &hcompose(&m(&a[0]), &m(&b[0]))).unwrap();
        let rhs = hcompose(&compose(&m(&a[1]), &m(&a[0])).unwrap(), &compose(&m(&b[1]), &m(&b[0])).unwrap());
        assert_eq!(lhs, rhs);
        checked += 1;
    }
}

#[test]
fn identities_are_units() {
    for x in Word::all_up_to(3) {
        for y in Word::all_up_to(3) {
            for d in restricted_basis(&x, &y) {
                let f = Morphism::from_diagram(d);
                assert_eq!(compose(&f, &Morphism::identity(&x)).unwrap(), f);
                assert_eq!(compose(&Morphism::identity(&y), &f).unwrap(), f);
            }
        }
    }
}

#[test]
fn associativity_exhaustive_short_words() {
    let words = Word::all_up_to(2);
    let hom = |x: &Word, y: &Word| restricted_basis(x, y).into_iter().map(Morphism::from_diagram).collect::<Vec<_>>();
    let mut triples = 0;
    for a in &words {
        for b in &words {
            for f in hom(a, b) {
                for c in &words {
                    for g in hom(b, c) {
                        let gf = compose(&g, &f).unwrap();
                        for d in &words {
                            for h in hom(c, d) {
                                let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
                                assert_eq!(left, compose(&h, &gf).unwrap());
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(triples > 0);
}

#[test]
fn endomorphisms_of_simples_are_scalars() {
    for i in 0..=4 {
        for j in 0..=4 - i {
            let w = heis::words::Simple::new(i, j).word();
            let basis = restricted_basis(&w, &w);
            assert_eq!(basis.len(), 1, "{w}");
            for a in &basis {
                for b in &basis {
                    let p = compose(&Morphism::from_diagram(a.clone()), &Morphism::from_diagram(b.clone())).unwrap();
                    assert!(p.as_scalar().is_some(), "{w}");
                }
            }
        }
    }
}

#[test]
fn turnback_complement_is_idempotent() {
    let e = compose(&gen(Generator::T), &gen(Generator::TPrime)).unwrap();
    assert_eq!(compose(&e, &e).unwrap(), e);
    let turnback = compose(&gen(Generator::C), &gen(Generator::DPrime)).unwrap();
    assert_eq!(turnback.as_scalar(), None);
    assert_eq!(turnback.terms().values().copied().collect::<Vec<_>>(), vec![1]);
}

#[test]
fn horizontal_examples() {
    let idu = Morphism::identity(&w("u"));
    let f = hcompose(&idu, &gen(Generator::T));
    assert_eq!((f.source(), f.target()), (&w("uud"), &w("udu")));
    assert_eq!(hcompose(&Morphism::identity(&w("")), &gen(Generator::T)), gen(Generator::T));
    let cc = hcompose(&gen(Generator::C), &gen(Generator::C));
    assert_eq!(cc.target(), &w("dudu"));
    let (d, _) = cc.terms().iter().next().unwrap();
    let pairs: Vec<String> = d.matching().pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    assert_eq!(pairs.len(), 2);
    assert!(heis::diagrams::is_restricted(d));
}

#[test]
fn modular_reduction() {
    let e = compose(&gen(Generator::T), &gen(Generator::TPrime)).unwrap();
    let r = e.reduce_mod(2);
    assert_eq!(r.terms().values().copied().collect::<Vec<_>>(), vec![1, 1]);
    assert!(e.scale(2).reduce_mod(2).is_zero());
}

#[test]
fn glue_examples() {
    use heis::engine::{glue, Layer};
    use Generator::*;
    let g = glue(&C.diagram(), &DPrime.diagram()).unwrap();
    assert_eq!(g.strings().len(), 2);
    assert!(g.strings().iter().all(|s| s.substrands.len() == 1 && !s.closed));

    let g = glue(&T.diagram(), &TPrime.diagram()).unwrap();
    assert_eq!(g.strings().len(), 2);
    for s in g.strings() {
        let layers: Vec<Layer> = s.substrands.iter().map(|x| x.layer).collect();
        assert_eq!(layers.len(), 2);
        assert!(layers.contains(&Layer::Lower) && layers.contains(&Layer::Upper));
    }
    assert_eq!(g.crossings_between(0, 1), 2);

    let g = glue(&DPrime.diagram(), &C.diagram()).unwrap();
    assert_eq!(g.strings().len(), 1);
    assert!(g.strings()[0].closed);
    assert!(glue(&T.diagram(), &T.diagram()).is_err());
}

#[test]
fn non_restricted_layers_are_rejected() {
    use heis::engine::{glue, reduce};
    use heis::HeisError;
    let gd = glue(&Generator::S.diagram(), &Generator::S.diagram()).unwrap();
    assert!(matches!(reduce(&gd), Err(HeisError::NonRestrictedInput(_))));
}
