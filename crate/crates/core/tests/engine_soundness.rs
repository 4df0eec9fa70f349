use heis::diagrams::to_slices;
use heis::engine::{glue, reduce};
use heis::oracle::selftest::composable_pairs;
use heis::oracle::Oracle;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn mismatches(pairs: &[&(heis::diagrams::BasisDiagram, heis::diagrams::BasisDiagram)], level: usize) -> Vec<String> {
    let oracle = Oracle::new();
    pairs
        .par_iter()
        .filter_map(|(g, f)| {
            let lhs = match glue(g, f).and_then(|gd| reduce(&gd)) {
                Ok(m) => m,
                Err(e) => return Some(format!("{g} o {f}: {e}")),
            };
            if !lhs.is_restricted() {
                return Some(format!("{g} o {f}: non-restricted {lhs}"));
            }
            let sw = to_slices(g).unwrap().after(&to_slices(f).unwrap()).unwrap();
            (0..=level)
                .find(|&n| oracle.eval_morphism(&lhs, n).unwrap() != oracle.eval_slice_word(&sw, n))
                .map(|n| format!("{g} o {f} -> {lhs} differs at level {n}"))
        })
        .collect()
}

#[test]
fn reduction_matches_oracle_up_to_length_three() {
    let pairs = composable_pairs(3);
    let refs: Vec<_> = pairs.iter().collect();
    let bad = mismatches(&refs, 4);
    assert!(bad.is_empty(), "{} failures, e.g. {:#?}", bad.len(), &bad[..bad.len().min(10)]);
}

#[test]
fn reduction_matches_oracle_on_sampled_length_four() {
    let pairs = composable_pairs(4);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sample: Vec<_> = pairs.choose_multiple(&mut rng, 600).collect();
    let bad = mismatches(&sample, 3);
    assert!(bad.is_empty(), "{} failures, e.g. {:#?}", bad.len(), &bad[..bad.len().min(10)]);
}
