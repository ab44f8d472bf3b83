use fiid::tree::{ball_intersection_size, ball_intersection_size_closed, ball_size, dist, BallRegion};
use fiid::words::{reduce, Letter, Signature, Word};
use proptest::prelude::*;

fn arb_word(d: u32) -> impl Strategy<Value = Word> {
    let sig = Signature::involutions(d).unwrap();
    let alphabet: Vec<Letter> = sig.alphabet();
    prop::collection::vec(0..alphabet.len(), 0..=12)
        .prop_map(move |ix| reduce(&ix.iter().map(|&i| alphabet[i]).collect::<Vec<_>>(), sig).unwrap())
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in arb_word(3), b in arb_word(3), c in arb_word(3)) {
        let ab = dist(&a, &b).unwrap();
        prop_assert_eq!(ab, dist(&b, &a).unwrap());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(dist(&a, &c).unwrap() <= ab + dist(&b, &c).unwrap());
    }

    #[test]
    fn left_translation_is_an_isometry(a in arb_word(4), b in arb_word(4), g in arb_word(4)) {
        let ga = g.multiply(&a).unwrap();
        let gb = g.multiply(&b).unwrap();
        prop_assert_eq!(dist(&ga, &gb).unwrap(), dist(&a, &b).unwrap());
    }
}

#[test]
fn ball_sizes_match_enumeration() {
    for d in 3..=5u32 {
        let e = Word::identity(Signature::involutions(d).unwrap());
        for r in 0..=4 {
            let region = BallRegion::ball(&e, r).unwrap();
            assert_eq!(region.len() as u128, ball_size(d, r), "d={d} R={r}");
            assert!(region.is_tree());
            assert_eq!(region.edges().len() + 1, region.len());
        }
    }
}

#[test]
fn intersection_closed_form_matches_enumeration() {
    for d in 3..=4u32 {
        for r in 0..=4 {
            for k in 0..=2 * r + 1 {
                assert_eq!(
                    ball_intersection_size(d, r, k).unwrap(),
                    ball_intersection_size_closed(d, r, k),
                    "d={d} R={r} k={k}"
                );
            }
        }
    }
}
