use jugglestate::poi::{
    build_poi_graph, cycle_length, cycle_starts, find_entry, is_cycle, poi_kernel, run_word, Hand,
    MoveLabel, PoiState, PoiWord, Side,
};
use jugglestate::walk::{stationary_exact, stationary_numeric};
use jugglestate::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use std::collections::BTreeSet;

/// (right hand up, left hand on the right, right hand on the right)
type Tuple = (bool, bool, bool);

fn tuple_step((right_up, l, r): Tuple, cross: bool) -> Tuple {
    // the hand that was down rises and may switch sides
    if right_up {
        (false, l ^ cross, r)
    } else {
        (true, l, r ^ cross)
    }
}

fn tuple_of(s: &PoiState) -> Tuple {
    (s.up == Hand::Right, s.left_at == Side::Right, s.right_at == Side::Right)
}

fn tuple_crossings((_, l, r): Tuple) -> u8 {
    l as u8 + !r as u8
}

fn tuple_mirror((right_up, l, r): Tuple) -> Tuple {
    (!right_up, !r, !l)
}

fn word(text: &str) -> PoiWord {
    text.parse().unwrap()
}

fn words_of_length(len: usize) -> Vec<Vec<bool>> {
    // false = B sorts before true = R
    (0..1u32 << len)
        .map(|code| (0..len).rev().map(|i| code >> i & 1 == 1).collect())
        .collect()
}

fn tuple_run(start: Tuple, w: &[bool]) -> Tuple {
    w.iter().fold(start, |s, &c| tuple_step(s, c))
}

fn labels(w: &[bool]) -> Vec<MoveLabel> {
    w.iter().map(|&c| if c { MoveLabel::R } else { MoveLabel::B }).collect()
}

#[test]
fn transitions_match_the_tuple_model() {
    let all = PoiState::all();
    assert_eq!(all.len(), 8);
    for s in &all {
        for (label, cross) in [(MoveLabel::B, false), (MoveLabel::R, true)] {
            assert_eq!(tuple_of(&s.advance(label)), tuple_step(tuple_of(s), cross), "{s} {label}");
        }
        assert_eq!(s.crossing_count(), tuple_crossings(tuple_of(s)));
        assert_eq!(tuple_of(&s.mirror()), tuple_mirror(tuple_of(s)));
    }
}

#[test]
fn graph_shape() {
    let g = build_poi_graph();
    assert_eq!((g.node_count(), g.edge_count()), (8, 16));
    assert!(g.is_strongly_connected());
    let grounds: Vec<&PoiState> = g.nodes().iter().filter(|s| s.crossing_count() == 0).collect();
    assert_eq!(grounds.len(), 2);
    assert!(grounds.iter().all(|s| s.is_ground()));
}

#[test]
fn each_label_is_a_bijection() {
    for label in [MoveLabel::B, MoveLabel::R] {
        let images: BTreeSet<PoiState> = PoiState::all().iter().map(|s| s.advance(label)).collect();
        assert_eq!(images.len(), 8, "{label}");
    }
}

#[test]
fn crossing_count_bounds_and_parity() {
    for s in PoiState::all() {
        assert!(s.crossing_count() <= 2);
        // B keeps the crossings, R changes them by exactly one
        assert_eq!(s.advance(MoveLabel::B).crossing_count(), s.crossing_count());
        assert_eq!(s.advance(MoveLabel::R).crossing_count().abs_diff(s.crossing_count()), 1);
    }
}

#[test]
fn mirror_is_an_automorphism() {
    for s in PoiState::all() {
        assert_eq!(s.mirror().mirror(), s);
        assert_eq!(s.mirror().crossing_count(), s.crossing_count());
        for label in [MoveLabel::B, MoveLabel::R] {
            assert_eq!(s.advance(label).mirror(), s.mirror().advance(label));
        }
    }
}

#[test]
fn rule_examples() {
    let left_up = PoiState::ground(Hand::Left);
    assert_eq!(left_up.advance(MoveLabel::B), PoiState::ground(Hand::Right));
    let once = left_up.advance(MoveLabel::R);
    assert_eq!((once.up, once.left_at, once.right_at), (Hand::Right, Side::Left, Side::Left));
    assert_eq!(once.crossing_count(), 1);
    let twice = once.advance(MoveLabel::R);
    assert_eq!((twice.up, twice.left_at, twice.right_at), (Hand::Left, Side::Right, Side::Left));
    assert_eq!(twice.crossing_count(), 2);
}

#[test]
fn quoted_words_end_on_ground() {
    for text in ["R RRB RRR", "R BRRBB BRRBR"] {
        for g in PoiState::grounds() {
            let (end, trajectory) = run_word(&g, word(text).labels());
            assert!(end.is_ground(), "{text} from {g}");
            assert_eq!(trajectory.len(), word(text).len());
        }
    }
}

#[test]
fn ground_pattern_cycles() {
    for g in PoiState::grounds() {
        assert!(is_cycle(&g, &word("BB")));
        assert!(!is_cycle(&g, &word("B")));
    }
}

#[test]
fn weave_avoids_the_ground() {
    let entry = find_entry(&word("RRB")).unwrap();
    assert_eq!(entry.moves_text(), "R");
    let w = word("RRB").repeated(2);
    assert!(is_cycle(&entry.start, &w));
    let (_, trajectory) = run_word(&entry.start, w.labels());
    assert_eq!(trajectory.iter().collect::<BTreeSet<_>>().len(), 6);
    assert!(trajectory.iter().all(|s| s.crossing_count() > 0));
    assert_eq!(cycle_length(&word("RRB")), 6);
}

#[test]
fn entries_are_minimal() {
    for len in 1..=6 {
        for w in words_of_length(len) {
            let pw = PoiWord::new(labels(&w)).unwrap();
            // cycle starts, recomputed on tuples
            let starts: Vec<Tuple> = PoiState::all()
                .iter()
                .map(tuple_of)
                .filter(|&s| {
                    let end = tuple_run(s, &w);
                    if len % 2 == 0 { end == s } else { end == tuple_mirror(s) }
                })
                .collect();
            let lib: Vec<Tuple> = cycle_starts(&pw).iter().map(tuple_of).collect();
            assert_eq!(lib, starts, "{pw}");

            let grounds = [(false, false, true), (true, false, true)];
            let oracle = (0..=4).find_map(|n| {
                words_of_length(n).into_iter().find_map(|prefix| {
                    grounds
                        .iter()
                        .find(|&&g| starts.contains(&tuple_run(g, &prefix)))
                        .map(|&g| (g, prefix.clone()))
                })
            });
            match (find_entry(&pw), oracle) {
                (Ok(entry), Some((g, prefix))) => {
                    assert_eq!(tuple_of(&entry.from), g, "{pw}");
                    assert_eq!(entry.moves, labels(&prefix), "{pw}");
                    assert_eq!(tuple_of(&entry.start), tuple_run(g, &prefix), "{pw}");
                }
                (Err(Error::NoCycle(_)), None) => {}
                (got, want) => panic!("{pw}: {got:?} vs {want:?}"),
            }
        }
    }
}

#[test]
fn quoted_entries() {
    assert_eq!(find_entry(&word("RRB")).unwrap().moves.len(), 1);
    assert!(find_entry(&word("BB")).unwrap().starts_on_ground());
    assert!(find_entry(&word("BRRBB")).unwrap().moves.len() <= 1);
    assert!(matches!(find_entry(&word("R")), Err(Error::NoCycle(_))));
}

#[test]
fn kernel_rejects_degenerate_probabilities() {
    for (p, q) in [(0, 1), (1, 1), (3, 2), (-1, 2)] {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        assert!(matches!(poi_kernel(&r), Err(Error::BadProbability(_))), "{p}/{q}");
    }
}

#[test]
fn kernel_stationary_is_uniform_for_quoted_values() {
    for (p, q) in [(1, 10), (3, 10), (1, 2), (9, 10)] {
        let kernel = poi_kernel(&BigRational::new(BigInt::from(p), BigInt::from(q))).unwrap();
        let pi = stationary_exact(&kernel).unwrap();
        let eighth = BigRational::new(BigInt::from(1), BigInt::from(8));
        assert!(pi.states().iter().all(|s| pi.exact(s) == Some(&eighth)));
        let numeric = stationary_numeric(&kernel, 1e-12, 1_000_000).unwrap();
        assert!(numeric.max_abs_diff(&pi) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn kernel_stationary_is_uniform(p in 1i64..1000) {
        let kernel = poi_kernel(&BigRational::new(BigInt::from(p), BigInt::from(1000))).unwrap();
        let pi = stationary_exact(&kernel).unwrap();
        let eighth = BigRational::new(BigInt::from(1), BigInt::from(8));
        prop_assert!(pi.states().iter().all(|s| pi.exact(s) == Some(&eighth)));
    }

    #[test]
    fn word_text_round_trips(w in prop::collection::vec(any::<bool>(), 1..12)) {
        let pw = PoiWord::new(labels(&w)).unwrap();
        prop_assert_eq!(pw.to_string().parse::<PoiWord>().unwrap(), pw);
    }

    #[test]
    fn state_ids_round_trip(i in 0usize..8) {
        let s = PoiState::all()[i];
        prop_assert_eq!(s.id().parse::<PoiState>().unwrap(), s);
    }
}
