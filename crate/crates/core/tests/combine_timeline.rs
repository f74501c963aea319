mod common;

use common::{all_patterns, step_state};
use jugglestate::combine::{combine, combine_default, CombinedPattern};
use jugglestate::poi::{find_entry, run_word, PoiWord};
use jugglestate::siteswap::Siteswap;
use jugglestate::toss::pattern_states;
use jugglestate::Error;

fn make(toss: &str, spin: &str, m: u8) -> CombinedPattern {
    combine(&toss.parse().unwrap(), &spin.parse().unwrap(), m).unwrap()
}

/// Replays every beat with the vector rule and the library's poi step and
/// checks the timeline closes exactly at its full period.
fn assert_sound(c: &CombinedPattern) {
    let m = c.max_throw;
    let t = &c.timeline;
    assert_eq!(t.len(), c.full_period);
    assert_eq!(c.full_period % c.notation_period, 0);
    for (i, beat) in t.iter().enumerate() {
        assert_eq!(beat.beat, i);
        assert_eq!(beat.throw, c.toss.throws()[i % c.toss.period()]);
        assert_eq!(beat.label, c.spin.labels()[i % c.spin.len()]);
        let next = &t[(i + 1) % t.len()];
        let toss_next = step_state(&beat.toss.to_vec(), beat.throw, m).expect("legal throw");
        assert_eq!(toss_next, next.toss.to_vec(), "toss at beat {i}");
        assert_eq!(beat.poi.advance(beat.label), next.poi, "poi at beat {i}");
    }
    // no shorter multiple of the notation period closes both layers
    for k in (c.notation_period..c.full_period).step_by(c.notation_period) {
        assert!(t[k].toss != t[0].toss || t[k].poi != t[0].poi, "closes early at {k}");
    }
}

#[test]
fn weave_over_522() {
    let c = make("522", "RRB", 5);
    assert_eq!((c.notation_period, c.full_period), (3, 6));
    assert_sound(&c);
    assert!(c.timeline.iter().all(|b| b.poi.crossing_count() > 0));
    assert_eq!(c.poi_start(), find_entry(&"RRB".parse().unwrap()).unwrap().start);
}

#[test]
fn quoted_periods() {
    let c = make("450", "B", 5);
    assert_eq!((c.notation_period, c.full_period), (3, 6));
    assert_sound(&c);
    let c = make("0", "BB", 1);
    assert_eq!((c.notation_period, c.full_period), (2, 2));
    assert_sound(&c);
}

#[test]
fn projections_match_each_layer() {
    let c = make("441", "BRRBB", 4);
    let toss_cycle = pattern_states(&c.toss, 4).unwrap();
    for b in &c.timeline {
        assert_eq!(b.toss, toss_cycle[b.beat % toss_cycle.len()]);
    }
    let labels: Vec<_> = c.timeline.iter().map(|b| b.label).collect();
    let (_, trajectory) = run_word(&c.poi_start(), &labels);
    for (b, after) in c.timeline.iter().skip(1).zip(&trajectory) {
        assert_eq!(b.poi, *after);
    }
    assert_sound(&c);
}

#[test]
fn every_small_combination_closes() {
    let words: Vec<PoiWord> = ["B", "R", "BB", "RB", "RRB", "BRRBB", "RRRR", "RBRBR"]
        .iter()
        .map(|w| w.parse().unwrap())
        .collect();
    for throws in all_patterns(4, 5) {
        let p = Siteswap::new(throws).unwrap();
        if !p.is_valid() {
            continue;
        }
        for w in &words {
            let c = combine_default(&p, w).unwrap();
            assert_sound(&c);
        }
    }
}

#[test]
fn rejects_bad_inputs() {
    let spin: PoiWord = "B".parse().unwrap();
    assert!(matches!(combine(&"543".parse().unwrap(), &spin, 5), Err(Error::InvalidPattern(_))));
    assert!(matches!(combine(&"450".parse().unwrap(), &spin, 4), Err(Error::CapacityTooSmall { .. })));
}
