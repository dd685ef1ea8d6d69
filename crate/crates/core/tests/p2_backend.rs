use std::time::Instant;

use ttchow_core::gersten::{chow_group, gersten_check, GerstenOutcome, RelationSource};
use ttchow_core::klocal::{default_negative_k, validate};
use ttchow_core::varieties::p2::P2;
use ttchow_core::FinAbGroup;

#[test]
fn chow_groups_are_free_of_rank_one() {
    for (q, bound) in [(3, 1), (2, 2), (5, 1)] {
        let start = Instant::now();
        let x = default_negative_k(P2::new(q, bound).unwrap());
        for l in [0, -1, -2] {
            let ch = chow_group(&x, l).unwrap();
            assert_eq!(ch.chow, FinAbGroup::free(1), "q = {q}, bound {bound}, l = {l}");
            if l < 0 {
                assert_eq!(ch.source, RelationSource::ImageAsserted);
            }
        }
        println!("q = {q}, bound {bound}: {:?}", start.elapsed());
    }
}

#[test]
fn gersten_beyond_window_is_unverifiable() {
    let x = default_negative_k(P2::new(2, 1).unwrap());
    assert!(matches!(gersten_check(&x, 0, 1).unwrap(), GerstenOutcome::Unverifiable(_)));
}

#[test]
fn validates_with_conics() {
    let x = P2::new(2, 2).unwrap();
    let report = validate(&x).unwrap();
    assert!(report.is_clean(), "{:?}", report.violations);
}
