use ttchow_core::gersten::{
    bloch_cohomology, cap_chow_group, chow_group, cycle_group, gersten_check, gersten_holds, GerstenError,
    GerstenOutcome, GerstenRow, RelationSource,
};
use ttchow_core::klocal::default_negative_k;
use ttchow_core::toymodels::{bundled, ToyModel};
use ttchow_core::FinAbGroup;

fn toy(name: &str) -> ToyModel {
    bundled(name).unwrap().unwrap()
}

#[test]
fn klein4_cap_chow_total() {
    let m = default_negative_k(toy("klein4"));
    let ch0 = cap_chow_group(&m, 0).unwrap();
    let ch1 = cap_chow_group(&m, -1).unwrap();
    assert_eq!(ch0, FinAbGroup::cyclic(2));
    assert_eq!(ch1, FinAbGroup::cyclic(2));
    assert_eq!(ch0.direct_sum(&ch1).to_string(), "Z/2 ⊕ Z/2");
}

#[test]
fn point_model() {
    let m = toy("point");
    assert_eq!(chow_group(&m, 0).unwrap().chow, FinAbGroup::free(1));
    assert!(cycle_group(&m, -3).unwrap().group.is_trivial());
}

#[test]
fn p1_mock_degree_map() {
    let m = default_negative_k(toy("p1_mock"));
    let ch = chow_group(&m, -1).unwrap();
    assert_eq!(ch.cycles.group, FinAbGroup::free(3));
    assert_eq!(ch.chow, FinAbGroup::free(1));
    assert_eq!(ch.source, RelationSource::ImageVerified);
    for p in 0..=1 {
        let h = bloch_cohomology(&m, p).unwrap();
        assert_eq!(h, cap_chow_group(&m, -p).unwrap(), "p = {p}");
    }
}

#[test]
fn broken_gersten_is_reported() {
    let m = default_negative_k(toy("broken_gersten"));
    assert!(!gersten_holds(&m, 0, 0).unwrap());
    assert!(matches!(bloch_cohomology(&m, 1), Err(GerstenError::Violation(_))));
    assert!(matches!(chow_group(&m, -1), Err(GerstenError::MissingData { .. })));
}

#[test]
fn chain2_uses_explicit_relations() {
    let m = default_negative_k(toy("chain2"));
    let ch = chow_group(&m, -1).unwrap();
    assert_eq!(ch.source, RelationSource::Explicit);
    assert_eq!(ch.chow, FinAbGroup::free(1));
}

#[test]
fn node2_rows() {
    let m = default_negative_k(toy("node2"));
    assert_eq!(cap_chow_group(&m, 0).unwrap(), FinAbGroup::free(1));
    assert!(cap_chow_group(&m, -1).unwrap().is_trivial());
    assert!(cap_chow_group(&m, -2).unwrap().is_trivial());
    for p in 0..=2 {
        let row = GerstenRow::build(&m, p).unwrap();
        assert!(row.is_complex());
        assert_eq!(bloch_cohomology(&m, p).unwrap(), cap_chow_group(&m, -p).unwrap());
    }
    assert_eq!(gersten_check(&m, -1, 0).unwrap(), GerstenOutcome::Holds);
}

#[test]
fn window_limits_are_unverifiable() {
    // klein4 has no K_3, so the rectangle for p = 2 cannot be checked
    let m = default_negative_k(toy("klein4"));
    assert!(matches!(bloch_cohomology(&m, 2), Err(GerstenError::Unverifiable(_))));
}
