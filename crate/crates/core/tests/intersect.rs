use num_bigint::BigInt;
use ttchow_core::intersect::{
    comparison_sign, product, proper, ring_table, unit_class, ChowClass, ChowNormalForm, DegreeMap, IntersectError,
    Mover, ProductOptions, RelationMover,
};
use ttchow_core::klocal::{default_negative_k, SupportedElement};
use ttchow_core::toymodels::bundled;
use ttchow_core::varieties::p1::{P1Point, P1};
use ttchow_core::varieties::p2::{P2Point, P2};
use ttchow_core::varieties::{intersection_cycle, PlanePoint};

fn one<P: Ord>(x: P) -> SupportedElement<P> {
    SupportedElement::from([(x, vec![BigInt::from(1)])])
}

fn curve(p2: &P2, text: &str) -> ChowClass<P2Point> {
    ChowClass::new(1, one(P2Point::Curve(p2.parse_curve(text).unwrap())))
}

fn moving(seed: u64) -> ProductOptions {
    ProductOptions {
        seed,
        allow_move: true,
        ..ProductOptions::default()
    }
}

#[test]
fn klein4_ring_is_dual_numbers() {
    let m = default_negative_k(bundled("klein4").unwrap().unwrap());
    let x0 = m.inner().point("x0").unwrap();
    let x1 = m.inner().point("x1").unwrap();
    let eps = ChowClass::new(1, one(x0.clone()));
    let classes = vec![unit_class(&m), eps.clone()];
    let nf = ChowNormalForm::new(&m);
    let mover = RelationMover::new(&m);
    let table = ring_table(&m, &classes, Some(&mover), moving(1), &|c, z| nf.normal_form(c, z)).unwrap();
    assert!(table.axioms_hold(), "{:?}", table.failures);
    let sq = &table.products[1][1];
    assert_eq!(sq.codim, 2);
    assert!(sq.rep.is_empty());
    // ε is nonzero and both closed points represent it
    let e = nf.normal_form(1, &eps.rep).unwrap();
    assert_ne!(e, nf.normal_form(1, &SupportedElement::new()).unwrap());
    assert_eq!(e, nf.normal_form(1, &one(x1)).unwrap());
    assert_eq!(table.products[0][1].normal_form, e);
}

#[test]
fn unit_is_identity_on_toys() {
    for name in ["point", "chain2", "klein4", "p1_mock", "node2"] {
        let m = default_negative_k(bundled(name).unwrap().unwrap());
        let u = unit_class(&m);
        let r = product(&m, &u, &u, None, ProductOptions::default()).unwrap();
        assert_eq!(r.result.rep, u.rep, "{name}");
    }
}

#[test]
fn relation_mover_keeps_class() {
    let m = default_negative_k(bundled("p1_mock").unwrap().unwrap());
    let nf = ChowNormalForm::new(&m);
    let mover = RelationMover::new(&m);
    let ch = ttchow_core::gersten::chow_group(&m, -1).unwrap();
    let z = ch.cycles.unflatten(&[BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    for _ in 0..10 {
        let w = mover.move_cycle(1, &z, &mut rng).unwrap().unwrap();
        assert_eq!(nf.normal_form(1, &w).unwrap(), nf.normal_form(1, &z).unwrap());
    }
}

#[test]
fn two_lines_meet_at_origin_point() {
    let p2 = P2::new(3, 1).unwrap();
    let (a, b) = (curve(&p2, "x"), curve(&p2, "y"));
    assert!(proper(&p2, &a.rep, &b.rep).unwrap());
    let r = product(&p2, &a, &b, None, ProductOptions::default()).unwrap();
    let pt = PlanePoint::rational(3, [0, 0, 1]).unwrap();
    assert_eq!(r.result.codim, 2);
    assert_eq!(r.result.rep, one(P2Point::Closed(pt)));
    assert!(!r.moved);
    assert_eq!(comparison_sign(1, 1), -1);
}

#[test]
fn line_times_conic_has_degree_two() {
    let p2 = P2::new(3, 1).unwrap();
    for conic in ["x^2 + y^2 - z^2", "x*y - z^2", "x^2 + y^2 + z^2"] {
        let (l, c) = (curve(&p2, "x + y + z"), curve(&p2, conic));
        let r = product(&p2, &l, &c, None, ProductOptions::default()).unwrap();
        assert_eq!(p2.cycle_degree(2, &r.result.rep), BigInt::from(2), "{conic}");
        // oracle: the plane intersection cycle computed directly
        let f = p2.parse_curve("x + y + z").unwrap();
        let g = p2.parse_curve(conic).unwrap();
        let expected: BigInt = intersection_cycle(&f, &g)
            .unwrap()
            .iter()
            .map(|(pt, m)| BigInt::from(pt.degree() as u32 * m))
            .sum();
        assert_eq!(expected, BigInt::from(2));
    }
}

#[test]
fn self_intersection_needs_moving() {
    let p2 = P2::new(3, 1).unwrap();
    let l = curve(&p2, "x");
    assert!(!proper(&p2, &l.rep, &l.rep).unwrap());
    let err = product(&p2, &l, &l, None, ProductOptions::default()).unwrap_err();
    assert!(matches!(err, IntersectError::ImproperIntersection { .. }));
    let mover: &dyn Mover<P2Point> = &p2;
    let r = product(&p2, &l, &l, Some(mover), moving(7)).unwrap();
    assert!(r.moved && r.attempts <= 8);
    assert_eq!(p2.cycle_degree(2, &r.result.rep), BigInt::from(1));
    let again = product(&p2, &l, &l, Some(mover), moving(7)).unwrap();
    assert_eq!(again.result.rep, r.result.rep);
}

#[test]
fn unit_law_on_p2() {
    let p2 = P2::new(3, 1).unwrap();
    let u = unit_class(&p2);
    let c = curve(&p2, "x^2 + y^2 - z^2");
    let r = product(&p2, &u, &c, None, ProductOptions::default()).unwrap();
    assert_eq!(r.result.rep, c.rep);
    let pt = ChowClass::new(2, one(P2Point::Closed(PlanePoint::rational(3, [1, 2, 0]).unwrap())));
    assert_eq!(product(&p2, &pt, &u, None, ProductOptions::default()).unwrap().result.rep, pt.rep);
}

#[test]
fn p1_point_squared_is_zero() {
    let p1 = P1::new(2, 2).unwrap();
    let h = ChowClass::new(1, one(P1Point::Infinity));
    let classes = vec![unit_class(&p1), h];
    let mover: &dyn Mover<P1Point> = &p1;
    let table = ring_table(&p1, &classes, Some(mover), moving(0), &|c, z| Ok(vec![p1.cycle_degree(c, z)])).unwrap();
    assert!(table.axioms_hold(), "{:?}", table.failures);
    assert!(table.products[1][1].rep.is_empty());
    assert_eq!(table.products[0][1].normal_form, vec![BigInt::from(1)]);
}

#[test]
fn p2_degree_table() {
    let p2 = P2::new(2, 1).unwrap();
    let classes = vec![unit_class(&p2), curve(&p2, "x + y + z"), curve(&p2, "x^2 + x*y + y^2 + x*z + z^2")];
    let mover: &dyn Mover<P2Point> = &p2;
    let table = ring_table(&p2, &classes, Some(mover), moving(11), &|c, z| Ok(vec![p2.cycle_degree(c, z)])).unwrap();
    assert!(table.axioms_hold(), "{:?}", table.failures);
    for (i, d) in [(1, 1u32), (2, 2)] {
        for (j, e) in [(1, 1u32), (2, 2)] {
            assert_eq!(table.products[i][j].normal_form, vec![BigInt::from(d * e)]);
        }
    }
}
