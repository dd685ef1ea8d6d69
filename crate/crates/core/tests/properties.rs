use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttchow_core::varieties::poly::{factor, is_irreducible};
use ttchow_core::varieties::{intersection_cycle, Form, Gf, Poly};
use ttchow_core::zlinalg::smith_normal_form;
use ttchow_core::IntMatrix;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-20i64..=20, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #[test]
    fn smith_form_is_a_factorization(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let d = s.invariant_factors();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn smith_rank_matches_transpose(m in matrix()) {
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m.transpose());
        prop_assert_eq!(a.invariant_factors(), b.invariant_factors());
    }
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most half.
fn irreducible_by_trial(k: &Gf, f: &Poly) -> bool {
    let n = f.degree().unwrap();
    let p = k.characteristic() as u32;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut c = Vec::with_capacity(d + 1);
            let mut r = idx;
            for _ in 0..d {
                c.push((r % p as u64) as u32);
                r /= p as u64;
            }
            c.push(1);
            let g = Poly::from_prime_coeffs(k, &c);
            if f.rem(k, &g).is_zero() {
                return false;
            }
        }
    }
    n >= 1
}

#[test]
fn random_factorizations() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for i in 0..1000 {
        let p = [2u64, 3, 5, 7][i % 4];
        let k = Gf::prime(p).unwrap();
        let deg = rng.gen_range(1..=10);
        let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..p as u32)).collect();
        c.push(rng.gen_range(1..p as u32));
        let f = Poly::from_prime_coeffs(&k, &c);
        let fac = factor(&k, &f).unwrap();
        assert_eq!(fac.expand(&k), f, "poly {i}");
        for (g, e) in &fac.factors {
            assert!(*e >= 1 && g.is_monic(&k));
            assert!(is_irreducible(&k, g), "poly {i}");
            if g.degree().unwrap() <= 6 {
                assert!(irreducible_by_trial(&k, g), "poly {i}: factor not irreducible");
            }
        }
        if deg <= 6 {
            let whole = fac.factors.len() == 1 && fac.factors[0].1 == 1;
            assert_eq!(whole, irreducible_by_trial(&k, &f), "poly {i}");
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, p: u32, deg: u32) -> Form {
    loop {
        let mut terms = Vec::new();
        for a in 0..=deg {
            for b in 0..=deg - a {
                terms.push(([a, b, deg - a - b], rng.gen_range(0..p as i64)));
            }
        }
        if let Ok(f) = Form::from_terms(p, terms) {
            if !f.is_zero() {
                return f;
            }
        }
    }
}

#[test]
fn bezout_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut done = 0;
    while done < 200 {
        let p = if done % 2 == 0 { 2 } else { 3 };
        let (d1, d2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (f, g) = (random_form(&mut rng, p, d1), random_form(&mut rng, p, d2));
        let Ok(cycle) = intersection_cycle(&f, &g) else {
            continue;
        };
        let total: BigInt = cycle.iter().map(|(pt, m)| BigInt::from(pt.degree() as u32 * m)).sum();
        assert_eq!(total, BigInt::from(d1 * d2), "{f} and {g}");
        // every listed point lies on both curves
        for (pt, _) in &cycle {
            let k = pt.field();
            assert!(k.is_zero(f.eval(&k, &pt.coords())) && k.is_zero(g.eval(&k, &pt.coords())));
        }
        done += 1;
    }
}
