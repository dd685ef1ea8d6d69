//! Moving lemmas for the variety backends.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::p1::{degree, P1Point, P1};
use super::p2::{divisor_degree, zero_cycle_degree, P2Point, Pgl3, P2};
use crate::intersect::{DegreeMap, IntersectError, Mover};
use crate::klocal::{add_into, SupportedElement};

/// Translates the whole cycle by a random projective linear map.
impl Mover<P2Point> for P2 {
    fn move_cycle(
        &self,
        _codim: i64,
        z: &SupportedElement<P2Point>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<SupportedElement<P2Point>>, IntersectError> {
        let m = Pgl3::random(self.q() as u32, rng);
        let mut out = SupportedElement::new();
        for (x, c) in z {
            let single = SupportedElement::from([(self.transform(x, &m), c.clone())]);
            add_into(&mut out, &single);
        }
        Ok(Some(out))
    }
}

/// Replaces each closed point by another place of the same degree, which
/// is rationally equivalent to it on `P¹`.
impl Mover<P1Point> for P1 {
    fn move_cycle(
        &self,
        _codim: i64,
        z: &SupportedElement<P1Point>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<SupportedElement<P1Point>>, IntersectError> {
        let places = self.closed_points();
        let mut out = SupportedElement::new();
        for (x, c) in z {
            let target = if *x == P1Point::Generic {
                x.clone()
            } else {
                let same: Vec<&P1Point> = places
                    .iter()
                    .filter(|y| *y != x && y.residue_degree() == x.residue_degree())
                    .collect();
                match same.choose(rng) {
                    Some(y) => (*y).clone(),
                    None => return Ok(None),
                }
            };
            add_into(&mut out, &SupportedElement::from([(target, c.clone())]));
        }
        Ok(Some(out))
    }
}

impl DegreeMap<P1Point> for P1 {
    fn cycle_degree(&self, codim: i64, z: &SupportedElement<P1Point>) -> BigInt {
        match codim {
            0 => z.get(&P1Point::Generic).map(|c| c[0].clone()).unwrap_or_default(),
            _ => degree(z),
        }
    }
}

impl DegreeMap<P2Point> for P2 {
    fn cycle_degree(&self, codim: i64, z: &SupportedElement<P2Point>) -> BigInt {
        match codim {
            0 => z.get(&P2Point::Generic).map(|c| c[0].clone()).unwrap_or_default(),
            1 => divisor_degree(z),
            _ => zero_cycle_degree(z),
        }
    }
}
