//! Backend selection and class expressions.

use std::path::Path;

use num_bigint::BigInt;
use ttchow_core::intersect::{ChowClass, DegreeMap, Mover, RelationMover};
use ttchow_core::klocal::{add_into, default_negative_k, DefaultNegativeK, PairingData, SupportedElement};
use ttchow_core::space::{Dim, SpectralSpace};
use ttchow_core::toymodels::{bundled, load, ToyError, ToyModel};
use ttchow_core::varieties::p1::{P1Point, P1};
use ttchow_core::varieties::p2::{P2Point, P2};

use crate::CliError;

pub enum Loaded {
    P1(DefaultNegativeK<P1>),
    P2(DefaultNegativeK<P2>),
    Toy(DefaultNegativeK<ToyModel>),
}

pub fn load_backend(spec: &str, q: u64, bound: Option<u32>) -> Result<Loaded, CliError> {
    match spec {
        "p1" => Ok(Loaded::P1(default_negative_k(P1::new(q, bound.unwrap_or(3))?))),
        "p2" => Ok(Loaded::P2(default_negative_k(P2::new(q, bound.unwrap_or(1))?))),
        _ => {
            let Some(path) = spec.strip_prefix("toy:") else {
                return Err(CliError::Usage(format!(
                    "unknown backend {spec:?}, expected p1, p2 or toy:<path>"
                )));
            };
            Ok(Loaded::Toy(default_negative_k(load_toy(path)?)))
        }
    }
}

/// A file path, or the name of a bundled fixture with or without `.json`.
fn load_toy(path: &str) -> Result<ToyModel, CliError> {
    if Path::new(path).exists() {
        return Ok(load(path)?);
    }
    let name = path.strip_suffix(".json").unwrap_or(path);
    match bundled(name) {
        Some(m) => Ok(m?),
        None => Err(CliError::from(load(path).unwrap_err())),
    }
}

impl From<ToyError> for CliError {
    fn from(e: ToyError) -> Self {
        match e {
            ToyError::Io { .. } => CliError::Other(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// What the commands need beyond the core traits.
pub trait Backend: PairingData {
    fn parse_point(&self, text: &str) -> Result<Self::Point, CliError>;
    /// Degree of a cycle, where the backend has one.
    fn degree(&self, codim: i64, z: &SupportedElement<Self::Point>) -> Option<BigInt>;
    fn mover(&self) -> Box<dyn Mover<Self::Point> + '_>;
}

impl Backend for DefaultNegativeK<P1> {
    fn parse_point(&self, text: &str) -> Result<P1Point, CliError> {
        match text {
            "X" | "eta" => Ok(P1Point::Generic),
            _ => Ok(self.inner().parse_place(text)?),
        }
    }

    fn degree(&self, codim: i64, z: &SupportedElement<P1Point>) -> Option<BigInt> {
        Some(self.inner().cycle_degree(codim, z))
    }

    fn mover(&self) -> Box<dyn Mover<P1Point> + '_> {
        Box::new(MoverRef(self.inner()))
    }
}

impl Backend for DefaultNegativeK<P2> {
    fn parse_point(&self, text: &str) -> Result<P2Point, CliError> {
        let p2 = self.inner();
        if text == "X" || text == "eta" {
            Ok(P2Point::Generic)
        } else if text.starts_with('(') {
            Ok(P2Point::Closed(p2.parse_point(text)?))
        } else {
            Ok(P2Point::Curve(p2.parse_curve(text)?))
        }
    }

    fn degree(&self, codim: i64, z: &SupportedElement<P2Point>) -> Option<BigInt> {
        Some(self.inner().cycle_degree(codim, z))
    }

    fn mover(&self) -> Box<dyn Mover<P2Point> + '_> {
        Box::new(MoverRef(self.inner()))
    }
}

impl Backend for DefaultNegativeK<ToyModel> {
    fn parse_point(&self, text: &str) -> Result<usize, CliError> {
        if let Some(x) = self.inner().point(text) {
            return Ok(x);
        }
        self.all_points(None)?
            .into_iter()
            .find(|x| self.label(x) == text)
            .ok_or_else(|| CliError::Usage(format!("no point {text:?} in {}", self.inner().name())))
    }

    fn degree(&self, _codim: i64, _z: &SupportedElement<usize>) -> Option<BigInt> {
        None
    }

    fn mover(&self) -> Box<dyn Mover<usize> + '_> {
        Box::new(RelationMover::new(self))
    }
}

struct MoverRef<'a, M>(&'a M);

impl<P, M: Mover<P>> Mover<P> for MoverRef<'_, M> {
    fn move_cycle(
        &self,
        codim: i64,
        z: &SupportedElement<P>,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Result<Option<SupportedElement<P>>, ttchow_core::intersect::IntersectError> {
        self.0.move_cycle(codim, z, rng)
    }
}

/// Parses `2[x] + [y^2 - x*z] - [inf]`. Every term must lie in the same
/// codimension, and a term's coefficient multiplies the generator of
/// `K_0` at its point.
pub fn parse_class<B: Backend>(b: &B, text: &str) -> Result<ChowClass<B::Point>, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("bad class expression {text:?}: {msg}"));
    let mut rest = text.trim();
    let mut rep = SupportedElement::new();
    let mut codim = None;
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if !first {
            return Err(bad("expected + or -"));
        }
        first = false;
        let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let coeff: BigInt = if digits == 0 {
            BigInt::from(1)
        } else {
            rest[..digits].parse().map_err(|_| bad("bad coefficient"))?
        };
        rest = rest[digits..].trim_start();
        let rest_inner = rest.strip_prefix('[').ok_or_else(|| bad("expected ["))?;
        let close = matching_bracket(rest_inner).ok_or_else(|| bad("unclosed ["))?;
        let x = b.parse_point(rest_inner[..close].trim())?;
        rest = rest_inner[close + 1..].trim_start();
        let Dim::Finite(d) = b.dim(&x) else {
            return Err(bad("point of infinite dimension"));
        };
        if codim.is_some_and(|c| c != -d) {
            return Err(bad("terms lie in different codimensions"));
        }
        codim = Some(-d);
        let g = b.group_at(&x, 0)?;
        if g.generator_count() != 1 {
            return Err(bad("K_0 at a point is not cyclic"));
        }
        add_into(&mut rep, &SupportedElement::from([(x, vec![coeff * sign])]));
    }
    let codim = codim.ok_or_else(|| bad("empty expression"))?;
    rep.retain(|_, v| v.iter().any(|c| c != &BigInt::from(0)));
    Ok(ChowClass::new(codim, rep))
}

fn matching_bracket(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' if depth == 0 => return Some(i),
            ']' => depth -= 1,
            _ => {}
        }
    }
    None
}
