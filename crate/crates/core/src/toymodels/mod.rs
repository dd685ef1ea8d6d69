//! Finite-poset models with tabulated K-data, loaded from JSON.

mod schema;

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::json_int::JsonInt;
use crate::klocal::{validate, validate_pairing, KError, KLocalData, PairingData, SupportedElement};
use crate::space::{is_dimension_function, Dim, DimChoice, FinitePoset, SpaceError, SpectralSpace};
use crate::zlinalg::{AbHom, FinAbGroup, IntMatrix};

pub use schema::{
    BoundaryEntry, CycleTerm, GroupEntry, PairingEntry, PointEntry, ProductEntry, RationalEquivalenceEntry,
    ToyModelFile, SCHEMA_VERSION,
};

#[derive(Debug, thiserror::Error)]
pub enum ToyError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid model: {}", .0.join("; "))]
    Validation(Vec<String>),
}

#[derive(Debug, Clone)]
struct ToyPairing {
    unit: SupportedElement<usize>,
    products: BTreeMap<(usize, usize), SupportedElement<usize>>,
}

/// A validated toy model.
#[derive(Debug, Clone)]
pub struct ToyModel {
    name: String,
    status: Option<String>,
    description: Option<String>,
    poset: FinitePoset,
    window: (i64, i64),
    orders: BTreeMap<(usize, i64), Vec<BigInt>>,
    boundaries: BTreeMap<(usize, usize, i64), IntMatrix>,
    pairing: Option<ToyPairing>,
    rational_equivalence: Option<BTreeMap<i64, Vec<SupportedElement<usize>>>>,
}

/// Fixtures compiled into the library, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("point", include_str!("../../fixtures/point.json")),
    ("chain2", include_str!("../../fixtures/chain2.json")),
    ("klein4", include_str!("../../fixtures/klein4.json")),
    ("broken_gersten", include_str!("../../fixtures/broken_gersten.json")),
    ("p1_mock", include_str!("../../fixtures/p1_mock.json")),
    ("node2", include_str!("../../fixtures/node2.json")),
];

/// Loads a bundled fixture; a trailing `.json` in `name` is ignored.
pub fn bundled(name: &str) -> Option<Result<ToyModel, ToyError>> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ToyModel::from_json(text))
}

pub fn load(path: impl AsRef<Path>) -> Result<ToyModel, ToyError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ToyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ToyModel::from_json(&text)
}

impl ToyModel {
    pub fn from_json(text: &str) -> Result<Self, ToyError> {
        let file: ToyModelFile = serde_json::from_str(text).map_err(|e| ToyError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ToyModelFile) -> Result<Self, ToyError> {
        let mut errs = Vec::new();
        if file.schema_version != SCHEMA_VERSION {
            errs.push(format!("schema_version: expected {SCHEMA_VERSION}, found {}", file.schema_version));
        }
        let (wlo, whi) = (file.window[0], file.window[1]);
        if wlo > -1 || wlo > whi {
            errs.push(format!("window: [{wlo}, {whi}] must satisfy min <= -1 and min <= max"));
        }
        let ids: Vec<String> = file.points.iter().map(|p| p.id.clone()).collect();
        let displays = file
            .points
            .iter()
            .map(|p| p.display.clone().unwrap_or_else(|| p.id.clone()))
            .collect();
        let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != ids.len() {
            errs.push("points: duplicate id".to_string());
        }
        let lookup = |id: &str, field: &str, errs: &mut Vec<String>| -> Option<usize> {
            let r = index.get(id).copied();
            if r.is_none() {
                errs.push(format!("{field}: unknown point {id:?}"));
            }
            r
        };

        let mut pairs = Vec::new();
        for (k, [a, b]) in file.specializations.iter().enumerate() {
            let field = format!("specializations[{k}]");
            if let (Some(a), Some(b)) = (lookup(a, &field, &mut errs), lookup(b, &field, &mut errs)) {
                pairs.push((a, b));
            }
        }
        let dims = DimChoice::Explicit(file.points.iter().map(|p| Dim::Finite(p.dim)).collect());
        let poset = match FinitePoset::new(ids.clone(), displays, &pairs, dims) {
            Ok(p) => p,
            Err(e) => {
                errs.push(format!("specializations: {e}"));
                return Err(ToyError::Validation(errs));
            }
        };
        if !is_dimension_function(&poset, None).unwrap_or(false) {
            errs.push("points: dim is not a dimension function for the specialization order".to_string());
        }

        let mut orders = BTreeMap::new();
        for (k, g) in file.groups.iter().enumerate() {
            let field = format!("groups[{k}]");
            let Some(x) = lookup(&g.point, &field, &mut errs) else { continue };
            if g.p < wlo || g.p > whi {
                errs.push(format!("{field}: degree {} outside window", g.p));
            }
            if g.orders.iter().any(|o| o.0 < BigInt::zero()) {
                errs.push(format!("{field}: negative order"));
            }
            if orders.insert((x, g.p), unwrap_ints(&g.orders)).is_some() {
                errs.push(format!("{field}: duplicate entry"));
            }
        }

        let mut model = ToyModel {
            name: file.name.clone(),
            status: file.status.clone(),
            description: file.description.clone(),
            poset,
            window: (wlo, whi),
            orders,
            boundaries: BTreeMap::new(),
            pairing: None,
            rational_equivalence: None,
        };

        for (k, b) in file.boundaries.iter().enumerate() {
            let field = format!("boundaries[{k}]");
            let (Some(x), Some(y)) = (lookup(&b.from, &field, &mut errs), lookup(&b.to, &field, &mut errs)) else {
                continue;
            };
            if !model.poset.specializes(&x, &y) {
                errs.push(format!("{field}: {} is not a specialization of {}", b.to, b.from));
            }
            if model.poset.dim(&y).finite().map(|d| d + 1) != model.poset.dim(&x).finite() {
                errs.push(format!("{field}: dimensions must drop by one"));
            }
            if b.p - 1 < wlo || b.p > whi {
                errs.push(format!("{field}: degree {} outside window", b.p));
                continue;
            }
            let src = model.generators(x, b.p);
            let dst = model.generators(y, b.p - 1);
            let m = match matrix_from_rows(&b.matrix, dst, src) {
                Ok(m) => m,
                Err(e) => {
                    errs.push(format!("{field}: {e}"));
                    continue;
                }
            };
            let (gs, gt) = (model.local_group(x, b.p), model.local_group(y, b.p - 1));
            if let Err(e) = AbHom::new(gs, gt, m.clone()) {
                errs.push(format!("{field}: {e}"));
            }
            model.boundaries.insert((x, y, b.p), m);
        }

        if let Some(p) = &file.pairing {
            let unit = cycle_from_terms(&p.unit, &index, "pairing.unit", &mut errs);
            let mut products = BTreeMap::new();
            for (k, e) in p.products.iter().enumerate() {
                let field = format!("pairing.products[{k}]");
                let (Some(x), Some(y)) = (lookup(&e.left, &field, &mut errs), lookup(&e.right, &field, &mut errs)) else {
                    continue;
                };
                for z in [x, y] {
                    if model.generators(z, 0) != 1 {
                        errs.push(format!("{field}: K_0 at {} must be cyclic", model.poset.id(z)));
                    }
                }
                let result = cycle_from_terms(&e.result, &index, &field, &mut errs);
                products.insert((x, y), result.clone());
                products.entry((y, x)).or_insert(result);
            }
            model.pairing = Some(ToyPairing { unit, products });
        }

        if let Some(re) = &file.rational_equivalence {
            let mut table: BTreeMap<i64, Vec<SupportedElement<usize>>> = BTreeMap::new();
            for (k, e) in re.iter().enumerate() {
                for (c, cyc) in e.cycles.iter().enumerate() {
                    let field = format!("rational_equivalence[{k}].cycles[{c}]");
                    let cycle = cycle_from_terms(cyc, &index, &field, &mut errs);
                    if cycle.keys().any(|x| model.poset.dim(x) != Dim::Finite(e.dim)) {
                        errs.push(format!("{field}: point of the wrong dimension"));
                    }
                    table.entry(e.dim).or_default().push(cycle);
                }
            }
            model.rational_equivalence = Some(table);
        }

        for ((x, _), term) in model.cycle_terms() {
            if term.len() != model.generators(x, 0) {
                errs.push(format!("cycle at {}: element has wrong length", model.poset.id(x)));
            }
        }

        if errs.is_empty() {
            match validate(&model) {
                Ok(r) => errs.extend(r.violations),
                Err(e) => errs.push(e.to_string()),
            }
            if model.pairing.is_some() {
                let pts: Vec<usize> = (0..model.poset.len()).collect();
                match validate_pairing(&model, &pts) {
                    Ok(r) => errs.extend(r.violations),
                    Err(e) => errs.push(e.to_string()),
                }
            }
        }
        if errs.is_empty() {
            Ok(model)
        } else {
            Err(ToyError::Validation(errs))
        }
    }

    fn cycle_terms(&self) -> Vec<((usize, usize), Vec<BigInt>)> {
        let mut out = Vec::new();
        let mut push = |c: &SupportedElement<usize>| {
            for (x, v) in c {
                out.push(((*x, 0), v.clone()));
            }
        };
        if let Some(p) = &self.pairing {
            push(&p.unit);
            p.products.values().for_each(&mut push);
        }
        if let Some(re) = &self.rational_equivalence {
            re.values().flatten().for_each(&mut push);
        }
        out
    }

    fn generators(&self, x: usize, p: i64) -> usize {
        self.orders.get(&(x, p)).map_or(0, Vec::len)
    }

    fn local_group(&self, x: usize, p: i64) -> FinAbGroup {
        match self.orders.get(&(x, p)) {
            Some(o) => FinAbGroup::from_invariants(o),
            None => FinAbGroup::trivial(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn status(&self) -> Option<&str> {
        self.status.as_deref()
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn point(&self, id: &str) -> Option<usize> {
        self.poset.index_of(id)
    }

    pub fn has_pairing(&self) -> bool {
        self.pairing.is_some()
    }

    /// Serializes back to the file layout.
    pub fn to_file(&self) -> ToyModelFile {
        let id = |x: usize| self.poset.id(x).to_string();
        let terms = |c: &SupportedElement<usize>| -> Vec<CycleTerm> {
            c.iter()
                .map(|(x, v)| CycleTerm {
                    point: id(*x),
                    element: wrap_ints(v),
                })
                .collect()
        };
        ToyModelFile {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            status: self.status.clone(),
            description: self.description.clone(),
            window: [self.window.0, self.window.1],
            points: (0..self.poset.len())
                .map(|x| PointEntry {
                    id: id(x),
                    display: Some(self.poset.label(&x)),
                    dim: self.poset.dim(&x).finite().expect("toy dims are finite"),
                })
                .collect(),
            specializations: self.poset.relations().into_iter().map(|(a, b)| [id(a), id(b)]).collect(),
            groups: self
                .orders
                .iter()
                .map(|((x, p), o)| GroupEntry {
                    point: id(*x),
                    p: *p,
                    orders: wrap_ints(o),
                })
                .collect(),
            boundaries: self
                .boundaries
                .iter()
                .map(|((x, y, p), m)| BoundaryEntry {
                    from: id(*x),
                    to: id(*y),
                    p: *p,
                    matrix: (0..m.rows()).map(|i| wrap_ints(m.row(i))).collect(),
                })
                .collect(),
            pairing: self.pairing.as_ref().map(|p| PairingEntry {
                unit: terms(&p.unit),
                products: p
                    .products
                    .iter()
                    .filter(|((x, y), _)| x <= y)
                    .map(|((x, y), r)| ProductEntry {
                        left: id(*x),
                        right: id(*y),
                        result: terms(r),
                    })
                    .collect(),
            }),
            rational_equivalence: self.rational_equivalence.as_ref().map(|t| {
                t.iter()
                    .map(|(d, cs)| RationalEquivalenceEntry {
                        dim: *d,
                        cycles: cs.iter().map(&terms).collect(),
                    })
                    .collect()
            }),
        }
    }
}

fn unwrap_ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn wrap_ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

fn matrix_from_rows(rows: &[Vec<JsonInt>], nrows: usize, ncols: usize) -> Result<IntMatrix, String> {
    // an empty matrix may be written as [] whatever the shape
    if rows.is_empty() && (nrows == 0 || ncols == 0) {
        return Ok(IntMatrix::zeros(nrows, ncols));
    }
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(format!("matrix must be {nrows}x{ncols}"));
    }
    let data = rows.iter().flat_map(|r| r.iter().map(|x| x.0.clone())).collect();
    Ok(IntMatrix::from_vec(nrows, ncols, data))
}

fn cycle_from_terms(
    terms: &[CycleTerm],
    index: &BTreeMap<&str, usize>,
    field: &str,
    errs: &mut Vec<String>,
) -> SupportedElement<usize> {
    let mut out = SupportedElement::new();
    for t in terms {
        match index.get(t.point.as_str()) {
            Some(&x) => {
                if out.insert(x, unwrap_ints(&t.element)).is_some() {
                    errs.push(format!("{field}: point {:?} listed twice", t.point));
                }
            }
            None => errs.push(format!("{field}: unknown point {:?}", t.point)),
        }
    }
    out
}

impl SpectralSpace for ToyModel {
    type Point = usize;

    fn points_of_dim(&self, l: i64, bound: Option<u32>) -> Result<Vec<usize>, SpaceError> {
        self.poset.points_of_dim(l, bound)
    }

    fn specializes(&self, a: &usize, b: &usize) -> bool {
        self.poset.specializes(a, b)
    }

    fn dim(&self, p: &usize) -> Dim {
        self.poset.dim(p)
    }

    fn label(&self, p: &usize) -> String {
        self.poset.label(p)
    }

    fn dim_range(&self) -> Option<(i64, i64)> {
        self.poset.dim_range()
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn all_points(&self, bound: Option<u32>) -> Result<Vec<usize>, SpaceError> {
        self.poset.all_points(bound)
    }
}

impl KLocalData for ToyModel {
    fn window(&self) -> (i64, i64) {
        self.window
    }

    fn group_at(&self, x: &usize, p: i64) -> Result<FinAbGroup, KError> {
        self.check_window(p)?;
        Ok(self.local_group(*x, p))
    }

    fn boundary(&self, from: &usize, to: &usize, p: i64) -> Result<AbHom, KError> {
        self.check_window(p)?;
        self.check_window(p - 1)?;
        let src = self.local_group(*from, p);
        let dst = self.local_group(*to, p - 1);
        Ok(match self.boundaries.get(&(*from, *to, p)) {
            Some(m) => AbHom::new(src, dst, m.clone())?,
            None => AbHom::zero(src, dst),
        })
    }

    fn rational_equivalence(&self, l: i64) -> Option<Vec<SupportedElement<usize>>> {
        self.rational_equivalence
            .as_ref()
            .map(|t| t.get(&l).cloned().unwrap_or_default())
    }

    fn model_name(&self) -> String {
        format!("toy:{}", self.name)
    }
}

impl PairingData for ToyModel {
    fn unit(&self) -> SupportedElement<usize> {
        self.pairing.as_ref().map(|p| p.unit.clone()).unwrap_or_default()
    }

    fn pair(&self, x: &usize, a: &[BigInt], y: &usize, b: &[BigInt]) -> Result<SupportedElement<usize>, KError> {
        let pairing = self
            .pairing
            .as_ref()
            .ok_or_else(|| KError::Backend(format!("model {} has no pairing", self.name)))?;
        if a.len() != 1 || b.len() != 1 {
            return Err(KError::Backend("pairing needs cyclic K_0".to_string()));
        }
        let k = &a[0] * &b[0];
        Ok(pairing
            .products
            .get(&(*x, *y))
            .map(|r| {
                r.iter()
                    .map(|(z, v)| (*z, v.iter().map(|c| c * &k).collect()))
                    .collect()
            })
            .unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_fixtures_load() {
        for (name, _) in BUNDLED {
            let m = bundled(name).unwrap().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(validate(&m).unwrap().is_clean());
        }
    }

    #[test]
    fn round_trip() {
        for (name, _) in BUNDLED {
            let m = bundled(name).unwrap().unwrap();
            let text = serde_json::to_string(&m.to_file()).unwrap();
            let back = ToyModel::from_json(&text).unwrap();
            assert_eq!(back.to_file(), m.to_file(), "{name}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = ToyModel::from_json("{\n  \"schema_version\": 1,\n  \"name\": 3\n}").unwrap_err();
        match err {
            ToyError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn boundary_off_specialization_rejected() {
        let text = r#"{
            "schema_version": 1, "name": "bad", "window": [-1, 1],
            "points": [{"id": "a", "dim": 0}, {"id": "b", "dim": -1}],
            "groups": [{"point": "a", "p": 1, "orders": [0]}, {"point": "b", "p": 0, "orders": [0]}],
            "boundaries": [{"from": "a", "to": "b", "p": 1, "matrix": [[1]]}]
        }"#;
        let err = ToyModel::from_json(text).unwrap_err();
        assert!(matches!(err, ToyError::Validation(v) if v.iter().any(|m| m.contains("not a specialization"))));
    }

    #[test]
    fn non_bilinear_pairing_rejected() {
        let text = r#"{
            "schema_version": 1, "name": "bad", "window": [-1, 1],
            "points": [{"id": "a", "dim": 0}, {"id": "b", "dim": 0}],
            "groups": [{"point": "a", "p": 0, "orders": [2]}, {"point": "b", "p": 0, "orders": [0]}],
            "pairing": {
                "unit": [{"point": "a", "element": [1]}],
                "products": [{"left": "a", "right": "b", "result": [{"point": "b", "element": [1]}]}]
            }
        }"#;
        let err = ToyModel::from_json(text).unwrap_err();
        assert!(matches!(err, ToyError::Validation(v) if v.iter().any(|m| m.contains("relation"))));
    }

    #[test]
    fn dimensions_must_be_a_dimension_function() {
        let text = r#"{
            "schema_version": 1, "name": "bad", "window": [-1, 1],
            "points": [{"id": "a", "dim": 0}, {"id": "b", "dim": 0}],
            "specializations": [["a", "b"]]
        }"#;
        assert!(matches!(ToyModel::from_json(text), Err(ToyError::Validation(_))));
    }
}
