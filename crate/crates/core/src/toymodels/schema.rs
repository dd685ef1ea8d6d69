//! On-disk layout of a toy model. Version 1.

use serde::{Deserialize, Serialize};

use crate::json_int::JsonInt;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyModelFile {
    pub schema_version: u32,
    pub name: String,
    /// Free-form provenance label, e.g. `EXPECTED` for data that is only
    /// conjecturally correct.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Inclusive range of K-degrees with tabulated groups.
    pub window: [i64; 2],
    pub points: Vec<PointEntry>,
    /// Pairs `[general, special]`; the order is their transitive closure.
    #[serde(default)]
    pub specializations: Vec<[String; 2]>,
    /// Groups not listed but inside the window are zero.
    #[serde(default)]
    pub groups: Vec<GroupEntry>,
    #[serde(default)]
    pub boundaries: Vec<BoundaryEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_equivalence: Option<Vec<RationalEquivalenceEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
    pub dim: i64,
}

/// One generator per entry of `orders`; `0` marks a free generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub point: String,
    pub p: i64,
    pub orders: Vec<JsonInt>,
}

/// `K_p(from) -> K_{p-1}(to)`; one matrix row per target generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryEntry {
    pub from: String,
    pub to: String,
    pub p: i64,
    pub matrix: Vec<Vec<JsonInt>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleTerm {
    pub point: String,
    /// Coordinates on the generators of `K_0` at the point.
    pub element: Vec<JsonInt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub unit: Vec<CycleTerm>,
    /// Products of the `K_0` generators at two points. Unlisted proper
    /// pairs multiply to zero; each pair may be listed in either order.
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<CycleTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalEquivalenceEntry {
    pub dim: i64,
    pub cycles: Vec<Vec<CycleTerm>>,
}
