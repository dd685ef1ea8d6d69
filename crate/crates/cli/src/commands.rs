use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use ttchow_core::gersten::{
    chow_group, gersten_rectangle, raw_cohomology, rectangle_verdict, BidegreeCheck, GerstenOutcome, GroupReport,
    RelationSource,
};
use ttchow_core::intersect::{comparison_sign, product as intersect, ProductOptions};
use ttchow_core::json_int::JsonInt;
use ttchow_core::klocal::SupportedElement;
use ttchow_core::FinAbGroup;

use crate::backend::{parse_class, Backend};
use crate::{CliError, Header, Output};

fn output<T: Serialize>(report: &T, text: String) -> Result<Output, CliError> {
    let json = serde_json::to_value(report).map_err(|e| CliError::Other(e.to_string()))?;
    Ok(Output { json, text })
}

fn heading(h: &Header) -> String {
    format!("model: {}\nseed: {}\n", h.model, h.seed)
}

/// Requested codimensions; all of the model's range when none is named.
fn codims<B: Backend>(b: &B, codim: Option<i64>) -> Vec<i64> {
    match (codim, b.dim_range()) {
        (Some(k), _) => vec![k],
        (None, Some((lo, hi))) => (-hi..=-lo).collect(),
        (None, None) => Vec::new(),
    }
}

fn in_range<B: Backend>(b: &B, k: i64) -> bool {
    b.dim_range().is_some_and(|(lo, hi)| lo <= -k && -k <= hi)
}

#[derive(Serialize)]
struct ChowEntry {
    codim: i64,
    cycles: GroupReport,
    chow: GroupReport,
    cap_chow: GroupReport,
    source: Option<RelationSource>,
    certificate: Option<&'static str>,
}

#[derive(Serialize)]
struct ChowReport {
    #[serde(flatten)]
    header: Header,
    results: Vec<ChowEntry>,
    total_cap_chow: Option<GroupReport>,
}

/// `Some("degree map")` when the degree is a surjection onto `Z` that kills
/// every relation, which certifies `CH ≅ Z` from both sides.
fn degree_certificate<B: Backend>(b: &B, k: i64, ch: &ttchow_core::gersten::ChowGroup<B::Point>) -> Option<&'static str> {
    if ch.chow.invariants() != FinAbGroup::free(1).invariants() {
        return None;
    }
    let n = ch.cycles.rank();
    let unit = |i: usize| {
        let mut v = vec![BigInt::from(0); n];
        v[i] = BigInt::one();
        ch.cycles.unflatten(&v)
    };
    let kills = ch
        .relations
        .generators()
        .columns()
        .iter()
        .all(|g| b.degree(k, &ch.cycles.unflatten(g)).is_some_and(|d| d == BigInt::from(0)));
    let onto = (0..n).any(|i| b.degree(k, &unit(i)).is_some_and(|d| d.abs().is_one()));
    (kills && onto).then_some("degree map")
}

pub fn chow<B: Backend>(b: &B, header: Header, codim: Option<i64>, all: bool) -> Result<Output, CliError> {
    let mut text = heading(&header);
    let mut results = Vec::new();
    let mut total = FinAbGroup::trivial();
    for k in codims(b, codim) {
        let entry = if in_range(b, k) {
            let ch = chow_group(b, -k)?;
            ChowEntry {
                codim: k,
                cycles: (&ch.cycles.group).into(),
                chow: (&ch.chow).into(),
                cap_chow: (&ch.cap_chow).into(),
                source: Some(ch.source),
                certificate: degree_certificate(b, k, &ch),
            }
        } else {
            let zero = GroupReport::from(&FinAbGroup::trivial());
            ChowEntry {
                codim: k,
                cycles: zero.clone(),
                chow: zero.clone(),
                cap_chow: zero,
                source: None,
                certificate: None,
            }
        };
        let cert = entry.certificate.map(|c| format!(" ({c})")).unwrap_or_default();
        let _ = writeln!(text, "CH^{k} ≅ {}{cert}", entry.chow.display);
        let source = match entry.source {
            Some(RelationSource::Explicit) => "explicit relations",
            Some(RelationSource::ImageVerified) => "relations im δ₁, Gersten verified",
            Some(RelationSource::ImageAsserted) => "relations im δ₁, Gersten asserted",
            None => "empty stratum",
        };
        let _ = writeln!(
            text,
            "  cycles {}, ∩CH^{k} ≅ {}, {source}",
            entry.cycles.display, entry.cap_chow.display
        );
        if in_range(b, k) {
            total = total.direct_sum(&chow_group(b, -k)?.cap_chow);
        }
        results.push(entry);
    }
    let total_cap_chow = (codim.is_none() || all).then(|| GroupReport::from(&total));
    if let Some(t) = &total_cap_chow {
        let _ = writeln!(text, "⊕ ∩CH ≅ {}", t.display);
    }
    output(
        &ChowReport {
            header,
            results,
            total_cap_chow,
        },
        text,
    )
}

#[derive(Serialize)]
struct BlochEntry {
    p: i64,
    verdict: &'static str,
    precondition: GerstenOutcome,
    rectangle: Vec<BidegreeCheck>,
    cohomology: Option<GroupReport>,
    cap_chow: Option<GroupReport>,
}

#[derive(Serialize)]
struct BlochReport {
    #[serde(flatten)]
    header: Header,
    results: Vec<BlochEntry>,
    pass: bool,
    exit_code: u8,
}

pub fn verify_bloch<B: Backend>(b: &B, header: Header, codim: Option<i64>, _all: bool) -> Result<Output, CliError> {
    let mut text = heading(&header);
    let mut results = Vec::new();
    let mut exit_code = 0;
    for p in codims(b, codim) {
        if p < 0 {
            return Err(CliError::Usage(format!("codimension must be non-negative, got {p}")));
        }
        let rectangle = gersten_rectangle(b, p)?;
        let precondition = rectangle_verdict(&rectangle);
        let mut entry = BlochEntry {
            p,
            verdict: "PASS",
            precondition: precondition.clone(),
            rectangle,
            cohomology: None,
            cap_chow: None,
        };
        match &precondition {
            GerstenOutcome::Holds => {
                let h = raw_cohomology(b, p, p as usize)?;
                let cap = if in_range(b, p) {
                    chow_group(b, -p)?.cap_chow
                } else {
                    FinAbGroup::trivial()
                };
                if h.invariants() != cap.invariants() {
                    entry.verdict = "FAIL";
                    exit_code = exit_code.max(1);
                }
                let _ = writeln!(text, "p = {p}: {}  H^{p} ≅ {h}, ∩CH^{p} ≅ {cap}", entry.verdict);
                entry.cohomology = Some((&h).into());
                entry.cap_chow = Some((&cap).into());
            }
            GerstenOutcome::Fails(why) => {
                entry.verdict = "PRECONDITION FAIL";
                exit_code = 3;
                let _ = writeln!(text, "p = {p}: PRECONDITION FAIL  {why}");
            }
            GerstenOutcome::Unverifiable(why) => {
                // only an explicit request turns this into a failure
                entry.verdict = "UNVERIFIABLE";
                if codim.is_some() {
                    exit_code = 3;
                }
                let _ = writeln!(text, "p = {p}: UNVERIFIABLE  {why}");
            }
        }
        results.push(entry);
    }
    if results.is_empty() {
        let _ = writeln!(text, "no codimensions to check: PASS");
    }
    output(
        &BlochReport {
            header,
            pass: exit_code == 0,
            results,
            exit_code,
        },
        text,
    )
}

#[derive(Serialize)]
struct Term {
    point: String,
    coefficient: Vec<JsonInt>,
}

#[derive(Serialize)]
struct Comparison {
    /// `(-1)^{pq}`
    sign: i64,
    signed_degree: JsonInt,
    /// Product of the factor degrees.
    expected_degree: Option<JsonInt>,
}

#[derive(Serialize)]
struct ProductReport {
    #[serde(flatten)]
    header: Header,
    left: String,
    right: String,
    left_codim: i64,
    right_codim: i64,
    codim: i64,
    moved: bool,
    attempts: usize,
    right_used: Vec<Term>,
    result: Vec<Term>,
    degree: Option<JsonInt>,
    comparison: Option<Comparison>,
}

fn terms<B: Backend>(b: &B, z: &SupportedElement<B::Point>) -> Vec<Term> {
    z.iter()
        .map(|(x, c)| Term {
            point: b.label(x),
            coefficient: c.iter().cloned().map(JsonInt).collect(),
        })
        .collect()
}

fn show(terms: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let (neg, body) = match t.coefficient.as_slice() {
            [c] if c.0.abs().is_one() => (c.0.is_negative(), format!("[{}]", t.point)),
            [c] => (c.0.is_negative(), format!("{}[{}]", c.0.abs(), t.point)),
            cs => {
                let cs: Vec<String> = cs.iter().map(|c| c.0.to_string()).collect();
                (false, format!("({})[{}]", cs.join(", "), t.point))
            }
        };
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn product<B: Backend>(
    b: &B,
    header: Header,
    left: &str,
    right: &str,
    allow_move: bool,
    seed: u64,
) -> Result<Output, CliError> {
    let l = parse_class(b, left)?;
    let r = parse_class(b, right)?;
    let mover = b.mover();
    let opts = ProductOptions {
        seed,
        allow_move,
        ..ProductOptions::default()
    };
    let rep = intersect(b, &l, &r, Some(&*mover), opts)?;
    let codim = rep.result.codim;
    let degree = b.degree(codim, &rep.result.rep);
    let comparison = degree.as_ref().map(|d| {
        let sign = comparison_sign(l.codim, r.codim);
        let expected = if in_range(b, codim) {
            b.degree(l.codim, &l.rep)
                .zip(b.degree(r.codim, &r.rep))
                .map(|(a, c)| JsonInt(a * c))
        } else {
            Some(JsonInt(BigInt::from(0)))
        };
        Comparison {
            sign,
            signed_degree: JsonInt(d * sign),
            expected_degree: expected,
        }
    });
    let report = ProductReport {
        left: left.to_string(),
        right: right.to_string(),
        left_codim: l.codim,
        right_codim: r.codim,
        codim,
        moved: rep.moved,
        attempts: rep.attempts,
        right_used: terms(b, &rep.right_used),
        result: terms(b, &rep.result.rep),
        degree: degree.clone().map(JsonInt),
        comparison,
        header,
    };
    let mut text = heading(&report.header);
    let _ = writeln!(text, "{left} · {right} in codim {codim}");
    let _ = writeln!(text, "  = {}", show(&report.result));
    if let Some(c) = &report.comparison {
        let _ = write!(text, "degree {}", report.degree.as_ref().map(|d| d.0.clone()).unwrap_or_default());
        if let Some(e) = &c.expected_degree {
            let _ = write!(text, " (expected {})", e.0);
        }
        let _ = writeln!(text, ", sign (-1)^pq = {}, signed degree {}", c.sign, c.signed_degree.0);
    }
    if report.moved {
        let _ = writeln!(
            text,
            "moved right factor to {} after {} attempt(s)",
            show(&report.right_used),
            report.attempts
        );
    }
    output(&report, text)
}
