//! Report assembly and rendering (JSON and aligned text).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::absic;
use crate::atlas::{atlas_hash, StratumAtlas};
use crate::error::{Error, Result};
use crate::hodge::{CohomologyTable, MixedGraded};
use crate::plus::{self, ComparisonReport, CriteriaReport, DichotomyResult, Horn, InjectivityMethod};
use crate::wss;

pub const SCHEMA: u64 = 1;
pub const ENGINE: &str = "absix";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    Cohomology,
    Absic,
    Boundary,
    Ihplus,
    Criteria,
    All,
}

impl What {
    pub fn name(self) -> &'static str {
        match self {
            What::Cohomology => "cohomology",
            What::Absic => "absic",
            What::Boundary => "boundary",
            What::Ihplus => "ihplus",
            What::Criteria => "criteria",
            What::All => "all",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [What::Cohomology, What::Absic, What::Boundary, What::Ihplus, What::Criteria, What::All]
            .into_iter()
            .find(|w| w.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub atlas_name: String,
    pub atlas_hash: String,
    /// Tables in emission order.
    pub tables: Vec<(String, CohomologyTable)>,
    pub criteria: Option<CriteriaReport>,
    pub comparison: Option<ComparisonReport>,
    pub dichotomy: Option<DichotomyResult>,
    pub intersection_rank: Option<usize>,
}

fn restrict(t: &CohomologyTable, degree: Option<i64>) -> CohomologyTable {
    match degree {
        None => t.clone(),
        Some(n) => {
            let mut r = CohomologyTable::new(t.kind());
            r.set(n, t.get(n));
            r
        }
    }
}

/// Skips optional sections whose preconditions do not hold.
fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::PreconditionViolated(_)) | Err(Error::MissingSelfIntersections) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn build_report(a: &StratumAtlas, what: What, degree: Option<i64>) -> Result<Report> {
    a.ensure_valid()?;
    let all = what == What::All;
    let mut tables = Vec::new();
    if all || what == What::Cohomology {
        let h = wss::grw(a)?;
        tables.push(("cohomology".to_string(), restrict(&h, degree)));
        tables.push(("compactSupport".to_string(), restrict(&wss::dualize(a, &h), degree)));
    }
    if all || what == What::Absic {
        let r = absic::absolute_ic(a)?;
        tables.push(("absoluteIC".to_string(), restrict(&r.table, degree)));
        tables.push(("interior".to_string(), restrict(&r.interior_table(), degree)));
    }
    if all || what == What::Boundary {
        tables.push(("boundary".to_string(), restrict(&absic::boundary_cohomology(a)?, degree)));
    }
    if all || what == What::Ihplus {
        let t = if all { optional(plus::ih_one_point(a))? } else { Some(plus::ih_one_point(a)?) };
        if let Some(t) = t {
            tables.push(("onePointIC".to_string(), restrict(&t, degree)));
        }
    }
    let (mut criteria, mut comparison, mut dichotomy, mut intersection_rank) = (None, None, None, None);
    if all || what == What::Criteria {
        let c = plus::weight_criteria(a)?;
        if !c.verdict {
            dichotomy = optional(plus::plus_dichotomy(a))?;
        }
        criteria = Some(c);
        comparison = optional(plus::compare_candidates(a))?;
        intersection_rank = optional(plus::intersection_matrix_rank(a))?;
    }
    Ok(Report {
        atlas_name: a.name.clone(),
        atlas_hash: atlas_hash(a),
        tables,
        criteria,
        comparison,
        dichotomy,
        intersection_rank,
    })
}

pub fn table_json(t: &CohomologyTable) -> Value {
    let degrees: Vec<Value> = t
        .degrees()
        .iter()
        .map(|(&n, mg)| json!({ "degree": n, "weights": graded_json(mg) }))
        .collect();
    json!({ "kind": t.kind().name(), "degrees": degrees })
}

fn graded_json(mg: &MixedGraded) -> Vec<Value> {
    mg.pieces()
        .iter()
        .map(|(&w, p)| {
            let hodge: Vec<Value> =
                p.hodge_numbers().iter().map(|(&(pp, qq), &d)| json!({ "p": pp, "q": qq, "dim": d })).collect();
            json!({ "weight": w, "hodge": hodge })
        })
        .collect()
}

fn method_name(m: InjectivityMethod) -> &'static str {
    match m {
        InjectivityMethod::Lefschetz => "lefschetz",
        InjectivityMethod::ViaWeights => "via-weights",
    }
}

fn horn_name(h: Horn) -> &'static str {
    match h {
        Horn::DimensionJump => "dimension-jump",
        Horn::NoCompatibleIdentification => "no-compatible-identification",
    }
}

pub fn criteria_json(c: &CriteriaReport) -> Value {
    let checks = |v: &[plus::DegreeCheck]| -> Vec<Value> {
        v.iter().map(|c| json!({ "degree": c.degree, "holds": c.holds, "weights": c.weights })).collect()
    };
    let inj: Vec<Value> = c
        .injectivity_range
        .iter()
        .map(|i| json!({ "degree": i.degree, "holds": i.holds, "method": method_name(i.method) }))
        .collect();
    json!({
        "verdict": c.verdict,
        "cond2": checks(&c.cond2),
        "cond3": checks(&c.cond3),
        "cond6": c.cond6,
        "cond7": c.cond7,
        "injectivityRange": inj,
    })
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut tables = Map::new();
        for (name, t) in &self.tables {
            tables.insert(name.clone(), table_json(t));
        }
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA));
        root.insert("atlasName".into(), json!(self.atlas_name));
        root.insert("tables".into(), Value::Object(tables));
        if let Some(c) = &self.criteria {
            root.insert("criteria".into(), criteria_json(c));
        }
        if let Some(c) = &self.comparison {
            root.insert(
                "comparison".into(),
                json!({
                    "hStar": table_json(&c.h_star),
                    "ihPlus": table_json(&c.ih_plus),
                    "hY": table_json(&c.h_y),
                    "matchesPlus": c.matches_plus,
                    "matchesY": c.matches_y,
                }),
            );
        }
        if let Some(d) = &self.dichotomy {
            let degrees: Vec<Value> = d
                .degrees
                .iter()
                .map(|&(n, p, s)| json!({ "degree": n, "onePointIC": p, "absoluteIC": s }))
                .collect();
            root.insert(
                "dichotomy".into(),
                json!({
                    "horn": horn_name(d.horn),
                    "degrees": degrees,
                    "mismatchDegrees": d.mismatch_degrees,
                    "kernelU": d.ker_u,
                    "cokernelU": d.coker_u,
                    "connectingRank": d.connecting_rank,
                }),
            );
        }
        if let Some(r) = self.intersection_rank {
            root.insert("intersectionMatrixRank".into(), json!(r));
        }
        root.insert(
            "provenance".into(),
            json!({ "engine": ENGINE, "version": crate::VERSION, "atlasHash": self.atlas_hash }),
        );
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "atlas: {}", self.atlas_name);
        for (name, t) in &self.tables {
            out.push('\n');
            out.push_str(&render_table(name, t));
        }
        if let Some(c) = &self.criteria {
            out.push_str("\n== criteria ==\n");
            let _ = writeln!(out, "verdict: {}", c.verdict);
            for (label, checks) in [("cond2", &c.cond2), ("cond3", &c.cond3)] {
                for ch in checks {
                    let ws: Vec<String> = ch.weights.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "{label} degree {}: {} (weights [{}])",
                        ch.degree,
                        if ch.holds { "holds" } else { "fails" },
                        ws.join(",")
                    );
                }
            }
            let _ = writeln!(out, "cond6: {}", c.cond6);
            let _ = writeln!(out, "cond7: {}", c.cond7);
            for i in &c.injectivity_range {
                let _ = writeln!(out, "injectivity degree {}: {} ({})", i.degree, i.holds, method_name(i.method));
            }
            let failing: Vec<String> = c.failing_degrees().iter().map(|n| n.to_string()).collect();
            if !failing.is_empty() {
                let _ = writeln!(out, "failing degrees: {}", failing.join(","));
            }
        }
        if let Some(c) = &self.comparison {
            let _ = writeln!(out, "matchesPlus: {}", c.matches_plus);
            let _ = writeln!(out, "matchesY: {}", c.matches_y);
        }
        if let Some(d) = &self.dichotomy {
            let _ = writeln!(out, "dichotomy: {}", horn_name(d.horn));
            for &(n, p, s) in &d.degrees {
                let _ = writeln!(out, "  degree {n}: onePointIC {p}, absoluteIC {s}");
            }
            if let Some(r) = d.connecting_rank {
                let _ = writeln!(out, "  connecting rank: {r}");
            }
        }
        if let Some(r) = self.intersection_rank {
            let _ = writeln!(out, "intersection matrix rank: {r}");
        }
        let _ = writeln!(out, "\n{} {} {}", ENGINE, crate::VERSION, self.atlas_hash);
        out
    }
}

/// Cell text: `(p,q):dim` entries joined by `+`, or `.` when empty.
fn cell(mg: &MixedGraded, w: i64) -> String {
    match mg.pieces().get(&w) {
        None => ".".into(),
        Some(p) => p
            .hodge_numbers()
            .iter()
            .map(|(&(pp, qq), d)| format!("({pp},{qq}):{d}"))
            .collect::<Vec<_>>()
            .join("+"),
    }
}

pub fn render_table(name: &str, t: &CohomologyTable) -> String {
    let weights: BTreeSet<i64> = t.degrees().values().flat_map(|mg| mg.weights()).collect();
    let mut rows: Vec<Vec<String>> = vec![std::iter::once("n".to_string())
        .chain(weights.iter().map(|w| format!("w={w}")))
        .collect()];
    for (&n, mg) in t.degrees() {
        rows.push(std::iter::once(n.to_string()).chain(weights.iter().map(|&w| cell(mg, w))).collect());
    }
    let ncols = rows[0].len();
    let widths: Vec<usize> = (0..ncols).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = format!("== {name} ({}) ==\n", t.kind().name());
    if t.degrees().is_empty() {
        out.push_str("(zero)\n");
        return out;
    }
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Table name → degree → weight → (p,q) → dim.
pub type TableNumbers = BTreeMap<String, BTreeMap<i64, BTreeMap<i64, BTreeMap<(i64, i64), usize>>>>;

/// Parses the numbers back out of rendered tables.
pub fn parse_text_tables(text: &str) -> TableNumbers {
    let mut out = BTreeMap::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        let Some(rest) = line.strip_prefix("== ") else { continue };
        let Some(name) = rest.split(" (").next().filter(|_| rest.contains(" (")) else { continue };
        let mut table = BTreeMap::new();
        let Some(header) = lines.next() else { break };
        if header == "(zero)" {
            out.insert(name.to_string(), table);
            continue;
        }
        let weights: Vec<i64> =
            header.split_whitespace().skip(1).filter_map(|h| h.strip_prefix("w=")?.parse().ok()).collect();
        while let Some(row) = lines.peek() {
            let cells: Vec<&str> = row.split_whitespace().collect();
            let Some(n) = cells.first().and_then(|c| c.parse::<i64>().ok()) else { break };
            let mut per_weight = BTreeMap::new();
            for (c, &w) in cells[1..].iter().zip(&weights) {
                if *c == "." {
                    continue;
                }
                let mut hodge = BTreeMap::new();
                for entry in c.split('+') {
                    let (slot, dim) = entry.split_once(':').expect("cell entry");
                    let (p, q) = slot.trim_matches(|ch| ch == '(' || ch == ')').split_once(',').expect("slot");
                    hodge.insert((p.parse().unwrap(), q.parse().unwrap()), dim.parse().unwrap());
                }
                per_weight.insert(w, hodge);
            }
            table.insert(n, per_weight);
            lines.next();
        }
        out.insert(name.to_string(), table);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{builtin_from_spec, catalogue};

    fn json_numbers(v: &Value) -> TableNumbers {
        let mut out = BTreeMap::new();
        for (name, t) in v["tables"].as_object().unwrap() {
            let mut table = BTreeMap::new();
            for deg in t["degrees"].as_array().unwrap() {
                let mut per_weight = BTreeMap::new();
                for w in deg["weights"].as_array().unwrap() {
                    let hodge = w["hodge"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|h| ((h["p"].as_i64().unwrap(), h["q"].as_i64().unwrap()), h["dim"].as_u64().unwrap() as usize))
                        .collect();
                    per_weight.insert(w["weight"].as_i64().unwrap(), hodge);
                }
                table.insert(deg["degree"].as_i64().unwrap(), per_weight);
            }
            out.insert(name.clone(), table);
        }
        out
    }

    #[test]
    fn text_and_json_agree() {
        for entry in catalogue() {
            let a = builtin_from_spec(entry.name).unwrap();
            let r = build_report(&a, What::All, None).unwrap();
            assert_eq!(parse_text_tables(&r.to_text()), json_numbers(&r.to_json()), "{}", entry.name);
        }
    }

    #[test]
    fn schema_and_provenance() {
        let a = builtin_from_spec("a1").unwrap();
        let v = build_report(&a, What::Absic, None).unwrap().to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["atlasName"], "a1");
        assert_eq!(v["provenance"]["atlasHash"].as_str().unwrap().len(), 64);
        assert_eq!(v["tables"]["absoluteIC"]["kind"], "absoluteIC");
    }

    #[test]
    fn degree_filter() {
        let a = builtin_from_spec("an:n=2").unwrap();
        let r = build_report(&a, What::Absic, Some(4)).unwrap();
        let t = &r.tables[0].1;
        assert_eq!(t.degrees().len(), 1);
        assert_eq!(t.dim(4), 1);
    }

    #[test]
    fn deterministic_output() {
        let a = builtin_from_spec("gm_times_a1").unwrap();
        let x = build_report(&a, What::All, None).unwrap();
        let y = build_report(&a, What::All, None).unwrap();
        assert_eq!(x.to_json_string(), y.to_json_string());
        assert_eq!(x.to_text(), y.to_text());
    }

    #[test]
    fn what_names_round_trip() {
        for w in [What::Cohomology, What::Absic, What::Boundary, What::Ihplus, What::Criteria, What::All] {
            assert_eq!(What::from_name(w.name()), Some(w));
        }
    }
}
