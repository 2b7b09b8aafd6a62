//! JSON and text renderings of library values. Every list is emitted in a
//! fixed order so that reruns are byte-identical.

use gentle_core::complexes::describe;
use gentle_core::exceptional::ExceptionalCycle;
use gentle_core::hom::GradedHomProfile;
use gentle_core::prelude::*;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

pub fn document(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn int_map<V: Into<Value> + Clone>(m: &BTreeMap<i32, V>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), v.clone().into())).collect())
}

pub fn profile(p: &GradedHomProfile) -> Value {
    int_map(&p.nonzero())
}

pub fn profile_text(p: &GradedHomProfile) -> String {
    let parts: Vec<String> = p.nonzero().iter().map(|(i, d)| format!("{i}:{d}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// `{terms: {deg: dims}, diff: {deg: matrix}}`, one matrix per vertex.
pub fn complex(c: &RepComplex) -> Value {
    let (terms, diffs) = describe(c);
    let terms: Map<String, Value> = terms.iter().map(|(k, d)| (k.to_string(), json!(d))).collect();
    let diff: Map<String, Value> = diffs
        .iter()
        .map(|(k, mats)| {
            let blocks: Vec<Value> = mats
                .iter()
                .map(|m| {
                    let rows: Vec<Value> =
                        (0..m.rows()).map(|r| Value::Array((0..m.cols()).map(|c| json!(m.get(r, c).to_string())).collect())).collect();
                    Value::Array(rows)
                })
                .collect();
            (k.to_string(), Value::Array(blocks))
        })
        .collect();
    json!({ "terms": terms, "diff": diff })
}

pub fn complex_text(alg: &GentleAlgebra, c: &RepComplex) -> String {
    let mut out = String::new();
    if let (Some(pc), Some((lo, hi))) = (&c.proj, c.support()) {
        for k in lo..=hi {
            let parts: Vec<String> = pc.summands(k).iter().map(|&v| format!("P({})", alg.vertex_name(v))).collect();
            out.push_str(&format!("  degree {k}: {}\n", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }));
        }
        return out;
    }
    let (terms, _) = describe(c);
    for (k, dims) in &terms {
        let parts: Vec<String> = dims.iter().enumerate().filter(|(_, d)| **d > 0).map(|(v, d)| format!("{}^{d}", alg.vertex_name(v))).collect();
        out.push_str(&format!("  degree {k}: dims {}\n", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }));
    }
    out
}

pub fn cycle(alg: &GentleAlgebra, c: &ExceptionalCycle) -> Value {
    let entries: Vec<Value> = c.entries.iter().map(|e| json!({ "word": e.object.expr(alg), "shift": e.shift })).collect();
    json!({
        "n": c.len(),
        "entries": entries,
        "shifts": c.shifts,
        "certificate": { "E1": c.certificate.e1, "E2": c.certificate.e2, "E3": c.certificate.e3 },
        "calabi_yau": c.calabi_yau,
    })
}

pub fn cycle_text(alg: &GentleAlgebra, c: &ExceptionalCycle) -> String {
    let words: Vec<String> = c.entries.iter().map(|e| format!("({})[{}]", e.object.expr(alg), e.shift)).collect();
    let cert = &c.certificate;
    let mut line = format!("n = {}: {}  shifts {:?}  E1 {} E2 {} E3 {}", c.len(), words.join(" -> "), c.shifts, cert.e1, cert.e2, cert.e3);
    if let Some(d) = c.calabi_yau {
        line.push_str(&format!("  {d}-Calabi-Yau"));
    }
    line.push('\n');
    line
}
