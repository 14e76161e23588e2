//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every entry point takes plain strings and numbers and returns a JSON
//! string; errors come back as `{"error": "..."}`.

use filiform::io::render_algebra;
use filiform::morphism::{decide_isomorphism, Certificate, SearchOptions, Verdict};
use filiform::{build, fingerprint, Family, Fp, Result, StructureTable};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn parse_params(params: &str) -> Result<Vec<i64>> {
    params
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| filiform::Error::Parse {
                line: 1,
                reason: format!("bad parameter `{s}`"),
            })
        })
        .collect()
}

fn table(tag: &str, params: &str, prime: u32) -> Result<StructureTable<Fp>> {
    let family = Family::from_tag(tag, &parse_params(params)?, prime)?;
    build(&Fp::new(prime)?, &family)
}

/// The algebra file of a family member together with its brackets.
#[wasm_bindgen]
pub fn build_family(tag: &str, params: &str, prime: u32) -> String {
    respond(table(tag, params, prime).map(|g| {
        let brackets: Vec<String> = g
            .nonzero_constants()
            .iter()
            .map(|(i, j, k, c)| format!("[e{i},e{j}] += {c} e{k}"))
            .collect();
        json!({
            "label": g.label(),
            "file": render_algebra(&g),
            "brackets": brackets,
        })
    }))
}

/// The invariant fingerprint of a family member.
#[wasm_bindgen]
pub fn invariants(tag: &str, params: &str, prime: u32) -> String {
    respond(table(tag, params, prime).and_then(|g| {
        let f = fingerprint(&g)?;
        Ok(json!({
            "label": g.label(),
            "type": f.type_seq,
            "d": f.d0,
            "d_quotient_1": f.d1,
            "d_quotient_2": f.d2,
            "z1": f.z1,
            "z2": f.z2,
        }))
    }))
}

/// Decide whether two family members over the same prime are isomorphic.
#[wasm_bindgen]
pub fn compare(tag_a: &str, params_a: &str, tag_b: &str, params_b: &str, prime: u32) -> String {
    respond((|| {
        let a = table(tag_a, params_a, prime)?;
        let b = table(tag_b, params_b, prime)?;
        Ok(match decide_isomorphism(&a, &b, &SearchOptions::default())? {
            Verdict::Isomorphic(w) => {
                let m = &w.matrix;
                let rows: Vec<Vec<u32>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
                json!({ "isomorphic": true, "witness": rows })
            }
            Verdict::NotIsomorphic(Certificate::FingerprintMismatch(d)) => {
                json!({ "isomorphic": false, "reason": format!("invariants differ: {d}") })
            }
            Verdict::NotIsomorphic(Certificate::ExhaustedSearch { nodes }) => {
                json!({ "isomorphic": false, "reason": format!("exhaustive search, {nodes} nodes") })
            }
            other => json!({ "error": format!("unexpected verdict {other:?}") }),
        })
    })())
}
