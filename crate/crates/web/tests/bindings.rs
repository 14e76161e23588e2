use filiform_web::{build_family, compare, invariants};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn build_renders_file() {
    let v = parse(build_family("g6", "1,1,0", 2));
    assert!(v["file"].as_str().unwrap().contains("5 6 4 1"));
    assert_eq!(v["label"], "g6[1,1,0]@F_2");
}

#[test]
fn invariants_of_nonmodel() {
    let v = parse(invariants("dim5", "", 3));
    assert_eq!(v["d"][3], 2);
}

#[test]
fn compare_reports_witness_or_reason() {
    let v = parse(compare("g6", "0 1 1", "g6", "0 1 0", 3));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 6);
    let v = parse(compare("model", "5", "dim5", "", 3));
    assert_eq!(v["isomorphic"], false);
    assert!(v["reason"].as_str().unwrap().contains("d_4: 4 vs 2"));
}

#[test]
fn errors_are_json() {
    let v = parse(build_family("g7type2", "1", 3));
    assert!(v["error"].as_str().unwrap().contains("characteristic"));
    let v = parse(compare("g6", "x", "g6", "0,0,0", 3));
    assert!(v["error"].is_string());
}
