use egh_wasm_demo::{hilbert, lpp, macaulay};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn hilbert_of_a_small_ideal() {
    let v = parse(hilbert(
        r#"{"p":101,"n":3,"vars":["x","y","z"],"regular_sequence":["x^2","y^2","z^2"],"extras":["x*y"]}"#,
    ));
    assert_eq!(v["hilbert_function"], serde_json::json!([1, 3, 2, 0, 0]));
    assert_eq!(v["lpp"]["status"], "matched");
    assert!(parse(hilbert("{}"))["error"].is_string());
}

#[test]
fn lpp_builder() {
    let v = parse(lpp(5, "", 2, 2));
    assert_eq!(v["piece_dims"][3], 30);
    assert_eq!(parse(lpp(3, "2,3,3", 1, 2))["hilbert_function"], serde_json::json!([1, 3, 4, 3, 1, 0, 0]));
    assert!(parse(lpp(3, "2,x", 1, 2))["error"].is_string());
}

#[test]
fn macaulay_explorer() {
    let v = parse(macaulay(13, 3));
    // 13 = C(5,3) + C(3,2)
    assert_eq!(v["representation"], serde_json::json!([[5, 3], [3, 2]]));
    assert_eq!(v["bound"], 19);
    assert!(parse(macaulay(1, 0))["error"].is_string());
}
