use compound_kit_wasm::{compound_text, decomposability_json, inverse_json};
use serde_json::Value;

const A: &str = "2,1,0\n0,3,1\n1,0,4\n";

#[test]
fn compound_then_inverse() {
    let m = compound_text(A, 2).unwrap();
    assert_eq!(m.lines().count(), 3);
    let out: Value = serde_json::from_str(&inverse_json(&m, 3, 3, 2, 7).unwrap()).unwrap();
    assert_eq!(out["outcome"], "unique");
    assert!(out["residual"].as_f64().unwrap() < 1e-10);
    let a: Vec<Vec<f64>> = serde_json::from_value(out["a"].clone()).unwrap();
    let s = a[0][0].signum();
    let want = [[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 0.0, 4.0]];
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            assert!((s * a[i][j] - w).abs() < 1e-8);
        }
    }
}

#[test]
fn rank_one_input_returns_family() {
    // e1^e2 in R^3, a single nonzero minor
    let out: Value = serde_json::from_str(&inverse_json("1,0,0\n0,0,0\n0,0,0\n", 3, 3, 2, 0).unwrap()).unwrap();
    assert_eq!(out["outcome"], "rank_one_family");
    assert_eq!(out["family"]["sigma"].as_array().unwrap().len(), 2);
}

#[test]
fn decomposability() {
    let yes: Value = serde_json::from_str(&decomposability_json("1,0,0,0,0,0", 4, 2).unwrap()).unwrap();
    assert_eq!(yes["decomposable"], true);
    assert_eq!(yes["kernel_dim"], 2);
    // e1^e2 + e3^e4
    let no: Value = serde_json::from_str(&decomposability_json("1,0,0,0,0,1", 4, 2).unwrap()).unwrap();
    assert_eq!(no["decomposable"], false);
}

#[test]
fn errors_are_tagged_strings() {
    let e = compound_text("1,2\n3\n", 1).unwrap_err();
    assert!(e.starts_with("io:"), "{e}");
    let e = decomposability_json("1,0,0", 4, 2).unwrap_err();
    assert!(e.starts_with("invalid-argument:"), "{e}");
}
