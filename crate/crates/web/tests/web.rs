use cubic7_web::*;
use serde_json::Value;

#[test]
fn plane() {
    let v: Value = serde_json::from_str(&plane_json("0,2,0,2,1").unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["a"] == "1" && r["b"] == "1" && r["label"] == "A2 orbit"));
    assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
    assert!(plane_json("0,1").is_err());
}

#[test]
fn classify() {
    let v: Value = serde_json::from_str(&classify_json("f21", "0,1").unwrap()).unwrap();
    assert_eq!(v["oracle"], "stable");
    assert_eq!(v["oracle"], v["closed_form"]);
    let v: Value = serde_json::from_str(&classify_json("c7", "").unwrap()).unwrap();
    assert_eq!(v["oracle"], "unstable");
    assert!(classify_json("c9", "0").is_err());
    assert!(classify_json("f21", "7").is_err());
}

#[test]
fn singular() {
    let v: Value = serde_json::from_str(&singular_json("1", "1").unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 7);
    assert_eq!(v["points"][0]["class"], "A2");
    let v: Value = serde_json::from_str(&singular_json("2", "3").unwrap()).unwrap();
    assert!(v["points"].as_array().unwrap().is_empty());
    assert!(singular_json("x", "1").is_err());
}
