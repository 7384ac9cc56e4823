use invgen_web::{agl_trend_json, binomial_json, chebotarev_json, MAX_TRIALS};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn chebotarev_of_sym3() {
    let v = parse(&chebotarev_json(r#"{"family":"sym","n":3}"#, 2000, 1).unwrap());
    assert_eq!(v["c_num"], 19);
    assert_eq!(v["c_den"], 5);
    assert_eq!(v["order"], 6);
    assert!((v["c_mc"].as_f64().unwrap() - 3.8).abs() < 0.5);
    let again = parse(&chebotarev_json(r#"{"family":"sym","n":3}"#, 2000, 1).unwrap());
    assert_eq!(v, again);
}

#[test]
fn chebotarev_rejects_bad_input() {
    assert!(chebotarev_json("{", 10, 1).is_err());
    assert!(chebotarev_json(r#"{"family":"sym","n":9}"#, 10, 1).is_err());
    assert!(chebotarev_json(r#"{"family":"sym","n":3}"#, MAX_TRIALS + 1, 1).is_err());
}

#[test]
fn agl_rows() {
    let v = parse(&agl_trend_json("2, 3").unwrap());
    assert_eq!(v[1]["c_num"], 19);
    assert_eq!(v[1]["c_den"], 5);
    assert!(agl_trend_json("3,x").is_err());
    assert!(agl_trend_json("6").is_err());
    assert!(agl_trend_json("64").is_err());
}

#[test]
fn binomial_rows() {
    let v = parse(&binomial_json("1/2", "0.1", 3).unwrap());
    assert_eq!(v["holds"], true);
    assert!(binomial_json("1/2", "0.1", 0).is_err());
    assert!(binomial_json("2", "0.1", 1).is_err());
}
