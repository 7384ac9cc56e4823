use invgen::harness::props::verify_props;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn invgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cheb_exact_and_pinv() {
    let out = invgen(&["cheb", "exact", r#"{"family":"sym","n":3}"#]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["c"]["num"].as_i64(), v["c"]["den"].as_i64()), (Some(19), Some(5)));
    let v = json(&invgen(&["pinv", r#"{"family":"sym","n":3}"#, "--k", "2"]));
    assert_eq!((v["p"]["num"].as_i64(), v["p"]["den"].as_i64()), (Some(1), Some(3)));
    let v = json(&invgen(&["mink", r#"{"family":"cyclic","n":2}"#]));
    assert_eq!(v["k"], 1);
}

#[test]
fn descriptor_from_file() {
    let path = scratch("c5.json");
    std::fs::write(&path, r#"{"family":"cyclic","n":5}"#).unwrap();
    let v = json(&invgen(&["cheb", "exact", path.to_str().unwrap()]));
    assert_eq!((v["c"]["num"].as_i64(), v["c"]["den"].as_i64()), (Some(5), Some(4)));
}

#[test]
fn monte_carlo_is_seeded() {
    let args = ["cheb", "mc", r#"{"family":"sym","n":4}"#, "--trials", "3000", "--seed", "9"];
    let a = invgen(&args);
    let b = invgen(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["trials"], 3000);
}

#[test]
fn exit_codes() {
    let over = invgen(&["cheb", "exact", r#"{"family":"sym","n":9}"#]);
    assert_eq!(over.status.code(), Some(3));
    let bad = invgen(&["cheb", "exact", r#"{"family":"nope"}"#]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = invgen(&["cheb", "exact", "/nonexistent/group.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let l0 = invgen(&["binom-check", "--l", "0"]);
    assert_eq!(l0.status.code(), Some(2));
    // C_2^5 is past the inclusion-exclusion cap
    let ie = invgen(&["cheb", "exact", r#"{"family":"elemab","p":2,"k":5}"#]);
    assert_eq!(ie.status.code(), Some(3));
}

#[test]
fn h1_lift_and_crowns() {
    let module = r#"{"group":{"family":"sym","n":3},"p":2,"dim":2,"matrices":[[[0,1],[1,0]],[[0,1],[1,1]]]}"#;
    let v = json(&invgen(&["h1", module]));
    assert_eq!((v["m"].as_u64(), v["n"].as_u64(), v["e"].as_u64()), (Some(0), Some(2), Some(1)));
    let lift = format!(r#"{{"module":{module},"u":1,"hs":[[1],[2]],"ws":[[[0,0]],[[1,0]]]}}"#);
    let out = invgen(&["lift", &lift]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["generate"]["max_rank"], 2);
    assert_eq!(v["dimension_bound"]["holds"], true);
    // hs that do not generate H are refused
    let bad = format!(r#"{{"module":{module},"u":1,"hs":[[1],[1]],"ws":[[[0,0]],[[1,0]]]}}"#);
    assert_eq!(invgen(&["lift", &bad]).status.code(), Some(2));
    let v = json(&invgen(&["crowns", r#"{"family":"sym","n":3}"#]));
    assert_eq!(v["corona"]["u"], 3);
    let v = json(&invgen(&["crowns", r#"{"family":"cyclic","n":4}"#]));
    assert!(v["corona"]["error"].as_str().unwrap().contains("Frattini"));
}

#[test]
fn survey_files_and_threads() {
    let corpus = scratch("corpus.jsonl");
    std::fs::write(
        &corpus,
        "{\"family\":\"cyclic\",\"n\":2}\n{\"family\":\"sym\",\"n\":9}\n{\"family\":\"alt\",\"n\":4}\n",
    )
    .unwrap();
    let a = scratch("a.jsonl");
    let b = scratch("b.jsonl");
    let run = |out: &PathBuf, threads: &str| {
        invgen(&[
            "survey",
            corpus.to_str().unwrap(),
            "--trials",
            "2000",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ])
    };
    let ra = run(&a, "1");
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(String::from_utf8_lossy(&ra.stderr).contains("max C(G)/sqrt|G|"));
    assert!(run(&b, "4").status.success());
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    let lines: Vec<Value> = String::from_utf8(ja)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1]["error"].is_string());
    let csv = std::fs::read_to_string(a.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn empty_survey_succeeds() {
    let corpus = scratch("empty.jsonl");
    std::fs::write(&corpus, "").unwrap();
    let out = invgen(&["survey", corpus.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn tables_in_both_formats() {
    let out = invgen(&["agl-trend", "--q", "2,3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("q,order,c_num,c_den,c,c_over_q"));
    assert!(text.contains("3,6,19,5,"));
    let out = invgen(&["binom-check", "--eps", "6/7", "--p", "0.05", "--l", "5"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let out = invgen(&["verify", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let mut expected = serde_json::to_string_pretty(&verify_props(3)).unwrap();
    expected.push('\n');
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}
