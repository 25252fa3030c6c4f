use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use centext::cocycle::carry_cocycle;
use centext::io::{parse_embedding, to_json, BilinearJson, CocycleJson, GroupJson};

fn centext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centext")).args(args).output().unwrap()
}

fn json_out(args: &[&str]) -> (i32, Value) {
    let out = centext(args);
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn write_carry(dir: &Path, name: &str, p: u64) -> String {
    let path = dir.join(name);
    fs::write(&path, to_json(&CocycleJson::from(&carry_cocycle(p, p).unwrap()))).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn carry_examples_for_small_primes() {
    for p in ["3", "5", "7"] {
        let (code, v) = json_out(&["paper-examples", "--which", "carry", "--p", p]);
        assert_eq!(code, 0);
        let c = &v["carry"];
        assert_eq!(c["cyclic"], Value::Bool(true));
        assert_eq!(c["bilinear_representative"], Value::Bool(false));
        assert_eq!(c["beta_tilde_zero"], Value::Bool(true));
        assert_eq!(c["witness_holds"], Value::Bool(true));
        assert_eq!(c["target_abelian"], Value::Bool(true));
    }
}

#[test]
fn carry_at_two_is_bilinear() {
    let (code, v) = json_out(&["paper-examples", "--which", "carry", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["carry"]["bilinear_representative"], Value::Bool(true));
}

#[test]
fn heisenberg_example() {
    let (code, v) = json_out(&["paper-examples", "--which", "heisenberg-carry", "--p", "2"]);
    assert_eq!(code, 0, "{v}");
    assert!(v.to_string().contains("heisenberg"));
}

#[test]
fn embed_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write_carry(dir.path(), "carry.json", 3);
    let out = dir.path().join("embed.json");
    let status = centext(&["embed", "--cocycle", &gamma, "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let text = to_json(&v["embedding"]);
    let parsed = parse_embedding(&text).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), v["embedding"]);
    assert_eq!(to_json(&parse_embedding(&to_json(&parsed)).unwrap()), to_json(&parsed));
    assert_eq!(parsed.image_f, GroupJson { factors: vec![9] });
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == &Value::Bool(true)));
}

#[test]
fn cohomologous_and_twist() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_carry(dir.path(), "x.json", 2);
    let (code, v) = json_out(&["cohomologous", "--first", &x, "--second", &x]);
    assert_eq!(code, 0);
    assert_eq!(v["cohomologous"], Value::Bool(true));

    let bil = dir.path().join("bil.json");
    let doc = BilinearJson {
        a: GroupJson { factors: vec![2, 2] },
        b: GroupJson { factors: vec![2] },
        matrix: vec![vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
    };
    fs::write(&bil, to_json(&doc)).unwrap();
    let (code, v) = json_out(&["twist", "--bilinear", bil.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(!v["bilinear_representative"].is_null());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = carry_cocycle(2, 2).unwrap().to_table();
    table[1][1] = vec![0];
    table[0][1] = vec![1];
    let bad = dir.path().join("bad.json");
    let doc = CocycleJson {
        a: GroupJson { factors: vec![2] },
        b: GroupJson { factors: vec![2] },
        table,
    };
    fs::write(&bad, to_json(&doc)).unwrap();
    assert_eq!(centext(&["validate", "--cocycle", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(centext(&["embed", "--cocycle", bad.to_str().unwrap()]).status.code(), Some(1));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"a\": {\"factors\": [2]}, \"extra\": 1}").unwrap();
    assert_eq!(centext(&["validate", "--cocycle", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(centext(&["h2", "--a", "[2,2,2,2,2]", "--b", "[2]"]).status.code(), Some(2));
    assert_eq!(centext(&["h2", "--a", "[2,x]", "--b", "[2]"]).status.code(), Some(2));
    assert_eq!(centext(&["h2", "--a", "[2,2]", "--b", "[2]"]).status.code(), Some(0));
}

#[test]
fn property_suite_runs() {
    let (code, v) = json_out(&["check", "--matrices", "50", "--seed", "7"]);
    assert_eq!(code, 0, "{v}");
}
