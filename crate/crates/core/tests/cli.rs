use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn sharbly(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharbly"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), serde_json::to_string(v).unwrap()).unwrap();
}

#[test]
fn build_verify_check_n2() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&sharbly(p, &["cycle", "build", "--n", "2", "--out", "z.json"])), 0);
    let z = read(p, "z.json");
    assert_eq!(z["terms"].as_array().unwrap().len(), 1);
    assert_eq!(z["terms"][0]["weight"], "1/6");
    let o = sharbly(p, &["cycle", "verify", "--in", "z.json", "--cert", "c.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&sharbly(p, &["cert", "check", "c.json"])), 0);
    assert_eq!(code(&sharbly(p, &["cert", "check", "--cert", "c.json"])), 0);
}

#[test]
fn tampered_witness_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    sharbly(p, &["cycle", "build", "--n", "2", "--out", "z.json"]);
    sharbly(p, &["cycle", "verify", "--in", "z.json", "--cert", "c.json"]);
    let mut c = read(p, "c.json");
    let ledger = c["payload"]["ledger"].as_array_mut().unwrap();
    let e = ledger.iter_mut().find(|e| !e["witness"].is_null()).unwrap();
    let x = e["witness"][0][0].as_i64().unwrap();
    e["witness"][0][0] = Value::from(x + 1);
    write(p, "t.json", &c);
    let o = sharbly(p, &["cert", "check", "t.json"]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["valid"], false);
}

#[test]
fn every_single_field_mutation_fails() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    sharbly(p, &["cycle", "build", "--n", "3", "--out", "z.json"]);
    sharbly(p, &["cycle", "verify", "--in", "z.json", "--cert", "c.json"]);
    let c = read(p, "c.json");
    let mut mutants = vec![];
    let mut m = c.clone();
    m["schema_version"] = Value::from(2);
    mutants.push(m);
    let mut m = c.clone();
    m["input_hash"] = Value::from("00");
    mutants.push(m);
    let mut m = c.clone();
    m["payload"]["chain"][0]["weight"] = Value::from("1/12");
    mutants.push(m);
    let mut m = c.clone();
    m["payload"]["ledger"][0]["sign"] = Value::from(-m["payload"]["ledger"][0]["sign"].as_i64().unwrap());
    mutants.push(m);
    let mut m = c.clone();
    m["payload"]["valid"] = Value::from(false);
    mutants.push(m);
    for (i, m) in mutants.iter().enumerate() {
        write(p, "m.json", m);
        assert_eq!(code(&sharbly(p, &["cert", "check", "m.json"])), 1, "mutant {i}");
    }
}

#[test]
fn d5_facets_and_flip() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let o = sharbly(p, &["tile", "facets", "--form", "D5", "--out", "f.json", "--cert", "fc.json"]);
    assert_eq!(code(&o), 0);
    let s: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["facets"], 400);
    assert_eq!(s["census"]["14"], 320);
    assert_eq!(s["census"]["16"], 80);
    assert_eq!(code(&sharbly(p, &["cert", "check", "fc.json"])), 0);

    let o = sharbly(p, &["flip", "path", "--form", "D5", "--facet", "F", "--out", "path.json", "--cert", "pc.json"]);
    assert_eq!(code(&o), 0);
    let s: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["length"], 1);
    assert_eq!(s["circuits"][0], serde_json::json!([0, 1, 5, 6, 9, 10, 12, 13]));
    assert_eq!(code(&sharbly(p, &["cert", "check", "pc.json"])), 0);
    let o = sharbly(p, &["flip", "verify", "--in", "path.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["summary"]["secondary"][0]["x"], serde_json::json!([1, 0, 0, 0, 0]));
    assert_eq!(s["summary"]["secondary"][0]["identity"], true);
    let o = sharbly(p, &["flip", "verify", "--in", "path.json", "--cone-vertex", "0,1,-1,0,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let mut c = read(p, "pc.json");
    c[0]["payload"]["identity"]["links"][0]["e"] = Value::from(-1);
    write(p, "bad.json", &c);
    assert_eq!(code(&sharbly(p, &["cert", "check", "bad.json"])), 1);
}

#[test]
fn triangulate_and_enumerate() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "sq.json", &serde_json::json!([[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]]));
    let o = sharbly(p, &["triangulate", "--in", "sq.json", "--cert", "t.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&sharbly(p, &["cert", "check", "t.json"])), 0);
    let o = sharbly(p, &["triangulations", "enumerate", "--in", "sq.json"]);
    assert_eq!(code(&o), 0);
    let all: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(all.as_array().unwrap().len(), 3);
    write(p, "h.json", &serde_json::json!([0, 0, 0, 0, -1]));
    let o = sharbly(p, &["triangulate", "--in", "sq.json", "--heights", "h.json"]);
    let t: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t.as_array().unwrap().len(), 4);
}

#[test]
fn sharbly_and_cocycle_commands() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    write(p, "v.json", &serde_json::json!([[1, 1], [1, 0], [0, -1]]));
    let o = sharbly(p, &["sharbly", "canon", "--in", "v.json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vectors"], serde_json::json!([[0, 1], [1, 0], [1, 1]]));
    assert_eq!(v["sign"], -1);

    sharbly(p, &["cycle", "build", "--n", "2", "--out", "z.json"]);
    let o = sharbly(p, &["sharbly", "boundary", "--in", "z.json", "--coinvariants"]);
    assert_eq!(code(&o), 0);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["is_zero"] == true));

    assert_eq!(code(&sharbly(p, &["cocycle", "certify", "--in", "z.json", "--cert", "mu.json"])), 0);
    assert_eq!(code(&sharbly(p, &["cert", "check", "mu.json"])), 0);
    let mut c = read(p, "mu.json");
    c["payload"]["terms"][0]["epsilon"] = Value::from(0);
    write(p, "mu2.json", &c);
    assert_eq!(code(&sharbly(p, &["cert", "check", "mu2.json"])), 1);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&sharbly(p, &["cycle", "build", "--n", "6"])), 4);
    assert_eq!(code(&sharbly(p, &["cycle", "build"])), 2);
    assert_eq!(code(&sharbly(p, &["tile", "facets", "--form", "E8"])), 2);
    std::fs::write(p.join("bad.json"), "{").unwrap();
    assert_eq!(code(&sharbly(p, &["cycle", "verify", "--in", "bad.json"])), 2);
    assert_eq!(code(&sharbly(p, &["cert", "check", "bad.json"])), 2);
    sharbly(p, &["cycle", "build", "--n", "3", "--out", "z.json"]);
    let o = sharbly(p, &["cycle", "verify", "--in", "z.json", "--budget-nodes", "1", "--cert", "c.json"]);
    assert_eq!(code(&o), 3);
    assert!(!p.join("c.json").exists());
    assert_eq!(code(&sharbly(p, &["cycle", "build", "--n", "2", "--out", "no/such/dir.json"])), 2);
}

#[test]
fn remark_and_forms() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let o = sharbly(p, &["cycle", "remark-an", "--n", "3"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["classes"].as_array().unwrap().len(), 0);
    let o = sharbly(p, &["forms", "list", "--form", "D4"]);
    let f: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(f[0]["min_vectors"].as_array().unwrap().len(), 12);
    assert_eq!(f[0]["n"], 4);
    let o = sharbly(p, &["tile", "stabilizer", "--form", "A2"]);
    let s: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s["order"], 6);
}

#[test]
fn repro_skipping_n5() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let o = sharbly(p, &["repro", "all", "--skip-n5", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = read(p, "r.json");
    assert_eq!(r.as_array().unwrap().len(), 8);
    assert_eq!(r[4]["skipped"], true);
    let again = sharbly(p, &["repro", "all", "--skip-n5", "--out", "r2.json"]);
    let strip = |v: Value| -> Vec<(Value, Value)> {
        v.as_array().unwrap().iter().map(|x| (x["passed"].clone(), x["detail"].clone())).collect()
    };
    assert_eq!(code(&again), 0);
    assert_eq!(strip(r), strip(read(p, "r2.json")));
}

#[test]
fn outputs_carry_the_schema_fields() {
    let schemas = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
    let schema = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(schemas.join(name)).unwrap()).unwrap()
    };
    let required = |s: &Value| -> Vec<String> {
        s["required"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_owned()).collect()
    };
    for e in std::fs::read_dir(&schemas).unwrap() {
        let text = std::fs::read_to_string(e.unwrap().path()).unwrap();
        assert!(serde_json::from_str::<Value>(&text).is_ok());
    }
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    sharbly(p, &["cycle", "build", "--n", "3", "--out", "z.json"]);
    sharbly(p, &["cycle", "verify", "--in", "z.json", "--cert", "c.json"]);
    let z = read(p, "z.json");
    let s = schema("cycle.schema.json");
    for k in required(&s) {
        assert!(z.get(&k).is_some(), "cycle lacks {k}");
    }
    for k in required(&s["properties"]["terms"]["items"]) {
        assert!(z["terms"][0].get(&k).is_some(), "term lacks {k}");
    }
    let c = read(p, "c.json");
    for k in required(&schema("certificate.schema.json")) {
        assert!(c.get(&k).is_some(), "certificate lacks {k}");
    }
    let o = sharbly(p, &["forms", "list", "--form", "A2"]);
    let f: Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in required(&schema("form.schema.json")) {
        assert!(f[0].get(&k).is_some(), "form lacks {k}");
    }
}
