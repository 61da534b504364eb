use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    json: Value,
    stdout: String,
}

fn clonelab(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_clonelab")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
    }
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const MAJ: [u8; 8] = [0, 0, 0, 1, 0, 1, 1, 1];

#[test]
fn generate_and_query_membership() {
    let d = TempDir::new().unwrap();
    let gens = write(&d, "g.json", &json!([{ "arity": 2, "table": [1, 1, 1, 0] }]));
    let frag = d.path().join("f.json");
    let r = clonelab(&["gen", "--generators", s(&gens), "--arity-bound", "2", "--out", s(&frag)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["counts"], json!({ "1": 4, "2": 16 }));

    let xor = write(&d, "x.json", &json!({ "arity": 2, "table": [0, 1, 1, 0] }));
    let r = clonelab(&["member", "--op", s(&xor), "--fragment", s(&frag)]);
    assert_eq!(r.json, json!({ "member": true }));
}

#[test]
fn interpolation_failure_carries_a_witness() {
    let d = TempDir::new().unwrap();
    let frag = write(&d, "f.json", &json!({ "universe": 2, "arity_bound": 2, "generators": [{ "arity": 3, "table": MAJ }] }));
    let and = write(&d, "a.json", &json!({ "arity": 2, "table": [0, 0, 0, 1] }));
    let r = clonelab(&["interp", "--target", s(&and), "--fragment", s(&frag), "--lambda", "1"]);
    assert_eq!(r.json, json!({ "result": true }));
    let r = clonelab(&["interp", "--target", s(&and), "--fragment", s(&frag), "--lambda", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["result"], json!(false));
    let set = r.json["witness"]["S"].as_array().unwrap();
    assert_eq!(set.len(), 2);
    // and is 0 on both points, so no projection can match
    for t in set {
        let t: Vec<u64> = t.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert_eq!(t[0] & t[1], 0);
    }
}

#[test]
fn ultra_certificate_round_trip_and_tamper() {
    let d = TempDir::new().unwrap();
    let frag = write(&d, "f.json", &json!({ "universe": 2, "arity_bound": 2, "generators": [{ "arity": 3, "table": MAJ }] }));
    let and = write(&d, "a.json", &json!({ "arity": 2, "table": [0, 0, 0, 1] }));
    let cert = d.path().join("c.json");
    let r = clonelab(&[
        "ultra", "--target", s(&and), "--fragment", s(&frag), "--lambda", "1", "--strategy", "singletons", "--cert", s(&cert),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["found"], json!(true));
    assert_eq!(r.json["cover"].as_array().unwrap().len(), 4);

    let v = clonelab(&["verify", s(&cert), "--inputs", s(&and), s(&frag)]);
    assert_eq!(v.json["valid"], json!(true), "{}", v.stdout);
    // wrong inputs
    let v = clonelab(&["verify", s(&cert), "--inputs", s(&frag), s(&and)]);
    assert_eq!(v.json["valid"], json!(false));
    // tampered payload
    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    c["payload"]["lambda"] = json!(2);
    let bad = write(&d, "bad.json", &c);
    let v = clonelab(&["verify", s(&bad), "--inputs", s(&and), s(&frag)]);
    assert_eq!(v.code, 0);
    assert_eq!(v.json["valid"], json!(false));

    let r = clonelab(&["ultra", "--target", s(&and), "--fragment", s(&frag), "--lambda", "2"]);
    assert_eq!(r.json, json!({ "found": false, "disproof": true }));
}

#[test]
fn ultra_and_local_closure_modes() {
    let d = TempDir::new().unwrap();
    let frag = write(&d, "f.json", &json!({ "universe": 2, "arity_bound": 2, "generators": [{ "arity": 3, "table": MAJ }] }));
    let r = clonelab(&["ultra", "--fragment", s(&frag), "--kappa", "3"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["equals_input"], json!(true));
    let r = clonelab(&["local", "--fragment", s(&frag), "--kappa", "omega"]);
    assert_eq!(r.json["equals_input"], json!(true), "{}", r.stdout);
}

#[test]
fn bp_instance_and_fragment_check() {
    let d = TempDir::new().unwrap();
    let inst = json!({
        "universe": 2,
        "f": { "arity": 2, "table": [0, 1, 1, 0] },
        "h": { "arity": 3, "table": MAJ },
        "cover": [[0], [1], [2], [3]],
        "base_interpolants": {
            "0,1": [0, 1, 0, 1], "0,2": [0, 0, 1, 1], "0,3": [0, 1, 1, 0],
            "1,2": [1, 1, 1, 1], "1,3": [1, 1, 1, 0], "2,3": [1, 0, 1, 0]
        }
    });
    let p = write(&d, "i.json", &inst);
    let cert = d.path().join("bp.json");
    let r = clonelab(&["bp", "--instance", s(&p), "--cert", s(&cert)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["equals_f"], json!(true));
    assert_eq!(r.json["tree"]["op"], json!("h"));
    let v = clonelab(&["verify", s(&cert), "--inputs", s(&p)]);
    assert_eq!(v.json["valid"], json!(true), "{}", v.stdout);

    let frag = write(&d, "f.json", &json!({ "universe": 2, "arity_bound": 3, "generators": [{ "arity": 3, "table": MAJ }] }));
    let r = clonelab(&["bp", "--fragment", s(&frag)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["closed"], json!(true));
}

#[test]
fn detectors() {
    let d = TempDir::new().unwrap();
    let and = write(&d, "a.json", &json!({ "arity": 2, "table": [0, 0, 0, 1] }));
    let r = clonelab(&["detect", "ess-unary", "--op", s(&and)]);
    assert_eq!(r.json["essentially_unary"], json!(false));
    assert_eq!(r.json["certificate"]["kind"], json!("preservation_witness"));

    // identity on 2×2 is a product
    let id = write(&d, "id.json", &json!({ "arity": 1, "table": [0, 1, 2, 3] }));
    let r = clonelab(&["detect", "product", "--op", s(&id), "--factors", "2x2"]);
    assert_eq!(r.json["product"], json!(true));
    let swap = write(&d, "sw.json", &json!({ "arity": 1, "table": [0, 2, 1, 3] }));
    let r = clonelab(&["detect", "product", "--op", s(&swap), "--factors", "2x2"]);
    assert_eq!(r.json["product"], json!(false));
    assert!(r.json["witness"].is_object());

    let sub = write(&d, "sub.json", &json!({ "arity": 2, "table": [0, 2, 1, 1, 0, 2, 2, 1, 0] }));
    let r = clonelab(&["detect", "module", "--op", s(&sub)]);
    assert_eq!(r.json, json!({ "compatible": true }));
    let r = clonelab(&["detect", "module", "--op", s(&and), "--group", s(&write(&d, "g.json", &json!({ "add": [0, 1, 1, 0], "neg": [0, 1], "zero": 0 })))]);
    assert_eq!(r.json["compatible"], json!(false));

    let first = write(&d, "p.json", &json!({ "arity": 2, "table": [0, 0, 0, 1, 1, 1, 2, 2, 2] }));
    let r = clonelab(&["detect", "gs", "--op", s(&first)]);
    assert_eq!(r.json["member"], json!(true));
    let c = write(&d, "c.json", &json!({ "arity": 1, "table": [0, 0, 0] }));
    let r = clonelab(&["detect", "gs", "--op", s(&c), "--ideal", "0"]);
    assert_eq!(r.json["member"], json!(false));
}

#[test]
fn permutations() {
    let d = TempDir::new().unwrap();
    let t = write(&d, "t.json", &json!({ "moved": { "0": 1, "1": 0 } }));
    let r = clonelab(&["perm", "parity", "--perm", s(&t)]);
    assert_eq!(r.json["parity"], json!("odd"));
    let r = clonelab(&["perm", "alt", "--perm", s(&t), "--lambda", "2", "--window", "6"]);
    assert_eq!(r.json["in_alt"], json!(false));
    assert_eq!(r.json["interpolable_on_window"], json!(true));

    let cert = d.path().join("w.json");
    let r = clonelab(&["perm", "cover-witness", "--k", "3", "--window", "8", "--cert", s(&cert)]);
    assert_eq!(r.json["verified"], json!(true));
    assert_eq!(clonelab(&["verify", s(&cert)]).json["valid"], json!(true));

    let m = write(&d, "m.json", &json!({ "values": [1, 2, 0, 3, 4, 5] }));
    let r = clonelab(&["perm", "altb-check", "--b", "0,1,2", "--map", s(&m)]);
    assert_eq!(r.json["accepted"], json!(true));
    let r = clonelab(&["perm", "altb-check", "--b", "0,1", "--map", s(&m)]);
    assert_eq!(r.json["accepted"], json!(false));
}

#[test]
fn module_sample_is_deterministic_and_recovers() {
    let d = TempDir::new().unwrap();
    let a = clonelab(&["module", "sample", "--q", "3", "--dim", "4", "--seed", "11"]);
    let b = clonelab(&["module", "sample", "--q", "3", "--dim", "4", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let inst = write(&d, "i.json", &a.json["instance"]);
    let cert = d.path().join("m.json");
    let r = clonelab(&["module", "recover", "--instance", s(&inst), "--cert", s(&cert)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["equals_f"], json!(true));
    assert_eq!(clonelab(&["verify", s(&cert), "--inputs", s(&inst)]).json["valid"], json!(true));

    let bad = write(&d, "q.json", &json!({ "q": "R", "f": [[1]], "interpolants": [[[1]]], "blocks": [[[1]]] }));
    let r = clonelab(&["module", "recover", "--instance", s(&bad)]);
    assert_eq!(r.code, 1);
    assert!(r.json["error"].as_str().unwrap().contains("field"));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    assert_eq!(clonelab(&["no-such-command"]).code, 1);
    assert_eq!(clonelab(&["member", "--op", "/nonexistent", "--fragment", "/nonexistent"]).code, 1);
    let broken = d.path().join("b.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let r = clonelab(&["detect", "ess-unary", "--op", s(&broken)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["kind"], json!("input"));

    let gens = write(&d, "g.json", &json!([{ "arity": 2, "table": [1, 1, 1, 0] }]));
    let r = clonelab(&["--cap", "3", "gen", "--generators", s(&gens), "--arity-bound", "2"]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert_eq!(r.json["kind"], json!("cap"));
}

#[test]
fn schema_and_determinism() {
    let r = clonelab(&["--schema"]);
    assert_eq!(r.code, 0);
    for k in ["operation", "fragment", "certificate", "module_instance", "bp_instance"] {
        assert!(r.json.get(k).is_some(), "schema lacks {k}");
    }
    let d = TempDir::new().unwrap();
    let gens = write(&d, "g.json", &json!([{ "arity": 3, "table": MAJ }]));
    let a = clonelab(&["gen", "--generators", s(&gens), "--arity-bound", "3"]);
    let b = clonelab(&["gen", "--generators", s(&gens), "--arity-bound", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
