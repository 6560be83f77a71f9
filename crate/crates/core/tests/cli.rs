use std::process::{Command, Output};

use serde_json::Value;

fn ds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ds")).args(args).env_remove("DS_SEED").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn invariants_and_maximal() {
    let o = ds(&["invariants", "--q", "3", "--d", "3", "--r", "T^3-T"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "ds-report/1");
    assert_eq!(v["result"]["(T)"], "1/3");
    assert_eq!(v["result"]["inf"], "0");
    let o = ds(&["maximal"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["discriminant"], "T^4+T^2+1");
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(ds(&["verify", "--r", "T^2+"]).status.code(), Some(2));
    assert_eq!(ds(&["verify", "--q", "6"]).status.code(), Some(2));
    assert_eq!(ds(&["verify", "--field", "fq^x"]).status.code(), Some(2));
    assert_eq!(ds(&["nonsense"]).status.code(), Some(2));
    let o = ds(&["norm", "h+q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn gcd_gate_is_a_precondition() {
    let o = ds(&["descend", "--field", "fq^2", "--gamma", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gcd"));
    let o = ds(&["descend", "--field", "fq^2", "--gamma", "0", "--method", "splitting"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn norm_torsion_and_supersingular() {
    let v = json(&ds(&["norm", "h+z"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["order_index_log_q"], v["result"]["norm_degree"]);
    let v = json(&ds(&["torsion", "--char", "T^2+1", "--witness", "h+z"]));
    assert_eq!(v["result"]["torsion"]["points"], 81);
    assert!(v["result"]["witness"]["point"].is_array());
    let v = json(&ds(&["supersingular", "--char", "T"]));
    assert_eq!(v["result"]["supersingular"], true);
    assert_eq!(v["result"]["agree"], true);
    let v = json(&ds(&["endring", "--field", "fq^2", "--gamma", "0"]));
    assert_eq!(v["result"]["end"]["a_rank"], 4);
    assert_eq!(v["result"]["end"]["aut_order"], 8);
    assert_eq!(v["result"]["end"]["discriminant"], "T^6+T^4+T^2");
}

#[test]
fn h90_bundle_round_trip() {
    let spec = ds_core::report::ExtSpec { p: 2, e: 2, relative_degree: 2, q_exp: Some(2) };
    let bundle = ds_core::fixtures::h90_bundle(spec, 2, 3).unwrap();
    let dir = std::env::temp_dir().join(format!("ds_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("c.json");
    let out = dir.join("s.json");
    std::fs::write(&input, serde_json::to_string(&bundle).unwrap()).unwrap();
    let o = ds(&["h90", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["verified"], true);
    // c_σ = g·I with g^(1+q^2) ≠ 1 is a unit but not a cocycle
    let g = bundle.ext.extension().unwrap().k.field.generator().unwrap();
    let mut bad = bundle.clone();
    bad.cocycle.insert("σ^1".into(), vec![vec![vec![g], vec![]], vec![vec![], vec![g]]]);
    std::fs::write(&input, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = ds(&["h90", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["cocycle"], false);
    // a non-unit value is an error, not a report
    bad.cocycle.insert("σ^1".into(), vec![vec![vec![1], vec![1]], vec![vec![1], vec![1]]]);
    std::fs::write(&input, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = ds(&["h90", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty() && String::from_utf8_lossy(&o.stderr).contains("unit"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_ds"))
            .args(["verify", "--samples", "3", "--seed", "1"])
            .env("DS_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
