use std::process::{Command, Output};

use serde_json::{json, Value};

fn ramsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn check_and_witness() {
    let o = ramsplit(&["pirutka", "check", "--builtin", "allprimes4x3", "--prime", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o), json!({"verdict": true}));

    let o = ramsplit(&["pirutka", "check", "--matrix", r#"{"n":2,"d":2,"entries":[[1,1],[1,2]]}"#, "--prime", "2"]);
    assert_eq!(code(&o), 1);
    let v = json_of(&o);
    assert_eq!(v["verdict"], json!(false));
    assert!(v["witness"]["rows"].is_array());
}

#[test]
fn search_output_is_independent_of_workers() {
    let base = ramsplit(&["pirutka", "search", "--n", "3", "--d", "3", "--prime", "3"]);
    assert_eq!(code(&base), 1);
    let v = json_of(&base);
    assert_eq!(v["found"], Value::Null);
    assert_eq!(v["examined"], json!(19683));
    assert_eq!(
        v["pruned"].as_u64().unwrap() + v["checked"].as_u64().unwrap(),
        19683
    );
    for w in ["2", "5"] {
        let o = ramsplit(&["pirutka", "search", "--n", "3", "--d", "3", "--prime", "3", "--workers", w]);
        assert_eq!(o.stdout, base.stdout);
    }

    let found = ramsplit(&["pirutka", "search", "--n", "2", "--d", "2", "--prime", "3", "--workers", "3"]);
    assert_eq!(code(&found), 0);
    assert_eq!(json_of(&found)["found"], json!({"n": 2, "d": 2, "entries": [[1, 1], [1, 2]]}));
    assert_eq!(json_of(&found)["examined"], json!(42));
}

#[test]
fn progress_goes_to_stderr() {
    let o = ramsplit(&["pirutka", "search", "--n", "2", "--d", "2", "--prime", "2", "--progress"]);
    assert_eq!(code(&o), 1);
    json_of(&o);
    assert!(String::from_utf8_lossy(&o.stderr).contains("progress"));
}

#[test]
fn exit_codes() {
    let o = ramsplit(&["pirutka", "frobnicate"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stderr_json(&o)["error"], json!("usage"));
    assert!(o.stdout.is_empty());

    let o = ramsplit(&["pirutka", "check", "--builtin", "clever3x3", "--prime", "4"]);
    assert_eq!(code(&o), 2);

    let o = ramsplit(&["pirutka", "check", "--matrix", "{not json", "--prime", "2"]);
    assert_eq!(code(&o), 3);
    assert_eq!(stderr_json(&o)["error"], json!("invalid_input"));

    let o = ramsplit(&["complex", "order", "--complex", "/nonexistent/file.json"]);
    assert_eq!(code(&o), 3);

    let o = ramsplit(&["pirutka", "search", "--n", "4", "--d", "4", "--prime", "3", "--budget", "1000"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stderr_json(&o)["error"], json!("budget_exceeded"));
    assert!(o.stdout.is_empty());
}

#[test]
fn bounds_and_constructions() {
    let o = ramsplit(&["pirutka", "bound", "--prime", "5", "--dim", "2"]);
    assert_eq!(json_of(&o), json!({"exponent": 4, "matrix": "clever3x3"}));
    let o = ramsplit(&["pirutka", "bad-primes", "--builtin", "clever3x3"]);
    assert_eq!(json_of(&o), json!({"bad_primes": [2, 3]}));
    let o = ramsplit(&["pirutka", "construct", "--n", "2", "--prime", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_of(&o), json!({"matrix": null}));
    let o = ramsplit(&["pirutka", "construct", "--n", "3", "--prime", "11"]);
    assert_eq!(code(&o), 0);
    let m = json_of(&o)["matrix"].to_string();
    let o = ramsplit(&["pirutka", "check", "--matrix", &m, "--prime", "11"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn complexes_from_files_and_round_trips() {
    let dir = std::env::temp_dir().join(format!("ramsplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("triangle.json");
    std::fs::write(&path, r#"{"facets": [["a","b","c"]]}"#).unwrap();
    let p = path.to_str().unwrap();

    let sd = ramsplit(&["complex", "subdivide", "--complex", p]);
    assert_eq!(code(&sd), 0);
    let sd_json = json_of(&sd);
    assert_eq!(sd_json["facets"].as_array().unwrap().len(), 6);
    // output is valid input
    let again = ramsplit(&["complex", "order", "--complex", &sd_json.to_string()]);
    assert_eq!(code(&again), 0);

    let star = ramsplit(&["complex", "subdivide", "--complex", p, "--at", r#"["a","b","c"]"#]);
    let facets = json_of(&star)["facets"].as_array().unwrap().clone();
    assert_eq!(facets.len(), 3);
    assert!(facets.iter().all(|f| f.as_array().unwrap().contains(&json!(["a", "b", "c"]))));

    let iso = ramsplit(&["complex", "iso", "--complex", p]);
    assert_eq!(code(&iso), 0);
    assert_eq!(json_of(&iso)["is_iso"], json!(true));

    let color = ramsplit(&["complex", "color", "--complex", p]);
    assert_eq!(json_of(&color)["num_colors"], json!(3));

    let bad = ramsplit(&["complex", "subdivide", "--complex", p, "--at", r#"["a","z"]"#]);
    assert_eq!(code(&bad), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn random_corpora_are_seeded() {
    let a = ramsplit(&["complex", "random", "--count", "5"]);
    let b = ramsplit(&["complex", "random", "--count", "5", "--seed", "0"]);
    let c = ramsplit(&["complex", "random", "--count", "5", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let s = ramsplit(&["split", "random", "--prime", "3", "--d", "3", "--count", "4"]);
    assert_eq!(json_of(&s).as_array().unwrap().len(), 4);
}

#[test]
fn dual_commands() {
    let tri = r#"{"facets": [["D1","D2","D3"]], "divisors": ["D1","D2","D3"], "ambient_dim": 3}"#;
    let b = ramsplit(&["dual", "blowup", "--dual", tri, "--at", r#"["D1","D2","D3"]"#]);
    assert_eq!(code(&b), 0);
    let bj = json_of(&b);
    assert_eq!(bj["exceptional"][0]["source"], json!(["D1", "D2", "D3"]));
    // a blown-up dual complex can be fed back in
    let again = ramsplit(&["dual", "blowup", "--dual", &bj.to_string(), "--at", r#"["D1","D2"]"#]);
    assert_eq!(code(&again), 0);
    assert_eq!(json_of(&again)["exceptional"].as_array().unwrap().len(), 2);

    let seq = ramsplit(&["dual", "sequence", "--dual", tri]);
    assert_eq!(json_of(&seq)["trace"].as_array().unwrap().len(), 4);

    let red = ramsplit(&["dual", "reduce", "--dual", tri]);
    let sizes: Vec<usize> = json_of(&red)["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![3, 3, 1]);

    let pt = r#"{"facets": [], "divisors": ["D1"], "ambient_dim": 2}"#;
    let padded = ramsplit(&["dual", "reduce", "--dual", pt, "--pad"]);
    assert_eq!(json_of(&padded)["groups"].as_array().unwrap().len(), 2);

    let low = ramsplit(&["dual", "reduce", "--dual", tri, "--dim", "2"]);
    assert_eq!(code(&low), 3);
}

#[test]
fn certificates_round_trip() {
    let z = r#"{"J": [1, 2, 3], "I_prime": []}"#;
    let c = ramsplit(&["split", "certify", "--builtin", "allprimes4x3", "--prime", "2", "--stratum", z, "--j0", "1"]);
    assert_eq!(code(&c), 0);
    let cert = json_of(&c);
    assert_eq!(cert, json!({"j0": 1, "I": [1, 2, 3, 4], "a": [1, 0, 1, 0], "r": 1, "b": {"2": 2, "3": 2}}));
    let v = ramsplit(&[
        "split", "verify", "--builtin", "allprimes4x3", "--prime", "2", "--stratum", z, "--certificate",
        &cert.to_string(),
    ]);
    assert_eq!(code(&v), 0);
    assert_eq!(json_of(&v), json!({"valid": true}));

    let mut bad = cert.clone();
    bad["r"] = json!(0);
    let v = ramsplit(&[
        "split", "verify", "--builtin", "allprimes4x3", "--prime", "2", "--stratum", z, "--certificate",
        &bad.to_string(),
    ]);
    assert_eq!(code(&v), 1);
    assert_eq!(json_of(&v)["reason"], json!("r ≢ 1 mod ℓ"));

    let u = ramsplit(&["split", "universal", "--builtin", "clever3x3", "--prime", "2", "--workers", "3"]);
    assert_eq!(code(&u), 1);
    assert!(json_of(&u)["failure"]["J"].is_array());
    let u = ramsplit(&["split", "universal", "--builtin", "clever3x3", "--prime", "5", "--certificates"]);
    assert_eq!(code(&u), 0);
    let v = json_of(&u);
    assert_eq!(v["certificates"].as_array().unwrap().len(), v["attempts"].as_u64().unwrap() as usize);
}

#[test]
fn symbol_commands() {
    let raw = r#"{"l": 3, "d": 2, "symbols": [{"f": {"units": {"u": 1}, "x": [1, 0]}, "g": {"x": [0, 1]}}]}"#;
    let o = ramsplit(&["split", "normal-form", "--symbols", raw]);
    assert_eq!(
        json_of(&o),
        json!({"l": 3, "d": 2, "units": [{"u": "u", "i": 2, "c": 1}], "pairs": [{"i": 1, "j": 2, "m": 1}]})
    );
    let class = json_of(&o).to_string();
    let r = ramsplit(&["split", "residue", "--class", &class, "--k", "1"]);
    assert_eq!(json_of(&r), json!({"coordinate": 1, "units": {}, "exponents": [0, 2]}));
    let r = ramsplit(&["split", "residue", "--class", &class, "--k", "2"]);
    assert_eq!(json_of(&r), json!({"coordinate": 2, "units": {"u": 1}, "exponents": [1, 0]}));
    let pb = ramsplit(&["split", "pullback", "--class", &class, "--coords", "1,2"]);
    assert_eq!(json_of(&pb), json!({"l": 3, "d": 2, "units": [], "pairs": []}));
    let pb = ramsplit(&["split", "pullback", "--class", &class, "--coords", "1"]);
    assert_eq!(json_of(&pb)["units"], json!([{"u": "u", "i": 2, "c": 1}]));
    let bad = ramsplit(&["split", "residue", "--class", &class, "--k", "3"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn text_format() {
    let o = ramsplit(&["pirutka", "bound", "--prime", "2", "--dim", "2", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "exponent 5 via allprimes4x3");
    let o = ramsplit(&["--format", "text", "pirutka", "search", "--n", "2", "--d", "2", "--prime", "3"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("found after 42 candidates"));
}
