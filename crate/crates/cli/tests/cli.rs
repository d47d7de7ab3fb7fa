use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const ONE_GATE: &str = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n";
const XOR_TOY: &str = "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(y)\nt = AND(a, b)\ny = XOR(t, keyinput0)\n";
const TOY_ORACLE: &str = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netlock")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn setup(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn one_gate_lock_writes_everything() {
    let dir = setup(&[("c.bench", ONE_GATE)]);
    let d = dir.path();
    let args = ["lock", "c.bench", "--key-size", "1", "--seed", "4", "-o", "l.bench", "--key-out", "k.hex", "--manifest", "m.json"];
    let out = run(d, &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);
    let key = std::fs::read_to_string(d.join("k.hex")).unwrap();
    assert!(key == "0x0\n" || key == "0x1\n");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(d.join("m.json")).unwrap()).unwrap();
    assert_eq!(manifest["key_size"], 1);
    assert_eq!(manifest["schema_version"], 1);
    let first: Vec<Vec<u8>> = ["l.bench", "k.hex", "m.json"].iter().map(|f| std::fs::read(d.join(f)).unwrap()).collect();
    assert!(run(d, &args).status.success());
    let second: Vec<Vec<u8>> = ["l.bench", "k.hex", "m.json"].iter().map(|f| std::fs::read(d.join(f)).unwrap()).collect();
    assert_eq!(first, second);
    let eq = json(&run(d, &["equiv", "c.bench", "l.bench", "--key", "k.hex"]));
    assert_eq!(eq["equivalent"], true);
}

#[test]
fn exit_codes() {
    let wide: String = {
        let ins: Vec<String> = (0..13).map(|i| format!("x{i}")).collect();
        let mut s: String = ins.iter().map(|i| format!("INPUT({i})\n")).collect();
        s.push_str(&format!("OUTPUT(y)\ny = AND({})\n", ins.join(", ")));
        s
    };
    let many: String = {
        let mut s: String = (0..17).map(|i| format!("INPUT(x{i})\n")).collect();
        s.push_str("INPUT(keyinput0)\nOUTPUT(y)\nt = AND(x0, x16)\ny = XOR(t, keyinput0)\n");
        s
    };
    let dir = setup(&[
        ("c.bench", ONE_GATE),
        ("bad.bench", "INPUT(a)\ny = FOO(a)\n"),
        ("wide.bench", &wide),
        ("many.bench", &many),
        ("three.bench", "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = AND(a, b, c)\n"),
        ("toy.bench", XOR_TOY),
        ("k.hex", "0x0\n"),
    ]);
    let d = dir.path();
    let lock = |input: &str| run(d, &["lock", input, "--key-size", "1", "-o", "o", "--key-out", "k", "--manifest", "m"]);
    let code = |o: Output| o.status.code();
    assert_eq!(code(run(d, &["lock", "c.bench"])), Some(1));
    assert_eq!(code(lock("bad.bench")), Some(1));
    assert_eq!(code(lock("wide.bench")), Some(2));
    assert_eq!(code(lock("missing.bench")), Some(3));
    assert_eq!(code(run(d, &["metrics", "three.bench", "toy.bench", "--key", "k.hex"])), Some(4));
    assert_eq!(code(run(d, &["attack", "many.bench", "c.bench", "--attack", "brute"])), Some(5));
    assert_eq!(code(run(d, &["--help"])), Some(0));
}

#[test]
fn attacks_on_the_xor_toy() {
    let dir = setup(&[("toy.bench", XOR_TOY), ("oracle.bench", TOY_ORACLE)]);
    let d = dir.path();
    let brute = json(&run(d, &["attack", "toy.bench", "oracle.bench", "--attack", "brute"]));
    assert_eq!(brute["recovered_key"], "0x0");
    assert_eq!(brute["surviving_keys"], 1);
    let dip = json(&run(d, &["attack", "toy.bench", "oracle.bench", "--attack", "dip"]));
    assert_eq!(dip["queries"], 1);
    assert_eq!(dip["recovered_key"], "0x0");
    assert!(dip.get("wall_time_ms").is_none());
    let timed = json(&run(d, &["attack", "toy.bench", "oracle.bench", "--attack", "dip", "--wall-time"]));
    assert!(timed["wall_time_ms"].is_f64());
    run(d, &["attack", "toy.bench", "oracle.bench", "--attack", "brute", "--append", "rows.tsv"]);
    run(d, &["attack", "toy.bench", "oracle.bench", "--attack", "dip", "--append", "rows.tsv"]);
    let rows = std::fs::read_to_string(d.join("rows.tsv")).unwrap();
    assert_eq!(rows.lines().count(), 3);
}

#[test]
fn metrics_and_stats_utilities() {
    let dir = setup(&[("toy.bench", XOR_TOY), ("oracle.bench", TOY_ORACLE), ("k.hex", "0x0\n")]);
    let d = dir.path();
    let composed = json(&run(d, &["metrics", "--compose", "47.2", "13.4", "72.4"]));
    assert!((composed["t3_metric"].as_f64().unwrap() - 44.33).abs() < 0.01);
    let m = json(&run(d, &["metrics", "oracle.bench", "toy.bench", "--key", "k.hex"]));
    assert_eq!(m["f_index"], 0.0);
    // Two gates, one key bit.
    assert_eq!(m["max_depth"], 2);
    let s = json(&run(d, &["stats", "--n", "1", "--k", "1", "--d", "0"]));
    assert_eq!(s["rows"][0]["e"], "2");
    assert_eq!(s["rows"][0]["f_count"], "4");
    let s = json(&run(d, &["stats", "--n", "3", "--k", "1,2,3", "--d", "0,1,2"]));
    assert_eq!(s["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn partition_count_follows_size() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(d, &["gen", "--inputs", "16", "--gates", "500", "--seed", "2", "-o", "c.bench"]).status.success());
    let p = json(&run(d, &["partition", "c.bench", "--size", "25", "--seed", "1"]));
    assert_eq!(p["partitions"], 20);
    let sizes: Vec<u64> = p["sizes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(sizes.iter().all(|&s| s <= p["max_size"].as_u64().unwrap()));
    let by_key = json(&run(d, &["partition", "c.bench", "--key-size", "10"]));
    assert_eq!(by_key["target_size"], 50);
}
