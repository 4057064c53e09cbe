use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_parity-forge"));
    c.env_remove("PARITY_FORGE_RESIDUE_CUTOFF");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

struct Schemas {
    schemas: boon::Schemas,
    trace: boon::SchemaIndex,
    envelope: boon::SchemaIndex,
}

impl Schemas {
    fn load() -> Self {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas");
        let mut schemas = boon::Schemas::new();
        let mut compiler = boon::Compiler::new();
        let mut index = |name: &str| {
            let text = std::fs::read_to_string(dir.join(name)).unwrap();
            let url = format!("file:///schemas/{name}");
            compiler.add_resource(&url, serde_json::from_str(&text).unwrap()).unwrap();
            compiler.compile(&url, &mut schemas).unwrap()
        };
        let trace = index("trace.schema.json");
        let envelope = index("envelope.schema.json");
        Schemas { schemas, trace, envelope }
    }

    fn envelope(&self, v: &Value) {
        if let Err(e) = self.schemas.validate(v, self.envelope) {
            panic!("envelope invalid: {e}\n{v:#}");
        }
        if let Some(t) = v.get("trace") {
            self.trace(t);
        }
    }

    fn trace(&self, v: &Value) {
        if let Err(e) = self.schemas.validate(v, self.trace) {
            panic!("trace invalid: {e}\n{v:#}");
        }
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)));
    assert_eq!(v["exit_code"], code(&o));
    (code(&o), v)
}

#[test]
fn sqrt_two_as_json() {
    let s = Schemas::load();
    let (c, v) = json(&["sqrt", "2"]);
    assert_eq!(c, 0);
    s.envelope(&v);
    assert_eq!(v["command"], "sqrt");
    assert_eq!(v["result"]["outcome"]["kind"], "irrational");
    assert_eq!(v["result"]["strategy"], "PARITY_DEGREE");
    assert_eq!(v["trace"]["schema"], "parity-forge/trace/1");
}

#[test]
fn json_output_is_byte_stable() {
    for args in [&["sqrt", "12", "--json"][..], &["cbrt", "24", "--json"], &["prove", "sqrt2", "--json"]] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn every_command_emits_a_valid_envelope() {
    let s = Schemas::load();
    let cases: &[&[&str]] = &[
        &["decompose", "28"],
        &["decompose", "96", "--base", "3"],
        &["sqrt", "45"],
        &["sqrt", "45", "--strategies", "RESIDUE_SCAN"],
        &["cbrt", "216"],
        &["prime-base", "3", "12"],
        &["prime-base", "4", "12"],
        &["prove", "sqrt2", "--variant", "alexander"],
        &["egymul", "15", "13"],
        &["binary", "13"],
        &["table", "--rows", "3", "--cols", "4"],
        &["bijection", "encode", "2", "3"],
        &["bijection", "decode", "40"],
        &["perfect", "--max-k", "13"],
        &["unit-fractions", "28"],
        &["reduce", "9", "6"],
        &["failure-demo", "4"],
        &["decompose", "0"],
        &["decompose", "12x"],
        &["perfect", "--max-k", "40"],
        &["mutation-check", "--count", "50"],
    ];
    for args in cases {
        let (_, v) = json(args);
        s.envelope(&v);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["sqrt", "--help"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["sqrt", "2", "--bogus"])), 64);
    assert_eq!(code(&run(&["sqrt", "2", "--strategies", "PARITY_DEGREE,NEWTON"])), 64);
    assert_eq!(code(&run(&["sqrt", "2", "--strategies", "parity_degree"])), 64);
    assert_eq!(code(&run(&["sqrt", "-3"])), 64, "a leading dash reads as a flag");
    assert_eq!(code(&run(&["sqrt", "3.5"])), 2);
    assert_eq!(code(&run(&["sqrt", "0"])), 2);
    assert_eq!(code(&run(&["decompose", "0"])), 2);
    assert_eq!(code(&run(&["egymul", "0", "3"])), 2);
    assert_eq!(code(&run(&["bijection", "decode", "0"])), 2);
    assert_eq!(code(&run(&["unit-fractions", "12"])), 2);
    assert_eq!(code(&run(&["failure-demo", "7"])), 2);
    assert_eq!(code(&run(&["prime-base", "6", "12"])), 2);
    assert_eq!(code(&run(&["perfect", "--max-k", "40"])), 64);
    assert_eq!(code(&run(&["sqrt", "45", "--strategies", "RESIDUE_SCAN"])), 3);
    assert_eq!(code(&run(&["prime-base", "3", "36"])), 3);
    assert_eq!(code(&run(&["sqrt", "45"])), 0);
}

#[test]
fn text_outputs() {
    let o = stdout(&run(&["egymul", "15", "13"]));
    assert!(o.ends_with("total: 195\n"), "{o}");
    assert!(o.contains("120 + 60 + 15 = 195"));
    assert_eq!(stdout(&run(&["decompose", "40"])), "40 = 2^3 · 5\n");
    assert_eq!(stdout(&run(&["binary", "13"])), "13 = 2^3 + 2^2 + 2^0\n");
    assert_eq!(stdout(&run(&["bijection", "encode", "2", "3"])), "28\n");
    assert_eq!(stdout(&run(&["bijection", "decode", "40"])), "3 2\n");
    assert_eq!(stdout(&run(&["reduce", "9", "6"])), "9/6 = 3/2\n");
    assert_eq!(stdout(&run(&["unit-fractions", "6"])), "1 = 1/6 + 1/3 + 1/2\n");
    assert_eq!(stdout(&run(&["table", "--rows", "2", "--cols", "3"])), " 2  6 10\n 4 12 20\n");
    let perfect = stdout(&run(&["perfect", "--max-k", "13"]));
    let last: Vec<&str> = perfect.lines().map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(last, ["6", "28", "496", "8128"]);
    assert!(stdout(&run(&["failure-demo", "4"])).starts_with("4 = 2^2 is a square"));
    let sqrt = stdout(&run(&["sqrt", "2"]));
    assert!(sqrt.starts_with("√2 is irrational\nstrategy: PARITY_DEGREE\n"), "{sqrt}");
    assert!(sqrt.trim_end().ends_with("(Aristotle, An. pr. I, 23)"), "{sqrt}");
    assert!(stdout(&run(&["cbrt", "216"])).starts_with("∛216 = 6\n"));
}

#[test]
fn unbounded_numbers() {
    let big = format!("1{}", "0".repeat(60));
    let (c, v) = json(&["sqrt", &big]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["outcome"]["root"], format!("1{}", "0".repeat(30)));
    let (_, v) = json(&["decompose", "1267650600228229401496703205376"]);
    assert_eq!((v["result"]["degree"].as_u64(), v["result"]["cofactor"].as_str()), (Some(100), Some("1")));
}

#[test]
fn prove_then_check() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["parity", "standard", "alexander", "viii14"] {
        let envelope = dir.path().join(format!("{variant}.json"));
        let o = run(&["prove", "sqrt2", "--variant", variant, "--json"]);
        assert_eq!(code(&o), 0);
        std::fs::write(&envelope, &o.stdout).unwrap();
        let checked = run(&["check", envelope.to_str().unwrap()]);
        assert_eq!((code(&checked), stdout(&checked).as_str()), (0, "Accepted\n"), "{variant}");

        let file = dir.path().join(format!("{variant}.trace.json"));
        assert_eq!(code(&run(&["prove", "sqrt2", "--variant", variant, "--trace", file.to_str().unwrap()])), 0);
        assert_eq!(code(&run(&["check", file.to_str().unwrap()])), 0);
    }
}

#[test]
fn trace_files_check_render_and_reject_tampering() {
    let s = Schemas::load();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let path = file.to_str().unwrap();
    let (c, v) = json(&["sqrt", "12", "--trace", path]);
    assert_eq!(c, 0);
    assert_eq!(v["trace_file"], path);
    assert!(v.get("trace").is_none());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    s.trace(&doc);
    assert_eq!(stdout(&run(&["check", path])), "Accepted\n");

    let rendered = run(&["render", path, "--format", "json"]);
    assert_eq!(rendered.stdout, std::fs::read(&file).unwrap());
    assert!(stdout(&run(&["render", path])).starts_with("claim: "));

    let mut bad = doc.clone();
    bad["steps"][0]["rule"] = "ORACLE".into();
    std::fs::write(&file, bad.to_string()).unwrap();
    let o = run(&["check", path]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).starts_with("Rejected at step"), "{}", stdout(&o));
    assert_eq!(code(&run(&["render", path])), 4);

    std::fs::write(&file, "{ not json").unwrap();
    assert_eq!(code(&run(&["check", path])), 2);
    assert_eq!(code(&run(&["check", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn residue_cutoff_from_environment() {
    let residue = ["sqrt", "15", "--strategies", "RESIDUE_SCAN"];
    assert_eq!(code(&run(&residue)), 0);
    let low = bin().args(residue).env("PARITY_FORGE_RESIDUE_CUTOFF", "10").output().unwrap();
    assert_eq!(code(&low), 3);
    let bad = bin().args(residue).env("PARITY_FORGE_RESIDUE_CUTOFF", "ten").output().unwrap();
    assert_eq!(code(&bad), 64);
}

#[test]
fn mutation_check_passes_for_several_seeds() {
    for seed in ["0", "1", "2"] {
        let o = run(&["mutation-check", "--seed", seed]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).starts_with("1000 of 1000 mutations rejected"));
    }
}
