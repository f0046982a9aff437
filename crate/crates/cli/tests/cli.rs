use std::path::PathBuf;
use std::process::Command;

use jsonschema::JSONSchema;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semple_cli::parse::parse_curve;
use semple_cli::{run, Outcome, EXIT_DOMAIN, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn semple(args: &[&str]) -> Outcome {
    let mut argv = vec!["semple"];
    argv.extend_from_slice(args);
    run(&argv)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut with = args.to_vec();
    with.push("--json");
    let out = semple(&with);
    let value = serde_json::from_str(out.stdout.trim())
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {:?}", out.stdout));
    (out.code, value)
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::compile(&doc).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, value: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    panic!("{name} schema rejects {value}: {msgs:?}");
}

#[test]
fn outputs_match_their_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("pc", &["pc", "t^4, t^6 + t^7"]),
        ("rvt", &["rvt", "t^4, t^5"]),
        ("rvt", &["rvt", "t^3, t^5", "--depth", "3"]),
        ("prolong", &["prolong", "t^3, t^5", "--depth", "6"]),
        ("mult-seq", &["mult-seq", "t^5, t^7"]),
        ("convert", &["convert", "der2pc", "1", "1", "2"]),
        ("convert", &["convert", "sgv2der", "2", "3", "4", "4"]),
        ("convert", &["convert", "der2sgv", "1", "2"]),
        ("validate", &["validate", "RVTT"]),
        ("validate", &["validate", "RVL1L2", "--tower", "spatial"]),
        ("count", &["count", "--tower", "spatial", "--level", "5"]),
        ("milnor-block", &["milnor", "block", "3", "5", "2"]),
        ("milnor-chain", &["milnor", "chain", "2,1", "1,1"]),
        ("milnor-check", &["milnor", "check", "RVT"]),
        ("search", &["search", "RVVT"]),
        (
            "cohomology-betti",
            &["cohomology", "betti", "--levels", "5"],
        ),
        (
            "cohomology-reduce",
            &[
                "cohomology",
                "reduce",
                "x3^2 - x1",
                "--levels",
                "3",
                "--c1",
                "3:1,2",
            ],
        ),
        (
            "cohomology-product",
            &["cohomology", "product", "--levels", "2"],
        ),
        ("error", &["pc", "t^2,"]),
        ("error", &["pc", "1 + t, t^2"]),
        ("error", &["search", "RVR"]),
    ];
    for (name, args) in cases {
        let (_, value) = json(args);
        assert_valid(name, &value);
    }
}

#[test]
fn exit_codes_by_error_class() {
    assert_eq!(semple(&["pc", "t^2, t^3"]).code, EXIT_OK);
    // usage
    assert_eq!(semple(&["pc"]).code, EXIT_USAGE);
    assert_eq!(semple(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(
        semple(&["count", "--tower", "planar", "--level", "0"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        semple(&["--threads", "0", "pc", "t^2, t^3"]).code,
        EXIT_USAGE
    );
    // parse and malformed input
    assert_eq!(semple(&["pc", "t^2 t^3"]).code, EXIT_USAGE);
    assert_eq!(semple(&["validate", "RVX"]).code, EXIT_USAGE);
    assert_eq!(semple(&["validate", "RVL"]).code, EXIT_USAGE);
    assert_eq!(semple(&["convert", "der2pc", "2", "1"]).code, EXIT_USAGE);
    assert_eq!(semple(&["convert", "sgv2der", "3", "4"]).code, EXIT_USAGE);
    assert_eq!(semple(&["milnor", "chain", "1,0"]).code, EXIT_USAGE);
    assert_eq!(
        semple(&["cohomology", "reduce", "x4", "--levels", "3"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        semple(&["cohomology", "betti", "--levels", "2", "--c1", "2:1,1"]).code,
        EXIT_USAGE
    );
    // domain
    assert_eq!(semple(&["pc", "1 + t, t^2"]).code, EXIT_DOMAIN);
    assert_eq!(semple(&["pc", "t^2, t^4"]).code, EXIT_DOMAIN);
    assert_eq!(semple(&["pc", "t^2, 0"]).code, EXIT_DOMAIN);
    assert_eq!(semple(&["search", "RT"]).code, EXIT_DOMAIN);
    assert_eq!(semple(&["search", "RVR"]).code, EXIT_USAGE);
    // not found and inconclusive
    assert_eq!(
        semple(&["search", "RVT^3", "--bounds", "a=4"]).code,
        EXIT_NOT_FOUND
    );
    let out = semple(&["milnor", "check", "RVT^3", "--bounds", "a=4"]);
    assert_eq!(out.code, EXIT_NOT_FOUND);
    assert!(out.stdout.contains("inconclusive"), "{}", out.stdout);
}

#[test]
fn help_and_version_succeed() {
    let out = semple(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("milnor"));
    assert_eq!(semple(&["--version"]).code, EXIT_OK);
}

#[test]
fn errors_in_json_mode_go_to_stdout() {
    let (code, v) = json(&["pc", "t^2, t^"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["position"], 7);
    let text = semple(&["pc", "t^2, t^"]);
    assert!(text.stdout.is_empty());
    assert!(text.stderr.starts_with("error: parse error at position 7"));
}

#[test]
fn exhausted_precision_suggests_more() {
    let (code, v) = json(&["--trunc", "7", "rvt", "t^2, t^3 + t^5", "--depth", "8"]);
    assert_eq!(code, EXIT_DOMAIN, "{v}");
    assert_eq!(v["error"]["trunc"], 7);
    assert_eq!(v["error"]["suggested_trunc"], 14);
}

#[test]
fn text_and_json_agree() {
    let scalar = |args: &[&str], key: &str| {
        let text = semple(args).stdout.trim().to_string();
        let (_, v) = json(args);
        let field = match &v[key] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert_eq!(text, field, "{args:?}");
    };
    scalar(&["pc", "t^24, t^90 + t^94 + t^103"], "characteristic");
    scalar(&["rvt", "t^4, t^7"], "code");
    scalar(&["milnor", "block", "3", "5", "2"], "mu");
    scalar(&["milnor", "chain", "2,1", "3,1", "1,1", "1,3"], "mu");
    scalar(&["count", "--tower", "planar", "--level", "20"], "count");
    scalar(
        &[
            "cohomology",
            "reduce",
            "x2^3",
            "--levels",
            "2",
            "--c1",
            "2:-2",
        ],
        "normal_form",
    );

    let text = semple(&["mult-seq", "t^7, t^10"]).stdout;
    let (_, v) = json(&["mult-seq", "t^7, t^10"]);
    let seq: Vec<String> = v["sequence"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n.to_string())
        .collect();
    assert_eq!(text.trim(), seq.join(" "));
    assert_eq!(text.trim(), "7 3 3 1");
}

#[test]
fn big_values_are_strings() {
    let (_, v) = json(&["count", "--tower", "planar", "--level", "200"]);
    let count = v["count"].as_str().unwrap();
    assert!(count.len() > 40, "{count}");
    let (_, v) = json(&["milnor", "block", "40", "60", "90"]);
    assert!(v["mu"].is_string());
}

#[test]
fn search_finds_least_witness() {
    let out = semple(&["search", "RVT^4"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.trim(), "t^6, t^7");
    let (_, v) = json(&["search", "RVTRVT"]);
    assert_eq!(v["witness"]["x"], "t^9");
    assert_eq!(v["witness"]["y"], "t^12 + t^13");
}

fn random_expression(rng: &mut ChaCha8Rng) -> String {
    let coeffs = ["1", "-1", "2", "(1/2)", "(-3/5)", "7"];
    let poly = |rng: &mut ChaCha8Rng| {
        let terms = rng.gen_range(1..=3);
        let mut s = String::new();
        for i in 0..terms {
            let e = rng.gen_range(1..=30);
            let c = coeffs[rng.gen_range(0..coeffs.len())];
            if i > 0 {
                s.push_str(" + ");
            }
            s.push_str(&format!("{c}*t^{e}"));
        }
        s
    };
    let x = poly(rng);
    let y = poly(rng);
    format!("{x}, {y}")
}

#[test]
fn printed_curves_parse_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let src = random_expression(&mut rng);
        let Ok(c) = parse_curve(&src, None) else {
            continue;
        };
        let printed = c.germ.to_string();
        let again = parse_curve(&printed, Some(c.trunc)).unwrap();
        assert_eq!(again.germ, c.germ, "{src} -> {printed}");
        assert_eq!(again.germ.to_string(), printed);
    }
}

proptest! {
    #[test]
    fn parser_never_panics(s in "[t0-9^+*(), /-]{0,24}") {
        let _ = parse_curve(&s, None);
    }

    #[test]
    fn monomial_curves_round_trip(a in 1u32..30, b in 1u32..60) {
        let c = parse_curve(&format!("t^{a}, t^{b}"), None).unwrap();
        let again = parse_curve(&c.germ.to_string(), Some(c.trunc)).unwrap();
        prop_assert_eq!(again.germ, c.germ);
    }
}

fn anchors_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/anchors.txt")
}

#[test]
fn corpus_runs_in_order() {
    let file = anchors_file();
    let out = semple(&["--threads", "4", "corpus", "run", file.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<Value> = out
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let task_lines = std::fs::read_to_string(&file)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
        .count();
    assert_eq!(lines.len(), task_lines);
    let line_numbers: Vec<u64> = lines.iter().map(|v| v["line"].as_u64().unwrap()).collect();
    assert!(line_numbers.windows(2).all(|w| w[0] < w[1]));
    for v in &lines {
        assert_valid("corpus-line", v);
        if v["exit"] != 0 {
            assert_valid("error", &v["output"]);
        }
    }
    assert_eq!(lines[0]["output"]["characteristic"], "[4; 6, 7]");
    assert_eq!(lines[1]["output"]["characteristic"], "[24; 90, 94, 103]");
    let last_error = lines.iter().find(|v| v["exit"] == EXIT_DOMAIN).unwrap();
    assert_eq!(last_error["output"]["error"]["kind"], "domain");

    // thread count does not change the answers
    let serial = semple(&["corpus", "run", file.to_str().unwrap()]);
    let strip = |s: &str| -> Vec<Value> {
        s.lines()
            .map(|l| {
                let mut v: Value = serde_json::from_str(l).unwrap();
                if let Some(o) = v["output"].as_object_mut() {
                    o.remove("elapsed_ms");
                }
                v
            })
            .collect()
    };
    assert_eq!(strip(&serial.stdout), strip(&out.stdout));
}

#[test]
fn corpus_rejects_bad_lines() {
    let dir = std::env::temp_dir().join(format!("semple-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.txt");
    std::fs::write(&file, "pc t^2, t^3\ncorpus run | x.txt\nvalidate | 'RV\n").unwrap();
    let out = semple(&["corpus", "run", file.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    for l in out.stdout.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["exit"], EXIT_USAGE);
        assert_valid("error", &v["output"]);
    }
    let missing = semple(&["corpus", "run", dir.join("none.txt").to_str().unwrap()]);
    assert_eq!(missing.code, EXIT_USAGE);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_reports_exit_status() {
    let bin = env!("CARGO_BIN_EXE_semple");
    let ok = Command::new(bin).args(["pc", "t^2, t^3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "[2; 3]");
    let bad = Command::new(bin).args(["pc", "1 + t, t"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_DOMAIN));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
