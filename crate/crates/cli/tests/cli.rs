use std::path::PathBuf;
use std::process::Command;

use osbc::projective::{multizeta_biarrangement, weight_graded_motive};
use osbc_cli::{parse_arrangement_file, run, ArrangementFile};
use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["osbc"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

const FILES: [&str; 5] = [
    "concurrent_lines.arr",
    "not_exact.arr",
    "exact_recolored.arr",
    "generic_lines.arr",
    "not_exact_projective.arr",
];

#[test]
fn analyze_concurrent_lines() {
    let (code, v) = json(&["analyze", &data("concurrent_lines.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["strata"].as_array().unwrap().len(), 5);
    assert_eq!(v["higher_irreducibles"].as_array().unwrap().len(), 1);
    assert_eq!(v["circuits"].as_array().unwrap().len(), 1);
}

#[test]
fn check_reports_witness() {
    let (code, v) = json(&["check", &data("not_exact.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["exactness"]["exact"], false);
    assert_eq!(v["tameness"]["tame"], false);
    let w = &v["exactness"]["first_failure"]["witness"];
    assert_eq!(w["direction"], "row");
    assert_eq!(w["index"], 0);
    assert_eq!(w["sequence"], "0→0→ℚ→ℚ³→ℚ→0");

    let (code, v) = json(&["check", &data("exact_recolored.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["exactness"]["exact"], true);
    assert_eq!(v["tameness"]["tame"], false);
}

#[test]
fn oscomplex_dims() {
    let (code, v) = json(&["oscomplex", &data("concurrent_lines.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["identities"], "ok");
    // Constant λ coloring: the Orlik–Solomon algebra, 1 + 3t + 2t².
    assert_eq!(v["totals"], serde_json::json!([[1, 0, 0], [3, 0, 0], [2, 0, 0]]));
}

#[test]
fn multizeta_two() {
    let (code, v) = json(&["multizeta", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["table"][2], serde_json::json!([1, 0, 1]));
    assert_eq!(v["betti"], serde_json::json!([0, 0, 2, 0, 0]));
    let lib = weight_graded_motive(&multizeta_biarrangement(&[2]).unwrap()).unwrap();
    for method in ["lambda", "mu"] {
        let (code, w) = json(&["multizeta", "2", "--method", method]);
        assert_eq!(code, 0);
        assert_eq!(w["table"], v["table"]);
    }
    assert_eq!(v["table"], serde_json::to_value(&lib.entries).unwrap());
}

#[test]
fn multizeta_description_round_trips() {
    let pb = multizeta_biarrangement(&[2]).unwrap();
    let text = ArrangementFile::from_projective(&pb).to_text();
    let f = parse_arrangement_file(&text).unwrap();
    assert_eq!(f.hyperplanes.len(), 6);
    assert_eq!(f.colors.len(), 4);
    assert!(f.projective);
    let back = f.to_projective().unwrap();
    assert_eq!(
        weight_graded_motive(&back).unwrap(),
        weight_graded_motive(&pb).unwrap()
    );
}

#[test]
fn corpus_files_round_trip() {
    for name in FILES {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let f = parse_arrangement_file(&text).unwrap();
        let g = parse_arrangement_file(&f.to_text()).unwrap();
        assert_eq!(f.dim, g.dim);
        assert_eq!(f.hyperplanes, g.hyperplanes);
        assert_eq!(f.projective, g.projective);
        let colors = |x: &ArrangementFile| x.colors.iter().map(|c| (c.labels.clone(), c.color)).collect::<Vec<_>>();
        assert_eq!(colors(&f), colors(&g), "{name}");
        if !f.projective {
            let a = f.to_biarrangement().unwrap();
            let b = ArrangementFile::from_biarrangement(&a);
            let c = parse_arrangement_file(&b.to_text()).unwrap().to_biarrangement().unwrap();
            assert_eq!(a.irreducible_colors(), c.irreducible_colors(), "{name}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for name in FILES {
        for cmd in ["analyze", "oscomplex", "check", "blowup"] {
            for format in ["json", "tsv"] {
                let a = run(["osbc", cmd, "--format", format, &data(name)]);
                let b = run(["osbc", cmd, "--format", format, &data(name)]);
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn blowup_trace() {
    let (code, v) = json(&["blowup", "--trace", &data("not_exact.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["higher_irreducibles"], 3);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    assert!(steps.iter().all(|s| s["identities"] == "ok" && s["dims"].is_array()));
    let (_, w) = json(&["blowup", "--order", "last", &data("not_exact.arr")]);
    assert_eq!(v["terminal"], w["terminal"]);
}

#[test]
fn exit_codes() {
    let (code, v) = json(&["motive", &data("not_exact_projective.arr")]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "failed precondition");
    let (code, _) = json(&["motive", &data("generic_lines.arr")]);
    assert_eq!(code, 0);
    let (code, _) = json(&["motive", "--method", "mu", &data("generic_lines.arr")]);
    assert_eq!(code, 1);
    let (code, _) = json(&["analyze", &data("missing.arr")]);
    assert_eq!(code, 2);
    let (code, _) = json(&["multizeta", "2", "1"]);
    assert_eq!(code, 2);
    let (code, _) = json(&["analyze", "--max-hyperplanes", "2", &data("concurrent_lines.arr")]);
    assert_eq!(code, 2);
    let out = run(["osbc", "frobnicate"]);
    assert_eq!(out.code, 2);
}

#[test]
fn tsv_output() {
    let out = run(["osbc", "--format", "tsv", "multizeta", "2"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "schema\t1");
    assert!(lines.contains(&"table.2.0\t1"));
    assert!(lines.contains(&"table.2.2\t1"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_osbc");
    let ok = Command::new(bin).args(["analyze", &data("concurrent_lines.arr")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"schema\": 1"));
    let bad = Command::new(bin).args(["motive", &data("not_exact_projective.arr")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let parse = Command::new(bin).args(["check", &data("nope.arr")]).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
}
