use std::path::{Path, PathBuf};
use std::process::Command;

use crooked::scalar::{parse_q, qi};
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("crooked-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn crooked(out: &Path, args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_crooked")).arg("--out").arg(out).args(args).output().unwrap();
    let stdout = String::from_utf8(o.stdout).unwrap();
    Run {
        code: o.status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn domain(dir: &Path, mu: &str, extra: &[&str]) -> Run {
    let mut args = vec!["domain", "--mu", mu];
    args.extend_from_slice(extra);
    crooked(dir, &args)
}

#[test]
fn level_two_domain_is_certified() {
    let dir = scratch("domain");
    let r = domain(&dir, "1,2,3", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["status"], "certified");
    assert_eq!(r.report["triple"]["planes"].as_array().unwrap().len(), 3);
    assert_eq!(r.report["triple"]["report"]["verified"], true);
    assert_eq!(r.report["triple"]["report"]["mu"], serde_json::json!(["1", "2", "3"]));
    assert_eq!(read(&dir.join("domain.json")), r.report);
}

#[test]
fn mixed_signs_exit_2_with_diagnostic() {
    let dir = scratch("mixed");
    let r = domain(&dir, "1,2,-3", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("same sign"), "{}", r.stderr);
    let written = read(&dir.join("domain.json"));
    assert_eq!(written["error"], "NonPositiveMu");
    assert_eq!(written["exit_code"], 2);
}

#[test]
fn vertices_scale_with_mu() {
    let dir = scratch("scale");
    let one = domain(&dir, "1,2,3", &[]).report;
    let two = domain(&dir, "2,4,6", &[]).report;
    for i in 0..3 {
        for k in 0..3 {
            let a = parse_q(one["triple"]["planes"][i]["p"][k].as_str().unwrap()).unwrap();
            let b = parse_q(two["triple"]["planes"][i]["p"][k].as_str().unwrap()).unwrap();
            assert_eq!(b, a * qi(2));
        }
    }
}

#[test]
fn float_mode_cannot_certify_asymptotic_triples() {
    // Adjacent planes of a triple share an ideal endpoint, so some frame
    // products vanish exactly; float signs within eps are refused.
    let dir = scratch("float");
    let r = crooked(&dir, &["--mode", "float", "domain", "--mu", "1,2,3", "--group", "pants:2,3,2"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["error"], "Indeterminate");
}

#[test]
fn pants_groups_give_certified_quads() {
    let dir = scratch("pants");
    for g in ["pants:2,3,2", "pants:2,c,3", "pants:c,c,c"] {
        let r = domain(&dir, "3,1,2", &["--group", g, "--quad"]);
        assert_eq!(r.code, 0, "{g}: {}", r.stderr);
        assert_eq!(r.report["quad"]["report"]["verified"], true);
        let d = dir.join("domain.json");
        let t = crooked(&dir, &["tile", "--domain", d.to_str().unwrap(), "--depth", "1", "--samples", "10"]);
        assert_eq!(t.code, 0, "{g}: {}", t.report);
    }
}

#[test]
fn bad_weights_and_groups_are_invalid_input() {
    let dir = scratch("weights");
    assert_eq!(domain(&dir, "1,2,3", &["--weights", "0,1/2,1/2"]).code, 2);
    assert_eq!(domain(&dir, "1,2", &[]).code, 2);
    assert_eq!(domain(&dir, "1,2,3", &["--group", "/nonexistent/group.json"]).code, 2);
    assert_eq!(domain(&dir, "1,2,3", &["--group", "pants:1,2,3"]).code, 2);
    let g = dir.join("g.json");
    std::fs::write(&g, r#"{"schema": 1, "generators": [{"sl2": [["1", "2"], ["0", "1"]]}, {"sl2": [["1", "2"], ["0", "1"]]}]}"#).unwrap();
    let r = domain(&dir, "1,2,3", &["--group", g.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["error"], "CoincidentAxes");
    std::fs::write(&g, r#"{"schema": 1, "generators": [{"sl2": [["2", "1"], ["1", "1"]]}, {"sl2": [["1", "0"], ["2", "1"]]}]}"#).unwrap();
    let r = domain(&dir, "1,2,3", &["--group", g.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.report["message"].as_str().unwrap().contains("--mode float"));
    std::fs::write(&g, r#"{"schema": 2, "generators": []}"#).unwrap();
    assert_eq!(domain(&dir, "1,2,3", &["--group", g.to_str().unwrap()]).code, 2);
}

#[test]
fn group_file_matches_builtin_level_two() {
    let dir = scratch("groupfile");
    let g = dir.join("level2.json");
    std::fs::write(
        &g,
        r#"{"schema": 1, "generators": [{"sl2": [[-1, -2], [0, -1]]}, {"sl2": [["-1", "0"], ["2", "-1"]]}], "scales": [1, 1, 2]}"#,
    )
    .unwrap();
    let from_file = domain(&dir, "1,2,3", &["--group", g.to_str().unwrap()]).report;
    let builtin = domain(&dir, "1,2,3", &[]).report;
    assert_eq!(from_file["triple"], builtin["triple"]);
}

#[test]
fn sp4_reproduces_the_printed_matrices() {
    let dir = scratch("sp4");
    let r = crooked(&dir, &["sp4", "--mu", "1,2,3", "--latex"]);
    // The printed generators realize (1, 2, -3), so the run is a verification failure.
    assert_eq!(r.code, 3);
    let c = &r.report["checks"];
    assert_eq!(c["matches_printed"], true);
    assert_eq!(c["symplectic"], true);
    assert_eq!(c["normalizes_u"], true);
    assert_eq!(c["margulis_matches"], false);
    assert_eq!(r.report["margulis"], serde_json::json!(["1", "2", "-3"]));
    let g1 = &r.report["gamma1"];
    let g2 = &r.report["gamma2"];
    let block = |g: &Value| [[g[0][2].clone(), g[0][3].clone()], [g[1][2].clone(), g[1][3].clone()]];
    assert_eq!(serde_json::json!(block(g1)), serde_json::json!([["0", "0"], ["2", "-1"]]));
    assert_eq!(serde_json::json!(block(g2)), serde_json::json!([["-2", "-4"], ["0", "0"]]));
    let tex = std::fs::read_to_string(dir.join("sp4.tex")).unwrap();
    assert!(tex.contains("\\begin{pmatrix}"));
}

#[test]
fn sp4_corrected_checks_pass() {
    let dir = scratch("sp4c");
    let r = crooked(&dir, &["sp4", "--mu", "1,1,1", "--corrected"]);
    assert_eq!(r.code, 0, "{}", r.report);
    assert_eq!(r.report["margulis"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(r.report["status"], "pass");
}

#[test]
fn sp4_rejects_non_positive() {
    let dir = scratch("sp4z");
    let r = crooked(&dir, &["sp4", "--mu", "0,1,1"]);
    assert_eq!(r.code, 2);
    assert_eq!(read(&dir.join("sp4.json"))["error"], "NonPositiveInteger");
    assert_eq!(crooked(&dir, &["sp4", "--mu", "1,x,1"]).code, 2);
}

#[test]
fn mesh_writes_deterministic_objs() {
    let dir = scratch("mesh");
    assert_eq!(domain(&dir, "1,2,3", &[]).code, 0);
    let d = dir.join("domain.json");
    let out = dir.join("m");
    let r = crooked(&out, &["mesh", "--domain", d.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let files = r.report["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);
    let mut first = Vec::new();
    for f in files {
        assert!(f["faces"].as_u64().unwrap() > 0);
        let text = std::fs::read_to_string(out.join(f["file"].as_str().unwrap())).unwrap();
        assert!(text.lines().any(|l| l.starts_with("f ")));
        first.push(text);
    }
    let scene = std::fs::read_to_string(out.join("scene.obj")).unwrap();
    assert_eq!(scene.lines().filter(|l| l.starts_with("o ")).count(), 3);
    crooked(&out, &["mesh", "--domain", d.to_str().unwrap()]);
    for (f, before) in files.iter().zip(&first) {
        assert_eq!(&std::fs::read_to_string(out.join(f["file"].as_str().unwrap())).unwrap(), before);
    }
}

#[test]
fn zero_radius_mesh_is_empty_with_warning() {
    let dir = scratch("mesh0");
    domain(&dir, "1,2,3", &[]);
    let r = crooked(&dir, &["mesh", "--domain", dir.join("domain.json").to_str().unwrap(), "--radius", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"));
    assert_eq!(r.report["warnings"].as_array().unwrap().len(), 1);
    assert!(r.report["files"].as_array().unwrap().iter().all(|f| f["faces"] == 0));
}

#[test]
fn malformed_domain_is_invalid_input() {
    let dir = scratch("malformed");
    let d = dir.join("domain.json");
    std::fs::write(&d, "{\"schema\": 1, \"triple\": 5}").unwrap();
    assert_eq!(crooked(&dir, &["mesh", "--domain", d.to_str().unwrap()]).code, 2);
    assert_eq!(crooked(&dir, &["tile", "--domain", d.to_str().unwrap()]).code, 2);
}

fn quad_domain(dir: &Path) -> PathBuf {
    let r = domain(dir, "1,2,3", &["--quad", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["quad"]["report"]["verified"], true);
    dir.join("domain.json")
}

#[test]
fn quad_domain_is_deterministic() {
    let dir = scratch("det");
    let d = quad_domain(&dir);
    let before = std::fs::read(&d).unwrap();
    quad_domain(&dir);
    assert_eq!(std::fs::read(&d).unwrap(), before);
}

#[test]
fn tile_depth_zero_is_vacuous() {
    let dir = scratch("tile0");
    let d = quad_domain(&dir);
    let r = crooked(&dir, &["tile", "--domain", d.to_str().unwrap(), "--depth", "0", "--samples", "10"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["words"], 1);
    assert_eq!(r.report["intersections"].as_array().unwrap().len(), 0);
}

#[test]
fn tile_depth_two_is_clean() {
    let dir = scratch("tile2");
    let d = quad_domain(&dir);
    let r = crooked(&dir, &["--jobs", "2", "tile", "--domain", d.to_str().unwrap(), "--depth", "2", "--samples", "20"]);
    assert_eq!(r.code, 0, "{}", r.report);
    assert_eq!(r.report["words"], 17);
    assert_eq!(r.report["clean"], true);
}

#[test]
fn corrupted_domain_is_caught() {
    let dir = scratch("corrupt");
    let d = quad_domain(&dir);
    let mut doc = read(&d);
    let moved = doc["quad"]["halfspaces"][0]["p"].clone();
    doc["quad"]["halfspaces"][1]["p"] = moved;
    let bad = dir.join("corrupt.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let r = crooked(&dir, &["tile", "--domain", bad.to_str().unwrap(), "--depth", "1", "--samples", "0"]);
    assert_eq!(r.code, 3);
    assert!(!r.report["intersections"].as_array().unwrap().is_empty());
    assert_eq!(read(&dir.join("tile.json"))["clean"], false);
}

#[test]
fn tile_needs_a_quad_section() {
    let dir = scratch("noquad");
    domain(&dir, "1,2,3", &[]);
    let r = crooked(&dir, &["tile", "--domain", dir.join("domain.json").to_str().unwrap()]);
    assert_eq!(r.code, 2);
}

#[test]
fn classify_reads_both_models() {
    let dir = scratch("classify");
    assert_eq!(crooked(&dir, &["classify", "--sl2", "2,1;1,1"]).report["class"], "hyperbolic");
    assert_eq!(crooked(&dir, &["classify", "--sl2", "1,2;0,1"]).report["class"], "parabolic");
    assert_eq!(crooked(&dir, &["classify", "--sl2", "0,-1;1,0"]).report["class"], "elliptic");
    assert_eq!(crooked(&dir, &["classify", "--so21", "1,0,0;0,1,0;0,0,1"]).report["class"], "identity");
    assert_eq!(crooked(&dir, &["classify", "--sl2", "2,0;0,1"]).code, 2);
    assert_eq!(crooked(&dir, &["classify", "--so21", "2,0,0;0,1,0;0,0,1"]).code, 2);
}

#[test]
fn margulis_exact_and_float_agree() {
    let dir = scratch("margulis");
    let args = ["margulis", "--sl2", "2,1;1,1", "--trans", "1,-2,3"];
    let exact = crooked(&dir, &args).report;
    let mut fargs = vec!["--mode", "float"];
    fargs.extend_from_slice(&args);
    let float = crooked(&dir, &fargs).report;
    let (a, b) = (exact["alpha_approx"].as_f64().unwrap(), float["alpha_approx"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-9, "{a} {b}");
    assert_eq!(exact["sign"], float["sign"]);
    let g = crooked(&dir, &["margulis", "--group", "level-two", "--u1", "1,0,0", "--u2", "0,1,-1"]).report;
    assert_eq!(g["same_sign"], false);
}

#[test]
fn check_disjoint_on_domain_planes() {
    let dir = scratch("pair");
    let d = domain(&dir, "1,2,3", &[]).report;
    let planes = &d["triple"]["planes"];
    let vec = |v: &Value| v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect::<Vec<_>>().join(",");
    let (v1, p1, v2, p2) = (vec(&planes[0]["v"]), vec(&planes[0]["p"]), vec(&planes[1]["v"]), vec(&planes[1]["p"]));
    let r = crooked(&dir, &["check-disjoint", "--v1", &v1, "--p1", &p1, "--v2", &v2, "--p2", &p2]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["oracle"]["verdict"], "disjoint");
    assert_eq!(r.report["closed_form_disjoint"], true);
    let r = crooked(&dir, &["check-disjoint", "--v1", &v1, "--p1", &p1, "--v2", &v2, "--p2", &p1]);
    assert_eq!(r.report["oracle"]["verdict"], "intersect");
    assert_eq!(r.report["closed_form_disjoint"], false);
    assert_eq!(r.report["agree"], true);
}

#[test]
fn usage_errors_exit_2() {
    let dir = scratch("usage");
    let r = crooked(&dir, &["domain"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["error"], "Usage");
    assert_eq!(crooked(&dir, &["--eps", "0", "sp4", "--mu", "1,2,3"]).code, 2);
}
