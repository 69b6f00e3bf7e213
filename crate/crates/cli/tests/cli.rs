use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BAND: [&str; 6] = ["--fmin", "0.1", "--fmax", "100", "--npoints", "12"];

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srgcert"))
        .args(args)
        .args(BAND)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn margins(dir: &Path) -> Vec<f64> {
    let text = fs::read_to_string(dir.join("margin.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("f_hz,rho"));
    lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

fn criterion<'a>(rows: &'a Value, name: &str) -> &'a str {
    rows.as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no {name} row"))["outcome"]
        .as_str()
        .unwrap()
}

#[test]
fn identity_converter_on_stiff_grid_is_certified() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--grid", &fixture("grid_5i.json")], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("certified: worst margin 5 at "));
    let m = margins(tmp.path());
    assert_eq!(m.len(), 12);
    assert!(m.iter().all(|x| (x - 5.0).abs() < 1e-9), "{m:?}");
    let r = report(tmp.path());
    assert_eq!(r["report"]["verdict"], "certified");
    let inputs = r["provenance"]["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 2);
    for i in inputs {
        let h = i["sha256"].as_str().unwrap();
        assert!(h.len() == 64 && h.chars().all(|c| c.is_ascii_hexdigit()));
    }
    assert_eq!(r["report"]["frequencies"]["omegas"].as_array().unwrap().len(), 12);
    assert_eq!(r["provenance"]["tau_grid"].as_array().unwrap().len(), 64);
}

#[test]
fn negative_converter_is_not_certified() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["certify", "--converter", &fixture("yc_neg_identity.json"), "--grid", &fixture("grid_half.json")], tmp.path());
    assert_eq!(code(&o), 2);
    let r = report(tmp.path());
    assert_eq!(r["report"]["verdict"], "not-certified");
    assert_eq!(r["report"]["worst"]["margin"].as_f64(), Some(0.0));
}

#[test]
fn scr_grid_source() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--scr", "2"], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(margins(tmp.path()).iter().all(|x| (x - 2.0).abs() < 1e-9));
}

#[test]
fn cscr_of_negative_half_identity() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["cscr", "--converter", &fixture("yc_neg_half.json")], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("cSCR = 0.5 at "), "{}", stdout(&o));
    let r = report(tmp.path());
    assert!((r["cscr"]["cscr"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(tmp.path().join("reach.csv").exists());
}

#[test]
fn cscr_of_lossless_converter_is_unconstrained() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["cscr", "--converter", &fixture("yc_skew.json")], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("cSCR: no constraint"));
}

#[test]
fn compare_contractive_passive_pair() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["compare", "--converter", &fixture("yc_contractive.json"), "--grid", &fixture("grid_passive.json")], tmp.path());
    assert_eq!(code(&o), 0);
    let rows = &report(tmp.path())["comparison"]["report"]["criteria"];
    for name in ["srg", "gnc", "small_gain", "small_phase", "passivity"] {
        assert_eq!(criterion(rows, name), "pass", "{name}");
    }
    let table = fs::read_to_string(tmp.path().join("comparison.txt")).unwrap();
    assert!(stdout(&o).starts_with(&table));
}

#[test]
fn compare_lossless_converter_with_rl_grid() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["compare", "--converter", &fixture("yc_skew.json"), "--grid", &fixture("grid_rl.json")], tmp.path());
    assert_eq!(code(&o), 0);
    let cmp = &report(tmp.path())["comparison"];
    let rows = &cmp["report"]["criteria"];
    assert_eq!(criterion(rows, "srg"), "pass");
    assert_eq!(criterion(rows, "passivity"), "pass");
    assert_eq!(criterion(rows, "gnc"), "pass");
    // IFP of a lossless converter is 0, so the first condition has no slack.
    for x in cmp["passivity"]["ifp_converter"].as_array().unwrap() {
        assert!(x.as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn compare_non_sectorial_converter() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["compare", "--converter", &fixture("yc_nonsectorial.json"), "--scr", "5"], tmp.path());
    assert_eq!(code(&o), 0);
    let r = report(tmp.path());
    let rows = &r["comparison"]["report"]["criteria"];
    assert_eq!(criterion(rows, "small_phase"), "inapplicable");
    let bands = rows.as_array().unwrap().iter().find(|c| c["name"] == "small_phase").unwrap()["inapplicable_bands"]
        .as_array()
        .unwrap()
        .len();
    assert_eq!(bands, 1);
    assert!(margins(tmp.path()).iter().all(|m| m.is_finite() && *m > 0.0));
}

#[test]
fn certify_with_constant_power_load() {
    let tmp = TempDir::new().unwrap();
    let args = [
        "certify-cpl",
        "--converter",
        &fixture("yc_identity.json"),
        "--grid",
        &fixture("yl_5i.json"),
        "--cpl",
        "0.1,0.1,1",
        "--rho",
        "0.05",
    ];
    let o = run(&args, tmp.path());
    assert_eq!(code(&o), 0);
    let expected = 5.0 - 0.02f64.sqrt();
    assert!(margins(tmp.path()).iter().all(|m| (m - expected).abs() < 1e-6), "{:?}", margins(tmp.path()));
    let cpl = &report(tmp.path())["report"]["diagnostics"]["cpl"];
    assert!((cpl["disk_radius"].as_f64().unwrap() - 0.02f64.sqrt()).abs() < 1e-15);
    assert!(cpl["epsilon"].as_f64().is_some());
}

#[test]
fn network_grid_is_indeterminate() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--network", &fixture("feeder.json")], tmp.path());
    assert_eq!(code(&o), 3);
    assert_eq!(report(tmp.path())["report"]["verdict"], "indeterminate");
    assert!(margins(tmp.path()).iter().all(|m| *m > 0.0));
}

#[test]
fn kron_output_feeds_back_as_a_grid() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["kron", "--network", &fixture("feeder.json")], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(2x2) at 12 frequencies"));
    let reduced = tmp.path().join("reduced.json");
    let csv = fs::read_to_string(tmp.path().join("reduced.csv")).unwrap();
    assert!(csv.starts_with("f_hz,re11,im11,re12,im12,re21,im21,re22,im22"));

    let (model, label) = srgcert::lti::load_model(&reduced).unwrap();
    assert_eq!(label.as_deref(), Some("reduced"));
    let case = srgcert::grid::load_network(Path::new(&fixture("feeder.json"))).unwrap();
    let doc: Value = serde_json::from_str(&fs::read_to_string(&reduced).unwrap()).unwrap();
    let w = doc["samples"][3]["omega"].as_f64().unwrap();
    let direct = case.reduced_admittance(w).unwrap();
    let via_file = srgcert::FrequencyResponse::response(&model, w).unwrap();
    assert!((direct.inner() - via_file.inner()).norm() <= 1e-12 * direct.inner().norm());

    let again = TempDir::new().unwrap();
    let reduced = reduced.display().to_string();
    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--grid", &reduced], again.path());
    assert!(matches!(code(&o), 0 | 3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn kron_boundary_override() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["kron", "--network", &fixture("feeder.json"), "--boundary", "0,2"], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(4x4)"));
    assert!(!tmp.path().join("reduced.csv").exists());
    assert_eq!(report(tmp.path())["boundary"], serde_json::json!([0, 2]));
}

#[test]
fn srg_export_writes_boundaries() {
    let tmp = TempDir::new().unwrap();
    let args = ["srg-export", "--converter", &fixture("yc_contractive.json"), "--scr", "2", "--samples", "50"];
    let o = run(&args, tmp.path());
    assert_eq!(code(&o), 0);
    let files: Vec<String> = report(tmp.path())["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert_eq!(files.len(), 24);
    let first = fs::read_to_string(tmp.path().join(&files[0])).unwrap();
    assert!(first.starts_with("freq_hz,re,im,region_id,filled\n"));
    for id in ["converter", "swept", "grid"] {
        assert!(first.lines().any(|l| l.split(',').nth(3) == Some(id)), "{id}");
    }
    let samples = fs::read_to_string(tmp.path().join(&files[1])).unwrap();
    // Each draw contributes a conjugate pair.
    assert_eq!(samples.lines().count(), 1 + 2 * 50);
    assert!(tmp.path().join("margin.csv").exists());
}

#[test]
fn srg_export_without_grid() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["srg-export", "--converter", &fixture("yc_identity.json")], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(!tmp.path().join("margin.csv").exists());
    assert!(tmp.path().join("boundary/f0011.csv").exists());
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = [
        "srg-export",
        "--converter",
        &fixture("yc_nonsectorial.json"),
        "--grid",
        &fixture("grid_passive.json"),
        "--samples",
        "20",
        "--seed",
        "7",
    ];
    assert_eq!(code(&run(&args, a.path())), code(&run(&args, b.path())));
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert!(!sa.is_empty());
    assert_eq!(sa, sb);
}

#[test]
fn input_errors_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["certify", "--converter", &fixture("broken.json"), "--scr", "2"], tmp.path());
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json") && err.contains("extra"), "{err}");

    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--scr", "2", "--grid", &fixture("grid_5i.json")], tmp.path());
    assert_eq!(code(&o), 1);
    let o = run(&["certify", "--converter", &fixture("yc_identity.json")], tmp.path());
    assert_eq!(code(&o), 1);
    let o = run(&["certify-cpl", "--converter", &fixture("yc_identity.json"), "--grid", &fixture("yl_5i.json"), "--cpl", "0.1,0.1"], tmp.path());
    assert_eq!(code(&o), 1);
    let o = run(&["certify", "--converter", &fixture("missing.json"), "--scr", "2"], tmp.path());
    assert_eq!(code(&o), 1);
    let o = run(&["certify", "--converter", &fixture("yc_identity.json"), "--grid", &fixture("grid_5i.json"), "--tau-points", "0"], tmp.path());
    assert_eq!(code(&o), 1);
}
