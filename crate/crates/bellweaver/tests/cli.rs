//! End-to-end runs of the binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bellweaver(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellweaver"))
        .args(args)
        .current_dir(dir)
        .env_remove("BELLWEAVER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = bellweaver(dir, args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    bellweaver(dir, args).status.code().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const U_COMMON: &str = "|-3>+|-1>+|1>-|3>";
const V_FIRST: &str = "|-3>-|-1>-|1>-|3>";

#[test]
fn classify_prints_six_antisymmetric_and_ten_symmetric_rows() {
    let dir = TempDir::new().unwrap();
    let text = ok(dir.path(), &["bell", "classify", "--all"]);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("psi")).collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows.iter().filter(|r| r.ends_with("\tAntisymmetric")).count(), 6);
    assert_eq!(rows.iter().filter(|r| r.ends_with("\tSymmetric")).count(), 10);
    assert!(text.starts_with("# bellweaver "));
}

#[test]
fn basis_state_file_lists_the_four_signed_terms() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["bell", "basis", "--family", "1", "--m", "1", "--n", "0", "--out", "s.json"]);
    let v = json(&dir.path().join("s.json"));
    let mut terms: Vec<(i64, i64, f64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["p1"]["oam"].as_i64().unwrap(), t["p2"]["oam"].as_i64().unwrap(), t["re"].as_f64().unwrap()))
        .collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(terms, [(-3, 1, 0.5), (-1, 3, -0.5), (1, -3, -0.5), (3, -1, 0.5)]);
    assert_eq!(v["meta"]["command"], "bell basis");
    assert_eq!(v["meta"]["config_hash"].as_str().unwrap().len(), 16);

    ok(dir.path(), &["bell", "basis", "--all", "--out", "all.json"]);
    assert_eq!(json(&dir.path().join("all.json"))["states"].as_array().unwrap().len(), 16);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["bell", "basis", "--family", "5", "--m", "1", "--n", "0"]), 2);
    assert_eq!(code(d, &["bell", "basis", "--family", "1", "--m", "1", "--n", "0", "--l", "1,2,3"]), 2);
    assert_eq!(code(d, &["bell", "basis", "--family", "1", "--m", "1", "--n", "0", "--l", "1,1,2,3"]), 2);
    assert_eq!(code(d, &["hom", "scan", "--state", "psi2_10", "--proj-u", "|1>", "--proj-v", "|1>", "--steps", "0"]), 2);
    assert_eq!(code(d, &["tomo", "reconstruct", "--counts", "missing.json"]), 2);
    assert_eq!(code(d, &["tomo", "witness", "--fidelity", "1.5", "--dim", "4"]), 2);
    assert_eq!(code(d, &["pipeline", "run", "--target", "phi"]), 2);
    assert_eq!(code(d, &["no-such-command"]), 2);
    fs::write(d.join("bad.json"), r#"{"stepz": 3}"#).unwrap();
    assert_eq!(code(d, &["hom", "scan", "--config", "bad.json", "--state", "psi2_10"]), 2);
}

#[test]
fn projector_parse_errors_name_token_and_position() {
    let dir = TempDir::new().unwrap();
    let o = bellweaver(dir.path(), &["hom", "scan", "--state", "psi2_10", "--proj-u", "|1> + |x>", "--proj-v", "|1>"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("'x'") && err.contains("position 8"), "{err}");
}

#[test]
fn witness_prints_the_certified_dimension() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ok(dir.path(), &["tomo", "witness", "--fidelity", "0.75", "--dim", "4"]), "3\n");
    assert_eq!(ok(dir.path(), &["tomo", "witness", "--fidelity", "0.80", "--dim", "4"]), "4\n");
}

#[test]
fn delay_scan_csv_has_header_and_full_visibility() {
    let dir = TempDir::new().unwrap();
    let summary = ok(
        dir.path(),
        &["hom", "scan", "--state", "psi2_10", "--proj-u", U_COMMON, "--proj-v", V_FIRST, "--tau-min", "-12", "--tau-max", "12", "--steps", "241", "--out", "a.csv"],
    );
    assert!(summary.contains("visibility 1.000000"), "{summary}");
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# bellweaver ") && lines[0].contains("config_hash="));
    assert_eq!(lines[1], "x,rate");
    assert_eq!(lines.len(), 2 + 241);
    let (x, rate) = lines[122].split_once(',').unwrap();
    assert_eq!(x.parse::<f64>().unwrap(), 0.0);
    // A peak at zero delay: double the 1/64 baseline.
    assert!((rate.parse::<f64>().unwrap() - 2.0 / 64.0).abs() < 1e-12);
}

#[test]
fn delay_compensation_restores_the_scan_from_the_cli() {
    let dir = TempDir::new().unwrap();
    let base = ["hom", "scan", "--state", "psi2_10", "--proj-u", U_COMMON, "--proj-v", V_FIRST, "--tau-min", "-12", "--tau-max", "12", "--steps", "241"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        ok(dir.path(), &args)
    };
    let rates = |text: &str| -> Vec<f64> {
        text.lines().skip(2).map(|l| l.split_once(',').unwrap().1.parse().unwrap()).collect()
    };
    let clean = rates(&run(&[]));
    let delayed = rates(&run(&["--delay-signal", "1:0.2335,3:0.2335"]));
    let fixed = rates(&run(&["--delay-signal", "1:0.2335,3:0.2335", "--compensate", "1:-0.2335,3:-0.2335"]));
    assert!(clean.iter().zip(&delayed).any(|(a, b)| (a - b).abs() > 1e-6));
    assert!(clean.iter().zip(&fixed).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn phase_scan_runs_over_theta() {
    let dir = TempDir::new().unwrap();
    let text = ok(
        dir.path(),
        &["hom", "scan", "--state", "psi2_10", "--proj-u", "|-1>+|1>", "--phase-pair", "3,-3", "--theta-min", "0", "--theta-max", "360", "--degrees", "--steps", "5"],
    );
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(2)
        .map(|l| {
            let (x, r) = l.split_once(',').unwrap();
            (x.parse().unwrap(), r.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    assert!((rows[4].0 - std::f64::consts::TAU).abs() < 1e-12);
    // Full-contrast fringe: a zero somewhere and a nonzero maximum.
    let lo = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    assert!(lo < 1e-12 && hi > 1e-3, "{rows:?}");
}

#[test]
fn pipeline_report_carries_throughput_symmetry_and_fidelity() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["pipeline", "run", "--target", "psi2_10", "--out", "s.json", "--report", "r.json"]);
    let r = json(&dir.path().join("r.json"));
    assert!((r["throughput"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(r["symmetry"], "Antisymmetric");
    assert!(r["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
    assert_eq!(json(&dir.path().join("s.json"))["terms"].as_array().unwrap().len(), 4);

    // Without its Dove rotation the recipe lands on a different state.
    ok(dir.path(), &["pipeline", "run", "--target", "psi2_00", "--dove-alpha", "0", "--report", "r0.json"]);
    assert!(json(&dir.path().join("r0.json"))["fidelity"].as_f64().unwrap() < 1e-10);
}

#[test]
fn tomography_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["tomo", "simulate", "--target", "psi1_10", "--out", "c.json"]);
    ok(d, &["tomo", "reconstruct", "--counts", "c.json", "--out", "rho.json"]);
    let rho = json(&d.join("rho.json"));
    assert_eq!(rho["solver"]["converged"], true);
    assert_eq!(rho["dim"], 16);
    let f: Value = serde_json::from_str(&ok(d, &["tomo", "fidelity", "--rho", "rho.json", "--target", "psi1_10"])).unwrap();
    assert!(f["fidelity"].as_f64().unwrap() > 0.999);
    assert_eq!(f["witness"], 4);
    let other: Value = serde_json::from_str(&ok(d, &["tomo", "fidelity", "--rho", "rho.json", "--target", "psi1_11"])).unwrap();
    assert!(other["fidelity"].as_f64().unwrap() < 1e-3);
}

#[test]
fn non_convergence_exits_with_three_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["tomo", "simulate", "--target", "psi2_11", "--noise-white", "0.9", "--shots", "1000", "--seed", "3", "--out", "c.json"]);
    let o = bellweaver(d, &["tomo", "reconstruct", "--counts", "c.json", "--max-iter", "2", "--out", "rho.json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert_eq!(json(&d.join("rho.json"))["solver"]["converged"], false);
    let o = bellweaver(d, &["tomo", "run", "--targets", "psi1_00", "--max-iter", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tomo_run_writes_per_state_artifacts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let text = ok(d, &["tomo", "run", "--targets", "psi1_10,psi2_01", "--out-dir", "out"]);
    assert!(text.contains("psi1_10\t") && text.lines().any(|l| l.starts_with("mean\t")));
    for f in ["psi1_10_counts.json", "psi1_10_rho.json", "psi2_01_rho.json", "overlap.json", "summary.tsv"] {
        assert!(d.join("out").join(f).exists(), "{f}");
    }
    let m = json(&d.join("out/overlap.json"))["matrix"].clone();
    assert!(m[0][0].as_f64().unwrap() > 0.999 && m[0][1].as_f64().unwrap() < 1e-3);
}

#[test]
fn optics_apply_accepts_flags_and_json() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["bell", "basis", "--family", "2", "--m", "1", "--n", "0", "--out", "s.json"]);
    ok(d, &["optics", "apply", "--state", "s.json", "--arm", "signal", "--element", "dove", "--angle", "45", "--degrees", "--out", "a.json"]);
    let json_el = format!(r#"{{"element":"dove","alpha_rad":{}}}"#, std::f64::consts::FRAC_PI_4);
    ok(d, &["optics", "apply", "--state", "s.json", "--arm", "signal", "--element-json", &json_el, "--out", "b.json"]);
    assert_eq!(json(&d.join("a.json"))["terms"], json(&d.join("b.json"))["terms"]);
    assert_eq!(json(&d.join("a.json"))["meta"]["config_hash"], json(&d.join("b.json"))["meta"]["config_hash"]);
    let v = ok(d, &["optics", "apply", "--state", "s.json", "--element", "polarizer", "--axis", "V"]);
    assert!(v.contains(r#""terms": []"#));
    assert_eq!(code(d, &["optics", "apply", "--state", "s.json", "--element", "dove"]), 2);
    assert_eq!(code(d, &["optics", "apply", "--state", "s.json", "--element", "flip", "--arm", "left"]), 2);
}

#[test]
fn flags_override_config_which_overrides_environment_seed() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let seed_of = |args: &[&str], env: Option<&str>| -> u64 {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_bellweaver"));
        cmd.args(args).current_dir(d).env_remove("BELLWEAVER_SEED");
        if let Some(e) = env {
            cmd.env("BELLWEAVER_SEED", e);
        }
        let o = cmd.output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["seed"].as_u64().unwrap()
    };
    let sim = ["tomo", "simulate", "--target", "psi1_10", "--shots", "10"];
    assert_eq!(seed_of(&sim, None), 0);
    assert_eq!(seed_of(&sim, Some("9")), 9);
    fs::write(d.join("cfg.json"), r#"{"seed": 11}"#).unwrap();
    let with_cfg = [&sim[..], &["--config", "cfg.json"]].concat();
    assert_eq!(seed_of(&with_cfg, Some("9")), 11);
    assert_eq!(seed_of(&[&with_cfg[..], &["--seed", "12"]].concat(), Some("9")), 12);
    assert_eq!(code(d, &["tomo", "witness", "--fidelity", "0.5", "--dim", "4", "--config", "nope.json"]), 2);
}

#[test]
fn an_output_file_can_replay_its_own_config() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["tomo", "simulate", "--target", "psi2_00", "--noise-white", "0.8", "--shots", "500", "--seed", "4", "--out", "a.json"]);
    ok(d, &["tomo", "simulate", "--config", "a.json", "--out", "b.json"]);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let runs: [&[&str]; 3] = [
        &["tomo", "simulate", "--target", "psi1_01", "--noise-white", "0.7867", "--shots", "2000", "--seed", "8", "--out", "OUT"],
        &["hom", "scan", "--state", "psi1_00", "--proj-u", U_COMMON, "--proj-v", V_FIRST, "--noise-white", "0.9", "--out", "OUT"],
        &["pipeline", "run", "--target", "psi4_01", "--out", "OUT"],
    ];
    for args in runs {
        for name in ["first", "second"] {
            let a: Vec<&str> = args.iter().map(|a| if *a == "OUT" { name } else { *a }).collect();
            ok(d, &a);
        }
        assert_eq!(fs::read(d.join("first")).unwrap(), fs::read(d.join("second")).unwrap(), "{args:?}");
    }
}
