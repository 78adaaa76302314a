use osdt::{InvariantTable, Rational};
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osdt")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn r(s: &str) -> Rational {
    osdt::arith::parse_rational(s).unwrap()
}

const A1_VARIANTS: [&str; 6] = ["p_pp", "p_pm", "p_mm", "m_pp", "m_pm", "m_mm"];

#[test]
fn validate_fixtures() {
    for name in ["point_plus.json", "point_minus.json", "two_fixed_vertices.json"] {
        assert_eq!(code(&run(&["validate", &fixture(name)])), 0, "{name}");
    }
    for v in A1_VARIANTS {
        let o = run(&["validate", &fixture(&format!("a1_tilde_{v}.json"))]);
        assert_eq!(code(&o), 0, "{v}: {}", stderr(&o));
    }
}

#[test]
fn broken_involution_is_named() {
    let o = run(&["validate", &fixture("broken_involution.json")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("vertex involution is not an involution at i"), "{}", stdout(&o));
}

#[test]
fn malformed_json_reports_location() {
    let path = std::env::temp_dir().join(format!("osdt-malformed-{}.json", std::process::id()));
    std::fs::write(&path, "{\"vertices\": [\n  \"v\",\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["dt", &fixture("point_plus.json"), "--bound", "0"])), 1);
    assert_eq!(code(&run(&["dt", &fixture("point_plus.json"), "--slope", "w=1"])), 1);
    assert_eq!(code(&run(&["dt", &fixture("broken_involution.json")])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

fn dt_table(args: &[&str]) -> InvariantTable {
    let mut all = vec!["dt"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    InvariantTable::from_json(&stdout(&o)).unwrap()
}

#[test]
fn point_linear_values() {
    let t = dt_table(&[&fixture("point_plus.json"), "--bound", "3"]);
    let got: Vec<Rational> = t.linear.iter().map(|row| row.dt_num.clone()).collect();
    assert_eq!(got, vec![r("1"), r("1/4"), r("1/9")]);
}

#[test]
fn point_self_dual_values() {
    let t = dt_table(&[&fixture("point_plus.json"), "--bound", "4"]);
    let at = |k: u32| t.self_dual.iter().find(|row| row.class.entries() == [k]).unwrap().dt_num.clone();
    assert_eq!(at(0), r("1"));
    assert_eq!(at(2), r("-1/4"));
}

#[test]
fn kronecker_first_self_dual_class() {
    let t = dt_table(&[&fixture("a1_tilde_p_pm.json"), "--bound", "2", "--slope", "i=1,j=-1"]);
    let row = t.self_dual.iter().find(|row| row.class.entries() == [1, 1]).unwrap();
    assert!(row.dt_mot.is_one());
}

#[test]
fn output_round_trips_and_is_deterministic() {
    let args = ["dt", &fixture("a1_tilde_m_pm.json"), "--bound", "4", "--slope", "i=1/2,j=-1/2"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let t = InvariantTable::from_json(&a).unwrap();
    assert_eq!(t.to_json() + "\n", a);
}

#[test]
fn csv_and_output_file() {
    let path = std::env::temp_dir().join(format!("osdt-table-{}.csv", std::process::id()));
    let o = run(&["dt", &fixture("point_minus.json"), "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("kind,class,J,eps,DTmot,DTnum\n"));
    assert!(text.contains("linear,(2),"));
}

fn series(args: &[&str]) -> String {
    let mut all = vec!["series"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn point_series() {
    let d = series(&[&fixture("point_plus.json"), "--bound", "4", "--numeric"]);
    assert_eq!(d, "1 - (1/4)·t - (3/32)·t^2 + O(t^3)\n");
    let c = series(&[&fixture("point_minus.json"), "--bound", "4", "--numeric"]);
    assert_eq!(c, "1 + (1/4)·t + (5/32)·t^2 + O(t^3)\n");
    let b = series(&[&fixture("point_plus.json"), "--bound", "5", "--offset", "1", "--numeric"]);
    assert_eq!(b, c);
}

#[test]
fn kronecker_series() {
    let s = series(&[&fixture("a1_tilde_p_mm.json"), "--bound", "4", "--slope", "i=1,j=-1"]);
    assert!(s.starts_with("1 + 0·t^{1/2} - (1/2)·t + "), "{s}");
    let s = series(&[&fixture("a1_tilde_p_pm.json"), "--bound", "4", "--slope", "i=1,j=-1", "--variable", "z"]);
    assert_eq!(s, "1 + z^{1/2} + (1/2)·z + O(z^{3/2})\n");
    let s = series(&[&fixture("a1_tilde_p_pp.json"), "--bound", "2", "--slope", "i=1,j=-1", "--step-exponent", "1"]);
    assert_eq!(s, "1 + (q^-1 + q)·t + O(t^2)\n");
}

#[test]
fn series_needs_ray_for_several_orbits() {
    let o = run(&["series", &fixture("two_fixed_vertices.json")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--ray"));
    assert_eq!(code(&run(&["series", &fixture("two_fixed_vertices.json"), "--ray", "2,0"])), 0);
    assert_eq!(code(&run(&["series", &fixture("point_minus.json"), "--ray", "1"])), 1);
}

#[test]
fn dt_series_format() {
    let a = stdout(&run(&["dt", &fixture("point_plus.json"), "--format", "series", "--numeric"]));
    let b = series(&[&fixture("point_plus.json"), "--numeric"]);
    assert_eq!(a, b);
}

#[test]
fn wallcross_is_consistent() {
    for (plus, minus) in [("i=1,j=-1", "i=-1,j=1"), ("i=1,j=-1", ""), ("i=-1/2,j=1/2", "i=2,j=-2")] {
        let o = run(&[
            "wallcross",
            &fixture("a1_tilde_p_pp.json"),
            "--bound",
            "4",
            "--slope",
            plus,
            "--target-slope",
            minus,
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["consistent"], true);
        assert_eq!(v["diff"].as_array().unwrap().len(), 0);
        assert!(!v["transformed"]["linear"].as_array().unwrap().is_empty());
        assert_eq!(v["transformed"], v["direct"]);
    }
}

#[test]
fn explain_calibration() {
    let o = run(&["explain-calibration", &fixture("a1_tilde_p_pp.json"), "--slope", "i=1,j=-1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("orientation: -1"), "{s}");
    assert!(s.contains("kappa(i) = -1"), "{s}");
    assert!(s.contains("identity Harder-Narasimhan completeness: pass"), "{s}");
    assert!(!s.contains("FAIL"));

    let o = run(&["dt", &fixture("point_plus.json"), "--explain-calibration"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("calibration self-dual virtual dimension: pass"));
    assert!(InvariantTable::from_json(&stdout(&o)).is_ok());
}
