use neq_core::quantum::ChoiChannel;
use neq_core::tasks;
use std::path::Path;
use std::process::{Command, Output};

fn neq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neq")).args(args).current_dir(dir).env_remove("NEQ_SOLVER_GAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn kappa_of_qubit_transposition() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["kappa", "--task", "builtin:transpose;d=2;samples=8", "--beta", "1", "--degenerate"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("kappa = 0.584963 bits"), "{}", stdout(&o));
}

#[test]
fn cloning_curve_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["curve", "--task", "builtin:cloning;n=1;m=2;d=2", "--degenerate", "--points", "25", "--variants", "quantum,classical,eb"];
    let mut one = base.to_vec();
    one.extend(["--out", "a.csv", "--jobs", "1"]);
    let mut four = base.to_vec();
    four.extend(["--out", "b.csv", "--jobs", "4"]);
    assert_eq!(neq(&one, dir.path()).status.code(), Some(0));
    assert_eq!(neq(&four, dir.path()).status.code(), Some(0));
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "fidelity,cost_bits,lower_bound_bits,variant,status");
    assert_eq!(lines.len(), 1 + 3 * 25);
    let last_quantum = lines.iter().rfind(|l| l.contains(",quantum,")).unwrap();
    assert!(last_quantum.starts_with("0.666667,0.415037,"), "{last_quantum}");
    let first_eb = lines.iter().find(|l| l.contains(",eb,")).unwrap();
    assert!(first_eb.starts_with("0.375000,0.000000,"), "{first_eb}");
    assert!(lines.iter().rfind(|l| l.contains(",classical,")).unwrap().starts_with("1.000000,1.000000,"));
}

#[test]
fn json_reports_mirror_cost_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["cost", "--task", "builtin:erasure;d=2", "-F", "0.75", "--json", "--report", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value_bits"].as_f64().unwrap() - 0.75f64.log2() - 1.0).abs() < 1e-6);
    assert_eq!(v["method"], "sdp");
    assert_eq!(v["exact"], true);
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let infeasible = neq(&["cost", "--task", "builtin:cloning;n=1;m=2;d=2", "-F", "0.9"], dir.path());
    assert_eq!(infeasible.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("infeasible"));
    assert_eq!(neq(&["kappa", "--task", "builtin:teleport"], dir.path()).status.code(), Some(4));
    assert_eq!(neq(&["kappa", "--task", "missing.json"], dir.path()).status.code(), Some(4));
    assert_eq!(neq(&["kappa"], dir.path()).status.code(), Some(4));
    assert_eq!(neq(&["cost", "--task", "builtin:erasure;d=2", "-F", "1.5"], dir.path()).status.code(), Some(4));
    assert_eq!(neq(&["kappa", "--task", "builtin:erasure;d=2", "--energies", "0,1", "--degenerate"], dir.path()).status.code(), Some(4));
    assert_eq!(neq(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn cost_below_f_min_is_clamped() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["cost", "--task", "builtin:erasure;d=2", "-F", "0.3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("cost = 0.000000 bits"), "{s}");
    assert!(s.contains("clamped"), "{s}");
}

#[test]
fn accuracy_of_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["accuracy", "--task", "builtin:cloning;n=1;m=2;d=2", "--cost", "0"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("fidelity = 0.500000 at cost 0.000000 bits"), "{}", stdout(&o));
    let o = neq(&["accuracy", "--task", "builtin:cloning;n=1;m=2;d=2"], dir.path());
    assert!(stdout(&o).starts_with("fidelity = 0.666667 at unbounded cost"), "{}", stdout(&o));
}

#[test]
fn task_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let t = tasks::builtin_task("builtin:erasure;d=2", std::f64::consts::LN_2, Some(&[0.0, 1.0])).unwrap();
    std::fs::write(dir.path().join("erase.json"), serde_json::to_string(&t).unwrap()).unwrap();
    let o = neq(&["kappa", "--task", "erase.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("kappa = 0.584963 bits"), "{}", stdout(&o));
    assert_eq!(neq(&["kappa", "--task", "erase.json", "--beta", "2"], dir.path()).status.code(), Some(4));
}

#[test]
fn channel_cost_of_erasure_channel() {
    let dir = tempfile::tempdir().unwrap();
    let ground = neq_core::qmat::projector(&neq_core::qmat::basis_ket(2, 0));
    let ch = ChoiChannel::constant(2, &ground);
    std::fs::write(dir.path().join("erase.json"), serde_json::to_string(&ch).unwrap()).unwrap();
    let o = neq(&["channel-cost", "--choi", "erase.json", "--beta", "0.6931471805599453", "--energies", "0,1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("cost = 0.584963 bits"), "{}", stdout(&o));
    let o = neq(&["channel-cost", "--choi", "erase.json"], dir.path());
    assert!(stdout(&o).starts_with("cost = 1.000000 bits"), "{}", stdout(&o));
}

#[test]
fn figure_three_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["figure", "--id", "3", "--points", "5", "--out-dir", "figs", "--plot", "svg"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("figs/fig3.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let (c, lb): (f64, f64) = (cols[1].parse().unwrap(), cols[2].parse().unwrap());
        assert!(c >= lb - 1e-6, "{line}");
    }
    assert!(csv.contains(",eb_1to2,exact"));
    let svg = std::fs::read_to_string(dir.path().join("figs/fig3.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<polyline").count() == 6);
    assert_eq!(neq(&["figure", "--id", "4"], dir.path()).status.code(), Some(4));
}

#[test]
fn verify_subset_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = neq(&["verify", "--suite", "werner,eb,counterexample", "--tol", "1e-6", "--report", "verify.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    assert_eq!(neq(&["verify", "--suite", "bogus"], dir.path()).status.code(), Some(4));
}
