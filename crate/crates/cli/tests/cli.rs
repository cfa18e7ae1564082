use std::path::Path;
use std::process::{Command, Output};

fn crb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn print_config_applies_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "trials = 17\nseed = 3\nsnr_mode = local\n");
    let o = crb(&["point", "--config", &cfg, "--seed", "9", "--print-config"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("trials = 17"));
    assert!(text.contains("seed = 9"));
    assert!(text.contains("snr_mode = local"));
}

#[test]
fn printed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = stdout(&crb(&["sweep", "--case", "2", "--samples", "2700", "--print-config"]));
    let cfg = write_config(dir.path(), &first);
    let second = stdout(&crb(&["sweep", "--config", &cfg, "--print-config"]));
    assert_eq!(first, second);
}

#[test]
fn point_writes_one_row_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("point.csv");
    let o = crb(&[
        "point", "--case", "both", "--trials", "8", "--samples", "1350", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("point,case,freq_hz"));
    assert!(!lines[0].contains("wall_s"));
    assert!(lines[1].starts_with("0,1,"));
    assert!(lines[2].starts_with("0,2,"));
}

#[test]
fn timing_flag_adds_wall_clock_column() {
    let o = crb(&["point", "--case", "1", "--trials", "4", "--samples", "1350", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with(",wall_s"));
}

#[test]
fn sweep_values_flag_sets_grid() {
    let o = crb(&[
        "sweep", "--sweep", "snr", "--values", "0,20", "--case", "1", "--trials", "4", "--samples", "1350",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("0,1,"));
    assert!(rows[1].starts_with("1,1,"));
}

#[test]
fn psd_table_has_header_and_grid() {
    let o = crb(&["psd"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("freq_hz,psd"));
    assert_eq!(lines.count(), modecrb::scenarios::PSD_POINTS);
}

#[test]
fn bad_flag_value_is_a_config_error() {
    assert_eq!(crb(&["point", "--case", "3"]).status.code(), Some(1));
    assert_eq!(crb(&["point", "--trials", "many"]).status.code(), Some(1));
}

#[test]
fn bad_config_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "snr_db = loud\n");
    assert_eq!(crb(&["point", "--config", &cfg]).status.code(), Some(1));
    let missing = dir.path().join("nope.cfg");
    assert_eq!(crb(&["point", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn invalid_scenario_is_a_config_error() {
    // above Nyquist
    assert_eq!(crb(&["point", "--freq-hz", "20"]).status.code(), Some(1));
    assert_eq!(crb(&["point", "--trials", "0"]).status.code(), Some(1));
}

#[test]
fn repeated_pole_is_a_numerical_failure() {
    // (1 - 1.2 q^-1 + 0.72 q^-2)^2: the mode Jacobian is singular
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("repeated.txt");
    std::fs::write(&sys, "[A]\n1\n-2.4\n2.88\n-1.728\n0.5184\n[B]\n1\n[C]\n1\n[sigma_e2]\n1\n[fs]\n3\n").unwrap();
    let o = crb(&[
        "point", "--system", sys.to_str().unwrap(), "--case", "1", "--trials", "4", "--samples", "1350",
        "--freq-hz", "0.6",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    // the failed row is still written, with its error
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("repeated pole"));
}

#[test]
fn record_shorter_than_parameter_count_is_rejected() {
    assert_eq!(crb(&["point", "--case", "2", "--samples", "12"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(crb(&["--help"]).status.code(), Some(0));
}

#[test]
fn same_seed_same_bytes_across_threads() {
    let args = ["sweep", "--sweep", "freq", "--values", "0.3,1.2", "--trials", "16", "--samples", "1350"];
    let one = crb(&[&args[..], &["--threads", "1"]].concat());
    let three = crb(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let other_seed = crb(&[&args[..], &["--seed", "2"]].concat());
    assert_ne!(one.stdout, other_seed.stdout);
}
