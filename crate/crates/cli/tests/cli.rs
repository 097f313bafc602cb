use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lasercool"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn lasercool(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fig(n: &str) -> String {
    configs().join(format!("fig{n}.conf")).display().to_string()
}

#[test]
fn derive_is_deterministic() {
    let a = scratch("derive_a.csv");
    let b = scratch("derive_b.csv");
    for out in [&a, &b] {
        let o = lasercool(&["derive", &fig("1"), "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# lasercool "));
    assert!(text.contains("\nxi,3.96039603960396"), "{text}");
}

#[test]
fn csv_layout() {
    let o = lasercool(&["spectrum", &fig("1")]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert_eq!(lines[header], "omega,snn");
    assert_eq!(lines.len() - header - 1, 2048);
    assert!(lines[..header].contains(&"# [parameters]"));
    assert!(lines[..header].contains(&"# [working_point]"));
    // grid order is ascending
    let w: Vec<f64> = lines[header + 1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(w.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn figure1_ratio_column() {
    let o = lasercool(&["figure", "1", &fig("1")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "ratio").unwrap();
    let max = lines
        .map(|l| l.split(',').nth(i).unwrap().parse::<f64>().unwrap())
        .filter(|x| x.is_finite())
        .fold(f64::MIN, f64::max);
    assert!((max - 6.94).abs() <= 0.35, "{max}");
}

#[test]
fn parse_errors_exit_2() {
    let path = scratch("dup.conf");
    let text = std::fs::read_to_string(fig("1")).unwrap() + "kappa = 0.2\n";
    std::fs::write(&path, text).unwrap();
    let o = lasercool(&["derive", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[ParseError]: line "), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn validation_errors_exit_2() {
    let path = scratch("neg_kappa.conf");
    let text = std::fs::read_to_string(fig("1"))
        .unwrap()
        .replace("kappa = 0.1", "kappa = -1")
        .replace("d0_rel_threshold = 1.2", "d0 = 1")
        .replace("n_g_rel_threshold = 1.5", "n_g = 2");
    std::fs::write(&path, text).unwrap();
    let o = lasercool(&["derive", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).trim(), "error[ValidationError]: kappa > 0");
}

#[test]
fn zero_length_sweep_is_rejected() {
    let o = lasercool(&["sweep", &fig("3"), "--param", "D0", "--range", "1e4:1e4:10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[ValidationError]"));
}

#[test]
fn below_threshold_exits_3() {
    let path = scratch("below.conf");
    let text = std::fs::read_to_string(fig("5")).unwrap().replace("d0_rel_threshold = 1.2", "d0_rel_threshold = 0.9");
    std::fs::write(&path, text).unwrap();
    let o = lasercool(&["derive", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[BelowThreshold]"));
}

#[test]
fn unknown_figure_exits_2() {
    let o = lasercool(&["figure", "7", &fig("1")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_rows_follow_the_grid() {
    let o = lasercool(&["sweep", &fig("3"), "--param", "d0_rel_threshold", "--range", "0:1.5:16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 16);
    // past kappa_tilde = 0 the seeded model is unstable and the row says so
    assert!(rows.last().unwrap().ends_with(",Unstable"), "{}", rows.last().unwrap());
    assert!(rows[0].ends_with(",cooling"));
}

#[test]
fn json_output_reproduces_the_run() {
    let first = scratch("cooling_1.json");
    let second = scratch("cooling_2.json");
    let o = lasercool(&["cooling", &fig("3"), "--format", "json", "-o", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = lasercool(&["cooling", first.to_str().unwrap(), "-o", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&first).unwrap()).unwrap();
    assert_eq!(doc["command"], "cooling");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_metadata_reproduces_the_run() {
    let first = lasercool(&["optimize-pump", &fig("3")]);
    assert!(first.status.success(), "{}", stderr(&first));
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    let params: String = text
        .lines()
        .skip_while(|l| *l != "# [parameters]")
        .skip(1)
        .take_while(|l| l.starts_with("# ") && !l.starts_with("# ["))
        .map(|l| format!("{}\n", &l[2..]))
        .collect();
    let path = scratch("from_metadata.conf");
    std::fs::write(&path, params).unwrap();
    let again = lasercool(&["optimize-pump", path.to_str().unwrap()]);
    assert_eq!(first.stdout, again.stdout);
}
