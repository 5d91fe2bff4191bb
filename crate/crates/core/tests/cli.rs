use std::process::{Command, Output};

fn staircase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_staircase")).args(args).output().expect("run staircase")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn class_prints_blocking_class() {
    let o = staircase(&["class", "--pq", "6/1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(3,2,6,1,3,+1)");
}

#[test]
fn class_with_reduction_trace() {
    let o = staircase(&["class", "--pq", "29/4", "--reduce"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("(14,9,29,4,13,+1)"));
    assert!(s.contains("vector (14; 9,4,4,4,4,4,4,4,1,1,1,1)"), "{s}");
}

#[test]
fn tables_reproduce_g_strand() {
    let o = staircase(&["tables", "--name", "g"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows[0], "k,g,m,d");
    assert_eq!(rows[1], "-1,1,,");
    assert_eq!(rows[7], "5,5741,840,2522");
    assert_eq!(rows[8], "6,33461,4901,14701");
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = ["verify", "all", "--i", "0..3", "--n", "0..5", "--steps", "8"];
    let a = Command::new(env!("CARGO_BIN_EXE_staircase")).args(args).env("STAIRCASE_THREADS", "1").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_staircase")).args(args).env("STAIRCASE_THREADS", "4").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.lines().last().unwrap().contains(" 0 failed"));
    assert!(s.contains("UNKNOWN live (id)#S^U_{u,0}"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(staircase(&["class", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(staircase(&["verify", "sometimes"]).status.code(), Some(2));
    assert_eq!(staircase(&["family", "--T", "Q^2"]).status.code(), Some(2));
    assert_eq!(staircase(&["family", "--base", "U", "--n", "0", "--dir", "l"]).status.code(), Some(2));
}

#[test]
fn plot_csv_single_class() {
    let o = staircase(&["plot", "--pq", "6/1", "--b", "2/3", "--zmin", "5", "--zmax", "8", "--digits", "10"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "z_num,z_den,kind,value_decimal,dominating_class");
    assert_eq!(lines[3], "36,5,crossing,3.6000000000,\"volume\"");
}

#[test]
fn plot_writes_svg_file() {
    let dir = std::env::temp_dir().join(format!("staircase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("profile.svg");
    let o = staircase(&["plot", "--T", "id", "--base", "U", "--n", "1", "--dir", "l", "--steps", "5", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains(r#"width="800" height="600""#));
    assert!(svg.contains("b = 11/10-1/10*sqrt(21)"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn family_reports_limits() {
    let o = staircase(&["family", "--T", "S", "--base", "U", "--n", "1", "--dir", "u"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("(S)#S^U_{u,1}"));
    assert!(s.contains("liveness Live"));
}

#[test]
fn accinv_both_branches() {
    let o = staircase(&["accinv", "--pq", "6/1", "--digits", "4"]);
    assert_eq!(stdout(&o), "U: b = 5/11 ~ 0.4545\nL: b = 1/5 ~ 0.2000\n");
}
