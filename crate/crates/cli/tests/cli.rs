use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn fraccut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraccut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hamming_fracdist_both_methods() {
    let h = data("hamming.txt");
    for method in ["cone", "full"] {
        let o = fraccut(&["fracdist", path_str(&h), "--method", method]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("d_frac = 2/1 (2.000)\n"), "{}", stdout(&o));
    }
}

#[test]
fn gamma_listing() {
    let o = fraccut(&["fracdist", path_str(&data("hamming.txt")), "--gamma"]);
    let text = stdout(&o);
    assert!(text.contains("gamma (6 vertices):"), "{text}");
    assert!(text.contains("(0, 2/3, 2/3, 2/3, 0, 0, 0)"), "{text}");
}

#[test]
fn methods_agree_on_bundled_matrices() {
    for name in ["hamming_star.txt", "golay.alist"] {
        let f = data(name);
        let first_line = |m: &str| {
            let o = fraccut(&["fracdist", path_str(&f), "--method", m]);
            assert!(o.status.success(), "{}", stderr(&o));
            stdout(&o).lines().next().unwrap().to_string()
        };
        assert_eq!(first_line("cone"), first_line("full"), "{name}");
    }
}

#[test]
fn info_reports_shape() {
    let o = fraccut(&["info", path_str(&data("golay.alist"))]);
    let text = stdout(&o);
    assert!(text.contains("n = 24\nm = 12\nrank = 12\n"), "{text}");
    assert!(text.contains("row weights: 8x12"), "{text}");
}

#[test]
fn improve_then_fracdist() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.alist");
    let log = dir.path().join("cuts.jsonl");
    let o = fraccut(&[
        "improve",
        path_str(&data("hamming.txt")),
        "--max-rows",
        "8",
        "-o",
        path_str(&out),
        "--log",
        path_str(&log),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = fraccut(&["fracdist", path_str(&out)]);
    assert!(stdout(&o).starts_with("d_frac = 3/1 (3.000)\n"), "{}", stdout(&o));
    let log_text = std::fs::read_to_string(&log).unwrap();
    assert!(!log_text.is_empty());
    for line in log_text.lines() {
        assert!(line.starts_with('{') && line.contains("\"redundant_row\""), "{line}");
    }
}

#[test]
fn improve_stops_at_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let o = fraccut(&[
        "improve",
        path_str(&data("hamming.txt")),
        "--max-rows",
        "8",
        "--target-dfrac",
        "5/2",
        "-o",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("target reached"), "{}", stdout(&o));
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.starts_with("4 7\n"), "{written}");
}

#[test]
fn decode_single_flip() {
    let o = fraccut(&["decode", path_str(&data("hamming_star.txt")), "--received", "0100000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "status = codeword\noutput = 0000000\nunique = true\nobjective = 0\n"
    );
}

#[test]
fn decode_rejects_wrong_length() {
    let o = fraccut(&["decode", path_str(&data("hamming.txt")), "--received", "0101"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("4 bits"), "{}", stderr(&o));
}

#[test]
fn simulate_is_deterministic() {
    let h = data("hamming.txt");
    let args = [
        "simulate",
        path_str(&h),
        "--crossover",
        "0.0,0.1",
        "--trials",
        "300",
        "--seed",
        "5",
    ];
    let a = fraccut(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "crossover,trials,block_errors,bler,seed");
    assert!(lines[1].starts_with("0,300,0,0,5"), "{}", lines[1]);
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "1"]);
    assert_eq!(stdout(&fraccut(&with_jobs)), text);
}

#[test]
fn simulate_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bler.csv");
    let o = fraccut(&[
        "simulate",
        path_str(&data("hamming.txt")),
        "--crossover",
        "0.05",
        "--trials",
        "100",
        "--seed",
        "1",
        "-o",
        path_str(&csv),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("crossover,trials,block_errors,bler,seed\n0.05,100,"));
}

#[test]
fn missing_file_exits_one() {
    let o = fraccut(&["fracdist", "missing.alist"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.alist"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    let o = fraccut(&["fracdist", path_str(&data("hamming.txt")), "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--bogus"), "{}", stderr(&o));
    let o = fraccut(&["improve", path_str(&data("hamming.txt")), "-o", "x.alist"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--max-rows"), "{}", stderr(&o));
    assert_eq!(fraccut(&[]).status.code(), Some(2));
}

#[test]
fn format_flag_overrides_extension() {
    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("hamming.mat");
    std::fs::copy(data("hamming.txt"), &odd).unwrap();
    let o = fraccut(&["info", path_str(&odd)]);
    assert_eq!(o.status.code(), Some(1));
    let o = fraccut(&["info", path_str(&odd), "--format", "dense"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = fraccut(&["info", path_str(&data("hamming.txt")), "--format", "alist"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_alist_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alist");
    std::fs::write(&bad, "7 3\n3 4\n2 2 2 3 1 1 x\n").unwrap();
    let o = fraccut(&["info", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}
