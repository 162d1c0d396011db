use std::path::Path;
use std::process::{Command, Output};

fn fbe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbe"))
        .args(args)
        .output()
        .expect("fbe runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn synth_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut all = vec!["synth"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &path_s]);
    let o = fbe(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

fn output_register(sim_stdout: &str) -> String {
    let line = sim_stdout
        .lines()
        .find(|l| l.starts_with("output "))
        .expect("an output register line");
    line.split(" = ").nth(1).unwrap().split(' ').next().unwrap().to_string()
}

#[test]
fn eval_log2_trace() {
    let o = fbe(&["eval", "log2", "1.5", "--n", "4", "--trace"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("digits .1001"));
    assert!(s.contains("a_1 = 1.001000000000000 (1.125)"));
    assert!(s.contains("(1.265625)"));
    assert!(s.contains("a_3 = 1.1001101"));
}

#[test]
fn eval_exp2_trace() {
    let o = fbe(&["eval", "exp2", ".1011", "--trace"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let expected = [std::f64::consts::SQRT_2, 1.6818, 1.2968, 1.6105];
    for (i, want) in expected.iter().enumerate() {
        let line = s.lines().find(|l| l.starts_with(&format!("a_{} ", i + 1))).unwrap();
        let v: f64 = line.rsplit('(').next().unwrap().trim_end_matches(')').parse().unwrap();
        assert!((v - want).abs() < 1e-3, "a_{} = {v}", i + 1);
    }
}

#[test]
fn eval_arccos_one_is_zero() {
    let o = fbe(&["eval", "arccos", "1.0", "--n", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("digits .00000000"));
}

#[test]
fn domain_violation_exits_2_with_interval() {
    let o = fbe(&["eval", "arccos", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(-1, 1]"));
    let o = fbe(&["eval", "log2", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fbe(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(fbe(&["synth", "sinh", "--n", "2", "--m", "4"]).status.code(), Some(2));
    assert_eq!(fbe(&["synth", "log2", "--n", "0", "--m", "4"]).status.code(), Some(2));
}

#[test]
fn synth_log2_round_trips_through_sim() {
    let dir = tempfile::tempdir().unwrap();
    let path = synth_to(dir.path(), "log2.txt", &["log2", "--n", "3", "--m", "4"]);
    let o = fbe(&["sim", &path, "01.10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sc =
        fbe_core::synth::synthesize(&fbe_core::synth::SynthConfig::new(fbe_core::fbe::Function::Log2, 3, 4)).unwrap();
    let x = fbe_core::FixedPoint::parse_with_layout("01.10", sc.layout).unwrap();
    let fbe_core::synth::Decoded::Digits(d) = sc.classical(x.raw_bits()).unwrap() else {
        panic!("log2 yields digits")
    };
    let got = output_register(&stdout(&o)).replace('.', "");
    let want: String = d.msb_first().iter().map(|b| char::from(b'0' + b)).collect();
    assert_eq!(got, want);
}

#[test]
fn synth_cos_qubits_equal_register_sum() {
    let o = fbe(&["synth", "cos", "--n", "2", "--m", "5"]);
    let text = stdout(&o);
    let header: usize = text
        .lines()
        .next()
        .unwrap()
        .strip_prefix("qubits ")
        .unwrap()
        .parse()
        .unwrap();
    let mut covered = vec![false; header];
    for line in text.lines().filter(|l| l.starts_with("reg ")) {
        let range = line.split_whitespace().nth(3).unwrap();
        let (a, b) = range.split_once("..").unwrap();
        let (a, b) = (a.parse::<usize>().unwrap(), b.parse::<usize>().unwrap());
        for (q, slot) in covered.iter_mut().enumerate().take(b + 1).skip(a) {
            assert!(!*slot, "qubit {q} in two registers");
            *slot = true;
        }
    }
    assert!(covered.iter().all(|&c| c));
}

#[test]
fn synth_report_prints_tallies() {
    let o = fbe(&["synth", "arccot", "--n", "2", "--m", "4", "--report"]);
    let s = stdout(&o);
    assert!(s.contains("# raw gates"));
    assert!(s.contains("TOFFOLI:"));
    assert!(s.contains("# qubits"));
}

#[test]
fn synth_is_deterministic() {
    for f in ["log2", "arccos", "arccot", "exp2", "cos", "cot"] {
        let args = [
            "synth",
            f,
            "--n",
            "2",
            "--m",
            "6",
            "--policy",
            "clean",
            "--square",
            "reversed-sqrt",
        ];
        let a = fbe(&args);
        assert!(a.status.success(), "{f}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, fbe(&args).stdout, "{f}");
    }
}

#[test]
fn sim_reproduces_golden_rows() {
    let fixture = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/golden.txt")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut rows = 0;
    for line in fixture
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] != "golden" {
            continue;
        }
        let (function, n, m, input, want) = (f[1], f[2], f[3], f[4], f[5]);
        let path = synth_to(
            dir.path(),
            &format!("{function}-{n}-{m}.txt"),
            &[function, "--n", n, "--m", m],
        );
        let o = fbe(&["sim", &path, input]);
        assert!(o.status.success(), "{line}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(output_register(&stdout(&o)), want, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 11);
}

#[test]
fn sim_rejects_wrong_width() {
    let dir = tempfile::tempdir().unwrap();
    let path = synth_to(dir.path(), "ac.txt", &["arccos", "--n", "2", "--m", "4"]);
    assert_eq!(fbe(&["sim", &path, "1.10"]).status.code(), Some(2));
    assert_eq!(fbe(&["sim", &path, "00.00", "01.00"]).status.code(), Some(2));
}

#[test]
fn sparse_sim_lists_both_branches() {
    let dir = tempfile::tempdir().unwrap();
    let path = synth_to(dir.path(), "cos.txt", &["cos", "--n", "2", "--m", "5"]);
    let s = stdout(&fbe(&["sim", &path, "00", "11", "--mode", "sparse"]));
    assert_eq!(s.matches("amplitude +0.707107").count(), 2);
    assert!(s.contains("= 01.000"));
    assert!(s.contains("= 11.011"));
}

#[test]
fn verify_exit_codes() {
    let o = fbe(&["verify", "table2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("11/11 exact"));
    assert_eq!(o.stdout, fbe(&["verify", "table2"]).stdout);
    assert_eq!(fbe(&["verify", "group1-exact", "--quiet"]).status.code(), Some(1));
}
