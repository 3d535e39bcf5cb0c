use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use rank2sep_cli::report::Report;
use rank2sep_cli::state_file::{parse_state_file, StateFile};

fn golden(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/golden");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rank2sep"))
        .args(args)
        .env_remove("RANK2SEP_SEED")
        .output()
        .expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rank2sep"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn corollary_golden_is_entangled() {
    let o = run(&["check", &golden("bell_mixture_p25.state")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("ENTANGLED (corollary fast path: p=0.25 < 1/2)")
    );
}

#[test]
fn classical_mixture_decomposes() {
    let o = run(&["decompose", &golden("classical_mix.state")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("SEPARABLE"));
    assert_eq!(text.matches("weight 0.5").count(), 2, "{text}");
}

#[test]
fn bell_pair_in_eigen_form() {
    let o = run(&[
        "--format",
        "machine-readable",
        "decompose",
        &golden("bell_basis_pair.state"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&o.stdout).unwrap();
    let v = report.verdict.unwrap();
    assert!(v.separable);
    assert_eq!(v.roots, Some([[-1.0, 0.0], [1.0, 0.0]]));
    assert_eq!(v.p_prime, Some(0.5));
    assert_eq!(v.decomposition.unwrap().len(), 2);
    // every residual printed next to its threshold
    assert!(v.residuals.iter().all(|r| r.threshold == 1e-9));
}

#[test]
fn concurrence_of_bell_state() {
    let o = run(&["concurrence", &golden("bell.state")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("C_N = 1\n"), "{text}");
    assert!(text.contains("I_0: 1\n") && text.contains("I_1: 0.5\n"), "{text}");
}

#[test]
fn ppt_oracle_alone() {
    let o = run(&["ppt", &golden("bell.state")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("-5.0000e-1"));
    let o = run(&["-q", "ppt", &golden("classical_mix.state")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PPT"));
}

#[test]
fn invalid_inputs_exit_2() {
    let o = run(&["check", &golden("trace_deficit.state")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace deficit 0.1"), "{}", stderr(&o));

    let o = run(&["check", &golden("overlapping_pair.state")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|<E1|E2>| = 0.200000"));

    let o = run(&["check", &golden("malformed.state")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5, column 46"), "{}", stderr(&o));

    let o = run(&["check", "/nonexistent/file.state"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["check", "--format", "yaml", &golden("bell.state")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_four_is_an_error() {
    let rho = rank2sep::ComplexMatrix::identity(4).scale_real(0.25);
    let text = StateFile::density_matrix(&rho, 2).to_json();
    let o = run_with_stdin(&["check", "-"], text.as_bytes());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rank"), "{}", stderr(&o));
}

#[test]
fn generate_then_check_reproduces_planted_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, expected) in [("product-mixture", 0), ("generic", 1), ("corollary", 1)] {
        for n in ["2", "3", "4"] {
            for seed in ["1", "42", "2024"] {
                let g = run(&["generate", "--kind", kind, "--n", n, "--p", "0.35", "--seed", seed]);
                assert_eq!(g.status.code(), Some(0));
                let path = dir.path().join(format!("{kind}-{n}-{seed}.state"));
                std::fs::write(&path, &g.stdout).unwrap();
                let c = run(&["-q", "check", path.to_str().unwrap()]);
                assert_eq!(
                    c.status.code(),
                    Some(expected),
                    "{kind} N={n} seed={seed}: {}",
                    stdout(&c)
                );
                // the same bytes piped through stdin give the same answer
                let piped = run_with_stdin(&["-q", "check", "-"], &g.stdout);
                assert_eq!(stdout(&piped), stdout(&c));
            }
        }
    }
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "--kind", "generic", "--n", "3", "--seed", "9"]);
    let b = run(&["generate", "--kind", "generic", "--n", "3", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let (file, _) = parse_state_file(&a.stdout, 1e-9).unwrap();
    assert_eq!(file.n, 3);
}

#[test]
fn machine_readable_round_trips() {
    for args in [
        vec!["check", "bell_mixture_p25.state"],
        vec!["decompose", "classical_mix.state"],
        vec!["concurrence", "bell.state"],
        vec!["ppt", "bell_basis_pair.state"],
    ] {
        let path = golden(args[1]);
        let o = run(&["--format", "machine-readable", args[0], &path]);
        let text = stdout(&o);
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report.schema_version, "rank2sep.report/1");
        assert_eq!(report.input.as_ref().unwrap().sha256.len(), 64);
        assert_eq!(report.to_json().trim(), text.trim());
        let again: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn tolerance_flag_is_echoed() {
    let o = run(&[
        "--tol",
        "1e-7",
        "--format",
        "machine-readable",
        "check",
        &golden("classical_mix.state"),
    ]);
    let report: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.tolerances.residual, 1e-7);
    let o = run(&["--tol", "-1", "check", &golden("classical_mix.state")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_reports_seed() {
    let o = Command::new(env!("CARGO_BIN_EXE_rank2sep"))
        .args(["--format", "machine-readable", "selftest", "--trials", "20"])
        .env("RANK2SEP_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.provenance.seed, Some(77));
    assert!(report.selftest.iter().all(|s| s.failed == 0));
    assert_eq!(report.selftest.len(), 5);
}
