use std::path::Path;
use std::process::{Command, Output};

fn mibounds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mibounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mibounds(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Second line, `col`-th field.
fn cell(csv: &str, col: usize) -> f64 {
    csv.lines().nth(1).unwrap().split(',').nth(col).unwrap().parse().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exact_on_z_and_identity() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", &stdout(&["channel", "--kind", "z", "--emit", "joint"]));
    let out = stdout(&["exact", &z]);
    assert_eq!(out, "mi_bits,h_x_bits,h_y_bits\n0.311278124,1.00000000,0.811278124\n");

    let id = write(dir.path(), "id.json", r#"{"matrix": [[0.25, 0, 0], [0, 0.25, 0], [0, 0, 0.5]]}"#);
    let out = stdout(&["exact", &id]);
    assert_eq!(cell(&out, 0), cell(&out, 1));
}

#[test]
fn bound_methods() {
    let dir = tempfile::tempdir().unwrap();
    let bec = write(
        dir.path(),
        "bec.json",
        &stdout(&["channel", "--kind", "bec", "--eps", "0.3", "--input", "0.4", "--emit", "adjacency"]),
    );
    let want = 0.7 * mibounds::binary_entropy(0.4);
    for name in ["thm1", "adjacency"] {
        let out = stdout(&["bound", &bec, "--method", name]);
        assert!(out.starts_with("method,value_bits,iterations\nadjacency,"));
        assert!((cell(&out, 1) - want).abs() < 1e-8);
    }

    let z = write(dir.path(), "z.json", &stdout(&["channel", "--kind", "z", "--emit", "joint"]));
    let one_round = cell(&stdout(&["bound", &z, "--method", "iterative", "--k", "1"]), 1);
    assert!((one_round - 0.307_204_673).abs() < 1e-9);
    let upper = cell(&stdout(&["bound", &z, "--upper", "--actions", "generic"]), 1);
    assert!(upper >= 0.311_278_124 - 1e-9);
    let acts = write(dir.path(), "a.json", &stdout(&["channel", "--kind", "z", "--emit", "actions"]));
    let tight = cell(&stdout(&["bound", &z, "--upper", "--actions", &acts]), 1);
    assert!((tight - 0.311_278_124).abs() < 1e-9);
    let ipf = cell(&stdout(&["bound", &z, "--method", "ipf"]), 1);
    assert!((ipf - 0.311_278_124).abs() < 1e-9);
}

#[test]
fn errors_exit_nonzero_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.csv");
    let target_s = target.to_str().unwrap();

    let bad = write(dir.path(), "bad.json", "{\"matrix\": [[0.5, 0.0], [0.25");
    let out = mibounds(&["exact", &bad, "--output", target_s]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!target.exists());

    let infeasible = write(dir.path(), "inf.json", r#"{"px":[0.5,0.5],"py":[0.5,0.5],"support":[[1,0],[0,0]]}"#);
    let out = mibounds(&["bound", &infeasible, "--output", target_s]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1"));
    assert!(!target.exists());

    let z = write(dir.path(), "z.json", &stdout(&["channel", "--kind", "z", "--emit", "adjacency"]));
    let out = mibounds(&["bound", &z, "--method", "ipf", "--max-iters", "2", "--output", target_s]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());

    assert_eq!(mibounds(&["deletion", "--lower", "--upper", "--d", "0.2"]).status.code(), Some(2));
    assert_eq!(mibounds(&["deletion", "--upper", "--d", "1.5"]).status.code(), Some(2));
    assert_eq!(mibounds(&["channel", "--kind", "bec"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("z.csv");
    let out = mibounds(&["zfigure", "--steps", "5", "--output", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next(), Some("p,baseline,adjacency,one_round,exact"));
}

#[test]
fn boolean_rows() {
    let dir = tempfile::tempdir().unwrap();
    let dict = write(dir.path(), "d.tt", "0101\n");
    let out = stdout(&["boolean", "--truth-table", &dict, "--alpha", "0.1", "--exact"]);
    assert_eq!(out, "n,alpha,H_f,bound_bits,exact_bits\n2,0.100000000,1.00000000,0.531004406,0.531004406\n");

    let constant = write(dir.path(), "c.tt", "00000000");
    let out = stdout(&["boolean", "--truth-table", &constant, "--alpha", "0.3"]);
    assert!(out.ends_with(",0.00000000,\n"), "{out}");

    let big = write(dir.path(), "big.tt", &"0".repeat(1 << 25));
    let out = mibounds(&["boolean", "--truth-table", &big, "--alpha", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn deletion_modes() {
    let upper = stdout(&["deletion", "--upper", "--d", "0.5"]);
    assert!(cell(&upper, 2) < cell(&upper, 3));

    let finite = stdout(&["deletion", "--finite", "--n", "8", "--d", "0.3"]);
    assert!(cell(&finite, 5) <= cell(&finite, 3));

    let lower = stdout(&["deletion", "--lower", "--d", "0.2", "--k1-max", "20", "--k2-max", "20", "--t-grid", "400", "--theta-grid", "201"]);
    assert!(cell(&lower, 2) > cell(&lower, 1));

    let sweep = stdout(&["deletion", "--sweep", "--steps", "3", "--k1-max", "20", "--k2-max", "20", "--t-grid", "400", "--theta-grid", "201"]);
    assert_eq!(sweep.lines().count(), 4);
    assert_eq!(sweep.lines().next(), Some(mibounds::deletion::SWEEP_HEADER));
}
