use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gsprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsprep")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

const SIGN: &str = "[sign]\nkappa = 0.3\nepsilon = 1e-3\ngrid_points = 101\n";

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[sign]\nepsilon = 1e-3\ncolour = 1\n");
    let out = gsprep(&["signpoly", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn missing_config_and_bad_values_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("o");
    let out = gsprep(&["qubo", "--config", "/nonexistent/q.toml", "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write(dir.path(), "k.toml", "[sign]\nkappa = 0.9\nepsilon = 1e-3\n");
    assert_eq!(gsprep(&["signpoly", "--config", &cfg]).status.code(), Some(2));
    let cfg = write(dir.path(), "s.toml", SIGN);
    assert_eq!(gsprep(&["signpoly", "--config", &cfg, "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(gsprep(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn malformed_operator_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "qubits 2\n0.5 XQ\n");
    let cfg = write(
        dir.path(),
        "c.toml",
        "[hamiltonian]\nsource = \"file\"\npath = \"h.txt\"\n\n[ansatz]\nkind = \"hea\"\ndepth = 1\n",
    );
    let out = gsprep(&["qps-prepare", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SIGN);
    let blocker = write(dir.path(), "file", "");
    let out = gsprep(&["signpoly", "--config", &cfg, "--out", &format!("{blocker}/o")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn signpoly_writes_table_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SIGN);
    let o = dir.path().join("o");
    let out = gsprep(&["signpoly", "--config", &cfg, "--out", o.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(o.join("signpoly.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102);
    assert!(csv.starts_with("x[rad],f[1],reconstruction[1],target[1],deviation[1]\n"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(o.join("signpoly.json")).unwrap()).unwrap();
    assert!(json["summary"]["max_deviation"].as_f64().unwrap() <= 1e-3);
    assert_eq!(json["config"]["sign"]["kappa"].as_f64(), Some(0.3));
}

#[test]
fn qubo_output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "q.toml",
        "[qubo]\nsizes = [5, 7]\ninstances = 3\nrestarts = 2\nseed = 11\n\n[optimizer]\niterations = 40\n",
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(gsprep(&["qubo", "--config", &cfg, "--out", a.to_str().unwrap()]).status.success());
    assert!(gsprep(&["qubo", "--config", &cfg, "--out", b.to_str().unwrap(), "--jobs", "3"]).status.success());
    let (ta, tb) = (read_tree(&a), read_tree(&b));
    assert_eq!(ta.len(), 3);
    assert_eq!(ta, tb);
}

#[test]
fn qps_prepare_from_fermion_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "dimer.txt", "modes 4\n-1 0^ 2\n-1 2^ 0\n-1 1^ 3\n-1 3^ 1\n4 0^ 0 1^ 1\n4 2^ 2 3^ 3\n");
    let cfg = write(
        dir.path(),
        "c.toml",
        "seed = 2\n\n[hamiltonian]\nsource = \"file\"\npath = \"dimer.txt\"\n\n[ansatz]\nkind = \"hea\"\ndepth = 2\n\n[optimizer]\niterations = 80\n",
    );
    let o = dir.path().join("o");
    let out = gsprep(&["qps-prepare", "--config", &cfg, "--out", o.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace: serde_json::Value = serde_json::from_str(&fs::read_to_string(o.join("qps_trace.json")).unwrap()).unwrap();
    let result = &trace["result"];
    assert_eq!(result["qubits"].as_u64(), Some(4));
    let fidelity = result["search"]["fidelity"].as_f64().unwrap();
    assert!(fidelity > 1.0 - 1e-4, "fidelity {fidelity}");
    assert!(!result["search"]["traces"].as_array().unwrap().is_empty());
}
