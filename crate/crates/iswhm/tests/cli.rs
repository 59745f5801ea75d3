use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn iswhm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iswhm")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn exit_codes() {
    assert_eq!(code(&iswhm(&["solve", "-e", "x-16", "-P", "6", "-T", "2000"])), 0);
    assert_eq!(code(&iswhm(&["solve", "-e", "x-7", "-P", "6", "-T", "2000"])), 0);
    assert_eq!(code(&iswhm(&["solve", "-e", "x-16", "-P", "6", "-T", "5"])), 2);
    assert_eq!(code(&iswhm(&["solve", "-e", "x*0", "-P", "2", "-T", "5"])), 0);
    assert_eq!(code(&iswhm(&["solve", "-e", "x+", "-P", "6", "-T", "5"])), 1);
    assert_eq!(code(&iswhm(&["solve", "-e", "x", "-P", "0", "-T", "5"])), 1);
    assert_eq!(code(&iswhm(&["solve", "-e", "x-1", "-P", "3"])), 1);
    assert_eq!(code(&iswhm(&["solve", "-e", "x*y*z-1", "-P", "20", "-T", "5", "--max-dim", "100"])), 1);
    assert_eq!(code(&iswhm(&["gates", "verify"])), 0);
    assert_ne!(code(&iswhm(&["gates", "verify", "--phi-offset", "0.01"])), 0);
}

#[test]
fn errors_go_to_stderr() {
    let o = iswhm(&["solve", "-e", "x^y", "-P", "2", "-T", "5"]);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn verdict_json_fields() {
    let o = iswhm(&["solve", "-e", "(x+1)*(y+2)-12", "-P", "2", "-T", "1000"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "status",
        "equation",
        "P",
        "T",
        "dt",
        "dominant_state",
        "dominant_probability",
        "solution",
        "e0_final",
        "expectations_final",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["equation"], "x*y + 2*x + y - 10");
    assert_eq!(v["P"], 2);
    assert_eq!(v["T"], 1000.0);
    assert_eq!(v["solution"]["y"], 4);

    let v: Value = serde_json::from_str(&stdout(&iswhm(&["solve", "-e", "x-7", "-P", "6", "-T", "2000"]))).unwrap();
    assert_eq!(v["status"], "NoSolution");
    assert_eq!(v["solution"], Value::Null);

    let v: Value = serde_json::from_str(&stdout(&iswhm(&["solve", "-e", "3", "-P", "2", "-T", "5"]))).unwrap();
    assert_eq!(v["status"], "NoSolution");
    assert_eq!(v["e0_final"], 9.0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let csv = dir.path().join(format!("run{run}.csv"));
        let o = iswhm(&["trace", "-e", "(x+1)*(y+2)-12", "-P", "2", "-T", "300", "-o", csv.to_str().unwrap(), "--svg"]);
        assert_eq!(code(&o), 0);
        let svg = std::fs::read(dir.path().join(format!("run{run}_probabilities.svg"))).unwrap();
        let solve = iswhm(&["solve", "-e", "x-7", "-P", "6", "-T", "400"]).stdout;
        let spectrum = iswhm(&["spectrum", "-e", "x-7", "-P", "6", "-T", "400"]).stdout;
        let gates = iswhm(&["gates", "verify", "--json"]).stdout;
        outputs.push((std::fs::read(&csv).unwrap(), svg, solve, spectrum, gates));
    }
    assert!(outputs[0] == outputs[1]);
}

#[test]
fn trace_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("eq7.csv");
    let o = iswhm(&[
        "trace",
        "-e",
        "(x+1)*(y+2)-12",
        "-P",
        "2",
        "-T",
        "1000",
        "--e0-stride",
        "100",
        "--record-stride",
        "10",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, ["t", "E0", "exp_x", "exp_y", "p_1_1", "p_1_2", "p_2_1", "p_2_2"]);
    assert_eq!(rows.len(), 101);
    assert_eq!(rows.iter().filter(|r| !r[1].is_empty()).count(), 11);
    assert_eq!(rows[1][1], "");
    for row in &rows {
        let total: f64 = row[4..].iter().map(|p| p.parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-10);
        for field in row.iter().filter(|f| !f.is_empty()) {
            let digits = field.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert!(digits.trim_start_matches('0').len() <= 12, "{field}");
        }
    }
    let last = rows.last().unwrap();
    assert_eq!(last[0], "1000");
    let (ex, ey): (f64, f64) = (last[2].parse().unwrap(), last[3].parse().unwrap());
    assert!((ex - 1.0).abs() < 0.5 && (ey - 4.0).abs() < 0.5);
}

#[test]
fn trace_to_stdout_and_e0_column() {
    let o = iswhm(&["trace", "-e", "x-7", "-P", "6", "-T", "2000"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["t", "E0", "exp_x", "p_1", "p_2", "p_3", "p_4", "p_5", "p_6"]
    );
    let last = r.records().last().unwrap().unwrap();
    let e0: f64 = last[1].parse().unwrap();
    assert!((e0 - 4.0).abs() < 1e-6);
}

#[test]
fn spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flow.csv");
    let o = iswhm(&[
        "spectrum",
        "-e",
        "x-16",
        "-P",
        "6",
        "-T",
        "100",
        "--e0-stride",
        "10",
        "-o",
        out.to_str().unwrap(),
        "--svg",
    ]);
    assert_eq!(code(&o), 0);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["t", "s", "e0", "gap"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][..2], ["0", "0"]);
    assert!(rows[0][2].parse::<f64>().unwrap().abs() < 1e-10);
    assert_eq!(rows[10][..3], ["100", "1", "0"]);
    assert!(dir.path().join("flow_spectrum.svg").exists());
}

#[test]
fn svg_charts_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq5.csv");
    let o = iswhm(&["solve", "-e", "x-16", "-P", "6", "-T", "50", "-o", out.to_str().unwrap(), "--svg"]);
    assert_eq!(code(&o), 2);
    assert!(out.exists());
    for (suffix, curves) in [("probabilities", 6), ("expectations", 1), ("e0", 1)] {
        let svg = std::fs::read_to_string(dir.path().join(format!("eq5_{suffix}.svg"))).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), curves, "{suffix}");
    }
    let o = iswhm(&["trace", "-e", "x-16", "-P", "6", "-T", "20", "--svg"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn operator_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("ops.json");
    let o = iswhm(&[
        "spectrum",
        "-e",
        "x*y-2",
        "-P",
        "2",
        "-T",
        "4",
        "--hi-form",
        "laplacian",
        "--dump-operators",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["spec"]["k"], 2);
    assert_eq!(v["hi_form"], "laplacian");
    let hd = v["h_d"].as_array().unwrap();
    let diag: Vec<f64> = (0..4).map(|i| hd[i][i][0].as_f64().unwrap()).collect();
    // (n1^2 n2^2 - 2)^2 over (1,1), (1,2), (2,1), (2,2)
    assert_eq!(diag, [1.0, 4.0, 4.0, 196.0]);
    assert_eq!(v["h_i"][0][0], serde_json::json!([3.0, 0.0]));
    assert_eq!(v["h_i"][0][1], serde_json::json!([-1.0, 0.0]));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("eq6.toml");
    std::fs::write(&cfg, "equation = \"x - 7\"\nP = 6\nT = 2000\ndt = 1\nhi_form = \"complement_projector\"\n")
        .unwrap();
    let c = cfg.to_str().unwrap();
    let v: Value = serde_json::from_str(&stdout(&iswhm(&["solve", "-c", c]))).unwrap();
    assert_eq!(v["status"], "NoSolution");
    let v: Value = serde_json::from_str(&stdout(&iswhm(&["solve", "-c", c, "-e", "x-16"]))).unwrap();
    assert_eq!(v["status"], "HasSolution");
    let v: Value = serde_json::from_str(&stdout(&iswhm(&["solve", "-c", c, "-T", "10"]))).unwrap();
    assert_eq!(v["T"], 10.0);

    std::fs::write(&cfg, "equation = \"x - 7\"\nlevels = 6\n").unwrap();
    assert_eq!(code(&iswhm(&["solve", "-c", cfg.to_str().unwrap(), "-T", "10"])), 1);
    assert_eq!(code(&iswhm(&["solve", "-c", "/nonexistent/config.toml"])), 1);
}

#[test]
fn alternative_interaction_forms_run() {
    for form in ["complement_projector", "ones", "laplacian"] {
        let o = iswhm(&["solve", "-e", "x-4", "-P", "3", "-T", "50", "--hi-form", form]);
        assert_ne!(code(&o), 1, "{form}");
    }
    assert_eq!(code(&iswhm(&["solve", "-e", "x-4", "-P", "3", "-T", "50", "--hi-form", "identity"])), 1);
    assert_eq!(code(&iswhm(&["solve", "-e", "x-4", "-P", "3", "-T", "50", "--schedule", "midpoint"])), 0);
}

#[test]
fn gates_table() {
    let text = stdout(&iswhm(&["gates", "verify"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].split_whitespace().eq(["gate", "phi", "fidelity", "pass"]));
    for (line, name) in lines[1..].iter().zip(["phase", "cnot", "hadamard"]) {
        assert!(line.starts_with(name));
        assert!(line.ends_with("yes"));
    }
}
