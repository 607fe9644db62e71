//! The `parityq` binary end to end.

use std::path::{Path, PathBuf};
use std::process::Command;

const CIRCUIT: &str =
    "[circuit]\ne_j_t = 12.0\ne_c_t = 0.2\ne_j_p = 2.7\ne_c_p = 0.15\ne_c_c = 0.025\n";

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("parityq_cli_{}_{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn parityq(job: &str, config: &Path, out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_parityq"))
        .args([job, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--threads", "2"])
        .output()
        .unwrap()
}

#[test]
fn spectrum_csv_is_deterministic() {
    let d = workdir("spectrum");
    let cfg = d.join("job.toml");
    std::fs::write(
        &cfg,
        format!("{CIRCUIT}[sweep]\naxis = \"n_g_p\"\nstart = 0.0\nstop = 1.0\npoints = 21\n[spectrum]\nmodel = \"ppq\"\nlevels = 4\n"),
    )
    .unwrap();
    let (a, b) = (d.join("a.csv"), d.join("b.csv"));
    assert!(parityq("spectrum", &cfg, &a).status.success());
    assert!(parityq("spectrum", &cfg, &b).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.contains("# units: energies GHz"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n_g_p,E0,E1,E2,E3,parity0,parity1,parity2,parity3");
    assert_eq!(rows.len(), 22);
    let grid: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(grid.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn gate_json_reports_in_ns() {
    let d = workdir("gate");
    let cfg = d.join("job.toml");
    std::fs::write(
        &cfg,
        format!("{CIRCUIT}n_g_p = 0.5\n[gate]\nkind = \"x\"\nangle = 3.141592653589793\n"),
    )
    .unwrap();
    let out = d.join("x.json");
    let o = parityq("gate", &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let r = &v["result"];
    assert!(r["fidelity"].as_f64().unwrap() > 0.99);
    let t = r["duration_ns"].as_f64().unwrap();
    assert!(t > 0.1 && t < 1e4, "{t}");
    assert_eq!(r["unitary_p0"]["re"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_config_reports_line() {
    let d = workdir("bad");
    let cfg = d.join("job.toml");
    std::fs::write(&cfg, format!("{CIRCUIT}[gate]\nkind = \"cz\"\nwidth = 3\n")).unwrap();
    let o = parityq("gate", &cfg, &d.join("never.json"));
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("error[config]") && err.contains("line 9"),
        "{err}"
    );
    assert!(!d.join("never.json").exists());
}

#[test]
fn sweep_failure_names_the_point() {
    let d = workdir("point");
    let cfg = d.join("job.toml");
    std::fs::write(
        &cfg,
        format!("{CIRCUIT}[sweep]\naxis = \"e_c_c\"\nstart = 0.0\nstop = 0.02\npoints = 3\n[spectrum]\nmodel = \"coupled\"\nlevels = 500\n"),
    )
    .unwrap();
    let o = parityq("spectrum", &cfg, &d.join("s.csv"));
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("at e_c_c = 0"), "{err}");
}
