//! Runs a CLI job from an in-memory TOML configuration and prints the CSV
//! it writes. Same as `parityq sw --config <file> --out <path>`.
//!
//! cargo run --example run_job

use parityq::cli::{run as run_cli, JobConfig, JobKind};
use parityq::Result;

const CONFIG: &str = r#"
[circuit]
e_j_t = 12.0
e_c_t = 0.2
e_j_p = 2.7
e_c_p = 0.15
e_c_c = 0.025

[sweep]
axis = "n_g_p"
start = 0.0
stop = 0.5
points = 6

[sw]
levels_t = 4
levels_p = 8
"#;

pub fn run() -> Result<String> {
    let cfg = JobConfig::parse(CONFIG)?;
    let out = std::env::temp_dir().join(format!("parityq_run_job_{}.csv", std::process::id()));
    run_cli(JobKind::Sw, &cfg, &out)?;
    let text = std::fs::read_to_string(&out)?;
    std::fs::remove_file(&out)?;
    for line in text.lines() {
        let cells: Vec<&str> = line.split(',').collect();
        let shown = cells.len().min(6);
        println!(
            "{}{}",
            cells[..shown].join(","),
            if cells.len() > shown { ",..." } else { "" }
        );
    }
    Ok(text)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
