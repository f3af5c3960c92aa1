#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use corrdyn_cli::CommonArgs;

/// A CSV table split into its `# key=value` preamble and numeric columns.
pub struct Csv {
    pub meta: HashMap<String, String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn read(path: &Path) -> Self {
        let text =
            std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut meta = HashMap::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv.split_once('=').expect("key=value");
                meta.insert(k.to_string(), v.to_string());
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let header = reader.headers().unwrap().iter().map(String::from).collect();
        let rows = reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        Self { meta, header, rows }
    }

    pub fn col(&self, name: &str) -> Vec<f64> {
        let k = self
            .header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap()).collect()
    }

    pub fn value(&self, quantity: &str) -> f64 {
        let q = self.col_str("quantity");
        let v = self.col("value");
        q.iter()
            .position(|x| x == quantity)
            .map(|k| v[k])
            .expect("quantity present")
    }

    pub fn col_str(&self, name: &str) -> Vec<String> {
        let k = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[k].clone()).collect()
    }
}

pub fn write_scenario(dir: &Path, name: &str, json: &serde_json::Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(json).unwrap()).unwrap();
    path
}

pub fn common(scenario: Option<&Path>, out: &Path) -> CommonArgs {
    CommonArgs {
        scenario: scenario.map(Path::to_path_buf),
        out: out.to_path_buf(),
        ..CommonArgs::default()
    }
}

/// Runs the binary and returns its exit code.
pub fn run_bin(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_corrdyn"))
        .args(args)
        .output()
        .expect("binary runs");
    out.status.code().unwrap_or(-1)
}

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

pub fn uncorrelated_custom() -> serde_json::Value {
    serde_json::json!({
        "model": {
            "type": "custom", "d_s": 2, "d_e": 2,
            "h_s": [[0.5, 0], [0, -0.5]],
            "h_e": [[0.3, 0], [0, -0.3]],
            "h_i": [[0, 0, 0, 0.25], [0, 0, 0.25, 0], [0, 0.25, 0, 0], [0.25, 0, 0, 0]],
            "rho_e": [[0.7, [0.1, 0.05]], [[0.1, -0.05], 0.3]],
            "chi": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
        },
        "initial_state": {"bloch": [0.3, -0.2, 0.5]},
        "time_grid": {"t_max": 4.0, "steps": 200}
    })
}
