//! Run manifests: one JSON file next to every output, enough to re-run it.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use crate::failure::CliResult;

pub struct RunManifest {
    command: Vec<String>,
    seeds: Vec<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl RunManifest {
    pub fn start(command: Vec<String>) -> Self {
        Self {
            command,
            seeds: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seeds.push(seed);
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.to_path_buf());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.to_path_buf());
        self
    }

    pub fn to_value(&self) -> Value {
        let paths = |v: &[PathBuf]| v.iter().map(|p| p.display().to_string()).collect::<Vec<_>>();
        json!({
            "command": self.command,
            "seeds": self.seeds,
            "inputs": paths(&self.inputs),
            "outputs": paths(&self.outputs),
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "threads": crate::threads(),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
        })
    }

    /// Writes `<output>.manifest.json` for every recorded output.
    pub fn write(&self) -> CliResult<()> {
        let text = serde_json::to_string_pretty(&self.to_value()).expect("manifest serializes");
        for out in &self.outputs {
            std::fs::write(manifest_path(out), format!("{text}\n"))?;
        }
        Ok(())
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
