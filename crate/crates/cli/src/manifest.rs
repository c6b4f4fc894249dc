//! Per-invocation run manifest.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::{Command, Global};

/// Everything needed to rerun an invocation. Only `timing` varies between
/// identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    command: String,
    argv: Vec<String>,
    seed: u64,
    budget: Value,
    threads: Option<usize>,
    cache_dir: String,
    artifacts: Vec<String>,
    verification: Value,
    exit_code: u8,
    timing: Value,
    #[serde(skip)]
    started: Option<(Instant, u128)>,
}

impl RunManifest {
    pub fn start(g: &Global, command: &Command) -> Self {
        let name = match command {
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Bounds { .. } => "bounds",
            Command::Search { .. } => "search",
            Command::Attack { .. } => "attack",
            Command::Export { .. } => "export",
        };
        let cache = splitcode_core::ingredients::cache::IngredientCache::resolve(g.cache_dir.as_deref());
        let epoch_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
        Self {
            command: name.into(),
            argv: std::env::args().skip(1).collect(),
            seed: g.seed,
            budget: json!({ "moves": g.budget, "restarts": g.restarts }),
            threads: g.threads,
            cache_dir: cache.dir().display().to_string(),
            artifacts: vec![],
            verification: Value::Null,
            exit_code: 0,
            timing: Value::Null,
            started: Some((Instant::now(), epoch_ms)),
        }
    }

    pub fn finish(&mut self, code: u8, artifacts: Vec<String>, verification: Value) {
        self.exit_code = code;
        self.artifacts = artifacts;
        self.verification = verification;
        if let Some((t0, epoch_ms)) = self.started {
            self.timing = json!({ "started_unix_ms": epoch_ms as u64, "wall_clock_ms": t0.elapsed().as_millis() as u64 });
        }
    }

    /// Next to the artifact as `<out>.manifest.json`, else on stderr.
    pub fn emit(&self, out: Option<&Path>) {
        let value = serde_json::to_value(self).expect("manifests serialize");
        let text = format!("{}\n", serde_json::to_string_pretty(&value).expect("values serialize"));
        match out {
            Some(path) if self.exit_code == 0 => {
                let mut name = path.as_os_str().to_owned();
                name.push(".manifest.json");
                if let Err(e) = splitcode_core::ingredients::cache::write_atomic(Path::new(&name), text.as_bytes()) {
                    eprintln!("warning: cannot write manifest: {e}");
                }
            }
            _ => eprint!("{text}"),
        }
    }
}
