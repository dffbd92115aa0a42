use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: String,
    pub results: Value,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable"),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut rows = vec![("command".to_string(), self.command.clone())];
        if let Some(s) = self.seed {
            rows.push(("seed".into(), s.to_string()));
        }
        match &self.results {
            Value::Object(map) => {
                for (k, v) in map {
                    rows.push((k.clone(), compact(v)));
                }
            }
            v => rows.push(("results".into(), compact(v))),
        }
        rows.push(("elapsed_ms".into(), self.elapsed_ms.to_string()));
        rows.push(("inputs".into(), self.inputs.clone()));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        if self.violations.is_empty() {
            out.push_str("violations: none");
        } else {
            out.push_str(&format!("violations: {}", self.violations.len()));
            for v in &self.violations {
                out.push_str(&format!("\n  - {v}"));
            }
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

/// Accumulates the hashed inputs and the timing of one command.
pub struct Run {
    command: &'static str,
    hasher: Sha256,
    started: Instant,
    seed: Option<u64>,
}

impl Run {
    pub fn new(command: &'static str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Self {
            command,
            hasher,
            started: Instant::now(),
            seed: None,
        }
    }

    pub fn input(&mut self, bytes: impl AsRef<[u8]>) {
        let bytes = bytes.as_ref();
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.input(seed.to_le_bytes());
    }

    pub fn finish(self, results: impl Serialize, violations: Vec<String>) -> RunReport {
        RunReport {
            command: self.command.to_string(),
            inputs: format!("sha256:{}", hex::encode(self.hasher.finalize())),
            results: serde_json::to_value(results).expect("serializable"),
            violations,
            seed: self.seed,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}
