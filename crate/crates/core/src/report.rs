//! Versioned envelope for machine-readable output: every tool invocation
//! emits `{"schema_version": "1", "sections": [...]}` where each section
//! carries its kind and wall-clock cost.

use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub kind: String,
    pub elapsed_ms: u64,
    pub body: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub schema_version: &'static str,
    pub sections: Vec<Section>,
}

impl Default for Envelope {
    fn default() -> Self {
        Self::new()
    }
}

impl Envelope {
    pub fn new() -> Self {
        Envelope { schema_version: SCHEMA_VERSION, sections: Vec::new() }
    }

    /// Appends a section, timing it from `started`.
    pub fn push(&mut self, kind: &str, started: Instant, body: &impl Serialize) {
        self.sections.push(Section {
            kind: kind.to_string(),
            elapsed_ms: started.elapsed().as_millis() as u64,
            body: serde_json::to_value(body).expect("report bodies serialize"),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_carries_version_and_ordered_sections() {
        let mut env = Envelope::new();
        let t = Instant::now();
        env.push("first", t, &serde_json::json!({"x": 1}));
        env.push("second", t, &serde_json::json!([1, 2]));
        let v: Value = serde_json::from_str(&env.to_json()).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["sections"][0]["kind"], "first");
        assert_eq!(v["sections"][1]["kind"], "second");
        assert_eq!(v["sections"][0]["body"]["x"], 1);
        assert!(v["sections"][0]["elapsed_ms"].is_u64());
    }
}
