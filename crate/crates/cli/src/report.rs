use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Result of one command. `results` is a JSON object, so keys come out
/// sorted; `lines` is the human-readable rendering.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input_digest: String,
    pub results: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, inputs: &[&[u8]]) -> Self {
        Self {
            command,
            input_digest: digest(inputs),
            results: Value::Object(Default::default()),
            warnings: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("serializable report field");
        self.results
            .as_object_mut()
            .expect("results is an object")
            .insert(key.to_string(), value);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn warn(&mut self, text: impl Into<String>) {
        self.warnings.push(text.into());
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str("warning: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

/// SHA-256 over the inputs, each prefixed by its length.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    hex::encode(h.finalize())
}
