use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// The machine-readable document every command writes to standard output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Vec<String>,
    /// Sequences and shift sequences in their text forms.
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub timing_us: u64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            command,
            inputs: BTreeMap::new(),
            results: Value::Null,
            timing_us: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    #[cfg(test)]
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roundtrip() {
        let mut r = Report::new(vec!["check".into(), "--e".into(), "0,1".into()]);
        r.input("e", "0,1");
        r.results = json!({"verdict": true, "values": [7, -1, -1]});
        r.timing_us = 1234;
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
