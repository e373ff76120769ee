use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of one command. The canonical body excludes timings.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: String,
    pub checks: Vec<Check>,
    pub results: serde_json::Map<String, Value>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

pub fn digest(command: &str, inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]]) -> Self {
        Report {
            command: command.into(),
            inputs_digest: digest(command, inputs),
            status: "pass".into(),
            checks: Vec::new(),
            results: serde_json::Map::new(),
            timings: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) {
        if !pass {
            self.status = "fail".into();
        }
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness: if pass { None } else { witness },
        });
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((label.into(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "command  {}\ninputs   {}\nstatus   {}\n",
            self.command, self.inputs_digest, self.status
        );
        if !self.checks.is_empty() {
            out.push_str("checks\n");
            let w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
            for c in &self.checks {
                let mark = if c.pass { "pass" } else { "FAIL" };
                match &c.witness {
                    Some(wit) => out.push_str(&format!("  [{mark}] {:<w$}  {wit}", c.name)),
                    None => out.push_str(&format!("  [{mark}] {}", c.name)),
                }
                out.push('\n');
            }
        }
        if !self.results.is_empty() {
            out.push_str("results\n");
            for (k, v) in &self.results {
                render(&mut out, k, v, 1);
            }
        }
        out
    }

    pub fn timings_line(&self) -> String {
        let parts: Vec<String> = self.timings.iter().map(|(k, t)| format!("{k}={t:.3}s")).collect();
        format!("timings {}", parts.join(" "))
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let s: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{pad}{key}: {}\n", s.join("  ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, item) in map {
                render(out, k, item, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn failing_check_sets_status_and_keeps_witness() {
        let mut r = Report::new("hh", &[b"x"]);
        r.check("first", true, Some("unused".into()));
        r.check("second", false, Some("degree 2".into()));
        r.set("dims", json!([1, 0]));
        assert_eq!(r.status, "fail");
        assert!(!r.passed());
        assert_eq!(r.checks[0].witness, None);
        assert!(r.human().contains("[FAIL] second  degree 2"));
    }

    #[test]
    fn timings_stay_out_of_the_body() {
        let mut a = Report::new("x", &[]);
        let mut b = Report::new("x", &[]);
        a.time("step", || std::thread::sleep(std::time::Duration::from_millis(2)));
        b.time("step", || ());
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(a.timings_line().starts_with("timings step="));
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest("c", &[b"ab", b"c"]), digest("c", &[b"a", b"bc"]));
        assert_eq!(digest("c", &[b"ab"]).len(), "sha256:".len() + 64);
    }
}
