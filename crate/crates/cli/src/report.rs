//! Report model: one record per check, serialized as versioned JSON.

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Outcome of an open question; never a failure.
    Finding,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub params: Map<String, Value>,
    pub status: Status,
    pub witness: Option<String>,
    pub ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub q: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, q: Vec<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report {
            schema: 1,
            suite: suite.to_string(),
            seed,
            q,
            checks,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// What a check body returns: pass or fail with a witness.
pub enum Outcome {
    Pass,
    Fail(String),
    Finding(String),
}

impl Outcome {
    pub fn from_bool(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(witness())
        }
    }
}

impl<E: std::fmt::Display> From<Result<Outcome, E>> for Outcome {
    fn from(r: Result<Outcome, E>) -> Self {
        r.unwrap_or_else(|e| Outcome::Fail(e.to_string()))
    }
}

/// Collects timed checks.
#[derive(Default)]
pub struct Recorder {
    pub checks: Vec<Check>,
}

impl Recorder {
    pub fn run<E: std::fmt::Display>(
        &mut self,
        id: impl Into<String>,
        anchor: &'static str,
        params: Value,
        body: impl FnOnce() -> Result<Outcome, E>,
    ) {
        let start = Instant::now();
        let outcome: Outcome = body().into();
        let ms = start.elapsed().as_millis() as u64;
        let (status, witness) = match outcome {
            Outcome::Pass => (Status::Pass, None),
            Outcome::Fail(w) => (Status::Fail, Some(w)),
            Outcome::Finding(w) => (Status::Finding, Some(w)),
        };
        let params = match params {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        self.checks.push(Check {
            id: id.into(),
            anchor,
            params,
            status,
            witness,
            ms,
        });
    }

    pub fn extend(&mut self, other: Recorder) {
        self.checks.extend(other.checks);
    }
}

/// Zero out the timing fields of a serialized report.
pub fn strip_timing(json: &str) -> Result<Value, serde_json::Error> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Some(checks) = v.get_mut("checks").and_then(Value::as_array_mut) {
        for c in checks {
            if let Some(obj) = c.as_object_mut() {
                obj.insert("ms".into(), Value::from(0));
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn checks_are_sorted_and_keyed_in_order() {
        let mut r = Recorder::default();
        r.run::<String>("b", "second", json!({"n": 2}), || Ok(Outcome::Pass));
        r.run::<String>("a", "first", Value::Null, || Err("boom".into()));
        let rep = Report::new("demo", 7, vec!["2/3".into()], r.checks);
        assert!(rep.failed());
        let text = rep.to_json();
        let keys: Vec<usize> = ["\"schema\"", "\"suite\"", "\"seed\"", "\"q\"", "\"checks\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.find("\"id\": \"a\"").unwrap() < text.find("\"id\": \"b\"").unwrap());
        assert!(text.contains("\"witness\": \"boom\""));
        assert!(text.contains("\"status\": \"fail\""));
    }

    #[test]
    fn timing_is_stripped() {
        let a = r#"{"checks":[{"id":"x","ms":12}]}"#;
        let b = r#"{"checks":[{"id":"x","ms":40}]}"#;
        assert_eq!(strip_timing(a).unwrap(), strip_timing(b).unwrap());
    }
}
