//! Suite reports in text and JSON form.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { id: id.into(), pass, detail: detail.into(), wall_ms: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, samples: usize, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Report { suite: suite.to_string(), seed, samples, passed, failed: checks.len() - passed, checks }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    /// Wall times are dropped so that equal seeds give identical JSON.
    pub fn to_json(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_ms = None;
        }
        serde_json::to_string_pretty(&r).expect("serializable")
    }

    pub fn merge(suite: &str, seed: u64, samples: usize, parts: Vec<Report>) -> Report {
        let mut checks = Vec::new();
        for r in parts {
            for mut c in r.checks {
                c.id = format!("{}/{}", r.suite, c.id);
                checks.push(c);
            }
        }
        Report::new(suite, seed, samples, checks)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let time = c.wall_ms.map(|t| format!(" ({t} ms)")).unwrap_or_default();
            writeln!(f, "{} {}{}{}", if c.pass { "PASS" } else { "FAIL" }, c.id, if c.detail.is_empty() { String::new() } else { format!("  {}", c.detail) }, time)?;
        }
        write!(f, "{}: {} passed, {} failed", self.suite, self.passed, self.failed)
    }
}

/// Run `f`, stamping each returned check with the elapsed time.
pub fn timed(f: impl FnOnce() -> Vec<Check>) -> Vec<Check> {
    let start = Instant::now();
    let mut out = f();
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut out {
        c.wall_ms = Some(ms);
    }
    out
}
