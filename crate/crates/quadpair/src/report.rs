//! Structured verification reports: one named line per check, JSON and text
//! renderings, deterministic for a fixed seed.

use std::fmt::Write as _;

use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub max_total: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(suite: &str, seed: u64, samples: usize, max_total: usize) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.into(),
            seed,
            samples,
            max_total,
            checks: Vec::new(),
            pass: true,
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn merge(&mut self, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}/{}", other.suite, c.name);
            self.push(c);
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (seed {}, samples {}, max-total {})",
            self.suite, self.seed, self.samples, self.max_total
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {}: {}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(
            out,
            "{}: {} ({} checks, {} ms)",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed_ms
        );
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
