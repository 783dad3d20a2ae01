//! Run reports. Every command fills the same structure, rendered either as
//! line-oriented text or as JSON; both renderings are deterministic, so a
//! rerun on identical input and seed produces byte-identical output.

use serde::Serialize;

use padic_lattice::Vector;

use crate::instance::format_vector_strings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    /// Echo of the command and its significant flags.
    pub command: String,
    /// Digest of the instance file's raw bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(rename = "lambda", skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wrote: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        if let Some(d) = &self.instance {
            line(format!("instance: {d}"));
        }
        if let Some(paths) = &self.wrote {
            for p in paths {
                line(format!("wrote: {p}"));
            }
        }
        if let Some(rows) = &self.basis {
            for row in rows {
                line(format!("basis: {row}"));
            }
        }
        if let Some(norms) = &self.norms {
            line(format!("norms: {}", norms.join(" ")));
        }
        if let Some(perm) = &self.permutation {
            let rendered: Vec<String> = perm.iter().map(|i| i.to_string()).collect();
            line(format!("permutation: {}", rendered.join(" ")));
        }
        if let Some(v) = &self.solution {
            line(format!("solution: {v}"));
        }
        if let Some(v) = &self.coefficients {
            line(format!("coefficients: {v}"));
        }
        if let Some(d) = &self.distance {
            line(format!("distance: {d}"));
        }
        if let Some(n) = &self.norm {
            line(format!("norm: {n}"));
        }
        if let Some(seq) = &self.lambda {
            line(format!("lambda~: {}", seq.join(" ")));
        }
        if let Some(mu) = &self.mu {
            line(format!("mu: {mu}"));
        }
        if let Some(seq) = &self.ladder {
            line(format!("ladder: {}", seq.join(" ")));
        }
        if let Some(checks) = &self.checks {
            for c in checks {
                match &c.reason {
                    Some(r) => line(format!("check {}: {} ({r})", c.name, c.status)),
                    None => line(format!("check {}: {}", c.name, c.status)),
                }
            }
            let all_pass = checks.iter().all(|c| c.status == "PASS");
            line(format!(
                "result: {}",
                if all_pass { "PASS" } else { "FAIL" }
            ));
        }
        if let Some(v) = &self.verify {
            line(format!("verify: {v}"));
        }
        out
    }
}

/// Bracketed, comma-separated canonical rationals: `[1, 0, 3/2]`.
pub fn bracketed(v: &Vector) -> String {
    format!("[{}]", format_vector_strings(v).join(", "))
}
