//! Line-oriented report assembled in memory and printed once.

use std::fmt::Display;
use std::time::Instant;

pub struct Report {
    lines: Vec<String>,
    status: Option<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self {
            lines: Vec::new(),
            status: None,
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key} {value}"));
    }

    pub fn line(&mut self, line: String) {
        self.lines.push(line);
    }

    /// The only nondeterministic line of a report.
    pub fn time(&mut self, start: Instant) {
        self.kv("time_ms", format!("{:.3}", start.elapsed().as_secs_f64() * 1e3));
    }

    pub fn set_status(&mut self, verdict: &str, method: &str) {
        self.status = Some((verdict.to_string(), method.to_string()));
    }

    pub fn finish(self, property: &str) {
        let (verdict, method) = self.status.clone().expect("successful commands set a status");
        self.print(property, &verdict, &method);
    }

    pub fn fail(self, property: &str) {
        self.print(property, "ERROR", "-");
    }

    fn print(&self, property: &str, verdict: &str, method: &str) {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("STATUS {property} {verdict} {method}\n"));
        print!("{out}");
    }
}
