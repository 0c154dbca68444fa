//! Deterministic command reports: command echo, verdict, per-law lines and
//! counterexamples on stdout; timing goes to stderr so reruns are
//! byte-identical.

use kam_core::LawReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Error, _) | (_, Verdict::Error) => Verdict::Error,
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            _ => Verdict::Pass,
        }
    }
}

pub struct Report {
    pub command: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            command: command.into(),
            seed,
            verdict: Verdict::Pass,
            lines: Vec::new(),
        }
    }

    pub fn info(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.verdict = self.verdict.combine(Verdict::Fail);
        self.lines.push(message.into());
    }

    pub fn push_law_report(&mut self, report: &LawReport) {
        for check in &report.checks {
            if check.pass {
                self.lines
                    .push(format!("check {}[{}]: pass", report.subject, check.law));
            } else {
                self.verdict = self.verdict.combine(Verdict::Fail);
                self.lines
                    .push(format!("check {}[{}]: fail", report.subject, check.law));
                if let Some(witness) = &check.counterexample {
                    let tuple: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
                    let detail = check.detail.clone().unwrap_or_default();
                    self.lines.push(format!(
                        "counterexample {}[{}]: ({}) {}",
                        report.subject,
                        check.law,
                        tuple.join(", "),
                        detail
                    ));
                }
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!(
            "verdict: {}\n",
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Error => "error",
            }
        ));
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}
