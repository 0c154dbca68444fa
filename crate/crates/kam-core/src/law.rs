use std::fmt;

/// Outcome of checking one law over a whole structure.
#[derive(Debug, Clone)]
pub struct LawCheck {
    /// Stable identifier, e.g. `star_unroll_left`.
    pub law: String,
    /// Human-readable statement of the law.
    pub statement: String,
    pub pass: bool,
    /// First counterexample found, as element indices in quantifier order.
    pub counterexample: Option<Vec<usize>>,
    /// Rendered form of the counterexample.
    pub detail: Option<String>,
    /// Number of instances enumerated.
    pub checked: u64,
}

impl LawCheck {
    pub fn pass(law: &str, statement: &str, checked: u64) -> Self {
        LawCheck {
            law: law.to_string(),
            statement: statement.to_string(),
            pass: true,
            counterexample: None,
            detail: None,
            checked,
        }
    }

    pub fn fail(law: &str, statement: &str, checked: u64, witness: Vec<usize>, detail: String) -> Self {
        LawCheck {
            law: law.to_string(),
            statement: statement.to_string(),
            pass: false,
            counterexample: Some(witness),
            detail: Some(detail),
            checked,
        }
    }
}

/// A bundle of law checks for one structure.
#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub subject: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: LawCheck) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.subject,
            if self.passed() { "pass" } else { "fail" }
        )?;
        for c in &self.checks {
            write!(f, "  {}: {}", c.law, if c.pass { "pass" } else { "fail" })?;
            if let Some(d) = &c.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
