use std::fmt;

/// One failed law, with the tuple that witnesses the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witness: String,
}

/// Ordered list of law violations. Empty means every checked law holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: &'static str, witness: impl Into<String>) {
        self.violations.push(Violation {
            law,
            witness: witness.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, law: &str) -> usize {
        self.violations.iter().filter(|v| v.law == law).count()
    }

    pub fn has(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}: {}", v.law, v.witness)?;
        }
        Ok(())
    }
}
