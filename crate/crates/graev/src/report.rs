//! Check reports: one line per verified statement.
//!
//! Every verifier in the crate aggregates its findings into a [`Report`].
//! The rendered form is one line per check,
//! `CHECK <name> <instance> PASS|FAIL [witness]`, and a report as a whole
//! passes iff every check does.

use std::fmt;

/// Outcome of a single verified statement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub instance: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, instance: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            instance: instance.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        instance: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            instance: instance.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    pub fn of(
        name: impl Into<String>,
        instance: impl Into<String>,
        pass: bool,
        witness: Option<String>,
    ) -> Self {
        Check {
            name: name.into(),
            instance: instance.into(),
            pass,
            witness,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {}",
            self.name,
            self.instance,
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        if let Some(witness) = &self.witness {
            write!(f, " {witness}")?;
        }
        Ok(())
    }
}

/// An ordered collection of checks.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}
