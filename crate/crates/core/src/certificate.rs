//! Verification reports: each claim states how it was checked.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    /// Polynomial identity checked in exact arithmetic.
    Exact,
    /// Residual compared against a bound.
    Numeric { bound: f64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::Numeric { bound } => write!(f, "numeric({bound:e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub statement: String,
    pub method: Method,
    pub verdict: bool,
    /// Observed residual for numeric claims.
    pub residual: Option<f64>,
}

impl Claim {
    pub fn exact(statement: impl Into<String>, verdict: bool) -> Self {
        Claim {
            statement: statement.into(),
            method: Method::Exact,
            verdict,
            residual: None,
        }
    }

    pub fn numeric(statement: impl Into<String>, residual: f64, bound: f64) -> Self {
        Claim {
            statement: statement.into(),
            method: Method::Numeric { bound },
            verdict: residual.is_finite() && residual < bound,
            residual: Some(residual),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method == Method::Exact
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.verdict { "ok" } else { "FAIL" };
        write!(f, "[{mark}] {} ({})", self.statement, self.method)?;
        if let Some(r) = self.residual {
            write!(f, " residual {r:e}")?;
        }
        Ok(())
    }
}

/// A named list of claims; accepted when all hold.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate {
    pub subject: String,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(subject: impl Into<String>) -> Self {
        Certificate {
            subject: subject.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn verdict(&self) -> bool {
        !self.claims.is_empty() && self.claims.iter().all(|c| c.verdict)
    }
}
