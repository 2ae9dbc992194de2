use crate::poly::{fmt_rational, Poly};
use crate::ratfn::RatFn;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Computed equals expected verbatim.
    Exact,
    /// Computed equals `constant * expected` for the recorded nonzero constant.
    UpToConstant,
    Mismatch,
    /// Reported for the record; not a pass/fail check.
    Info,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Mismatch
    }
}

/// How a computed polynomial is compared with the expected one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compare {
    /// A coefficient or value: constants matter, a nonzero multiple is flagged.
    Value,
    /// An equation `expr = 0`: any nonzero multiple states the same relation.
    Relation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
    /// `computed / expected` when it is a constant other than 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn compare(name: &str, expected: &Poly, computed: &Poly, mode: Compare) -> Check {
        let (verdict, constant) = match computed.ratio_to(expected) {
            Some(l) if l.is_one() => (Verdict::Exact, None),
            Some(l) => {
                let v = if mode == Compare::Relation { Verdict::Exact } else { Verdict::UpToConstant };
                (v, Some(fmt_rational(&l)))
            }
            None if expected.is_zero() && computed.is_zero() => (Verdict::Exact, None),
            None => (Verdict::Mismatch, None),
        };
        Check {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            verdict,
            constant,
            note: None,
        }
    }

    pub fn info(name: &str, expected: &str, computed: &Poly, note: &str) -> Check {
        Check {
            name: name.into(),
            expected: expected.into(),
            computed: computed.to_string(),
            verdict: Verdict::Info,
            constant: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let c = self.constant.as_ref()?;
        match c.split_once('/') {
            Some((n, d)) => Some(BigRational::new(n.parse().ok()?, d.parse().ok()?)),
            None => Some(BigRational::from_integer(c.parse().ok()?)),
        }
    }

    pub fn line(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Exact => "OK".to_string(),
            Verdict::UpToConstant => format!("OK up to constant {}", self.constant.as_deref().unwrap_or("?")),
            Verdict::Mismatch => "MISMATCH".to_string(),
            Verdict::Info => "INFO".to_string(),
        };
        let mut s = format!("{} = {} | computed {} | {}", self.name, self.expected, self.computed, verdict);
        if let (Verdict::Exact, Some(c)) = (self.verdict, &self.constant) {
            let _ = write!(s, " (relation scaled by {c})");
        }
        if let Some(n) = &self.note {
            let _ = write!(s, " [{n}]");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn transcript(&self) -> String {
        let mut s = format!("# {}\n", self.title);
        for c in &self.checks {
            s.push_str(&c.line());
            s.push('\n');
        }
        s
    }
}

impl Check {
    /// Equality of rational functions by cross-multiplication.
    pub fn compare_ratfn(name: &str, expected: &RatFn, computed: &RatFn) -> Check {
        Check {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            verdict: if expected == computed { Verdict::Exact } else { Verdict::Mismatch },
            constant: None,
            note: None,
        }
    }
}
