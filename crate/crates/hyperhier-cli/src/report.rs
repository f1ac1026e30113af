//! Versioned JSON reports.

use hyperhier_core::poly::Poly;
use hyperhier_core::{BigRational, Mode, Point, Scalar};
use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub index: usize,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    /// Quantities that must vanish.
    pub residuals: BTreeMap<String, Vec<String>>,
    /// Informational quantities.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Vec<String>>,
    #[serde(skip)]
    max_abs: f64,
    #[serde(skip)]
    exact_zero: bool,
}

impl Record {
    pub fn new(index: usize, label: impl Into<String>) -> Record {
        Record {
            index,
            label: label.into(),
            point: None,
            residuals: BTreeMap::new(),
            values: BTreeMap::new(),
            max_abs: 0.0,
            exact_zero: true,
        }
    }

    pub fn at(index: usize, p: &Point<BigRational>) -> Record {
        let mut r = Record::new(index, format!("point {index}"));
        r.point = Some(p.coords.iter().map(Scalar::to_text).collect());
        r
    }

    pub fn residual<S: Scalar>(&mut self, name: impl Into<String>, vals: &[S]) -> &mut Self {
        for v in vals {
            self.max_abs = self.max_abs.max(v.abs_f64());
            self.exact_zero &= v.vanishes();
        }
        self.residuals
            .insert(name.into(), vals.iter().map(Scalar::to_text).collect());
        self
    }

    /// Polynomial residuals vanish when they have no terms.
    pub fn residual_polys(
        &mut self,
        name: impl Into<String>,
        vals: &[Poly],
        names: &[&str],
    ) -> &mut Self {
        for v in vals {
            for (_, c) in v.terms() {
                self.max_abs = self.max_abs.max(c.abs_f64());
            }
            self.exact_zero &= v.is_empty();
        }
        self.residuals
            .insert(name.into(), vals.iter().map(|v| v.print(names)).collect());
        self
    }

    pub fn value(&mut self, name: impl Into<String>, vals: Vec<String>) -> &mut Self {
        self.values.insert(name.into(), vals);
        self
    }

    pub fn passes(&self, mode: Mode, tol: f64) -> bool {
        match mode {
            Mode::Exact => self.exact_zero,
            Mode::Float => self.max_abs < tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub op: String,
    pub inputs: BTreeMap<String, String>,
    pub records: Vec<Record>,
    /// Conditions other than vanishing, such as a witness being nonzero.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, bool>,
    pub max_abs_residual: f64,
    pub exact_zero: bool,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(op: &str, inputs: BTreeMap<String, String>) -> Report {
        Report {
            schema: SCHEMA,
            op: op.to_string(),
            inputs,
            records: Vec::new(),
            checks: BTreeMap::new(),
            max_abs_residual: 0.0,
            exact_zero: true,
            verdict: Verdict::Pass,
        }
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    /// Sorts records by index and settles the verdict.
    pub fn finish(mut self, mode: Mode, tol: f64) -> Report {
        self.records.sort_by_key(|r| r.index);
        self.max_abs_residual = self.records.iter().fold(0.0, |m, r| m.max(r.max_abs));
        self.exact_zero = self.records.iter().all(|r| r.exact_zero);
        let ok =
            self.records.iter().all(|r| r.passes(mode, tol)) && self.checks.values().all(|&c| c);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperhier_core::scalar::{int, rat};

    #[test]
    fn verdict_follows_mode() {
        let mut r = Record::new(0, "a");
        r.residual("x", &[int(0), rat(1, 1_000_000_000_000)]);
        let rep = Report::new("t", BTreeMap::new());
        let mut exact = rep.clone();
        exact.records.push(r.clone());
        assert_eq!(exact.finish(Mode::Exact, 1e-9).verdict, Verdict::Fail);
        let mut float = rep;
        float.records.push(r);
        let float = float.finish(Mode::Float, 1e-9);
        assert_eq!(float.verdict, Verdict::Pass);
        assert!(!float.exact_zero);
    }

    #[test]
    fn rationals_serialise_as_strings() {
        let mut r = Record::new(0, "a");
        r.residual("x", &[rat(-3, 4)]);
        let mut rep = Report::new("t", BTreeMap::new());
        rep.records.push(r);
        let j = rep.finish(Mode::Exact, 0.0).to_json();
        assert!(j.contains("\"-3/4\""));
        assert!(j.contains("\"schema\": 1"));
    }

    #[test]
    fn failed_check_fails_report() {
        let mut rep = Report::new("t", BTreeMap::new());
        rep.check("witness", false);
        assert_eq!(rep.finish(Mode::Exact, 0.0).verdict, Verdict::Fail);
    }
}
