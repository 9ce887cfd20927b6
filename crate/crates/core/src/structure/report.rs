//! Axiom reports with reproducible failure witnesses.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exactmath::Scalar;
use crate::exterior::{FormTerm, Multivector};
use crate::section::Section;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One exact value quoted in a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessValue {
    Section(Vec<String>),
    Scalar(String),
    VectorField(Vec<String>),
    Form(Vec<FormTerm>),
    Note(String),
}

impl WitnessValue {
    pub fn vector_field(v: &[Scalar]) -> Self {
        WitnessValue::VectorField(v.iter().map(Scalar::to_string).collect())
    }

    pub fn note(s: impl Into<String>) -> Self {
        WitnessValue::Note(s.into())
    }
}

impl From<&Section> for WitnessValue {
    fn from(s: &Section) -> Self {
        WitnessValue::Section(s.to_strings())
    }
}

impl From<&Scalar> for WitnessValue {
    fn from(s: &Scalar) -> Self {
        WitnessValue::Scalar(s.to_string())
    }
}

impl From<&Multivector> for WitnessValue {
    fn from(m: &Multivector) -> Self {
        WitnessValue::Form(m.to_literal())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<WitnessValue>,
    pub defect: WitnessValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub status: Status,
    /// Number of input tuples evaluated.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub checks: Vec<AxiomCheck>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: AxiomCheck) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.axiom.as_str())
            .collect()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "  {:<18} {status} ({} cases)", c.axiom, c.cases);
            if let Some(w) = &c.witness {
                let _ = writeln!(
                    out,
                    "    inputs: {}",
                    serde_json::to_string(&w.inputs).unwrap_or_default()
                );
                let _ = writeln!(
                    out,
                    "    defect: {}",
                    serde_json::to_string(&w.defect).unwrap_or_default()
                );
            }
        }
        out
    }
}

/// Accumulates one axiom's cases, keeping the first failure.
pub struct AxiomRun {
    axiom: String,
    cases: usize,
    witness: Option<Witness>,
}

impl AxiomRun {
    pub fn new(axiom: impl Into<String>) -> Self {
        AxiomRun {
            axiom: axiom.into(),
            cases: 0,
            witness: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.witness.is_some()
    }

    /// Record one case; `defect` is `None` when it vanished.
    pub fn case(&mut self, inputs: impl FnOnce() -> Vec<WitnessValue>, defect: Option<WitnessValue>) {
        self.cases += 1;
        if let (None, Some(defect)) = (&self.witness, defect) {
            self.witness = Some(Witness {
                inputs: inputs(),
                defect,
            });
        }
    }

    pub fn section_case(&mut self, inputs: &[&Section], defect: Section) {
        let d = (!defect.is_zero()).then(|| WitnessValue::from(&defect));
        self.case(|| inputs.iter().map(|s| WitnessValue::from(*s)).collect(), d);
    }

    pub fn scalar_case(&mut self, inputs: impl FnOnce() -> Vec<WitnessValue>, defect: Scalar) {
        let d = (!defect.is_zero()).then(|| WitnessValue::from(&defect));
        self.case(inputs, d);
    }

    pub fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            status: if self.witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            cases: self.cases,
            witness: self.witness,
        }
    }
}
