//! Serializable run reports.
//!
//! Everything a run produces — the diagram summary, the parameter family,
//! the computed table, and the verification outcomes — is captured in a
//! [`JobReport`] that serializes deterministically (sorted weights, sorted
//! words) and round-trips: coefficients are emitted as canonical
//! expression strings that re-parse to equal field elements.
//!
//! Node indices and word letters are 1-based in reports; the in-memory
//! types are 0-based throughout.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::quasik::{BarStatus, CheckRecord, QuasiK};
use crate::root::Weight;
use crate::scalar::RatFuncQ;
use crate::uplus::{FreeWord, UPlusElt};

/// One `coefficient * word` term; letters are 1-based node indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub word: Vec<usize>,
    pub coeff: RatFuncQ,
}

/// One homogeneous component, terms ascending by word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub weight: Vec<i64>,
    pub terms: Vec<TermEntry>,
}

impl ComponentEntry {
    pub fn new(mu: &Weight, elt: &UPlusElt) -> Self {
        ComponentEntry {
            weight: mu.0.clone(),
            terms: elt
                .terms()
                .map(|(w, c)| TermEntry {
                    word: w.letters().map(|l| l + 1).collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the in-memory element this entry came from.
    pub fn element(&self) -> UPlusElt {
        UPlusElt::from_terms(self.terms.iter().map(|t| {
            let letters: Vec<usize> = t.word.iter().map(|&l| l - 1).collect();
            (FreeWord::from_letters(&letters), t.coeff.clone())
        }))
    }
}

/// The nonzero components of a table, ascending by weight.
pub fn component_entries(table: &BTreeMap<Weight, UPlusElt>) -> Vec<ComponentEntry> {
    table
        .iter()
        .filter(|(_, elt)| !elt.is_zero())
        .map(|(mu, elt)| ComponentEntry::new(mu, elt))
        .collect()
}

/// Weight-space dimension at one solved weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub weight: Vec<i64>,
    pub dim: usize,
}

/// The complement-basis words at one solved weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub weight: Vec<i64>,
    pub words: Vec<Vec<usize>>,
}

/// Bar-involution status of the run's parameter family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BarReport {
    /// The family is bar-admissible; the intertwining certificate closes
    /// into an involution on the coideal subalgebra.
    Involution,
    /// Not bar-admissible: the certificate is an isomorphism onto the
    /// coideal subalgebra of the companion family.
    Isomorphism {
        companion: BTreeMap<usize, RatFuncQ>,
    },
}

/// The full machine-readable result of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobReport {
    /// Root-datum label (a named type or a rendered Cartan matrix).
    pub cartan: String,
    pub rank: usize,
    /// Subdiagram nodes, 1-based ascending.
    pub x: Vec<usize>,
    /// Involution images: `tau[i]` is the 1-based image of node `i + 1`.
    pub tau: Vec<usize>,
    pub cutoff: usize,
    /// Heights within this margin of the cutoff are excluded from the
    /// truncated identity checks.
    pub margin: usize,
    /// Whether the diagram also satisfies the classical integrality
    /// condition (informational).
    pub classical: bool,
    /// `sign_i` for nodes outside `X`, 1-based keys.
    pub signs: BTreeMap<usize, i64>,
    /// `exp_i` for nodes outside `X`, 1-based keys.
    pub exponents: BTreeMap<usize, i64>,
    /// The parameter family, 1-based keys.
    pub parameters: BTreeMap<usize, RatFuncQ>,
    pub bar: BarReport,
    /// Weights with nonzero components, ascending.
    pub support: Vec<Vec<i64>>,
    pub dims: Vec<DimEntry>,
    /// Nonzero components in free-word coordinates.
    pub table: Vec<ComponentEntry>,
    /// Verification outcomes, in the order they ran.
    pub checks: Vec<CheckRecord>,
    /// Weights where the cross-derivation diagnostic failed (empty for
    /// valid input).
    pub compat_failures: Vec<Vec<i64>>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<BasisEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<ComponentEntry>>,
}

impl JobReport {
    /// Assembles a report from a computed table and its verification
    /// outcomes.
    pub fn build(
        cartan: impl Into<String>,
        qk: &QuasiK,
        checks: Vec<CheckRecord>,
        elapsed: Duration,
    ) -> JobReport {
        let diagram = qk.diagram();
        let rank = diagram.rank();
        let outside: Vec<usize> = (0..rank).filter(|&i| !diagram.contains_x(i)).collect();
        let bar = match qk.bar_status() {
            BarStatus::Involution => BarReport::Involution,
            BarStatus::Isomorphism { companion } => BarReport::Isomorphism {
                companion: companion
                    .entries()
                    .map(|(i, c)| (i + 1, c.clone()))
                    .collect(),
            },
        };
        JobReport {
            cartan: cartan.into(),
            rank,
            x: diagram.x().iter().map(|&i| i + 1).collect(),
            tau: (0..rank).map(|i| diagram.tau()[i] + 1).collect(),
            cutoff: qk.cutoff(),
            margin: qk.margin(),
            classical: diagram.is_classical(),
            signs: outside.iter().map(|&i| (i + 1, diagram.sign(i))).collect(),
            exponents: outside.iter().map(|&i| (i + 1, diagram.exp(i))).collect(),
            parameters: qk
                .params()
                .entries()
                .map(|(i, c)| (i + 1, c.clone()))
                .collect(),
            bar,
            support: qk.support().iter().map(|mu| mu.0.clone()).collect(),
            dims: qk
                .dims()
                .iter()
                .map(|(mu, &dim)| DimEntry {
                    weight: mu.0.clone(),
                    dim,
                })
                .collect(),
            table: component_entries(qk.table()),
            checks,
            compat_failures: qk.compat_failures().iter().map(|mu| mu.0.clone()).collect(),
            elapsed_ms: elapsed.as_millis(),
            basis: None,
            inverse: None,
        }
    }

    /// Attaches the complement bases of all solved weights.
    pub fn with_basis(mut self, qk: &QuasiK) -> JobReport {
        let entries = qk
            .dims()
            .keys()
            .map(|mu| BasisEntry {
                weight: mu.0.clone(),
                words: qk
                    .bases()
                    .basis(mu)
                    .complement_words()
                    .map(|w| w.letters().map(|l| l + 1).collect())
                    .collect(),
            })
            .collect();
        self.basis = Some(entries);
        self
    }

    /// Attaches an inverse table.
    pub fn with_inverse(mut self, inverse: &BTreeMap<Weight, UPlusElt>) -> JobReport {
        self.inverse = Some(component_entries(inverse));
        self
    }

    /// Whether every verification outcome passed and no compatibility
    /// diagnostic failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.compat_failures.is_empty()
    }

    /// Human-readable run summary, one fact per line.
    pub fn summary(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let set = |v: &[usize]| {
            if v.is_empty() {
                "{}".to_string()
            } else {
                format!(
                    "{{{}}}",
                    v.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            }
        };
        let _ = writeln!(
            out,
            "diagram: {} (rank {}), X = {}, tau = [{}]",
            self.cartan,
            self.rank,
            set(&self.x),
            self.tau
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        let _ = writeln!(
            out,
            "cutoff: {} (verification margin {})",
            self.cutoff, self.margin
        );
        for (i, c) in &self.parameters {
            let _ = writeln!(
                out,
                "c_{i} = {c}   (sign {:+}, exponent {})",
                self.signs[i], self.exponents[i]
            );
        }
        match &self.bar {
            BarReport::Involution => {
                let _ = writeln!(out, "bar involution exists (the family is bar-admissible)");
            }
            BarReport::Isomorphism { companion } => {
                let companion = companion
                    .iter()
                    .map(|(i, c)| format!("c_{i} = {c}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    out,
                    "bar involution absent; certified isomorphism onto the companion family {companion}"
                );
            }
        }
        let support = self
            .support
            .iter()
            .map(|w| {
                format!(
                    "({})",
                    w.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "support: {support}");
        for check in &self.checks {
            let _ = writeln!(
                out,
                "{}: {}",
                if check.passed { "pass" } else { "FAIL" },
                check.label
            );
        }
        if !self.compat_failures.is_empty() {
            let _ = writeln!(
                out,
                "FAIL: cross-derivation diagnostic at {} weight(s)",
                self.compat_failures.len()
            );
        }
        let _ = writeln!(out, "elapsed: {} ms", self.elapsed_ms);
        out
    }
}
