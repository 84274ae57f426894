//! Job descriptions: the JSON schema accepted on the command line.
//!
//! All node indices are 1-based in configuration files (matching how
//! Dynkin diagrams are usually drawn) and converted to the library's
//! 0-based indexing during elaboration.  Parameter values and free
//! choices are expression strings over `q`.

use std::collections::BTreeMap;

use serde::Deserialize;

/// Root datum selector: a named finite type (`"A3"`, `"B2"`, ...) or an
/// explicit generalized Cartan matrix.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Name(String),
    Matrix(Vec<Vec<i64>>),
}

impl CartanSpec {
    /// Label used in reports.
    pub fn label(&self) -> String {
        match self {
            CartanSpec::Name(name) => name.clone(),
            CartanSpec::Matrix(rows) => format!("matrix {rows:?}"),
        }
    }
}

/// Free choices completed to a bar-admissible family (one entry per
/// `tau`-orbit outside `X`; omitted orbits take the documented defaults).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarAdmissibleConfig {
    #[serde(default)]
    pub free_choices: BTreeMap<usize, String>,
}

/// One job: diagram, parameter mode, cutoff, and optional flags (the
/// command line can override each flag).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub cartan: CartanSpec,
    /// Symmetrizer diagonal; only accepted with an explicit matrix.
    #[serde(default)]
    pub d: Option<Vec<i64>>,
    /// Subdiagram nodes, 1-based.
    #[serde(default, rename = "X")]
    pub x: Vec<usize>,
    /// Diagram involution as 1-based swapped pairs; unlisted nodes stay
    /// fixed.
    #[serde(default)]
    pub tau: Vec<[usize; 2]>,
    /// Explicit parameter family (mutually exclusive with
    /// `bar_admissible`).
    #[serde(default)]
    pub c: Option<BTreeMap<usize, String>>,
    /// Derive the family from free choices instead.
    #[serde(default)]
    pub bar_admissible: Option<BarAdmissibleConfig>,
    /// Weight-height cutoff `N >= 1`.
    pub cutoff: usize,
    #[serde(default)]
    pub verify_support: bool,
    /// Cross-derivation diagnostic (defaults to on, up to height 6).
    #[serde(default)]
    pub check_compat: Option<bool>,
    #[serde(default)]
    pub emit_basis: bool,
    #[serde(default)]
    pub emit_inverse: bool,
}

impl JobConfig {
    /// The involution as a full image vector, 0-based.
    ///
    /// # Errors
    /// A message naming the offending pair when an index is out of range
    /// or two pairs overlap.
    pub fn tau_images(&self, rank: usize) -> Result<Vec<usize>, String> {
        let mut images: Vec<usize> = (0..rank).collect();
        let mut seen = vec![false; rank];
        for &[a, b] in &self.tau {
            for idx in [a, b] {
                if idx == 0 || idx > rank {
                    return Err(format!(
                        "tau pair [{a}, {b}]: index {idx} outside 1..={rank}"
                    ));
                }
            }
            let (a0, b0) = (a - 1, b - 1);
            if seen[a0] || seen[b0] || (a0 == b0 && seen[a0]) {
                return Err(format!("tau pair [{a}, {b}] overlaps an earlier pair"));
            }
            seen[a0] = true;
            seen[b0] = true;
            images[a0] = b0;
            images[b0] = a0;
        }
        Ok(images)
    }

    /// The subdiagram nodes, 0-based.
    ///
    /// # Errors
    /// A message naming the offending index.
    pub fn x_nodes(&self, rank: usize) -> Result<Vec<usize>, String> {
        self.x
            .iter()
            .map(|&i| {
                if i == 0 || i > rank {
                    Err(format!("X contains {i}, outside 1..={rank}"))
                } else {
                    Ok(i - 1)
                }
            })
            .collect()
    }
}
