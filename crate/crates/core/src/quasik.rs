//! Degree-by-degree construction of the invariant element and the
//! verification suite for its defining identities.
//!
//! For a validated diagram and parameter family, the element
//! `X = sum_mu X_mu` (with `X_0 = 1`) is characterized by a pair of
//! skew-derivation recursions: for every node `i`,
//!
//! ```text
//! r_i(X_mu)  = (q_i - q_i^-1) sign_i q^(-exp_i) c_(tau(i))
//!                X_(mu + Theta(a_i) - a_i) bar(T_(w_X)(E_(tau(i))))
//! ir_i(X_mu) = (q_i - q_i^-1) q^(-(Theta(a_i), a_i)) c_i
//!                T_(w_X)(E_(tau(i))) X_(mu + Theta(a_i) - a_i)
//! ```
//!
//! Both right-hand sides live strictly below `mu`, so the components are
//! solved height by height as exact linear systems over the complement
//! bases of the weight spaces.  Each solution is unique; a failure of
//! existence or uniqueness signals corrupted input and is reported as an
//! error rather than silently absorbed.
//!
//! The verification layer recomputes, in truncated full-algebra
//! arithmetic, the intertwining identity for the coideal generators, the
//! commutation with the subdiagram algebra and the `Theta`-fixed torus,
//! and the bar-involution status of the parameter family.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{solve_unique, LinSolveError};
use crate::root::Weight;
use crate::satake::{ParameterFamily, SatakeDiagram};
use crate::scalar::RatFuncQ;
use crate::ufull::UElt;
use crate::uplus::{ComplementOrder, UPlusElt, WeightBases};

/// Failures while solving for a component.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuasiKError {
    /// The stacked derivation system at this weight is inconsistent.
    #[error("no solution for the component at weight {weight}")]
    NoSolution { weight: Weight },
    /// The stacked derivation system at this weight is underdetermined.
    #[error("the component at weight {weight} is not uniquely determined")]
    NonUniqueSolution { weight: Weight },
}

/// Construction options.
#[derive(Debug, Clone)]
pub struct QuasiKOptions {
    /// Heights `1..=cutoff` are computed.
    pub cutoff: usize,
    /// Skip weights with `Theta(mu) != -mu` (their components vanish);
    /// disable to solve them anyway and certify the vanishing.
    pub skip_antifixed: bool,
    /// Cross-check `r_i` of the left recursion against `ir_j` of the
    /// right one for weights up to this height (`0` disables).
    pub compat_height: usize,
    /// Complement-basis selection passed to the weight-space cache.
    pub order: ComplementOrder,
}

impl QuasiKOptions {
    pub fn new(cutoff: usize) -> Self {
        QuasiKOptions {
            cutoff,
            skip_antifixed: true,
            compat_height: 6,
            order: ComplementOrder::Lex,
        }
    }
}

/// One verification outcome, suitable for direct serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    /// What was checked, e.g. `intertwining i=1 (heights <= 4)`.
    pub label: String,
    pub passed: bool,
}

impl CheckRecord {
    pub fn new(label: impl Into<String>, passed: bool) -> Self {
        CheckRecord {
            label: label.into(),
            passed,
        }
    }
}

/// Bar-involution status of the parameter family.
#[derive(Debug, Clone)]
pub enum BarStatus {
    /// The family equals its companion: the intertwining certificate
    /// exhibits a bar involution on the coideal subalgebra itself.
    Involution,
    /// Otherwise the certificate exhibits an isomorphism onto the coideal
    /// subalgebra for the companion family.
    Isomorphism { companion: ParameterFamily },
}

/// The computed invariant element up to the height cutoff, together with
/// everything needed to re-derive and certify it.
pub struct QuasiK {
    diagram: Arc<SatakeDiagram>,
    params: ParameterFamily,
    options: QuasiKOptions,
    bases: WeightBases,
    table: BTreeMap<Weight, UPlusElt>,
    dims: BTreeMap<Weight, usize>,
    compat_failures: Vec<Weight>,
}

impl QuasiK {
    /// Solves all components of height `1..=cutoff`.
    ///
    /// # Errors
    /// [`QuasiKError`] from the first weight whose linear system fails;
    /// for a validated diagram and family this indicates corrupted input.
    pub fn compute(
        diagram: Arc<SatakeDiagram>,
        params: ParameterFamily,
        options: QuasiKOptions,
    ) -> Result<QuasiK, QuasiKError> {
        assert!(options.cutoff >= 1, "cutoff must be positive");
        let bases = WeightBases::new(diagram.datum().clone(), options.order);
        let mut qk = QuasiK {
            diagram,
            params,
            options,
            bases,
            table: BTreeMap::new(),
            dims: BTreeMap::new(),
            compat_failures: Vec::new(),
        };
        let rank = qk.diagram.rank();
        qk.table.insert(Weight::zero(rank), UPlusElt::one());
        for height in 1..=qk.options.cutoff {
            let mut weights = Vec::new();
            compositions(rank, height as i64, &mut vec![0; rank], 0, &mut weights);
            // Components of one height only read strictly lower heights,
            // so they solve independently.
            let solved: Vec<(Weight, Result<Option<Solved>, QuasiKError>)> = weights
                .into_par_iter()
                .map(|mu| {
                    let res = qk.solve_component(&mu);
                    (mu, res)
                })
                .collect();
            for (mu, res) in solved {
                match res? {
                    None => {
                        qk.table.insert(mu, UPlusElt::zero());
                    }
                    Some(s) => {
                        qk.dims.insert(mu.clone(), s.dim);
                        if !s.compat_ok {
                            qk.compat_failures.push(mu.clone());
                        }
                        qk.table.insert(mu, s.component);
                    }
                }
            }
        }
        Ok(qk)
    }

    /// The right-hand sides of the two recursions at `(i, mu)`, as raw
    /// free-word products (project against the bases to compare).
    /// Both vanish for `i` in `X`.
    pub fn build_rhs(&self, i: usize, mu: &Weight) -> (UPlusElt, UPlusElt) {
        if self.diagram.contains_x(i) {
            return (UPlusElt::zero(), UPlusElt::zero());
        }
        let datum = self.diagram.datum();
        let rank = datum.rank();
        let alpha_i = Weight::simple(rank, i);
        let nu = mu.add(self.diagram.theta_simple(i)).sub(&alpha_i);
        if !nu.is_nonnegative() {
            return (UPlusElt::zero(), UPlusElt::zero());
        }
        let lower = match self.table.get(&nu) {
            Some(x) => x,
            None => return (UPlusElt::zero(), UPlusElt::zero()),
        };
        if lower.is_zero() {
            return (UPlusElt::zero(), UPlusElt::zero());
        }
        let di = datum.symmetrizer(i);
        let bracket = &RatFuncQ::q_pow(di) - &RatFuncQ::q_pow(-di);
        let twist = self.diagram.twist(&self.bases, i);
        let tau_i = self.diagram.tau()[i];
        let mut right_coef =
            &(&bracket * &RatFuncQ::q_pow(-self.diagram.exp(i))) * &self.params.c(tau_i);
        if self.diagram.sign(i) < 0 {
            right_coef = -right_coef;
        }
        let a_i = lower.mul(&twist.bar()).scale(&right_coef);
        let theta_pairing = datum.bilinear(self.diagram.theta_simple(i), &alpha_i);
        let left_coef = &(&bracket * &RatFuncQ::q_pow(-theta_pairing)) * &self.params.c(i);
        let i_a = twist.mul(lower).scale(&left_coef);
        (a_i, i_a)
    }

    fn solve_component(&self, mu: &Weight) -> Result<Option<Solved>, QuasiKError> {
        if self.options.skip_antifixed && !self.diagram.is_antifixed(mu) {
            return Ok(None);
        }
        let rank = self.diagram.rank();
        let basis = self.bases.basis(mu);
        let dim = basis.dim();
        let rhs: Vec<(UPlusElt, UPlusElt)> = (0..rank).map(|i| self.build_rhs(i, mu)).collect();
        let compat_ok = if mu.height() <= self.options.compat_height as i64 {
            self.compat_holds(&rhs)
        } else {
            true
        };
        let mut rows: Vec<Vec<RatFuncQ>> = Vec::new();
        let mut rhs_col: Vec<RatFuncQ> = Vec::new();
        for i in 0..rank {
            if mu.0[i] == 0 {
                continue;
            }
            let mut target = mu.clone();
            target.0[i] -= 1;
            let target_basis = self.bases.basis(&target);
            for (left, elt) in [(false, &rhs[i].0), (true, &rhs[i].1)] {
                rows.extend(self.bases.derivation_matrix(mu, i, left));
                rhs_col.extend(target_basis.complement_coords(elt));
            }
        }
        let coords = solve_unique(rows, rhs_col).map_err(|e| match e {
            LinSolveError::NoSolution => QuasiKError::NoSolution { weight: mu.clone() },
            LinSolveError::NonUnique => QuasiKError::NonUniqueSolution { weight: mu.clone() },
        })?;
        let component = basis.from_complement_coords(&coords);
        Ok(Some(Solved {
            component,
            dim,
            compat_ok,
        }))
    }

    fn compat_holds(&self, rhs: &[(UPlusElt, UPlusElt)]) -> bool {
        let datum = self.diagram.datum();
        let rank = datum.rank();
        for i in 0..rank {
            for j in 0..rank {
                // r_i of the left recursion's value at j must match ir_j
                // of the right recursion's value at i.
                let lhs = rhs[j].1.skew_r(datum, i);
                let rhs_elt = rhs[i].0.skew_ir(datum, j);
                if !self.bases.eq_mod(&lhs, &rhs_elt) {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagram(&self) -> &Arc<SatakeDiagram> {
        &self.diagram
    }

    pub fn params(&self) -> &ParameterFamily {
        &self.params
    }

    pub fn bases(&self) -> &WeightBases {
        &self.bases
    }

    pub fn cutoff(&self) -> usize {
        self.options.cutoff
    }

    /// All stored components (zeros included).
    pub fn table(&self) -> &BTreeMap<Weight, UPlusElt> {
        &self.table
    }

    /// The component at `mu` (zero when outside the computed range).
    pub fn component(&self, mu: &Weight) -> UPlusElt {
        self.table.get(mu).cloned().unwrap_or_else(UPlusElt::zero)
    }

    /// Weights with a nonzero component, ascending.
    pub fn support(&self) -> Vec<Weight> {
        self.table
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(w, _)| w.clone())
            .collect()
    }

    /// Weight-space dimensions recorded for every solved weight.
    pub fn dims(&self) -> &BTreeMap<Weight, usize> {
        &self.dims
    }

    /// Weights where the cross-derivation compatibility check failed
    /// (empty for valid input).
    pub fn compat_failures(&self) -> &[Weight] {
        &self.compat_failures
    }

    /// Exchanges the stored family for another one *without* recomputing
    /// the components.  Exists so a deliberately corrupted verification
    /// run can be demonstrated; never part of a normal pipeline.
    pub fn replace_params(&mut self, params: ParameterFamily) {
        self.params = params;
    }

    /// Truncation safety margin: heights within `M` of the cutoff are
    /// excluded from intertwining comparisons, where `M` is the largest
    /// height of `alpha_i - Theta(alpha_i)` over nodes outside `X`.
    pub fn margin(&self) -> usize {
        let rank = self.diagram.rank();
        (0..rank)
            .filter(|&i| !self.diagram.contains_x(i))
            .map(|i| {
                let drop = Weight::simple(rank, i).sub(self.diagram.theta_simple(i));
                drop.height() as usize
            })
            .max()
            .unwrap_or(0)
    }

    /// The element as a truncated triangular-form sum.
    fn assemble(&self) -> UElt {
        let rank = self.diagram.rank();
        let mut out = UElt::zero(rank);
        for x in self.table.values() {
            out = out.add(&UElt::from_uplus(rank, x));
        }
        out
    }

    /// Certifies `B_i X = X (F_i - sign_i q^(-exp_i) c_(tau(i))
    /// bar(T_(w_X)(E_(tau(i)))) K_i)` for every node, comparing all terms
    /// of height at most `cutoff - margin`.
    pub fn verify_intertwining(&self) -> Vec<CheckRecord> {
        let datum = self.diagram.datum();
        let rank = datum.rank();
        let n = self.options.cutoff;
        let window = n.saturating_sub(self.margin());
        let big_x = self.assemble();
        (0..rank)
            .into_par_iter()
            .map(|i| {
                let b_i = self.diagram.coideal_generator(&self.params, &self.bases, i);
                let lhs = b_i.mul(&big_x, datum, Some(n));
                let mut partner = UElt::f_gen(rank, i);
                if !self.diagram.contains_x(i) {
                    let tau_i = self.diagram.tau()[i];
                    let mut coef = &RatFuncQ::q_pow(-self.diagram.exp(i)) * &self.params.c(tau_i);
                    if self.diagram.sign(i) < 0 {
                        coef = -coef;
                    }
                    let twisted = UElt::from_uplus(rank, &self.diagram.twist(&self.bases, i).bar())
                        .mul(&UElt::k_of_weight(Weight::simple(rank, i)), datum, None)
                        .scale(&coef);
                    partner = partner.sub(&twisted);
                }
                let rhs = big_x.mul(&partner, datum, Some(n));
                let passed = lhs
                    .sub(&rhs)
                    .canonicalize(&self.bases)
                    .retain_e_height(window)
                    .is_zero();
                CheckRecord::new(
                    format!("intertwining i={} (heights <= {window})", i + 1),
                    passed,
                )
            })
            .collect()
    }

    /// Generators whose commutation with the element is certified: the
    /// raising, lowering and torus generators of the subdiagram, plus
    /// `K_beta` for a basis of the `Theta`-fixed sublattice.
    pub fn centralizer_generators(&self) -> Vec<(String, UElt)> {
        let rank = self.diagram.rank();
        let mut gens = Vec::new();
        for &j in self.diagram.x() {
            gens.push((format!("E_{}", j + 1), UElt::e_gen(rank, j)));
            gens.push((format!("F_{}", j + 1), UElt::f_gen(rank, j)));
            gens.push((
                format!("K_{}", j + 1),
                UElt::k_of_weight(Weight::simple(rank, j)),
            ));
            gens.push((
                format!("K_{}^-1", j + 1),
                UElt::k_of_weight(Weight::simple(rank, j).neg()),
            ));
        }
        for beta in self.theta_fixed_basis() {
            gens.push((format!("K{beta}"), UElt::k_of_weight(beta)));
        }
        gens
    }

    /// An integral basis of `{beta : Theta(beta) = beta}`.
    pub fn theta_fixed_basis(&self) -> Vec<Weight> {
        let rank = self.diagram.rank();
        // Kernel of (Theta - id) over the rationals, cleared to integers;
        // the generic exact solver does the row reduction.
        let rows: Vec<Vec<RatFuncQ>> = (0..rank)
            .map(|r| {
                (0..rank)
                    .map(|c| {
                        let mut entry = self.diagram.theta_simple(c).0[r];
                        if r == c {
                            entry -= 1;
                        }
                        RatFuncQ::from_int(entry)
                    })
                    .collect()
            })
            .collect();
        let order: Vec<usize> = (0..rank).collect();
        let (_, kernel) = crate::linalg::kernel_basis(rows, rank, &order);
        kernel
            .into_iter()
            .map(|(_, entries)| {
                // Entries are integer-valued rationals; scale away any
                // denominators to get a primitive lattice vector.
                let mut denom_lcm = 1i64;
                for (_, v) in &entries {
                    let d = v.denominator().as_i64().expect("rational kernel entry");
                    denom_lcm = num_integer::lcm(denom_lcm, d);
                }
                let mut beta = Weight::zero(rank);
                for (col, v) in entries {
                    let scaled = &v * &RatFuncQ::from_int(denom_lcm);
                    beta.0[col] = scaled.numerator().as_i64().expect("integral kernel entry");
                }
                beta
            })
            .collect()
    }

    /// Certifies `x X = X x` for every centralizer generator, comparing
    /// terms of height at most `cutoff - 1`.
    pub fn verify_centralizer(&self) -> Vec<CheckRecord> {
        let datum = self.diagram.datum();
        let n = self.options.cutoff;
        let window = n - 1;
        let big_x = self.assemble();
        self.centralizer_generators()
            .into_par_iter()
            .map(|(name, g)| {
                let diff = g
                    .mul(&big_x, datum, Some(n))
                    .sub(&big_x.mul(&g, datum, Some(n)));
                let passed = diff
                    .canonicalize(&self.bases)
                    .retain_e_height(window)
                    .is_zero();
                CheckRecord::new(format!("centralizer {name} (heights <= {window})"), passed)
            })
            .collect()
    }

    /// Re-derives both recursions from the stored table and certifies
    /// them component by component (the solver imposed them; this check
    /// is independent of the solver's linear algebra).
    pub fn verify_recursion(&self) -> Vec<CheckRecord> {
        let datum = self.diagram.datum();
        let rank = datum.rank();
        let mut all = true;
        for (mu, x) in &self.table {
            if mu.height() == 0 {
                continue;
            }
            for i in 0..rank {
                let (a_i, i_a) = self.build_rhs(i, mu);
                if !self.bases.eq_mod(&x.skew_r(datum, i), &a_i)
                    || !self.bases.eq_mod(&x.skew_ir(datum, i), &i_a)
                {
                    all = false;
                }
            }
        }
        vec![CheckRecord::new(
            format!("recursion identities (heights <= {})", self.options.cutoff),
            all,
        )]
    }

    /// Certifies that every nonzero component sits at an anti-fixed
    /// weight (`Theta(mu) = -mu`); meaningful when computed with
    /// `skip_antifixed` disabled.
    pub fn verify_support(&self) -> Vec<CheckRecord> {
        let passed = self
            .support()
            .iter()
            .all(|mu| self.diagram.is_antifixed(mu));
        vec![CheckRecord::new("support anti-fixed under Theta", passed)]
    }

    /// Bar-involution status of the family: [`BarStatus::Involution`]
    /// when it equals its companion, otherwise the isomorphism
    /// certificate onto the companion's coideal subalgebra.
    pub fn bar_status(&self) -> BarStatus {
        if self.params.is_bar_admissible(&self.diagram) {
            BarStatus::Involution
        } else {
            BarStatus::Isomorphism {
                companion: self.params.companion(&self.diagram),
            }
        }
    }

    /// The inverse element up to the cutoff, via the geometric recursion
    /// `inv_mu = -sum_(0 < nu <= mu) X_nu inv_(mu - nu)`; both products
    /// with the original are asserted to collapse to `1`.
    pub fn invert(&self) -> BTreeMap<Weight, UPlusElt> {
        let rank = self.diagram.rank();
        let mut inv: BTreeMap<Weight, UPlusElt> = BTreeMap::new();
        inv.insert(Weight::zero(rank), UPlusElt::one());
        let mut heights: BTreeMap<i64, Vec<Weight>> = BTreeMap::new();
        for mu in self.table.keys() {
            heights.entry(mu.height()).or_default().push(mu.clone());
        }
        for (&h, weights) in &heights {
            if h == 0 {
                continue;
            }
            for mu in weights {
                let mut acc = UPlusElt::zero();
                for (nu, x_nu) in &self.table {
                    if nu.height() == 0 || x_nu.is_zero() {
                        continue;
                    }
                    let rest = mu.sub(nu);
                    if !rest.is_nonnegative() {
                        continue;
                    }
                    let prev = &inv[&rest];
                    if !prev.is_zero() {
                        acc = acc.add(&x_nu.mul(prev));
                    }
                }
                inv.insert(mu.clone(), self.bases.project(&acc.neg()));
            }
        }
        // Both truncated products must collapse to the identity.
        for mu in self.table.keys() {
            let mut left = UPlusElt::zero();
            let mut right = UPlusElt::zero();
            for (nu, x_nu) in &self.table {
                let rest = mu.sub(nu);
                if !rest.is_nonnegative() || x_nu.is_zero() {
                    continue;
                }
                left = left.add(&x_nu.mul(&inv[&rest]));
                right = right.add(&inv[&rest].mul(x_nu));
            }
            let expected = if mu.height() == 0 {
                UPlusElt::one()
            } else {
                UPlusElt::zero()
            };
            assert!(
                self.bases.eq_mod(&left, &expected) && self.bases.eq_mod(&right, &expected),
                "inverse defect at weight {mu}"
            );
        }
        inv
    }
}

struct Solved {
    component: UPlusElt,
    dim: usize,
    compat_ok: bool,
}

/// All nonnegative integer vectors of the given coordinate sum, appended
/// to `out` in lexicographic order.
fn compositions(
    rank: usize,
    total: i64,
    scratch: &mut Vec<i64>,
    pos: usize,
    out: &mut Vec<Weight>,
) {
    if pos + 1 == rank {
        scratch[pos] = total;
        out.push(Weight(scratch.clone()));
        return;
    }
    for v in 0..=total {
        scratch[pos] = v;
        compositions(rank, total - v, scratch, pos + 1, out);
    }
}
