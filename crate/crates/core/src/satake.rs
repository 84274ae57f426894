//! Generalized Satake diagrams, the root-lattice involution they induce,
//! parameter families, and the coideal generators.
//!
//! A diagram is a pair `(X, tau)`: a finite-type subset `X` of the nodes
//! and an involutive diagram automorphism `tau` satisfying
//!
//! 1. `tau(alpha_j) = -w_X(alpha_j)` for every `j` in `X`, where `w_X` is
//!    the longest element of the parabolic Weyl group of `X`; and
//! 2. (the weakened replacement for the classical integrality condition)
//!    whenever `tau(i) = i` and `a_ji = -1`, the involution
//!    `Theta = -w_X o tau` satisfies `Theta(alpha_i) != -alpha_i - alpha_j`.
//!
//! Each validated diagram carries the derived data every later stage
//! consumes: `Theta` on the simple roots, a reduced word for `w_X`, the
//! copairings `2 alpha_i(rho_X^vee)`, the signs and exponents entering the
//! defining recursion, and the cached twist elements `T_(w_X)(E_(tau(i)))`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::root::{FiniteTypeData, RootDatum, Weight};
use crate::scalar::RatFuncQ;
use crate::ufull::{t_word_on_e, UElt};
use crate::uplus::{UPlusElt, WeightBases};

/// Rejection reasons for a candidate diagram, in validation order.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SatakeError {
    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("tau is not an involution of the node set")]
    TauNotInvolution,
    #[error("tau is not a diagram automorphism (mismatch at nodes {i}, {j})")]
    TauNotDiagramAutomorphism { i: usize, j: usize },
    #[error("tau does not preserve the subset X (node {i})")]
    TauDoesNotPreserveX { i: usize },
    #[error("X does not span a finite-type subdiagram")]
    XNotFiniteType,
    #[error("tau(alpha_{j}) != -w_X(alpha_{j}) inside X")]
    LongestWordCondition { j: usize },
    #[error("Theta(alpha_{i}) = -alpha_{i} - alpha_{j} with a_{j}{i} = -1 is excluded")]
    FixedNodeCondition { i: usize, j: usize },
}

/// Rejection reasons for a parameter family.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("no parameter supplied for node {i}")]
    MissingParameter { i: usize },
    #[error("parameter at node {i} must be nonzero")]
    ZeroParameter { i: usize },
    #[error("parameter supplied for node {i}, which is not outside X")]
    UnexpectedParameter { i: usize },
    #[error("parameters at nodes {i} and tau({i}) must agree when (alpha_i, Theta(alpha_i)) = 0")]
    CViolation { i: usize },
    #[error("node {i} is tau-fixed with odd exponent; no solution exists without adjoining a square root of q")]
    OddExponent { i: usize },
    #[error("the supplied choices on the tau-orbit of node {i} are mutually inconsistent")]
    InconsistentOrbit { i: usize },
}

/// A validated generalized Satake diagram with its derived constants.
#[derive(Debug)]
pub struct SatakeDiagram {
    datum: Arc<RootDatum>,
    x: Vec<usize>,
    in_x: Vec<bool>,
    tau: Vec<usize>,
    x_data: FiniteTypeData,
    theta_simple: Vec<Weight>,
    signs: Vec<i64>,
    exps: Vec<i64>,
    twists: Vec<OnceLock<UPlusElt>>,
}

impl SatakeDiagram {
    /// Validates `(X, tau)` against `datum` and precomputes the derived
    /// data.  `x` is a set of node indices; `tau` is a full permutation of
    /// `0..rank`.
    ///
    /// # Errors
    /// One [`SatakeError`] per failed condition, checked in the order the
    /// variants are declared.
    pub fn new(datum: Arc<RootDatum>, x: &[usize], tau: &[usize]) -> Result<Self, SatakeError> {
        let rank = datum.rank();
        for &i in x.iter().chain(tau.iter()) {
            if i >= rank {
                return Err(SatakeError::IndexOutOfRange { index: i, rank });
            }
        }
        let mut x: Vec<usize> = x.to_vec();
        x.sort_unstable();
        x.dedup();
        let mut in_x = vec![false; rank];
        for &i in &x {
            in_x[i] = true;
        }
        let tau = tau.to_vec();
        let mut seen = vec![false; rank];
        for &t in &tau {
            seen[t] = true;
        }
        if tau.len() != rank || seen.iter().any(|s| !s) || (0..rank).any(|i| tau[tau[i]] != i) {
            return Err(SatakeError::TauNotInvolution);
        }
        for i in 0..rank {
            for j in 0..rank {
                if datum.cartan(tau[i], tau[j]) != datum.cartan(i, j) {
                    return Err(SatakeError::TauNotDiagramAutomorphism { i, j });
                }
            }
            if datum.symmetrizer(tau[i]) != datum.symmetrizer(i) {
                return Err(SatakeError::TauNotDiagramAutomorphism { i, j: i });
            }
        }
        for &i in &x {
            if !in_x[tau[i]] {
                return Err(SatakeError::TauDoesNotPreserveX { i });
            }
        }
        let x_data = datum
            .finite_type_data(&x)
            .map_err(|_| SatakeError::XNotFiniteType)?;
        // Condition on X: tau and -w_X agree on the simple roots of X.
        for &j in &x {
            let image = datum
                .weyl_apply(&x_data.longest_word, &Weight::simple(rank, j))
                .neg();
            if image != Weight::simple(rank, tau[j]) {
                return Err(SatakeError::LongestWordCondition { j });
            }
        }
        // Theta = -w_X o tau on the simple roots.
        let theta_simple: Vec<Weight> = (0..rank)
            .map(|i| {
                datum
                    .weyl_apply(&x_data.longest_word, &Weight::simple(rank, tau[i]))
                    .neg()
            })
            .collect();
        // Condition on tau-fixed nodes outside X.
        for i in 0..rank {
            if in_x[i] || tau[i] != i {
                continue;
            }
            for j in 0..rank {
                if datum.cartan(j, i) == -1 {
                    let excluded = Weight::simple(rank, i).add(&Weight::simple(rank, j)).neg();
                    if theta_simple[i] == excluded {
                        return Err(SatakeError::FixedNodeCondition { i, j });
                    }
                }
            }
        }
        // Sanity: Theta is an involution fixing the simple roots of X.
        let theta_weight = |beta: &Weight| -> Weight {
            let mut out = Weight::zero(rank);
            for (i, &n) in beta.0.iter().enumerate() {
                out = out.add(&theta_simple[i].scale(n));
            }
            out
        };
        for i in 0..rank {
            assert_eq!(
                theta_weight(&theta_simple[i]),
                Weight::simple(rank, i),
                "Theta must be involutive"
            );
        }
        for &j in &x {
            assert_eq!(theta_simple[j], Weight::simple(rank, j));
        }
        let signs: Vec<i64> = x_data
            .copairings
            .iter()
            .map(|c| if c.rem_euclid(2) == 0 { 1 } else { -1 })
            .collect();
        let exps: Vec<i64> = (0..rank)
            .map(|i| {
                let shifted = theta_simple[i].sub(&x_data.sum_positive_roots);
                datum.bilinear(&Weight::simple(rank, i), &shifted)
            })
            .collect();
        let twists = (0..rank).map(|_| OnceLock::new()).collect();
        Ok(SatakeDiagram {
            datum,
            x,
            in_x,
            tau,
            x_data,
            theta_simple,
            signs,
            exps,
            twists,
        })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// The sorted node subset `X`.
    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn contains_x(&self, i: usize) -> bool {
        self.in_x[i]
    }

    /// The involution as a full index permutation.
    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    /// A reduced word for the longest element of the parabolic Weyl group
    /// of `X` (rightmost letter acts first).
    pub fn w_x_word(&self) -> &[usize] {
        &self.x_data.longest_word
    }

    /// The sum of the positive roots of `X`.
    pub fn two_rho_x(&self) -> &Weight {
        &self.x_data.sum_positive_roots
    }

    /// `2 alpha_i(rho_X^vee)`, always an integer.
    pub fn copairing(&self, i: usize) -> i64 {
        self.x_data.copairings[i]
    }

    /// `(-1)^(2 alpha_i(rho_X^vee))`.
    pub fn sign(&self, i: usize) -> i64 {
        self.signs[i]
    }

    /// `(alpha_i, Theta(alpha_i) - 2 rho_X)`.
    pub fn exp(&self, i: usize) -> i64 {
        self.exps[i]
    }

    /// `Theta(alpha_i)`.
    pub fn theta_simple(&self, i: usize) -> &Weight {
        &self.theta_simple[i]
    }

    /// `Theta(beta)`, extended linearly.
    pub fn theta(&self, beta: &Weight) -> Weight {
        let mut out = Weight::zero(self.rank());
        for (i, &n) in beta.0.iter().enumerate() {
            if n != 0 {
                out = out.add(&self.theta_simple[i].scale(n));
            }
        }
        out
    }

    /// Whether `mu` can support the invariant element: `Theta(mu) = -mu`.
    pub fn is_antifixed(&self, mu: &Weight) -> bool {
        self.theta(mu) == mu.neg()
    }

    /// Whether the diagram also satisfies the classical integrality
    /// condition (`alpha_i(rho_X^vee)` integral on tau-fixed nodes outside
    /// `X`).  Reported, never enforced.
    pub fn is_classical(&self) -> bool {
        (0..self.rank()).all(|i| {
            self.in_x[i] || self.tau[i] != i || self.x_data.copairings[i].rem_euclid(2) == 0
        })
    }

    /// The cached twist `T_(w_X)(E_(tau(i)))` for `i` outside `X`.
    ///
    /// # Panics
    /// If `i` lies in `X` (the twist is only defined, and only needed, on
    /// the complement).
    pub fn twist<'a>(&'a self, bases: &WeightBases, i: usize) -> &'a UPlusElt {
        assert!(!self.in_x[i], "twist requested for node {i} inside X");
        self.twists[i].get_or_init(|| {
            t_word_on_e(bases, &self.x_data.longest_word, self.tau[i])
                .expect("a validated diagram keeps tau(i) positive under all suffixes of w_X")
        })
    }

    /// Certifies the symmetry `sigma(tau(r_i(T_(w_X)(E_i))))
    /// = r_i(T_(w_X)(E_i))` for every node outside `X` — a theorem for
    /// validated diagrams, exposed so runs can re-certify it.
    pub fn sigma_tau_symmetry_holds(&self, bases: &WeightBases) -> bool {
        (0..self.rank()).filter(|&i| !self.in_x[i]).all(|i| {
            let image = t_word_on_e(bases, &self.x_data.longest_word, i)
                .expect("a validated diagram keeps every node positive under all suffixes of w_X");
            let derived = image.skew_r(&self.datum, i);
            bases.eq_mod(&derived.relabel(&self.tau).sigma(), &derived)
        })
    }

    /// The coideal generator: `F_i` for `i` in `X`, otherwise
    /// `F_i - c_i T_(w_X)(E_(tau(i))) K_i^-1`.
    pub fn coideal_generator(
        &self,
        params: &ParameterFamily,
        bases: &WeightBases,
        i: usize,
    ) -> UElt {
        let rank = self.rank();
        let fi = UElt::f_gen(rank, i);
        if self.in_x[i] {
            return fi;
        }
        let twist = UElt::from_uplus(rank, self.twist(bases, i));
        let k_inv = UElt::k_of_weight(Weight::simple(rank, i).neg());
        fi.sub(&twist.mul(&k_inv, &self.datum, None).scale(&params.c(i)))
    }
}

/// A family `c = (c_i)` indexed by the nodes outside `X`, all nonzero,
/// subject to `c_i = c_(tau(i))` whenever `(alpha_i, Theta(alpha_i)) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterFamily {
    c: BTreeMap<usize, RatFuncQ>,
}

impl ParameterFamily {
    /// Validates a full assignment on the complement of `X`.
    ///
    /// # Errors
    /// [`ParamError`] for a missing, zero, or extraneous entry, or a
    /// violated `tau`-orbit equality.
    pub fn new(diagram: &SatakeDiagram, c: BTreeMap<usize, RatFuncQ>) -> Result<Self, ParamError> {
        for &i in c.keys() {
            if i >= diagram.rank() || diagram.contains_x(i) {
                return Err(ParamError::UnexpectedParameter { i });
            }
        }
        for i in 0..diagram.rank() {
            if diagram.contains_x(i) {
                continue;
            }
            match c.get(&i) {
                None => return Err(ParamError::MissingParameter { i }),
                Some(v) if v.is_zero() => return Err(ParamError::ZeroParameter { i }),
                Some(_) => {}
            }
        }
        let family = ParameterFamily { c };
        family.check_c_membership(diagram)?;
        Ok(family)
    }

    fn check_c_membership(&self, diagram: &SatakeDiagram) -> Result<(), ParamError> {
        let datum = diagram.datum();
        for (&i, v) in &self.c {
            let ti = diagram.tau()[i];
            let alpha_i = Weight::simple(diagram.rank(), i);
            if datum.bilinear(&alpha_i, diagram.theta_simple(i)) == 0 && *v != self.c[&ti] {
                return Err(ParamError::CViolation { i });
            }
        }
        Ok(())
    }

    /// `c_i`, extended by zero on `X`.
    pub fn c(&self, i: usize) -> RatFuncQ {
        self.c.get(&i).cloned().unwrap_or_else(RatFuncQ::zero)
    }

    /// The entries outside `X`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &RatFuncQ)> {
        self.c.iter().map(|(&i, v)| (i, v))
    }

    /// The companion family
    /// `c_i' = (-1)^(2 alpha_i(rho_X^vee)) q^((alpha_i, Theta(alpha_i) - 2 rho_X)) bar(c_(tau(i)))`.
    /// The transform preserves membership in the parameter set and is an
    /// involution.
    pub fn companion(&self, diagram: &SatakeDiagram) -> ParameterFamily {
        let c = self
            .c
            .iter()
            .map(|(&i, _)| {
                let v = &self.c[&diagram.tau()[i]];
                let mut out = v.bar() * RatFuncQ::q_pow(diagram.exp(i));
                if diagram.sign(i) < 0 {
                    out = -out;
                }
                (i, out)
            })
            .collect();
        let family = ParameterFamily { c };
        family
            .check_c_membership(diagram)
            .expect("the companion transform preserves the parameter set");
        family
    }

    /// Whether `bar(c_i) = sign_i q^(-exp_i) c_(tau(i))` for every `i`
    /// outside `X` — equivalently, whether the family equals its
    /// companion.  This is the condition under which the coideal
    /// subalgebra admits a bar involution compatible with the one on the
    /// ambient algebra.
    pub fn is_bar_admissible(&self, diagram: &SatakeDiagram) -> bool {
        let direct = self.c.iter().all(|(&i, v)| {
            let mut rhs = &self.c[&diagram.tau()[i]] * &RatFuncQ::q_pow(-diagram.exp(i));
            if diagram.sign(i) < 0 {
                rhs = -rhs;
            }
            v.bar() == rhs
        });
        debug_assert_eq!(direct, *self == self.companion(diagram));
        direct
    }

    /// Solves the bar-admissibility equation constructively.
    ///
    /// For a `tau`-fixed node the equation forces `c_i = q^(exp_i/2)`
    /// (times `q - q^-1` when `sign_i = -1`); a supplied choice overrides
    /// the default but must itself satisfy the equation.  On a two-element
    /// orbit one member is free — supplied via `free_choices` under either
    /// index, defaulting to `1` — and the partner is determined.
    ///
    /// # Errors
    /// [`ParamError::OddExponent`] when a `tau`-fixed node has odd
    /// exponent, [`ParamError::InconsistentOrbit`] when supplied choices
    /// conflict with the equation, and the [`ParameterFamily::new`]
    /// errors for zero values or violated orbit equalities.
    pub fn make_bar_admissible(
        diagram: &SatakeDiagram,
        free_choices: &BTreeMap<usize, RatFuncQ>,
    ) -> Result<ParameterFamily, ParamError> {
        for &i in free_choices.keys() {
            if i >= diagram.rank() || diagram.contains_x(i) {
                return Err(ParamError::UnexpectedParameter { i });
            }
            if free_choices[&i].is_zero() {
                return Err(ParamError::ZeroParameter { i });
            }
        }
        let transfer = |i: usize, v: &RatFuncQ| -> RatFuncQ {
            // From the equation at index i: c_(tau(i)) = sign_i q^(exp_i) bar(c_i).
            let mut out = v.bar() * RatFuncQ::q_pow(diagram.exp(i));
            if diagram.sign(i) < 0 {
                out = -out;
            }
            out
        };
        let mut c: BTreeMap<usize, RatFuncQ> = BTreeMap::new();
        for i in 0..diagram.rank() {
            if diagram.contains_x(i) || c.contains_key(&i) {
                continue;
            }
            let ti = diagram.tau()[i];
            if ti == i {
                let value = match free_choices.get(&i) {
                    Some(v) => v.clone(),
                    None => {
                        if diagram.exp(i).rem_euclid(2) != 0 {
                            return Err(ParamError::OddExponent { i });
                        }
                        let base = RatFuncQ::q_pow(diagram.exp(i) / 2);
                        if diagram.sign(i) < 0 {
                            &base * &(&RatFuncQ::q_pow(1) - &RatFuncQ::q_pow(-1))
                        } else {
                            base
                        }
                    }
                };
                if transfer(i, &value) != value {
                    return Err(ParamError::InconsistentOrbit { i });
                }
                c.insert(i, value);
            } else {
                let (value_i, given_both) = match (free_choices.get(&i), free_choices.get(&ti)) {
                    (Some(v), other) => (v.clone(), other.is_some()),
                    (None, Some(v)) => (transfer(ti, v), false),
                    (None, None) => (RatFuncQ::one(), false),
                };
                let partner = transfer(i, &value_i);
                if given_both && free_choices[&ti] != partner {
                    return Err(ParamError::InconsistentOrbit { i });
                }
                c.insert(i, value_i);
                c.insert(ti, partner);
            }
        }
        let family = ParameterFamily::new(diagram, c)?;
        if !family.is_bar_admissible(diagram) {
            // Only reachable through a supplied fixed-point override that
            // fails the equation's tau-symmetry.
            return Err(ParamError::InconsistentOrbit {
                i: *family.c.keys().next().expect("family is nonempty here"),
            });
        }
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_expression;
    use crate::uplus::ComplementOrder;

    fn rf(s: &str) -> RatFuncQ {
        parse_expression(s).unwrap()
    }

    fn diagram(name: &str, x: &[usize], tau: &[usize]) -> SatakeDiagram {
        let datum = Arc::new(RootDatum::from_name(name).unwrap());
        SatakeDiagram::new(datum, x, tau).unwrap()
    }

    #[test]
    fn aiii_diagram_derived_data() {
        let d = diagram("A3", &[1], &[2, 1, 0]);
        assert_eq!(d.theta_simple(0), &Weight(vec![0, -1, -1]));
        assert_eq!(d.theta_simple(1), &Weight(vec![0, 1, 0]));
        assert_eq!(d.theta_simple(2), &Weight(vec![-1, -1, 0]));
        assert_eq!(
            (d.copairing(0), d.copairing(1), d.copairing(2)),
            (-1, 2, -1)
        );
        assert_eq!((d.sign(0), d.sign(2)), (-1, -1));
        assert_eq!((d.exp(0), d.exp(2)), (2, 2));
        assert!(d.is_antifixed(&Weight(vec![2, 2, 2])));
        assert!(!d.is_antifixed(&Weight(vec![1, 0, 0])));
        assert!(d.is_classical());
    }

    #[test]
    fn rank_one_quasi_split_data() {
        let d = diagram("A1", &[], &[0]);
        assert_eq!(d.theta_simple(0), &Weight(vec![-1]));
        assert_eq!(d.sign(0), 1);
        assert_eq!(d.exp(0), -2);
        assert!(d.w_x_word().is_empty());
    }

    #[test]
    fn fixed_node_condition_rejects_the_borderline_pair() {
        // A2 with X = {1}, tau = id passes the longest-word condition but
        // trips the fixed-node exclusion at the other node.
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let err = SatakeDiagram::new(datum, &[0], &[0, 1]).unwrap_err();
        assert_eq!(err, SatakeError::FixedNodeCondition { i: 1, j: 0 });
        // Whereas X = emptyset with the same tau is fine (Theta = -id).
        let d = diagram("A2", &[], &[0, 1]);
        assert_eq!(d.theta_simple(0), &Weight(vec![-1, 0]));
        assert!(d.is_classical());
    }

    #[test]
    fn validation_rejects_malformed_tau_and_x() {
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        assert_eq!(
            SatakeDiagram::new(datum.clone(), &[5], &[0, 1]).unwrap_err(),
            SatakeError::IndexOutOfRange { index: 5, rank: 2 }
        );
        assert_eq!(
            SatakeDiagram::new(datum.clone(), &[], &[0, 0]).unwrap_err(),
            SatakeError::TauNotInvolution
        );
        // B2 has no nontrivial diagram automorphism.
        let b2 = Arc::new(RootDatum::from_name("B2").unwrap());
        assert!(matches!(
            SatakeDiagram::new(b2, &[], &[1, 0]).unwrap_err(),
            SatakeError::TauNotDiagramAutomorphism { .. }
        ));
        // tau must stabilize X.
        let a3 = Arc::new(RootDatum::from_name("A3").unwrap());
        assert_eq!(
            SatakeDiagram::new(a3.clone(), &[0], &[2, 1, 0]).unwrap_err(),
            SatakeError::TauDoesNotPreserveX { i: 0 }
        );
        // X of affine shape inside a bigger datum is impossible here, but a
        // non-finite full datum is caught through the X data request.
        let affine = RootDatum::new(vec![vec![2, -2], vec![-2, 2]], None).unwrap();
        assert_eq!(
            SatakeDiagram::new(Arc::new(affine), &[0, 1], &[0, 1]).unwrap_err(),
            SatakeError::XNotFiniteType
        );
    }

    #[test]
    fn theta_preserves_the_bilinear_form() {
        for (name, x, tau) in [
            ("A3", vec![1], vec![2, 1, 0]),
            ("A2", vec![], vec![1, 0]),
            ("B2", vec![1], vec![0, 1]),
        ] {
            let d = diagram(name, &x, &tau);
            let rank = d.rank();
            let samples = [
                Weight((0..rank).map(|i| i as i64 + 1).collect()),
                Weight((0..rank).map(|i| (i as i64) - 1).collect()),
                Weight::simple(rank, 0),
            ];
            for b in &samples {
                for g in &samples {
                    assert_eq!(
                        d.datum().bilinear(&d.theta(b), &d.theta(g)),
                        d.datum().bilinear(b, g),
                        "{name}"
                    );
                }
            }
            for i in 0..rank {
                if !d.contains_x(i) {
                    assert_eq!(d.exp(i), d.exp(d.tau()[i]), "{name}: exp tau-compatible");
                    assert_eq!(d.sign(i), d.sign(d.tau()[i]), "{name}: sign tau-compatible");
                }
            }
        }
    }

    #[test]
    fn twist_matches_the_single_reflection_image() {
        let d = diagram("A3", &[1], &[2, 1, 0]);
        let bases = WeightBases::new(d.datum().clone(), ComplementOrder::Lex);
        // T_(s_2)(E_3) = E_2 E_3 - q^-1 E_3 E_2, of weight alpha_2+alpha_3.
        let t = d.twist(&bases, 0);
        assert_eq!(t.homogeneous_weight(3), Some(Weight(vec![0, 1, 1])));
        let expected = UPlusElt::from_terms([
            (crate::uplus::FreeWord::from_letters(&[1, 2]), rf("1")),
            (crate::uplus::FreeWord::from_letters(&[2, 1]), rf("-q^-1")),
        ]);
        assert_eq!(t, &expected);
    }

    #[test]
    fn twist_derivatives_have_the_reversal_symmetry() {
        for (name, x, tau) in [
            ("A3", vec![1], vec![2usize, 1, 0]),
            ("A2", vec![], vec![1, 0]),
            ("B2", vec![1], vec![0, 1]),
            ("A1", vec![], vec![0]),
        ] {
            let d = diagram(name, &x, &tau);
            let bases = WeightBases::new(d.datum().clone(), ComplementOrder::Lex);
            assert!(d.sigma_tau_symmetry_holds(&bases), "failed for {name}");
        }
    }

    #[test]
    fn parameter_set_membership_is_enforced() {
        // A1 x A1 with the swap: Theta(alpha_1) = -alpha_2 is orthogonal to
        // alpha_1, so both entries must agree.
        let d = diagram("A1xA1", &[], &[1, 0]);
        let ok = ParameterFamily::new(&d, BTreeMap::from([(0, rf("q")), (1, rf("q"))])).unwrap();
        assert_eq!(ok.c(0), rf("q"));
        let err =
            ParameterFamily::new(&d, BTreeMap::from([(0, rf("q")), (1, rf("1"))])).unwrap_err();
        assert!(matches!(err, ParamError::CViolation { .. }));
        assert_eq!(
            ParameterFamily::new(&d, BTreeMap::from([(0, rf("q"))])).unwrap_err(),
            ParamError::MissingParameter { i: 1 }
        );
        let d = diagram("A1", &[], &[0]);
        assert_eq!(
            ParameterFamily::new(&d, BTreeMap::from([(0, rf("0"))])).unwrap_err(),
            ParamError::ZeroParameter { i: 0 }
        );
    }

    #[test]
    fn companion_transform_on_the_rank_one_family() {
        let d = diagram("A1", &[], &[0]);
        let c = ParameterFamily::new(&d, BTreeMap::from([(0, rf("q^-1"))])).unwrap();
        // exp = -2, sign = +1: c' = q^-2 bar(q^-1) = q^-1 = c.
        assert_eq!(c.companion(&d), c);
        assert!(c.is_bar_admissible(&d));
        let c1 = ParameterFamily::new(&d, BTreeMap::from([(0, rf("1"))])).unwrap();
        assert_eq!(c1.companion(&d).c(0), rf("q^-2"));
        assert!(!c1.is_bar_admissible(&d));
    }

    #[test]
    fn companion_transform_is_involutive() {
        let cases: [(&str, Vec<usize>, Vec<usize>, Vec<(usize, &str)>); 3] = [
            (
                "A3",
                vec![1],
                vec![2, 1, 0],
                vec![(0, "q^3 - 2"), (2, "1/(q+1)")],
            ),
            ("A2", vec![], vec![1, 0], vec![(0, "5*q"), (1, "q^-4")]),
            (
                "A1xA1",
                vec![],
                vec![1, 0],
                vec![(0, "q - q^-1"), (1, "q - q^-1")],
            ),
        ];
        for (name, x, tau, entries) in cases {
            let d = diagram(name, &x, &tau);
            let map = entries.iter().map(|&(i, s)| (i, rf(s))).collect();
            let c = ParameterFamily::new(&d, map).unwrap();
            assert_eq!(c.companion(&d).companion(&d), c, "{name}");
        }
    }

    #[test]
    fn make_bar_admissible_pinned_families() {
        // Rank 1: the tau-fixed branch with even exponent -2.
        let d = diagram("A1", &[], &[0]);
        let c = ParameterFamily::make_bar_admissible(&d, &BTreeMap::new()).unwrap();
        assert_eq!(c.c(0), rf("q^-1"));
        // A2 quasi-split: free choice at node 2 transfers to node 1.
        let d = diagram("A2", &[], &[1, 0]);
        let c = ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(1, rf("1"))])).unwrap();
        assert_eq!((c.c(0), c.c(1)), (rf("q"), rf("1")));
        assert!(c.is_bar_admissible(&d));
        // A3 type AIII: sign -1 and exponent 2 on the outer orbit.
        let d = diagram("A3", &[1], &[2, 1, 0]);
        let c = ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(2, rf("1"))])).unwrap();
        assert_eq!((c.c(0), c.c(2)), (rf("-q^2"), rf("1")));
        assert!(c.is_bar_admissible(&d));
    }

    #[test]
    fn make_bar_admissible_error_paths() {
        // A1 x A1 swap: a free choice of q forces the partner to q^-1,
        // violating the orbit equality of the parameter set.
        let d = diagram("A1xA1", &[], &[1, 0]);
        let err =
            ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(0, rf("q"))])).unwrap_err();
        assert!(matches!(err, ParamError::CViolation { .. }));
        let ok = ParameterFamily::make_bar_admissible(&d, &BTreeMap::new()).unwrap();
        assert_eq!((ok.c(0), ok.c(1)), (rf("1"), rf("1")));
        // Conflicting values on the two orbit slots.
        let d = diagram("A2", &[], &[1, 0]);
        let err =
            ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(0, rf("1")), (1, rf("1"))]))
                .unwrap_err();
        assert!(matches!(err, ParamError::InconsistentOrbit { .. }));
        // A fixed-point override failing its own equation.
        let d = diagram("A1", &[], &[0]);
        let err =
            ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(0, rf("q"))])).unwrap_err();
        assert!(matches!(err, ParamError::InconsistentOrbit { .. }));
        let ok =
            ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(0, rf("-q^-1"))])).unwrap();
        assert_eq!(ok.c(0), rf("-q^-1"));
    }

    #[test]
    fn coideal_generators_take_the_pinned_shapes() {
        // Rank 1 quasi-split: B = F - q^-1 E K^-1.
        let d = diagram("A1", &[], &[0]);
        let bases = WeightBases::new(d.datum().clone(), ComplementOrder::Lex);
        let c = ParameterFamily::new(&d, BTreeMap::from([(0, rf("q^-1"))])).unwrap();
        let b = d.coideal_generator(&c, &bases, 0);
        let e_k = UElt::e_gen(1, 0)
            .mul(&UElt::k_of_weight(Weight(vec![-1])), d.datum(), None)
            .scale(&rf("q^-1"));
        assert_eq!(b, UElt::f_gen(1, 0).sub(&e_k));
        // Inside X the generator is bare.
        let d = diagram("A3", &[1], &[2, 1, 0]);
        let bases = WeightBases::new(d.datum().clone(), ComplementOrder::Lex);
        let c = ParameterFamily::make_bar_admissible(&d, &BTreeMap::from([(2, rf("1"))])).unwrap();
        assert_eq!(d.coideal_generator(&c, &bases, 1), UElt::f_gen(3, 1));
        // Outside X the twist carries weight w_X(alpha_(tau(i))).
        let b1 = d.coideal_generator(&c, &bases, 0);
        let e_heights: Vec<usize> = b1.terms().map(|(t, _)| t.e.len()).collect();
        assert!(e_heights.contains(&2) && e_heights.contains(&0));
        for (t, _) in b1.terms() {
            if t.e.len() == 2 {
                assert_eq!(t.e.weight(3), Weight(vec![0, 1, 1]));
                assert_eq!(t.k, Weight(vec![-1, 0, 0]));
            }
        }
    }
}
