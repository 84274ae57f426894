//! The full quantized enveloping algebra in triangular form.
//!
//! Elements are `Q(q)`-combinations of terms `F_w K_beta E_v`: a word in
//! the lowering generators, a group-like `K` indexed by an arbitrary
//! root-lattice weight, and a word in the raising generators.
//! Multiplication straightens `E`-letters past `F`-letters with the
//! commutator rule
//!
//! ```text
//! x F_j - F_j x = (r_j(x) K_j - K_j^-1 jr(x)) / (q_j - q_j^-1)
//! ```
//!
//! for homogeneous `x` in the positive part, where `r_j` and `jr` are the
//! skew derivations of [`crate::uplus`].  Straightening can only lower the
//! `E`-height of a term, which is what makes cutoff-truncated products
//! exact below the cutoff.
//!
//! Both word factors are kept in free coordinates; [`UElt::canonicalize`]
//! reduces them modulo the defining relations (the lowering side reuses
//! the positive-side machinery verbatim, since the relations match letter
//! for letter under `E_i -> F_i`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::root::{RootDatum, Weight};
use crate::scalar::{q_factorial, RatFuncQ};
use crate::uplus::{FreeWord, UPlusElt, WeightBases};

/// Errors from full-algebra operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum UFullError {
    /// A braid-automorphism image was requested in the positive part but
    /// does not lie there.
    #[error("T_w(E_{j}) does not lie in the positive part for this word")]
    NotInUPlus { j: usize },
}

/// One triangular monomial `F_w K_beta E_v` (coefficient stored outside).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UTerm {
    /// Word in the lowering generators.
    pub f: FreeWord,
    /// Weight indexing the group-like factor `K_beta`.
    pub k: Weight,
    /// Word in the raising generators.
    pub e: FreeWord,
}

/// An element of the full algebra as a combination of triangular
/// monomials.  Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UElt {
    rank: usize,
    terms: BTreeMap<UTerm, RatFuncQ>,
}

impl UElt {
    pub fn zero(rank: usize) -> Self {
        UElt {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        UElt::k_of_weight(Weight::zero(rank))
    }

    /// The raising generator `E_i`.
    pub fn e_gen(rank: usize, i: usize) -> Self {
        UElt::from_uplus(rank, &UPlusElt::generator(i))
    }

    /// The lowering generator `F_i`.
    pub fn f_gen(rank: usize, i: usize) -> Self {
        let term = UTerm {
            f: FreeWord::from_letters(&[i]),
            k: Weight::zero(rank),
            e: FreeWord::empty(),
        };
        UElt {
            rank,
            terms: BTreeMap::from([(term, RatFuncQ::one())]),
        }
    }

    /// The group-like element `K_beta`; `beta` may have negative
    /// coordinates.
    pub fn k_of_weight(beta: Weight) -> Self {
        let rank = beta.rank();
        let term = UTerm {
            f: FreeWord::empty(),
            k: beta,
            e: FreeWord::empty(),
        };
        UElt {
            rank,
            terms: BTreeMap::from([(term, RatFuncQ::one())]),
        }
    }

    /// Embeds a positive-part element.
    pub fn from_uplus(rank: usize, x: &UPlusElt) -> Self {
        let terms = x
            .terms()
            .map(|(w, c)| {
                (
                    UTerm {
                        f: FreeWord::empty(),
                        k: Weight::zero(rank),
                        e: w.clone(),
                    },
                    c.clone(),
                )
            })
            .collect();
        UElt { rank, terms }
    }

    /// Embeds a lowering-part element given in raising-word coordinates
    /// (each word letter `i` is read as `F_i`).
    pub fn from_uminus_words(rank: usize, x: &UPlusElt) -> Self {
        let terms = x
            .terms()
            .map(|(w, c)| {
                (
                    UTerm {
                        f: w.clone(),
                        k: Weight::zero(rank),
                        e: FreeWord::empty(),
                    },
                    c.clone(),
                )
            })
            .collect();
        UElt { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UTerm, &RatFuncQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, t: UTerm, c: RatFuncQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &UElt) -> UElt {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UElt) -> UElt {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> UElt {
        UElt {
            rank: self.rank,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &RatFuncQ) -> UElt {
        if c.is_zero() {
            return UElt::zero(self.rank);
        }
        UElt {
            rank: self.rank,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    /// Largest raising-word length appearing.
    pub fn max_e_height(&self) -> usize {
        self.terms.keys().map(|t| t.e.len()).max().unwrap_or(0)
    }

    /// Drops every term whose raising word is longer than `cutoff`.
    pub fn retain_e_height(&self, cutoff: usize) -> UElt {
        UElt {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.e.len() <= cutoff)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// The product, straightening every raising word past every lowering
    /// word into triangular form.  With `cutoff = Some(n)`, terms whose
    /// raising word would exceed length `n` are dropped; all retained
    /// terms are exact.
    pub fn mul(&self, other: &UElt, datum: &RootDatum, cutoff: Option<usize>) -> UElt {
        debug_assert_eq!(self.rank, other.rank);
        debug_assert_eq!(self.rank, datum.rank());
        let mut out = UElt::zero(self.rank);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                // Straightening consumes at most one raising letter per
                // lowering letter it passes, so this pair cannot produce
                // anything below the cutoff if even the fully-consumed
                // length exceeds it.
                if let Some(n) = cutoff {
                    if t1.e.len() + t2.e.len() > n + t2.f.len() {
                        continue;
                    }
                }
                let c12 = c1 * c2;
                let e1 = UPlusElt::from_word(t1.e.clone());
                let fletters: Vec<usize> = t2.f.letters().collect();
                let straightened = straighten(datum, &e1, &fletters);
                for (mid, cs) in &straightened.terms {
                    if let Some(n) = cutoff {
                        if mid.e.len() + t2.e.len() > n {
                            continue;
                        }
                    }
                    // Commute K_(t1.k) right past the new lowering word and
                    // K_(t2.k) left past the new raising word, then merge.
                    let fw_wt = mid.f.weight(self.rank);
                    let ew_wt = mid.e.weight(self.rank);
                    let twist = RatFuncQ::q_pow(
                        -datum.bilinear(&t1.k, &fw_wt) - datum.bilinear(&t2.k, &ew_wt),
                    );
                    let term = UTerm {
                        f: t1.f.concat(&mid.f),
                        k: t1.k.add(&mid.k).add(&t2.k),
                        e: mid.e.concat(&t2.e),
                    };
                    out.add_term(term, &(&c12 * cs) * &twist);
                }
            }
        }
        out
    }

    /// The bar involution: fixes both generator kinds, sends
    /// `K_beta -> K_(-beta)`, and conjugates coefficients by `q -> q^-1`.
    pub fn bar(&self) -> UElt {
        UElt {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    (
                        UTerm {
                            f: t.f.clone(),
                            k: t.k.neg(),
                            e: t.e.clone(),
                        },
                        c.bar(),
                    )
                })
                .collect(),
        }
    }

    /// Reduces both word factors modulo the defining relations, producing
    /// the canonical complement-supported representative.  Two elements
    /// are equal in the algebra exactly when their canonical forms match.
    pub fn canonicalize(&self, bases: &WeightBases) -> UElt {
        // Raising side first: group by (lowering word, K-weight).
        let mut regrouped: HashMap<(FreeWord, Weight), UPlusElt> = HashMap::new();
        for (t, c) in &self.terms {
            regrouped
                .entry((t.f.clone(), t.k.clone()))
                .or_default()
                .add_term(t.e.clone(), c.clone());
        }
        let mut half = UElt::zero(self.rank);
        for ((f, k), eparts) in regrouped {
            for (w, c) in bases.project(&eparts).terms() {
                half.add_term(
                    UTerm {
                        f: f.clone(),
                        k: k.clone(),
                        e: w.clone(),
                    },
                    c.clone(),
                );
            }
        }
        // Lowering side: same relations in word coordinates.
        let mut regrouped: HashMap<(Weight, FreeWord), UPlusElt> = HashMap::new();
        for (t, c) in &half.terms {
            regrouped
                .entry((t.k.clone(), t.e.clone()))
                .or_default()
                .add_term(t.f.clone(), c.clone());
        }
        let mut out = UElt::zero(self.rank);
        for ((k, e), fparts) in regrouped {
            for (w, c) in bases.project(&fparts).terms() {
                out.add_term(
                    UTerm {
                        f: w.clone(),
                        k: k.clone(),
                        e: e.clone(),
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Equality in the algebra (canonicalizes the difference).
    pub fn eq_mod(&self, other: &UElt, bases: &WeightBases) -> bool {
        self.sub(other).canonicalize(bases).is_zero()
    }

    /// Extracts a pure positive-part element, or `None` if any term has a
    /// lowering factor or a K-shift.
    pub fn as_uplus(&self) -> Option<UPlusElt> {
        let mut out = UPlusElt::zero();
        for (t, c) in &self.terms {
            if !t.f.is_empty() || !t.k.is_zero() {
                return None;
            }
            out.add_term(t.e.clone(), c.clone());
        }
        Some(out)
    }
}

impl fmt::Display for UElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (t, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !t.f.is_empty() {
                write!(f, " ")?;
                for (k, l) in t.f.letters().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "F{}", l + 1)?;
                }
            }
            if !t.k.is_zero() {
                write!(f, " K{}", t.k)?;
            }
            if !t.e.is_empty() {
                write!(f, " {}", t.e)?;
            }
            if t.f.is_empty() && t.k.is_zero() && t.e.is_empty() {
                write!(f, " 1")?;
            }
        }
        Ok(())
    }
}

/// Straightens `(raising element e) * (lowering word f)` into triangular
/// terms, recursively peeling lowering letters from the left:
///
/// ```text
/// e * (F_j rest) = F_j (e * rest)
///                + (r_j(e) K_j - K_j^-1 jr(e)) / (q_j - q_j^-1) * rest
/// ```
///
/// with the `K_j` factors commuted into place.
fn straighten(datum: &RootDatum, e: &UPlusElt, f: &[usize]) -> UElt {
    let rank = datum.rank();
    if f.is_empty() {
        return UElt::from_uplus(rank, e);
    }
    let j = f[0];
    let rest = &f[1..];
    let alpha_j = Weight::simple(rank, j);
    let mut out = UElt::zero(rank);
    // F_j passes to the very front of every term from e * rest.
    for (t, c) in straighten(datum, e, rest).terms {
        let f_new = FreeWord::from_letters(&[j]).concat(&t.f);
        out.add_term(UTerm { f: f_new, ..t }, c);
    }
    let dj = datum.symmetrizer(j);
    let denom = &RatFuncQ::q_pow(dj) - &RatFuncQ::q_pow(-dj);
    let coef = denom.inv().expect("q^d - q^-d is nonzero");
    // r_j(e) K_j * rest: K_j first passes every letter of rest, then sits
    // right of each straightened term's raising word.
    let rj = e.skew_r(datum, j);
    if !rj.is_zero() {
        let mut rest_wt = Weight::zero(rank);
        for &l in rest {
            rest_wt.0[l] += 1;
        }
        let base = &coef * &RatFuncQ::q_pow(-datum.pair_simple(j, &rest_wt));
        for (t, c) in straighten(datum, &rj, rest).terms {
            let twist = RatFuncQ::q_pow(-datum.pair_simple(j, &t.e.weight(rank)));
            let term = UTerm {
                f: t.f,
                k: t.k.add(&alpha_j),
                e: t.e,
            };
            out.add_term(term, &(&c * &base) * &twist);
        }
    }
    // -K_j^-1 jr(e) * rest: K_j^-1 passes only the lowering word that the
    // straightening of jr(e) * rest produces.
    let irj = e.skew_ir(datum, j);
    if !irj.is_zero() {
        for (t, c) in straighten(datum, &irj, rest).terms {
            let twist = RatFuncQ::q_pow(datum.pair_simple(j, &t.f.weight(rank)));
            let term = UTerm {
                f: t.f,
                k: t.k.sub(&alpha_j),
                e: t.e,
            };
            out.add_term(term, -&(&(&c * &coef) * &twist));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Braid-group automorphisms
// ---------------------------------------------------------------------------

/// Lusztig's braid automorphism `T_i` applied to an element, as the
/// algebra map determined by
///
/// ```text
/// T_i(E_i) = -F_i K_i                 T_i(F_i) = -K_i^-1 E_i
/// T_i(K_beta) = K_(s_i beta)
/// T_i(E_j) = sum_(r+s=-a_ij) (-1)^r q_i^-r E_i^(s) E_j E_i^(r)   (j != i)
/// T_i(F_j) = sum_(r+s=-a_ij) (-1)^r q_i^r  F_i^(r) F_j F_i^(s)   (j != i)
/// ```
///
/// with `E_i^(n)`, `F_i^(n)` the divided powers.  The exponent signs are
/// forced: with the rank-one images above, these are the unique choices
/// under which `T_i` kills the image of every quantum Serre relation, and
/// the braid relation tests pin the rest.
pub fn lusztig_t(datum: &RootDatum, i: usize, x: &UElt) -> UElt {
    let rank = datum.rank();
    let e_images: Vec<UElt> = (0..rank).map(|j| t_image_e(datum, i, j)).collect();
    let f_images: Vec<UElt> = (0..rank).map(|j| t_image_f(datum, i, j)).collect();
    let mut out = UElt::zero(rank);
    for (t, c) in &x.terms {
        let mut acc = UElt::k_of_weight(datum.reflect(i, &t.k)).scale(c);
        // Multiply in original term order: lowering word, then K, then
        // raising word; K was seeded above.
        let mut prefix = UElt::one(rank);
        for l in t.f.letters() {
            prefix = prefix.mul(&f_images[l], datum, None);
        }
        acc = prefix.mul(&acc, datum, None);
        for l in t.e.letters() {
            acc = acc.mul(&e_images[l], datum, None);
        }
        out = out.add(&acc);
    }
    out
}

fn t_image_e(datum: &RootDatum, i: usize, j: usize) -> UElt {
    let rank = datum.rank();
    if i == j {
        // -F_i K_i.
        let term = UTerm {
            f: FreeWord::from_letters(&[i]),
            k: Weight::simple(rank, i),
            e: FreeWord::empty(),
        };
        let mut out = UElt::zero(rank);
        out.add_term(term, -RatFuncQ::one());
        return out;
    }
    let m = -datum.cartan(i, j);
    let di = datum.symmetrizer(i);
    let mut out = UElt::zero(rank);
    for r in 0..=m {
        let s = m - r;
        let mut letters = vec![i; s as usize];
        letters.push(j);
        letters.extend(std::iter::repeat(i).take(r as usize));
        let term = UTerm {
            f: FreeWord::empty(),
            k: Weight::zero(rank),
            e: FreeWord::from_letters(&letters),
        };
        let fact = &q_factorial(s, di).unwrap() * &q_factorial(r, di).unwrap();
        let mut c = RatFuncQ::q_pow(-di * r)
            .checked_div(&fact)
            .expect("factorials are nonzero");
        if r % 2 == 1 {
            c = -c;
        }
        out.add_term(term, c);
    }
    out
}

fn t_image_f(datum: &RootDatum, i: usize, j: usize) -> UElt {
    let rank = datum.rank();
    if i == j {
        // -K_i^-1 E_i.
        let term = UTerm {
            f: FreeWord::empty(),
            k: Weight::simple(rank, i).neg(),
            e: FreeWord::from_letters(&[i]),
        };
        let mut out = UElt::zero(rank);
        out.add_term(term, -RatFuncQ::one());
        return out;
    }
    let m = -datum.cartan(i, j);
    let di = datum.symmetrizer(i);
    let mut out = UElt::zero(rank);
    for r in 0..=m {
        let s = m - r;
        let mut letters = vec![i; r as usize];
        letters.push(j);
        letters.extend(std::iter::repeat(i).take(s as usize));
        let term = UTerm {
            f: FreeWord::from_letters(&letters),
            k: Weight::zero(rank),
            e: FreeWord::empty(),
        };
        let fact = &q_factorial(s, di).unwrap() * &q_factorial(r, di).unwrap();
        let mut c = RatFuncQ::q_pow(di * r)
            .checked_div(&fact)
            .expect("factorials are nonzero");
        if r % 2 == 1 {
            c = -c;
        }
        out.add_term(term, c);
    }
    out
}

/// Applies `T_w = T_(i1) ... T_(il)` for the word `w = s_(i1) ... s_(il)`;
/// the rightmost letter acts first, matching
/// [`RootDatum::weyl_apply`].
pub fn lusztig_t_word(datum: &RootDatum, word: &[usize], x: &UElt) -> UElt {
    let mut acc = x.clone();
    for &i in word.iter().rev() {
        acc = lusztig_t(datum, i, &acc);
    }
    acc
}

/// Computes `T_w(E_j)` as a positive-part element.
///
/// Defined whenever every suffix of the word keeps `alpha_j` in the
/// positive cone (guaranteed when the word is reduced for the longest
/// element of a subdiagram not containing `j`).  The result is
/// canonicalized before the purity check so that relation-ideal artifacts
/// cannot masquerade as mixed terms.
///
/// # Errors
/// [`UFullError::NotInUPlus`] when the suffix condition fails.
pub fn t_word_on_e(bases: &WeightBases, word: &[usize], j: usize) -> Result<UPlusElt, UFullError> {
    let datum = bases.datum();
    let alpha_j = Weight::simple(datum.rank(), j);
    for start in (0..word.len()).rev() {
        if !datum.weyl_apply(&word[start..], &alpha_j).is_nonnegative() {
            return Err(UFullError::NotInUPlus { j });
        }
    }
    let image = lusztig_t_word(datum, word, &UElt::e_gen(datum.rank(), j));
    let canonical = image.canonicalize(bases);
    canonical
        .as_uplus()
        .map(|x| bases.project(&x))
        .ok_or(UFullError::NotInUPlus { j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_expression;
    use crate::uplus::ComplementOrder;
    use std::sync::Arc;

    fn rf(s: &str) -> RatFuncQ {
        parse_expression(s).unwrap()
    }

    fn setup(name: &str) -> (Arc<RootDatum>, WeightBases) {
        let datum = Arc::new(RootDatum::from_name(name).unwrap());
        let bases = WeightBases::new(datum.clone(), ComplementOrder::Lex);
        (datum, bases)
    }

    fn commutator(datum: &RootDatum, a: &UElt, b: &UElt) -> UElt {
        a.mul(b, datum, None).sub(&b.mul(a, datum, None))
    }

    #[test]
    fn defining_relations_hold_in_triangular_form() {
        let (a2, _) = setup("A2");
        let e1 = UElt::e_gen(2, 0);
        let f1 = UElt::f_gen(2, 0);
        let f2 = UElt::f_gen(2, 1);
        // [E_1, F_1] = (K_1 - K_1^-1)/(q - q^-1).
        let lhs = commutator(&a2, &e1, &f1);
        let coef = rf("1/(q - q^-1)");
        let mut rhs = UElt::k_of_weight(Weight(vec![1, 0])).scale(&coef);
        rhs = rhs.sub(&UElt::k_of_weight(Weight(vec![-1, 0])).scale(&coef));
        assert_eq!(lhs, rhs);
        // [E_1, F_2] = 0.
        assert!(commutator(&a2, &e1, &f2).is_zero());
        // K_beta E_1 K_beta^-1 = q^((beta, alpha_1)) E_1.
        let beta = Weight(vec![2, -1]);
        let k = UElt::k_of_weight(beta.clone());
        let kinv = UElt::k_of_weight(beta.neg());
        let conj = k.mul(&e1, &a2, None).mul(&kinv, &a2, None);
        let pairing = a2.pair_simple(0, &beta);
        assert_eq!(conj, e1.scale(&RatFuncQ::q_pow(pairing)));
    }

    #[test]
    fn straightening_matches_the_derivation_commutator() {
        // x F_j - F_j x = (r_j(x) K_j - K_j^-1 jr(x)) / (q_j - q_j^-1) for
        // homogeneous x, on both a simply-laced and a two-length datum.
        for name in ["A2", "B2"] {
            let (datum, _) = setup(name);
            let rank = datum.rank();
            let x_plus = UPlusElt::from_terms([
                (FreeWord::from_letters(&[0, 1, 0]), rf("q^2 - 1")),
                (FreeWord::from_letters(&[0, 0, 1]), rf("q^-3")),
                (FreeWord::from_letters(&[1, 0, 0]), rf("7")),
            ]);
            let x = UElt::from_uplus(rank, &x_plus);
            for j in 0..rank {
                let fj = UElt::f_gen(rank, j);
                let lhs = commutator(&datum, &x, &fj);
                let dj = datum.symmetrizer(j);
                let coef = (&RatFuncQ::q_pow(dj) - &RatFuncQ::q_pow(-dj))
                    .inv()
                    .unwrap();
                let kj = UElt::k_of_weight(Weight::simple(rank, j));
                let kj_inv = UElt::k_of_weight(Weight::simple(rank, j).neg());
                let rhs = UElt::from_uplus(rank, &x_plus.skew_r(&datum, j))
                    .mul(&kj, &datum, None)
                    .sub(&kj_inv.mul(
                        &UElt::from_uplus(rank, &x_plus.skew_ir(&datum, j)),
                        &datum,
                        None,
                    ))
                    .scale(&coef);
                assert_eq!(lhs, rhs, "{name}, j = {j}");
            }
        }
    }

    #[test]
    fn multiplication_is_associative_across_triangular_factors() {
        let (b2, _) = setup("B2");
        let x = UElt::f_gen(2, 1).mul(&UElt::e_gen(2, 0), &b2, None);
        let y = UElt::e_gen(2, 0)
            .mul(&UElt::e_gen(2, 1), &b2, None)
            .add(&UElt::k_of_weight(Weight(vec![1, -1])).scale(&rf("q/(q+1)")));
        let z = UElt::f_gen(2, 0)
            .mul(&UElt::f_gen(2, 1), &b2, None)
            .add(&UElt::e_gen(2, 1));
        let left = x.mul(&y, &b2, None).mul(&z, &b2, None);
        let right = x.mul(&y.mul(&z, &b2, None), &b2, None);
        assert_eq!(left, right);
    }

    #[test]
    fn bar_is_an_involutive_algebra_homomorphism() {
        let (a2, _) = setup("A2");
        let x = UElt::e_gen(2, 0)
            .mul(&UElt::f_gen(2, 1), &a2, None)
            .scale(&rf("q^2"))
            .add(&UElt::k_of_weight(Weight(vec![1, 1])));
        let y = UElt::f_gen(2, 0)
            .mul(&UElt::e_gen(2, 0), &a2, None)
            .scale(&rf("1/(q-1)"));
        assert_eq!(x.bar().bar(), x);
        assert_eq!(
            x.mul(&y, &a2, None).bar(),
            x.bar().mul(&y.bar(), &a2, None),
            "bar respects straightened products"
        );
    }

    #[test]
    fn truncated_products_agree_with_truncating_full_products() {
        let (a1, _) = setup("A1");
        // A coideal-shaped element times a partial exponential-like series.
        let mut b = UElt::f_gen(1, 0);
        let twist = UElt::from_uplus(1, &UPlusElt::generator(0))
            .mul(&UElt::k_of_weight(Weight(vec![-1])), &a1, None)
            .scale(&rf("q^-1"));
        b = b.sub(&twist);
        let mut series = UElt::one(1);
        for (k, c) in [(2usize, rf("(q^2-1)/(q^2+1)")), (4, rf("q^3 - q"))] {
            let word = FreeWord::from_letters(&vec![0; k]);
            series = series.add(&UElt::from_uplus(1, &UPlusElt::from_terms([(word, c)])));
        }
        for n in 0..=5 {
            let full = b.mul(&series, &a1, None).retain_e_height(n);
            let truncated = b.mul(&series, &a1, Some(n));
            assert_eq!(full, truncated, "cutoff {n}");
            let full_rl = series.mul(&b, &a1, None).retain_e_height(n);
            let truncated_rl = series.mul(&b, &a1, Some(n));
            assert_eq!(full_rl, truncated_rl, "cutoff {n}, reversed");
        }
    }

    #[test]
    fn canonicalize_reduces_both_word_sides() {
        let (a2, bases) = setup("A2");
        // The lowering-side Serre combination vanishes canonically.
        let serre_f = UElt::from_uminus_words(2, &crate::uplus::serre_element(&a2, 0, 1));
        assert!(serre_f.canonicalize(&bases).is_zero());
        let serre_e = UElt::from_uplus(2, &crate::uplus::serre_element(&a2, 1, 0));
        assert!(serre_e.canonicalize(&bases).is_zero());
        // Sandwiching between K's does not disturb the reduction.
        let k = UElt::k_of_weight(Weight(vec![1, -1]));
        let x = k.mul(&serre_e, &a2, None).mul(&k, &a2, None);
        assert!(x.canonicalize(&bases).is_zero());
        assert!(serre_e.eq_mod(&UElt::zero(2), &bases));
    }

    #[test]
    fn lusztig_t_pinned_images() {
        let (a2, _) = setup("A2");
        // T_1(E_2) = E_1 E_2 - q^-1 E_2 E_1, the standard root vector of
        // weight s_1(a_2) = a_1 + a_2.
        let img = lusztig_t(&a2, 0, &UElt::e_gen(2, 1));
        let expected = UElt::from_uplus(
            2,
            &UPlusElt::from_terms([
                (FreeWord::from_letters(&[0, 1]), rf("1")),
                (FreeWord::from_letters(&[1, 0]), rf("-q^-1")),
            ]),
        );
        assert_eq!(img, expected);
        // T_1(E_1) = -F_1 K_1 straightens to the stored triangular term.
        let img = lusztig_t(&a2, 0, &UElt::e_gen(2, 0));
        let mut expected = UElt::zero(2);
        expected.add_term(
            UTerm {
                f: FreeWord::from_letters(&[0]),
                k: Weight(vec![1, 0]),
                e: FreeWord::empty(),
            },
            rf("-1"),
        );
        assert_eq!(img, expected);
        // T_1(K_(a1)) = K_(s1 a1) = K_(-a1).
        let img = lusztig_t(&a2, 0, &UElt::k_of_weight(Weight(vec![1, 0])));
        assert_eq!(img, UElt::k_of_weight(Weight(vec![-1, 0])));
    }

    #[test]
    fn lusztig_t_is_an_algebra_map() {
        let (b2, _) = setup("B2");
        let x = UElt::e_gen(2, 1).mul(&UElt::f_gen(2, 0), &b2, None);
        let y = UElt::e_gen(2, 0).add(&UElt::k_of_weight(Weight(vec![0, 1])));
        for i in 0..2 {
            let lhs = lusztig_t(&b2, i, &x.mul(&y, &b2, None));
            let rhs = lusztig_t(&b2, i, &x).mul(&lusztig_t(&b2, i, &y), &b2, None);
            assert_eq!(lhs, rhs, "T_{i} multiplicativity");
        }
    }

    #[test]
    fn lusztig_t_respects_the_serre_quotient() {
        // T_i applied to an embedded Serre relation must land in the
        // relation ideal again; this pins the divided-power exponent signs
        // against the rank-one images.
        for name in ["A2", "B2"] {
            let (datum, bases) = setup(name);
            for i in 0..2 {
                for (a, b) in [(0, 1), (1, 0)] {
                    let serre = UElt::from_uplus(2, &crate::uplus::serre_element(&datum, a, b));
                    let img = lusztig_t(&datum, i, &serre);
                    assert!(
                        img.canonicalize(&bases).is_zero(),
                        "{name}: T_{i} of the ({a},{b}) relation escapes the ideal"
                    );
                }
            }
        }
    }

    #[test]
    fn braid_relations_hold_on_generators() {
        // A2: T_1 T_2 T_1 = T_2 T_1 T_2 on every generator.
        let (a2, _) = setup("A2");
        let gens = |rank: usize| {
            let mut v = Vec::new();
            for i in 0..rank {
                v.push(UElt::e_gen(rank, i));
                v.push(UElt::f_gen(rank, i));
                v.push(UElt::k_of_weight(Weight::simple(rank, i)));
            }
            v
        };
        for g in gens(2) {
            let lhs = lusztig_t_word(&a2, &[0, 1, 0], &g);
            let rhs = lusztig_t_word(&a2, &[1, 0, 1], &g);
            assert_eq!(lhs, rhs, "A2 braid on {g}");
        }
        // B2: T_1 T_2 T_1 T_2 = T_2 T_1 T_2 T_1.
        let (b2, _) = setup("B2");
        for g in gens(2) {
            let lhs = lusztig_t_word(&b2, &[0, 1, 0, 1], &g);
            let rhs = lusztig_t_word(&b2, &[1, 0, 1, 0], &g);
            assert_eq!(lhs, rhs, "B2 braid on {g}");
        }
    }

    #[test]
    fn t_word_on_e_is_reduced_word_independent() {
        // In A3 with the A2 subdiagram on the first two nodes, both reduced
        // words for the subdiagram's longest element give the same image of
        // the outside generator.
        let (a3, bases) = setup("A3");
        let img1 = t_word_on_e(&bases, &[0, 1, 0], 2).unwrap();
        let img2 = t_word_on_e(&bases, &[1, 0, 1], 2).unwrap();
        assert_eq!(img1, img2);
        assert_eq!(img1.homogeneous_weight(3), Some(Weight(vec![1, 1, 1])));
        let _ = a3;
    }

    #[test]
    fn t_word_on_e_rejects_negative_images() {
        let (_, bases) = setup("A2");
        assert_eq!(
            t_word_on_e(&bases, &[0], 0),
            Err(UFullError::NotInUPlus { j: 0 })
        );
        // But the neighbor stays positive under s_1.
        let ok = t_word_on_e(&bases, &[0], 1).unwrap();
        assert_eq!(ok.homogeneous_weight(2), Some(Weight(vec![1, 1])));
    }
}
