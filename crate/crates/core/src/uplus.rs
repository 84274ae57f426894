//! The positive part `U^+` of the quantized enveloping algebra.
//!
//! Elements are kept in *free* coordinates: formal `Q(q)`-combinations of
//! words in the generators `E_i`.  The algebra relations enter through a
//! per-weight subspace of defining relations, computed inductively as the
//! joint kernel of the skew derivations `ir` (an element of the free
//! weight space lies in the relation subspace exactly when every `ir`
//! lands in the relation subspace one step down).  Equality in `U^+` is
//! equality of free coordinates modulo that subspace, and a deterministic
//! complement of monomial words gives each weight space a working basis.
//!
//! [`WeightBases`] memoizes the per-weight data for one root datum; weight
//! spaces at the same height can be requested from parallel threads, and
//! each is computed exactly once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::linalg;
use crate::root::{RootDatum, Weight};
use crate::scalar::{q_binomial, RatFuncQ};

// ---------------------------------------------------------------------------
// Words and free elements
// ---------------------------------------------------------------------------

/// A word in the generators `E_i`, stored as node indices.
///
/// Within one weight space all words have equal length, so the derived
/// ordering (shortlex on the underlying vector) restricts to plain
/// lexicographic order there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(Vec<u8>);

impl FreeWord {
    /// The empty word (the identity of `U^+`).
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    /// Builds a word from node indices.
    ///
    /// # Panics
    /// Panics if a letter exceeds 255; ranks that large are far outside
    /// this crate's scope.
    pub fn from_letters(letters: &[usize]) -> Self {
        FreeWord(
            letters
                .iter()
                .map(|&l| u8::try_from(l).expect("node index > 255"))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    /// The weight of the word: coordinate `i` counts letters `i`.
    pub fn weight(&self, rank: usize) -> Weight {
        let mut w = vec![0i64; rank];
        for &l in &self.0 {
            w[l as usize] += 1;
        }
        Weight(w)
    }

    /// Concatenation, the free product.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        FreeWord(v)
    }

    /// The word with position `p` removed.
    fn drop_at(&self, p: usize) -> FreeWord {
        let mut v = self.0.clone();
        v.remove(p);
        FreeWord(v)
    }

    fn reversed(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().copied().collect())
    }

    fn relabeled(&self, perm: &[usize]) -> FreeWord {
        FreeWord(self.0.iter().map(|&l| perm[l as usize] as u8).collect())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "E{}", l + 1)?;
        }
        Ok(())
    }
}

/// An element of `U^+` in free coordinates: a finite `Q(q)`-combination of
/// words, not necessarily homogeneous.  Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPlusElt {
    terms: BTreeMap<FreeWord, RatFuncQ>,
}

impl UPlusElt {
    pub fn zero() -> Self {
        UPlusElt::default()
    }

    /// The identity element (the empty word).
    pub fn one() -> Self {
        UPlusElt::from_word(FreeWord::empty())
    }

    /// The generator `E_i`.
    pub fn generator(i: usize) -> Self {
        UPlusElt::from_word(FreeWord::from_letters(&[i]))
    }

    pub fn from_word(w: FreeWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, RatFuncQ::one());
        UPlusElt { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (FreeWord, RatFuncQ)>) -> Self {
        let mut out = UPlusElt::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, &RatFuncQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &FreeWord) -> RatFuncQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Adds `c * w` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, w: FreeWord, c: RatFuncQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add(&self, other: &UPlusElt) -> UPlusElt {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UPlusElt) -> UPlusElt {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> UPlusElt {
        UPlusElt {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &RatFuncQ) -> UPlusElt {
        if c.is_zero() {
            return UPlusElt::zero();
        }
        UPlusElt {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// The free (concatenation) product; relations are imposed only when
    /// elements are compared or projected through a [`WeightBases`].
    pub fn mul(&self, other: &UPlusElt) -> UPlusElt {
        let mut out = UPlusElt::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// The bar involution: fixes every word, conjugates coefficients by
    /// `q -> q^-1`.
    pub fn bar(&self) -> UPlusElt {
        UPlusElt {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.bar()))
                .collect(),
        }
    }

    /// The antiautomorphism fixing each generator: reverses words, fixes
    /// coefficients.
    pub fn sigma(&self) -> UPlusElt {
        UPlusElt::from_terms(self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())))
    }

    /// Applies a node permutation to every letter (a diagram automorphism).
    pub fn relabel(&self, perm: &[usize]) -> UPlusElt {
        UPlusElt::from_terms(
            self.terms
                .iter()
                .map(|(w, c)| (w.relabeled(perm), c.clone())),
        )
    }

    /// Splits into homogeneous components keyed by weight.
    pub fn components(&self, rank: usize) -> BTreeMap<Weight, UPlusElt> {
        let mut out: BTreeMap<Weight, UPlusElt> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.weight(rank))
                .or_default()
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// The weight of a homogeneous element, or `None` for zero or mixed
    /// weights.
    pub fn homogeneous_weight(&self, rank: usize) -> Option<Weight> {
        let mut it = self.terms.keys();
        let first = it.next()?.weight(rank);
        if it.all(|w| w.weight(rank) == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Largest word length appearing (0 for zero).
    pub fn max_height(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// The skew derivation that removes a letter `i` from the right: on a
    /// word it deletes each occurrence of `i` with the twist
    /// `q^((alpha_i, weight of the suffix after it))`.
    pub fn skew_r(&self, datum: &RootDatum, i: usize) -> UPlusElt {
        let mut out = UPlusElt::zero();
        for (w, c) in &self.terms {
            // Scan right-to-left, tracking (alpha_i, suffix weight) as a
            // running integer exponent.
            let letters: Vec<usize> = w.letters().collect();
            let mut exp = 0i64;
            for p in (0..letters.len()).rev() {
                if letters[p] == i {
                    out.add_term(w.drop_at(p), &RatFuncQ::q_pow(exp) * c);
                }
                exp += datum.pair_simple(i, &Weight::simple(datum.rank(), letters[p]));
            }
        }
        out
    }

    /// The skew derivation that removes a letter `i` from the left: deletes
    /// each occurrence of `i` with the twist
    /// `q^((alpha_i, weight of the prefix before it))`.
    pub fn skew_ir(&self, datum: &RootDatum, i: usize) -> UPlusElt {
        let mut out = UPlusElt::zero();
        for (w, c) in &self.terms {
            let letters: Vec<usize> = w.letters().collect();
            let mut exp = 0i64;
            for (p, &l) in letters.iter().enumerate() {
                if l == i {
                    out.add_term(w.drop_at(p), &RatFuncQ::q_pow(exp) * c);
                }
                exp += datum.pair_simple(i, &Weight::simple(datum.rank(), l));
            }
        }
        out
    }
}

impl fmt::Display for UPlusElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {w}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Weight space bases
// ---------------------------------------------------------------------------

/// Which end of the lexicographic word order the complement-selection
/// greed works from.  Both orders give bases of the same quotient; the
/// choice only changes which monomials represent it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplementOrder {
    /// Prefer lexicographically small words (the default).
    #[default]
    Lex,
    /// Prefer lexicographically large words.
    RevLex,
}

/// Basis data for one weight space: the words, the defining-relation
/// subspace in echelon form, and the monomial complement that descends to
/// a basis of the quotient.
#[derive(Debug)]
pub struct WeightSpaceBasis {
    weight: Weight,
    /// All words of this weight, sorted lexicographically.
    words: Vec<FreeWord>,
    index: HashMap<FreeWord, usize>,
    /// Word indices whose classes form a basis of the weight space.
    complement: Vec<usize>,
    /// Echelonized relation vectors keyed by their unit ("free") word
    /// index; the stored support lies on complement indices only.
    relations: BTreeMap<usize, Vec<(usize, RatFuncQ)>>,
}

impl WeightSpaceBasis {
    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// Dimension of the weight space of `U^+`.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Dimension of the relation subspace inside the free weight space.
    pub fn relation_dim(&self) -> usize {
        self.words.len() - self.complement.len()
    }

    pub fn words(&self) -> &[FreeWord] {
        &self.words
    }

    /// The selected monomial basis of the quotient, as indices into
    /// [`Self::words`], ascending.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn complement_words(&self) -> impl Iterator<Item = &FreeWord> {
        self.complement.iter().map(|&i| &self.words[i])
    }

    /// A basis of the relation subspace, materialized as elements.
    pub fn relation_elements(&self) -> Vec<UPlusElt> {
        self.relations
            .iter()
            .map(|(&free, support)| {
                let mut e = UPlusElt::from_word(self.words[free].clone());
                for (col, c) in support {
                    e.add_term(self.words[*col].clone(), c.clone());
                }
                e
            })
            .collect()
    }

    /// Reduces dense free coordinates modulo the relation subspace in
    /// place; afterwards only complement indices can be nonzero.
    pub fn reduce_dense(&self, coords: &mut [RatFuncQ]) {
        debug_assert_eq!(coords.len(), self.words.len());
        for (&free, support) in &self.relations {
            if coords[free].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut coords[free]);
            for (col, v) in support {
                let delta = &c * v;
                coords[*col] -= &delta;
            }
        }
    }

    fn dense_coords(&self, elt: &UPlusElt) -> Vec<RatFuncQ> {
        let mut coords = vec![RatFuncQ::zero(); self.words.len()];
        for (w, c) in elt.terms() {
            let &i = self
                .index
                .get(w)
                .expect("word has the wrong weight for this basis");
            coords[i] = c.clone();
        }
        coords
    }

    /// Coordinates of (the class of) a homogeneous element over the
    /// complement basis.
    pub fn complement_coords(&self, elt: &UPlusElt) -> Vec<RatFuncQ> {
        let mut coords = self.dense_coords(elt);
        self.reduce_dense(&mut coords);
        self.complement.iter().map(|&i| coords[i].clone()).collect()
    }

    /// Rebuilds an element from complement coordinates.
    pub fn from_complement_coords(&self, coords: &[RatFuncQ]) -> UPlusElt {
        debug_assert_eq!(coords.len(), self.complement.len());
        UPlusElt::from_terms(
            self.complement
                .iter()
                .zip(coords)
                .map(|(&i, c)| (self.words[i].clone(), c.clone())),
        )
    }
}

/// Memoized per-weight basis data for one root datum.
///
/// Cheap to share behind an [`Arc`]; requests for distinct weights may run
/// concurrently and each weight space is computed exactly once.
pub struct WeightBases {
    datum: Arc<RootDatum>,
    order: ComplementOrder,
    cache: RwLock<HashMap<Weight, Arc<OnceLock<Arc<WeightSpaceBasis>>>>>,
}

impl WeightBases {
    pub fn new(datum: Arc<RootDatum>, order: ComplementOrder) -> Self {
        WeightBases {
            datum,
            order,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn order(&self) -> ComplementOrder {
        self.order
    }

    /// The basis data at `mu`, computing and caching it (and everything
    /// below it) on first use.
    ///
    /// # Panics
    /// Panics if `mu` has a negative coordinate or the wrong rank.
    pub fn basis(&self, mu: &Weight) -> Arc<WeightSpaceBasis> {
        assert_eq!(mu.rank(), self.datum.rank(), "weight rank mismatch");
        assert!(mu.is_nonnegative(), "weight {mu} outside the positive cone");
        let cell = {
            let read = self.cache.read().unwrap();
            read.get(mu).cloned()
        };
        let cell = cell.unwrap_or_else(|| {
            let mut write = self.cache.write().unwrap();
            write
                .entry(mu.clone())
                .or_insert_with(|| Arc::new(OnceLock::new()))
                .clone()
        });
        cell.get_or_init(|| Arc::new(self.compute_basis(mu)))
            .clone()
    }

    /// Dimension of the weight space at `mu`.
    pub fn dim(&self, mu: &Weight) -> usize {
        self.basis(mu).dim()
    }

    /// Canonical representative: reduces every homogeneous component
    /// modulo its relation subspace, leaving complement words only.
    pub fn project(&self, elt: &UPlusElt) -> UPlusElt {
        let mut out = UPlusElt::zero();
        for (mu, comp) in elt.components(self.datum.rank()) {
            let basis = self.basis(&mu);
            let mut coords = basis.dense_coords(&comp);
            basis.reduce_dense(&mut coords);
            for (i, c) in coords.into_iter().enumerate() {
                out.add_term(basis.words[i].clone(), c);
            }
        }
        out
    }

    /// Whether an element lies in the relation ideal (is zero in `U^+`).
    pub fn is_zero_mod(&self, elt: &UPlusElt) -> bool {
        self.project(elt).is_zero()
    }

    /// Equality in `U^+`.
    pub fn eq_mod(&self, a: &UPlusElt, b: &UPlusElt) -> bool {
        self.is_zero_mod(&a.sub(b))
    }

    /// The matrix of the projected skew derivation over complement
    /// coordinates: columns are complement words of `mu`, rows complement
    /// coordinates at `mu - alpha_i`.  `left` selects the prefix-twisted
    /// derivation (`skew_ir`), otherwise `skew_r`.
    pub fn derivation_matrix(&self, mu: &Weight, i: usize, left: bool) -> Vec<Vec<RatFuncQ>> {
        let source = self.basis(mu);
        let mut target_mu = mu.clone();
        target_mu.0[i] -= 1;
        assert!(
            target_mu.is_nonnegative(),
            "derivation target outside the positive cone"
        );
        let target = self.basis(&target_mu);
        let mut rows = vec![vec![RatFuncQ::zero(); source.dim()]; target.dim()];
        for (col, w) in source.complement_words().enumerate() {
            let elt = UPlusElt::from_word(w.clone());
            let img = if left {
                elt.skew_ir(&self.datum, i)
            } else {
                elt.skew_r(&self.datum, i)
            };
            for (slot, c) in target.complement_coords(&img).into_iter().enumerate() {
                rows[slot][col] = c;
            }
        }
        rows
    }

    fn compute_basis(&self, mu: &Weight) -> WeightSpaceBasis {
        let rank = self.datum.rank();
        let words = enumerate_words(mu);
        let index: HashMap<FreeWord, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        if mu.height() == 0 {
            // The empty word spans U^+_0 with no relations.
            return WeightSpaceBasis {
                weight: mu.clone(),
                words,
                index,
                complement: vec![0],
                relations: BTreeMap::new(),
            };
        }
        // Stack the projected left derivations into one constraint matrix;
        // its kernel is the relation subspace, its pivot columns the
        // complement.
        let mut rows: Vec<Vec<RatFuncQ>> = Vec::new();
        for i in 0..rank {
            if mu.0[i] == 0 {
                continue;
            }
            let mut below = mu.clone();
            below.0[i] -= 1;
            let target = self.basis(&below);
            let mut block = vec![vec![RatFuncQ::zero(); words.len()]; target.dim()];
            for (col, w) in words.iter().enumerate() {
                let img = UPlusElt::from_word(w.clone()).skew_ir(&self.datum, i);
                for (slot, c) in target.complement_coords(&img).into_iter().enumerate() {
                    block[slot][col] = c;
                }
            }
            rows.extend(block);
        }
        let col_order: Vec<usize> = match self.order {
            ComplementOrder::Lex => (0..words.len()).collect(),
            ComplementOrder::RevLex => (0..words.len()).rev().collect(),
        };
        let (complement, kernel) = linalg::kernel_basis(rows, words.len(), &col_order);
        let relations: BTreeMap<usize, Vec<(usize, RatFuncQ)>> = kernel
            .into_iter()
            .map(|(free, vec)| {
                let support: Vec<(usize, RatFuncQ)> =
                    vec.into_iter().filter(|&(col, _)| col != free).collect();
                (free, support)
            })
            .collect();
        WeightSpaceBasis {
            weight: mu.clone(),
            words,
            index,
            complement,
            relations,
        }
    }
}

/// All words of the given weight in lexicographic order.
///
/// # Panics
/// Panics when the count exceeds an internal guard (about one million);
/// weights that large are outside the intended working range.
pub fn enumerate_words(mu: &Weight) -> Vec<FreeWord> {
    assert!(mu.is_nonnegative());
    let mut count: u128 = 1;
    let mut total = 0u128;
    for &c in &mu.0 {
        for k in 1..=c as u128 {
            total += 1;
            count = count * total / k;
        }
    }
    assert!(count <= 1 << 20, "weight space at {mu} has {count} words");
    let mut out = Vec::with_capacity(count as usize);
    let mut counts: Vec<i64> = mu.0.clone();
    let mut prefix = Vec::with_capacity(mu.height() as usize);
    fn rec(counts: &mut [i64], prefix: &mut Vec<u8>, remaining: i64, out: &mut Vec<FreeWord>) {
        if remaining == 0 {
            out.push(FreeWord(prefix.clone()));
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                prefix.push(l as u8);
                rec(counts, prefix, remaining - 1, out);
                prefix.pop();
                counts[l] += 1;
            }
        }
    }
    rec(&mut counts, &mut prefix, mu.height(), &mut out);
    out
}

/// Number of ways to write `mu` as a multiset of the given positive roots:
/// the dimension every weight space of `U^+` must have for a finite-type
/// datum.  Independent of all basis machinery by construction.
pub fn kostant_dim(positive_roots: &[Weight], mu: &Weight) -> u64 {
    fn rec(roots: &[Weight], mu: &Weight) -> u64 {
        if mu.is_zero() {
            return 1;
        }
        let Some((beta, rest)) = roots.split_first() else {
            return 0;
        };
        let mut acc = rec(rest, mu);
        let mut remaining = mu.clone();
        loop {
            remaining = remaining.sub(beta);
            if !remaining.is_nonnegative() {
                break;
            }
            acc += rec(rest, &remaining);
        }
        acc
    }
    rec(positive_roots, mu)
}

/// The quantum Serre element
/// `sum_k (-1)^k [1 - a_ij choose k] E_i^(1-a_ij-k) E_j E_i^k` (Gaussian
/// binomial at `q^(d_i)`), which must lie in the relation subspace at
/// `(1 - a_ij) alpha_i + alpha_j`.
pub fn serre_element(datum: &RootDatum, i: usize, j: usize) -> UPlusElt {
    assert_ne!(i, j);
    let m = 1 - datum.cartan(i, j);
    let mut out = UPlusElt::zero();
    for k in 0..=m {
        let mut letters = vec![i; (m - k) as usize];
        letters.push(j);
        letters.extend(std::iter::repeat(i).take(k as usize));
        let mut c = q_binomial(m, k, datum.symmetrizer(i)).expect("0 <= k <= m");
        if k % 2 == 1 {
            c = -c;
        }
        out.add_term(FreeWord::from_letters(&letters), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_expression, q_int};

    fn rf(s: &str) -> RatFuncQ {
        parse_expression(s).unwrap()
    }

    fn fw(letters: &[usize]) -> FreeWord {
        FreeWord::from_letters(letters)
    }

    fn a2_bases() -> WeightBases {
        WeightBases::new(
            Arc::new(RootDatum::from_name("A2").unwrap()),
            ComplementOrder::Lex,
        )
    }

    #[test]
    fn word_enumeration_is_lexicographic_and_complete() {
        let words = enumerate_words(&Weight(vec![2, 1]));
        assert_eq!(words, vec![fw(&[0, 0, 1]), fw(&[0, 1, 0]), fw(&[1, 0, 0])]);
        assert_eq!(
            enumerate_words(&Weight(vec![0, 0])),
            vec![FreeWord::empty()]
        );
        assert_eq!(enumerate_words(&Weight(vec![2, 2])).len(), 6);
    }

    #[test]
    fn derivations_match_hand_expansions() {
        let a2 = RootDatum::from_name("A2").unwrap();
        let e12 = UPlusElt::from_word(fw(&[0, 1]));
        // Right derivation: delete with the suffix twist.
        assert_eq!(
            e12.skew_r(&a2, 0),
            UPlusElt::from_terms([(fw(&[1]), rf("q^-1"))])
        );
        assert_eq!(
            e12.skew_r(&a2, 1),
            UPlusElt::from_terms([(fw(&[0]), rf("1"))])
        );
        // Left derivation: delete with the prefix twist.
        assert_eq!(
            e12.skew_ir(&a2, 0),
            UPlusElt::from_terms([(fw(&[1]), rf("1"))])
        );
        assert_eq!(
            e12.skew_ir(&a2, 1),
            UPlusElt::from_terms([(fw(&[0]), rf("q^-1"))])
        );
        // Three letters: ir_1(E1 E2 E1) = E2 E1 + q E1 E2.
        let e121 = UPlusElt::from_word(fw(&[0, 1, 0]));
        assert_eq!(
            e121.skew_ir(&a2, 0),
            UPlusElt::from_terms([(fw(&[1, 0]), rf("1")), (fw(&[0, 1]), rf("q"))])
        );
        // Generators: both derivations are Kronecker deltas.
        let e1 = UPlusElt::generator(0);
        assert_eq!(e1.skew_r(&a2, 0), UPlusElt::one());
        assert!(e1.skew_r(&a2, 1).is_zero());
        // Rank one: r(E^2) = (q^2 + 1) E.
        let a1 = RootDatum::from_name("A1").unwrap();
        let ee = UPlusElt::from_word(fw(&[0, 0]));
        assert_eq!(
            ee.skew_r(&a1, 0),
            UPlusElt::from_terms([(fw(&[0]), rf("q^2 + 1"))])
        );
        assert_eq!(
            ee.skew_ir(&a1, 0),
            UPlusElt::from_terms([(fw(&[0]), rf("q^2 + 1"))])
        );
    }

    #[test]
    fn derivations_satisfy_the_product_twists() {
        // r_i(xy) = q^((alpha_i, wt y)) r_i(x) y + x r_i(y) on random-ish
        // homogeneous pieces, and the mirrored rule for ir.
        let b2 = RootDatum::from_name("B2").unwrap();
        let x = UPlusElt::from_terms([(fw(&[0, 1]), rf("q")), (fw(&[1, 0]), rf("(q+1)/q"))]);
        let y = UPlusElt::from_terms([(fw(&[1, 1, 0]), rf("q^-2")), (fw(&[0, 1, 1]), rf("3"))]);
        let wy = Weight(vec![1, 2]);
        let wx = Weight(vec![1, 1]);
        for i in 0..2 {
            let lhs = x.mul(&y).skew_r(&b2, i);
            let twist = RatFuncQ::q_pow(b2.pair_simple(i, &wy));
            let rhs = x
                .skew_r(&b2, i)
                .scale(&twist)
                .mul(&y)
                .add(&x.mul(&y.skew_r(&b2, i)));
            assert_eq!(lhs, rhs, "skew_r product rule at i = {i}");
            let lhs = x.mul(&y).skew_ir(&b2, i);
            let twist = RatFuncQ::q_pow(b2.pair_simple(i, &wx));
            let rhs = x
                .skew_ir(&b2, i)
                .mul(&y)
                .add(&x.mul(&y.skew_ir(&b2, i)).scale(&twist));
            assert_eq!(lhs, rhs, "skew_ir product rule at i = {i}");
        }
    }

    #[test]
    fn left_and_right_derivations_commute() {
        let a3 = RootDatum::from_name("A3").unwrap();
        let x = UPlusElt::from_terms([
            (fw(&[0, 1, 2, 1]), rf("q^2")),
            (fw(&[1, 0, 1, 2]), rf("q - q^-1")),
        ]);
        for i in 0..3 {
            for j in 0..3 {
                let a = x.skew_r(&a3, i).skew_ir(&a3, j);
                let b = x.skew_ir(&a3, j).skew_r(&a3, i);
                assert_eq!(a, b, "(r_{i}, {j}r) commutation");
            }
        }
    }

    #[test]
    fn bar_conjugates_derivations_with_a_weight_twist() {
        // ir_i(bar x) = q^((alpha_i, mu - alpha_i)) bar(r_i(x)) for x of
        // weight mu.
        let b2 = RootDatum::from_name("B2").unwrap();
        let x = UPlusElt::from_terms([
            (fw(&[0, 1, 1]), rf("q^3 - 2")),
            (fw(&[1, 0, 1]), rf("1/(q+1)")),
        ]);
        let mu = Weight(vec![1, 2]);
        for i in 0..2 {
            let mut shifted = mu.clone();
            shifted.0[i] -= 1;
            let lhs = x.bar().skew_ir(&b2, i);
            let rhs = x
                .skew_r(&b2, i)
                .bar()
                .scale(&RatFuncQ::q_pow(b2.pair_simple(i, &shifted)));
            assert_eq!(lhs, rhs, "bar/derivation exchange at i = {i}");
        }
    }

    #[test]
    fn a2_relation_space_is_spanned_by_the_serre_element() {
        let bases = a2_bases();
        let mu = Weight(vec![2, 1]);
        let basis = bases.basis(&mu);
        assert_eq!(basis.relation_dim(), 1);
        assert_eq!(basis.dim(), 2);
        // The complement picks the lexicographically smallest words.
        let complement: Vec<FreeWord> = basis.complement_words().cloned().collect();
        assert_eq!(complement, vec![fw(&[0, 0, 1]), fw(&[0, 1, 0])]);
        // Serre element: E1^2 E2 - [2] E1 E2 E1 + E2 E1^2 is a relation.
        let serre = serre_element(bases.datum(), 0, 1);
        assert_eq!(serre.coeff(&fw(&[0, 1, 0])), -q_int(2, 1));
        assert!(bases.is_zero_mod(&serre));
        // And it spans: the stored relation basis is proportional to it.
        let rels = basis.relation_elements();
        assert_eq!(rels.len(), 1);
        let (w0, c0) = rels[0].terms().next().unwrap();
        let ratio = serre.coeff(w0).checked_div(c0).unwrap();
        assert_eq!(rels[0].scale(&ratio), serre);
    }

    #[test]
    fn projection_rewrites_onto_the_complement() {
        let bases = a2_bases();
        // E2 E1^2 = [2] E1 E2 E1 - E1^2 E2 modulo the Serre relation.
        let p = bases.project(&UPlusElt::from_word(fw(&[1, 0, 0])));
        let expected =
            UPlusElt::from_terms([(fw(&[0, 1, 0]), q_int(2, 1)), (fw(&[0, 0, 1]), rf("-1"))]);
        assert_eq!(p, expected);
        assert!(bases.eq_mod(&UPlusElt::from_word(fw(&[1, 0, 0])), &expected));
        // Projection is idempotent and linear over components.
        assert_eq!(bases.project(&p), p);
    }

    #[test]
    fn dimensions_match_the_multiset_oracle_on_a2_and_b2() {
        for name in ["A2", "B2"] {
            let datum = Arc::new(RootDatum::from_name(name).unwrap());
            let ftd = datum.finite_type_data(&[0, 1]).unwrap();
            let bases = WeightBases::new(datum.clone(), ComplementOrder::Lex);
            for a in 0..=4i64 {
                for b in 0..=4i64 {
                    if a + b == 0 || a + b > 6 {
                        continue;
                    }
                    let mu = Weight(vec![a, b]);
                    let expected = kostant_dim(&ftd.positive_roots, &mu);
                    assert_eq!(bases.dim(&mu) as u64, expected, "{name} weight {mu}");
                }
            }
        }
    }

    #[test]
    fn relation_subspace_is_stable_under_all_symmetries() {
        // Stability under both derivations, bar, and sigma at a weight
        // where all act nontrivially.
        let bases = a2_bases();
        let datum = bases.datum().clone();
        for mu in [Weight(vec![2, 1]), Weight(vec![2, 2])] {
            let basis = bases.basis(&mu);
            for rel in basis.relation_elements() {
                for i in 0..2 {
                    assert!(
                        bases.is_zero_mod(&rel.skew_r(&datum, i)),
                        "skew_r({i}) image of a relation at {mu}"
                    );
                    assert!(
                        bases.is_zero_mod(&rel.skew_ir(&datum, i)),
                        "skew_ir({i}) image of a relation at {mu}"
                    );
                }
                assert!(
                    bases.is_zero_mod(&rel.bar()),
                    "bar image of a relation at {mu}"
                );
                assert!(
                    bases.is_zero_mod(&rel.sigma()),
                    "sigma image of a relation at {mu}"
                );
            }
        }
    }

    #[test]
    fn revlex_complement_selects_the_mirror_basis() {
        let datum = Arc::new(RootDatum::from_name("A2").unwrap());
        let bases = WeightBases::new(datum, ComplementOrder::RevLex);
        let basis = bases.basis(&Weight(vec![2, 1]));
        let complement: Vec<FreeWord> = basis.complement_words().cloned().collect();
        assert_eq!(complement, vec![fw(&[0, 1, 0]), fw(&[1, 0, 0])]);
        assert_eq!(basis.dim(), 2);
    }

    #[test]
    fn multiset_oracle_pinned_counts() {
        let a2 = RootDatum::from_name("A2").unwrap();
        let roots = a2.finite_type_data(&[0, 1]).unwrap().positive_roots;
        assert_eq!(kostant_dim(&roots, &Weight(vec![1, 1])), 2);
        assert_eq!(kostant_dim(&roots, &Weight(vec![2, 1])), 2);
        assert_eq!(kostant_dim(&roots, &Weight(vec![2, 2])), 3);
        assert_eq!(kostant_dim(&roots, &Weight(vec![0, 0])), 1);
        assert_eq!(kostant_dim(&roots, &Weight(vec![5, 0])), 1);
        let b2 = RootDatum::from_name("B2").unwrap();
        let roots = b2.finite_type_data(&[0, 1]).unwrap().positive_roots;
        assert_eq!(kostant_dim(&roots, &Weight(vec![1, 2])), 3);
    }

    #[test]
    fn sigma_and_bar_are_involutive_homomorphism_like_maps() {
        let x = UPlusElt::from_terms([(fw(&[0, 1]), rf("q^2")), (fw(&[1]), rf("1/q"))]);
        let y = UPlusElt::from_terms([(fw(&[1, 0]), rf("q - 1"))]);
        assert_eq!(x.sigma().sigma(), x);
        assert_eq!(x.bar().bar(), x);
        // sigma is an antiautomorphism, bar a homomorphism, on free terms.
        assert_eq!(x.mul(&y).sigma(), y.sigma().mul(&x.sigma()));
        assert_eq!(x.mul(&y).bar(), x.bar().mul(&y.bar()));
    }

    #[test]
    fn components_split_mixed_elements() {
        let x = UPlusElt::from_terms([
            (fw(&[0]), rf("1")),
            (fw(&[0, 1]), rf("q")),
            (fw(&[1, 0]), rf("-q")),
        ]);
        let comps = x.components(2);
        assert_eq!(comps.len(), 2);
        assert!(x.homogeneous_weight(2).is_none());
        assert_eq!(
            comps[&Weight(vec![1, 1])].homogeneous_weight(2),
            Some(Weight(vec![1, 1]))
        );
    }
}
