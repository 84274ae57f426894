//! Root lattices of symmetrizable Kac-Moody algebras.
//!
//! A [`RootDatum`] is a symmetrizable generalized Cartan matrix together
//! with the minimal positive symmetrizers `d_i`, giving the bilinear form
//! `(alpha_i, alpha_j) = d_i a_ij` on the root lattice.  Weights are
//! integer coordinate vectors over the simple roots.  For a subset `X` of
//! nodes spanning a finite-type subdiagram, [`RootDatum::finite_type_data`]
//! produces the combinatorics the coideal construction needs: the positive
//! roots of the subsystem, a reduced word for its longest element `w_X`,
//! the weight `2 rho_X`, and the copairings `2 alpha_i(rho_X^vee)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from constructing or interrogating root data.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootError {
    /// The matrix is not a symmetrizable generalized Cartan matrix.
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    /// A named type string was not recognized.
    #[error("unknown Cartan type name: {0}")]
    UnknownName(String),
    /// An operation required a finite-type (sub)diagram and did not get one.
    #[error("subdiagram {0:?} is not of finite type")]
    NonFiniteType(Vec<usize>),
    /// A node index outside `0..rank`.
    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// An element of the root lattice, as integer coordinates over the simple
/// roots of a fixed [`RootDatum`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    /// The zero weight of the given rank.
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The simple root `alpha_i`.
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut w = vec![0; rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Sum of coordinates; the grading degree used for truncation.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Whether the weight lies in the nonnegative span of the simple roots.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| c * a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Combinatorial data of a finite-type subdiagram `X`, produced by
/// [`RootDatum::finite_type_data`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTypeData {
    /// The nodes of the subdiagram, sorted ascending.
    pub nodes: Vec<usize>,
    /// All positive roots supported on `X`, sorted.
    pub positive_roots: Vec<Weight>,
    /// A reduced word for the longest element `w_X`, letters acting
    /// right-to-left under [`RootDatum::weyl_apply`].
    pub longest_word: Vec<usize>,
    /// The sum of the positive roots, `2 rho_X`.
    pub sum_positive_roots: Weight,
    /// For every node `i` of the full diagram, the integer
    /// `2 alpha_i(rho_X^vee) = sum over beta in Phi_X^+ of 2(alpha_i, beta)/(beta, beta)`.
    pub copairings: Vec<i64>,
}

/// A symmetrizable generalized Cartan matrix with its minimal positive
/// symmetrizers, determining the bilinear form on the root lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    cartan: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl RootDatum {
    /// Validates a generalized Cartan matrix and finds the minimal positive
    /// symmetrizers, or checks the provided ones.
    ///
    /// # Errors
    /// [`RootError::InvalidCartan`] when the matrix is not square, has bad
    /// diagonal/off-diagonal entries, violates the zero-pattern symmetry,
    /// or is not symmetrizable (by the given or any positive `d`).
    pub fn new(cartan: Vec<Vec<i64>>, d: Option<Vec<i64>>) -> Result<Self, RootError> {
        let n = cartan.len();
        if n == 0 {
            return Err(RootError::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                return Err(RootError::InvalidCartan(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if row[i] != 2 {
                return Err(RootError::InvalidCartan(format!(
                    "diagonal entry a[{i}][{i}] != 2"
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if j != i && a > 0 {
                    return Err(RootError::InvalidCartan(format!(
                        "positive off-diagonal entry a[{i}][{j}] = {a}"
                    )));
                }
                if (a == 0) != (cartan[j][i] == 0) {
                    return Err(RootError::InvalidCartan(format!(
                        "zero pattern not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let d = match d {
            Some(d) => {
                if d.len() != n || d.iter().any(|&x| x <= 0) {
                    return Err(RootError::InvalidCartan(
                        "symmetrizer must be positive".into(),
                    ));
                }
                for i in 0..n {
                    for j in 0..n {
                        if d[i] * cartan[i][j] != d[j] * cartan[j][i] {
                            return Err(RootError::InvalidCartan(format!(
                                "d does not symmetrize the matrix at ({i}, {j})"
                            )));
                        }
                    }
                }
                d
            }
            None => minimal_symmetrizer(&cartan)
                .ok_or_else(|| RootError::InvalidCartan("matrix is not symmetrizable".into()))?,
        };
        Ok(RootDatum { cartan, d })
    }

    /// Builds a datum from a type name such as `"A3"`, `"B2"`, `"G2"`, or a
    /// product like `"A1xA1"`.
    ///
    /// Conventions for the two-length types: the *last* node is short, so
    /// `Bn` has `d = (2, ..., 2, 1)` and `G2` has `d = (3, 1)`.  `Cn` has
    /// the last node long.
    ///
    /// # Errors
    /// [`RootError::UnknownName`] for unrecognized names.
    pub fn from_name(name: &str) -> Result<Self, RootError> {
        let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
        for part in name.split('x') {
            blocks.push(
                named_cartan_block(part.trim())
                    .ok_or_else(|| RootError::UnknownName(name.to_string()))?,
            );
        }
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut cartan = vec![vec![0i64; n]; n];
        let mut off = 0;
        for b in &blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    cartan[off + i][off + j] = a;
                }
            }
            off += b.len();
        }
        RootDatum::new(cartan, None)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn symmetrizer(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    /// The bilinear form `(beta, gamma) = sum beta_i d_i a_ij gamma_j`.
    pub fn bilinear(&self, beta: &Weight, gamma: &Weight) -> i64 {
        debug_assert_eq!(beta.rank(), self.rank());
        debug_assert_eq!(gamma.rank(), self.rank());
        let mut acc = 0;
        for (i, &bi) in beta.0.iter().enumerate() {
            if bi == 0 {
                continue;
            }
            for (j, &gj) in gamma.0.iter().enumerate() {
                if gj == 0 {
                    continue;
                }
                acc += bi * self.d[i] * self.cartan[i][j] * gj;
            }
        }
        acc
    }

    /// `(alpha_i, beta)` without allocating the simple root.
    pub fn pair_simple(&self, i: usize, beta: &Weight) -> i64 {
        debug_assert_eq!(beta.rank(), self.rank());
        beta.0
            .iter()
            .enumerate()
            .map(|(j, &bj)| self.d[i] * self.cartan[i][j] * bj)
            .sum()
    }

    /// The simple reflection `s_i(beta) = beta - <beta, alpha_i^vee> alpha_i`.
    pub fn reflect(&self, i: usize, beta: &Weight) -> Weight {
        // <beta, alpha_i^vee> = sum_j a_ij beta_j, always an integer.
        let pairing: i64 = beta
            .0
            .iter()
            .enumerate()
            .map(|(j, &bj)| self.cartan[i][j] * bj)
            .sum();
        let mut out = beta.clone();
        out.0[i] -= pairing;
        out
    }

    /// Applies a Weyl word `s_{i1} s_{i2} ... s_{il}` to a weight, with the
    /// rightmost letter acting first.
    pub fn weyl_apply(&self, word: &[usize], beta: &Weight) -> Weight {
        let mut out = beta.clone();
        for &i in word.iter().rev() {
            out = self.reflect(i, &out);
        }
        out
    }

    /// Whether the subdiagram on `nodes` is of finite type, decided by
    /// positivity of all leading principal minors of the symmetrized
    /// submatrix.
    ///
    /// # Errors
    /// [`RootError::IndexOutOfRange`] for bad node indices.
    pub fn is_finite_type(&self, nodes: &[usize]) -> Result<bool, RootError> {
        for &i in nodes {
            if i >= self.rank() {
                return Err(RootError::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
        }
        let m = nodes.len();
        for k in 1..=m {
            let sub: Vec<Vec<BigInt>> = nodes[..k]
                .iter()
                .map(|&i| {
                    nodes[..k]
                        .iter()
                        .map(|&j| BigInt::from(self.d[i] * self.cartan[i][j]))
                        .collect()
                })
                .collect();
            if !determinant(sub).is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Computes the positive-root combinatorics of a finite-type subdiagram.
    ///
    /// The reduced word for `w_X` comes from the antidominance walk of
    /// `2 rho_X` (repeatedly reflect at the smallest node with positive
    /// pairing), which produces exactly `|Phi_X^+|` letters.
    ///
    /// # Errors
    /// [`RootError::NonFiniteType`] when the subdiagram is not finite.
    pub fn finite_type_data(&self, nodes: &[usize]) -> Result<FiniteTypeData, RootError> {
        let mut nodes: Vec<usize> = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        if !self.is_finite_type(&nodes)? {
            return Err(RootError::NonFiniteType(nodes));
        }
        // Orbit closure of the simple roots under the subdiagram's simple
        // reflections, intersected with the positive cone.
        let mut roots: Vec<Weight> = nodes
            .iter()
            .map(|&i| Weight::simple(self.rank(), i))
            .collect();
        let mut seen: std::collections::BTreeSet<Weight> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for &j in &nodes {
                    let r = self.reflect(j, beta);
                    if r.is_nonnegative() && seen.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort();
        let mut sum = Weight::zero(self.rank());
        for beta in &roots {
            sum = sum.add(beta);
        }
        // Antidominance walk from 2 rho_X, which pairs strictly positively
        // with every subdiagram simple root.  Letters are recorded in
        // application order, so the word (rightmost letter first) is the
        // reverse of the recording.
        let mut v = sum.clone();
        let mut applied = Vec::new();
        loop {
            let Some(&j) = nodes.iter().find(|&&j| self.pair_simple(j, &v) > 0) else {
                break;
            };
            v = self.reflect(j, &v);
            applied.push(j);
            assert!(
                applied.len() <= roots.len(),
                "antidominance walk exceeded the positive root count"
            );
        }
        assert_eq!(
            applied.len(),
            roots.len(),
            "longest-word length must equal the number of positive roots"
        );
        let longest_word: Vec<usize> = applied.into_iter().rev().collect();
        // Copairings: sum over beta of 2 (alpha_i, beta) / (beta, beta),
        // accumulated as an exact fraction; each total is an integer.
        let mut copairings = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let mut num = 0i64;
            let mut den = 1i64;
            for beta in &roots {
                let p = 2 * self.pair_simple(i, beta);
                let nn = self.bilinear(beta, beta);
                let g = gcd_i64(den, nn);
                num = num * (nn / g) + p * (den / g);
                den = den / g * nn;
                let g2 = gcd_i64(num, den);
                if g2 > 1 {
                    num /= g2;
                    den /= g2;
                }
            }
            assert_eq!(den.abs(), 1, "copairing is not an integer");
            copairings.push(num * den.signum());
        }
        Ok(FiniteTypeData {
            nodes,
            positive_roots: roots,
            longest_word,
            sum_positive_roots: sum,
            copairings,
        })
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exact determinant by fraction-free Gaussian elimination (Bareiss).
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&p| !m[p][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    &m[n - 1][n - 1] * BigInt::from(sign)
}

/// Minimal positive symmetrizers, or `None` when the matrix is not
/// symmetrizable.  Works connected-component-wise: fix `d = 1` on a seed
/// node and propagate `d_i a_ij = d_j a_ji` along edges as exact fractions,
/// then clear denominators per component.
fn minimal_symmetrizer(cartan: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = cartan.len();
    // Fractions d_i = num_i / den_i, zero num meaning unassigned.
    let mut num = vec![0i64; n];
    let mut den = vec![1i64; n];
    for seed in 0..n {
        if num[seed] != 0 {
            continue;
        }
        num[seed] = 1;
        let mut stack = vec![seed];
        let mut component = vec![seed];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if cartan[i][j] == 0 || i == j {
                    continue;
                }
                // d_j = d_i * a_ij / a_ji.
                let nj = num[i] * cartan[i][j];
                let dj = den[i] * cartan[j][i];
                let g = gcd_i64(nj, dj);
                let (nj, dj) = (nj / g * dj.signum(), (dj / g).abs());
                if num[j] == 0 {
                    num[j] = nj;
                    den[j] = dj;
                    stack.push(j);
                    component.push(j);
                } else if num[j] * dj != nj * den[j] {
                    return None;
                }
            }
        }
        let lcm = component
            .iter()
            .fold(1i64, |acc, &j| acc / gcd_i64(acc, den[j]) * den[j]);
        for &j in &component {
            num[j] *= lcm / den[j];
            den[j] = 1;
        }
        if component.iter().any(|&j| num[j] <= 0) {
            return None;
        }
        let g = component
            .iter()
            .fold(0i64, |acc, &j| gcd_i64(acc, num[j]).max(0));
        if g > 1 {
            for &j in &component {
                num[j] /= g;
            }
        }
    }
    // Verify, since propagation only covered edges.
    for i in 0..n {
        for j in 0..n {
            if num[i] * cartan[i][j] != num[j] * cartan[j][i] {
                return None;
            }
        }
    }
    Some(num)
}

fn named_cartan_block(name: &str) -> Option<Vec<Vec<i64>>> {
    if !name.is_ascii() || name.len() < 2 {
        return None;
    }
    let (letter, digits) = name.split_at(1);
    let n: usize = digits.parse().ok()?;
    if n == 0 {
        return None;
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>| {
        for i in 0..n - 1 {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    match (letter, n) {
        ("A", _) => chain(&mut a),
        ("B", n2) if n2 >= 2 => {
            chain(&mut a);
            // Last node short: the double bond points at it.
            a[n - 1][n - 2] = -2;
        }
        ("C", n2) if n2 >= 2 => {
            chain(&mut a);
            a[n - 2][n - 1] = -2;
        }
        ("D", n2) if n2 >= 3 => {
            for i in 0..n - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        ("E", n2) if (6..=8).contains(&n2) => {
            // Bourbaki numbering: node 2 hangs off node 4 of the chain
            // 1-3-4-5-...-n.
            let edge = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
                a[i - 1][j - 1] = -1;
                a[j - 1][i - 1] = -1;
            };
            edge(&mut a, 1, 3);
            edge(&mut a, 2, 4);
            for k in 3..n {
                edge(&mut a, k, k + 1);
            }
        }
        ("F", 4) => {
            chain(&mut a);
            a[2][1] = -2;
            a[1][2] = -1;
        }
        ("G", 2) => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
        _ => return None,
    }
    Some(a)
}
