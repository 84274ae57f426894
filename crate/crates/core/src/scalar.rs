//! Exact arithmetic in the rational function field `Q(q)`.
//!
//! Every coefficient in this crate is a [`RatFuncQ`]: a fraction of integer
//! polynomials in `q` kept in a canonical reduced form, so that structural
//! equality *is* mathematical equality.  The module also provides the bar
//! involution `q -> q^-1`, the balanced q-integers and Gaussian binomials
//! used by divided powers, and a small expression parser/printer whose
//! round trip is the identity on canonical forms.
//!
//! Canonical form of a fraction `num/den`:
//! - `den` is nonzero and `num` is the zero polynomial only for the zero
//!   element (in which case `den = 1`);
//! - `gcd(num, den) = 1`, where the gcd includes the integer content, so
//!   coefficients stay primitive;
//! - the leading coefficient of `den` is positive.
//!
//! Rational *number* coefficients are absorbed by clearing denominators:
//! `(3/2) q` is stored as `3q / 2`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors produced by scalar arithmetic and the expression parser.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    /// Attempt to invert or divide by the zero function.
    #[error("division by zero in Q(q)")]
    DivisionByZero,
    /// Malformed expression passed to the parser.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// Out-of-range arguments to a q-combinatorial function.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

// ---------------------------------------------------------------------------
// Integer polynomials in q
// ---------------------------------------------------------------------------

/// A polynomial in `q` with `BigInt` coefficients, stored densely in
/// ascending degree with no trailing zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    /// The zero polynomial (empty coefficient vector).
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    /// A constant polynomial.
    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            ZPoly::zero()
        } else {
            ZPoly { coeffs: vec![c] }
        }
    }

    /// The monomial `c * q^deg`.
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        ZPoly { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The value of a constant polynomial, or `None` when the degree is
    /// positive or the constant does not fit in an `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => self.coeffs[0].to_i64(),
            _ => None,
        }
    }

    /// Leading coefficient.
    ///
    /// # Panics
    /// Panics on the zero polynomial.
    pub fn lc(&self) -> &BigInt {
        self.coeffs
            .last()
            .expect("leading coefficient of zero polynomial")
    }

    /// Ascending coefficient slice (empty for zero).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of trailing `q` factors, i.e. the smallest degree with a
    /// nonzero coefficient (zero polynomial gives 0).
    fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            out.push(a + b);
        }
        ZPoly::from_coeffs(out)
    }

    fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            out.push(a - b);
        }
        ZPoly::from_coeffs(out)
    }

    fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }

    fn mul_scalar(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    fn shift(&self, k: usize) -> ZPoly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Divides by `q^k`, which must divide exactly.
    fn unshift(&self, k: usize) -> ZPoly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        debug_assert!(self.coeffs[..k].iter().all(|c| c.is_zero()));
        ZPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Positive gcd of all coefficients (0 for the zero polynomial).
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by `c`, which must divide exactly.
    fn div_scalar_exact(&self, c: &BigInt) -> ZPoly {
        debug_assert!(!c.is_zero());
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let (quo, rem) = a.div_rem(c);
                    debug_assert!(rem.is_zero(), "inexact scalar division");
                    quo
                })
                .collect(),
        }
    }

    /// Exact polynomial division: `self = quotient * d` is required.
    fn div_exact(&self, d: &ZPoly) -> ZPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return ZPoly::zero();
        }
        if d.is_one() {
            return self.clone();
        }
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let n = self.degree().unwrap();
        assert!(n >= dd, "inexact polynomial division");
        let mut quo = vec![BigInt::zero(); n - dd + 1];
        for k in (0..quo.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(d.lc());
            assert!(r.is_zero(), "inexact polynomial division");
            for (j, b) in d.coeffs.iter().enumerate() {
                let delta = &c * b;
                rem[k + j] -= delta;
            }
            quo[k] = c;
        }
        debug_assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division"
        );
        ZPoly::from_coeffs(quo)
    }

    /// Pseudo-remainder of `self` by `d` (`lc(d)^(deg a - deg d + 1) * a mod d`).
    fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.lc().clone();
            r = r.mul_scalar(d.lc()).sub(&d.mul_scalar(&lr).shift(dr - dd));
        }
        r
    }

    /// Positive-leading-coefficient gcd via the primitive polynomial
    /// remainder sequence.  Handles zero inputs; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return other.abs_normalized();
        }
        if other.is_zero() {
            return self.abs_normalized();
        }
        let ca = self.content();
        let cb = other.content();
        let cg = ca.gcd(&cb);
        // Monomial fast path: a shared q-power plus the content is the gcd.
        let va = self.valuation();
        let vb = other.valuation();
        if self.coeffs.len() == va + 1 || other.coeffs.len() == vb + 1 {
            return ZPoly::monomial(cg, va.min(vb));
        }
        let mut a = self.div_scalar_exact(&ca);
        let mut b = other.div_scalar_exact(&cb);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() {
                ZPoly::zero()
            } else {
                let c = r.content();
                r.div_scalar_exact(&c)
            };
        }
        a.abs_normalized().mul_scalar(&cg)
    }

    /// Flips the sign so the leading coefficient is positive.
    fn abs_normalized(&self) -> ZPoly {
        if !self.is_zero() && self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// The reversal `q^n * p(1/q)` where `n` is the padding degree; used by
    /// the bar involution.  `pad >= deg(p)` is required.
    fn reversed(&self, pad: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); pad + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[pad - k] = c.clone();
        }
        ZPoly::from_coeffs(coeffs)
    }
}

fn fmt_zpoly(p: &ZPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (deg, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let unit = mag.is_one();
        match (deg, unit) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "q")?,
            (1, false) => write!(f, "{mag}*q")?,
            (_, true) => write!(f, "q^{deg}")?,
            (_, false) => write!(f, "{mag}*q^{deg}")?,
        }
    }
    Ok(())
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_zpoly(self, f)
    }
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// An element of `Q(q)` in canonical reduced form (see the module docs).
///
/// Equality of `RatFuncQ` values is equality in the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFuncQ {
    num: ZPoly,
    den: ZPoly,
}

impl RatFuncQ {
    pub fn zero() -> Self {
        RatFuncQ {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFuncQ {
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFuncQ {
            num: ZPoly::constant(BigInt::from(n)),
            den: ZPoly::one(),
        }
    }

    /// The generator `q`.
    pub fn q() -> Self {
        RatFuncQ::q_pow(1)
    }

    /// The Laurent monomial `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            RatFuncQ {
                num: ZPoly::monomial(BigInt::one(), e as usize),
                den: ZPoly::one(),
            }
        } else {
            RatFuncQ {
                num: ZPoly::one(),
                den: ZPoly::monomial(BigInt::one(), (-e) as usize),
            }
        }
    }

    /// Builds and canonicalizes `num/den`.
    ///
    /// # Errors
    /// [`ScalarError::DivisionByZero`] if `den` is the zero polynomial.
    pub fn from_parts(num: ZPoly, den: ZPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut r = RatFuncQ { num, den };
        r.canonicalize();
        Ok(r)
    }

    pub fn numerator(&self) -> &ZPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn canonicalize(&mut self) {
        debug_assert!(!self.den.is_zero());
        if self.num.is_zero() {
            self.den = ZPoly::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        // Shared q-powers first: cheap and very common.
        let v = self.num.valuation().min(self.den.valuation());
        if v > 0 {
            self.num = self.num.unshift(v);
            self.den = self.den.unshift(v);
        }
        if !self.den.is_one() {
            let g = self.num.gcd(&self.den);
            if !g.is_one() {
                self.num = self.num.div_exact(&g);
                self.den = self.den.div_exact(&g);
            }
        }
        if self.den.lc().is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    /// Multiplicative inverse.
    ///
    /// # Errors
    /// [`ScalarError::DivisionByZero`] on the zero element.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut r = RatFuncQ {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        if r.den.lc().is_negative() {
            r.num = r.num.neg();
            r.den = r.den.neg();
        }
        Ok(r)
    }

    /// Division returning an error instead of panicking on zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    ///
    /// # Errors
    /// [`ScalarError::DivisionByZero`] for `0^e` with `e < 0`.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = RatFuncQ::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// The bar involution `q -> q^-1`, returned in canonical form.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return RatFuncQ::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let pad = dn.max(dd);
        let mut r = RatFuncQ {
            num: self.num.reversed(pad),
            den: self.den.reversed(pad),
        };
        r.canonicalize();
        r
    }
}

impl Default for RatFuncQ {
    fn default() -> Self {
        RatFuncQ::zero()
    }
}

impl Add for &RatFuncQ {
    type Output = RatFuncQ;
    fn add(self, other: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let mut r = RatFuncQ {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
            r.canonicalize();
            return r;
        }
        let g = self.den.gcd(&other.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (self.den.div_exact(&g), other.den.div_exact(&g))
        };
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = self.den.mul(&db);
        let mut r = RatFuncQ { num, den };
        r.canonicalize();
        r
    }
}

impl Sub for &RatFuncQ {
    type Output = RatFuncQ;
    fn sub(self, other: &RatFuncQ) -> RatFuncQ {
        self + &(-other)
    }
}

impl Neg for &RatFuncQ {
    type Output = RatFuncQ;
    fn neg(self) -> RatFuncQ {
        RatFuncQ {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFuncQ {
    type Output = RatFuncQ;
    fn mul(self, other: &RatFuncQ) -> RatFuncQ {
        if self.is_zero() || other.is_zero() {
            return RatFuncQ::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        // Cross-cancel before multiplying to keep intermediate degrees low.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.div_exact(&g1)
        };
        let d2 = if g1.is_one() {
            other.den.clone()
        } else {
            other.den.div_exact(&g1)
        };
        let n2 = if g2.is_one() {
            other.num.clone()
        } else {
            other.num.div_exact(&g2)
        };
        let d1 = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.div_exact(&g2)
        };
        let mut r = RatFuncQ {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        };
        // Cross-cancellation leaves the fraction reduced up to sign and
        // content; a full canonicalize is still cheapest to state and safe.
        r.canonicalize();
        r
    }
}

/// Panics on division by zero; use [`RatFuncQ::checked_div`] where the
/// divisor is not known to be nonzero.
impl Div for &RatFuncQ {
    type Output = RatFuncQ;
    fn div(self, other: &RatFuncQ) -> RatFuncQ {
        self.checked_div(other).expect("division by zero in Q(q)")
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RatFuncQ {
            type Output = RatFuncQ;
            fn $method(self, other: RatFuncQ) -> RatFuncQ {
                (&self).$method(&other)
            }
        }
        impl $trait<&RatFuncQ> for RatFuncQ {
            type Output = RatFuncQ;
            fn $method(self, other: &RatFuncQ) -> RatFuncQ {
                (&self).$method(other)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for RatFuncQ {
    type Output = RatFuncQ;
    fn neg(self) -> RatFuncQ {
        -&self
    }
}

impl AddAssign<&RatFuncQ> for RatFuncQ {
    fn add_assign(&mut self, other: &RatFuncQ) {
        *self = &*self + other;
    }
}

impl SubAssign<&RatFuncQ> for RatFuncQ {
    fn sub_assign(&mut self, other: &RatFuncQ) {
        *self = &*self - other;
    }
}

impl MulAssign<&RatFuncQ> for RatFuncQ {
    fn mul_assign(&mut self, other: &RatFuncQ) {
        *self = &*self * other;
    }
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            fmt_zpoly(&self.num, f)
        } else {
            write!(f, "(")?;
            fmt_zpoly(&self.num, f)?;
            write!(f, ")/(")?;
            fmt_zpoly(&self.den, f)?;
            write!(f, ")")
        }
    }
}

impl FromStr for RatFuncQ {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        parse_expression(s)
    }
}

impl serde::Serialize for RatFuncQ {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RatFuncQ {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// q-combinatorics
// ---------------------------------------------------------------------------

/// The balanced q-integer `[n] = (v^n - v^-n)/(v - v^-1)` at `v = q^d`,
/// i.e. `v^(n-1) + v^(n-3) + ... + v^(1-n)`.  Odd under `n -> -n`.
pub fn q_int(n: i64, d: i64) -> RatFuncQ {
    assert!(d >= 1, "symmetrizer entry must be positive");
    let sign = if n < 0 {
        RatFuncQ::from_int(-1)
    } else {
        RatFuncQ::one()
    };
    let n = n.abs();
    let mut acc = RatFuncQ::zero();
    for k in 0..n {
        acc += &RatFuncQ::q_pow(d * (n - 1 - 2 * k));
    }
    &sign * &acc
}

/// The balanced q-factorial `[n]! = [n][n-1]...[1]` at `v = q^d`.
///
/// # Errors
/// [`ScalarError::InvalidArgument`] for negative `n`.
pub fn q_factorial(n: i64, d: i64) -> Result<RatFuncQ, ScalarError> {
    if n < 0 {
        return Err(ScalarError::InvalidArgument(format!("q_factorial({n})")));
    }
    let mut acc = RatFuncQ::one();
    for k in 1..=n {
        acc *= &q_int(k, d);
    }
    Ok(acc)
}

/// The balanced Gaussian binomial `[m choose s]` at `v = q^d`, always a
/// bar-invariant Laurent polynomial.
///
/// # Errors
/// [`ScalarError::InvalidArgument`] unless `0 <= s <= m`.
pub fn q_binomial(m: i64, s: i64, d: i64) -> Result<RatFuncQ, ScalarError> {
    if s < 0 || m < s {
        return Err(ScalarError::InvalidArgument(format!(
            "q_binomial({m}, {s})"
        )));
    }
    let num = q_factorial(m, d)?;
    let den = &q_factorial(s, d)? * &q_factorial(m - s, d)?;
    num.checked_div(&den)
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------
//
// Grammar (ASCII, whitespace-insensitive):
//   expr   := term { ("+" | "-") term }
//   term   := unary { ("*" | "/") unary }
//   unary  := "-" unary | power
//   power  := atom [ "^" [ "-" ] digits ]
//   atom   := digits | "q" | "(" expr ")"

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScalarError> {
        Err(ScalarError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .map_or(false, |b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_digits(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .map_or(false, |b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn parse_expr(&mut self) -> Result<RatFuncQ, ScalarError> {
        let mut acc = self.parse_term()?;
        loop {
            if self.eat(b'+') {
                acc += &self.parse_term()?;
            } else if self.eat(b'-') {
                acc -= &self.parse_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&mut self) -> Result<RatFuncQ, ScalarError> {
        let mut acc = self.parse_unary()?;
        loop {
            if self.eat(b'*') {
                acc *= &self.parse_unary()?;
            } else if self.eat(b'/') {
                let rhs = self.parse_unary()?;
                match acc.checked_div(&rhs) {
                    Ok(v) => acc = v,
                    Err(_) => return self.err("division by zero"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<RatFuncQ, ScalarError> {
        if self.eat(b'-') {
            Ok(-&self.parse_unary()?)
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<RatFuncQ, ScalarError> {
        let base = self.parse_atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        let digits = self.parse_digits()?;
        let Ok(mut e) = i64::try_from(&digits) else {
            return self.err("exponent out of range");
        };
        if e > 4096 {
            return self.err("exponent out of range");
        }
        if negative {
            e = -e;
        }
        match base.pow(e) {
            Ok(v) => Ok(v),
            Err(_) => self.err("zero raised to a negative power"),
        }
    }

    fn parse_atom(&mut self) -> Result<RatFuncQ, ScalarError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(RatFuncQ::q())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.parse_digits()?;
                Ok(RatFuncQ {
                    num: ZPoly::constant(n),
                    den: ZPoly::one(),
                })
            }
            _ => self.err("expected an integer, 'q', or '('"),
        }
    }
}

/// Parses an arithmetic expression in `q` into canonical form.
///
/// # Errors
/// [`ScalarError::Parse`] with a byte offset on malformed input.
pub fn parse_expression(s: &str) -> Result<RatFuncQ, ScalarError> {
    let mut p = Parser::new(s);
    let v = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}
