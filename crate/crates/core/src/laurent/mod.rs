//! The field K = C[[t]][t⁻¹] of Laurent series, over Gaussian-rational
//! coefficients, with explicit precision tracking.
//!
//! An element is either [`Precision::Exact`] (a Laurent polynomial, fully
//! known) or known only modulo `t^N`. Every operation propagates the bound so
//! that a zero test can answer "undetermined" instead of guessing.

mod literal;
mod scalar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{exhausted, Error, Result};

pub use scalar::GaussianRational;

/// Default number of significant terms kept by inverses and roots.
pub const DEFAULT_WORKING_PRECISION: i64 = 64;

/// How much of a series is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Exact,
    /// Known modulo `t^N`: every coefficient at exponent `>= N` is unknown.
    ModuloDegree(i64),
}

impl Precision {
    pub fn bound(self) -> Option<i64> {
        match self {
            Precision::Exact => None,
            Precision::ModuloDegree(n) => Some(n),
        }
    }

    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::ModuloDegree(a), Precision::ModuloDegree(b)) => Precision::ModuloDegree(a.min(b)),
        }
    }

    fn shift(self, by: i64) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::ModuloDegree(n) => Precision::ModuloDegree(n + by),
        }
    }

    fn admits(self, exp: i64) -> bool {
        match self {
            Precision::Exact => true,
            Precision::ModuloDegree(n) => exp < n,
        }
    }
}

/// Outcome of a zero test under finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Undetermined,
}

/// An element of K with finite stored support.
///
/// Stored densely from `start`; the first and last stored coefficients are
/// nonzero (or nothing is stored). Stored exponents are all below the
/// precision bound.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    start: i64,
    coeffs: Vec<GaussianRational>,
    prec: Precision,
}

impl Laurent {
    fn build(start: i64, mut coeffs: Vec<GaussianRational>, prec: Precision) -> Self {
        if let Precision::ModuloDegree(n) = prec {
            let keep = (n - start).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Laurent { start: 0, coeffs: Vec::new(), prec };
        }
        coeffs.drain(..lead);
        Laurent { start: start + lead as i64, coeffs, prec }
    }

    pub fn zero() -> Self {
        Laurent { start: 0, coeffs: Vec::new(), prec: Precision::Exact }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        Self::build(exp, vec![c], Precision::Exact)
    }

    /// `t^exp` with coefficient one.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(GaussianRational::one(), exp)
    }

    /// Exact element from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, GaussianRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += &c;
        }
        Self::build(lo, coeffs, Precision::Exact)
    }

    /// Convenience for integer-coefficient elements.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, GaussianRational::from(c))))
    }

    /// Forget everything at or above `t^n` (never raises the bound).
    pub fn truncate(&self, n: i64) -> Self {
        Self::build(self.start, self.coeffs.clone(), self.prec.min(Precision::ModuloDegree(n)))
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    /// No stored terms (zero exactly or zero up to the precision bound).
    pub fn has_no_terms(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    pub fn is_exact_one(&self) -> bool {
        self.is_exact() && self.start == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn zero_test(&self) -> ZeroTest {
        if !self.coeffs.is_empty() {
            ZeroTest::NonZero
        } else if self.is_exact() {
            ZeroTest::Zero
        } else {
            ZeroTest::Undetermined
        }
    }

    /// Three-valued equality.
    pub fn compare(&self, other: &Laurent) -> ZeroTest {
        (self - other).zero_test()
    }

    /// Minimal exponent with a nonzero coefficient.
    pub fn order(&self) -> Result<i64> {
        match self.zero_test() {
            ZeroTest::NonZero => Ok(self.start),
            ZeroTest::Zero => Err(Error::ZeroHasNoOrder),
            ZeroTest::Undetermined => Err(exhausted(format!("series is zero modulo t^{}", self.prec.bound().unwrap()))),
        }
    }

    /// A lower bound for the valuation; `None` means exactly zero.
    fn valuation_floor(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.start)
        } else {
            self.prec.bound()
        }
    }

    /// Highest stored exponent.
    pub fn degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficient of `t^exp`, or `None` if that coefficient is beyond the precision bound.
    pub fn coeff(&self, exp: i64) -> Option<GaussianRational> {
        if !self.prec.admits(exp) {
            return None;
        }
        let idx = exp - self.start;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            return Some(GaussianRational::zero());
        }
        Some(self.coeffs[idx as usize].clone())
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.first()
    }

    /// Nonzero stored terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn is_monomial(&self) -> bool {
        self.is_exact() && self.coeffs.len() == 1
    }

    /// The constant term of an exact element with no other terms.
    pub fn as_exact_constant(&self) -> Option<GaussianRational> {
        if !self.is_exact() {
            return None;
        }
        match self.coeffs.len() {
            0 => Some(GaussianRational::zero()),
            1 if self.start == 0 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Laurent {
        if c.is_zero() {
            return Laurent { start: 0, coeffs: Vec::new(), prec: Precision::Exact };
        }
        Self::build(self.start, self.coeffs.iter().map(|a| a * c).collect(), self.prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            start: if self.coeffs.is_empty() { 0 } else { self.start + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.shift(k),
        }
    }

    pub fn pow(&self, e: u32) -> Laurent {
        let mut acc = Laurent::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_impl(&self, other: &Laurent, negate: bool) -> Laurent {
        let prec = self.prec.min(other.prec);
        if other.coeffs.is_empty() {
            return Self::build(self.start, self.coeffs.clone(), prec);
        }
        if self.coeffs.is_empty() {
            let c = if negate { other.coeffs.iter().map(|c| -c).collect() } else { other.coeffs.clone() };
            return Self::build(other.start, c, prec);
        }
        let lo = self.start.min(other.start);
        let hi = self.degree().unwrap().max(other.degree().unwrap());
        let mut out = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.start - lo) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut out[(other.start - lo) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::build(lo, out, prec)
    }

    fn mul_impl(&self, other: &Laurent) -> Laurent {
        let prec = match (self.valuation_floor(), other.valuation_floor()) {
            (None, _) | (_, None) => return Laurent::zero(),
            (Some(va), Some(vb)) => {
                let a = self.prec.shift(vb);
                let b = other.prec.shift(va);
                a.min(b)
            }
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent { start: 0, coeffs: Vec::new(), prec };
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Precision::ModuloDegree(n) = prec {
            len = len.min((n - start).max(0) as usize);
        }
        let mut out = vec![GaussianRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self::build(start, out, prec)
    }

    /// Multiplicative inverse, keeping `working_prec` significant terms unless
    /// `self` is an exact monomial (then the inverse is exact).
    pub fn inv(&self, working_prec: i64) -> Result<Laurent> {
        match self.zero_test() {
            ZeroTest::Zero => return Err(Error::DivisionByZero),
            ZeroTest::Undetermined => return Err(exhausted("inverting a series that is zero to precision")),
            ZeroTest::NonZero => {}
        }
        let v = self.start;
        let a0 = &self.coeffs[0];
        if self.is_monomial() {
            return Ok(Laurent::monomial(GaussianRational::one() / a0.clone(), -v));
        }
        let mut terms = working_prec.max(1);
        if let Precision::ModuloDegree(n) = self.prec {
            terms = terms.min(n - v);
        }
        let a0_inv = GaussianRational::one() / a0.clone();
        let mut out: Vec<GaussianRational> = Vec::with_capacity(terms as usize);
        out.push(a0_inv.clone());
        for k in 1..terms as usize {
            let mut acc = GaussianRational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += &(a * &out[k - j]);
                }
            }
            out.push(-(&acc * &a0_inv));
        }
        Ok(Self::build(-v, out, Precision::ModuloDegree(-v + terms)))
    }

    /// Exact quotient of Laurent polynomials, when the division leaves no remainder.
    pub fn exact_quotient(&self, divisor: &Laurent) -> Option<Laurent> {
        if !self.is_exact() || !divisor.is_exact() || divisor.coeffs.is_empty() {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some(Laurent::zero());
        }
        let lb = divisor.coeffs.len();
        if self.coeffs.len() < lb {
            return None;
        }
        let qlen = self.coeffs.len() - lb + 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); qlen];
        let b0_inv = GaussianRational::one() / divisor.coeffs[0].clone();
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * &b0_inv;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[i + j] -= &(&c * b);
                }
            }
            quot[i] = c;
        }
        if rem[qlen..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::build(self.start - divisor.start, quot, Precision::Exact))
    }

    /// Field division; exact whenever both operands are exact and the divisor
    /// divides evenly, otherwise a series with `working_prec` significant terms.
    pub fn div(&self, divisor: &Laurent, working_prec: i64) -> Result<Laurent> {
        match divisor.zero_test() {
            ZeroTest::Zero => return Err(Error::DivisionByZero),
            ZeroTest::Undetermined => return Err(exhausted("dividing by a series that is zero to precision")),
            ZeroTest::NonZero => {}
        }
        if let Some(q) = self.exact_quotient(divisor) {
            return Ok(q);
        }
        Ok(self * &divisor.inv(working_prec)?)
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Result<GaussianRational> {
        self.coeff(-1).ok_or_else(|| exhausted("coefficient of t^-1 lies beyond the precision bound"))
    }

    /// Whether an `n`-th root exists in K: the order must be a multiple of `n`.
    pub fn nth_root_exists(&self, n: u32) -> Result<bool> {
        assert!(n > 0, "root degree must be positive");
        Ok(self.order()?.rem_euclid(n as i64) == 0)
    }

    /// An `n`-th root, computed as `a^{1/n} t^{v/n} (1+u)^{1/n}` with the
    /// binomial series truncated to `working_prec` terms. Exact when `self`
    /// is an exact `n`-th power of a Laurent polynomial.
    pub fn nth_root(&self, n: u32, working_prec: i64) -> Result<Laurent> {
        assert!(n > 0, "root degree must be positive");
        let v = self.order()?;
        if v.rem_euclid(n as i64) != 0 {
            return Err(Error::NoRoot { order: v, n });
        }
        let a0 = self.coeffs[0].clone();
        let r0 = a0.nth_root(n).ok_or_else(|| Error::RootNotRepresentable { coeff: a0.to_literal(), n })?;
        let a0_inv = GaussianRational::one() / a0;
        let unit: Vec<GaussianRational> = self.coeffs.iter().map(|c| c * &a0_inv).collect();
        let base = v / n as i64;

        let rel = match self.prec {
            Precision::Exact => None,
            Precision::ModuloDegree(p) => Some(p - v),
        };
        if rel.is_none() {
            let deg = unit.len() as i64 - 1;
            if deg % n as i64 == 0 {
                let g = binomial_root(&unit, n, (deg / n as i64 + 1) as usize);
                let cand = Self::build(0, g, Precision::Exact);
                let f = Self::build(0, unit.clone(), Precision::Exact);
                if cand.pow(n) == f {
                    return Ok(cand.scale(&r0).shift(base));
                }
            }
        }
        let terms = rel.map_or(working_prec, |r| r.min(working_prec)).max(1);
        let g = binomial_root(&unit, n, terms as usize);
        Ok(Self::build(base, g, Precision::ModuloDegree(base + terms)).scale(&r0))
    }

    /// The substitution `t ↦ z t`.
    pub fn scale_t(&self, z: &GaussianRational) -> Result<Laurent> {
        if z.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut zp = z.pow(self.start);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &zp);
            zp = &zp * z;
        }
        Ok(Self::build(self.start, out, self.prec))
    }

    /// Termwise derivative `d/dt`; the precision bound drops by one.
    pub fn d_dt(&self) -> Laurent {
        let out =
            self.coeffs.iter().enumerate().map(|(i, c)| c * &GaussianRational::from(self.start + i as i64)).collect();
        Self::build(self.start - 1, out, self.prec.shift(-1))
    }

    pub fn parse(text: &str) -> Result<Laurent> {
        literal::parse(text)
    }

    /// Canonical literal: increasing exponents, unit coefficients elided,
    /// `+ O(t^N)` appended for truncated elements.
    pub fn to_literal(&self) -> String {
        literal::format(self)
    }
}

/// Coefficients `g_0..g_{terms-1}` of `f^{1/n}` for `f_0 = 1`, from the
/// power recurrence `k g_k = Σ_{j=1..k} ((1/n + 1) j − k) f_j g_{k−j}`.
fn binomial_root(f: &[GaussianRational], n: u32, terms: usize) -> Vec<GaussianRational> {
    let n_q = BigRational::from_integer(n.into());
    let alpha_plus_one = BigRational::one() / &n_q + BigRational::one();
    let mut g = Vec::with_capacity(terms);
    g.push(GaussianRational::one());
    for k in 1..terms {
        let mut acc = GaussianRational::zero();
        for j in 1..=k.min(f.len().saturating_sub(1)) {
            if f[j].is_zero() {
                continue;
            }
            let w = &alpha_plus_one * BigRational::from_integer(j.into()) - BigRational::from_integer(k.into());
            acc += &(&(&f[j] * &g[k - j]) * &GaussianRational::real(w));
        }
        g.push(&acc / &GaussianRational::from(k as i64));
    }
    g
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({})", self.to_literal())
    }
}

impl From<i64> for Laurent {
    fn from(v: i64) -> Self {
        Laurent::constant(v.into())
    }
}

impl From<GaussianRational> for Laurent {
    fn from(v: GaussianRational) -> Self {
        Laurent::constant(v)
    }
}

impl<'a> Add<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self.add_impl(o, true)
    }
}

impl<'a> Mul<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        self.mul_impl(o)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { start: self.start, coeffs: self.coeffs.iter().map(|c| -c).collect(), prec: self.prec }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, o: Laurent) -> Laurent {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
