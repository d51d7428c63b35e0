//! Exact Gaussian rationals, the coefficient field Q(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im·i` with exact rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive
/// denominator, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_parts(re: i64, im: i64) -> Self {
        Self { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Integer power; negative exponents invert. Panics on `0^negative`.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("zero to a negative power").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The exact `n`-th root inside Q(i), when one exists.
    ///
    /// Reduces to Gaussian integers: with `self = α/m`, any root of
    /// `β = α·m^(n-1)` in Q(i) is a Gaussian integer, found by Newton
    /// refinement from a floating-point seed and verified exactly.
    pub fn nth_root(&self, n: u32) -> Option<Self> {
        assert!(n > 0);
        if self.is_zero() || n == 1 {
            return Some(self.clone());
        }
        let m = self.re.denom().lcm(self.im.denom());
        let a_re = self.re.numer() * (&m / self.re.denom());
        let a_im = self.im.numer() * (&m / self.im.denom());
        let scale = num_traits::pow(m.clone(), (n - 1) as usize);
        let beta = GaussInt { re: a_re * &scale, im: a_im * &scale };
        let root = beta.nth_root(n)?;
        let m = BigRational::from_integer(m);
        Some(Self { re: BigRational::from_integer(root.re) / &m, im: BigRational::from_integer(root.im) / &m })
    }

    /// Canonical coefficient text: `3`, `-1/2`, `(1/2+3/4i)`, `(0-i)`.
    pub fn to_literal(&self) -> String {
        if self.im.is_zero() {
            return self.re.to_string();
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let mag = self.im.abs();
        let im = if mag.is_one() { String::new() } else { mag.to_string() };
        format!("({}{}{}i)", self.re, sign, im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::real(BigRational::from_integer(v.into()))
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero");
            return GaussianRational { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn pow(&self, e: u32) -> GaussInt {
        let mut acc = GaussInt { re: BigInt::one(), im: BigInt::zero() };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn norm(&self) -> BigUint {
        (&self.re * &self.re + &self.im * &self.im).to_biguint().expect("norm is nonnegative")
    }

    fn nth_root(&self, n: u32) -> Option<GaussInt> {
        let norm = self.norm();
        let r2 = norm.nth_root(n);
        if num_traits::pow(r2.clone(), n as usize) != norm {
            return None;
        }
        // |root| = sqrt(r2); the root's norm must be an integer.
        let modulus = r2.sqrt();
        let arg = f64_atan2(&self.im, &self.re);
        for k in 0..n {
            let theta = (arg + 2.0 * std::f64::consts::PI * k as f64) / n as f64;
            let mut guess = GaussInt { re: scaled(&modulus, theta.cos()), im: scaled(&modulus, theta.sin()) };
            for _ in 0..64 {
                let next = self.newton_step(&guess, n);
                match next {
                    Some(next) if next != guess => guess = next,
                    _ => break,
                }
            }
            for dr in -1i64..=1 {
                for di in -1i64..=1 {
                    let cand = GaussInt { re: &guess.re + dr, im: &guess.im + di };
                    if cand.pow(n) == *self {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }

    /// One rounded Newton step for `r^n = self`.
    fn newton_step(&self, r: &GaussInt, n: u32) -> Option<GaussInt> {
        let rq =
            GaussianRational::new(BigRational::from_integer(r.re.clone()), BigRational::from_integer(r.im.clone()));
        if rq.is_zero() {
            return None;
        }
        let target = GaussianRational::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        );
        let rn1 = rq.pow(n as i64 - 1);
        let num = &(&rn1 * &rq) - &target;
        let den = &rn1 * &GaussianRational::from(n as i64);
        let next = &rq - &(&num / &den);
        Some(GaussInt { re: round_half(next.re()), im: round_half(next.im()) })
    }
}

fn round_half(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num = q.numer() * &two + q.denom();
    num.div_floor(&(q.denom() * two))
}

fn f64_atan2(y: &BigInt, x: &BigInt) -> f64 {
    let bits = y.bits().max(x.bits());
    let shift = bits.saturating_sub(60);
    let yf = (y >> shift).to_f64().unwrap_or(0.0);
    let xf = (x >> shift).to_f64().unwrap_or(0.0);
    yf.atan2(xf)
}

/// `round(modulus · c)` for a unit-interval float `c`, in big integers.
fn scaled(modulus: &BigUint, c: f64) -> BigInt {
    const FRAC_BITS: i32 = 52;
    let fixed = (c * 2f64.powi(FRAC_BITS)).round() as i64;
    let prod = BigInt::from_biguint(Sign::Plus, modulus.clone()) * BigInt::from(fixed);
    prod >> FRAC_BITS as usize
}
