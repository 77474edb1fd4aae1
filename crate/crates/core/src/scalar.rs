//! Exact scalars: rationals, Gaussian rationals and coefficients carrying a
//! symbolic power of π.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// LaTeX form of a rational, `\frac{n}{d}` for non-integers.
pub fn latex_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else if x.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -x.numer(), x.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", x.numer(), x.denom())
    }
}

/// Complex number with exact rational parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

pub type GQ = GaussianRational;

impl GaussianRational {
    pub const fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn int(n: i128) -> Self {
        Self::real(q(n))
    }

    pub fn frac(n: i128, d: i128) -> Self {
        Self::real(qf(n, d))
    }

    pub fn i() -> Self {
        Self { re: Q::zero(), im: Q::one() }
    }

    pub fn imag(im: Q) -> Self {
        Self { re: Q::zero(), im }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn norm_sqr(&self) -> Q {
        self.re * self.re + self.im * self.im
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        let n = rhs.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self * rhs.conj();
        Ok(Self { re: num.re / n, im: num.im / n })
    }

    pub fn inv(self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn pow(self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc *= self;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn latex(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => latex_q(&self.re),
            (true, false) => latex_imag(&self.im),
            (false, false) => {
                let im = latex_imag(&self.im.abs());
                let sign = if self.im.is_negative() { "-" } else { "+" };
                format!("\\left({} {} {}\\right)", latex_q(&self.re), sign, im)
            }
        }
    }
}

fn latex_imag(im: &Q) -> String {
    if *im == Q::one() {
        "i".into()
    } else if *im == -Q::one() {
        "-i".into()
    } else {
        format!("{}\\,i", latex_q(im))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_q(&self.re)),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-self.im).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", fmt_q(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{}i)", fmt_q(&self.re), fmt_q(&-self.im))
                } else {
                    write!(f, "({}+{}i)", fmt_q(&self.re), fmt_q(&self.im))
                }
            }
        }
    }
}

impl From<Q> for GaussianRational {
    fn from(re: Q) -> Self {
        Self::real(re)
    }
}

impl From<i128> for GaussianRational {
    fn from(n: i128) -> Self {
        Self::int(n)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: Q::zero(), im: Q::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Q::one())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self { re: self.re * rhs.re - self.im * rhs.im, im: self.re * rhs.im + self.im * rhs.re }
    }
}

impl Mul<Q> for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Q) -> Self {
        Self { re: self.re * rhs, im: self.im * rhs }
    }
}

/// Panics on division by zero, like the primitive types; use
/// [`GaussianRational::checked_div`] for a fallible version.
impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for GaussianRational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

/// Serialized as `{"re": "n/d", "im": "n/d"}` so exact values survive JSON.
impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("re", &fmt_q(&self.re))?;
        st.serialize_field("im", &fmt_q(&self.im))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            re: String,
            im: String,
        }
        let raw = Raw::deserialize(d)?;
        let re = parse_q(&raw.re).map_err(serde::de::Error::custom)?;
        let im = parse_q(&raw.im).map_err(serde::de::Error::custom)?;
        Ok(Self { re, im })
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(q(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// An exact coefficient times an integer power of π, e.g. `1/(24π²)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiCoefficient {
    pub coeff: GaussianRational,
    pub pi_power: i32,
}

impl PiCoefficient {
    pub fn new(coeff: GaussianRational, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    /// `n / (d π²)`, the shape of every loop prefactor in this crate.
    pub fn over_pi2(n: i128, d: i128) -> Self {
        Self::new(GaussianRational::frac(n, d), -2)
    }

    pub fn scale(self, c: GaussianRational) -> Self {
        Self { coeff: self.coeff * c, pi_power: self.pi_power }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64_pair().0 * std::f64::consts::PI.powi(self.pi_power)
    }

    pub fn latex(&self) -> String {
        let pi = match self.pi_power {
            0 => String::new(),
            1 | -1 => "\\pi".into(),
            p => format!("\\pi^{{{}}}", p.abs()),
        };
        if self.pi_power >= 0 {
            format!("{}{}", self.coeff.latex(), pi)
        } else if self.coeff.is_real() && !self.coeff.re.is_zero() {
            let c = self.coeff.re;
            let sign = if c.is_negative() { "-" } else { "" };
            let c = c.abs();
            if *c.numer() == 1 {
                format!("{sign}\\frac{{1}}{{{}{}}}", c.denom(), pi)
            } else {
                format!("{sign}\\frac{{{}}}{{{}{}}}", c.numer(), c.denom(), pi)
            }
        } else {
            format!("{}/{}", self.coeff.latex(), pi)
        }
    }
}

impl fmt::Display for PiCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            p if p > 0 => write!(f, "{}·π^{}", self.coeff, p),
            p => {
                let c = self.coeff;
                if c.is_real() && *c.re.numer() == 1 {
                    write!(f, "1/({}π^{})", c.re.denom(), -p)
                } else if c.is_real() && *c.re.numer() == -1 {
                    write!(f, "-1/({}π^{})", c.re.denom(), -p)
                } else {
                    write!(f, "{}/π^{}", c, -p)
                }
            }
        }
    }
}

impl fmt::Debug for PiCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for PiCoefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PiCoefficient", 3)?;
        st.serialize_field("coeff", &self.coeff)?;
        st.serialize_field("pi_power", &self.pi_power)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}
