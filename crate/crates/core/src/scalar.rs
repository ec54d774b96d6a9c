//! Exact Gaussian rationals, the coefficient field used throughout the crate.
//!
//! Values are `re + im·i` with both parts stored as reduced [`BigRational`]s,
//! so structural equality coincides with numerical equality.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CoeffQ {
    re: BigRational,
    im: BigRational,
}

impl CoeffQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CoeffQ { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CoeffQ { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }

    /// `num/den` as a real value. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn gaussian(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        CoeffQ {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        CoeffQ { re: BigRational::zero(), im: BigRational::one() }
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
        CoeffQ { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(CoeffQ { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        CoeffQ { re: &self.re * &k, im: &self.im * &k }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        CoeffQ { re: &self.re / &k, im: &self.im / &k }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CoeffQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Approximate modulus, for display and diagnostics only.
    pub fn abs_f64(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::NAN);
        let im = self.im.to_f64().unwrap_or(f64::NAN);
        re.hypot(im)
    }
}

impl Zero for CoeffQ {
    fn zero() -> Self {
        CoeffQ { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CoeffQ {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for CoeffQ {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for CoeffQ {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CoeffQ> for &CoeffQ {
            type Output = CoeffQ;
            fn $method(self, rhs: &CoeffQ) -> CoeffQ {
                let f: fn(&CoeffQ, &CoeffQ) -> CoeffQ = $body;
                f(self, rhs)
            }
        }
        impl $tr for CoeffQ {
            type Output = CoeffQ;
            fn $method(self, rhs: CoeffQ) -> CoeffQ {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CoeffQ> for CoeffQ {
            type Output = CoeffQ;
            fn $method(self, rhs: &CoeffQ) -> CoeffQ {
                (&self).$method(rhs)
            }
        }
        impl $tr<CoeffQ> for &CoeffQ {
            type Output = CoeffQ;
            fn $method(self, rhs: CoeffQ) -> CoeffQ {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| CoeffQ { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| CoeffQ { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return CoeffQ::real(&a.re * &b.re);
    }
    CoeffQ {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero CoeffQ");
    a * &inv
});

impl Neg for CoeffQ {
    type Output = CoeffQ;
    fn neg(self) -> CoeffQ {
        CoeffQ { re: -self.re, im: -self.im }
    }
}

impl Neg for &CoeffQ {
    type Output = CoeffQ;
    fn neg(self) -> CoeffQ {
        CoeffQ { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&CoeffQ> for CoeffQ {
    fn add_assign(&mut self, rhs: &CoeffQ) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&CoeffQ> for CoeffQ {
    fn sub_assign(&mut self, rhs: &CoeffQ) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&CoeffQ> for CoeffQ {
    fn mul_assign(&mut self, rhs: &CoeffQ) {
        *self = &*self * rhs;
    }
}

impl Sum for CoeffQ {
    fn sum<I: Iterator<Item = CoeffQ>>(iter: I) -> Self {
        iter.fold(CoeffQ::zero(), |mut acc, c| {
            acc += &c;
            acc
        })
    }
}

impl Product for CoeffQ {
    fn product<I: Iterator<Item = CoeffQ>>(iter: I) -> Self {
        iter.fold(CoeffQ::one(), |acc, c| acc * c)
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `[+-]digits[/digits]` with a strictly positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| bad())?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if !d.is_positive() {
                return Err(bad());
            }
            d
        }
    };
    Ok(BigRational::new(numer, denom))
}

impl FromStr for CoeffQ {
    type Err = Error;

    /// Parses a real rational; complex values go through the JSON object form.
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(CoeffQ::real)
    }
}

impl fmt::Display for CoeffQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-&self.im).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", format_rational(&self.im))
        };
        if self.re.is_zero() {
            return write!(f, "{im}");
        }
        match im.strip_prefix('-') {
            Some(rest) => write!(f, "{} - {}", format_rational(&self.re), rest),
            None => write!(f, "{} + {}", format_rational(&self.re), im),
        }
    }
}

impl fmt::Debug for CoeffQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffInput {
    Object(CoeffRepr),
    Text(String),
    Int(i64),
}

impl Serialize for CoeffQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CoeffRepr { re: format_rational(&self.re), im: format_rational(&self.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match CoeffInput::deserialize(d)? {
            CoeffInput::Object(CoeffRepr { re, im }) => Ok(CoeffQ {
                re: parse_rational(&re).map_err(D::Error::custom)?,
                im: parse_rational(&im).map_err(D::Error::custom)?,
            }),
            CoeffInput::Text(t) => t.parse().map_err(D::Error::custom),
            CoeffInput::Int(n) => Ok(CoeffQ::from_int(n)),
        }
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, m| acc * BigInt::from(m))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}
