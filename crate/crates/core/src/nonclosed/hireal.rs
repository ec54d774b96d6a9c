use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use dashu_int::ops::{BitTest, UnsignedAbs};
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

type F = FBig<HalfEven>;

/// Working precision in bits.
pub const PRECISION: usize = 192;

fn ctx() -> Context<HalfEven> {
    Context::new(PRECISION)
}

/// Binary floating-point real with a 192-bit significand and an exponent
/// range wide enough for `e_2(40) = exp(e^40)`.
///
/// Every operation rounds to [`PRECISION`] bits, nearest-even.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HiReal(F);

fn ln2() -> &'static F {
    static LN2: OnceLock<F> = OnceLock::new();
    LN2.get_or_init(|| ctx().ln(F::from(2).repr()).value())
}

fn ln10() -> &'static F {
    static LN10: OnceLock<F> = OnceLock::new();
    LN10.get_or_init(|| ctx().ln(F::from(10).repr()).value())
}

impl HiReal {
    pub fn zero() -> Self {
        HiReal(F::ZERO)
    }

    pub fn one() -> Self {
        HiReal(F::ONE)
    }

    pub fn from_i64(n: i64) -> Self {
        HiReal(F::from(n)).rounded()
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        HiReal(F::try_from(x).expect("finite f64")).rounded()
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let i = IBig::from_str(&n.to_string()).expect("decimal integer");
        HiReal(F::from(i)).rounded()
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::from_bigint(r.numer()).div(&Self::from_bigint(r.denom()))
    }

    /// `2^k`, exactly.
    pub fn pow2(k: isize) -> Self {
        HiReal(F::from_parts(IBig::from(1), k))
    }

    pub fn ln_2() -> Self {
        HiReal(ln2().clone())
    }

    pub fn ln_10() -> Self {
        HiReal(ln10().clone())
    }

    fn rounded(self) -> Self {
        HiReal(self.0.with_precision(PRECISION).value())
    }

    /// When one operand is below half an ulp of the other it cannot change
    /// the rounded sum; skipping it avoids aligning significands across
    /// exponent gaps of billions of bits.
    fn dominant<'a>(a: &'a Self, b: &'a Self) -> Option<&'a Self> {
        let (ma, mb) = (a.log2_magnitude()?, b.log2_magnitude()?);
        let gap = PRECISION as isize + 2;
        if ma - mb > gap {
            Some(a)
        } else if mb - ma > gap {
            Some(b)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match Self::dominant(self, o) {
            Some(d) if std::ptr::eq(d, self) => self.clone(),
            Some(_) => o.clone(),
            None => HiReal(ctx().add(self.0.repr(), o.0.repr()).value()),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        HiReal(ctx().mul(self.0.repr(), o.0.repr()).value())
    }

    pub fn div(&self, o: &Self) -> Self {
        HiReal(ctx().div(self.0.repr(), o.0.repr()).value())
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k))
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: isize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.0.repr();
        HiReal(F::from_parts(r.significand().clone(), r.exponent() + k))
    }

    pub fn neg(&self) -> Self {
        HiReal(-self.0.clone())
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn exp(&self) -> Self {
        HiReal(ctx().exp(self.0.repr()).value())
    }

    /// `ln(1 + x)` for `x > −1`.
    pub fn ln_1p(&self) -> Self {
        HiReal(ctx().ln_1p(self.0.repr()).value())
    }

    /// Natural logarithm of a positive value.
    ///
    /// Computed as `ln(significand) + exponent · ln 2`, which stays cheap for
    /// numbers whose binary exponent is in the billions.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of a non-positive value");
        let r = self.0.repr();
        let sig = ctx().ln(F::from(r.significand().clone()).repr()).value();
        let shift = ctx().mul(F::from(r.exponent() as i64).repr(), ln2().repr()).value();
        HiReal(ctx().add(sig.repr(), shift.repr()).value())
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.repr().significand() < &IBig::ZERO
    }

    pub fn is_positive(&self) -> bool {
        self.0.repr().significand() > &IBig::ZERO
    }

    pub fn max(self, o: Self) -> Self {
        if o > self {
            o
        } else {
            self
        }
    }

    pub fn min(self, o: Self) -> Self {
        if o < self {
            o
        } else {
            self
        }
    }

    /// Nearest `f64`; infinite when out of range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn floor_i64(&self) -> Option<i64> {
        i64::try_from(self.0.floor().to_int().value()).ok()
    }

    /// Approximate binary magnitude: `floor(log2 |x|)` up to one unit.
    pub fn log2_magnitude(&self) -> Option<isize> {
        if self.is_zero() {
            return None;
        }
        let r = self.0.repr();
        Some(r.exponent() + r.significand().unsigned_abs().bit_len() as isize - 1)
    }

    /// Scientific notation with `digits` significant digits, e.g.
    /// `-1.5062e3`. Works for values far outside the `f64` range.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let sign = if self.is_negative() { "-" } else { "" };
        let log10 = self.abs().ln().div(&Self::ln_10());
        let mut k = log10.floor_i64().expect("decimal exponent fits in i64");
        let frac = log10.sub(&Self::from_i64(k));
        let m = frac.mul(&Self::ln_10()).exp().to_f64();
        let mut body = format!("{:.*}", digits - 1, m);
        if body.starts_with("10") {
            k += 1;
            body = format!("{:.*}", digits - 1, 1.0);
        }
        format!("{sign}{body}e{k}")
    }
}

impl fmt::Display for HiReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(f.precision().unwrap_or(17)))
    }
}

impl fmt::Debug for HiReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HiReal({})", self.to_sci_string(25))
    }
}

impl Serialize for HiReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sci_string(20))
    }
}

/// Compares `a` and `b` and reports whether `a < b` with room to spare:
/// the gap must exceed the relative tolerance `2^-40 · max(|a|, |b|)`.
pub fn clearly_less(a: &HiReal, b: &HiReal) -> bool {
    let scale = a.abs().max(b.abs()).mul_pow2(-40);
    b.sub(a).cmp(&scale) == Ordering::Greater
}
