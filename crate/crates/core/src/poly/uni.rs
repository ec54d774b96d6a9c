use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Degree;
use crate::scalar::{binomial, falling, CoeffQ};

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of `x^k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<CoeffQ>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<CoeffQ>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| CoeffQ::from_int(c)).collect())
    }

    pub fn constant(c: CoeffQ) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: CoeffQ, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![CoeffQ::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(CoeffQ::one(), 1)
    }

    pub fn coeffs(&self) -> &[CoeffQ] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CoeffQ> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> CoeffQ {
        self.coeffs.get(k).cloned().unwrap_or_else(CoeffQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        Degree::of_len(self.coeffs.len())
    }

    pub fn leading_coeff(&self) -> Option<&CoeffQ> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &CoeffQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        self.nth_derivative(1)
    }

    /// `f^{(j)}`; the zero polynomial once `j` exceeds the degree.
    pub fn nth_derivative(&self, j: usize) -> Self {
        if j == 0 {
            return self.clone();
        }
        if j >= self.coeffs.len() {
            return Self::zero();
        }
        let coeffs = (j..self.coeffs.len())
            .map(|k| self.coeffs[k].scale_int(&falling(k, j)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &CoeffQ) -> CoeffQ {
        let mut acc = CoeffQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc += c;
        }
        acc
    }

    /// Taylor shift: returns `g(x) = f(x + a)`.
    pub fn shift(&self, a: &CoeffQ) -> Self {
        if a.is_zero() || self.coeffs.len() < 2 {
            return self.clone();
        }
        let n = self.coeffs.len();
        let powers: Vec<CoeffQ> = std::iter::successors(Some(CoeffQ::one()), |p| Some(p * a))
            .take(n)
            .collect();
        let coeffs = (0..n)
            .map(|k| {
                (k..n)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| (&self.coeffs[i] * &powers[i - k]).scale_int(&binomial(i, k)))
                    .sum()
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| c.div_int(k)).collect() }
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, d) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += d;
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), CoeffQ::zero());
        }
        for (c, d) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= d;
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![CoeffQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

/// Renders `c·x^k` terms in ascending powers, e.g. `1 + 2*x - x^3`.
pub(crate) fn render_terms<I>(terms: I) -> String
where
    I: IntoIterator<Item = (CoeffQ, String)>,
{
    let mut out = String::new();
    for (c, mono) in terms {
        let complex = !c.is_real() && !c.re().is_zero();
        let negative = c.is_real() && c.re() < &num_rational::BigRational::zero();
        let mag = if negative { -&c } else { c.clone() };
        let coef = if complex { format!("({mag})") } else { mag.to_string() };
        let body = match (mono.is_empty(), mag.is_one()) {
            (true, _) => coef,
            (false, true) => mono,
            (false, false) => format!("{coef}*{mono}"),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn power_name(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), power_name("x", k)));
        f.write_str(&render_terms(terms))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Vec::<CoeffQ>::deserialize(d).map(UniPoly::from_coeffs)
    }
}
