use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{render_terms, Degree, Mono, UniPoly};
use crate::scalar::{factorial, CoeffQ};

/// Bivariate polynomial in coordinate form: `coords[n] = [F]_n` with
/// `F(x, y) = Σ coords[n](x) · yⁿ / n!`.
///
/// The trailing coordinate is never zero, so equal polynomials have equal
/// `coords`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "CoordsRepr", into = "CoordsRepr")]
pub struct BiPoly {
    coords: Vec<UniPoly>,
}

#[derive(Serialize, Deserialize)]
struct CoordsRepr {
    coords: Vec<UniPoly>,
}

impl From<CoordsRepr> for BiPoly {
    fn from(r: CoordsRepr) -> Self {
        BiPoly::from_coords(r.coords)
    }
}

impl From<BiPoly> for CoordsRepr {
    fn from(p: BiPoly) -> Self {
        CoordsRepr { coords: p.coords }
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coords: Vec::new() }
    }

    pub fn from_coords(mut coords: Vec<UniPoly>) -> Self {
        while coords.last().is_some_and(UniPoly::is_zero) {
            coords.pop();
        }
        BiPoly { coords }
    }

    /// The polynomial `f(x)`, constant in `y`.
    pub fn from_x(f: UniPoly) -> Self {
        Self::from_coords(vec![f])
    }

    /// `c · x^i · y^j`.
    pub fn monomial(c: CoeffQ, i: usize, j: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coords = vec![UniPoly::zero(); j + 1];
        coords[j] = UniPoly::monomial(c.scale_int(&factorial(j)), i);
        BiPoly { coords }
    }

    pub fn coords(&self) -> &[UniPoly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<UniPoly> {
        self.coords
    }

    /// `[F]_n`, the zero polynomial past the last stored coordinate.
    pub fn coord(&self, n: usize) -> UniPoly {
        self.coords.get(n).cloned().unwrap_or_default()
    }

    pub fn coord_ref(&self, n: usize) -> Option<&UniPoly> {
        self.coords.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn deg_x(&self) -> Degree {
        self.coords.iter().map(UniPoly::degree).max().unwrap_or(Degree::NegInf)
    }

    pub fn deg_y(&self) -> Degree {
        Degree::of_len(self.coords.len())
    }

    pub fn d_dx(&self) -> Self {
        Self::from_coords(self.coords.iter().map(UniPoly::derivative).collect())
    }

    pub fn d_dy(&self) -> Self {
        Self::from_coords(self.coords.iter().skip(1).cloned().collect())
    }

    /// `∂x^i ∂y^j F`.
    pub fn partial(&self, i: usize, j: usize) -> Self {
        Self::from_coords(self.coords.iter().skip(j).map(|f| f.nth_derivative(i)).collect())
    }

    pub fn scale(&self, c: &CoeffQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly { coords: self.coords.iter().map(|f| f.scale(c)).collect() }
    }

    /// Returns `G(x, y) = F(x + a, y + b)`.
    ///
    /// The `x` translation is a Taylor shift of each coordinate; the `y`
    /// translation mixes coordinates as `[G]_k = Σ_m [F]_{k+m} · bᵐ/m!`.
    pub fn shift(&self, a: &CoeffQ, b: &CoeffQ) -> Self {
        let shifted: Vec<UniPoly> = self.coords.iter().map(|f| f.shift(a)).collect();
        if b.is_zero() {
            return Self::from_coords(shifted);
        }
        let n = shifted.len();
        let mut weights = Vec::with_capacity(n);
        let mut w = CoeffQ::one();
        for m in 0..n {
            if m > 0 {
                w = (&w * b).div_int(&m.into());
            }
            weights.push(w.clone());
        }
        let coords = (0..n)
            .map(|k| {
                (0..n - k).fold(UniPoly::zero(), |acc, m| &acc + &shifted[k + m].scale(&weights[m]))
            })
            .collect();
        Self::from_coords(coords)
    }

    pub fn eval(&self, x: &CoeffQ, y: &CoeffQ) -> CoeffQ {
        let mut acc = CoeffQ::zero();
        let mut w = CoeffQ::one();
        for (n, f) in self.coords.iter().enumerate() {
            if n > 0 {
                w = (&w * y).div_int(&n.into());
            }
            acc += &(&f.eval(x) * &w);
        }
        acc
    }

    /// Ordinary monomial coefficients: `x^i y^j ↦ [F]_j[i] / j!`.
    pub fn monomials(&self) -> BTreeMap<Mono, CoeffQ> {
        let mut out = BTreeMap::new();
        for (j, f) in self.coords.iter().enumerate() {
            let fact = factorial(j);
            for (i, c) in f.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.insert(Mono::new(i, j), c.div_int(&fact));
                }
            }
        }
        out
    }

    pub fn from_monomials<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a Mono, &'a CoeffQ)>,
    {
        let mut coords: Vec<Vec<CoeffQ>> = Vec::new();
        for (m, c) in terms {
            if coords.len() <= m.y {
                coords.resize(m.y + 1, Vec::new());
            }
            let row = &mut coords[m.y];
            if row.len() <= m.x {
                row.resize(m.x + 1, CoeffQ::zero());
            }
            row[m.x] += &c.scale_int(&factorial(m.y));
        }
        Self::from_coords(coords.into_iter().map(UniPoly::from_coeffs).collect())
    }

    /// Full product, computed through monomial coefficients.
    pub fn mul(&self, rhs: &BiPoly) -> BiPoly {
        let (a, b) = (self.monomials(), rhs.monomials());
        let mut out: BTreeMap<Mono, CoeffQ> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *out.entry(Mono::new(ma.x + mb.x, ma.y + mb.y)).or_insert_with(CoeffQ::zero) +=
                    &(ca * cb);
            }
        }
        Self::from_monomials(out.iter())
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(BiPoly::from_x(UniPoly::constant(CoeffQ::one())), |acc, _| acc.mul(self))
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coords.len().max(rhs.coords.len());
        BiPoly::from_coords((0..n).map(|k| &self.coord(k) + &rhs.coord(k)).collect())
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coords.len().max(rhs.coords.len());
        BiPoly::from_coords((0..n).map(|k| &self.coord(k) - &rhs.coord(k)).collect())
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { coords: self.coords.iter().map(|f| -f).collect() }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl fmt::Display for BiPoly {
    /// Conventional monomial notation, expanding the `yⁿ/n!` convention.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.monomials().into_iter().rev().map(|(m, c)| {
            let name = if m.x == 0 && m.y == 0 { String::new() } else { m.to_string() };
            (c, name)
        });
        f.write_str(&render_terms(terms))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}
