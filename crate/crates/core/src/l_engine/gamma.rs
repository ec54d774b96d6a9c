use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module_algebra::{Certificate, Membership};
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::CoeffQ;

/// Finitely supported coefficients `a_{i,j}` (`1 ≤ i ≤ s`, `j ≥ 1`) of
///
/// ```text
/// L(f_1, …, f_s) = Σ_i Σ_j a_{i,j} · f_i^{(j)}
/// ```
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GammaRepr", into = "GammaRepr")]
pub struct GammaTable {
    s: usize,
    entries: BTreeMap<(usize, usize), CoeffQ>,
}

#[derive(Serialize, Deserialize)]
struct GammaRepr {
    s: usize,
    #[serde(default)]
    entries: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    i: usize,
    j: usize,
    a: CoeffQ,
}

impl TryFrom<GammaRepr> for GammaTable {
    type Error = Error;
    fn try_from(r: GammaRepr) -> Result<Self> {
        let mut g = GammaTable::zero(r.s)?;
        for e in r.entries {
            let prev = g.get(e.i, e.j);
            g.set(e.i, e.j, &prev + &e.a)?;
        }
        Ok(g)
    }
}

impl From<GammaTable> for GammaRepr {
    fn from(g: GammaTable) -> Self {
        GammaRepr {
            s: g.s,
            entries: g.entries.into_iter().map(|((i, j), a)| EntryRepr { i, j, a }).collect(),
        }
    }
}

impl GammaTable {
    /// The table of order `s` with no entries (`L = 0`).
    pub fn zero(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("operator order must be positive".into()));
        }
        Ok(GammaTable { s, entries: BTreeMap::new() })
    }

    pub fn new<I>(s: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), CoeffQ)>,
    {
        let mut g = Self::zero(s)?;
        for ((i, j), a) in entries {
            g.set(i, j, a)?;
        }
        Ok(g)
    }

    /// Order-1 table with the single entry `a_{1,1} = c`: the module of
    /// polynomials `f(x + c·y)`.
    pub fn translation(c: CoeffQ) -> Self {
        Self::new(1, [((1, 1), c)]).expect("order 1")
    }

    /// Order-1 table `a_{1,j} = coeffs[j-1]`.
    pub fn order_one(coeffs: &[CoeffQ]) -> Self {
        Self::new(1, coeffs.iter().enumerate().map(|(k, c)| ((1, k + 1), c.clone()))).expect("order 1")
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn get(&self, i: usize, j: usize) -> CoeffQ {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(CoeffQ::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, a: CoeffQ) -> Result<()> {
        if i == 0 || i > self.s || j == 0 {
            return Err(Error::InvalidArgument(format!(
                "entry a_({i},{j}) outside 1 <= i <= {}, j >= 1",
                self.s
            )));
        }
        if a.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), a);
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &CoeffQ)> {
        self.entries.iter().map(|(&(i, j), a)| (i, j, a))
    }

    pub fn max_j(&self) -> usize {
        self.entries.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The same table with every entry of derivative order `j > max_j` dropped.
    pub fn truncated(&self, max_j: usize) -> Self {
        GammaTable {
            s: self.s,
            entries: self.entries.iter().filter(|(k, _)| k.1 <= max_j).map(|(k, a)| (*k, a.clone())).collect(),
        }
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got == self.s {
            Ok(())
        } else {
            Err(Error::ArityMismatch { expected: self.s, got })
        }
    }
}

/// Evaluates `L(f_1, …, f_s)`.
pub fn apply_l(g: &GammaTable, tuple: &[UniPoly]) -> Result<UniPoly> {
    g.check_arity(tuple.len())?;
    Ok(apply_window(g, tuple.iter()))
}

fn apply_window<'a>(g: &GammaTable, window: impl Iterator<Item = &'a UniPoly>) -> UniPoly {
    let window: Vec<&UniPoly> = window.collect();
    let mut acc = UniPoly::zero();
    for (i, j, a) in g.entries() {
        let f = window[i - 1];
        if f.degree().below(j) {
            continue;
        }
        acc = &acc + &f.nth_derivative(j).scale(a);
    }
    acc
}

/// The element of `M_Γ` with initial coordinates `seeds`: `[F]_n = seeds[n]`
/// for `n < s` and `[F]_n = L([F]_{n-s}, …, [F]_{n-1})` afterwards.
///
/// Every `L` output has degree below the window maximum, so the sequence
/// reaches `s` consecutive zeros and stops.
pub fn generate(g: &GammaTable, seeds: &[UniPoly]) -> Result<BiPoly> {
    g.check_arity(seeds.len())?;
    let s = g.s;
    let mut coords: Vec<UniPoly> = seeds.to_vec();
    let mut zeros = coords.iter().rev().take_while(|f| f.is_zero()).count();
    while zeros < s {
        let n = coords.len();
        let next = apply_window(g, coords[n - s..].iter());
        zeros = if next.is_zero() { zeros + 1 } else { 0 };
        coords.push(next);
    }
    Ok(BiPoly::from_coords(coords))
}

/// Exact recursion check: `[F]_n = L(window)` for every `n` from `s` to
/// `deg_y F + s`. Beyond that range both sides vanish.
pub fn mgamma_contains(g: &GammaTable, f: &BiPoly) -> Membership {
    let s = g.s;
    let len = f.coords().len();
    if len == 0 {
        return Membership::yes();
    }
    let zero = UniPoly::zero();
    let at = |n: usize| f.coord_ref(n).unwrap_or(&zero);
    for n in s..len + s {
        let predicted = apply_window(g, (n - s..n).map(at));
        let residual = &predicted - at(n);
        if !residual.is_zero() {
            return Membership::no(Certificate::RecursionFails { n, residual });
        }
    }
    Membership::yes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_algebra::Certificate;

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn q(n: i64) -> CoeffQ {
        CoeffQ::from_int(n)
    }

    fn taylor() -> GammaTable {
        GammaTable::translation(q(1))
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply_l(&taylor(), &[u(&[0, 0, 1])]).unwrap(), u(&[0, 2]));
        let g = GammaTable::new(2, [((1, 1), q(1)), ((2, 2), q(3))]).unwrap();
        // (x³)' + 3 (x²)'' = 3x² + 6
        assert_eq!(apply_l(&g, &[u(&[0, 0, 0, 1]), u(&[0, 0, 1])]).unwrap(), u(&[6, 0, 3]));
        let z = GammaTable::zero(2).unwrap();
        assert!(apply_l(&z, &[u(&[1, 2, 3]), u(&[4])]).unwrap().is_zero());
        assert!(matches!(
            apply_l(&g, &[u(&[1])]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn generate_examples() {
        let sq = generate(&taylor(), &[u(&[0, 0, 1])]).unwrap();
        assert_eq!(sq.coords(), &[u(&[0, 0, 1]), u(&[0, 2]), u(&[2])]);
        let c = generate(&GammaTable::new(1, [((1, 2), q(7))]).unwrap(), &[u(&[5])]).unwrap();
        assert_eq!(c, BiPoly::from_x(u(&[5])));
        let z = generate(&GammaTable::zero(2).unwrap(), &[u(&[0, 1]), u(&[0, 0, 1])]).unwrap();
        assert_eq!(z.coords(), &[u(&[0, 1]), u(&[0, 0, 1])]);
        assert!(generate(&taylor(), &[]).is_err());
    }

    #[test]
    fn two_slot_sequence_outlives_seed_degree_plus_order() {
        // L = f_1' + f_2' with seeds (x², x²): 4x, 2x + 4, 6, 2, 0, 0.
        let g = GammaTable::new(2, [((1, 1), q(1)), ((2, 1), q(1))]).unwrap();
        let f = generate(&g, &[u(&[0, 0, 1]), u(&[0, 0, 1])]).unwrap();
        assert_eq!(
            f.coords(),
            &[u(&[0, 0, 1]), u(&[0, 0, 1]), u(&[0, 4]), u(&[4, 2]), u(&[6]), u(&[2])]
        );
    }

    #[test]
    fn membership_examples() {
        let sq = generate(&taylor(), &[u(&[0, 0, 1])]).unwrap();
        assert!(mgamma_contains(&taylor(), &sq).contains);
        let m = mgamma_contains(&taylor(), &BiPoly::from_x(u(&[0, 1])));
        assert!(!m.contains);
        match m.certificate {
            Some(Certificate::RecursionFails { n, residual }) => {
                assert_eq!(n, 1);
                assert_eq!(residual, u(&[1]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(mgamma_contains(&taylor(), &BiPoly::zero()).contains);
    }

    #[test]
    fn order_two_check_covers_the_tail() {
        // Coordinates (x, x) but nothing after: L = f_1' demands [F]_2 = 1.
        let g = GammaTable::new(2, [((1, 1), q(1))]).unwrap();
        let f = BiPoly::from_coords(vec![u(&[0, 1]), u(&[0, 1])]);
        let m = mgamma_contains(&g, &f);
        assert!(!m.contains);
        assert!(matches!(m.certificate, Some(Certificate::RecursionFails { n: 2, .. })));
        let h = BiPoly::from_coords(vec![u(&[0, 1]), UniPoly::zero()]);
        let m = mgamma_contains(&g, &BiPoly::from_coords(vec![UniPoly::zero(), u(&[0, 1])]));
        assert!(matches!(m.certificate, Some(Certificate::RecursionFails { n: 3, .. })));
        assert!(!mgamma_contains(&g, &h).contains);
    }

    #[test]
    fn json_shape() {
        let g = GammaTable::new(2, [((2, 3), CoeffQ::ratio(1, 2)), ((1, 1), q(1))]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"s":2,"entries":[{"i":1,"j":1,"a":{"re":"1","im":"0"}},{"i":2,"j":3,"a":{"re":"1/2","im":"0"}}]}"#
        );
        assert_eq!(serde_json::from_str::<GammaTable>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GammaTable>(r#"{"s":1,"entries":[{"i":2,"j":1,"a":"1"}]}"#).is_err());
        assert!(serde_json::from_str::<GammaTable>(r#"{"s":0}"#).is_err());
    }
}
