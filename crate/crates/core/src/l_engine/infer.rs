use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gamma::{generate, GammaTable};
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::linalg::{axpy, Echelon, Matrix, SparseVec};
use crate::module_algebra::{echelon_basis, echelon_of, is_translation_invariant, low_degree_part, seed_basis};
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::{factorial, CoeffQ};

/// Key of the combined vector `(Φ_s F, [F]_s)` used by [`infer_l`]. The
/// tuple part sorts above the target part, so every echelon pivot lands in
/// the tuple whenever `Φ_s` is injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PairKey {
    Target(usize),
    Tuple { power: usize, slot: usize },
}

fn pair_vec(s: usize, f: &BiPoly) -> SparseVec<PairKey> {
    let mut v = SparseVec::new();
    for slot in 0..=s {
        let Some(c) = f.coord_ref(slot) else { break };
        for (power, a) in c.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let key = if slot < s { PairKey::Tuple { power, slot } } else { PairKey::Target(power) };
            v.insert(key, a.clone());
        }
    }
    v
}

fn split_pair(s: usize, v: &SparseVec<PairKey>) -> (Vec<UniPoly>, UniPoly) {
    let mut tuple = vec![Vec::new(); s];
    let mut target = Vec::new();
    let put = |row: &mut Vec<CoeffQ>, k: usize, c: &CoeffQ| {
        if row.len() <= k {
            row.resize(k + 1, CoeffQ::zero());
        }
        row[k] = c.clone();
    };
    for (key, c) in v {
        match *key {
            PairKey::Target(k) => put(&mut target, k, c),
            PairKey::Tuple { power, slot } => put(&mut tuple[slot], power, c),
        }
    }
    (tuple.into_iter().map(UniPoly::from_coeffs).collect(), UniPoly::from_coeffs(target))
}

/// A nonzero element of `span(elems)` whose first `s` coordinates vanish.
fn kernel_witness(elems: &[BiPoly], s: usize, cancel: &CancelToken) -> Result<Option<BiPoly>> {
    let cols: Vec<SparseVec<(usize, usize)>> = elems
        .iter()
        .map(|f| {
            let mut v = SparseVec::new();
            for n in 0..s {
                for (k, c) in f.coord(n).coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        v.insert((n, k), c.clone());
                    }
                }
            }
            v
        })
        .collect();
    let mut keys: Vec<(usize, usize)> = cols.iter().flat_map(|v| v.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let mut a = Matrix::zeros(keys.len(), elems.len());
    for (j, v) in cols.iter().enumerate() {
        for (r, k) in keys.iter().enumerate() {
            if let Some(c) = v.get(k) {
                a[(r, j)] = c.clone();
            }
        }
    }
    for w in a.kernel_cancellable(cancel)? {
        let mut acc = SparseVec::new();
        for (c, f) in w.iter().zip(elems) {
            axpy(&mut acc, c, &f.monomials());
        }
        if !acc.is_empty() {
            return Ok(Some(BiPoly::from_monomials(acc.iter())));
        }
    }
    Ok(None)
}

pub fn infer_l(basis: &[BiPoly], s: usize, deg_bound: usize) -> Result<GammaTable> {
    infer_l_cancellable(basis, s, deg_bound, &CancelToken::new())
}

/// Recovers the operator `L` of an `L`-module of order `s` from a basis.
///
/// Works on `T`, the elements with `deg_x ≤ deg_bound`. Constants come
/// first: `L` kills constant tuples, so every `F ∈ T` with constant
/// `Φ_s F` must have `[F]_s = 0`. Layer `d` then uses the elements whose
/// first `s` coordinates have degree `≤ d`: after subtracting the known
/// lower layers, `[F]_s` minus `Σ_{j<d} a_{i,j} f_i^{(j)}` is a constant
/// equal to `Σ_i a_{i,d} · d! · α_i`, where `α_i` is the `x^d` coefficient
/// of `f_i`. Coefficients left free by these equations are set to zero and
/// reported through [`Error::Underdetermined`].
pub fn infer_l_cancellable(basis: &[BiPoly], s: usize, deg_bound: usize, cancel: &CancelToken) -> Result<GammaTable> {
    if s == 0 || deg_bound == 0 {
        return Err(Error::InvalidArgument("s and deg_bound must be positive".into()));
    }
    let span = echelon_basis(&echelon_of(basis));
    if !is_translation_invariant(&span) {
        return Err(Error::NotTranslationInvariant);
    }
    let t = low_degree_part(&span, deg_bound + 1);
    cancel.check()?;
    if let Some(witness) = kernel_witness(&t, s, cancel)? {
        return Err(Error::NotAnLModule { s, witness });
    }

    let mut pairs = Echelon::new();
    for f in &t {
        pairs.insert(&pair_vec(s, f));
    }
    let rows: Vec<(usize, Vec<UniPoly>, UniPoly)> = pairs
        .rows()
        .map(|(pivot, v)| {
            let PairKey::Tuple { power, .. } = *pivot else { unreachable!("Φ_s is injective on T") };
            let (tuple, target) = split_pair(s, v);
            (power, tuple, target)
        })
        .collect();

    let mut gamma = GammaTable::zero(s)?;
    let mut free_layers = Vec::new();
    for d in 0..=deg_bound {
        cancel.check()?;
        let layer: Vec<&(usize, Vec<UniPoly>, UniPoly)> = rows.iter().filter(|r| r.0 == d).collect();
        let mut lhs = Vec::with_capacity(layer.len());
        let mut rhs = Vec::with_capacity(layer.len());
        for (_, tuple, target) in &layer {
            let mut residual = target.clone();
            for (i, j, a) in gamma.entries() {
                residual = &residual - &tuple[i - 1].nth_derivative(j).scale(a);
            }
            if !residual.degree().below(1) {
                return Err(Error::Inconsistent { layer: d });
            }
            if d == 0 {
                if !residual.is_zero() {
                    return Err(Error::Inconsistent { layer: 0 });
                }
                continue;
            }
            let fact = factorial(d);
            lhs.push(tuple.iter().map(|f| f.coeff(d).scale_int(&fact)).collect::<Vec<_>>());
            rhs.push(residual.coeff(0));
        }
        if d == 0 {
            continue;
        }
        let a = Matrix::from_rows(lhs).expect("rows have length s");
        let a = if a.nrows() == 0 { Matrix::zeros(0, s) } else { a };
        let Some(sol) = a.solve(&rhs)? else {
            return Err(Error::Inconsistent { layer: d });
        };
        if a.rank() < s {
            free_layers.push(d);
        }
        for (i, c) in sol.into_iter().enumerate() {
            gamma.set(i + 1, d, c)?;
        }
    }
    if !free_layers.is_empty() {
        return Err(Error::Underdetermined { free_layers });
    }
    Ok(gamma)
}

/// Why the reported order cannot be lowered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCertificate {
    /// Dimension of the (truncated) span that was analysed.
    pub dim: usize,
    /// Coordinates `0..compared` were used; higher ones vanish on the span.
    pub compared: usize,
    /// A nonzero element whose first `order − 1` coordinates vanish; absent
    /// when the order is 1.
    pub witness: Option<BiPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: usize,
    pub deg_bound: usize,
    pub certificate: OrderCertificate,
}

/// `rank[k]` = rank of the span restricted to coordinates `0..k`, for `k`
/// up to the first `k` reaching the full rank.
fn prefix_ranks(elems: &[BiPoly], cancel: &CancelToken) -> Result<(Vec<usize>, usize, usize)> {
    let full = echelon_of(elems).rank();
    let height = elems.iter().map(|f| f.coords().len()).max().unwrap_or(0);
    let mut cols: Echelon<usize> = Echelon::new();
    let mut ranks = vec![0];
    for n in 0..height {
        if *ranks.last().unwrap() == full {
            break;
        }
        cancel.check()?;
        let width = elems.iter().map(|f| f.coord(n).coeffs().len()).max().unwrap_or(0);
        for k in 0..width {
            let col: SparseVec<usize> = elems
                .iter()
                .enumerate()
                .filter_map(|(j, f)| {
                    let c = f.coord(n).coeff(k);
                    (!c.is_zero()).then_some((j, c))
                })
                .collect();
            cols.insert(&col);
        }
        ranks.push(cols.rank());
    }
    Ok((ranks, full, height))
}

fn order_report(elems: &[BiPoly], deg_bound: usize, cancel: &CancelToken) -> Result<OrderReport> {
    let (ranks, dim, height) = prefix_ranks(elems, cancel)?;
    let order = ranks.iter().position(|&r| r == dim).unwrap_or(ranks.len()).max(1);
    let witness = if order > 1 { kernel_witness(elems, order - 1, cancel)? } else { None };
    Ok(OrderReport { order, deg_bound, certificate: OrderCertificate { dim, compared: height, witness } })
}

pub fn order_of_module(basis: &[BiPoly], deg_bound: usize) -> Option<usize> {
    order_of_module_cancellable(basis, deg_bound, &CancelToken::new()).expect("never cancelled")
}

/// Smallest `s ≤ deg_bound` such that no nonzero element of `span(basis)`
/// has `[F]_0 = … = [F]_{s−1} = 0`.
pub fn order_of_module_cancellable(basis: &[BiPoly], deg_bound: usize, cancel: &CancelToken) -> Result<Option<usize>> {
    let report = order_report(basis, deg_bound, cancel)?;
    Ok((report.order <= deg_bound).then_some(report.order))
}

/// Elements of `M_Γ` seeded by `e_i · x^k`, `k < deg_bound`.
pub fn truncated_basis(g: &GammaTable, deg_bound: usize) -> Vec<BiPoly> {
    seed_basis(g.s(), deg_bound).iter().map(|seed| generate(g, seed).expect("arity matches")).collect()
}

pub fn order_of_sum(g1: &GammaTable, g2: &GammaTable, deg_bound: usize) -> Result<OrderReport> {
    order_of_sum_cancellable(g1, g2, deg_bound, &CancelToken::new())
}

/// Order of `M_{Γ1} + M_{Γ2}` restricted to seeds of degree `< deg_bound`.
///
/// Every coordinate of the finitely many generated elements is compared, so
/// the answer is exact for the truncated sum. A larger bound can only raise
/// it.
pub fn order_of_sum_cancellable(g1: &GammaTable, g2: &GammaTable, deg_bound: usize, cancel: &CancelToken) -> Result<OrderReport> {
    if deg_bound == 0 {
        return Err(Error::InvalidArgument("deg_bound must be positive".into()));
    }
    let mut elems = truncated_basis(g1, deg_bound);
    elems.extend(truncated_basis(g2, deg_bound));
    order_report(&elems, deg_bound, cancel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_algebra::derivative_closure;

    fn q(n: i64) -> CoeffQ {
        CoeffQ::from_int(n)
    }

    fn xy(c: i64, i: usize, j: usize) -> BiPoly {
        BiPoly::monomial(q(c), i, j)
    }

    #[test]
    fn infers_taylor_operator() {
        let g = GammaTable::translation(q(1));
        let basis = truncated_basis(&g, 6);
        assert_eq!(infer_l(&basis, 1, 5).unwrap(), g);
    }

    #[test]
    fn infers_order_two_operator() {
        let g = GammaTable::new(2, [((1, 1), q(1)), ((2, 1), CoeffQ::ratio(-1, 2)), ((2, 3), CoeffQ::ratio(3, 7))]).unwrap();
        let basis = truncated_basis(&g, 7);
        assert_eq!(infer_l(&basis, 2, 6).unwrap(), g);
    }

    #[test]
    fn md_is_not_an_l_module() {
        let gens: Vec<BiPoly> = (0..4).map(|n| xy(1, 2, n)).collect();
        let basis = derivative_closure(&gens);
        match infer_l(&basis, 2, 3) {
            Err(Error::NotAnLModule { s: 2, witness }) => {
                assert!(!witness.is_zero());
                assert!(witness.coord(0).is_zero() && witness.coord(1).is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partial_span_is_underdetermined() {
        // span{1, x + y} pins a_{1,1} and nothing above it.
        let basis = derivative_closure(&[generate(&GammaTable::translation(q(1)), &[UniPoly::x()]).unwrap()]);
        match infer_l(&basis, 1, 3) {
            Err(Error::Underdetermined { free_layers }) => assert_eq!(free_layers, vec![2, 3]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(infer_l(&basis, 1, 1).unwrap(), GammaTable::translation(q(1)));
    }

    #[test]
    fn rejects_non_invariant_input() {
        assert!(matches!(infer_l(&[xy(1, 2, 0)], 1, 2), Err(Error::NotTranslationInvariant)));
    }

    #[test]
    fn module_orders() {
        assert_eq!(order_of_module(&truncated_basis(&GammaTable::translation(q(1)), 5), 5), Some(1));
        // f(x) + g(x)·y
        let two: Vec<BiPoly> = (0..4).flat_map(|k| [xy(1, k, 0), xy(1, k, 1)]).collect();
        assert_eq!(order_of_module(&two, 5), Some(2));
        let md2: Vec<BiPoly> = (0..6).flat_map(|j| [xy(1, 0, j), xy(1, 1, j)]).collect();
        assert_eq!(order_of_module(&md2, 5), None);
        assert_eq!(order_of_module(&[], 3), Some(1));
    }

    #[test]
    fn sum_orders() {
        let s1 = GammaTable::translation(q(1));
        let s2 = GammaTable::translation(q(2));
        let r = order_of_sum(&s1, &s2, 4).unwrap();
        assert_eq!(r.order, 2);
        let w = r.certificate.witness.unwrap();
        assert!(!w.is_zero() && w.coord(0).is_zero());
        assert_eq!(order_of_sum(&s1, &s1, 4).unwrap().order, 1);
        assert_eq!(order_of_sum(&s1, &GammaTable::zero(1).unwrap(), 4).unwrap().order, 2);
    }

    #[test]
    fn sum_order_matches_module_order_of_union() {
        let g1 = GammaTable::new(1, [((1, 1), q(1)), ((1, 2), q(3))]).unwrap();
        let g2 = GammaTable::new(2, [((2, 1), q(-1))]).unwrap();
        let mut union = truncated_basis(&g1, 5);
        union.extend(truncated_basis(&g2, 5));
        assert_eq!(Some(order_of_sum(&g1, &g2, 5).unwrap().order), order_of_module(&union, 20));
    }

    #[test]
    fn cancellation_reaches_the_kernels() {
        let t = CancelToken::new();
        t.cancel();
        let g = GammaTable::translation(q(1));
        assert!(matches!(order_of_sum_cancellable(&g, &g, 3, &t), Err(Error::Cancelled)));
        assert!(matches!(infer_l_cancellable(&truncated_basis(&g, 3), 1, 2, &t), Err(Error::Cancelled)));
    }
}
