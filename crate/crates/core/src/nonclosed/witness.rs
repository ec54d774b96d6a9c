//! Exact checks at small `n`: which `x`-only polynomials lie in an order-1
//! module, and how the log-scale norm bounds compare with exact norms of
//! `L^k(g_n)` for a table whose numbers stay small.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::hireal::HiReal;
use super::lognum::{LogNum, Mode, Sign};
use crate::error::{Error, Result};
use crate::l_engine::{apply_l, mgamma_contains, GammaTable};
use crate::module_algebra::Certificate;
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::{factorial, CoeffQ};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub polynomial: UniPoly,
    pub in_module: bool,
    /// First index where the recursion fails.
    pub n: Option<usize>,
    /// `L([F]_{n−1}) − [F]_n` at that index.
    pub residual: Option<UniPoly>,
}

/// Decides whether `f(x)`, as an element of `ℂ[x, y]`, lies in the order-1
/// module of `table`.
pub fn witness_not_in_m(table: &GammaTable, f: &UniPoly) -> Result<WitnessReport> {
    if table.s() != 1 {
        return Err(Error::InvalidArgument(format!("expected an order-1 table, got order {}", table.s())));
    }
    let m = mgamma_contains(table, &BiPoly::from_x(f.clone()));
    let (n, residual) = match m.certificate {
        Some(Certificate::RecursionFails { n, residual }) => (Some(n), Some(residual)),
        _ => (None, None),
    };
    Ok(WitnessReport { polynomial: f.clone(), in_module: m.contains, n, residual })
}

/// `x ∉ M` for the Taylor table `a_{1,1} = 1`: the recursion breaks at
/// `n = 1` with residual `1`.
pub fn witness_x_not_in_m() -> WitnessReport {
    witness_not_in_m(&GammaTable::translation(CoeffQ::from_int(1)), &UniPoly::x()).expect("order-1 table")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeRow {
    pub k: usize,
    pub exact_norm: CoeffQ,
    /// `ln ‖L^k g_n‖`, computed from the exact norm.
    pub exact_log: LogNum,
    /// The log-scale upper bound for the same norm.
    pub bound_log: LogNum,
    pub sound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeReport {
    pub n: usize,
    pub epsilon: CoeffQ,
    pub g: UniPoly,
    pub rows: Vec<BridgeRow>,
}

fn ln_big(v: &num_bigint::BigInt) -> HiReal {
    HiReal::from_bigint(v).ln()
}

fn ln_rational(v: &num_rational::BigRational) -> HiReal {
    ln_big(v.numer()).sub(&ln_big(v.denom()))
}

/// Largest coefficient modulus of a polynomial with real coefficients.
fn real_norm(p: &UniPoly) -> Result<CoeffQ> {
    let mut best = num_rational::BigRational::zero();
    for c in p.coeffs() {
        if !c.is_real() {
            return Err(Error::InvalidArgument("bridge needs real coefficients".into()));
        }
        best = best.max(c.re().abs());
    }
    Ok(CoeffQ::real(best))
}

/// Runs the norm-bound chain on an order-1 table `L f = Σ a_j f^{(j)}` with
/// `g_n = x + ε_n x^n`, `ε_n = 1/(|a_n|·n!)`, and compares each step with
/// the exact `‖L^k g_n‖` for `k = 1..=n`.
///
/// The bounds are `ln ‖L g_n‖ ≤ ln ε_n + ln max_{i<n}|a_i| + ln n!` and, for
/// each later step, `+ ln((n−1)!·Σ_{i<n}|a_i|)`.
pub fn exactness_bridge(coeffs: &[CoeffQ], n: usize) -> Result<BridgeReport> {
    if n < 2 || coeffs.len() < n {
        return Err(Error::InvalidArgument(format!("need 2 <= n <= {}, got {n}", coeffs.len())));
    }
    if coeffs.iter().any(|c| !c.is_real()) {
        return Err(Error::InvalidArgument("bridge needs real coefficients".into()));
    }
    let abs: Vec<_> = coeffs.iter().map(|c| c.re().abs()).collect();
    if abs[n - 1].is_zero() {
        return Err(Error::InvalidArgument(format!("a_{n} must be nonzero")));
    }
    let table = GammaTable::order_one(coeffs);
    let n_fact = factorial(n);
    let epsilon = CoeffQ::real(abs[n - 1].clone()).scale_int(&n_fact).inv().expect("nonzero");
    let g = &UniPoly::x() + &UniPoly::monomial(epsilon.clone(), n);

    let ub = Mode::UpperBound;
    let max_low = abs[..n - 1].iter().max().cloned().unwrap_or_else(num_rational::BigRational::zero);
    let sum_low: num_rational::BigRational = abs[..n - 1].iter().sum();
    let first = ln_rational(&abs[n - 1]).neg().add(&ln_rational(&max_low));
    let step = ln_big(&factorial(n - 1)).add(&ln_rational(&sum_low));

    let mut rows = Vec::with_capacity(n);
    let mut cur = g.clone();
    let mut bound = first;
    for k in 1..=n {
        cur = apply_l(&table, std::slice::from_ref(&cur))?;
        if k > 1 {
            bound = bound.add(&step);
        }
        let exact_norm = real_norm(&cur)?;
        let exact_log = if exact_norm.is_zero() {
            LogNum::zero(Mode::Nearest)
        } else {
            LogNum::from_log(Sign::Pos, ln_rational(exact_norm.re()), Mode::Nearest)
        };
        let bound_log = LogNum::from_log(Sign::Pos, bound.clone(), ub);
        let sound = exact_log <= bound_log;
        rows.push(BridgeRow { k, exact_norm, exact_log, bound_log, sound });
    }
    Ok(BridgeReport { n, epsilon, g, rows })
}
