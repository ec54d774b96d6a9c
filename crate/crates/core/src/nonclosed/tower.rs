//! The norm-bound chain for `G_n = Σ_{k≤n} L^k(g_n) · y^k/k!`, where
//! `L f = f' − Σ_{i≥2} e_3(i) f^{(i)}`, `ε_n = 1/(e_3(n)·n!)` and
//! `g_n = x + ε_n x^n`, evaluated on the log scale.
//!
//! `e(x) = exp(x)`, `e_2 = e∘e`, `e_3 = e∘e∘e`. Only logarithms of `e_3`
//! values are ever formed: `ln e_3(n) = e_2(n)`.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::hireal::{clearly_less, HiReal};
use super::lognum::{log_add, log_mul, LogNum, Mode, Sign};
use crate::error::{Error, Result};
use crate::scalar::factorial;

/// Largest `n` accepted for `ln e_3(n) = e_2(n)`. `e_2(40)` has a binary
/// exponent near `3.4·10^17`, inside the exponent range, and `exp` at
/// argument `e^40 ≈ 2^58` keeps about `192 − 58 = 134` correct bits,
/// comfortably above 80 bits plus 20 guard bits.
pub const MAX_TOWER_N: i64 = 40;

/// Cap on the argument of `e_2` when only `ln e_2(n) = e(n)` is needed.
const MAX_E2_ARG: f64 = 1e15;

/// `ln e_k(n)` for `k ∈ {1, 2, 3}`.
pub fn e_tower_log(k: u32, n: &HiReal) -> Result<HiReal> {
    match k {
        1 => Ok(n.clone()),
        2 => {
            if n.to_f64() > MAX_E2_ARG {
                return Err(Error::RangeExceeded(format!("ln e_2(n) needs n <= {MAX_E2_ARG:e}")));
            }
            Ok(n.exp())
        }
        3 => {
            if n > &HiReal::from_i64(MAX_TOWER_N) {
                return Err(Error::RangeExceeded(format!("ln e_3(n) needs n <= {MAX_TOWER_N}")));
            }
            Ok(n.exp().exp())
        }
        _ => Err(Error::InvalidArgument(format!("tower height {k} not in 1..=3"))),
    }
}

/// `e_2(n)`, the log of `e_3(n)`.
fn e2(n: i64) -> Result<HiReal> {
    e_tower_log(3, &HiReal::from_i64(n))
}

fn check_range(n: usize) -> Result<()> {
    if n as i64 > MAX_TOWER_N {
        Err(Error::RangeExceeded(format!("n = {n} exceeds the cap {MAX_TOWER_N}")))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    /// `ln(e_3(n−1)^{e(n)} / e_3(n)) = e(n)·e_2(n−1) − e_2(n)`.
    pub log_ratio: HiReal,
}

/// `ln(e_3(n−1)^{e(n)}/e_3(n))` for `n = 2..=n_max`, checked to be negative
/// and strictly decreasing from its first negative value on.
pub fn verify_e14(n_max: usize) -> Result<Vec<RatioRow>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    check_range(n_max)?;
    let rows = (2..=n_max)
        .map(|n| {
            let en = HiReal::from_i64(n as i64).exp();
            let log_ratio = en.mul(&e2(n as i64 - 1)?).sub(&e2(n as i64)?);
            Ok(RatioRow { n, log_ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = rows.iter().position(|r| r.log_ratio.is_negative()) {
        for w in rows[first..].windows(2) {
            if !(w[1].log_ratio < w[0].log_ratio && w[1].log_ratio.is_negative()) {
                return Err(Error::Postcondition(format!("log ratio does not decrease at n = {}", w[1].n)));
            }
        }
    }
    Ok(rows)
}

/// One of the inequalities the bound chain relies on, checked at a given `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub condition: String,
    pub holds: bool,
}

/// `m!·m ≤ m^m`, exactly.
fn factorial_bound(m: usize) -> bool {
    factorial(m) * BigInt::from(m) <= num_traits::pow(BigInt::from(m), m).max(BigInt::one())
}

/// The inequalities used to pass from the polynomial norm to values on
/// `|x| ≤ e^n`, and to bound `‖L f‖` for `deg f ≤ m`.
pub fn side_conditions(n: usize) -> Result<Vec<SideCondition>> {
    check_range(n)?;
    let h = |v: i64| HiReal::from_i64(v);
    let ni = n as i64;
    let mut out = Vec::new();
    let mut push = |condition: String, holds: bool| out.push(SideCondition { condition, holds });

    // (n+1)·e(n²) < e_2(n) ⇔ ln(n+1) + n² < e(n)
    push(
        "(n+1)*e(n^2) < e_2(n)".into(),
        clearly_less(&h(ni + 1).ln().add(&h(ni * ni)), &h(ni).exp()),
    );
    // e_2(n) < e_3(n−1) ⇔ e(n) < e_2(n−1)
    push("e_2(n) < e_3(n-1)".into(), clearly_less(&h(ni).exp(), &e2(ni - 1)?));
    for m in [n.saturating_sub(1), n] {
        let mi = m as i64;
        let mf = h(mi);
        push(format!("{m}!*{m} <= {m}^{m}"), factorial_bound(m));
        let m_ln_m = if m <= 1 { HiReal::zero() } else { mf.mul(&mf.ln()) };
        push(format!("{m}^{m} < e({m}^2)"), clearly_less(&m_ln_m, &h(mi * mi)));
        push(format!("e({m}^2) < e_2({m})"), clearly_less(&h(mi * mi), &mf.exp()));
        push(format!("e_2({m}) < e_3({m})"), clearly_less(&mf.exp(), &e2(mi)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    /// `ln(e(n² − e_2(n)))`, the bound on `|g_n(x) − x|`.
    pub log_linear_term: LogNum,
    /// `ln(n · e(n²) · e_3(n−1)^{2n} / e_3(n))`, the bound on the `y`-terms.
    pub log_tail_term: LogNum,
    /// Certified upper bound on `ln sup |G_n(x, y) − x|` over the box.
    pub log_total: LogNum,
    /// `ln` of the box radius: `|x|, |y| ≤ e^n`.
    pub box_radius_log: HiReal,
    /// The total bound is below 1.
    pub certified: bool,
    /// The tail term is below `e_3(n−1)^{e(n)}/e_3(n)`.
    pub tail_below_ratio: bool,
    pub side_conditions: Vec<SideCondition>,
}

/// Upper bound on `sup |G_n(x,y) − x|` over `|x|, |y| ≤ e^n`, assembled as
/// `e(n² − e_2(n)) + n·e(n²)·e_3(n−1)^{2n}/e_3(n)` in upper-bound log
/// arithmetic.
///
/// Fails with [`Error::ThresholdUnmet`] when one of the inequalities behind
/// the chain does not hold at this `n`.
pub fn sup_bound(n: usize) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::ThresholdUnmet { n, condition: "n >= 2".into() });
    }
    let side_conditions = side_conditions(n)?;
    if let Some(c) = side_conditions.iter().find(|c| !c.holds) {
        return Err(Error::ThresholdUnmet { n, condition: c.condition.clone() });
    }
    let ni = n as i64;
    let nn = HiReal::from_i64(ni * ni);
    let e2n = e2(ni)?;
    let e2m = e2(ni - 1)?;
    let ub = Mode::UpperBound;

    let log_linear_term = LogNum::from_log(Sign::Pos, nn.sub(&e2n), ub);
    let ln_n = HiReal::from_i64(ni).ln();
    let tail_head = LogNum::from_log(Sign::Pos, ln_n.add(&nn), ub);
    let tail_ratio = LogNum::from_log(Sign::Pos, e2m.mul_i64(2 * ni).sub(&e2n), ub);
    let log_tail_term = log_mul(&tail_head, &tail_ratio);
    let log_total = log_add(&log_linear_term, &log_tail_term);

    // Both sides share −e_2(n); compare what is left:
    // ln n + n² + 2n·e_2(n−1) < e(n)·e_2(n−1).
    let tail_lhs = ln_n.add(&nn).add(&e2m.mul_i64(2 * ni));
    let tail_below_ratio = clearly_less(&tail_lhs, &HiReal::from_i64(ni).exp().mul(&e2m));

    Ok(BoundReport {
        n,
        certified: log_total.below_one(),
        log_linear_term,
        log_tail_term,
        log_total,
        box_radius_log: HiReal::from_i64(ni),
        tail_below_ratio,
        side_conditions,
    })
}

/// [`sup_bound`] for every `n` in the range, computed in parallel and
/// returned in order of `n`.
pub fn sweep(n_min: usize, n_max: usize) -> Result<Vec<BoundReport>> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty range {n_min}..={n_max}")));
    }
    check_range(n_max)?;
    (n_min..=n_max).into_par_iter().map(sup_bound).collect()
}

/// Upper bound on `‖L^k(g_n)‖` (maximum coefficient modulus).
///
/// `‖L g_n‖ ≤ ε_n · max_{i<n} |a_i| · n! = e_3(n−1)/e_3(n)`, and each further
/// application of `L` to a polynomial of degree `< n` multiplies the norm by
/// at most `e_3(n−1)²`.
pub fn coeff_norm_chain(n: usize, k: usize) -> Result<LogNum> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 2 <= n and 1 <= k <= n, got n = {n}, k = {k}")));
    }
    check_range(n)?;
    let e2m = e2(n as i64 - 1)?;
    let mut bound = LogNum::from_log(Sign::Pos, e2m.sub(&e2(n as i64)?), Mode::UpperBound);
    let step = LogNum::from_log(Sign::Pos, e2m.mul_i64(2), Mode::UpperBound);
    for _ in 1..k {
        bound = log_mul(&bound, &step);
    }
    Ok(bound)
}

/// Smallest `n` from which an inequality of the chain holds for every
/// checked `n` up to the end of the scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub condition: String,
    pub holds_from: Option<usize>,
    pub checked_up_to: usize,
}

/// Empirical thresholds for the unquantified "for n large enough" steps.
pub fn thresholds(n_max: usize) -> Result<Vec<Threshold>> {
    check_range(n_max)?;
    type Check = Box<dyn Fn(usize) -> Result<bool>>;
    fn h(v: i64) -> HiReal {
        HiReal::from_i64(v)
    }
    let checks: Vec<(&str, Check)> = vec![
        (
            "(n+1)*e(n^2) < e_2(n)",
            Box::new(move |n| {
                let ni = n as i64;
                Ok(clearly_less(&h(ni + 1).ln().add(&h(ni * ni)), &h(ni).exp()))
            }),
        ),
        ("e_2(n) < e_3(n-1)", Box::new(move |n| Ok(n >= 1 && clearly_less(&h(n as i64).exp(), &e2(n as i64 - 1)?)))),
        ("n!*n < e_2(n)", Box::new(|n| Ok(factorial_bound(n) && clearly_less(&h((n * n) as i64), &h(n as i64).exp())))),
        (
            "e(n)*e_2(n-1) < e_2(n)",
            Box::new(move |n| {
                let ni = n as i64;
                Ok(n >= 1 && clearly_less(&h(ni).exp().mul(&e2(ni - 1)?), &e2(ni)?))
            }),
        ),
        ("sup bound < 1", Box::new(|n| Ok(sup_bound(n).map(|r| r.certified).unwrap_or(false)))),
    ];
    checks
        .into_iter()
        .map(|(name, check)| {
            let mut holds_from = None;
            for n in 1..=n_max {
                match (check(n)?, holds_from) {
                    (true, None) => holds_from = Some(n),
                    (false, _) => holds_from = None,
                    _ => {}
                }
            }
            Ok(Threshold { condition: name.into(), holds_from, checked_up_to: n_max })
        })
        .collect()
}
