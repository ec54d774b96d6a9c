use serde::{Deserialize, Serialize};

use super::GammaTable;
use crate::error::{Error, Result};
use crate::module_algebra::{md_plus_mgamma_contains, ModuleExpr};
use crate::poly::BiPoly;
use crate::scalar::CoeffQ;

/// The invariants read off `M_d + M_Γ` by probing monomials `x^e y^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub d: usize,
    pub order: usize,
}

fn md_and_gamma(m: &ModuleExpr) -> Option<(usize, &GammaTable)> {
    let ModuleExpr::Sum { parts } = m else { return None };
    match parts.as_slice() {
        [ModuleExpr::Md { d }, ModuleExpr::MGamma { gamma }] | [ModuleExpr::MGamma { gamma }, ModuleExpr::Md { d }] => {
            Some((*d, gamma))
        }
        _ => None,
    }
}

/// Smallest `e` such that some `x^e y^t` with `t ≤ s + 1` lies outside the
/// sum, together with the smallest such `t`.
///
/// Every `x^e y^t` with `e < d` is in `M_d`, and `x^d y^s` is never in
/// `M_d + M_Γ`, so the scan stops at `e = d` and recovers `d` from the
/// module alone.
pub fn canonical_split(m: &ModuleExpr) -> Result<Split> {
    let (d, gamma) = md_and_gamma(m)
        .ok_or_else(|| Error::UnsupportedExpr("canonical_split expects Sum(Md, MGamma)".into()))?;
    for e in 0..=d {
        for t in 0..=gamma.s() + 1 {
            let probe = BiPoly::monomial(CoeffQ::from_int(1), e, t);
            if !md_plus_mgamma_contains(d, gamma, &probe).contains {
                return Ok(Split { d: e, order: t });
            }
        }
    }
    Err(Error::Postcondition(format!("x^{d} y^t stayed inside the sum for every t <= {}", gamma.s() + 1)))
}
