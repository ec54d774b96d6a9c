//! A family `G_n` of polynomials in a non-closed module whose distance to
//! `x` on growing boxes is bounded above by tower-exponential quantities.
//!
//! The numbers involved (`e_3(n) = exp(exp(exp n))`) are handled through
//! their logarithms in [`LogNum`], backed by the 192-bit [`HiReal`].

mod hireal;
mod lognum;
mod tower;
mod witness;

pub use hireal::{clearly_less, HiReal, PRECISION};
pub use lognum::{log_add, log_mul, log_pow, slack, LogNum, Mode, Sign};
pub use tower::{
    coeff_norm_chain, e_tower_log, side_conditions, sup_bound, sweep, thresholds, verify_e14, BoundReport, RatioRow,
    SideCondition, Threshold, MAX_TOWER_N,
};
pub use witness::{exactness_bridge, witness_not_in_m, witness_x_not_in_m, BridgeReport, BridgeRow, WitnessReport};
