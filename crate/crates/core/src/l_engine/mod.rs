//! Recursion operators `L` and the modules they define.
//!
//! A [`GammaTable`] of order `s` fixes `L(f_1, …, f_s) = Σ a_{i,j} f_i^{(j)}`
//! and with it the module `M_Γ` of polynomials whose coordinates obey
//! `[F]_n = L([F]_{n−s}, …, [F]_{n−1})` for `n ≥ s`.

mod chains;
mod gamma;
mod infer;
mod split;

pub use chains::{nilpotent_chains, quotient_derivation, Chain, ChainDecomposition};
pub use gamma::{apply_l, generate, mgamma_contains, GammaTable};
pub use infer::{
    infer_l, infer_l_cancellable, order_of_module, order_of_module_cancellable, order_of_sum,
    order_of_sum_cancellable, truncated_basis, OrderCertificate, OrderReport,
};
pub use split::{canonical_split, Split};
