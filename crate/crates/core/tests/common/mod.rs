//! Random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use polymod::l_engine::GammaTable;
use polymod::linalg::Matrix;
use polymod::poly::Mono;
use polymod::{BiPoly, CoeffQ, UniPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(r: &mut R) -> CoeffQ {
    CoeffQ::ratio(r.gen_range(-5..=5), r.gen_range(1..=4))
}

pub fn nonzero_rational<R: Rng>(r: &mut R) -> CoeffQ {
    loop {
        let c = small_rational(r);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn small_gaussian<R: Rng>(r: &mut R) -> CoeffQ {
    CoeffQ::gaussian(r.gen_range(-5..=5), r.gen_range(1..=4), r.gen_range(-5..=5), r.gen_range(1..=4))
}

pub fn bipoly<R: Rng>(r: &mut R, max_x: usize, max_y: usize) -> BiPoly {
    let dx = r.gen_range(0..=max_x);
    let dy = r.gen_range(0..=max_y);
    let mut terms = BTreeMap::new();
    for i in 0..=dx {
        for j in 0..=dy {
            if r.gen_bool(0.4) {
                terms.insert(Mono::new(i, j), small_gaussian(r));
            }
        }
    }
    BiPoly::from_monomials(terms.iter())
}

pub fn unipoly<R: Rng>(r: &mut R, max_deg: usize) -> UniPoly {
    let d = r.gen_range(0..=max_deg);
    UniPoly::from_coeffs((0..=d).map(|_| small_rational(r)).collect())
}

/// Table of order `1..=max_s` with entries `a_{i,j}`, `j ≤ max_j`.
pub fn gamma<R: Rng>(r: &mut R, max_s: usize, max_j: usize) -> GammaTable {
    let s = r.gen_range(1..=max_s);
    gamma_of_order(r, s, max_j)
}

pub fn gamma_of_order<R: Rng>(r: &mut R, s: usize, max_j: usize) -> GammaTable {
    let mut g = GammaTable::zero(s).unwrap();
    for i in 1..=s {
        for j in 1..=max_j {
            if r.gen_bool(0.5) {
                g.set(i, j, small_rational(r)).unwrap();
            }
        }
    }
    g
}

pub fn seeds<R: Rng>(r: &mut R, s: usize, max_deg: usize) -> Vec<UniPoly> {
    (0..s).map(|_| unipoly(r, max_deg)).collect()
}

/// `P U P⁻¹` with `U` strictly upper triangular and `P` a product of unit
/// triangular integer matrices.
pub fn nilpotent<R: Rng>(r: &mut R, n: usize) -> Matrix {
    let mut u = Matrix::zeros(n, n);
    let mut lo = Matrix::identity(n);
    let mut up = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(0.5) {
                u[(i, j)] = CoeffQ::from_int(r.gen_range(-2..=2));
            }
            up[(i, j)] = CoeffQ::from_int(r.gen_range(-2..=2));
            lo[(j, i)] = CoeffQ::from_int(r.gen_range(-2..=2));
        }
    }
    let p = &lo * &up;
    let p_inv = p.inverse().unwrap();
    &(&p * &u) * &p_inv
}

/// Evaluates `Σ c_{ij} x^i y^j` term by term.
pub fn eval_monomials(f: &BiPoly, x: &CoeffQ, y: &CoeffQ) -> CoeffQ {
    f.monomials().iter().map(|(m, c)| c * &(x.pow(m.x as u32) * y.pow(m.y as u32))).sum()
}
