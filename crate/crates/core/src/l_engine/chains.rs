//! Chain bases `D^j u_i` of nilpotent operators, and the derivation on
//! truncated quotients of polynomial tuples where they are used.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::CoeffQ;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub generator: Vec<CoeffQ>,
    pub length: usize,
}

/// Basis `u_i, D u_i, …, D^{q_i − 1} u_i` with `D^{q_i} u_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDecomposition {
    pub dim: usize,
    /// Longest chains first; equal lengths in order of discovery.
    pub chains: Vec<Chain>,
    /// `D^j u_i`, chain by chain, `j` increasing.
    pub basis_vectors: Vec<Vec<CoeffQ>>,
}

impl ChainDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        self.chains.iter().map(|c| c.length).collect()
    }

    /// `P J P⁻¹`, where `P` has the chain vectors as columns and `J` shifts
    /// each chain one step.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim;
        let p = Matrix::from_columns(&self.basis_vectors, n);
        let mut j = Matrix::zeros(n, n);
        let mut start = 0;
        for c in &self.chains {
            for k in 0..c.length.saturating_sub(1) {
                j[(start + k + 1, start + k)] = CoeffQ::one();
            }
            start += c.length;
        }
        let p_inv = p.inverse().expect("chain vectors form a basis");
        &(&p * &j) * &p_inv
    }
}

fn to_sparse(v: &[CoeffQ]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Chain decomposition of a nilpotent matrix acting on column vectors.
///
/// With `K_k = ker D^k`, chains of length `k` are started, longest first, by
/// vectors of the reduced kernel basis of `K_k` that are independent of
/// `K_{k−1}` and of the `D^{q_i − k} u_i` of the longer chains already
/// chosen; candidates are tried in kernel-basis order.
pub fn nilpotent_chains(d: &Matrix) -> Result<ChainDecomposition> {
    if !d.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", d.nrows(), d.ncols())));
    }
    let n = d.nrows();
    let mut powers = vec![Matrix::identity(n)];
    while !powers.last().unwrap().is_zero() {
        if powers.len() > n {
            return Err(Error::NotNilpotent);
        }
        let next = &powers[powers.len() - 1] * d;
        powers.push(next);
    }
    let q = powers.len() - 1;
    let kernels: Vec<Vec<Vec<CoeffQ>>> = powers.iter().map(Matrix::kernel).collect();

    let mut chains: Vec<Chain> = Vec::new();
    for k in (1..=q).rev() {
        let mut w = Echelon::new();
        for v in &kernels[k - 1] {
            w.insert(&to_sparse(v));
        }
        for c in &chains {
            w.insert(&to_sparse(&powers[c.length - k].mul_vec(&c.generator)));
        }
        for u in &kernels[k] {
            if w.insert(&to_sparse(u)) {
                chains.push(Chain { generator: u.clone(), length: k });
            }
        }
    }
    let mut basis_vectors = Vec::with_capacity(n);
    for c in &chains {
        let mut v = c.generator.clone();
        for _ in 0..c.length {
            let next = d.mul_vec(&v);
            basis_vectors.push(v);
            v = next;
        }
    }
    Ok(ChainDecomposition { dim: n, chains, basis_vectors })
}

/// Matrix of `φ ↦ φ'` on `s`-tuples of degree `< k` modulo those of
/// degree `< d`.
///
/// The basis is the cosets of `x^m e_i`, ordered slot by slot and, within a
/// slot, by `m = d, …, k − 1`. Column `(i, m)` holds `m` in row
/// `(i, m − 1)` when `m − 1 ≥ d`.
pub fn quotient_derivation(s: usize, k: usize, d: usize) -> Result<Matrix> {
    if k <= d {
        return Err(Error::InvalidArgument(format!("need k > d, got k = {k}, d = {d}")));
    }
    let w = k - d;
    let mut m = Matrix::zeros(s * w, s * w);
    for i in 0..s {
        for p in d + 1..k {
            m[(i * w + p - 1 - d, i * w + p - d)] = CoeffQ::from_int(p as i64);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn zero_matrix_gives_trivial_chains() {
        let c = nilpotent_chains(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(c.lengths(), vec![1, 1, 1]);
        assert_eq!(c.reconstruct(), Matrix::zeros(3, 3));
    }

    #[test]
    fn single_block() {
        let j = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let c = nilpotent_chains(&j).unwrap();
        assert_eq!(c.lengths(), vec![3]);
        assert_eq!(c.reconstruct(), j);
    }

    #[test]
    fn differentiation_on_quadratics() {
        // columns: images of 1, x, x²
        let d = m(&[&[0, 1, 0], &[0, 0, 2], &[0, 0, 0]]);
        let c = nilpotent_chains(&d).unwrap();
        assert_eq!(c.lengths(), vec![3]);
        let g = &c.chains[0].generator;
        assert!(!g[2].is_zero());
        assert_eq!(c.basis_vectors.len(), 3);
        assert_eq!(c.reconstruct(), d);
    }

    #[test]
    fn mixed_blocks() {
        let d = m(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
        let c = nilpotent_chains(&d).unwrap();
        assert_eq!(c.lengths(), vec![2, 2]);
        assert_eq!(c.reconstruct(), d);
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert!(matches!(nilpotent_chains(&Matrix::identity(2)), Err(Error::NotNilpotent)));
        assert!(nilpotent_chains(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_derivation(1, 2, 1).unwrap(), Matrix::zeros(1, 1));
        assert_eq!(quotient_derivation(1, 3, 1).unwrap(), m(&[&[0, 2], &[0, 0]]));
        assert_eq!(quotient_derivation(3, 5, 4).unwrap(), Matrix::zeros(3, 3));
        let q = quotient_derivation(2, 4, 1).unwrap();
        assert_eq!(nilpotent_chains(&q).unwrap().lengths(), vec![3, 3]);
        assert!(quotient_derivation(1, 1, 1).is_err());
    }
}
