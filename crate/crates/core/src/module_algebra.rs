//! Symbolic modules, derivative closures, membership and `V`-spaces.
//!
//! A module here is a linear space of bivariate polynomials closed under
//! `∂x` and `∂y` (equivalently, under translations). The supported
//! descriptions are
//!
//! * `Md(d)`: every `F` with `deg [F]_n < d` for all `n`,
//! * `MGamma(Γ)`: solutions of the coordinate recursion of a [`GammaTable`],
//! * `FiniteGen(gens)`: the derivative closure of finitely many polynomials,
//! * `Sum(parts)`: the set of sums of one element from each part.

use std::collections::VecDeque;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::l_engine::{generate, mgamma_contains, GammaTable};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::poly::{BiPoly, Degree, Mono, UniPoly};
use crate::scalar::CoeffQ;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", try_from = "ModuleRepr")]
pub enum ModuleExpr {
    Md { d: usize },
    MGamma { gamma: GammaTable },
    /// Stored as the reduced basis of the derivative closure.
    FiniteGen { gens: Vec<BiPoly> },
    /// At least two parts, none of which is itself a `Sum`.
    Sum { parts: Vec<ModuleExpr> },
}

#[derive(Deserialize)]
#[serde(tag = "type")]
enum ModuleRepr {
    Md { d: usize },
    MGamma { gamma: GammaTable },
    FiniteGen { gens: Vec<BiPoly> },
    Sum { parts: Vec<ModuleExpr> },
}

impl TryFrom<ModuleRepr> for ModuleExpr {
    type Error = Error;
    fn try_from(r: ModuleRepr) -> Result<Self> {
        Ok(match r {
            ModuleRepr::Md { d } => ModuleExpr::md(d),
            ModuleRepr::MGamma { gamma } => ModuleExpr::mgamma(gamma),
            ModuleRepr::FiniteGen { gens } => ModuleExpr::finite_gen(&gens),
            ModuleRepr::Sum { parts } => ModuleExpr::sum(parts)?,
        })
    }
}

impl ModuleExpr {
    pub fn md(d: usize) -> Self {
        ModuleExpr::Md { d }
    }

    pub fn mgamma(gamma: GammaTable) -> Self {
        ModuleExpr::MGamma { gamma }
    }

    pub fn finite_gen(gens: &[BiPoly]) -> Self {
        ModuleExpr::FiniteGen { gens: derivative_closure(gens) }
    }

    /// Flattens nested sums; fewer than two resulting parts is an error.
    pub fn sum(parts: Vec<ModuleExpr>) -> Result<Self> {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ModuleExpr::Sum { parts } => flat.extend(parts),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(Error::UnsupportedExpr(format!("a sum needs at least two parts, got {}", flat.len())));
        }
        Ok(ModuleExpr::Sum { parts: flat })
    }

    fn size_hint(&self) -> usize {
        match self {
            ModuleExpr::Md { d } => *d,
            ModuleExpr::MGamma { gamma } => gamma.s(),
            ModuleExpr::FiniteGen { .. } => 0,
            ModuleExpr::Sum { parts } => parts.iter().map(ModuleExpr::size_hint).max().unwrap_or(0),
        }
    }
}

/// Truncation used when none is given: one more than the largest of the
/// total degree of `F`, every `MGamma` order and every `Md` index.
///
/// Total degree rather than `max(deg_x, deg_y)`: an element such as `x·y`
/// of `f(x+y)`-type modules needs seeds of degree 2.
pub fn default_deg_bound(m: &ModuleExpr, f: &BiPoly) -> usize {
    let total = f.monomials().keys().next_back().map_or(0, |m| m.total());
    1 + total.max(m.size_hint())
}

/// Answer of a membership query. A negative answer always carries a
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub contains: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Membership {
    pub fn yes() -> Self {
        Membership { contains: true, certificate: None }
    }

    pub fn no(certificate: Certificate) -> Self {
        Membership { contains: false, certificate: Some(certificate) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Certificate {
    /// `deg [F]_n ≥ d`.
    DegreeTooHigh { n: usize, degree: Degree, d: usize },
    /// `L([F]_{n−s}, …, [F]_{n−1}) − [F]_n = residual ≠ 0`.
    RecursionFails { n: usize, residual: UniPoly },
    /// Nonzero remainder of `F` modulo a finite basis.
    NotInSpan { remainder: BiPoly },
    /// `F − generate(Γ, [F]_0..[F]_{s−1})` has a coordinate of degree `≥ d`.
    ResidualOutsideMd { n: usize, degree: Degree, d: usize, residual: BiPoly },
    /// Nonzero remainder modulo the `MGamma` elements seeded in degree
    /// below `deg_bound` plus the finite parts.
    NotInTruncatedSpan { deg_bound: usize, remainder: BiPoly },
}

fn md_contains(d: usize, f: &BiPoly) -> Option<(usize, Degree)> {
    f.coords().iter().enumerate().find(|(_, c)| !c.degree().below(d)).map(|(n, c)| (n, c.degree()))
}

pub fn contains(m: &ModuleExpr, f: &BiPoly) -> Result<Membership> {
    contains_with_bound(m, f, None)
}

/// Membership test. `deg_bound` only matters for sums with an `MGamma` part
/// other than the exact `Md + MGamma` shape; it defaults to
/// [`default_deg_bound`].
pub fn contains_with_bound(m: &ModuleExpr, f: &BiPoly, deg_bound: Option<usize>) -> Result<Membership> {
    match m {
        ModuleExpr::Md { d } => Ok(match md_contains(*d, f) {
            None => Membership::yes(),
            Some((n, degree)) => Membership::no(Certificate::DegreeTooHigh { n, degree, d: *d }),
        }),
        ModuleExpr::MGamma { gamma } => Ok(mgamma_contains(gamma, f)),
        ModuleExpr::FiniteGen { gens } => {
            let basis = echelon_of(gens);
            let rem = basis.reduce(&f.monomials());
            Ok(if rem.is_empty() {
                Membership::yes()
            } else {
                Membership::no(Certificate::NotInSpan { remainder: BiPoly::from_monomials(rem.iter()) })
            })
        }
        ModuleExpr::Sum { parts } => sum_contains(parts, f, deg_bound.unwrap_or_else(|| default_deg_bound(m, f))),
    }
}

fn sum_contains(parts: &[ModuleExpr], f: &BiPoly, deg_bound: usize) -> Result<Membership> {
    let mut d: Option<usize> = None;
    let mut gammas = Vec::new();
    let mut finite = Vec::new();
    for p in parts {
        match p {
            ModuleExpr::Md { d: e } => d = Some(d.map_or(*e, |c| c.max(*e))),
            ModuleExpr::MGamma { gamma } => gammas.push(gamma),
            ModuleExpr::FiniteGen { gens } => finite.extend(gens.iter().cloned()),
            ModuleExpr::Sum { .. } => return Err(Error::UnsupportedExpr("nested sum".into())),
        }
    }
    if let (Some(d), [gamma], true) = (d, gammas.as_slice(), finite.is_empty()) {
        return Ok(md_plus_mgamma_contains(d, gamma, f));
    }
    let d = d.unwrap_or(0);
    // Quotient by M_d: forget every monomial with x-exponent below d.
    let project = |v: SparseVec<Mono>| -> SparseVec<Mono> { v.into_iter().filter(|(m, _)| m.x >= d).collect() };
    let mut span = Echelon::new();
    for g in &finite {
        span.insert(&project(g.monomials()));
    }
    for gamma in &gammas {
        for seed in seed_basis(gamma.s(), deg_bound) {
            span.insert(&project(generate(gamma, &seed)?.monomials()));
        }
    }
    let rem = span.reduce(&project(f.monomials()));
    if rem.is_empty() {
        return Ok(Membership::yes());
    }
    let remainder = BiPoly::from_monomials(rem.iter());
    Ok(Membership::no(if gammas.is_empty() {
        Certificate::NotInSpan { remainder }
    } else {
        Certificate::NotInTruncatedSpan { deg_bound, remainder }
    }))
}

/// Exact test for `M_d + M_Γ`.
///
/// If `F = A + G` with `A ∈ M_d`, `G ∈ M_Γ`, then
/// `F − generate(Γ, Φ_s F) = A − generate(Γ, Φ_s A)`, and the subtracted
/// term has all coordinates of degree `< d` because `L` lowers degree. So
/// membership holds iff that residual lies in `M_d`.
pub fn md_plus_mgamma_contains(d: usize, gamma: &GammaTable, f: &BiPoly) -> Membership {
    let seeds: Vec<UniPoly> = (0..gamma.s()).map(|n| f.coord(n)).collect();
    let residual = f - &generate(gamma, &seeds).expect("arity matches");
    match md_contains(d, &residual) {
        None => Membership::yes(),
        Some((n, degree)) => Membership::no(Certificate::ResidualOutsideMd { n, degree, d, residual }),
    }
}

/// Tuples `e_i · x^k` for `i < s`, `k < deg_bound`.
pub(crate) fn seed_basis(s: usize, deg_bound: usize) -> Vec<Vec<UniPoly>> {
    let mut out = Vec::with_capacity(s * deg_bound);
    for k in 0..deg_bound {
        for i in 0..s {
            let mut t = vec![UniPoly::zero(); s];
            t[i] = UniPoly::monomial(CoeffQ::from_int(1), k);
            out.push(t);
        }
    }
    out
}

pub(crate) fn echelon_of(polys: &[BiPoly]) -> Echelon<Mono> {
    let mut e = Echelon::new();
    for p in polys {
        e.insert(&p.monomials());
    }
    e
}

pub(crate) fn echelon_basis(e: &Echelon<Mono>) -> Vec<BiPoly> {
    e.rows().map(|(_, v)| BiPoly::from_monomials(v.iter())).collect()
}

/// Reduced basis of the span of all `∂x^i ∂y^j g`, ordered by leading
/// monomial (graded-lex), largest first. Each row is monic in its leading
/// monomial and free of the other rows' leading monomials.
pub fn derivative_closure(gens: &[BiPoly]) -> Vec<BiPoly> {
    let mut span = Echelon::new();
    let mut queue: VecDeque<BiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    while let Some(g) = queue.pop_front() {
        if span.insert(&g.monomials()) {
            for h in [g.d_dx(), g.d_dy()] {
                if !h.is_zero() {
                    queue.push_back(h);
                }
            }
        }
    }
    echelon_basis(&span)
}

/// Basis of the elements of `span(basis)` with `deg_x < bound`.
pub(crate) fn low_degree_part(basis: &[BiPoly], bound: usize) -> Vec<BiPoly> {
    let vecs: Vec<SparseVec<Mono>> = basis.iter().map(BiPoly::monomials).collect();
    let mut high: Vec<Mono> = vecs.iter().flat_map(|v| v.keys().copied()).filter(|m| m.x >= bound).collect();
    high.sort();
    high.dedup();
    let combos = if high.is_empty() {
        return echelon_basis(&echelon_of(basis));
    } else {
        let mut a = Matrix::zeros(high.len(), vecs.len());
        for (j, v) in vecs.iter().enumerate() {
            for (r, m) in high.iter().enumerate() {
                if let Some(c) = v.get(m) {
                    a[(r, j)] = c.clone();
                }
            }
        }
        a.kernel()
    };
    let mut e = Echelon::new();
    for w in combos {
        let mut v = SparseVec::new();
        for (c, b) in w.iter().zip(&vecs) {
            crate::linalg::axpy(&mut v, c, b);
        }
        let v: SparseVec<Mono> = v.into_iter().filter(|(m, _)| m.x < bound).collect();
        e.insert(&v);
    }
    echelon_basis(&e)
}

/// Row-reduced basis of `V_{M,s}` within a degree truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VSpaceBasis {
    pub s: usize,
    pub deg_bound: usize,
    pub basis: Vec<Vec<UniPoly>>,
}

impl VSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn from_echelon(s: usize, deg_bound: usize, e: &Echelon<(usize, usize)>) -> Self {
        let basis = e.rows().map(|(_, v)| tuple_from_vec(s, v)).collect();
        VSpaceBasis { s, deg_bound, basis }
    }

    pub fn contains(&self, tuple: &[UniPoly]) -> bool {
        let mut e = Echelon::new();
        for t in &self.basis {
            e.insert(&tuple_vec(t));
        }
        e.contains(&tuple_vec(tuple))
    }
}

/// Keys `(power, slot)`: coefficient of `x^power` in entry `slot`.
pub(crate) fn tuple_vec(t: &[UniPoly]) -> SparseVec<(usize, usize)> {
    let mut v = SparseVec::new();
    for (slot, f) in t.iter().enumerate() {
        for (k, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                v.insert((k, slot), c.clone());
            }
        }
    }
    v
}

pub(crate) fn tuple_from_vec(s: usize, v: &SparseVec<(usize, usize)>) -> Vec<UniPoly> {
    let mut coeffs = vec![Vec::new(); s];
    for (&(k, slot), c) in v {
        let row: &mut Vec<CoeffQ> = &mut coeffs[slot];
        if row.len() <= k {
            row.resize(k + 1, CoeffQ::zero());
        }
        row[k] = c.clone();
    }
    coeffs.into_iter().map(UniPoly::from_coeffs).collect()
}

fn phi(s: usize, f: &BiPoly) -> Vec<UniPoly> {
    (0..s).map(|n| f.coord(n)).collect()
}

fn v_space_echelon(m: &ModuleExpr, s: usize, deg_bound: usize) -> Result<Echelon<(usize, usize)>> {
    let mut e = Echelon::new();
    match m {
        ModuleExpr::Md { d } => {
            for t in seed_basis(s, (*d).min(deg_bound)) {
                e.insert(&tuple_vec(&t));
            }
        }
        ModuleExpr::MGamma { gamma } => {
            // Elements with deg_x < D are exactly those seeded in degree < D.
            for seed in seed_basis(gamma.s(), deg_bound) {
                e.insert(&tuple_vec(&phi(s, &generate(gamma, &seed)?)));
            }
        }
        ModuleExpr::FiniteGen { gens } => {
            for g in low_degree_part(gens, deg_bound) {
                e.insert(&tuple_vec(&phi(s, &g)));
            }
        }
        ModuleExpr::Sum { parts } => {
            for p in parts {
                for (_, row) in v_space_echelon(p, s, deg_bound)?.rows() {
                    e.insert(row);
                }
            }
        }
    }
    Ok(e)
}

/// `{([F]_0, …, [F]_{s−1}) : F ∈ M, deg_x F < deg_bound}`; for a sum, the
/// sum of the parts' truncated spaces.
pub fn v_space(m: &ModuleExpr, s: usize, deg_bound: usize) -> Result<VSpaceBasis> {
    if s == 0 || deg_bound == 0 {
        return Err(Error::InvalidArgument("s and deg_bound must be positive".into()));
    }
    Ok(VSpaceBasis::from_echelon(s, deg_bound, &v_space_echelon(m, s, deg_bound)?))
}

/// Whether `span(gens)` is closed under both partial derivatives, cross-
/// checked against three pseudo-random exact translations.
pub fn is_translation_invariant(gens: &[BiPoly]) -> bool {
    let span = echelon_of(gens);
    let inside = |p: &BiPoly| span.contains(&p.monomials());
    if !gens.iter().all(|g| inside(&g.d_dx()) && inside(&g.d_dy())) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7472_616e_736c);
    (0..3).all(|_| {
        let a = CoeffQ::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        let b = CoeffQ::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        gens.iter().all(|g| inside(&g.shift(&a, &b)))
    })
}

/// A power `t ≤ s1 + s2 + 2` such that `x^{d1} y^t` lies in
/// `M_{d2} + M_{Γ2}` but not in `M_{d1} + M_{Γ1}`. Exists whenever
/// `d1 < d2`, which is why the `M_d` part of such a sum is determined by
/// the module.
pub fn separating_power(d1: usize, g1: &GammaTable, d2: usize, g2: &GammaTable) -> Option<usize> {
    (0..=g1.s() + g2.s() + 2).find(|&t| {
        let probe = BiPoly::monomial(CoeffQ::from_int(1), d1, t);
        !md_plus_mgamma_contains(d1, g1, &probe).contains && md_plus_mgamma_contains(d2, g2, &probe).contains
    })
}
