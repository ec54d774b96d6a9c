use polymod::l_engine::{
    apply_l, canonical_split, generate, infer_l, mgamma_contains, order_of_module, order_of_sum, GammaTable, Split,
};
use polymod::module_algebra::{contains, derivative_closure, is_translation_invariant, v_space, ModuleExpr};
use polymod::nonclosed::{coeff_norm_chain, log_add, log_mul, verify_e14, witness_not_in_m, HiReal, LogNum, Mode};
use polymod::{BiPoly, CoeffQ, Degree, Error, Mono, UniPoly};

fn q(n: i64) -> CoeffQ {
    CoeffQ::from_int(n)
}

/// `Σ c · x^i y^j`.
fn p(terms: &[(usize, usize, i64)]) -> BiPoly {
    let terms: Vec<(Mono, CoeffQ)> = terms.iter().map(|&(i, j, c)| (Mono::new(i, j), q(c))).collect();
    BiPoly::from_monomials(terms.iter().map(|(m, c)| (m, c)))
}

fn u(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

fn taylor() -> GammaTable {
    GammaTable::translation(q(1))
}

fn x_plus_y_sq() -> BiPoly {
    p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)])
}

#[test]
fn coordinates_and_calculus() {
    let f = x_plus_y_sq();
    assert_eq!(f.coords(), &[u(&[0, 0, 1]), u(&[0, 2]), u(&[2])]);
    assert_eq!(p(&[(0, 2, 1)]).coord(2), u(&[2]));
    assert_eq!(BiPoly::from_coords(vec![u(&[0, 0, 1]), u(&[0, 2]), u(&[2])]), f);
    assert!(BiPoly::from_coords(vec![u(&[]), u(&[]), u(&[])]).is_zero());

    assert_eq!(p(&[(2, 1, 1)]).d_dx(), p(&[(1, 1, 2)]));
    assert!(p(&[(0, 3, 1)]).d_dx().is_zero());
    assert_eq!(BiPoly::from_coords(vec![u(&[]), u(&[0, 1]), u(&[7])]).d_dy().coords(), &[u(&[0, 1]), u(&[7])]);
    assert_eq!(f.d_dy(), p(&[(1, 0, 2), (0, 1, 2)]));

    assert_eq!(p(&[(2, 0, 1)]).shift(&q(1), &q(0)), p(&[(2, 0, 1), (1, 0, 2), (0, 0, 1)]));
    assert_eq!(p(&[(1, 1, 1)]).shift(&q(1), &q(2)), p(&[(1, 1, 1), (1, 0, 2), (0, 1, 1), (0, 0, 2)]));
    assert_eq!(f.eval(&q(1), &q(2)), q(9));
    assert_eq!(p(&[(1, 1, 1)]).eval(&q(3), &q(5)), q(15));

    let g = p(&[(2, 1, 1), (0, 5, 1)]);
    assert_eq!((g.deg_x(), g.deg_y()), (Degree::Finite(2), Degree::Finite(5)));
    assert_eq!(BiPoly::zero().deg_x(), Degree::NegInf);
    assert_eq!((&f - &p(&[(2, 0, 1)])).coords(), &[u(&[]), u(&[0, 2]), u(&[2])]);
}

#[test]
fn closures_and_membership() {
    assert_eq!(derivative_closure(&[p(&[(2, 1, 1)])]).len(), 6);
    assert_eq!(derivative_closure(&[p(&[(0, 0, 1)])]).len(), 1);
    assert!(derivative_closure(&[]).is_empty());
    assert!(is_translation_invariant(&[p(&[(0, 0, 1)]), p(&[(1, 0, 1)]), p(&[(0, 1, 1)])]));
    assert!(!is_translation_invariant(&[p(&[(2, 0, 1)])]));

    assert!(contains(&ModuleExpr::md(1), &p(&[(0, 5, 1)])).unwrap().contains);
    let sum = ModuleExpr::sum(vec![ModuleExpr::md(1), ModuleExpr::mgamma(taylor())]).unwrap();
    assert!(!contains(&sum, &p(&[(1, 1, 1)])).unwrap().contains);
    let fin = ModuleExpr::finite_gen(&[p(&[(2, 1, 1)])]);
    assert!(!contains(&fin, &p(&[(3, 0, 1)])).unwrap().contains);
    assert!(contains(&fin, &p(&[(2, 0, 1)])).unwrap().contains);
}

#[test]
fn initial_coordinate_spaces() {
    let v = v_space(&ModuleExpr::mgamma(taylor()), 1, 3).unwrap();
    assert_eq!(v.dim(), 3);
    for k in 0..3 {
        assert!(v.contains(&[UniPoly::monomial(q(1), k)]));
    }
    let v = v_space(&ModuleExpr::finite_gen(&[p(&[(0, 1, 1)])]), 1, 4).unwrap();
    assert_eq!(v.dim(), 1);
    assert!(v.contains(&[u(&[1])]));
    assert_eq!(v_space(&ModuleExpr::md(2), 2, 2).unwrap().dim(), 4);
}

#[test]
fn operators_and_generation() {
    assert_eq!(apply_l(&taylor(), &[u(&[0, 0, 1])]).unwrap(), u(&[0, 2]));
    let g = GammaTable::new(2, [((1, 1), q(1)), ((2, 2), q(3))]).unwrap();
    assert_eq!(apply_l(&g, &[u(&[0, 0, 0, 1]), u(&[0, 0, 1])]).unwrap(), u(&[6, 0, 3]));
    assert!(apply_l(&GammaTable::zero(2).unwrap(), &[u(&[1, 2]), u(&[3])]).unwrap().is_zero());
    assert!(matches!(apply_l(&g, &[u(&[1])]), Err(Error::ArityMismatch { expected: 2, got: 1 })));

    assert_eq!(generate(&taylor(), &[u(&[0, 0, 1])]).unwrap(), x_plus_y_sq());
    assert_eq!(generate(&taylor(), &[u(&[5])]).unwrap(), p(&[(0, 0, 5)]));
    let z = GammaTable::zero(2).unwrap();
    assert_eq!(generate(&z, &[u(&[0, 1]), u(&[0, 0, 1])]).unwrap(), p(&[(1, 0, 1), (2, 1, 1)]));

    assert!(mgamma_contains(&taylor(), &x_plus_y_sq()).contains);
    assert!(mgamma_contains(&g, &BiPoly::zero()).contains);
}

#[test]
fn inference_and_orders() {
    let basis = polymod::l_engine::truncated_basis(&taylor(), 6);
    assert_eq!(infer_l(&basis, 1, 5).unwrap(), taylor());
    assert_eq!(order_of_module(&basis, 5), Some(1));

    // M_3 contains x^2 y^2/2!, whose first two coordinates vanish.
    let md3: Vec<BiPoly> = (0..3).flat_map(|i| (0..6).map(move |j| p(&[(i, j, 1)]))).collect();
    assert!(matches!(infer_l(&md3, 2, 4), Err(Error::NotAnLModule { s: 2, .. })));
    assert_eq!(order_of_module(&md3, 4), None);

    // f(x) + g(x) y
    let m2: Vec<BiPoly> = (0..5).flat_map(|i| [p(&[(i, 0, 1)]), p(&[(i, 1, 1)])]).collect();
    assert_eq!(order_of_module(&m2, 4), Some(2));

    let s2 = GammaTable::translation(q(2));
    assert_eq!(order_of_sum(&taylor(), &s2, 4).unwrap().order, 2);
    assert_eq!(order_of_sum(&taylor(), &taylor(), 4).unwrap().order, 1);
    assert_eq!(order_of_sum(&taylor(), &GammaTable::zero(1).unwrap(), 4).unwrap().order, 2);
}

#[test]
fn splits() {
    let sum = |d, g| ModuleExpr::sum(vec![ModuleExpr::md(d), ModuleExpr::mgamma(g)]).unwrap();
    assert_eq!(canonical_split(&sum(1, taylor())).unwrap(), Split { d: 1, order: 1 });
    assert_eq!(canonical_split(&sum(0, taylor())).unwrap(), Split { d: 0, order: 1 });
    assert_eq!(canonical_split(&sum(2, GammaTable::zero(1).unwrap())).unwrap(), Split { d: 2, order: 1 });
}

#[test]
fn log_scale_examples() {
    let l = |v: f64| LogNum::from_f64(v, Mode::Nearest);
    assert!((log_mul(&l(2.0), &l(3.0)).to_f64() - 6.0).abs() < 1e-12);
    assert!((log_add(&l(1.0), &l(1.0)).to_f64() - 2.0).abs() < 1e-12);

    let rows = verify_e14(20).unwrap();
    assert!(rows[1].log_ratio.to_f64() < -1e8);
    let drop = rows[0].log_ratio.sub(&HiReal::from_i64(1_000_000));
    assert!(rows.last().unwrap().log_ratio < drop);

    let e2 = |n: i64| HiReal::from_i64(n).exp().exp();
    let k2 = coeff_norm_chain(4, 2).unwrap();
    let stated = e2(3).mul_i64(3).sub(&e2(4));
    let rel = k2.log_mag().sub(&stated).abs().div(&stated.abs());
    assert!(rel < HiReal::pow2(-38));

    let t = taylor();
    assert!(witness_not_in_m(&t, &u(&[4])).unwrap().in_module);
    for f in [u(&[0, 1]), u(&[1, 1, 1]), u(&[0, 0, 0, 0, 2])] {
        assert!(!witness_not_in_m(&t, &f).unwrap().in_module);
    }
}
