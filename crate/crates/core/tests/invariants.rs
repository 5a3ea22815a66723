//! Property tests over random parameters.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use sobolev_charlier::charlier::{charlier_norm, charlier_poly};
use sobolev_charlier::kernels::kernel_at;
use sobolev_charlier::ratcore::{factorial, int, pow, rat};
use sobolev_charlier::sobolev::Family;
use sobolev_charlier::zeros::{self, chain_check, rational_f64, roots, Pencil, DEFAULT_TOL};
use sobolev_charlier::Rational;

fn pos_rational(max_num: i64) -> impl Strategy<Value = Rational> {
    (1..=max_num, 1..=12i64).prop_map(|(p, q)| rat(p, q))
}

fn zeros_c() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(int(-2)), Just(int(-5)), Just(int(-15)), Just(rat(-7, 2))]
}

fn algebra_c() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(int(-1)), Just(int(-3)), Just(int(0)), Just(int(2)), Just(rat(-9, 4))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sobolev_family_invariants(a in pos_rational(64), c in algebra_c(), l in pos_rational(9000), n in 1usize..=6) {
        let f = Family::new(&a, &c, &l, n).unwrap();
        let q = f.q(n);
        prop_assert!(q.is_monic());
        prop_assert_eq!(q.degree(), Some(n));
        let cn = charlier_poly(n, &a).unwrap();
        prop_assert!((q - &cn).degree().is_none_or(|d| d < n));
        let b = f.b_n(n);
        prop_assert!(b > Rational::one());
        let want = Rational::from(factorial(n)) * pow(&a, n) * &b;
        prop_assert_eq!(f.q_norm(n), want.clone());
        prop_assert_eq!(f.inner(q, q), want);
        for m in 0..n {
            prop_assert!(f.inner(f.q(m), q).is_zero(), "<Q_{}, Q_{}> != 0", m, n);
        }
        prop_assert!(f.constructions_agree(n).unwrap());
    }

    #[test]
    fn kernel_telescoping_and_positivity(a in pos_rational(64), c in algebra_c(), n in 1usize..=10) {
        let k = |m: usize| kernel_at(m, 1, 1, &a, &c, &c).unwrap();
        let d = charlier_poly(n, &a).unwrap().delta().eval(&c);
        prop_assert_eq!(k(n) - k(n - 1), &d * &d / charlier_norm(n, &a));
        prop_assert!(k(n).is_positive());
    }

    #[test]
    fn zeros_real_and_chained(a in pos_rational(48), c in zeros_c(), l in pos_rational(5000), n in 2usize..=8) {
        let p = Pencil::for_zeros(n, &a, &c).unwrap();
        let x = roots(p.charlier(), DEFAULT_TOL).unwrap();
        let y = roots(&p.limit().unwrap(), DEFAULT_TOL).unwrap();
        // small and large masses both
        for lam in [&l / int(1_000_000_000), l.clone()] {
            let eta = roots(&p.sobolev(&lam), DEFAULT_TOL).unwrap();
            prop_assert_eq!(eta.len(), n);
            prop_assert!(eta.max_imag() < 1e-8);
            let (xr, yr, er) = (x.real_roots().unwrap(), y.real_roots().unwrap(), eta.real_roots().unwrap());
            let chain = chain_check(&yr, &er, &xr);
            prop_assert!(chain.holds, "{:?}", chain);
            // at most one zero off (0, inf), negative exactly past lambda0
            let off = er.iter().filter(|v| **v <= 0.0).count();
            prop_assert!(off <= 1);
            if let Ok(l0) = p.lambda0() {
                prop_assert_eq!(off == 1, lam > l0, "lambda={} lambda0={}", rational_f64(&lam), rational_f64(&l0));
            }
        }
    }

    #[test]
    fn zeros_decrease_in_lambda(a in pos_rational(48), c in zeros_c(), l1 in pos_rational(1000), l2 in pos_rational(1000), n in 2usize..=7) {
        prop_assume!(l1 != l2);
        let (lo, hi) = if l1 < l2 { (l1, l2) } else { (l2, l1) };
        let p = Pencil::for_zeros(n, &a, &c).unwrap();
        let e1 = roots(&p.sobolev(&(&lo / int(1000))), DEFAULT_TOL).unwrap().real_roots().unwrap();
        let e2 = roots(&p.sobolev(&hi), DEFAULT_TOL).unwrap().real_roots().unwrap();
        for (u, v) in e1.iter().zip(&e2) {
            prop_assert!(v <= &(u + 1e-10), "{} then {}", u, v);
        }
    }

    #[test]
    fn roots_conjugate_and_residual(a in pos_rational(48), c in prop_oneof![Just(int(2)), Just(int(5)), Just(rat(1, 3))], l in pos_rational(5000), n in 2usize..=8) {
        let Ok(p) = Pencil::new(n, &a, &c) else { return Ok(()); };
        let rs = roots(&p.sobolev(&l), DEFAULT_TOL).unwrap();
        prop_assert_eq!(rs.len(), n);
        prop_assert!(rs.residuals.iter().all(|r| *r <= DEFAULT_TOL));
        let mut conj: Vec<(f64, f64)> = rs.roots.iter().map(|z| (z.re, -z.im)).collect();
        conj.sort_by(|u, v| u.partial_cmp(v).unwrap());
        let mut orig: Vec<(f64, f64)> = rs.roots.iter().map(|z| (z.re, z.im)).collect();
        orig.sort_by(|u, v| u.partial_cmp(v).unwrap());
        prop_assert_eq!(conj, orig);
    }
}

#[test]
fn coefficientwise_limit_at_large_mass() {
    for (n, a, c) in [(4usize, int(2), int(-5)), (7, rat(17, 50), int(-2)), (3, int(5), int(-15))] {
        let p = Pencil::for_zeros(n, &a, &c).unwrap();
        let q = p.sobolev(&pow(&int(10), 12));
        let g = p.limit().unwrap();
        for k in 0..=n {
            let d = (rational_f64(&q.coeff(k)) - rational_f64(&g.coeff(k))).abs();
            assert!(d < 1e-9, "n={n} k={k} diff {d:e}");
        }
    }
}

#[test]
fn limit_representation_identity() {
    for (a, c, l) in [(int(2), int(-5), int(3)), (rat(7, 3), int(-2), rat(1, 9)), (int(1), int(-15), int(500))] {
        let f = Family::new(&a, &c, &l, 8).unwrap();
        for n in 2..=8 {
            let r = zeros::limit_rep_report(&f, n).unwrap();
            assert!(r.passed(), "n={n} a={a} c={c}");
        }
    }
}

#[test]
fn decimals_parse_exactly() {
    use sobolev_charlier::ratcore::parse_rational;
    assert_eq!(parse_rational("0.34").unwrap(), rat(17, 50));
    assert_eq!(parse_rational("5e-12").unwrap(), rat(1, 200_000_000_000));
    assert_eq!(parse_rational("5.0e-8").unwrap(), rat(1, 20_000_000));
    assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
}

#[test]
fn limit_poly_small_case() {
    let g = zeros::limit_poly(2, &int(1), &int(-2)).unwrap();
    assert!(g.is_monic());
    assert_eq!(g.degree(), Some(2));
    // Delta Q_n(c) shrinks like 1/lambda, so the limit has Delta G_n(c) = 0.
    assert!(g.delta().eval(&int(-2)).is_zero());
}
