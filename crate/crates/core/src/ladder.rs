//! Ladder coefficients, difference equations and their exact verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratcore::{int, Poly, RatFunc, Rational};
use crate::sobolev::{Family, Params};

/// Outcome of clearing denominators in `Σ f_i P_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub params: Params,
    pub residual_is_zero: bool,
    /// `None` for the zero residual.
    pub residual_degree: Option<usize>,
    #[serde(skip)]
    pub residual: Poly,
}

impl IdentityReport {
    pub fn new(name: &str, params: Params, residual: Poly) -> Self {
        Self {
            identity_name: name.to_string(),
            params,
            residual_is_zero: residual.is_zero(),
            residual_degree: residual.degree(),
            residual,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual_is_zero
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = Poly::gcd(a, b);
    (a * b).div_rem(&g).0.monic()
}

/// `Σ f_i P_i` multiplied by the lcm of the denominators of the `f_i`.
pub fn cleared_residual(terms: &[(RatFunc, Poly)]) -> Poly {
    let l = terms
        .iter()
        .fold(Poly::one(), |acc, (f, _)| lcm(&acc, f.den()));
    terms.iter().fold(Poly::zero(), |acc, (f, p)| {
        let k = l.div_rem(f.den()).0;
        acc + f.num() * &k * p
    })
}

fn rc(q: Rational) -> RatFunc {
    RatFunc::constant(q)
}

fn lin(c0: Rational, c1: Rational) -> RatFunc {
    RatFunc::from_poly(Poly::new(vec![c0, c1]))
}

/// Every coefficient family attached to `Q_n` and `Q_{n-1}`.
#[derive(Clone, Debug)]
pub struct LadderSet {
    pub params: Params,
    pub a1: RatFunc,
    pub b1: RatFunc,
    pub c1: RatFunc,
    pub d1: RatFunc,
    pub a2: RatFunc,
    pub b2: RatFunc,
    pub c2: RatFunc,
    pub d2: RatFunc,
    pub lambda: RatFunc,
    pub xi1: RatFunc,
    pub xi2: RatFunc,
    pub theta1: RatFunc,
    pub theta2: RatFunc,
    pub c3: RatFunc,
    pub d3: RatFunc,
    pub phi1: RatFunc,
    pub phi2: RatFunc,
    pub f1: RatFunc,
    pub g1: RatFunc,
    pub f2: RatFunc,
    pub g2: RatFunc,
}

/// Coefficients of both second order difference equations.
#[derive(Clone, Debug)]
pub struct Sode {
    pub r: RatFunc,
    pub s: RatFunc,
    pub a_cal: RatFunc,
    pub b_cal: RatFunc,
    pub c_cal: RatFunc,
}

#[derive(Clone, Debug)]
pub struct HyperSode {
    pub sigma: RatFunc,
    pub tau: RatFunc,
    pub mu: RatFunc,
    pub report: IdentityReport,
}

pub fn build_ladder(f: &Family, n: usize) -> Result<LadderSet> {
    if n < 2 {
        return Err(Error::IndexTooSmall { required: 2, got: n });
    }
    let one = int(1);
    let a = f.a().clone();
    let nr = int(n as i64);
    let m1 = int(n as i64 - 1);
    let x = RatFunc::x();

    let a1 = f.a1(n);
    let b1 = f.b1(n);
    let a1s = a1.shift(&one);
    let b1s = b1.shift(&one);
    let inv_a = rc(a.recip());

    let c1 = &a1s - &a1 - &b1s * &inv_a;
    let d1 = rc(nr.clone()) * &a1s - &b1
        + lin(int(1) - &nr, int(1)) * &inv_a * &b1s;

    let a1m = f.a1(n - 1);
    let b1m = f.b1(n - 1);
    let a1ms = a1m.shift(&one);
    let b1ms = b1m.shift(&one);
    let am = &a * &m1;
    let a2m = &a * &a * &m1;
    let a2 = -(&b1m * rc(am.recip()));
    let b2 = &a1m + lin(int(1) - &nr - &a, int(1)) * rc(am.recip()) * &b1m;
    let c2 = (rc(a.clone()) * &b1m
        - rc(am.clone()) * &a1ms
        - lin(int(2) - &nr, int(1)) * &b1ms)
        * rc(a2m.recip());
    // (n-2-x)(n-1-x) - a(1+x)
    let quad = RatFunc::from_poly(
        Poly::new(vec![&nr - int(2), int(-1)]) * Poly::new(vec![&nr - int(1), int(-1)])
            - Poly::new(vec![a.clone(), a.clone()]),
    );
    let d2 = (rc(am.clone()) * lin(int(1) - &nr, int(1)) * &a1ms
        + rc(a.clone()) * lin(int(-1) + &a + &nr, int(-1)) * &b1m)
        * rc(a2m.recip())
        - &a1m
        + quad * &b1ms * rc(a2m.recip());

    let lam = &a1 * &b2 - &b1 * &a2;
    if lam.is_zero() {
        return Err(Error::SingularSystem("Lambda(x; n) vanishes identically"));
    }
    let inv_lam = lam.recip()?;
    let xi1 = (&c1 * &b1 - &d1 * &a1) * &inv_lam;
    let xi2 = (&c1 * &b2 - &d1 * &a2) * &inv_lam;
    let theta1 = (&c2 * &b1 - &d2 * &a1) * &inv_lam;
    let theta2 = (&c2 * &b2 - &d2 * &a2) * &inv_lam;

    let a1b = a1.shift(&-&one);
    let b1b = b1.shift(&-&one);
    let inv_x = x.recip()?;
    let c3 = a1.nabla() + rc(nr.clone()) * &inv_x * &a1b - &inv_x * &b1b;
    let d3 = b1.nabla()
        + rc(&nr * &a) * &inv_x * &a1b
        + lin(-a.clone(), int(1)) * &inv_x * &b1b;
    let phi1 = &c3 * &b1 - &d3 * &a1;
    let phi2 = &c3 * &b2 - &d3 * &a2;
    if phi1.is_zero() {
        return Err(Error::DegenerateCoefficient("Phi_1(x; n) vanishes identically"));
    }
    let inv_phi1 = phi1.recip()?;
    let f1 = -(&lam * &inv_phi1);
    let g1 = &phi2 * &inv_phi1;
    let f2 = -(&xi1 * &f1);
    let g2 = &xi2 - &xi1 * &g1;

    Ok(LadderSet {
        params: f.params(n),
        a1,
        b1,
        c1,
        d1,
        a2,
        b2,
        c2,
        d2,
        lambda: lam,
        xi1,
        xi2,
        theta1,
        theta2,
        c3,
        d3,
        phi1,
        phi2,
        f1,
        g1,
        f2,
        g2,
    })
}

/// Difference of a rational function by the quotient rule, cross-checked against shifting.
fn checked_delta(r: &RatFunc, name: &str) -> Result<RatFunc> {
    let d = r.delta_quotient_rule();
    if d != r.delta() {
        return Err(Error::IdentityMismatch(format!("difference of {name}")));
    }
    Ok(d)
}

/// `𝒜, ℬ, 𝒞` from `A₁(x+k; n)`, `B₁(x+k; n)`, `k = 0, 1, 2`.
pub fn sode_explicit(a: &Rational, n: usize, a1: &RatFunc, b1: &RatFunc) -> (RatFunc, RatFunc, RatFunc) {
    let one = int(1);
    let two = int(2);
    let (a0, b0) = (a1.clone(), b1.clone());
    let (a1_, b1_) = (a1.shift(&one), b1.shift(&one));
    let (a2, b2) = (a1.shift(&two), b1.shift(&two));
    let k = |q: Rational| RatFunc::constant(q);
    let p = |c: &[Rational]| RatFunc::from_poly(Poly::new(c.to_vec()));
    let nr = int(n as i64);
    let aa = a.clone();
    let a2c = &aa * &aa;

    // 𝒜
    let a_cal = k(a2c.clone()) * &a1_ * (k(nr.clone()) * &a0 - &b0)
        + k(aa.clone()) * &b1_ * (p(&[int(1) - &nr, int(1)]) * &a0 + &b0);

    // ℬ
    let b_cal = k(int(2) * &a2c * &nr) * &a1_ * &a0
        - p(&[&aa - &nr + int(1), int(1)]) * k(&aa * &nr) * &a2 * &a0
        - p(&[
            -&nr * (&aa + int(3)) + &nr * &nr + int(2),
            -int(2) * &nr + int(3),
            int(1),
        ]) * &a0
            * &b2
        + k(int(2) * &aa) * p(&[int(1) - &nr, int(1)]) * &a0 * &b1_
        - k(int(2) * &a2c) * &a1_ * &b0
        + k(&aa * (&aa - &nr)) * &a2 * &b0
        + k(int(2) * &aa) * &b1_ * &b0
        - p(&[&aa - &nr + int(2), int(1)]) * &b2 * &b0;

    // 𝒞
    let x_ = |c0: i64| p(&[int(c0), int(1)]);
    let c_cal = k(&a2c * &nr) * &a0 * &a1_
        + p(&[-&a2c * &nr + &aa * &nr * &nr - &aa * &nr, -&aa * &nr]) * &a0 * &a2
        + p(&[-&aa * &nr + &aa, aa.clone()]) * &a0 * &b1_
        + p(&[
            &aa * &nr - &nr * &nr + int(3) * &nr - int(2),
            int(2) * &nr - int(3),
            int(-1),
        ]) * &a0
            * &b2
        + p(&[&aa * &nr, &aa * &nr]) * &a1_ * &a2
        - k(a2c.clone()) * &a1_ * &b0
        + p(&[-&nr + int(2), int(3) - &nr, int(1)]) * &a1_ * &b2
        + k(&a2c - &aa * &nr) * &a2 * &b0
        - k(aa.clone()) * x_(1) * &a2 * &b1_
        + k(aa.clone()) * &b0 * &b1_
        + p(&[-&aa + &nr - int(2), int(-1)]) * &b0 * &b2
        + x_(1) * &b1_ * &b2;
    (a_cal, b_cal, c_cal)
}

impl LadderSet {
    /// Coefficients of the first SODE, with the explicit forms checked against the assembly.
    pub fn sode_rs(&self) -> Result<Sode> {
        let one = RatFunc::one();
        let dxi1 = checked_delta(&self.xi1, "Xi_1")?;
        let dxi2 = checked_delta(&self.xi2, "Xi_2")?;
        if (&self.xi1 + &dxi1).is_zero() {
            return Err(Error::DegenerateCoefficient("Xi_1 + Delta Xi_1"));
        }
        let inv_xi1 = self.xi1.recip()?;
        let t1m = &self.theta1 - &one;
        let r = &t1m * &dxi1 * &inv_xi1 - &dxi2 + &self.theta1 - &self.xi2;
        let s = &self.theta2 * (&self.xi1 + &dxi1)
            - &dxi2
            - &self.theta1 * &self.xi2
            - &self.xi2 * &t1m * &dxi1 * &inv_xi1;
        let (a_cal, b_cal, c_cal) =
            sode_explicit(&self.params.a, self.params.n, &self.a1, &self.b1);
        if a_cal.is_zero() {
            return Err(Error::DegenerateCoefficient("explicit A(x; n)"));
        }
        if &b_cal / &a_cal != r {
            return Err(Error::IdentityMismatch("R = B / A".into()));
        }
        if &c_cal / &a_cal != s {
            return Err(Error::IdentityMismatch("S = C / A".into()));
        }
        Ok(Sode {
            r,
            s,
            a_cal,
            b_cal,
            c_cal,
        })
    }

    /// The hypergeometric-type coefficients `σ, τ, μ`.
    pub fn hyper_coeffs(&self, sode: &Sode) -> Result<(RatFunc, RatFunc, RatFunc)> {
        let sigma = self.f2.clone();
        let tau = checked_delta(&self.f2, "F_2")? + self.g2.shift(&int(1)) + &sode.r;
        let mu = checked_delta(&self.g2, "G_2")? + &sode.s;
        Ok((sigma, tau, mu))
    }

    /// Ladder coefficients read off the Cramer solution, against Ξ.
    pub fn determinant_consistency(&self) -> bool {
        let inv_lam = self.lambda.recip().expect("nonzero Lambda");
        let q_n = (&self.c1 * &self.b2 - &self.d1 * &self.a2) * &inv_lam;
        let q_nm1 = (&self.a1 * &self.d1 - &self.c1 * &self.b1) * &inv_lam;
        q_n == self.xi2 && -q_nm1 == self.xi1
    }

    /// The 21 members in a fixed order with their names.
    pub fn members(&self) -> Vec<(&'static str, &RatFunc)> {
        vec![
            ("A1", &self.a1),
            ("B1", &self.b1),
            ("C1", &self.c1),
            ("D1", &self.d1),
            ("A2", &self.a2),
            ("B2", &self.b2),
            ("C2", &self.c2),
            ("D2", &self.d2),
            ("C3", &self.c3),
            ("D3", &self.d3),
            ("Lambda", &self.lambda),
            ("Xi1", &self.xi1),
            ("Xi2", &self.xi2),
            ("Phi1", &self.phi1),
            ("Phi2", &self.phi2),
            ("F1", &self.f1),
            ("G1", &self.g1),
            ("F2", &self.f2),
            ("G2", &self.g2),
        ]
    }
}

/// Cached polynomial data for the identities at degree `n`.
struct Polys {
    qn: Poly,
    qm: Poly,
    cn: Poly,
    cm: Poly,
}

fn polys(f: &Family, n: usize) -> Polys {
    Polys {
        qn: f.q(n).clone(),
        qm: f.q(n - 1).clone(),
        cn: f.basis().poly(n).clone(),
        cm: f.basis().poly(n - 1).clone(),
    }
}

fn neg(r: &RatFunc) -> RatFunc {
    -r
}

pub fn verify_lowering(f: &Family, l: &LadderSet) -> IdentityReport {
    let p = polys(f, l.params.n);
    let res = cleared_residual(&[
        (l.xi2.clone(), p.qn.clone()),
        (RatFunc::constant(int(-1)), p.qn.delta()),
        (neg(&l.xi1), p.qm),
    ]);
    IdentityReport::new("lowering", l.params.clone(), res)
}

pub fn verify_raising(f: &Family, l: &LadderSet) -> IdentityReport {
    let p = polys(f, l.params.n);
    let res = cleared_residual(&[
        (l.theta1.clone(), p.qm.clone()),
        (RatFunc::one(), p.qm.delta()),
        (neg(&l.theta2), p.qn),
    ]);
    IdentityReport::new("raising", l.params.clone(), res)
}

pub fn verify_sode(f: &Family, l: &LadderSet, s: &Sode) -> IdentityReport {
    let q = f.q(l.params.n);
    let dq = q.delta();
    let res = cleared_residual(&[
        (RatFunc::one(), dq.delta()),
        (s.r.clone(), dq),
        (s.s.clone(), q.clone()),
    ]);
    IdentityReport::new("sode", l.params.clone(), res)
}

pub fn hypergeometric_type_sode(f: &Family, l: &LadderSet, s: &Sode) -> Result<HyperSode> {
    let (sigma, tau, mu) = l.hyper_coeffs(s)?;
    let q = f.q(l.params.n);
    let res = cleared_residual(&[
        (sigma.clone(), q.nabla().delta()),
        (tau.clone(), q.delta()),
        (mu.clone(), q.clone()),
    ]);
    Ok(HyperSode {
        sigma,
        tau,
        mu,
        report: IdentityReport::new("eht2", l.params.clone(), res),
    })
}

pub fn verify_inverse_relations(f: &Family, l: &LadderSet) -> Vec<IdentityReport> {
    let p = polys(f, l.params.n);
    let r1 = cleared_residual(&[
        (l.lambda.clone(), p.cn),
        (neg(&l.b2), p.qn.clone()),
        (l.b1.clone(), p.qm.clone()),
    ]);
    let r2 = cleared_residual(&[
        (l.lambda.clone(), p.cm),
        (l.a2.clone(), p.qn),
        (neg(&l.a1), p.qm),
    ]);
    vec![
        IdentityReport::new("inverse C_n", l.params.clone(), r1),
        IdentityReport::new("inverse C_{n-1}", l.params.clone(), r2),
    ]
}

/// Connection-type relations of the lemmas, one report each.
pub fn verify_lemmas(f: &Family, l: &LadderSet) -> Vec<IdentityReport> {
    let p = polys(f, l.params.n);
    let one = RatFunc::one();
    let rep = |name: &str, terms: &[(RatFunc, Poly)]| {
        IdentityReport::new(name, l.params.clone(), cleared_residual(terms))
    };
    let nab = p.qn.nabla();
    let mut out = vec![
        rep(
            "connection",
            &[(one.clone(), p.qn.clone()), (neg(&l.a1), p.cn.clone()), (neg(&l.b1), p.cm.clone())],
        ),
        rep(
            "delta q in c",
            &[(one.clone(), p.qn.delta()), (neg(&l.c1), p.cn.clone()), (neg(&l.d1), p.cm.clone())],
        ),
        rep(
            "q_prev in c",
            &[(one.clone(), p.qm.clone()), (neg(&l.a2), p.cn.clone()), (neg(&l.b2), p.cm.clone())],
        ),
        rep(
            "delta q_prev in c",
            &[(one.clone(), p.qm.delta()), (neg(&l.c2), p.cn.clone()), (neg(&l.d2), p.cm.clone())],
        ),
        rep(
            "nabla q in c",
            &[(one.clone(), nab.clone()), (neg(&l.c3), p.cn.clone()), (neg(&l.d3), p.cm.clone())],
        ),
        rep(
            "q_prev in nabla q",
            &[(one.clone(), p.qm.clone()), (neg(&l.f1), nab.clone()), (neg(&l.g1), p.qn.clone())],
        ),
        rep(
            "delta q in nabla q",
            &[(one.clone(), p.qn.delta()), (neg(&l.f2), nab), (neg(&l.g2), p.qn.clone())],
        ),
    ];
    let lam = &l.a1 * &l.b2 - &l.b1 * &l.a2;
    let det = if lam == l.lambda && l.determinant_consistency() {
        Poly::zero()
    } else {
        Poly::one()
    };
    out.push(IdentityReport::new("determinants", l.params.clone(), det));
    out.extend(verify_inverse_relations(f, l));
    out
}

/// Expected λ = 0 values of the ladder members and of `R, S, 𝒜, ℬ, 𝒞`.
pub fn lambda_zero_expected(a: &Rational, n: usize) -> Vec<(&'static str, RatFunc)> {
    let nr = int(n as i64);
    let x = RatFunc::x();
    let inv_x = x.recip().expect("x is nonzero");
    let k = |q: Rational| RatFunc::constant(q);
    let ia = a.recip();
    vec![
        ("A1", RatFunc::one()),
        ("B1", RatFunc::zero()),
        ("C1", RatFunc::zero()),
        ("D1", k(nr.clone())),
        ("A2", RatFunc::zero()),
        ("B2", RatFunc::one()),
        ("C2", k(-&ia)),
        ("D2", lin(int(1) - &nr - a, int(1)) * k(ia.clone())),
        ("C3", k(nr.clone()) * &inv_x),
        ("D3", k(&nr * a) * &inv_x),
        ("Lambda", RatFunc::one()),
        ("Xi1", k(-&nr)),
        ("Xi2", RatFunc::zero()),
        ("Phi1", k(-&nr * a) * &inv_x),
        ("Phi2", k(nr.clone()) * &inv_x),
        ("F1", &x * k((&nr * a).recip())),
        ("G1", k(-&ia)),
        ("F2", &x * k(ia.clone())),
        ("G2", k(-&nr * &ia)),
        ("R", lin(int(-1) + a + &nr, int(-1)) * k(ia.clone())),
        ("S", k(&nr * &ia)),
        ("A_cal", k(a * a * &nr)),
        ("B_cal", k(-a * &nr) * lin(int(1) - a - &nr, int(1))),
        ("C_cal", k(a * &nr * &nr)),
        ("sigma", &x * k(ia.clone())),
        ("tau", lin(int(1), -&ia)),
        ("mu", k(&nr * &ia)),
    ]
}

/// The computed counterparts of [`lambda_zero_expected`] for a λ = 0 family.
pub fn lambda_zero_computed(f: &Family, n: usize) -> Result<Vec<(&'static str, RatFunc)>> {
    let l = build_ladder(f, n)?;
    let s = l.sode_rs()?;
    let (sigma, tau, mu) = l.hyper_coeffs(&s)?;
    let mut out: Vec<(&'static str, RatFunc)> =
        l.members().into_iter().map(|(k, v)| (k, v.clone())).collect();
    out.extend([
        ("R", s.r),
        ("S", s.s),
        ("A_cal", s.a_cal),
        ("B_cal", s.b_cal),
        ("C_cal", s.c_cal),
        ("sigma", sigma),
        ("tau", tau),
        ("mu", mu),
    ]);
    Ok(out)
}

/// Every ladder-section identity at degree `n`.
pub fn verify_all(f: &Family, n: usize) -> Result<Vec<IdentityReport>> {
    let l = build_ladder(f, n)?;
    let s = l.sode_rs()?;
    let mut out = verify_lemmas(f, &l);
    out.push(verify_lowering(f, &l));
    out.push(verify_raising(f, &l));
    out.push(verify_sode(f, &l, &s));
    out.push(hypergeometric_type_sode(f, &l, &s)?.report);
    Ok(out)
}

pub fn ladder_for(params: &Params) -> Result<(Family, LadderSet)> {
    let f = Family::from_params(params)?;
    let l = build_ladder(&f, params.n)?;
    Ok((f, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::rat;

    fn fam(a: Rational, c: Rational, l: Rational, n: usize) -> Family {
        Family::new(&a, &c, &l, n).unwrap()
    }

    #[test]
    fn rejects_small_n() {
        let f = fam(int(2), int(-5), int(1), 3);
        assert!(matches!(
            build_ladder(&f, 1),
            Err(Error::IndexTooSmall { required: 2, got: 1 })
        ));
    }

    #[test]
    fn identities_hold() {
        for (a, c, l, n) in [
            (int(2), int(-5), rat(1, 7), 3),
            (int(1), int(-2), int(10), 5),
            (int(7), int(-15), int(5), 4),
            (rat(1, 2), int(-3), int(100), 6),
            (int(2), int(-2), int(1), 2),
        ] {
            let f = fam(a, c, l, n);
            for r in verify_all(&f, n).unwrap() {
                assert!(r.passed(), "{} at n={n}", r.identity_name);
            }
        }
    }

    #[test]
    fn lambda_zero_values() {
        for (a, n) in [(int(2), 3usize), (rat(7, 3), 5), (int(1), 2)] {
            let f = fam(a.clone(), int(-5), int(0), n);
            let got = lambda_zero_computed(&f, n).unwrap();
            let want = lambda_zero_expected(&a, n);
            assert_eq!(got.len(), want.len());
            for ((gk, gv), (wk, wv)) in got.iter().zip(&want) {
                assert_eq!(gk, wk);
                assert_eq!(gv, wv, "{gk} a={a} n={n}");
            }
            let l = build_ladder(&f, n).unwrap();
            let s = l.sode_rs().unwrap();
            let r = verify_sode(&f, &l, &s);
            assert!(r.passed());
        }
    }

    #[test]
    fn report_json() {
        let f = fam(int(2), int(-5), rat(1, 7), 3);
        let l = build_ladder(&f, 3).unwrap();
        let r = verify_lowering(&f, &l);
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["identity_name"], "lowering");
        assert_eq!(j["residual_is_zero"], true);
        assert!(j["residual_degree"].is_null());
        assert_eq!(j["params"]["lambda"], "1/7");
    }

    #[test]
    fn corrupted_coefficient_is_caught() {
        let f = fam(int(2), int(-5), rat(1, 7), 3);
        let mut l = build_ladder(&f, 3).unwrap();
        l.xi2 = &l.xi2 + RatFunc::constant(rat(1, 1000));
        assert!(!verify_lowering(&f, &l).passed());
    }
}
