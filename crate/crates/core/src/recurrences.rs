//! Five-term and rational three-term recurrences for `Q_n^λ`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::mass_quadratic;
use crate::ladder::{build_ladder, cleared_residual, IdentityReport};
use crate::ratcore::rational::serde_rational_vec;
use crate::ratcore::{int, Poly, RatFunc, Rational};
use crate::sobolev::{Family, Params};

/// `ρ_{n,n+1}, ρ_{n,n}, ρ_{n,n-1}, ρ_{n,n-2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiveTermCoeffs {
    #[serde(flatten)]
    pub params: Params,
    #[serde(with = "serde_rational_vec")]
    pub rho: Vec<Rational>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct TtrrCoeffs {
    pub params: Params,
    pub beta_t: RatFunc,
    pub gamma_t: RatFunc,
}

fn require_n2(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::IndexTooSmall { required: 2, got: n })
    } else {
        Ok(())
    }
}

/// `-A₁₁(m; c) = γ_{m-1}(b_m - 1)/a_{m-2}`, zero at `m = 1`.
fn gamma_over_a(f: &Family, m: usize) -> Result<Rational> {
    if m <= 1 {
        return Ok(Rational::zero());
    }
    let gamma = int(m as i64 - 1) * f.a();
    Ok(gamma / f.a_n(m as i64 - 2)? * (f.b_n(m) - int(1)))
}

/// The four closed-form coefficients.
pub fn rho_closed_form(f: &Family, n: usize) -> Result<[Rational; 4]> {
    require_n2(n)?;
    let (a, c) = (f.a(), f.c());
    let b = f.basis();
    let nr = int(n as i64);
    let s_n = f.sigma_explicit(n)?;
    let s_n1 = f.sigma_explicit(n + 1)?;
    let (qn, qn1, qm1, qm2) = (f.q_norm(n), f.q_norm(n + 1), f.q_norm(n - 1), f.q_norm(n - 2));
    let bm1 = f.b_n(n) - int(1);
    let g = gamma_over_a(f, n)?;
    let gamma_n = &nr * a;

    let r_up = &s_n1.sm1 * b.norm(n) / &qn1 - &g;
    let ratio = int(n as i64 - 1) * a / f.a_n(n as i64 - 2)?;
    let bracket = ratio * (&s_n.sm1 * b.norm(n - 1) / &qn - (&nr + a - c - int(2)));
    let r_0 = &s_n.s0 * b.norm(n) / &qn - &bm1 * (bracket + (a - &gamma_n));
    let r_down = &s_n.sm1 * b.norm(n - 1) / &qm1 - gamma_over_a(f, n - 1)? * &qn / &qm1;
    let r_down2 = &s_n.sm2 * b.norm(n - 2) / &qm2;
    Ok([r_up, r_0, r_down, r_down2])
}

/// `⟨(x-c)(x-c-1) Q_n, Q_k⟩_λ / ‖Q_k‖²` for `k = 0..=n+1`.
pub fn rho_projection(f: &Family, n: usize) -> Vec<Rational> {
    let wq = mass_quadratic(f.c()) * f.q(n);
    (0..=n + 1)
        .map(|k| f.inner(&wq, f.q(k)) / f.q_norm(k))
        .collect()
}

/// Closed forms, projection cross-check and the recurrence itself.
pub fn five_term_coeffs(f: &Family, n: usize) -> Result<(FiveTermCoeffs, Vec<IdentityReport>)> {
    let rho = rho_closed_form(f, n)?;
    let proj = rho_projection(f, n);
    let params = f.params(n);
    let mut reports = Vec::new();

    let lhs = mass_quadratic(f.c()) * f.q(n);
    let rhs = f.q(n + 2).clone()
        + f.q(n + 1).scale(&rho[0])
        + f.q(n).scale(&rho[1])
        + f.q(n - 1).scale(&rho[2])
        + f.q(n - 2).scale(&rho[3]);
    reports.push(IdentityReport::new("five-term", params.clone(), lhs - rhs));

    let matches = [n + 1, n, n - 1, n - 2]
        .iter()
        .zip(&rho)
        .all(|(&k, r)| &proj[k] == r);
    let vanishing = proj.iter().take(n.saturating_sub(2)).all(|r| r.is_zero());
    let flag = if matches && vanishing { Poly::zero() } else { Poly::one() };
    reports.push(IdentityReport::new("five-term projection", params.clone(), flag));

    let verified = reports.iter().all(|r| r.passed());
    Ok((
        FiveTermCoeffs {
            params,
            rho: rho.to_vec(),
            verified,
        },
        reports,
    ))
}

/// `β̃, γ̃` through the ladder determinants.
pub fn ttrr_determinant(f: &Family, n: usize) -> Result<TtrrCoeffs> {
    require_n2(n)?;
    let ln = build_ladder(f, n)?;
    let lu = build_ladder(f, n + 1)?;
    if lu.theta2.is_zero() {
        return Err(Error::DegenerateCoefficient("Theta_2(x; n+1)"));
    }
    let inv = lu.theta2.recip()?;
    Ok(TtrrCoeffs {
        params: f.params(n),
        beta_t: (&ln.xi2 + &lu.theta1) * &inv,
        gamma_t: -(&ln.xi1 * &inv),
    })
}

/// `β̃, γ̃` written directly over `A₁`, `B₁` at degrees `n-1, n, n+1`.
pub fn ttrr_explicit(f: &Family, n: usize) -> Result<TtrrCoeffs> {
    require_n2(n)?;
    let a = f.a().clone();
    let nr = int(n as i64);
    let am = RatFunc::constant(&a * int(n as i64 - 1));
    let k = RatFunc::constant;
    let p = |c: Vec<Rational>| RatFunc::from_poly(Poly::new(c));
    let (a_m, b_m) = (f.a1(n - 1), f.b1(n - 1));
    let (a_0, b_0) = (f.a1(n), f.b1(n));
    let (a_p, b_p) = (f.a1(n + 1), f.b1(n + 1));

    let den = &b_m * (p(vec![-&a - &nr + int(1), int(1)]) * &a_0 + &b_0) + &am * &a_m * &a_0;
    if den.is_zero() {
        return Err(Error::DegenerateCoefficient("TTRR denominator"));
    }
    // a² + a(n - 2x - 1) + (n - x)² - n + x
    let quad = p(vec![
        &a * &a + &a * (&nr - int(1)) + &nr * &nr - &nr,
        -int(2) * &a - int(2) * &nr + int(1),
        int(1),
    ]);
    let beta_num = &am * &a_m * (p(vec![-&a - &nr, int(1)]) * &a_p + &b_p)
        + &b_m * (quad * &a_p - p(vec![&a + &nr - int(1), int(-1)]) * &b_p);
    let gamma_num = &am
        * (&a_p * (p(vec![&a + &nr, int(-1)]) * &b_0 - k(&a * &nr) * &a_0) - &b_0 * &b_p);
    let inv = den.recip()?;
    Ok(TtrrCoeffs {
        params: f.params(n),
        beta_t: &beta_num * &inv,
        gamma_t: &gamma_num * &inv,
    })
}

/// Both derivations, their equality, and the recurrence `Q_{n+1} = β̃ Q_n + γ̃ Q_{n-1}`.
pub fn ttrr_coeffs(f: &Family, n: usize) -> Result<(TtrrCoeffs, IdentityReport)> {
    let det = ttrr_determinant(f, n)?;
    let exp = ttrr_explicit(f, n)?;
    if det.beta_t != exp.beta_t || det.gamma_t != exp.gamma_t {
        return Err(Error::IdentityMismatch("rational three-term coefficients".into()));
    }
    let res = cleared_residual(&[
        (RatFunc::one(), f.q(n + 1).clone()),
        (-&det.beta_t, f.q(n).clone()),
        (-&det.gamma_t, f.q(n - 1).clone()),
    ]);
    Ok((det, IdentityReport::new("ttrr", f.params(n), res)))
}

pub fn five_term_for(params: &Params) -> Result<FiveTermCoeffs> {
    let f = Family::from_params(params)?;
    Ok(five_term_coeffs(&f, params.n)?.0)
}

pub fn ttrr_for(params: &Params) -> Result<TtrrCoeffs> {
    let f = Family::from_params(params)?;
    Ok(ttrr_coeffs(&f, params.n)?.0)
}
