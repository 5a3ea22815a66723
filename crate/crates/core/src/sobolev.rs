//! Sobolev-type Charlier polynomials `Q_n^λ` and their connection coefficients.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charlier::{check_a, poisson_moments, CharlierBasis};
use crate::error::{Error, Result};
use crate::kernels::{frak_c, mass_quadratic};
use crate::ratcore::rational::{serde_rational, serde_rational_vec};
use crate::ratcore::{factorial, int, pochhammer, pow, Poly, RatFunc, Rational};

/// One point `(n, a, c, λ)` of the parameter space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

impl Params {
    pub fn new(n: usize, a: Rational, c: Rational, lambda: Rational) -> Self {
        Self { n, a, c, lambda }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn with_lambda(&self, lambda: Rational) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> ValidityReport {
        validate(self)
    }

    pub(crate) fn require_algebra(&self) -> Result<()> {
        let r = self.validate();
        match r.reason {
            Some(msg) if !r.algebra_ok => Err(Error::InvalidParameter(msg)),
            _ => Ok(()),
        }
    }

    pub(crate) fn require_zeros(&self) -> Result<()> {
        self.require_algebra()?;
        if self.validate().zeros_ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "zero analysis needs c < -1, got c = {}",
                self.c
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub algebra_ok: bool,
    pub zeros_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Whether `ψ` has mass in `(c, c + 1)`: false exactly when `c` is a
/// nonnegative integer or `c <= -1`.
fn mass_inside(c: &Rational) -> bool {
    let nonneg_int = c.is_integer() && !c.is_negative();
    !(nonneg_int || c <= &int(-1))
}

pub fn validate(p: &Params) -> ValidityReport {
    let reason = if !p.a.is_positive() {
        Some(format!("a must be positive, got {}", p.a))
    } else if p.lambda.is_negative() {
        Some(format!("lambda must be nonnegative, got {}", p.lambda))
    } else if mass_inside(&p.c) {
        Some(format!(
            "the interval ({0}, {0} + 1) contains a point of the Poisson spectrum",
            p.c
        ))
    } else {
        None
    };
    let algebra_ok = reason.is_none();
    let zeros_ok = algebra_ok && p.c < int(-1);
    let reason = reason.or_else(|| (!zeros_ok).then(|| "zero analysis needs c < -1".to_string()));
    ValidityReport {
        algebra_ok,
        zeros_ok,
        reason,
    }
}

/// `⟨p, q⟩ + λ Δp(c) Δq(c)`.
pub fn sobolev_inner(p: &Poly, q: &Poly, params: &Params) -> Result<Rational> {
    params.require_algebra()?;
    let classical = crate::charlier::classical_inner(p, q, &params.a);
    Ok(classical + &params.lambda * p.delta().eval(&params.c) * q.delta().eval(&params.c))
}

/// The four scalars of the expansions of `(x-c)(x-c-1) A₁` and `(x-c)(x-c-1) B₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop2Coeffs {
    pub a11: Rational,
    pub a10: Rational,
    pub b11: Rational,
    pub b10: Rational,
}

/// Coefficients of `(x-c)(x-c-1) Q_n` over `C_{n+2}, ..., C_{n-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub s1: Rational,
    pub s0: Rational,
    pub sm1: Rational,
    pub sm2: Rational,
}

/// Evaluation route for the hypergeometric representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperForm {
    /// `(-a)^n Σ [A₁ - (n-k) B₁/(a n)] (-n)_k (-x)_k (-1/a)^k / k!`; no poles beyond those of A₁, B₁.
    PreNormalized,
    /// `-(-a)^{n-1} (B₁/n) Σ [k - φ] ...`; needs `B₁(x) ≠ 0`.
    Phi,
    /// The `3F1` form; fails when `(-φ)_k` vanishes.
    Strict3F1,
}

/// Connection-formula data for one degree.
#[derive(Clone, Debug)]
pub struct Connection {
    pub a1: RatFunc,
    pub b1: RatFunc,
    pub q: Poly,
}

/// All `Q_0..=Q_N` for a fixed `(a, c, λ)`, with the scalars they depend on.
#[derive(Clone, Debug)]
pub struct Family {
    a: Rational,
    c: Rational,
    lambda: Rational,
    max_n: usize,
    basis: CharlierBasis,
    /// `k11[m + 1] = K_m^{(1,1)}(c, c)`
    k11: Vec<Rational>,
    q: Vec<Poly>,
    moments: Vec<Rational>,
}

impl Family {
    /// Builds `Q_0..=Q_{max_n}`; the Charlier basis runs three degrees further.
    pub fn new(a: &Rational, c: &Rational, lambda: &Rational, max_n: usize) -> Result<Self> {
        check_a(a)?;
        Params::new(max_n, a.clone(), c.clone(), lambda.clone()).require_algebra()?;
        let nb = max_n + 3;
        let basis = CharlierBasis::new(a, nb)?;
        let k11 = basis.k11_table(c);
        let mut q = Vec::with_capacity(nb + 1);
        let mut kern = Poly::zero();
        for (n, k) in k11.iter().enumerate().take(nb + 1) {
            let coef = lambda * basis.delta_eval(n as i64, c) / (int(1) + lambda * k);
            q.push(basis.poly(n) - kern.scale(&coef));
            let w = basis.delta_eval(n as i64, c) / basis.norm(n);
            kern = kern + basis.poly(n).scale(&w);
        }
        let moments = poisson_moments(2 * nb + 2, a);
        Ok(Self {
            a: a.clone(),
            c: c.clone(),
            lambda: lambda.clone(),
            max_n,
            basis,
            k11,
            q,
            moments,
        })
    }

    pub fn from_params(p: &Params) -> Result<Self> {
        Self::new(&p.a, &p.c, &p.lambda, p.n)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn params(&self, n: usize) -> Params {
        Params::new(n, self.a.clone(), self.c.clone(), self.lambda.clone())
    }

    pub fn basis(&self) -> &CharlierBasis {
        &self.basis
    }

    /// `K_m^{(1,1)}(c, c)`, `m >= -1`.
    pub fn k11(&self, m: i64) -> &Rational {
        &self.k11[(m + 1) as usize]
    }

    /// `Q_n`, valid up to `max_n + 3`.
    pub fn q(&self, n: usize) -> &Poly {
        &self.q[n]
    }

    /// `Q_n` with `Q_{-1} = 0`.
    pub fn q_i(&self, n: i64) -> Poly {
        if n < 0 {
            Poly::zero()
        } else {
            self.q[n as usize].clone()
        }
    }

    /// `1 + λ K_{n-1}^{(1,1)}(c, c)`.
    pub fn lambda_c(&self, n: usize) -> Rational {
        int(1) + &self.lambda * self.k11(n as i64 - 1)
    }

    pub fn b_n(&self, n: usize) -> Rational {
        (int(1) + &self.lambda * self.k11(n as i64)) / self.lambda_c(n)
    }

    /// `a_n = C_{n+1}(c) / C_n(c)`, `n >= -1`.
    pub fn a_n(&self, n: i64) -> Result<Rational> {
        let den = self.basis.eval(n, &self.c);
        if den.is_zero() {
            return Err(Error::DivisionByZero {
                what: "a_n",
                index: n,
            });
        }
        Ok(self.basis.eval(n + 1, &self.c) / den)
    }

    /// `ΔQ_n(c) = ΔC_n(c) / (1 + λ K_{n-1}^{(1,1)}(c, c))`.
    pub fn delta_q_at_c(&self, n: usize) -> Rational {
        self.basis.delta_eval(n as i64, &self.c) / self.lambda_c(n)
    }

    /// `n! aⁿ b_n`.
    pub fn q_norm(&self, n: usize) -> Rational {
        self.basis.norm(n) * self.b_n(n)
    }

    /// The norm by `‖C_n‖² + γ_n (b_n - 1) ‖C_{n-1}‖²`.
    pub fn q_norm_gamma(&self, n: usize) -> Rational {
        if n == 0 {
            return self.basis.norm(0).clone();
        }
        let gamma = int(n as i64) * &self.a;
        self.basis.norm(n) + gamma * (self.b_n(n) - int(1)) * self.basis.norm(n - 1)
    }

    pub fn inner(&self, p: &Poly, q: &Poly) -> Rational {
        let pq = p * q;
        let classical = pq
            .coeffs()
            .iter()
            .zip(&self.moments)
            .fold(Rational::zero(), |acc, (c, m)| acc + c * m);
        assert!(
            pq.degree().is_none_or(|d| d < self.moments.len()),
            "product degree beyond cached moments"
        );
        classical + &self.lambda * p.delta().eval(&self.c) * q.delta().eval(&self.c)
    }

    fn require_n(n: usize, required: usize) -> Result<()> {
        if n < required {
            Err(Error::IndexTooSmall { required, got: n })
        } else {
            Ok(())
        }
    }

    /// `λ ΔQ_n(c) / ‖C_{n-1}‖²`.
    fn kappa(&self, n: usize) -> Rational {
        &self.lambda * self.delta_q_at_c(n) / self.basis.norm(n - 1)
    }

    /// `A₁(x; n)`, `n >= 1`.
    pub fn a1(&self, n: usize) -> RatFunc {
        assert!(n >= 1, "A1 needs n >= 1");
        RatFunc::one() - frak_c(&self.basis, n - 1, &self.c).scale(&self.kappa(n))
    }

    /// `B₁(x; n)`, `n >= 1`.
    pub fn b1(&self, n: usize) -> RatFunc {
        assert!(n >= 1, "B1 needs n >= 1");
        frak_c(&self.basis, n, &self.c).scale(&self.kappa(n))
    }

    /// The expansion scalars read off the definitions of A₁ and B₁.
    pub fn prop2_direct(&self, n: usize) -> Result<Prop2Coeffs> {
        Self::require_n(n, 1)?;
        let k = self.kappa(n);
        let (m, c, b) = (n as i64, &self.c, &self.basis);
        Ok(Prop2Coeffs {
            a11: -&k * b.delta_eval(m - 1, c),
            a10: -&k * b.eval(m - 1, c),
            b11: &k * b.delta_eval(m, c),
            b10: &k * b.eval(m, c),
        })
    }

    /// The same scalars in terms of `a_k` and `b_n`. For `n = 1` the `(n-1)/a_{n-2}`
    /// product is taken as zero.
    pub fn prop2_coeffs(&self, n: usize) -> Result<Prop2Coeffs> {
        Self::require_n(n, 1)?;
        let a = &self.a;
        let bm1 = self.b_n(n) - int(1);
        let a11 = if n == 1 {
            Rational::zero()
        } else {
            -a * int(n as i64 - 1) * &bm1 / self.a_n(n as i64 - 2)?
        };
        Ok(Prop2Coeffs {
            a11,
            a10: -a * &bm1,
            b11: a * int(n as i64) * &bm1,
            b10: a * self.a_n(n as i64 - 1)? * &bm1,
        })
    }

    /// `Q_n` rebuilt from `A₁ C_n + B₁ C_{n-1}` by clearing `(x-c)(x-c-1)`.
    pub fn q_connection(&self, n: usize) -> Result<Connection> {
        Self::require_n(n, 1)?;
        let w = mass_quadratic(&self.c);
        let (a1, b1) = (self.a1(n), self.b1(n));
        let lhs = clear(&a1, &w)? * self.basis.poly(n) + clear(&b1, &w)? * self.basis.poly(n - 1);
        let q = lhs.exact_div(&w)?;
        Ok(Connection { a1, b1, q })
    }

    /// Sigma coefficients from the expansion scalars.
    pub fn sigma(&self, n: usize) -> Result<Sigma> {
        let Prop2Coeffs { a11, a10, b11, b10 } = self.prop2_direct(n)?;
        let (a, c) = (&self.a, &self.c);
        let nr = int(n as i64);
        let s1 = int(2) * (&nr + a - c) + &a11;
        let s0 = a * a + (c - &nr) * (&nr - int(2) * a + c + int(1))
            + (&nr + a - c) * (int(2) * &nr + &a11)
            + &a10
            + &b11;
        let sm1 = &a11 * &nr * a + (&nr - int(1) + a - c) * (int(2) * a * &nr + &b11) + &b10;
        let sm2 = a * (&nr - int(1)) * (&nr * a + &b11);
        Ok(Sigma { s1, s0, sm1, sm2 })
    }

    /// Sigma coefficients in terms of `a_k` and `b_n` only.
    pub fn sigma_explicit(&self, n: usize) -> Result<Sigma> {
        Self::require_n(n, 1)?;
        let (a, c) = (&self.a, &self.c);
        let nr = int(n as i64);
        let b = self.b_n(n);
        let bm1 = &b - int(1);
        // (n-1)/a_{n-2}, zero at n = 1
        let r = if n == 1 {
            Rational::zero()
        } else {
            (&nr - int(1)) / self.a_n(n as i64 - 2)?
        };
        let s1 = int(2) * (&nr + a - c) - a * &r * &bm1;
        let s0 = a * a + (c - &nr) * (&nr - int(2) * a + c + int(1))
            + a * (&nr - int(1)) * &bm1
            + (&nr + a - c) * (int(2) * &nr - a * &r * &bm1);
        let sm1 = a * &nr * (&nr + a - c - int(1)) * (&b + int(1))
            + a * &bm1 * (self.a_n(n as i64 - 1)? - a * &nr * &r);
        let sm2 = a * a * &nr * (&nr - int(1)) * &b;
        Ok(Sigma { s1, s0, sm1, sm2 })
    }

    /// `C_{n+2} + σ₁ C_{n+1} + σ₀ C_n + σ₋₁ C_{n-1} + σ₋₂ C_{n-2}`.
    pub fn five_charlier_poly(&self, n: usize, s: &Sigma) -> Poly {
        let b = &self.basis;
        let m = n as i64;
        b.poly(n + 2).clone()
            + b.poly(n + 1).scale(&s.s1)
            + b.poly(n).scale(&s.s0)
            + b.poly_i(m - 1).scale(&s.sm1)
            + b.poly_i(m - 2).scale(&s.sm2)
    }

    /// `Q_n(x0)` through the terminating hypergeometric sum.
    pub fn hypergeometric_eval(&self, n: usize, x0: &Rational, form: HyperForm) -> Result<Rational> {
        Self::require_n(n, 1)?;
        let a = &self.a;
        let a1 = self.a1(n).eval(x0)?;
        let b1 = self.b1(n).eval(x0)?;
        let nr = int(n as i64);
        let z = -a.recip();
        // t_k = (-n)_k (-x)_k z^k / k!
        let terms: Vec<Rational> = (0..=n)
            .map(|k| {
                pochhammer(&-&nr, k) * pochhammer(&-x0, k) * pow(&z, k)
                    / Rational::from_integer(factorial(k))
            })
            .collect();
        let phi = || -> Result<Rational> {
            if b1.is_zero() {
                return Err(Error::PoleAtEvaluation(format!(
                    "B1 vanishes at x = {x0}, so phi is undefined"
                )));
            }
            Ok(&nr * (int(1) - a * &a1 / &b1))
        };
        match form {
            HyperForm::PreNormalized => {
                let s = terms.iter().enumerate().fold(Rational::zero(), |acc, (k, t)| {
                    let bracket = &a1 - (&nr - int(k as i64)) * &b1 / (a * &nr);
                    acc + bracket * t
                });
                Ok(pow(&-a, n) * s)
            }
            HyperForm::Phi => {
                let phi = phi()?;
                let s = terms.iter().enumerate().fold(Rational::zero(), |acc, (k, t)| {
                    acc + (int(k as i64) - &phi) * t
                });
                Ok(-pow(&-a, n - 1) * &b1 / &nr * s)
            }
            HyperForm::Strict3F1 => {
                let phi = phi()?;
                let mut s = Rational::zero();
                for (k, t) in terms.iter().enumerate() {
                    let den = pochhammer(&-&phi, k);
                    if den.is_zero() {
                        return Err(Error::PoleAtEvaluation(format!(
                            "(-phi)_{k} vanishes at x = {x0}"
                        )));
                    }
                    s += t * pochhammer(&(int(1) - &phi), k) / den;
                }
                Ok(pow(&-a, n - 1) * (&b1 - a * &a1) * s)
            }
        }
    }

    pub fn sobolev_poly(&self, n: usize) -> SobolevPoly {
        let a_seq = (0..=n as i64).map(|k| self.a_n(k).ok()).collect();
        SobolevPoly {
            params: self.params(n),
            poly: self.q(n).clone(),
            norm_sq: self.q_norm(n),
            b_n: self.b_n(n),
            a_seq,
        }
    }
}

/// Numerator of `r` after multiplying by `w`, which `r.den()` must divide.
pub fn clear(r: &RatFunc, w: &Poly) -> Result<Poly> {
    Ok(r.num() * &w.exact_div(r.den())?)
}

/// `Q_n^λ` with its norm and derived scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevPoly {
    pub params: Params,
    pub poly: Poly,
    pub norm_sq: Rational,
    pub b_n: Rational,
    /// `a_0..=a_n`, `None` where `C_k(c) = 0`
    pub a_seq: Vec<Option<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct SobolevPolyRecord {
    n: usize,
    #[serde(with = "serde_rational")]
    a: Rational,
    #[serde(with = "serde_rational")]
    c: Rational,
    #[serde(with = "serde_rational")]
    lambda: Rational,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
    #[serde(with = "serde_rational")]
    norm_sq: Rational,
    #[serde(with = "serde_rational")]
    b_n: Rational,
}

impl Serialize for SobolevPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SobolevPolyRecord {
            n: self.params.n,
            a: self.params.a.clone(),
            c: self.params.c.clone(),
            lambda: self.params.lambda.clone(),
            coeffs: self.poly.coeffs().to_vec(),
            norm_sq: self.norm_sq.clone(),
            b_n: self.b_n.clone(),
        }
        .serialize(s)
    }
}

pub fn q_poly_kernel(params: &Params) -> Result<SobolevPoly> {
    Ok(Family::from_params(params)?.sobolev_poly(params.n))
}

pub fn q_poly_connection(params: &Params) -> Result<Connection> {
    Family::from_params(params)?.q_connection(params.n)
}

pub fn an_bn(params: &Params) -> Result<(Rational, Rational)> {
    let f = Family::from_params(params)?;
    Ok((f.a_n(params.n as i64)?, f.b_n(params.n)))
}

pub fn prop2_coeffs(params: &Params) -> Result<Prop2Coeffs> {
    Family::from_params(params)?.prop2_coeffs(params.n)
}

pub fn five_charlier_expansion(params: &Params) -> Result<Sigma> {
    Family::from_params(params)?.sigma(params.n)
}

pub fn hypergeometric_eval(params: &Params, x0: &Rational) -> Result<Rational> {
    Family::from_params(params)?.hypergeometric_eval(params.n, x0, HyperForm::PreNormalized)
}

pub fn q_norm(params: &Params) -> Result<Rational> {
    Ok(Family::from_params(params)?.q_norm(params.n))
}

impl Family {
    /// Whether every construction route and norm formula agrees at degree `n`.
    pub fn constructions_agree(&self, n: usize) -> Result<bool> {
        self.constructions_check(n).map(|m| m.is_none())
    }

    /// `None` when all routes agree, else the name of the first one that does not.
    pub fn constructions_check(&self, n: usize) -> Result<Option<&'static str>> {
        let q = self.q(n);
        if q.leading().is_none_or(|l| !l.is_one()) || q.degree() != Some(n) {
            return Ok(Some("monic degree n"));
        }
        if n >= 1 {
            if &self.q_connection(n)?.q != q {
                return Ok(Some("connection formula"));
            }
            let w = mass_quadratic(&self.c);
            if self.five_charlier_poly(n, &self.sigma(n)?) != &w * q {
                return Ok(Some("five Charlier expansion"));
            }
            if self.sigma(n)? != self.sigma_explicit(n)? {
                return Ok(Some("sigma explicit form"));
            }
            if self.prop2_direct(n)? != self.prop2_coeffs(n)? {
                return Ok(Some("expansion scalars"));
            }
            if q.delta().eval(&self.c) != self.delta_q_at_c(n) {
                return Ok(Some("difference at c"));
            }
            if (q - self.basis.poly(n)).degree().is_some_and(|d| d >= n) {
                return Ok(Some("perturbation degree"));
            }
        }
        let norm = self.q_norm(n);
        if norm != self.q_norm_gamma(n) || norm != self.inner(q, q) {
            return Ok(Some("norm"));
        }
        Ok(None)
    }
}
