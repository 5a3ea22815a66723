//! Zeros of `Q_n^λ`, the limit polynomials `G_n`, and the mass threshold `λ₀`.

mod roots;

pub use roots::{
    precision_bits, rational_f64, roots, roots_with_bits, Fx, IntPoly, RootSet,
    DEFAULT_PRECISION_BITS,
};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::charlier::CharlierBasis;
use crate::error::{Error, Result};
use crate::ladder::IdentityReport;
use crate::ratcore::rational::{serde_rational, serde_rational_opt};
use crate::ratcore::{int, parse_rational, Poly, Rational};
use crate::sobolev::{Family, Params};

pub const DEFAULT_TOL: f64 = 1e-12;
/// Relative slack for strict inequalities between float roots.
pub const INTERLACE_SLACK: f64 = 1e-12;
/// Absolute slack for monotonicity in `λ`.
pub const MONOTONE_SLACK: f64 = 1e-10;

/// Everything about degree `n` that does not depend on `λ`.
#[derive(Clone, Debug)]
pub struct Pencil {
    n: usize,
    a: Rational,
    c: Rational,
    cn: Poly,
    /// `K_{n-1}^{(0,1)}(x, c)`
    kernel: Poly,
    k11: Rational,
    delta_cn: Rational,
}

impl Pencil {
    pub fn new(n: usize, a: &Rational, c: &Rational) -> Result<Self> {
        Params::new(n, a.clone(), c.clone(), Rational::zero()).require_algebra()?;
        let b = CharlierBasis::new(a, n)?;
        let kernel = b.kernel_poly_x(n as i64 - 1, 1, c);
        let k11 = b.k11_table(c)[n].clone();
        Ok(Self {
            n,
            a: a.clone(),
            c: c.clone(),
            cn: b.poly(n).clone(),
            kernel,
            k11,
            delta_cn: b.delta_eval(n as i64, c),
        })
    }

    /// Same as `new` but requires `c < -1`.
    pub fn for_zeros(n: usize, a: &Rational, c: &Rational) -> Result<Self> {
        Params::new(n, a.clone(), c.clone(), Rational::zero()).require_zeros()?;
        Self::new(n, a, c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn charlier(&self) -> &Poly {
        &self.cn
    }

    pub fn kernel(&self) -> &Poly {
        &self.kernel
    }

    /// `K_{n-1}^{(1,1)}(c, c)`.
    pub fn k11(&self) -> &Rational {
        &self.k11
    }

    pub fn sobolev(&self, lambda: &Rational) -> Poly {
        let coef = lambda * &self.delta_cn / (int(1) + lambda * &self.k11);
        &self.cn - self.kernel.scale(&coef)
    }

    /// `G_n = C_n - ΔC_n(c) / K_{n-1}^{(1,1)}(c, c) · K_{n-1}^{(0,1)}(x, c)`.
    pub fn limit(&self) -> Result<Poly> {
        if self.k11.is_zero() {
            return Err(Error::DivisionByZero {
                what: "K_{n-1}^{(1,1)}(c, c)",
                index: self.n as i64 - 1,
            });
        }
        Ok(&self.cn - self.kernel.scale(&(&self.delta_cn / &self.k11)))
    }

    pub fn lambda0(&self) -> Result<Rational> {
        let c0 = self.cn.eval(&Rational::zero());
        if c0.is_zero() {
            return Err(Error::DivisionByZero {
                what: "C_n(0)",
                index: self.n as i64,
            });
        }
        let inv = &self.delta_cn * self.kernel.eval(&Rational::zero()) / c0 - &self.k11;
        if inv.is_zero() {
            return Err(Error::DivisionByZero {
                what: "lambda0 denominator",
                index: self.n as i64,
            });
        }
        let l0 = inv.recip();
        if !l0.is_positive() {
            return Err(Error::NonPositiveLambda0(l0.to_string()));
        }
        Ok(l0)
    }
}

pub fn limit_poly(n: usize, a: &Rational, c: &Rational) -> Result<Poly> {
    if n == 0 {
        return Err(Error::IndexTooSmall { required: 1, got: 0 });
    }
    Pencil::new(n, a, c)?.limit()
}

/// `(1 + λK^{(1,1)}_{n-1}) Q_n = C_n + λK^{(1,1)}_{n-1} G_n`, cleared.
pub fn limit_rep_report(f: &Family, n: usize) -> Result<IdentityReport> {
    let g = limit_poly(n, f.a(), f.c())?;
    let lk = f.lambda() * f.k11(n as i64 - 1);
    let lhs = f.q(n).scale(&(int(1) + &lk));
    let rhs = f.basis().poly(n) + g.scale(&lk);
    Ok(IdentityReport::new("prop5", f.params(n), lhs - rhs))
}

pub fn lambda0(n: usize, a: &Rational, c: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::IndexTooSmall { required: 1, got: 0 });
    }
    Pencil::for_zeros(n, a, c)?.lambda0()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterlaceReport {
    pub pattern: String,
    pub holds: bool,
    /// Position in the merged chain of the first out-of-order pair.
    pub first_violation: Option<usize>,
}

/// Strictly increasing up to `INTERLACE_SLACK` relative to the local scale.
fn chain_report(pattern: String, chain: &[f64]) -> InterlaceReport {
    let first_violation = chain.windows(2).position(|w| {
        let scale = w[0].abs().max(w[1].abs()).max(1.0);
        w[1] - w[0] <= -INTERLACE_SLACK * scale
    });
    InterlaceReport {
        pattern,
        holds: first_violation.is_none(),
        first_violation,
    }
}

/// Alternation of two sorted lists. Equal lengths mean
/// `inner_1 < outer_1 < inner_2 < … < outer_n`; one fewer inner root means
/// `outer_1 < inner_1 < outer_2 < … < outer_n`.
pub fn interlace_check(inner: &[f64], outer: &[f64]) -> InterlaceReport {
    let mut chain = Vec::with_capacity(inner.len() + outer.len());
    let pattern = if inner.len() == outer.len() {
        for (i, o) in inner.iter().zip(outer) {
            chain.extend([*i, *o]);
        }
        "inner_k < outer_k < inner_{k+1}"
    } else if inner.len() + 1 == outer.len() {
        for (k, o) in outer.iter().enumerate() {
            chain.push(*o);
            if let Some(i) = inner.get(k) {
                chain.push(*i);
            }
        }
        "outer_k < inner_k < outer_{k+1}"
    } else {
        return InterlaceReport {
            pattern: format!("length mismatch {} vs {}", inner.len(), outer.len()),
            holds: false,
            first_violation: Some(0),
        };
    };
    chain_report(pattern.into(), &chain)
}

/// `lower_1 < mid_1 < upper_1 < lower_2 < …`.
pub fn chain_check(lower: &[f64], mid: &[f64], upper: &[f64]) -> InterlaceReport {
    if lower.len() != mid.len() || mid.len() != upper.len() {
        return InterlaceReport {
            pattern: "length mismatch".into(),
            holds: false,
            first_violation: Some(0),
        };
    }
    let chain: Vec<f64> = lower
        .iter()
        .zip(mid)
        .zip(upper)
        .flat_map(|((l, m), u)| [*l, *m, *u])
        .collect();
    chain_report("lower_k < mid_k < upper_k < lower_{k+1}".into(), &chain)
}

fn real_roots_of(p: &Poly, tol: f64, what: &str) -> Result<Vec<f64>> {
    roots(p, tol)?
        .real_roots()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} has nonreal roots")))
}

/// Roots of `C_n` against those of `K_{n-1}^{(0,1)}(·, c)`.
pub fn kernel_alternation(n: usize, a: &Rational, c: &Rational, tol: f64) -> Result<InterlaceReport> {
    let p = Pencil::for_zeros(n, a, c)?;
    let x = real_roots_of(p.charlier(), tol, "C_n")?;
    let k = real_roots_of(p.kernel(), tol, "K_{n-1}^{(0,1)}")?;
    Ok(interlace_check(&k, &x))
}

/// Roots of `G_n` against those of `C_n`.
pub fn limit_interlacing(n: usize, a: &Rational, c: &Rational, tol: f64) -> Result<InterlaceReport> {
    let p = Pencil::for_zeros(n, a, c)?;
    let x = real_roots_of(p.charlier(), tol, "C_n")?;
    let y = real_roots_of(&p.limit()?, tol, "G_n")?;
    Ok(interlace_check(&y, &x))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub lambda_f64: f64,
    pub roots: RootSet,
    /// Real parts in increasing order.
    pub eta: Vec<f64>,
    pub all_real: bool,
    pub eta_min_negative: bool,
    /// `y_k < η_k < x_k` for every `k`.
    pub chain: InterlaceReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational_opt")]
    pub lambda0: Option<Rational>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub rows: Vec<SweepRow>,
    /// Every `η_k` non-increasing along increasing `λ`.
    pub monotone: bool,
    /// `η_1 < 0` exactly for `λ > λ₀`.
    pub crossing_consistent: bool,
}

impl SweepReport {
    pub fn chain_holds(&self) -> bool {
        self.rows.iter().all(|r| r.chain.holds)
    }

    /// CSV with columns `lambda,k,eta_k_re,eta_k_im,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,k,eta_k_re,eta_k_im,residual\n");
        for row in &self.rows {
            for (k, (z, r)) in row.roots.roots.iter().zip(&row.roots.residuals).enumerate() {
                out.push_str(&format!(
                    "{:e},{},{:e},{:e},{:e}\n",
                    row.lambda_f64,
                    k + 1,
                    z.re,
                    z.im,
                    r
                ));
            }
        }
        out
    }
}

/// Roots of `Q_n^λ` for each `λ` (sorted ascending), with the limit and
/// Charlier roots as brackets.
pub fn sweep(n: usize, a: &Rational, c: &Rational, lambdas: &[Rational], tol: f64) -> Result<SweepReport> {
    if n == 0 {
        return Err(Error::IndexTooSmall { required: 1, got: 0 });
    }
    let pencil = Pencil::for_zeros(n, a, c)?;
    let x = real_roots_of(pencil.charlier(), tol, "C_n")?;
    let y = if n >= 2 {
        real_roots_of(&pencil.limit()?, tol, "G_n")?
    } else {
        Vec::new()
    };
    let l0 = pencil.lambda0().ok();

    let mut lams = lambdas.to_vec();
    lams.sort();
    lams.dedup();
    let rows = lams
        .iter()
        .map(|l| sweep_row(&pencil, l, &x, &y, tol))
        .collect::<Result<Vec<_>>>()?;

    let monotone = rows.windows(2).all(|w| {
        w[0].eta
            .iter()
            .zip(&w[1].eta)
            .all(|(e0, e1)| *e1 <= e0 + MONOTONE_SLACK)
    });
    let crossing_consistent = match &l0 {
        Some(l0) => rows
            .iter()
            .filter(|r| &r.lambda != l0)
            .all(|r| r.eta_min_negative == (&r.lambda > l0)),
        None => true,
    };
    Ok(SweepReport {
        n,
        a: a.clone(),
        c: c.clone(),
        lambda0: l0,
        x,
        y,
        rows,
        monotone,
        crossing_consistent,
    })
}

fn sweep_row(p: &Pencil, lambda: &Rational, x: &[f64], y: &[f64], tol: f64) -> Result<SweepRow> {
    if lambda.is_negative() {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    let rs = roots(&p.sobolev(lambda), tol)?;
    let eta: Vec<f64> = rs.roots.iter().map(|z| z.re).collect();
    let all_real = rs.all_real();
    let chain = if !all_real {
        InterlaceReport {
            pattern: "nonreal roots".into(),
            holds: false,
            first_violation: Some(0),
        }
    } else if lambda.is_zero() || y.is_empty() {
        interlace_check(&eta, x)
    } else {
        chain_check(y, &eta, x)
    };
    Ok(SweepRow {
        lambda: lambda.clone(),
        lambda_f64: rational_f64(lambda),
        eta_min_negative: eta.first().is_some_and(|e| *e < 0.0),
        roots: rs,
        eta,
        all_real,
        chain,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeedRow {
    pub lambda: f64,
    /// `λ(η_k - y_k)`
    pub scaled_gap: Vec<f64>,
    pub rel_err: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeedReport {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    /// `-C_n(y_k) / (K_{n-1}^{(1,1)}(c,c) G_n'(y_k))`
    pub limits: Vec<f64>,
    /// `-C_n(y_k) / G_n'(y_k)` without the kernel factor
    pub unscaled_limits: Vec<f64>,
    pub degenerate: Vec<bool>,
    pub rows: Vec<SpeedRow>,
    /// Relative error non-increasing along the grid for every `k`.
    pub monotone: bool,
}

/// `λ(η_k - y_k)` against its large-`λ` limit along `grid`.
///
/// Zeros of `Q_n^λ` solve `C_n + λK^{(1,1)}_{n-1} G_n = 0`, so the
/// effective mass multiplying `G_n` is `λK^{(1,1)}_{n-1}(c,c)`.
pub fn speed_check(n: usize, a: &Rational, c: &Rational, grid: &[Rational], tol: f64) -> Result<SpeedReport> {
    if n < 2 {
        return Err(Error::IndexTooSmall { required: 2, got: n });
    }
    let p = Pencil::for_zeros(n, a, c)?;
    let g = p.limit()?;
    let ry = roots(&g, tol)?;
    let dg = g.derivative();
    let k11 = rational_f64(p.k11());
    let mut unscaled_limits = Vec::with_capacity(n);
    let mut degenerate = Vec::with_capacity(n);
    for k in 0..n {
        let cn = ry.eval_at(p.charlier(), k).re;
        let d = ry.eval_at(&dg, k).re;
        degenerate.push(cn.abs() < tol);
        unscaled_limits.push(-cn / d);
    }
    let limits: Vec<f64> = unscaled_limits.iter().map(|l| l / k11).collect();

    let mut lams = grid.to_vec();
    lams.sort();
    let mut rows = Vec::with_capacity(lams.len());
    for l in &lams {
        let rq = roots(&p.sobolev(l), tol)?;
        let lf = rational_f64(l);
        let scaled_gap: Vec<f64> = (0..n).map(|k| lf * rq.diff(k, &ry, k).re).collect();
        let rel_err = scaled_gap
            .iter()
            .zip(&limits)
            .map(|(s, l)| ((s - l) / l).abs())
            .collect();
        rows.push(SpeedRow {
            lambda: lf,
            scaled_gap,
            rel_err,
        });
    }
    let monotone = rows.windows(2).all(|w| {
        w[0].rel_err
            .iter()
            .zip(&w[1].rel_err)
            .all(|(e0, e1)| *e1 <= e0 * (1.0 + 1e-9) + 1e-13)
    });
    Ok(SpeedReport {
        n,
        a: a.clone(),
        c: c.clone(),
        limits,
        unscaled_limits,
        degenerate,
        rows,
        monotone,
    })
}

/// `points` values `10^e`, `e` evenly spaced in `[lo, hi]`, rounded to
/// seven significant digits as exact rationals.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<Rational> {
    let (el, eh) = (lo.log10(), hi.log10());
    (0..points)
        .map(|i| {
            let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            let v = 10f64.powf(el + t * (eh - el));
            parse_rational(&format!("{v:.6e}")).expect("formatted float parses")
        })
        .collect()
}
