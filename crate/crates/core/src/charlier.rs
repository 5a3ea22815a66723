//! Monic Charlier polynomials and the Poisson inner product.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratcore::{factorial, int, pochhammer, pow, Poly, Rational};

pub(crate) fn check_a(a: &Rational) -> Result<()> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("a must be positive, got {a}")))
    }
}

/// `C_0..=C_N` and their squared norms for one value of `a`.
#[derive(Clone, Debug)]
pub struct CharlierBasis {
    a: Rational,
    polys: Vec<Poly>,
    norms: Vec<Rational>,
}

impl CharlierBasis {
    pub fn new(a: &Rational, max_n: usize) -> Result<Self> {
        check_a(a)?;
        let mut polys = Vec::with_capacity(max_n + 1);
        polys.push(Poly::one());
        if max_n >= 1 {
            polys.push(Poly::linear_root(a));
        }
        for n in 1..max_n {
            let nr = int(n as i64);
            let beta = &nr + a;
            let gamma = &nr * a;
            let next = &polys[n] * Poly::linear_root(&beta) - polys[n - 1].scale(&gamma);
            polys.push(next);
        }
        let norms = (0..=max_n).map(|n| charlier_norm(n, a)).collect();
        Ok(Self {
            a: a.clone(),
            polys,
            norms,
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn max_n(&self) -> usize {
        self.polys.len() - 1
    }

    /// `C_n`. Panics past the cached range.
    pub fn poly(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    /// `C_n` with `C_{-1} = 0`.
    pub fn poly_i(&self, n: i64) -> Poly {
        if n < 0 {
            Poly::zero()
        } else {
            self.polys[n as usize].clone()
        }
    }

    pub fn norm(&self, n: usize) -> &Rational {
        &self.norms[n]
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// `C_n(x0)`, zero for negative `n`.
    pub fn eval(&self, n: i64, x0: &Rational) -> Rational {
        if n < 0 {
            Rational::zero()
        } else {
            self.polys[n as usize].eval(x0)
        }
    }

    /// `ΔC_n(x0) = n C_{n-1}(x0)`.
    pub fn delta_eval(&self, n: i64, x0: &Rational) -> Rational {
        if n <= 0 {
            Rational::zero()
        } else {
            int(n) * self.eval(n - 1, x0)
        }
    }
}

pub fn charlier_poly(n: usize, a: &Rational) -> Result<Poly> {
    Ok(CharlierBasis::new(a, n)?.polys.pop().expect("nonempty basis"))
}

pub fn charlier_norm(n: usize, a: &Rational) -> Rational {
    Rational::from_integer(factorial(n)) * pow(a, n)
}

/// Rows `0..=k_max` of the Stirling triangle of the second kind; `s[k][j] = S(k, j)`.
pub fn stirling2_triangle(k_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::one()]];
    for k in 1..=k_max {
        let prev = &s[k - 1];
        let mut row = vec![BigInt::zero(); k + 1];
        for j in 1..=k {
            let left = &prev[j - 1];
            let up = prev.get(j).map(|v| v * BigInt::from(j)).unwrap_or_default();
            row[j] = left + up;
        }
        s.push(row);
    }
    s
}

/// Poisson moments `m_0..=m_{k_max}` as Touchard polynomials in `a`.
pub fn poisson_moments(k_max: usize, a: &Rational) -> Vec<Rational> {
    stirling2_triangle(k_max)
        .iter()
        .map(|row| touchard(row, a))
        .collect()
}

fn touchard(row: &[BigInt], a: &Rational) -> Rational {
    row.iter()
        .rev()
        .fold(Rational::zero(), |acc, s| acc * a + Rational::from_integer(s.clone()))
}

pub fn poisson_moment(k: usize, a: &Rational) -> Rational {
    touchard(&stirling2_triangle(k)[k], a)
}

/// `∫ p q dψ` for the Poisson measure, exactly.
pub fn classical_inner(p: &Poly, q: &Poly, a: &Rational) -> Rational {
    let pq = p * q;
    let Some(d) = pq.degree() else {
        return Rational::zero();
    };
    let tri = stirling2_triangle(d);
    pq.coeffs()
        .iter()
        .zip(&tri)
        .map(|(c, row)| c * touchard(row, a))
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// `C_n(x0)` through the terminating `2F0(-n, -x; ; -1/a)` sum.
pub fn charlier_2f0(n: usize, a: &Rational, x0: &Rational) -> Rational {
    let z = -a.recip();
    let mut sum = Rational::zero();
    let mut zk = Rational::one();
    for k in 0..=n {
        let term = pochhammer(&-int(n as i64), k) * pochhammer(&-x0, k) * &zk
            / Rational::from_integer(factorial(k));
        sum += term;
        zk *= &z;
    }
    pow(&-a, n) * sum
}
