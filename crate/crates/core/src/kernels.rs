//! Reproducing kernels of the Charlier family and their partial differences.

use num_traits::{One, Zero};

use crate::charlier::CharlierBasis;
use crate::error::{Error, Result};
use crate::ratcore::{int, Poly, RatFunc, Rational};

fn falling(k: usize, i: usize) -> Rational {
    ((k + 1 - i)..=k).fold(Rational::one(), |acc, m| acc * int(m as i64))
}

impl CharlierBasis {
    /// `Δ^i C_k(x0) = k!/(k-i)! C_{k-i}(x0)`.
    pub fn delta_pow_eval(&self, k: usize, i: usize, x0: &Rational) -> Rational {
        if i > k {
            return Rational::zero();
        }
        falling(k, i) * self.poly(k - i).eval(x0)
    }

    /// `Δ^i C_k` as a polynomial.
    pub fn delta_pow(&self, k: usize, i: usize) -> Poly {
        if i > k {
            return Poly::zero();
        }
        self.poly(k - i).scale(&falling(k, i))
    }

    /// `K_n^{(i,j)}(x0, y0)`; the empty sum `n < 0` is zero.
    pub fn kernel_at(&self, n: i64, i: usize, j: usize, x0: &Rational, y0: &Rational) -> Rational {
        (0..=n.max(-1))
            .map(|k| k as usize)
            .fold(Rational::zero(), |acc, k| {
                acc + self.delta_pow_eval(k, i, x0) * self.delta_pow_eval(k, j, y0) / self.norm(k)
            })
    }

    /// `K_n^{(0,j)}(x, c)` with `x` free.
    pub fn kernel_poly_x(&self, n: i64, j: usize, c: &Rational) -> Poly {
        let mut acc = Poly::zero();
        for k in 0..=n.max(-1) {
            let k = k as usize;
            let w = self.delta_pow_eval(k, j, c) / self.norm(k);
            if !w.is_zero() {
                acc = acc + self.poly(k).scale(&w);
            }
        }
        acc
    }

    /// `K_n^{(1,1)}(c, c)` for `n = -1..=max_n`.
    pub fn k11_table(&self, c: &Rational) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.max_n() + 2);
        let mut acc = Rational::zero();
        out.push(acc.clone());
        for k in 0..=self.max_n() {
            let d = self.delta_eval(k as i64, c);
            acc += &d * &d / self.norm(k);
            out.push(acc.clone());
        }
        out
    }
}

pub fn kernel_at(
    n: usize,
    i: usize,
    j: usize,
    a: &Rational,
    x0: &Rational,
    y0: &Rational,
) -> Result<Rational> {
    Ok(CharlierBasis::new(a, n)?.kernel_at(n as i64, i, j, x0, y0))
}

pub fn kernel_poly_x(n: usize, j: usize, a: &Rational, c: &Rational) -> Result<Poly> {
    Ok(CharlierBasis::new(a, n)?.kernel_poly_x(n as i64, j, c))
}

/// `(x - c)(x - c - 1)`.
pub fn mass_quadratic(c: &Rational) -> Poly {
    Poly::linear_root(c) * Poly::linear_root(&(c + int(1)))
}

/// `(C_m(c) + (x - c) ΔC_m(c)) / ((x - c)(x - c - 1))`.
pub fn frak_c(b: &CharlierBasis, m: usize, c: &Rational) -> RatFunc {
    let num = Poly::constant(b.eval(m as i64, c))
        + Poly::linear_root(c).scale(&b.delta_eval(m as i64, c));
    RatFunc::new(num, mass_quadratic(c)).expect("nonzero quadratic")
}

/// Two-term representation of `K_{n-1}^{(0,1)}(x, c)` over `C_n` and `C_{n-1}`.
#[derive(Clone, Debug)]
pub struct KernelClosedForm {
    pub n: usize,
    /// `𝔠_{n-1}(x, c)`
    pub frak_prev: RatFunc,
    /// `𝔠_n(x, c)`
    pub frak: RatFunc,
    /// coefficient of `C_n`
    pub coef_cn: RatFunc,
    /// coefficient of `C_{n-1}`
    pub coef_cnm1: RatFunc,
}

impl KernelClosedForm {
    pub fn new(b: &CharlierBasis, n: usize, c: &Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexTooSmall {
                required: 1,
                got: 0,
            });
        }
        let frak_prev = frak_c(b, n - 1, c);
        let frak = frak_c(b, n, c);
        let inv = b.norm(n - 1).recip();
        Ok(Self {
            n,
            coef_cn: frak_prev.scale(&inv),
            coef_cnm1: -frak.scale(&inv),
            frak_prev,
            frak,
        })
    }

    pub fn assemble(&self, b: &CharlierBasis) -> RatFunc {
        self.coef_cn.mul_poly(b.poly(self.n)) + self.coef_cnm1.mul_poly(b.poly(self.n - 1))
    }
}

pub fn kernel_closed_form(n: usize, a: &Rational, c: &Rational) -> Result<KernelClosedForm> {
    KernelClosedForm::new(&CharlierBasis::new(a, n)?, n, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::rat;
    use num_traits::Signed;

    #[test]
    fn point_values() {
        let a = int(2);
        assert_eq!(kernel_at(0, 0, 0, &a, &int(3), &int(-1)).unwrap(), int(1));
        assert_eq!(kernel_at(0, 1, 1, &a, &int(3), &int(-1)).unwrap(), int(0));
        for (x0, y0) in [(int(0), int(0)), (rat(3, 4), int(-5))] {
            assert_eq!(kernel_at(1, 1, 1, &a, &x0, &y0).unwrap(), rat(1, 2));
        }
    }

    #[test]
    fn poly_in_x() {
        assert!(kernel_poly_x(0, 1, &int(2), &int(-2)).unwrap().is_zero());
        assert_eq!(
            kernel_poly_x(1, 1, &int(2), &int(-2)).unwrap(),
            Poly::new(vec![int(-1), rat(1, 2)])
        );
        let (a, c) = (rat(5, 3), int(-4));
        let b = CharlierBasis::new(&a, 8).unwrap();
        for n in 1..=8usize {
            let k = b.kernel_poly_x(n as i64, 1, &c);
            assert_eq!(k.degree(), Some(n));
            assert_eq!(k.leading().unwrap(), &(b.delta_eval(n as i64, &c) / b.norm(n)));
        }
    }

    #[test]
    fn telescoping_and_positivity() {
        for (a, c) in [(int(2), int(-5)), (rat(1, 3), int(-2)), (int(7), int(3))] {
            let b = CharlierBasis::new(&a, 15).unwrap();
            let t = b.k11_table(&c);
            for n in 0..=15i64 {
                let d = b.delta_eval(n, &c);
                let step = &d * &d / b.norm(n as usize);
                let here = b.kernel_at(n, 1, 1, &c, &c);
                assert_eq!(here, t[(n + 1) as usize]);
                assert_eq!(step, &here - b.kernel_at(n - 1, 1, 1, &c, &c));
                if n >= 1 {
                    assert!(here.is_positive());
                }
            }
        }
    }

    #[test]
    fn christoffel_darboux() {
        let a = rat(9, 4);
        let b = CharlierBasis::new(&a, 7).unwrap();
        let n = 6usize;
        let pts = (0..20).map(|i| (rat(i - 7, 3), rat(2 * i + 1, 5)));
        for (x0, y0) in pts {
            let lhs = (&x0 - &y0) * b.kernel_at(n as i64, 0, 0, &x0, &y0);
            let rhs = (b.eval(n as i64 + 1, &x0) * b.eval(n as i64, &y0)
                - b.eval(n as i64 + 1, &y0) * b.eval(n as i64, &x0))
                / b.norm(n);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn closed_form_matches_sum() {
        let (a, c) = (int(2), int(-5));
        let b = CharlierBasis::new(&a, 8).unwrap();
        for n in 1..=8 {
            let cf = KernelClosedForm::new(&b, n, &c).unwrap();
            let k = RatFunc::from_poly(b.kernel_poly_x(n as i64 - 1, 1, &c));
            assert_eq!(cf.assemble(&b), k, "n={n}");
        }
        let f0 = frak_c(&b, 0, &c);
        assert_eq!(f0, RatFunc::new(Poly::one(), mass_quadratic(&c)).unwrap());

        let (a, c) = (int(1), int(-2));
        let b = CharlierBasis::new(&a, 1).unwrap();
        let cf = KernelClosedForm::new(&b, 1, &c).unwrap();
        let direct = b.kernel_at(0, 0, 1, &int(0), &c);
        assert_eq!(cf.assemble(&b).eval(&int(0)).unwrap(), direct);
    }
}
