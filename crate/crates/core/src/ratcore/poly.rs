//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, to_f64, Rational};
use crate::error::{Error, Result};

/// `coeffs[k]` is the coefficient of `x^k`. Trailing zeros are never stored, so the
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero above the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// `p(x + h)`, by Horner composition with `x + h`.
    pub fn shift(&self, h: &Rational) -> Self {
        if h.is_zero() || self.is_constant() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for c in self.coeffs.iter().rev() {
            // out <- out * (x + h) + c
            for k in (1..n).rev() {
                out[k] = &out[k] * h + &out[k - 1];
            }
            out[0] = &out[0] * h + c;
        }
        Self::new(out)
    }

    /// Forward difference `p(x+1) - p(x)`.
    pub fn delta(&self) -> Self {
        self.shift(&Rational::one()) - self
    }

    /// Backward difference `p(x) - p(x-1)`.
    pub fn nabla(&self) -> Self {
        self - self.shift(&-Rational::one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&t| t >= dd) else {
            return (Poly::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); top - dd + 1];
        for k in (dd..=top).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lc;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &q * dc;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonZeroRemainder)
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    ///
    /// Runs a primitive remainder sequence over the integers, which keeps
    /// coefficient growth far below that of Euclid over the rationals.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        let (mut u, mut v) = (primitive(a), primitive(b));
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let r = prem(&u, &v);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                return Poly::one();
            }
            u = v;
            v = primitive_int(r);
        }
        Poly::new(v.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// Product of the linear factors `x - r` for each rational root.
    pub fn from_roots(roots: &[Rational]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| acc * Poly::linear_root(r))
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc * self)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Poly::new)
    }
}

fn add_coeffs(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    Poly::new(
        (0..n)
            .map(|k| match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect(),
    )
}

fn mul_coeffs(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Poly::zero();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly::new(out)
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Poly = $body;
                f(self, rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_coeffs(&a.coeffs, &b.coeffs));
forward_binop!(Sub, sub, |a, b| add_coeffs(&a.coeffs, &(-b).coeffs));
forward_binop!(Mul, mul, |a, b| mul_coeffs(&a.coeffs, &b.coeffs));

/// Integer coefficients of `p` with content 1.
fn primitive(p: &Poly) -> Vec<BigInt> {
    let l = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive_int(p.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect())
}

fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Pseudo-remainder of `u` by `v`, trailing zeros stripped.
fn prem(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let dv = v.len() - 1;
    let lc = &v[dv];
    let mut r = u.to_vec();
    while r.len() > dv {
        let k = r.len() - 1;
        let t = r[k].clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (j, vc) in v.iter().enumerate() {
            r[k - dv + j] -= &t * vc;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}
