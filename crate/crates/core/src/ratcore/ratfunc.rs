//! Reduced quotients of rational polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`. Zero is `0 / 1`.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if !den.is_monic() {
            let inv = den.leading().expect("nonzero denominator").recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    /// Makes `den` monic; the caller guarantees coprimality.
    fn normalize(mut num: Poly, mut den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if !den.is_monic() {
            let inv = den.leading().expect("nonzero denominator").recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    /// The identity function `x`.
    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluation(format!("x = {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// `f(x + h)`. Shifting preserves coprimality and monicity, so no reduction is needed.
    pub fn shift(&self, h: &Rational) -> Self {
        Self {
            num: self.num.shift(h),
            den: self.den.shift(h),
        }
    }

    /// Forward difference by shift-and-subtract.
    pub fn delta(&self) -> Self {
        &self.shift(&Rational::one()) - self
    }

    /// Forward difference of `f/g` by the quotient rule
    /// `(g Δf - f Δg) / (g (g + Δg))`.
    pub fn delta_quotient_rule(&self) -> Self {
        let (f, g) = (&self.num, &self.den);
        let (df, dg) = (f.delta(), g.delta());
        Self::reduce(g * &df - f * &dg, g * &(g + &dg))
    }

    /// Backward difference `f(x) - f(x-1)`.
    pub fn nabla(&self) -> Self {
        self - &self.shift(&-Rational::one())
    }

    /// Multiply by a polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::reduce(&self.num * p, self.den.clone())
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

fn add(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        return RatFunc::reduce(&a.num + &b.num, a.den.clone());
    }
    // only factors of gcd(den_a, den_b) can cancel
    let g = Poly::gcd(&a.den, &b.den);
    if g.is_constant() {
        return RatFunc::normalize(&a.num * &b.den + &b.num * &a.den, &a.den * &b.den);
    }
    let (ar, br) = (a.den.div_rem(&g).0, b.den.div_rem(&g).0);
    let num = &a.num * &br + &b.num * &ar;
    if num.is_zero() {
        return RatFunc::zero();
    }
    let h = Poly::gcd(&num, &g);
    let (num, g) = if h.is_constant() {
        (num, g)
    } else {
        (num.div_rem(&h).0, g.div_rem(&h).0)
    };
    RatFunc::normalize(num, ar * br * g)
}

fn mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() || b.is_zero() {
        return RatFunc::zero();
    }
    // cross-cancel first to keep the products small
    let g1 = Poly::gcd(&a.num, &b.den);
    let g2 = Poly::gcd(&b.num, &a.den);
    let (an, bd) = (a.num.div_rem(&g1).0, b.den.div_rem(&g1).0);
    let (bn, ad) = (b.num.div_rem(&g2).0, a.den.div_rem(&g2).0);
    RatFunc::normalize(an * bn, ad * bd)
}

fn div(a: &RatFunc, b: &RatFunc) -> RatFunc {
    let inv = b.recip().expect("division by the zero rational function");
    mul(a, &inv)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl $trait<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                $f(self, rhs)
            }
        }
        impl $trait<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                $f(&self, &rhs)
            }
        }
        impl $trait<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                $f(&self, rhs)
            }
        }
        impl $trait<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, |a: &RatFunc, b: &RatFunc| add(a, &-b));
forward_binop!(Mul, mul, mul);
forward_binop!(Div, div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcore::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn reduce_examples() {
        let f = RatFunc::new(p(&[2, 2]), p(&[1, 1])).unwrap();
        assert_eq!(f.num(), &p(&[2]));
        assert_eq!(f.den(), &Poly::one());

        // (x^2 - 1) / (2x - 2) = (x + 1) / 2
        let g = RatFunc::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert_eq!(g.num(), &Poly::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(g.den(), &Poly::one());
        for x in [int(3), rat(-2, 7), int(11)] {
            let direct = (&x * &x - int(1)) / (int(2) * &x - int(2));
            assert_eq!(g.eval(&x).unwrap(), direct);
        }

        let z = RatFunc::new(Poly::zero(), p(&[3, 1])).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.den(), &Poly::one());

        assert_eq!(
            RatFunc::new(p(&[1]), Poly::zero()).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn denominators_are_monic() {
        let f = RatFunc::new(p(&[1, 1]), p(&[6, -3, 0, 3])).unwrap();
        assert!(f.den().is_monic());
    }

    #[test]
    fn pole_is_reported() {
        let f = RatFunc::new(p(&[1]), p(&[-2, 1])).unwrap();
        assert!(matches!(f.eval(&int(2)), Err(Error::PoleAtEvaluation(_))));
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn quotient_rule_matches_shift(f in arb_poly(5), g in arb_poly(4)) {
            prop_assume!(!g.is_zero());
            prop_assume!(!g.shift(&int(1)).is_zero());
            let r = RatFunc::new(f, g).unwrap();
            prop_assert_eq!(r.delta(), r.delta_quotient_rule());
        }

        #[test]
        fn field_ops_roundtrip(f in arb_poly(4), g in arb_poly(3), h in arb_poly(3)) {
            prop_assume!(!g.is_zero() && !h.is_zero());
            let a = RatFunc::new(f, g.clone()).unwrap();
            let b = RatFunc::new(h, g).unwrap();
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a);
            }
        }
    }
}
