//! Polynomial roots: balanced companion eigenvalues, then Newton in fixed point.
//!
//! Polishing runs on the integer-cleared polynomial with complex values
//! stored as `BigInt` mantissas over `2^bits`.

use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratcore::{Poly, Rational};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
const MIN_BITS: u32 = 80;
const MAX_BITS: u32 = 960;
const MAX_NEWTON: usize = 200;

/// `SCK_PRECISION_BITS`, clamped to `[80, 960]`.
pub fn precision_bits() -> u32 {
    std::env::var("SCK_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .unwrap_or(DEFAULT_PRECISION_BITS)
        .clamp(MIN_BITS, MAX_BITS)
}

/// Complex fixed-point value `(re + i im) / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

impl Fx {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn from_c64(z: Complex64, bits: u32) -> Self {
        Self {
            re: f64_to_fixed(z.re, bits),
            im: f64_to_fixed(z.im, bits),
        }
    }

    fn mul(&self, o: &Fx, bits: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn conj(&self) -> Fx {
        Fx {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Max-norm of the mantissas.
    fn mag(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }

    pub fn to_c64(&self, bits: u32) -> Complex64 {
        Complex64::new(fixed_to_f64(&self.re, bits), fixed_to_f64(&self.im, bits))
    }
}

fn f64_to_fixed(v: f64, bits: u32) -> BigInt {
    BigInt::from_f64(v * 2f64.powi(60)).unwrap_or_default() << (bits - 60)
}

pub(crate) fn fixed_to_f64(v: &BigInt, bits: u32) -> f64 {
    ratio_f64(v, &(BigInt::one() << bits))
}

/// `num / den` as a double without intermediate overflow.
pub(crate) fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sn = (num.bits() as i64 - 62).max(0);
    let sd = (den.bits() as i64 - 62).max(0);
    let n = (num >> sn as usize).to_f64().unwrap_or(f64::NAN);
    let d = (den >> sd as usize).to_f64().unwrap_or(f64::NAN);
    ldexp(n / d, sn - sd)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e != 0 && x != 0.0 && x.is_finite() {
        let step = e.clamp(-1000, 1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    x
}

/// `p` scaled by the lcm of its denominators.
#[derive(Clone, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_poly(p: &Poly) -> Self {
        let l = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        Self { coeffs }
    }

    /// `p(z)` and `p'(z)`.
    fn eval_d(&self, z: &Fx, bits: u32) -> (Fx, Fx) {
        let mut p = Fx::zero();
        let mut dp = Fx::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp.mul(z, bits).add(&p);
            p = p.mul(z, bits);
            p.re += c << bits;
        }
        (p, dp)
    }

    /// `Σ |c_k| |z|^k` in the same scale.
    fn abs_scale(&self, z: &Fx, bits: u32) -> BigInt {
        let r = z.re.abs() + z.im.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| ((acc * &r) >> bits) + (c.abs() << bits))
    }

    pub fn eval(&self, z: &Fx, bits: u32) -> Fx {
        self.eval_d(z, bits).0
    }
}

/// Roots of a real polynomial, sorted by `(re, im)`.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub poly_degree: usize,
    precise: Vec<Fx>,
    bits: u32,
}

#[derive(Serialize)]
struct RootRecord {
    re: f64,
    im: f64,
    residual: f64,
}

impl Serialize for RootSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let recs: Vec<RootRecord> = self
            .roots
            .iter()
            .zip(&self.residuals)
            .map(|(z, r)| RootRecord {
                re: z.re,
                im: z.im,
                residual: *r,
            })
            .collect();
        let mut st = s.serialize_struct("RootSet", 2)?;
        st.serialize_field("poly_degree", &self.poly_degree)?;
        st.serialize_field("roots", &recs)?;
        st.end()
    }
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn precise(&self, i: usize) -> &Fx {
        &self.precise[i]
    }

    pub fn all_real(&self) -> bool {
        self.precise.iter().all(|z| z.im.is_zero())
    }

    /// Real parts when every root is real.
    pub fn real_roots(&self) -> Option<Vec<f64>> {
        self.all_real().then(|| self.roots.iter().map(|z| z.re).collect())
    }

    /// `self[i] - other[j]` computed before rounding.
    pub fn diff(&self, i: usize, other: &RootSet, j: usize) -> Complex64 {
        let bits = self.bits.max(other.bits);
        let a = rescale(&self.precise[i], self.bits, bits);
        let b = rescale(&other.precise[j], other.bits, bits);
        a.sub(&b).to_c64(bits)
    }

    /// `p` at root `i`, in the working precision.
    pub fn eval_at(&self, p: &Poly, i: usize) -> Complex64 {
        let ip = IntPoly::from_poly(p);
        let l = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let v = ip.eval(&self.precise[i], self.bits);
        let den = l << self.bits;
        Complex64::new(ratio_f64(&v.re, &den), ratio_f64(&v.im, &den))
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn rescale(z: &Fx, from: u32, to: u32) -> Fx {
    Fx {
        re: &z.re << (to - from),
        im: &z.im << (to - from),
    }
}

fn companion_eigenvalues(p: &Poly) -> Result<Vec<Complex64>> {
    let d = p.degree().unwrap_or(0);
    let lead = p.leading().expect("nonzero").clone();
    let monic: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| (c / &lead).to_f64().unwrap_or(f64::NAN))
        .collect();
    if monic.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure {
            worst_residual: f64::INFINITY,
        });
    }
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -monic[i];
    }
    nalgebra::linalg::balancing::balance_parlett_reinsch(&mut m);
    Ok(m.complex_eigenvalues().iter().copied().collect())
}

fn newton(ip: &IntPoly, z0: Fx, bits: u32) -> Option<Fx> {
    let mut z = z0;
    let unit = BigInt::one() << bits;
    let mut settled = 0;
    for _ in 0..MAX_NEWTON {
        let (p, dp) = ip.eval_d(&z, bits);
        if p.re.is_zero() && p.im.is_zero() {
            return Some(z);
        }
        let den = &dp.re * &dp.re + &dp.im * &dp.im;
        if den.is_zero() {
            return None;
        }
        let num = p.mul(&dp.conj(), 0);
        let step = Fx {
            re: (num.re << bits).div_floor(&den),
            im: (num.im << bits).div_floor(&den),
        };
        z = z.sub(&step);
        let scale = z.mag().max(unit.clone());
        // |step| below 2^-(bits - 16) relative
        if step.mag() << (bits - 16) <= scale {
            settled += 1;
            if settled >= 2 {
                return Some(z);
            }
        }
    }
    None
}

/// `|p(z)| / Σ|c_k||z|^k`.
fn residual(ip: &IntPoly, z: &Fx, bits: u32) -> f64 {
    let v = ip.eval(z, bits);
    let mag = v.re.abs() + v.im.abs();
    let scale = ip.abs_scale(z, bits);
    if scale.is_zero() {
        return 0.0;
    }
    ratio_f64(&mag, &scale)
}

fn snap_real(z: &mut Fx, bits: u32) {
    let unit = BigInt::one() << bits;
    let scale = z.re.abs().max(unit);
    if z.im.abs() << (bits / 2) <= scale {
        z.im = BigInt::zero();
    }
}

/// All roots of `p` with residuals at most `tol`.
pub fn roots(p: &Poly, tol: f64) -> Result<RootSet> {
    roots_with_bits(p, tol, precision_bits())
}

pub fn roots_with_bits(p: &Poly, tol: f64, bits: u32) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::InvalidParameter("roots of the zero polynomial".into()));
    }
    let bits = bits.clamp(MIN_BITS, MAX_BITS);
    let d = p.degree().unwrap_or(0);
    let ip = IntPoly::from_poly(p);
    let init = if d == 0 {
        Vec::new()
    } else {
        companion_eigenvalues(p)?
    };

    let mut precise = Vec::with_capacity(d);
    let mut worst = 0f64;
    for z0 in init {
        let start = Fx::from_c64(z0, bits);
        let mut z = newton(&ip, start.clone(), bits).ok_or(Error::ConvergenceFailure {
            worst_residual: residual(&ip, &start, bits),
        })?;
        snap_real(&mut z, bits);
        precise.push(z);
    }
    enforce_conjugates(&mut precise)?;
    precise.sort_by(|x, y| x.re.cmp(&y.re).then(x.im.cmp(&y.im)));

    for w in precise.windows(2) {
        let gap = w[1].sub(&w[0]).mag();
        let scale = w[0].mag().max(BigInt::one() << bits);
        if gap << (bits / 2) <= scale {
            return Err(Error::ConvergenceFailure {
                worst_residual: f64::NAN,
            });
        }
    }

    let residuals: Vec<f64> = precise.iter().map(|z| residual(&ip, z, bits)).collect();
    for r in &residuals {
        worst = worst.max(*r);
    }
    if worst > tol {
        return Err(Error::ConvergenceFailure {
            worst_residual: worst,
        });
    }
    Ok(RootSet {
        roots: precise.iter().map(|z| z.to_c64(bits)).collect(),
        residuals,
        poly_degree: d,
        precise,
        bits,
    })
}

/// Replace each lower-half root by the conjugate of its upper-half partner.
fn enforce_conjugates(zs: &mut [Fx]) -> Result<()> {
    let upper: Vec<usize> = (0..zs.len())
        .filter(|&i| zs[i].im.sign() == Sign::Plus)
        .collect();
    let mut lower: Vec<usize> = (0..zs.len())
        .filter(|&i| zs[i].im.sign() == Sign::Minus)
        .collect();
    if upper.len() != lower.len() {
        return Err(Error::ConvergenceFailure {
            worst_residual: f64::NAN,
        });
    }
    for &u in &upper {
        let target = zs[u].conj();
        let (pos, _) = lower
            .iter()
            .enumerate()
            .min_by_key(|(_, &l)| zs[l].sub(&target).mag())
            .expect("nonempty");
        let l = lower.swap_remove(pos);
        zs[l] = target;
    }
    Ok(())
}

/// Float rendering of an exact rational through the same path as roots.
pub fn rational_f64(r: &Rational) -> f64 {
    ratio_f64(r.numer(), r.denom())
}
