//! Dense univariate polynomials over `Z`, plus the root-bound machinery.

mod rat;
mod rootbound;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::polymodp::PolyModP;

pub use rat::{format_rat, parse_canonical_int, parse_rat, Rat};
pub use rootbound::{
    compute_root_bound, fstar, graeffe, verify_root_bound, RootBoundCert, DEFAULT_MAX_GRAEFFE,
    ROOT_BOUND_DENOMINATOR_BITS,
};

/// Polynomial with arbitrary precision integer coefficients, stored in
/// ascending degree order. The zero polynomial has no coefficients and a
/// nonzero polynomial never has a zero leading coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Exact value at an integer point (Horner).
    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// `v^d * f(u/v)` where `d = deg f`, computed without division.
    pub fn eval_homogeneous(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let Some((lead, rest)) = self.coeffs.split_last() else {
            return BigInt::zero();
        };
        let mut acc = lead.clone();
        let mut vp = BigInt::one();
        for c in rest.iter().rev() {
            vp *= v;
            acc = acc * u + c * &vp;
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn eval_rat(&self, t: &Rat) -> Rat {
        let Some(d) = self.degree() else {
            return Rat::zero();
        };
        let num = self.eval_homogeneous(t.numer(), t.denom());
        Rat::new(num, num_traits::pow(t.denom().clone(), d))
    }

    pub fn derivative(&self) -> PolyZ {
        PolyZ::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigInt::from(j))
                .collect(),
        )
    }

    /// Gcd of the coefficients (always positive).
    pub fn content(&self) -> Result<BigInt, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    /// The polynomial divided by its content, with positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> Result<PolyZ, Error> {
        let mut c = self.content()?;
        if self.leading_coeff().is_some_and(Signed::is_negative) {
            c = -c;
        }
        if c.is_one() {
            return Ok(self.clone());
        }
        Ok(PolyZ {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        })
    }

    pub fn is_primitive(&self) -> bool {
        self.leading_coeff().is_some_and(Signed::is_positive)
            && self.content().is_ok_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> PolyZ {
        PolyZ::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> PolyZ {
        let mut base = self.clone();
        let mut acc = PolyZ::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f(-x)`
    pub fn negate_variable(&self) -> PolyZ {
        PolyZ::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Pseudo-remainder: a multiple of `self mod other` by a power of
    /// `lc(other)`, with integer coefficients.
    fn pseudo_rem(&self, other: &PolyZ) -> PolyZ {
        let db = other.degree().expect("division by zero polynomial");
        let lb = other.leading_coeff().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                r[j + shift] -= &lr * b;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        PolyZ::new(r)
    }

    /// Greatest common divisor over `Q`, returned primitive with positive
    /// leading coefficient. Uses the primitive remainder sequence.
    pub fn gcd(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() {
            return other.primitive_part().unwrap_or_default();
        }
        if other.is_zero() {
            return self.primitive_part().unwrap_or_default();
        }
        let mut a = self.primitive_part().unwrap();
        let mut b = other.primitive_part().unwrap();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() {
                r
            } else {
                r.primitive_part().unwrap()
            };
        }
        a
    }

    /// Exact squarefreeness over `Q`. A squarefree reduction modulo a prime
    /// not dividing the leading coefficient settles the question quickly;
    /// otherwise an exact gcd with the derivative decides.
    pub fn is_squarefree(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d <= 1 {
            return true;
        }
        let lead = self.leading_coeff().unwrap();
        for &p in crate::primality::small_primes(200).iter().skip(3).take(20) {
            if (lead % BigInt::from(p)).is_zero() {
                continue;
            }
            if PolyModP::reduce(self, p).is_squarefree() {
                return true;
            }
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

pub fn content(f: &PolyZ) -> Result<BigInt, Error> {
    f.content()
}

pub fn primitive_part(f: &PolyZ) -> Result<PolyZ, Error> {
    f.primitive_part()
}

pub fn eval_rat(f: &PolyZ, t: &Rat) -> Rat {
    f.eval_rat(t)
}

pub fn derivative(f: &PolyZ) -> PolyZ {
    f.derivative()
}

pub fn is_squarefree(f: &PolyZ) -> bool {
    f.is_squarefree()
}

/// Gcd of all values `f(n)` over the integers, computed from the
/// `deg f + 1` consecutive values `f(0), ..., f(deg f)`.
pub fn fixed_divisor(f: &PolyZ) -> Result<BigInt, Error> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let mut g = BigInt::zero();
    for n in 0..=d {
        g = g.gcd(&f.eval_int(&BigInt::from(n)));
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

impl Add for &PolyZ {
    type Output = PolyZ;
    fn add(self, rhs: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZ::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &PolyZ {
    type Output = PolyZ;
    fn sub(self, rhs: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyZ::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &PolyZ {
    type Output = PolyZ;
    fn mul(self, rhs: &PolyZ) -> PolyZ {
        if self.is_zero() || rhs.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::new(out)
    }
}

impl Neg for &PolyZ {
    type Output = PolyZ;
    fn neg(self) -> PolyZ {
        PolyZ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_poly(self))
    }
}
