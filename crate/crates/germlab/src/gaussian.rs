//! Exact arithmetic over the Gaussian rationals Q(i).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// A Gaussian rational a + b*i, both parts in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussianRational { re, im: Rat::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(rat_i64(n))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn i() -> Self {
        GaussianRational { re: Rat::zero(), im: Rat::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus, a rational.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.inv()?)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// Square root inside Q(i), when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rat_sqrt(&self.re).map(Self::from_rat);
            }
            let s = rat_sqrt(&(-self.re.clone()))?;
            return Some(GaussianRational { re: Rat::zero(), im: s });
        }
        // (s + t*i)^2 = u + v*i forces s^2 = (u + |z|)/2, t = v/(2s).
        let r = rat_sqrt(&self.norm())?;
        let s2 = (&self.re + &r) / rat_i64(2);
        let s = rat_sqrt(&s2)?;
        if s.is_zero() {
            return None;
        }
        let t = &self.im / (rat_i64(2) * &s);
        let cand = GaussianRational { re: s, im: t };
        if &cand * &cand == *self {
            Some(cand)
        } else {
            None
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_part = |g: &mut fmt::Formatter<'_>, v: &Rat| -> fmt::Result {
            if v.is_one() {
                write!(g, "i")
            } else if (-v.clone()).is_one() {
                write!(g, "-i")
            } else {
                write!(g, "{}*i", v)
            }
        };
        if self.re.is_zero() {
            return im_part(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
            let p = -self.im.clone();
            if p.is_one() { write!(f, "i") } else { write!(f, "{}*i", p) }
        } else {
            write!(f, "+")?;
            if self.im.is_one() { write!(f, "i") } else { write!(f, "{}*i", self.im) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_one_plus_i() {
        let a = GaussianRational::new(rat_i64(1), rat_i64(1));
        let b = a.conj();
        assert_eq!(&a * &b, GaussianRational::from_i64(2));
    }

    #[test]
    fn inverse_round_trip() {
        let a = GaussianRational::new(rat(3, 2), rat(-5, 7));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn sqrt_in_gaussian_field() {
        // 2i = (1+i)^2
        let z = GaussianRational::new(rat_i64(0), rat_i64(2));
        let s = z.sqrt().unwrap();
        assert_eq!(&s * &s, z);
        // -4 = (2i)^2
        let z = GaussianRational::from_i64(-4);
        let s = z.sqrt().unwrap();
        assert_eq!(&s * &s, z);
        // -8 has no square root in Q(i)
        assert!(GaussianRational::from_i64(-8).sqrt().is_none());
        // 3 has none either
        assert!(GaussianRational::from_i64(3).sqrt().is_none());
        assert_eq!(
            GaussianRational::from_rat(rat(9, 4)).sqrt(),
            Some(GaussianRational::from_rat(rat(3, 2)))
        );
    }
}
