//! Univariate polynomials over `Q` in a formal parameter `a`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

/// Coefficients in increasing degree; trailing zeros are never stored, so
/// the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> Self {
        Poly::from_coefficients(vec![q])
    }

    pub fn from_int(k: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Poly::constant(BigRational::new(num.into(), den.into()))
    }

    /// The parameter `a`.
    pub fn param() -> Self {
        Poly::monomial(BigRational::one(), 1)
    }

    pub fn monomial(q: BigRational, degree: usize) -> Self {
        let mut c = vec![BigRational::zero(); degree];
        c.push(q);
        Poly::from_coefficients(c)
    }

    pub fn from_coefficients(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coefficient(&self, degree: usize) -> BigRational {
        self.0.get(degree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degrees carrying a nonzero coefficient.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&k| !self.0[k].is_zero()).collect()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Substitutes `a ↦ p(a)`.
    pub fn compose(&self, p: &Poly) -> Poly {
        self.0.iter().rev().fold(Poly::zero(), |acc, c| &(&acc * p) + &Poly::constant(c.clone()))
    }

    pub fn scale(&self, q: &BigRational) -> Poly {
        Poly::from_coefficients(self.0.iter().map(|c| c * q).collect())
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.0.len() >= rhs.0.len() { (self, rhs) } else { (rhs, self) };
        let mut c = long.0.clone();
        for (x, y) in c.iter_mut().zip(&short.0) {
            *x += y;
        }
        Poly::from_coefficients(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::from_coefficients(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for k in self.degrees() {
            let c = &self.0[k];
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag} ")?;
                    }
                    f.write_str("a")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Poly::param();
        let one = Poly::one();
        let p = &(&one + &a) * &(&one - &a);
        assert_eq!(p, &one - &a.pow(2));
        assert_eq!(p.degrees(), vec![0, 2]);
        assert!((&p - &p).is_zero());
        assert_eq!(p.to_string(), "1 - a^2");
        assert_eq!(Poly::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!((&Poly::ratio(3, 2) * &a).to_string(), "3/2 a");
        let two = BigRational::from_integer(2.into());
        assert_eq!(p.eval(&two), BigRational::from_integer((-3).into()));
        assert_eq!(p.compose(&Poly::zero()), one);
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_int(0), Poly::zero());
    }
}
