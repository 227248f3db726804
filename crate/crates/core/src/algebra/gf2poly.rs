use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::EuclideanDomain;
use crate::error::{Error, Result};

/// Polynomial in `h` over Z2, one bit per coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    fn trim(mut self) -> Self {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
    }

    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Gf2Poly { words }
    }

    /// `h`.
    pub fn h() -> Self {
        Self::monomial(1)
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &k in exps {
            p = p + Gf2Poly::monomial(k);
        }
        p
    }

    /// Coefficients packed into a word, bit `j` for `h^j`.
    pub fn from_bits(bits: u64) -> Self {
        Gf2Poly { words: vec![bits] }.trim()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return Gf2Poly::zero();
        }
        let (wshift, bshift) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + wshift + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + wshift] ^= w << bshift;
            if bshift > 0 {
                words[i + wshift + 1] ^= w >> (64 - bshift);
            }
        }
        Gf2Poly { words }.trim()
    }

    fn xor_in(&mut self, other: &Gf2Poly) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn divmod(&self, b: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let mut q = Gf2Poly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            q.xor_in(&Gf2Poly::monomial(dr - db));
            r.xor_in(&b.shifted(dr - db));
        }
        Ok((q, r))
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divmod(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a
    }
}

impl Zero for Gf2Poly {
    fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.words.is_empty()
    }
}

impl One for Gf2Poly {
    fn one() -> Self {
        Gf2Poly { words: vec![1] }
    }
}

impl Add for Gf2Poly {
    type Output = Gf2Poly;

    fn add(mut self, rhs: Gf2Poly) -> Gf2Poly {
        self.xor_in(&rhs);
        self
    }
}

impl Add<&Gf2Poly> for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = self.clone();
        out.xor_in(rhs);
        out
    }
}

impl Sub for Gf2Poly {
    type Output = Gf2Poly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf2Poly) -> Gf2Poly {
        self + rhs
    }
}

impl Mul<&Gf2Poly> for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for k in self.exponents() {
            out.xor_in(&rhs.shifted(k));
        }
        out
    }
}

impl Mul for Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: Gf2Poly) -> Gf2Poly {
        &self * &rhs
    }
}

impl EuclideanDomain for Gf2Poly {
    fn norm(&self) -> u64 {
        self.degree().map_or(0, |d| d as u64 + 1)
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        self.divmod(other).expect("nonzero divisor")
    }

    fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    fn normalizer(&self) -> Self {
        Gf2Poly::one()
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut exps: Vec<usize> = self.exponents().collect();
        exps.reverse();
        for (i, k) in exps.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => f.write_str("1")?,
                1 => f.write_str("h")?,
                k => write!(f, "h^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(e)
    }

    #[test]
    fn division() {
        let (q, r) = p(&[2, 0]).divmod(&p(&[1, 0])).unwrap();
        assert_eq!((q.to_string(), r.to_string()), ("h + 1".into(), "0".into()));
        assert_eq!(&p(&[1, 0]) * &p(&[1, 0]), p(&[2, 0]));
        let a = p(&[5, 3, 0]);
        assert_eq!(a.divmod(&a).unwrap(), (Gf2Poly::one(), Gf2Poly::zero()));
        assert_eq!(Gf2Poly::zero().divmod(&a).unwrap(), (Gf2Poly::zero(), Gf2Poly::zero()));
        assert!(matches!(a.divmod(&Gf2Poly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn wide_shifts() {
        let a = Gf2Poly::monomial(70) + Gf2Poly::one();
        let b = &a * &a;
        assert_eq!(b, Gf2Poly::monomial(140) + Gf2Poly::one());
        let (q, r) = b.divmod(&a).unwrap();
        assert_eq!((q, r), (a, Gf2Poly::zero()));
    }

    #[test]
    fn gcd_of_products() {
        let g = p(&[1, 0]);
        let a = &g * &p(&[2, 1, 0]);
        let b = &g * &p(&[3, 0]);
        assert!(g.divides(&a.gcd(&b)));
    }
}
