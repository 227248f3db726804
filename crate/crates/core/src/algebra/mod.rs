//! Exact linear algebra over Euclidean domains: Z2[h] for ACUNh and the
//! integers for comparison.

mod gf2poly;
mod matrix;
mod snf;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

pub use gf2poly::Gf2Poly;
pub use matrix::Matrix;
pub use snf::{smith_normal_form, solve_system_snf, GeneralSolution, NoSolution, SnfResult};

pub trait EuclideanDomain:
    Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    /// Euclidean function; only compared between nonzero elements.
    fn norm(&self) -> u64;

    /// `(q, r)` with `self = q·other + r` and `r = 0` or `norm(r) < norm(other)`.
    /// `other` must be nonzero.
    fn div_rem(&self, other: &Self) -> (Self, Self);

    fn is_unit(&self) -> bool;

    /// A unit `u` such that `u·self` is the chosen associate.
    fn normalizer(&self) -> Self;

    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }
}

impl EuclideanDomain for i64 {
    fn norm(&self) -> u64 {
        self.unsigned_abs()
    }

    fn div_rem(&self, other: &Self) -> (Self, Self) {
        (self.div_euclid(*other), self.rem_euclid(*other))
    }

    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }

    fn normalizer(&self) -> Self {
        if *self < 0 {
            -1
        } else {
            1
        }
    }
}

pub type PolyMatrix = Matrix<Gf2Poly>;
pub type PolySnf = SnfResult<Gf2Poly>;
pub type PolySolution = GeneralSolution<Gf2Poly>;
pub type IntMatrix = Matrix<i64>;
pub type IntSnf = SnfResult<i64>;
