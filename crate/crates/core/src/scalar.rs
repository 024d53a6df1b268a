//! Minimal ring interface shared by Grassmann scalars, symbolic polynomials
//! and polynomials in `z`, so that determinants and Berezinians can be written
//! once.

use crate::error::Result;
use crate::grassmann::{GrassmannElement, Parity};

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    /// Zero in the same ambient ring as `self`.
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn r_add(&self, other: &Self) -> Self;
    fn r_sub(&self, other: &Self) -> Self;
    fn r_mul(&self, other: &Self) -> Self;
    fn r_neg(&self) -> Self;
    fn from_i64_like(&self, value: i64) -> Self;
}

/// A ring with a Z/2 grading and partial inversion.
pub trait SuperScalar: Ring {
    /// Homogeneous parity; zero is even, mixed elements give `None`.
    fn parity(&self) -> Option<Parity>;
    fn try_inv(&self) -> Result<Self>;

    fn is_even_el(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    fn is_odd_el(&self) -> bool {
        self.is_zero() || self.parity() == Some(Parity::Odd)
    }
}

impl Ring for GrassmannElement {
    fn zero_like(&self) -> Self {
        GrassmannElement::zero(self.generators())
    }

    fn one_like(&self) -> Self {
        GrassmannElement::one(self.generators())
    }

    fn is_zero(&self) -> bool {
        GrassmannElement::is_zero(self)
    }

    fn r_add(&self, other: &Self) -> Self {
        self + other
    }

    fn r_sub(&self, other: &Self) -> Self {
        self - other
    }

    fn r_mul(&self, other: &Self) -> Self {
        self * other
    }

    fn r_neg(&self) -> Self {
        -self
    }

    fn from_i64_like(&self, value: i64) -> Self {
        GrassmannElement::from_int(self.generators(), value)
    }
}

impl SuperScalar for GrassmannElement {
    fn parity(&self) -> Option<Parity> {
        GrassmannElement::parity(self)
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}
