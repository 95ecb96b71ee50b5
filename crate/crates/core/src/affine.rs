use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polytope::Halfspace;
use crate::rational::Rational;

/// Integer affine form `constant + Σ coefficients[i]·x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub constant: BigInt,
    pub coefficients: Vec<BigInt>,
}

impl AffineForm {
    pub fn constant(arity: usize, c: i64) -> Self {
        AffineForm {
            constant: BigInt::from(c),
            coefficients: vec![BigInt::zero(); arity],
        }
    }

    pub fn projection(arity: usize, i: usize) -> Self {
        let mut f = Self::constant(arity, 0);
        f.coefficients[i] = BigInt::one();
        f
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        debug_assert_eq!(point.len(), self.arity());
        let mut acc = Rational::from_integer(self.constant.clone());
        for (c, x) in self.coefficients.iter().zip(point) {
            if !c.is_zero() {
                acc += x * c;
            }
        }
        acc
    }

    pub fn checked_eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: point.len(),
            });
        }
        Ok(self.eval(point))
    }

    pub fn add(&self, other: &Self) -> Self {
        AffineForm {
            constant: &self.constant + &other.constant,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        AffineForm {
            constant: &self.constant * &k,
            coefficients: self.coefficients.iter().map(|a| a * &k).collect(),
        }
    }

    pub fn shift(&self, c: i64) -> Self {
        AffineForm {
            constant: &self.constant + BigInt::from(c),
            coefficients: self.coefficients.clone(),
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        self.scale(-1).shift(1)
    }

    /// The halfspace `self(x) <= 0`.
    pub fn nonpositive(&self) -> Halfspace {
        Halfspace::new(
            self.coefficients
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
            Rational::from_integer(-self.constant.clone()),
        )
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            let mag = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if mag.is_one() {
                write!(f, "x{i}")?;
            } else {
                write!(f, "{mag}x{i}")?;
            }
            wrote = true;
        }
        if !wrote {
            return write!(f, "{}", self.constant);
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())?;
        }
        Ok(())
    }
}
