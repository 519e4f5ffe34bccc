//! Integral quadratic polynomials `Q(x) = x^T F x + L^T x + t`:
//! evaluation, height, regularity and restriction to affine sublattices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::intmat::{det_exact, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadError {
    DimensionMismatch,
    /// Coefficient matrix is not symmetric; carries the offending entry pair.
    NotSymmetric { i: usize, j: usize },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::DimensionMismatch => write!(f, "dimension mismatch"),
            QuadError::NotSymmetric { i, j } => {
                write!(f, "coefficient matrix is not symmetric at ({i},{j})/({j},{i})")
            }
        }
    }
}

impl std::error::Error for QuadError {}

/// Quadratic polynomial with symmetric integer coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPolynomial {
    form: IntMatrix,
    linear: Vec<BigInt>,
    constant: BigInt,
}

impl QuadraticPolynomial {
    pub fn new(form: IntMatrix, linear: Vec<BigInt>, constant: BigInt) -> Result<Self, QuadError> {
        if !form.is_square() || form.rows() != linear.len() {
            return Err(QuadError::DimensionMismatch);
        }
        for i in 0..form.rows() {
            for j in 0..i {
                if form.get(i, j) != form.get(j, i) {
                    return Err(QuadError::NotSymmetric { i, j });
                }
            }
        }
        Ok(QuadraticPolynomial { form, linear, constant })
    }

    /// Homogeneous form: zero linear and constant parts.
    pub fn homogeneous(form: IntMatrix) -> Result<Self, QuadError> {
        let n = form.rows();
        QuadraticPolynomial::new(form, vec![BigInt::zero(); n], BigInt::zero())
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    pub fn linear(&self) -> &[BigInt] {
        &self.linear
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn is_homogeneous(&self) -> bool {
        self.linear.iter().all(|v| v.is_zero()) && self.constant.is_zero()
    }

    /// `Q(x) = x^T F x + L^T x + t`, exact.
    pub fn evaluate(&self, x: &[BigInt]) -> Result<BigInt, QuadError> {
        if x.len() != self.dim() {
            return Err(QuadError::DimensionMismatch);
        }
        let fx = self.form.mul_vec(x);
        let quad: BigInt = x.iter().zip(&fx).map(|(a, b)| a * b).sum();
        let lin: BigInt = x.iter().zip(&self.linear).map(|(a, b)| a * b).sum();
        Ok(quad + lin + &self.constant)
    }

    /// `|Q| = max { |F|, |L|, |t| }`.
    pub fn height(&self) -> BigInt {
        let mut h = self.form.max_abs();
        for v in &self.linear {
            h = h.max(v.abs());
        }
        h.max(self.constant.abs())
    }

    /// Regular iff `det F != 0`.
    pub fn is_regular(&self) -> bool {
        !det_exact(&self.form).expect("form is square").is_zero()
    }

    /// Restriction to the affine sublattice `{ c + B x' }`: the polynomial
    /// `G` in `k` variables with `G(x') = Q(c + B x')` identically, where
    /// `F' = B^T F B`, `L' = B^T (2 F c + L)` and `t' = Q(c)`.
    pub fn restrict(&self, b: &IntMatrix, c: &[BigInt]) -> Result<QuadraticPolynomial, QuadError> {
        let n = self.dim();
        if b.rows() != n || c.len() != n {
            return Err(QuadError::DimensionMismatch);
        }
        let bt = b.transpose();
        let new_form = bt.mul(&self.form).mul(b);
        let fc = self.form.mul_vec(c);
        let inner: Vec<BigInt> =
            fc.iter().zip(&self.linear).map(|(a, l)| BigInt::from(2) * a + l).collect();
        let new_linear = bt.mul_vec(&inner);
        let new_constant = self.evaluate(c)?;
        QuadraticPolynomial::new(new_form, new_linear, new_constant)
    }
}

impl fmt::Display for QuadraticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(F = {}, L = [", self.form)?;
        for (i, v) in self.linear.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "], t = {})", self.constant)
    }
}
