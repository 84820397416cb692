//! Dense univariate polynomials over `f64` and `Complex64`.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `x^k`.
//! Exact trailing zeros are always dropped; [`Poly::normalized`] additionally
//! drops trailing coefficients that are negligible relative to the largest one.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar field a [`Poly`] can be built over.
pub trait Coeff:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn magnitude(self) -> f64;
    fn from_real(v: f64) -> Self;
}

impl Coeff for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn from_real(v: f64) -> Self {
        v
    }
}

impl Coeff for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn from_real(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

pub type RealPoly = Poly<f64>;
pub type ComplexPoly = Poly<Complex64>;

/// Quotient and remainder of dividing by `(z - r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deflation<T: Coeff> {
    pub quotient: Poly<T>,
    pub remainder: T,
}

impl<T: Coeff> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Self { coeffs };
        p.trim_exact();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Monic polynomial `prod (z - r)` over the given roots, repeated roots included.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut coeffs = vec![T::one()];
        for &r in roots {
            let mut next = vec![T::zero(); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1] + c;
                next[k] = next[k] - r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<T> {
        self.coeffs.last().copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// `max(1, sum |a_k| * max(1, |x|)^k)`, the magnitude residuals are measured against.
    pub fn scale_at(&self, x_magnitude: f64) -> f64 {
        let r = x_magnitude.max(1.0);
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.magnitude();
        }
        acc.max(1.0)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| T::from_real(k as f64) * c)
            .collect();
        Self::new(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Synthetic division by `(z - r)`.
    pub fn deflate(&self, r: T) -> Result<Deflation<T>> {
        match self.degree() {
            Some(d) if d >= 1 => {}
            found => return Err(Error::DegreeTooLow { found, min: 1 }),
        }
        let n = self.coeffs.len();
        let mut quotient = vec![T::zero(); n - 1];
        let mut carry = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            quotient[k] = carry;
            carry = self.coeffs[k] + carry * r;
        }
        Ok(Deflation {
            quotient: Self::new(quotient),
            remainder: carry,
        })
    }

    /// Drops trailing coefficients with magnitude `<= zero_eps * max |a_k|`.
    pub fn normalized(&self, zero_eps: f64) -> Self {
        let cutoff = zero_eps * self.max_abs();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.magnitude() <= cutoff) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `Q(z) = p(z + z0)`, expanded with binomial coefficients.
    pub fn shift(&self, z0: T) -> Self {
        // Repeated synthetic division by (z - z0) yields the Taylor
        // coefficients at z0, i.e. the coefficients of p(z + z0).
        let n = self.coeffs.len();
        let mut work = self.coeffs.clone();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                work[k] = work[k] + work[k + 1] * z0;
            }
        }
        Self::new(work)
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Divides every coefficient so the largest magnitude becomes 1.
    pub fn unit_scaled(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|&a| a * T::from_real(1.0 / m)).collect())
    }

    fn trim_exact(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == T::zero()) {
            self.coeffs.pop();
        }
    }
}

impl RealPoly {
    /// Radius beyond which the polynomial has the sign of its leading term.
    ///
    /// Returns `max(1, sum_{k<v} |a_k| / |a_v|) * (1 + 1e-3)`.
    pub fn root_bound(&self) -> Result<f64> {
        let v = match self.degree() {
            Some(v) if v >= 1 => v,
            found => return Err(Error::DegreeTooLow { found, min: 1 }),
        };
        let lead = self.coeffs[v].abs();
        let lower: f64 = self.coeffs[..v].iter().map(|a| a.abs()).sum();
        Ok((lower / lead).max(1.0) * (1.0 + 1e-3))
    }

    /// Long division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &RealPoly) -> Result<(RealPoly, RealPoly)> {
        let db = match divisor.degree() {
            Some(d) => d,
            None => return Err(Error::ZeroPolynomial),
        };
        let lead = divisor.coeffs[db];
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![0.0; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] / lead;
            q[k] = c;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                r[k + j] -= c * b;
            }
            r[k + db] = 0.0;
        }
        r.truncate(db);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn to_complex(&self) -> ComplexPoly {
        Poly::new(self.coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }
}

impl ComplexPoly {
    /// `Some` when every imaginary part is exactly zero.
    pub fn to_real(&self) -> Option<RealPoly> {
        self.coeffs
            .iter()
            .map(|c| (c.im == 0.0).then_some(c.re))
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|&a| -a).collect())
    }
}
