//! Truncated power series in the counting variable s = iχ.
//!
//! A jet of order K holds the Taylor coefficients c₀..c_K of a function of s
//! about s = 0. Arithmetic propagates them exactly up to truncation, so the
//! k-th cumulant of a generating function is simply k!·c_k.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_JET_ORDER: usize = 6;

#[derive(Clone, PartialEq)]
pub struct CountingJet<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for CountingJet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Real> CountingJet<T> {
    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::<T>::zero(); order + 1],
        }
    }

    pub fn constant(value: Complex<T>, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = value;
        j
    }

    pub fn real_constant(value: T, order: usize) -> Self {
        Self::constant(Complex::new(value, T::zero()), order)
    }

    /// The identity series s ↦ s0 + s.
    pub fn variable(s0: Complex<T>, order: usize) -> Self {
        let mut j = Self::constant(s0, order);
        if order > 0 {
            j.coeffs[1] = Complex::new(T::one(), T::zero());
        }
        j
    }

    /// The series of e^s about s0, i.e. e^{s0}·Σ sᵏ/k!.
    pub fn exp_variable(s0: Complex<T>, order: usize) -> Self {
        Self::variable(s0, order).exp()
    }

    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    pub fn coef(&self, k: usize) -> Complex<T> {
        self.coeffs[k]
    }

    pub fn value(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// Same series at a different truncation order (zero-padded or cut).
    pub fn with_order(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, Complex::<T>::zero());
        Self { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// k-th derivative at s = 0: k!·c_k.
    pub fn derivative(&self, k: usize) -> Complex<T> {
        let mut fact = T::one();
        for i in 2..=k {
            fact = fact * T::lit(i as f64);
        }
        self.coeffs[k] * fact
    }

    /// Derivatives 1..=K, which are the cumulants when the jet is a
    /// cumulant generating function.
    pub fn derivatives(&self) -> Vec<Complex<T>> {
        (1..=self.order()).map(|k| self.derivative(k)).collect()
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn add_scalar(&self, value: Complex<T>) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + value;
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "jets of different orders cannot be combined"
        );
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::DegenerateDenominator);
        }
        let inv = a0.inv();
        let mut b = vec![Complex::<T>::zero(); self.coeffs.len()];
        b[0] = inv;
        for n in 1..b.len() {
            let mut acc = Complex::<T>::zero();
            for k in 1..=n {
                acc = acc + self.coeffs[k] * b[n - k];
            }
            b[n] = -acc * inv;
        }
        Ok(Self { coeffs: b })
    }

    pub fn exp(&self) -> Self {
        let mut b = vec![Complex::<T>::zero(); self.coeffs.len()];
        b[0] = self.coeffs[0].exp();
        for n in 1..b.len() {
            let mut acc = Complex::<T>::zero();
            for k in 1..=n {
                acc = acc + self.coeffs[k] * b[n - k] * T::lit(k as f64);
            }
            b[n] = acc / T::lit(n as f64);
        }
        Self { coeffs: b }
    }

    /// Principal logarithm anchored at the constant term.
    pub fn ln(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::BranchAmbiguity {
                re: 0.0,
                im: 0.0,
            });
        }
        let mut b = vec![Complex::<T>::zero(); self.coeffs.len()];
        b[0] = a0.ln();
        for n in 1..b.len() {
            let mut acc = Complex::<T>::zero();
            for k in 1..n {
                acc = acc + b[k] * self.coeffs[n - k] * T::lit(k as f64);
            }
            b[n] = (self.coeffs[n] - acc / T::lit(n as f64)) / a0;
        }
        Ok(Self { coeffs: b })
    }

    /// Principal square root anchored at the constant term. A constant term
    /// of exactly zero is only accepted for the zero series.
    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            if self.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::BranchAmbiguity {
                re: 0.0,
                im: 0.0,
            });
        }
        let mut b = vec![Complex::<T>::zero(); self.coeffs.len()];
        b[0] = a0.sqrt();
        let two_b0 = b[0] + b[0];
        for n in 1..b.len() {
            let mut acc = Complex::<T>::zero();
            for k in 1..n {
                acc = acc + b[k] * b[n - k];
            }
            b[n] = (self.coeffs[n] - acc) / two_b0;
        }
        Ok(Self { coeffs: b })
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::real_constant(T::one(), self.order());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }
}

impl<T: Real> Add for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn add(self, rhs: Self) -> CountingJet<T> {
        self.check_order(rhs);
        CountingJet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn sub(self, rhs: Self) -> CountingJet<T> {
        self.check_order(rhs);
        CountingJet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn mul(self, rhs: Self) -> CountingJet<T> {
        self.check_order(rhs);
        let n = self.coeffs.len();
        let mut out = vec![Complex::<T>::zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + k] = out[i + k] + a * b;
            }
        }
        CountingJet { coeffs: out }
    }
}

/// Panics on a zero constant term; use [`CountingJet::checked_div`] when
/// that can happen.
impl<T: Real> Div for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn div(self, rhs: Self) -> CountingJet<T> {
        self.checked_div(rhs).expect("division by a jet with zero constant term")
    }
}

impl<T: Real> Neg for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn neg(self) -> CountingJet<T> {
        CountingJet {
            coeffs: self.coeffs.iter().map(|&a| -a).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for CountingJet<T> {
            type Output = CountingJet<T>;
            fn $m(self, rhs: Self) -> CountingJet<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Real> $tr<&CountingJet<T>> for CountingJet<T> {
            type Output = CountingJet<T>;
            fn $m(self, rhs: &CountingJet<T>) -> CountingJet<T> {
                (&self).$m(rhs)
            }
        }
        impl<T: Real> $tr<CountingJet<T>> for &CountingJet<T> {
            type Output = CountingJet<T>;
            fn $m(self, rhs: CountingJet<T>) -> CountingJet<T> {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<T: Real> Neg for CountingJet<T> {
    type Output = CountingJet<T>;
    fn neg(self) -> CountingJet<T> {
        -&self
    }
}

impl<T: Real> AddAssign<&CountingJet<T>> for CountingJet<T> {
    fn add_assign(&mut self, rhs: &CountingJet<T>) {
        self.check_order(rhs);
        for (a, &b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = *a + b;
        }
    }
}

impl<T: Real> SubAssign<&CountingJet<T>> for CountingJet<T> {
    fn sub_assign(&mut self, rhs: &CountingJet<T>) {
        self.check_order(rhs);
        for (a, &b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = *a - b;
        }
    }
}

impl<T: Real> MulAssign<&CountingJet<T>> for CountingJet<T> {
    fn mul_assign(&mut self, rhs: &CountingJet<T>) {
        *self = &*self * rhs;
    }
}

impl<T: Real> Mul<T> for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn mul(self, rhs: T) -> CountingJet<T> {
        self.scale_real(rhs)
    }
}

impl<T: Real> Mul<T> for CountingJet<T> {
    type Output = CountingJet<T>;
    fn mul(self, rhs: T) -> CountingJet<T> {
        self.scale_real(rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for &CountingJet<T> {
    type Output = CountingJet<T>;
    fn mul(self, rhs: Complex<T>) -> CountingJet<T> {
        self.scale(rhs)
    }
}

impl<T: Real> Mul<Complex<T>> for CountingJet<T> {
    type Output = CountingJet<T>;
    fn mul(self, rhs: Complex<T>) -> CountingJet<T> {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type J = CountingJet<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Derivatives of a scalar function at z0 by central differences along
    /// the real axis of s, for comparison with k!·c_k.
    fn fd_derivatives(f: impl Fn(Complex64) -> Complex64, z0: Complex64) -> [Complex64; 3] {
        let h = 1e-2;
        let p = |k: f64| f(z0 + k * h);
        let d1 = (p(-2.0) - 8.0 * p(-1.0) + 8.0 * p(1.0) - p(2.0)) / (12.0 * h);
        let d2 = (-p(-2.0) + 16.0 * p(-1.0) - 30.0 * p(0.0) + 16.0 * p(1.0) - p(2.0)) / (12.0 * h * h);
        let d3 = (p(-3.0) - 8.0 * p(-2.0) + 13.0 * p(-1.0) - 13.0 * p(1.0) + 8.0 * p(2.0) - p(3.0))
            / (8.0 * h * h * h);
        [d1, d2, d3]
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * (1.0 + b.norm())
    }

    #[test]
    fn exp_series_has_factorial_coefficients() {
        let e = J::exp_variable(c(0.0, 0.0), 6);
        let mut fact = 1.0;
        for k in 0..=6 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.coef(k) - c(1.0 / fact, 0.0)).norm() < 1e-15);
        }
        assert_eq!(e.derivatives(), vec![c(1.0, 0.0); 6]);
    }

    #[test]
    fn constant_of_exp_is_exp_of_constant() {
        let x = J::from_coeffs(vec![c(0.3, -1.2), c(0.5, 0.1), c(-0.2, 0.0)]);
        assert_eq!(x.exp().value(), c(0.3, -1.2).exp());
    }

    #[test]
    fn ln_inverts_exp_and_sqrt_squares_back() {
        let x = J::from_coeffs(vec![c(0.7, 0.2), c(-0.3, 0.4), c(1.1, 0.0), c(0.0, 0.5), c(0.2, 0.2)]);
        let back = x.exp().ln().unwrap();
        for (a, b) in back.coeffs().iter().zip(x.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        let sq = x.sqrt().unwrap();
        let prod = &sq * &sq;
        for (a, b) in prod.coeffs().iter().zip(x.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        let one = &x * &x.recip().unwrap();
        assert!((one.value() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(one.coeffs()[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn composite_matches_finite_differences() {
        // f(s) = (U + sqrt(U² − K(e^s − 1))) / W, the shape of the steady
        // Riccati root, with an extra logarithm.
        let (u, k, w) = (0.7, 0.4, 0.3);
        let f = |s: Complex64| {
            let es = s.exp();
            let root = (u * u - k * (es - 1.0)).sqrt();
            ((u + root) / (w * es)).ln()
        };
        let s = J::variable(c(0.0, 0.0), 4);
        let es = s.exp();
        let root = (es.add_scalar(c(-1.0, 0.0)).scale_real(-k)).add_scalar(c(u * u, 0.0)).sqrt().unwrap();
        let jet = (root.add_scalar(c(u, 0.0)) / es.scale_real(w)).ln().unwrap();
        let fd = fd_derivatives(f, c(0.0, 0.0));
        assert!(close(jet.value(), f(c(0.0, 0.0)), 1e-15));
        for k in 0..3 {
            assert!(close(jet.derivative(k + 1), fd[k], 1e-6), "order {}", k + 1);
        }
    }

    #[test]
    fn jet_about_imaginary_point() {
        let s0 = c(0.0, 0.8);
        let f = |s: Complex64| (s.exp() * 2.0 + 1.0).sqrt() * s.exp();
        let s = J::variable(s0, 3);
        let jet = &(s.exp().scale_real(2.0).add_scalar(c(1.0, 0.0))).sqrt().unwrap() * &s.exp();
        let fd = fd_derivatives(f, s0);
        for k in 0..3 {
            assert!(close(jet.derivative(k + 1), fd[k], 1e-6));
        }
    }

    #[test]
    fn sqrt_branch_rules() {
        assert!(J::zero(3).sqrt().unwrap().is_zero());
        let mut x = J::zero(3);
        x.coeffs_mut()[1] = c(1.0, 0.0);
        assert!(matches!(x.sqrt(), Err(Error::BranchAmbiguity { .. })));
        assert!(matches!(J::zero(2).recip(), Err(Error::DegenerateDenominator)));
        // Principal branch: √(−1) = +i.
        let r = J::real_constant(-1.0, 2).sqrt().unwrap();
        assert_eq!(r.value(), c(0.0, 1.0));
    }

    #[test]
    fn truncation_is_consistent() {
        let x = J::from_coeffs(vec![c(1.2, 0.1), c(0.3, -0.4), c(0.5, 0.0), c(0.1, 0.1), c(0.0, 0.2)]);
        let hi = x.exp().ln().unwrap().sqrt().unwrap();
        let lo = x.with_order(2).exp().ln().unwrap().sqrt().unwrap();
        for k in 0..=2 {
            assert!((hi.coef(k) - lo.coef(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn single_precision_arithmetic() {
        let x = CountingJet::<f32>::variable(Complex::new(0.0, 0.0), 4).exp();
        let y = x.ln().unwrap();
        assert!((y.coef(1).re - 1.0).abs() < 1e-6);
        assert!(y.coeffs()[2..].iter().all(|z| z.norm() < 1e-6));
    }
}
