//! Analytic functions as evaluable objects.

use std::sync::Arc;

use num_complex::Complex64;

/// A single-valued analytic function that can be evaluated together with its
/// derivative.
///
/// `value_at_infinity` is `Some` only for functions that are analytic in a
/// neighbourhood of `∞`.
pub trait AnalyticFunction {
    fn eval(&self, z: Complex64) -> Complex64;

    fn derivative(&self, z: Complex64) -> Complex64;

    fn value_at_infinity(&self) -> Option<Complex64> {
        None
    }
}

impl<T: AnalyticFunction + ?Sized> AnalyticFunction for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (**self).derivative(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        (**self).value_at_infinity()
    }
}

impl<T: AnalyticFunction + ?Sized> AnalyticFunction for Box<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (**self).derivative(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        (**self).value_at_infinity()
    }
}

impl<T: AnalyticFunction + ?Sized> AnalyticFunction for Arc<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (**self).derivative(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        (**self).value_at_infinity()
    }
}

/// Shared, thread-safe function handle.
pub type SharedFunction = Arc<dyn AnalyticFunction + Send + Sync>;

/// Function given by a pair of closures (value, derivative).
pub struct FnAnalytic<F, D> {
    value: F,
    deriv: D,
    at_infinity: Option<Complex64>,
}

impl<F, D> FnAnalytic<F, D>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    pub fn new(value: F, deriv: D) -> Self {
        Self {
            value,
            deriv,
            at_infinity: None,
        }
    }

    pub fn with_value_at_infinity(mut self, w: Complex64) -> Self {
        self.at_infinity = Some(w);
        self
    }
}

impl<F, D> AnalyticFunction for FnAnalytic<F, D>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.value)(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.deriv)(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        self.at_infinity
    }
}

impl<F, D> std::fmt::Debug for FnAnalytic<F, D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnAnalytic")
            .field("at_infinity", &self.at_infinity)
            .finish_non_exhaustive()
    }
}

/// `outer ∘ inner`.
pub struct Composed<O, I> {
    pub outer: O,
    pub inner: I,
}

impl<O: AnalyticFunction, I: AnalyticFunction> AnalyticFunction for Composed<O, I> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.outer.eval(self.inner.eval(z))
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.outer.derivative(self.inner.eval(z)) * self.inner.derivative(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        self.inner.value_at_infinity().map(|w| self.outer.eval(w))
    }
}

/// `c · z^n`.
#[derive(Debug, Clone, Copy)]
pub struct Monomial {
    pub coefficient: Complex64,
    pub power: u32,
}

impl Monomial {
    pub fn new(power: u32) -> Self {
        Self {
            coefficient: Complex64::new(1.0, 0.0),
            power,
        }
    }
}

impl AnalyticFunction for Monomial {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficient * z.powu(self.power)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        match self.power {
            0 => Complex64::new(0.0, 0.0),
            n => self.coefficient * f64::from(n) * z.powu(n - 1),
        }
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        (self.power == 0).then_some(self.coefficient)
    }
}

/// Central finite-difference derivative, step `h`.
pub fn finite_difference<F: AnalyticFunction + ?Sized>(f: &F, z: Complex64, h: f64) -> Complex64 {
    (f.eval(z + h) - f.eval(z - h)) / (2.0 * h)
}
