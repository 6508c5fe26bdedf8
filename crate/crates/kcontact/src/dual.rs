//! Forward-mode dual numbers.
//!
//! `Dual<T>` carries a value and a single directional derivative. Nesting
//! `Dual<Dual<f64>>` gives exact second derivatives. Every user callable in
//! this crate is written against the [`Scalar`] trait so the same code runs
//! on plain floats and on duals.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real-like number type usable inside differentiable callables.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Constant with zero derivative parts.
    fn cst(v: f64) -> Self;
    /// Underlying real value.
    fn re(&self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Value plus one infinitesimal part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

/// First-order dual over floats.
pub type D1 = Dual<f64>;
/// Second-order (nested) dual.
pub type D2 = Dual<D1>;

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    /// Independent variable: derivative part one.
    pub fn var(re: T) -> Self {
        Dual { re, eps: T::one() }
    }

    /// Chain rule helper: f(re) with derivative f'(re).
    fn chain(self, f: T, df: T) -> Self {
        Dual {
            re: f,
            eps: df * self.eps,
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = T::one() / o.re;
        let v = self.re * inv;
        Dual::new(v, (self.eps - v * o.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar> Add<f64> for Dual<T> {
    type Output = Self;
    fn add(self, o: f64) -> Self {
        Dual::new(self.re + o, self.eps)
    }
}

impl<T: Scalar> Sub<f64> for Dual<T> {
    type Output = Self;
    fn sub(self, o: f64) -> Self {
        Dual::new(self.re - o, self.eps)
    }
}

impl<T: Scalar> Mul<f64> for Dual<T> {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        Dual::new(self.re * o, self.eps * o)
    }
}

impl<T: Scalar> Div<f64> for Dual<T> {
    type Output = Self;
    fn div(self, o: f64) -> Self {
        Dual::new(self.re / o, self.eps / o)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn cst(v: f64) -> Self {
        Dual::new(T::cst(v), T::zero())
    }
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, T::one() / (s * 2.0))
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.re.ln(), T::one() / self.re)
    }
    fn sin(self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }
    fn abs(self) -> Self {
        if self.re.re() < 0.0 {
            -self
        } else {
            self
        }
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let lower = self.re.powi(n - 1);
        self.chain(lower * self.re, lower * (n as f64))
    }
}

/// Lift a slice of floats to constants of any scalar type.
pub fn lift<S: Scalar>(x: &[f64]) -> Vec<S> {
    x.iter().map(|&v| S::cst(v)).collect()
}

/// Seed `x` as duals with unit derivative along coordinate `dir`.
pub fn seed<T: Scalar>(x: &[T], dir: usize) -> Vec<Dual<T>> {
    x.iter()
        .enumerate()
        .map(|(j, &v)| Dual::new(v, if j == dir { T::one() } else { T::zero() }))
        .collect()
}

/// Gradient of a generic scalar function, one forward pass per coordinate.
pub fn gradient<T: Scalar, F>(x: &[T], f: F) -> Vec<T>
where
    F: Fn(&[Dual<T>]) -> Dual<T>,
{
    (0..x.len()).map(|j| f(&seed(x, j)).eps).collect()
}

/// Jacobian of a generic vector function; row `r` holds d out_r / d x.
pub fn jacobian<T: Scalar, F>(x: &[T], f: F) -> Vec<Vec<T>>
where
    F: Fn(&[Dual<T>]) -> Vec<Dual<T>>,
{
    let cols: Vec<Vec<T>> = (0..x.len())
        .map(|j| f(&seed(x, j)).into_iter().map(|d| d.eps).collect())
        .collect();
    let rows = cols.first().map_or(0, |c| c.len());
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<S: Scalar>(x: S) -> S {
        x * x * x + x * 2.0 - S::cst(1.0)
    }

    #[test]
    fn first_derivative_of_polynomial() {
        let d = poly(D1::var(2.0));
        assert_eq!(d.re, 11.0);
        assert_eq!(d.eps, 14.0);
    }

    #[test]
    fn nested_dual_gives_second_derivative() {
        let x = D2::new(D1::var(2.0), D1::new(1.0, 0.0));
        let d = poly(x);
        assert_eq!(d.eps.eps, 12.0);
        assert_eq!(d.re.eps, 14.0);
    }

    #[test]
    fn transcendental_rules() {
        let x = 0.7;
        assert!((D1::var(x).exp().eps - x.exp()).abs() < 1e-15);
        assert!((D1::var(x).ln().eps - 1.0 / x).abs() < 1e-15);
        assert!((D1::var(x).sin().eps - x.cos()).abs() < 1e-15);
        assert!((D1::var(x).cos().eps + x.sin()).abs() < 1e-15);
        assert!((D1::var(x).sqrt().eps - 0.5 / x.sqrt()).abs() < 1e-15);
        assert!((D1::var(x).powi(3).eps - 3.0 * x * x).abs() < 1e-15);
        assert_eq!(D1::var(-x).abs().eps, -1.0);
        let q = D1::var(x) / D1::new(2.0, 0.0);
        assert_eq!(q.eps, 0.5);
    }

    #[test]
    fn gradient_and_jacobian_helpers() {
        let g = gradient(&[1.0, 2.0], |v| v[0] * v[1] * v[1]);
        assert_eq!(g, vec![4.0, 4.0]);
        let j = jacobian(&[1.0, 2.0], |v| vec![v[0] * v[1], v[0] + v[1]]);
        assert_eq!(j, vec![vec![2.0, 1.0], vec![1.0, 1.0]]);
    }
}
