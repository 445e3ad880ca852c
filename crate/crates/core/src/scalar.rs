//! Scalar abstractions shared by every module.
//!
//! [`Real`] is the floating-point field the geometry is computed over (`f32`,
//! `f64`, or any extended-precision type with the same num-traits surface). [`Ring`] is the much weaker bound needed by the bilinear Minkowski
//! products, satisfied both by plain reals and by [`Jet`](crate::jet::Jet)s, so
//! the same `inner`/`wedge` code runs on values and on truncated Taylor series.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar.
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
}

/// Commutative ring with owned-value arithmetic.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<R> Ring for R where
    R: Clone + Add<Output = R> + Sub<Output = R> + Mul<Output = R> + Neg<Output = R>
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    <T as num_traits::NumCast>::from(x).expect("literal representable in scalar type")
}

/// `n!` as a scalar.
pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * lit::<T>(i as f64))
}

/// Binomial coefficient as a scalar.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| {
        acc * lit::<T>((n - i) as f64) / lit::<T>((i + 1) as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(binomial::<f64>(5, 2), 10.0);
        assert_eq!(binomial::<f64>(7, 0), 1.0);
        assert_eq!(binomial::<f64>(3, 4), 0.0);
        assert_eq!(binomial::<f32>(6, 3), 20.0);
    }
}
