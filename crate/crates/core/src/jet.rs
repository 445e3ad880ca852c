//! Truncated Taylor series of a scalar function at a base parameter.
//!
//! A jet of order `K` at `s₀` stores `c_i = f⁽ⁱ⁾(s₀)/i!` for `i = 0..=K`.
//! Arithmetic and elementary functions follow the usual coefficient
//! recurrences, so every derivative up to the truncation is exact to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{factorial, lit, Real};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// Largest order accepted by evaluators.
pub const MAX_ORDER: usize = 64;

/// Default relative tolerance for [`Jet::vanishing_order`].
pub const VANISHING_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    base: T,
    coeffs: Vec<T>,
}

/// Binary jet operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary function applicable to a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElemFn {
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Powi(i32),
    Recip,
    Asinh,
}

impl<T: Real> Jet<T> {
    /// Builds a jet from raw Taylor coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(base: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { base, coeffs }
    }

    pub fn constant(base: T, order: usize, value: T) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    /// The identity function `s ↦ s` expanded at `base`.
    pub fn variable(base: T, order: usize) -> Self {
        let mut j = Self::constant(base, order, base);
        if order >= 1 {
            j.coeffs[1] = T::one();
        }
        j
    }

    pub fn zero(base: T, order: usize) -> Self {
        Self::constant(base, order, T::zero())
    }

    /// A jet with the same base and order as `self` holding a constant.
    pub fn lift(&self, value: T) -> Self {
        Self::constant(self.base, self.order(), value)
    }

    pub fn base(&self) -> T {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `f⁽ⁱ⁾(s₀) = c_i · i!`.
    pub fn derivative(&self, i: usize) -> Result<T> {
        if i > self.order() {
            return Err(Error::DerivativeOrder {
                requested: i,
                order: self.order(),
            });
        }
        Ok(self.coeffs[i] * factorial::<T>(i))
    }

    /// Jet of `f′`, one order shorter. The derivative of an order-0 jet is the
    /// zero jet of order 0.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.base, 0);
        }
        let coeffs = (1..=self.order())
            .map(|i| self.coeffs[i] * lit::<T>(i as f64))
            .collect();
        Self::from_coeffs(self.base, coeffs)
    }

    /// Antiderivative with the given constant term, one order longer.
    pub fn integrate(&self, constant: T) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(*c / lit::<T>((i + 1) as f64));
        }
        Self::from_coeffs(self.base, coeffs)
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot truncate upward");
        Self::from_coeffs(self.base, self.coeffs[..=order].to_vec())
    }

    /// `f(s)/(s − s₀)ᵖ` for a germ whose first `p` coefficients vanish.
    /// The leading coefficients are discarded, not checked.
    pub fn shift_down(&self, p: usize) -> Self {
        assert!(p <= self.order(), "shift exceeds truncation");
        Self::from_coeffs(self.base, self.coeffs[p..].to_vec())
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_coeffs(self.base, self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn add_scalar(&self, k: T) -> Self {
        let mut j = self.clone();
        j.coeffs[0] = j.coeffs[0] + k;
        j
    }

    /// Jet of `s ↦ f(s₀ + c·(s − s₀))` style rescaling: `c_i ↦ c_i·hⁱ`.
    pub fn rescale(&self, h: T) -> Self {
        let mut p = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * p;
                p = p * h;
                out
            })
            .collect();
        Self::from_coeffs(self.base, coeffs)
    }

    /// Step `h ≤ 1` that brings every coefficient to at most
    /// `max(1, |c₀|)` after [`rescale`](Self::rescale): the jet seen at its
    /// own convergence scale. Geometric growth of the coefficients (a nearby
    /// complex singularity) would otherwise let the tail dominate any
    /// magnitude comparison.
    pub fn balancing_step(&self) -> T {
        let m = T::one().max(self.coeffs[0].abs());
        let mut h = T::one();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let a = c.abs();
            if a > m && a.is_finite() {
                let step = (m / a).powf(T::one() / lit::<T>(i as f64));
                h = h.min(step);
            }
        }
        h
    }

    /// [`vanishing_order`](Self::vanishing_order) of the balanced jet. The
    /// order is unchanged by rescaling, so only the magnitude test differs.
    pub fn balanced_vanishing_order(&self, tol: T) -> Option<usize> {
        self.rescale(self.balancing_step()).vanishing_order(tol)
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.base == other.base && self.order() == other.order() {
            Ok(())
        } else {
            Err(Error::JetMismatch {
                base_a: self.base.to_f64().unwrap_or(f64::NAN),
                order_a: self.order(),
                base_b: other.base.to_f64().unwrap_or(f64::NAN),
                order_b: other.order(),
            })
        }
    }

    /// Checked binary arithmetic.
    pub fn arith(&self, other: &Self, op: JetOp) -> Result<Self> {
        self.compatible(other)?;
        Ok(match op {
            JetOp::Add => self.clone() + other.clone(),
            JetOp::Sub => self.clone() - other.clone(),
            JetOp::Mul => self.mul_ref(other),
            JetOp::Div => self.div(other)?,
        })
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![T::zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::from_coeffs(self.base, out)
    }

    /// Quotient `self / other`. Fails when the divisor's constant term is zero
    /// relative to its largest balanced coefficient.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let b0 = other.coeffs[0];
        let scale = other
            .rescale(other.balancing_step())
            .coeffs
            .iter()
            .fold(T::zero(), |m, c| m.max(c.abs()));
        if b0 == T::zero() || b0.abs() <= lit::<T>(1e-14) * scale || !b0.is_finite() {
            return Err(Error::JetDivision(b0.to_f64().unwrap_or(f64::NAN)));
        }
        let n = self.coeffs.len();
        let mut q: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc = acc - other.coeffs[i] * q[k - i];
            }
            q.push(acc / b0);
        }
        Ok(Self::from_coeffs(self.base, q))
    }

    pub fn recip(&self) -> Result<Self> {
        self.lift(T::one()).div(self).map_err(|_| Error::JetDomain {
            func: "recip",
            value: self.value().to_f64().unwrap_or(f64::NAN),
        })
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if !(a0 > T::zero()) {
            return Err(Error::JetDomain {
                func: "sqrt",
                value: a0.to_f64().unwrap_or(f64::NAN),
            });
        }
        let n = self.coeffs.len();
        let mut c: Vec<T> = Vec::with_capacity(n);
        c.push(a0.sqrt());
        let two_c0 = lit::<T>(2.0) * c[0];
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc = acc - c[i] * c[k - i];
            }
            c.push(acc / two_c0);
        }
        Ok(Self::from_coeffs(self.base, c))
    }

    /// Jets of `(sin∘f, cos∘f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let mut s = vec![T::zero(); n];
        let mut c = vec![T::zero(); n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for i in 1..=k {
                let w = lit::<T>(i as f64) * self.coeffs[i];
                ss = ss + w * c[k - i];
                cc = cc - w * s[k - i];
            }
            let kk = lit::<T>(k as f64);
            s[k] = ss / kk;
            c[k] = cc / kk;
        }
        (
            Self::from_coeffs(self.base, s),
            Self::from_coeffs(self.base, c),
        )
    }

    /// Jets of `(sinh∘f, cosh∘f)`.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let mut s = vec![T::zero(); n];
        let mut c = vec![T::zero(); n];
        s[0] = self.coeffs[0].sinh();
        c[0] = self.coeffs[0].cosh();
        for k in 1..n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for i in 1..=k {
                let w = lit::<T>(i as f64) * self.coeffs[i];
                ss = ss + w * c[k - i];
                cc = cc + w * s[k - i];
            }
            let kk = lit::<T>(k as f64);
            s[k] = ss / kk;
            c[k] = cc / kk;
        }
        (
            Self::from_coeffs(self.base, s),
            Self::from_coeffs(self.base, c),
        )
    }

    /// `tanh∘f` via `t' = f'(1 - t²)`, which stays finite for large arguments.
    pub fn tanh(&self) -> Self {
        let n = self.coeffs.len();
        let mut t = vec![T::zero(); n];
        let mut u = vec![T::zero(); n];
        t[0] = self.coeffs[0].tanh();
        u[0] = T::one() - t[0] * t[0];
        for k in 1..n {
            let mut acc = T::zero();
            for i in 1..=k {
                acc = acc + lit::<T>(i as f64) * self.coeffs[i] * u[k - i];
            }
            t[k] = acc / lit::<T>(k as f64);
            let mut sq = T::zero();
            for i in 0..=k {
                sq = sq + t[i] * t[k - i];
            }
            u[k] = -sq;
        }
        Self::from_coeffs(self.base, t)
    }

    pub fn asinh(&self) -> Self {
        let a0 = self.coeffs[0];
        if self.order() == 0 {
            return self.lift(a0.asinh());
        }
        let lower = self.truncate(self.order() - 1);
        let root = (lower.mul_ref(&lower).add_scalar(T::one()))
            .sqrt()
            .expect("1 + a² is positive");
        let slope = self.differentiate().div(&root).expect("root is positive");
        slope.integrate(a0.asinh())
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip().map_err(|_| Error::JetDomain {
                func: "powi",
                value: self.value().to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut result = self.lift(T::one());
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(result)
    }

    pub fn elem(&self, f: ElemFn) -> Result<Self> {
        Ok(match f {
            ElemFn::Sqrt => self.sqrt()?,
            ElemFn::Sin => self.sin_cos().0,
            ElemFn::Cos => self.sin_cos().1,
            ElemFn::Sinh => self.sinh_cosh().0,
            ElemFn::Cosh => self.sinh_cosh().1,
            ElemFn::Tanh => self.tanh(),
            ElemFn::Powi(n) => self.powi(n)?,
            ElemFn::Recip => self.recip()?,
            ElemFn::Asinh => self.asinh(),
        })
    }

    /// Index of the first coefficient with `|c_i| > tol·max(1, maxⱼ|c_j|)`,
    /// or `None` when every coefficient vanishes at this truncation.
    pub fn vanishing_order(&self, tol: T) -> Option<usize> {
        let scale = self
            .coeffs
            .iter()
            .fold(T::one(), |m, c| m.max(c.abs()));
        let band = tol * scale;
        self.coeffs.iter().position(|c| c.abs() > band)
    }

    /// Evaluates the truncated polynomial at `s`.
    pub fn eval(&self, s: T) -> T {
        let h = s - self.base;
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * h + c)
    }
}

fn check_pair<T: Real>(a: &Jet<T>, b: &Jet<T>) {
    if let Err(e) = a.compatible(b) {
        panic!("{e}");
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        check_pair(&self, &rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a + b;
        }
        self
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        check_pair(&self, &rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a - b;
        }
        self
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        check_pair(&self, &rhs);
        self.mul_ref(&rhs)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn j(coeffs: &[f64]) -> Jet<f64> {
        Jet::from_coeffs(0.0, coeffs.to_vec())
    }

    fn assert_coeffs(a: &Jet<f64>, expected: &[f64]) {
        assert_eq!(a.order() + 1, expected.len());
        for (x, y) in a.coeffs().iter().zip(expected) {
            assert_relative_eq!(*x, *y, epsilon = 1e-14);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let one_plus = j(&[1.0, 1.0, 0.0, 0.0]);
        let one_minus = j(&[1.0, -1.0, 0.0, 0.0]);
        assert_coeffs(
            &one_plus.arith(&one_minus, JetOp::Mul).unwrap(),
            &[1.0, 0.0, -1.0, 0.0],
        );
        assert_coeffs(
            &one_plus.arith(&one_plus, JetOp::Div).unwrap(),
            &[1.0, 0.0, 0.0, 0.0],
        );
        let s2 = j(&[0.0, 0.0, 1.0, 0.0, 0.0]);
        let s3 = j(&[0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_coeffs(&(s2 * s3), &[0.0; 5]);
    }

    #[test]
    fn division_by_vanishing_germ() {
        let s = Jet::variable(0.0, 3);
        let one = s.lift(1.0);
        assert!(matches!(
            one.arith(&s, JetOp::Div),
            Err(Error::JetDivision(_))
        ));
    }

    #[test]
    fn mismatched_jets_rejected() {
        let a = Jet::variable(0.0, 3);
        let b = Jet::variable(1.0, 3);
        let c = Jet::variable(0.0, 4);
        assert!(matches!(a.arith(&b, JetOp::Add), Err(Error::JetMismatch { .. })));
        assert!(matches!(a.arith(&c, JetOp::Mul), Err(Error::JetMismatch { .. })));
    }

    #[test]
    fn elementary_examples() {
        assert_coeffs(&j(&[1.0, 1.0, 0.0]).sqrt().unwrap(), &[1.0, 0.5, -0.125]);
        assert_coeffs(
            &j(&[0.0, 1.0, 0.0, 0.0]).elem(ElemFn::Sin).unwrap(),
            &[0.0, 1.0, 0.0, -1.0 / 6.0],
        );
        assert_coeffs(
            &j(&[0.0, 1.0, 0.0, 0.0, 0.0]).elem(ElemFn::Cosh).unwrap(),
            &[1.0, 0.0, 0.5, 0.0, 1.0 / 24.0],
        );
        assert_coeffs(
            &j(&[0.0, 1.0, 0.0, 0.0]).elem(ElemFn::Tanh).unwrap(),
            &[0.0, 1.0, 0.0, -1.0 / 3.0],
        );
        assert_coeffs(
            &j(&[0.0, 1.0, 0.0, 0.0]).elem(ElemFn::Asinh).unwrap(),
            &[0.0, 1.0, 0.0, -1.0 / 6.0],
        );
        assert_coeffs(
            &j(&[1.0, 1.0, 0.0, 0.0]).elem(ElemFn::Powi(-1)).unwrap(),
            &[1.0, -1.0, 1.0, -1.0],
        );
        assert_coeffs(
            &j(&[2.0, 1.0, 0.0]).elem(ElemFn::Powi(3)).unwrap(),
            &[8.0, 12.0, 6.0],
        );
    }

    #[test]
    fn domain_errors_name_function() {
        match j(&[-1.0, 1.0]).sqrt() {
            Err(Error::JetDomain { func, value }) => {
                assert_eq!(func, "sqrt");
                assert_eq!(value, -1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            j(&[0.0, 1.0]).elem(ElemFn::Recip),
            Err(Error::JetDomain { func: "recip", .. })
        ));
    }

    #[test]
    fn vanishing_order_and_derivative() {
        assert_eq!(j(&[0.0, 0.0, 1.0, 0.0]).vanishing_order(1e-8), Some(2));
        assert_eq!(j(&[5.0, 0.0, 0.0]).vanishing_order(1e-8), Some(0));
        assert_eq!(j(&[0.0, 1e-17, 0.0]).vanishing_order(1e-8), None);
        // geometric growth hides a genuine low-order term from the plain test
        let growing: Vec<f64> = (0..25).map(|i| if i < 2 { 1e-15 } else { 10f64.powi(i) }).collect();
        assert_eq!(j(&growing).vanishing_order(1e-8), Some(17));
        assert_eq!(j(&growing).balanced_vanishing_order(1e-8), Some(2));
        assert_eq!(j(&[1e-17, 1.0, 0.0]).balanced_vanishing_order(1e-8), Some(1));
        let steep = j(&(0..25).map(|i| 10f64.powi(i)).collect::<Vec<_>>());
        assert!(j(&[1.0; 25]).div(&steep).is_ok());
        assert_eq!(j(&[0.0, 0.0, 3.0]).derivative(2).unwrap(), 6.0);
        assert_eq!(j(&[4.0, 0.0, 3.0]).derivative(0).unwrap(), 4.0);
        assert!(matches!(
            j(&[0.0, 1.0]).derivative(2),
            Err(Error::DerivativeOrder { requested: 2, order: 1 })
        ));
    }

    #[test]
    fn differentiate_integrate_shift() {
        let a = j(&[1.0, 2.0, 3.0, 4.0]);
        assert_coeffs(&a.differentiate(), &[2.0, 6.0, 12.0]);
        assert_coeffs(&a.differentiate().integrate(1.0), &[1.0, 2.0, 3.0, 4.0]);
        assert_coeffs(&a.shift_down(2), &[3.0, 4.0]);
        assert_relative_eq!(a.eval(0.5), 1.0 + 1.0 + 0.75 + 0.5);
    }

    #[test]
    fn generic_over_f32() {
        let a: Jet<f32> = Jet::from_coeffs(0.0, vec![1.0, 1.0, 0.0]);
        let r = a.sqrt().unwrap();
        assert!((r.coeffs()[2] + 0.125).abs() < 1e-7);
    }
}
