//! Minkowski 3-space with signature (−,+,+).
//!
//! The first coordinate is timelike. The upper sheet of the hyperbolic plane is
//! `{u : ⟨u,u⟩ = −1, u.x1 > 0}` and de Sitter space is `{u : ⟨u,u⟩ = 1}`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::{lit, Real, Ring};

/// Default relative tolerance for causal classification.
pub const CAUSAL_TOL: f64 = 1e-9;

/// A vector of Minkowski 3-space.
///
/// The component type is generic over any [`Ring`] so the same products work
/// on real vectors and on vectors of jets.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MVec3<R> {
    pub x1: R,
    pub x2: R,
    pub x3: R,
}

/// Causal character of a non-zero vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

impl<R> MVec3<R> {
    pub const fn new(x1: R, x2: R, x3: R) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn map<S>(&self, mut f: impl FnMut(&R) -> S) -> MVec3<S> {
        MVec3::new(f(&self.x1), f(&self.x2), f(&self.x3))
    }

    pub fn try_map<S, E>(&self, mut f: impl FnMut(&R) -> Result<S, E>) -> Result<MVec3<S>, E> {
        Ok(MVec3::new(f(&self.x1)?, f(&self.x2)?, f(&self.x3)?))
    }

    pub fn components(&self) -> [&R; 3] {
        [&self.x1, &self.x2, &self.x3]
    }
}

impl<R: Ring> MVec3<R> {
    /// Pseudo scalar product `−u1·w1 + u2·w2 + u3·w3`.
    pub fn inner(&self, w: &Self) -> R {
        -(self.x1.clone() * w.x1.clone()) + self.x2.clone() * w.x2.clone()
            + self.x3.clone() * w.x3.clone()
    }

    /// Pseudo vector product. `⟨u∧w, z⟩ = det(u, w, z)`.
    pub fn wedge(&self, w: &Self) -> Self {
        let (u1, u2, u3) = (&self.x1, &self.x2, &self.x3);
        let (w1, w2, w3) = (&w.x1, &w.x2, &w.x3);
        MVec3::new(
            -(u2.clone() * w3.clone()) + u3.clone() * w2.clone(),
            u3.clone() * w1.clone() - u1.clone() * w3.clone(),
            -(u2.clone() * w1.clone()) + u1.clone() * w2.clone(),
        )
    }

    /// Multiplies every component by `k`.
    pub fn scale(&self, k: &R) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    /// `det(u, w, z)` with `u, w, z` as rows.
    pub fn det(u: &Self, w: &Self, z: &Self) -> R {
        u.wedge(w).inner(z)
    }
}

impl<T: Real> MVec3<T> {
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// The base point `(1, 0, 0)` of the hyperbolic plane.
    pub fn origin() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.x1 == T::zero() && self.x2 == T::zero() && self.x3 == T::zero()
    }

    pub fn euclid_norm_sq(&self) -> T {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn euclid_dot(&self, w: &Self) -> T {
        self.x1 * w.x1 + self.x2 * w.x2 + self.x3 * w.x3
    }

    pub fn max_abs(&self) -> T {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    /// Pseudo-norm `√|⟨u,u⟩|`.
    pub fn pseudo_norm(&self) -> T {
        self.inner(self).abs().sqrt()
    }

    /// Causal character. The lightlike band is `|⟨u,u⟩| ≤ tol·max(1, ‖u‖²)`
    /// with the Euclidean norm on the right.
    pub fn causal_class(&self, tol: T) -> Result<CausalClass> {
        if !self.is_finite() {
            return Err(Error::NonFinite("causal_class"));
        }
        if self.is_zero() {
            return Err(Error::NullInput);
        }
        let q = self.inner(self);
        let band = tol * T::one().max(self.euclid_norm_sq());
        Ok(if q.abs() <= band {
            CausalClass::Lightlike
        } else if q > T::zero() {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        })
    }

    /// `|⟨u,u⟩ + 1| ≤ tol`.
    pub fn on_hyperboloid(&self, tol: T) -> bool {
        self.is_finite() && (self.inner(self) + T::one()).abs() <= tol
    }

    /// [`on_hyperboloid`](Self::on_hyperboloid) restricted to `x1 > 0`.
    pub fn on_upper_sheet(&self, tol: T) -> bool {
        self.on_hyperboloid(tol) && self.x1 > T::zero()
    }

    /// `|⟨u,u⟩ − 1| ≤ tol`.
    pub fn on_desitter(&self, tol: T) -> bool {
        self.is_finite() && (self.inner(self) - T::one()).abs() <= tol
    }

    pub fn to_f64(&self) -> MVec3<f64> {
        MVec3::new(
            self.x1.to_f64().unwrap_or(f64::NAN),
            self.x2.to_f64().unwrap_or(f64::NAN),
            self.x3.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl<R: Ring> Add for MVec3<R> {
    type Output = Self;
    fn add(self, w: Self) -> Self {
        MVec3::new(self.x1 + w.x1, self.x2 + w.x2, self.x3 + w.x3)
    }
}

impl<R: Ring> Sub for MVec3<R> {
    type Output = Self;
    fn sub(self, w: Self) -> Self {
        MVec3::new(self.x1 - w.x1, self.x2 - w.x2, self.x3 - w.x3)
    }
}

impl<R: Ring> Neg for MVec3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        MVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl<T: Real> Mul<T> for MVec3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        MVec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

/// Lifts a constant vector to a vector of constant jets.
pub fn const_jets<T: Real>(u: &MVec3<T>, base: T, order: usize) -> MVec3<Jet<T>> {
    u.map(|&c| Jet::constant(base, order, c))
}

/// Value (order-0 coefficient) of a jet vector.
pub fn jet_value<T: Real>(u: &MVec3<Jet<T>>) -> MVec3<T> {
    u.map(|j| j.value())
}

/// A Lorentz boost taking a point of the upper sheet to `(1, 0, 0)`.
///
/// The boost acts in the plane spanned by `(1, 0, 0)` and the point, so it
/// carries no rotation of the spatial coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Boost<T> {
    forward: [[T; 3]; 3],
    inverse: [[T; 3]; 3],
}

impl<T: Real> Boost<T> {
    /// Builds the boost with `L(p) = (1, 0, 0)`.
    pub fn to_origin(p: &MVec3<T>) -> Result<Self> {
        let tol = lit::<T>(CAUSAL_TOL) * T::one().max(p.euclid_norm_sq());
        if !p.is_finite() || !(p.inner(p) + T::one()).abs().le(&tol) || p.x1 <= T::zero() {
            let q = p.to_f64();
            return Err(Error::OffUpperSheet(q.x1, q.x2, q.x3));
        }
        // Renormalise so the matrix is an exact isometry of the form.
        let gamma = (T::one() + p.x2 * p.x2 + p.x3 * p.x3).sqrt();
        let (a, b) = (p.x2, p.x3);
        let k = T::one() / (gamma + T::one());
        let build = |sign: T| {
            [
                [gamma, sign * a, sign * b],
                [sign * a, T::one() + k * a * a, k * a * b],
                [sign * b, k * a * b, T::one() + k * b * b],
            ]
        };
        Ok(Self {
            forward: build(-T::one()),
            inverse: build(T::one()),
        })
    }

    pub fn matrix(&self) -> [[T; 3]; 3] {
        self.forward
    }

    pub fn inverse(&self) -> Self {
        Self {
            forward: self.inverse,
            inverse: self.forward,
        }
    }

    pub fn apply(&self, u: &MVec3<T>) -> MVec3<T> {
        let m = &self.forward;
        let v = u.to_array();
        let row = |i: usize| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        MVec3::new(row(0), row(1), row(2))
    }

    pub fn apply_inverse(&self, u: &MVec3<T>) -> MVec3<T> {
        self.inverse().apply(u)
    }

    /// Applies the boost coefficientwise to a vector of jets.
    pub fn apply_jets(&self, u: &MVec3<Jet<T>>) -> MVec3<Jet<T>> {
        let m = &self.forward;
        let row = |i: usize| {
            u.x1.scale(m[i][0]) + u.x2.scale(m[i][1]) + u.x3.scale(m[i][2])
        };
        MVec3::new(row(0), row(1), row(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type V = MVec3<f64>;

    #[test]
    fn inner_examples() {
        let e1 = V::new(1.0, 0.0, 0.0);
        let e2 = V::new(0.0, 1.0, 0.0);
        let n = V::new(1.0, 1.0, 0.0);
        assert_eq!(e1.inner(&e1), -1.0);
        assert_eq!(e2.inner(&e2), 1.0);
        assert_eq!(n.inner(&n), 0.0);
    }

    #[test]
    fn wedge_examples() {
        let e1 = V::new(1.0, 0.0, 0.0);
        let e2 = V::new(0.0, 1.0, 0.0);
        let e3 = V::new(0.0, 0.0, 1.0);
        assert_eq!(e2.wedge(&e3), V::new(-1.0, 0.0, 0.0));
        assert_eq!(e1.wedge(&e1), V::zero());
        assert_eq!(e1.wedge(&e2), V::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn causal_examples() {
        assert_eq!(
            V::new(2.0, 1.0, 0.0).causal_class(1e-9).unwrap(),
            CausalClass::Timelike
        );
        assert_eq!(
            V::new(0.0, 3.0, 4.0).causal_class(1e-9).unwrap(),
            CausalClass::Spacelike
        );
        assert_eq!(
            V::new(5.0, 3.0, 4.0).causal_class(1e-9).unwrap(),
            CausalClass::Lightlike
        );
        assert_eq!(V::zero().causal_class(1e-9), Err(Error::NullInput));
        assert!(V::new(f64::NAN, 0.0, 0.0).causal_class(1e-9).is_err());
    }

    #[test]
    fn pseudo_sphere_membership() {
        assert!(V::origin().on_hyperboloid(1e-12));
        assert!(V::new(2f64.sqrt(), 1.0, 0.0).on_upper_sheet(1e-12));
        let e2 = V::new(0.0, 1.0, 0.0);
        assert!(!e2.on_hyperboloid(1e-9));
        assert!(e2.on_desitter(1e-9));
        assert!(!V::new(-1.0, 0.0, 0.0).on_upper_sheet(1e-9));
        assert!(V::new(-1.0, 0.0, 0.0).on_hyperboloid(1e-9));
    }

    #[test]
    fn boost_examples() {
        let id = Boost::to_origin(&V::origin()).unwrap();
        let u = V::new(0.3, -1.2, 2.5);
        assert_eq!(id.apply(&u), u);

        let p = V::new(2f64.sqrt(), 1.0, 0.0);
        let l = Boost::to_origin(&p).unwrap();
        let q = l.apply(&p);
        assert!((q.x1 - 1.0).abs() < 1e-12 && q.x2.abs() < 1e-12 && q.x3.abs() < 1e-12);
        assert!(Boost::to_origin(&V::new(0.0, 1.0, 0.0)).is_err());
        assert!(Boost::to_origin(&V::new(-1.0, 0.0, 0.0)).is_err());
    }

    fn unit_scale() -> impl Strategy<Value = V> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, c)| V::new(a, b, c))
    }

    fn upper_sheet() -> impl Strategy<Value = V> {
        (0.0f64..3.0, 0.0f64..std::f64::consts::TAU)
            .prop_map(|(t, phi)| V::new(t.cosh(), t.sinh() * phi.cos(), t.sinh() * phi.sin()))
    }

    proptest! {
        #[test]
        fn inner_symmetric(u in unit_scale(), w in unit_scale()) {
            prop_assert_eq!(u.inner(&w), w.inner(&u));
        }

        #[test]
        fn wedge_orthogonal(u in unit_scale(), w in unit_scale()) {
            let x = u.wedge(&w);
            prop_assert!(x.inner(&u).abs() <= 1e-12);
            prop_assert!(x.inner(&w).abs() <= 1e-12);
            let y = w.wedge(&u);
            prop_assert!((x + y).max_abs() <= 1e-15);
        }

        #[test]
        fn boost_is_isometry(p in upper_sheet(), u in unit_scale(), w in unit_scale()) {
            let l = Boost::to_origin(&p).unwrap();
            let d = l.apply(&u).inner(&l.apply(&w)) - u.inner(&w);
            prop_assert!(d.abs() <= 1e-12 * (1.0 + p.euclid_norm_sq()));
            let o = l.apply(&p);
            prop_assert!((o - V::origin()).max_abs() <= 1e-10 * p.euclid_norm_sq());
        }

        #[test]
        fn boost_round_trip(p in upper_sheet(), u in unit_scale()) {
            let l = Boost::to_origin(&p).unwrap();
            let back = l.apply_inverse(&l.apply(&u));
            prop_assert!((back - u).max_abs() <= 1e-10 * p.euclid_norm_sq());
        }
    }
}
