//! Quaternions, imaginary units, and slice decomposition.
//!
//! A quaternion is written `q = w + x1*e1 + x2*e2 + x3*e3` with the usual
//! multiplication rules `e1*e2 = e3`, `e2*e3 = e1`, `e3*e1 = e2` and
//! `e_i^2 = -1`.  Every non-real quaternion lies on exactly one complex slice
//! `C(i) = { x + i*y }` spanned by `1` and a point `i` of the unit sphere of
//! imaginary quaternions.

use crate::scalar::{PlaneComplex, Real};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, x1: T, x2: T, x3: T) -> Self {
        Self { w, x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn e1() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn e2() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn e3() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Real part of the vector-free component (the `w` coefficient).
    pub fn real_part(self) -> T {
        self.w
    }

    /// Imaginary (vector) part as a quaternion with zero real part.
    pub fn vector_part(self) -> Self {
        Self::new(T::zero(), self.x1, self.x2, self.x3)
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == T::zero() || !n2.is_finite() {
            None
        } else {
            Some(self.conj().scale(n2.recip()))
        }
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl<T: Real> core::ops::Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<T: Real> core::ops::Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<T: Real> core::ops::Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x1, -self.x2, -self.x3)
    }
}

impl<T: Real> core::ops::Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x1 * o.x1 - self.x2 * o.x2 - self.x3 * o.x3,
            self.w * o.x1 + self.x1 * o.w + self.x2 * o.x3 - self.x3 * o.x2,
            self.w * o.x2 - self.x1 * o.x3 + self.x2 * o.w + self.x3 * o.x1,
            self.w * o.x3 + self.x1 * o.x2 - self.x2 * o.x1 + self.x3 * o.w,
        )
    }
}

impl<T: Real> Serialize for Quaternion<T>
where
    T: Serialize,
{
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.w)?;
        t.serialize_element(&self.x1)?;
        t.serialize_element(&self.x2)?;
        t.serialize_element(&self.x3)?;
        t.end()
    }
}

impl<'de, T: Real> Deserialize<'de> for Quaternion<T>
where
    T: Deserialize<'de>,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(core::marker::PhantomData<T>);
        impl<'de, T: Real + Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = Quaternion<T>;
            fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
                f.write_str("an array [w, x1, x2, x3]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let w = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let x1 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let x2 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                let x3 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(3, &self))?;
                Ok(Quaternion::new(w, x1, x2, x3))
            }
        }
        d.deserialize_tuple(4, V(core::marker::PhantomData))
    }
}

/// Point of the unit two-sphere of imaginary quaternions; squares to -1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImaginaryUnit<T> {
    u1: T,
    u2: T,
    u3: T,
}

#[derive(Debug, thiserror::Error)]
pub enum UnitError {
    #[error("imaginary unit must be built from a nonzero vector")]
    ZeroVector,
}

impl<T: Real> ImaginaryUnit<T> {
    /// Normalizes the given vector; errors on (numerically) zero input.
    pub fn new(u1: T, u2: T, u3: T) -> Result<Self, UnitError> {
        let n = (u1 * u1 + u2 * u2 + u3 * u3).sqrt();
        if n < T::of(1e-30) || !n.is_finite() {
            return Err(UnitError::ZeroVector);
        }
        Ok(Self { u1: u1 / n, u2: u2 / n, u3: u3 / n })
    }

    pub fn e1() -> Self {
        Self { u1: T::one(), u2: T::zero(), u3: T::zero() }
    }

    pub fn e2() -> Self {
        Self { u1: T::zero(), u2: T::one(), u3: T::zero() }
    }

    pub fn e3() -> Self {
        Self { u1: T::zero(), u2: T::zero(), u3: T::one() }
    }

    pub fn components(self) -> (T, T, T) {
        (self.u1, self.u2, self.u3)
    }

    pub fn as_quaternion(self) -> Quaternion<T> {
        Quaternion::new(T::zero(), self.u1, self.u2, self.u3)
    }

    pub fn dot(self, o: Self) -> T {
        self.u1 * o.u1 + self.u2 * o.u2 + self.u3 * o.u3
    }

    pub fn neg(self) -> Self {
        Self { u1: -self.u1, u2: -self.u2, u3: -self.u3 }
    }

    /// Some unit orthogonal to `self`: Gram-Schmidt applied to `e1`, falling
    /// back to `e2` when `self` is (nearly) parallel to `e1`.
    pub fn orthogonal_unit(self) -> Self {
        for cand in [Self::e1(), Self::e2()] {
            let d = self.dot(cand);
            let r1 = cand.u1 - d * self.u1;
            let r2 = cand.u2 - d * self.u2;
            let r3 = cand.u3 - d * self.u3;
            if let Ok(u) = Self::new(r1, r2, r3) {
                let n = (r1 * r1 + r2 * r2 + r3 * r3).sqrt();
                if n > T::of(1e-6) {
                    return u;
                }
            }
        }
        unreachable!("no unit vector is near-parallel to both e1 and e2")
    }
}

impl<T: Real + Serialize> Serialize for ImaginaryUnit<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.u1)?;
        t.serialize_element(&self.u2)?;
        t.serialize_element(&self.u3)?;
        t.end()
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ImaginaryUnit<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(core::marker::PhantomData<T>);
        impl<'de, T: Real + Deserialize<'de>> Visitor<'de> for V<T> {
            type Value = ImaginaryUnit<T>;
            fn expecting(&self, f: &mut core::fmt::Formatter) -> core::fmt::Result {
                f.write_str("an array [u1, u2, u3] with nonzero norm")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let u1: T = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let u2: T = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let u3: T = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                ImaginaryUnit::new(u1, u2, u3).map_err(de::Error::custom)
            }
        }
        d.deserialize_tuple(3, V(core::marker::PhantomData))
    }
}

/// Embeds a plane complex number `x + i*y` onto the slice of `unit`.
pub fn embed<T: Real>(z: PlaneComplex<T>, unit: ImaginaryUnit<T>) -> Quaternion<T> {
    Quaternion::real(z.re) + unit.as_quaternion().scale(z.im)
}

/// Extracts the plane complex coordinates of `q` on the slice of `unit`,
/// together with the norm of the residual orthogonal to that slice.
pub fn unembed<T: Real>(q: Quaternion<T>, unit: ImaginaryUnit<T>) -> (PlaneComplex<T>, T) {
    let (u1, u2, u3) = unit.components();
    let im = q.x1 * u1 + q.x2 * u2 + q.x3 * u3;
    let r1 = q.x1 - im * u1;
    let r2 = q.x2 - im * u2;
    let r3 = q.x3 - im * u3;
    let resid = (r1 * r1 + r2 * r2 + r3 * r3).sqrt();
    (PlaneComplex::new(q.w, im), resid)
}

/// Slice coordinates of a quaternion: `q = x + unit * y` with `y >= 0`.
#[derive(Clone, Copy, Debug)]
pub struct SlicePoint<T> {
    pub x: T,
    pub y: T,
    pub unit: ImaginaryUnit<T>,
}

impl<T: Real> SlicePoint<T> {
    pub fn as_quaternion(self) -> Quaternion<T> {
        embed(PlaneComplex::new(self.x, self.y), self.unit)
    }
}

/// Decomposes `q` into slice coordinates.  Real quaternions are assigned the
/// unit `e1` and `y = 0`.
pub fn slice_decompose<T: Real>(q: Quaternion<T>) -> SlicePoint<T> {
    let y = (q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3).sqrt();
    match ImaginaryUnit::new(q.x1, q.x2, q.x3) {
        Ok(unit) => SlicePoint { x: q.w, y, unit },
        Err(_) => SlicePoint { x: q.w, y: T::zero(), unit: ImaginaryUnit::e1() },
    }
}

/// Writes `q = embed(f, i) + embed(g, i) * j` for `j` orthogonal to `i` and
/// returns `(f, g)`.
pub fn split_on_slice<T: Real>(
    q: Quaternion<T>,
    i: ImaginaryUnit<T>,
    j: ImaginaryUnit<T>,
) -> (PlaneComplex<T>, PlaneComplex<T>) {
    let k = i.as_quaternion() * j.as_quaternion();
    let dot_i = q.x1 * i.components().0 + q.x2 * i.components().1 + q.x3 * i.components().2;
    let dot_j = q.x1 * j.components().0 + q.x2 * j.components().1 + q.x3 * j.components().2;
    let dot_k = q.x1 * k.x1 + q.x2 * k.x2 + q.x3 * k.x3;
    (PlaneComplex::new(q.w, dot_i), PlaneComplex::new(dot_j, dot_k))
}

/// Inverse of [`split_on_slice`].
pub fn unsplit<T: Real>(
    f: PlaneComplex<T>,
    g: PlaneComplex<T>,
    i: ImaginaryUnit<T>,
    j: ImaginaryUnit<T>,
) -> Quaternion<T> {
    embed(f, i) + embed(g, i) * j.as_quaternion()
}
