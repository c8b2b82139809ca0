//! Exact plane geometry over the Gaussian rationals.

mod patch;
pub mod tile;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::ExactRational as Q;

pub use patch::{Patch, PatchKey};
pub use tile::{
    orient, point_in_triangle, point_on_segment, point_strictly_in_triangle, segments_intersect, signed_area2,
    tiles_intersect, triangles_intersect, triangles_overlap,
};

/// The Gaussian rational `x + iy`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ExactPoint {
    pub x: Q,
    pub y: Q,
}

impl ExactPoint {
    pub fn new(x: Q, y: Q) -> Self {
        ExactPoint { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        ExactPoint::new(Q::from(x), Q::from(y))
    }

    pub fn zero() -> Self {
        ExactPoint::default()
    }

    pub fn one() -> Self {
        ExactPoint::int(1, 0)
    }

    pub fn conj(&self) -> Self {
        ExactPoint::new(self.x.clone(), -&self.y)
    }

    pub fn norm2(&self) -> Q {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn scale(&self, k: &Q) -> Self {
        ExactPoint::new(&self.x * k, &self.y * k)
    }

    /// Complex division; fails for a zero divisor.
    pub fn div(&self, rhs: &ExactPoint) -> Result<Self> {
        let n = rhs.norm2();
        if n.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let p = self * &rhs.conj();
        Ok(ExactPoint::new(&p.x / &n, &p.y / &n))
    }

    pub fn dot(&self, rhs: &ExactPoint) -> Q {
        &self.x * &rhs.x + &self.y * &rhs.y
    }

    pub fn cross(&self, rhs: &ExactPoint) -> Q {
        &self.x * &rhs.y - &self.y * &rhs.x
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &ExactPoint, t: &Q) -> Self {
        self + &(other - self).scale(t)
    }
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<'a> Add<&'a ExactPoint> for &'a ExactPoint {
    type Output = ExactPoint;
    fn add(self, rhs: &'a ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl<'a> Sub<&'a ExactPoint> for &'a ExactPoint {
    type Output = ExactPoint;
    fn sub(self, rhs: &'a ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl<'a> Mul<&'a ExactPoint> for &'a ExactPoint {
    type Output = ExactPoint;
    fn mul(self, rhs: &'a ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x * &rhs.x - &self.y * &rhs.y, &self.x * &rhs.y + &self.y * &rhs.x)
    }
}

impl Neg for &ExactPoint {
    type Output = ExactPoint;
    fn neg(self) -> ExactPoint {
        ExactPoint::new(-&self.x, -&self.y)
    }
}

/// A complex number of modulus one, `c + is`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnitRotation {
    c: Q,
    s: Q,
}

impl UnitRotation {
    pub fn new(c: Q, s: Q) -> Result<Self> {
        if &c * &c + &s * &s != Q::one() {
            return Err(Error::NotUnit(format!("{c} + {s}i")));
        }
        Ok(UnitRotation { c, s })
    }

    pub fn identity() -> Self {
        UnitRotation { c: Q::one(), s: Q::zero() }
    }

    /// Rotation by a quarter turn, `i`.
    pub fn quarter() -> Self {
        UnitRotation { c: Q::zero(), s: Q::one() }
    }

    pub fn half() -> Self {
        UnitRotation { c: Q::from(-1), s: Q::zero() }
    }

    /// `i^k`.
    pub fn quarter_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::identity(),
            1 => Self::quarter(),
            2 => Self::half(),
            _ => Self::quarter().conj(),
        }
    }

    /// `z / |z|` for a Gaussian rational whose modulus is rational.
    pub fn from_point_ratio(num: &ExactPoint, den: &ExactPoint) -> Result<Self> {
        let z = num.div(den)?;
        UnitRotation::new(z.x, z.y)
    }

    pub fn c(&self) -> &Q {
        &self.c
    }

    pub fn s(&self) -> &Q {
        &self.s
    }

    pub fn as_point(&self) -> ExactPoint {
        ExactPoint::new(self.c.clone(), self.s.clone())
    }

    pub fn mul(&self, rhs: &UnitRotation) -> Self {
        let p = &self.as_point() * &rhs.as_point();
        UnitRotation { c: p.x, s: p.y }
    }

    pub fn conj(&self) -> Self {
        UnitRotation { c: self.c.clone(), s: -&self.s }
    }

    pub fn rotate(&self, z: &ExactPoint) -> ExactPoint {
        &self.as_point() * z
    }

    pub fn is_identity(&self) -> bool {
        self.c == Q::one()
    }
}

impl fmt::Debug for UnitRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.c, self.s)
    }
}

impl<'de> Deserialize<'de> for UnitRotation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            c: Q,
            s: Q,
        }
        let raw = Raw::deserialize(d)?;
        UnitRotation::new(raw.c, raw.s).map_err(serde::de::Error::custom)
    }
}

/// `z ↦ rot·z + trans`, or `rot·conj(z) + trans` when `reflect` is set.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Isometry {
    pub reflect: bool,
    pub rot: UnitRotation,
    pub trans: ExactPoint,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { reflect: false, rot: UnitRotation::identity(), trans: ExactPoint::zero() }
    }

    pub fn direct(rot: UnitRotation, trans: ExactPoint) -> Self {
        Isometry { reflect: false, rot, trans }
    }

    pub fn conjugation() -> Self {
        Isometry { reflect: true, rot: UnitRotation::identity(), trans: ExactPoint::zero() }
    }

    pub fn apply(&self, z: &ExactPoint) -> ExactPoint {
        let w = if self.reflect { z.conj() } else { z.clone() };
        &self.rot.rotate(&w) + &self.trans
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        if self.reflect {
            Isometry {
                reflect: !other.reflect,
                rot: self.rot.mul(&other.rot.conj()),
                trans: &self.rot.rotate(&other.trans.conj()) + &self.trans,
            }
        } else {
            Isometry {
                reflect: other.reflect,
                rot: self.rot.mul(&other.rot),
                trans: &self.rot.rotate(&other.trans) + &self.trans,
            }
        }
    }

    pub fn inverse(&self) -> Isometry {
        if self.reflect {
            Isometry { reflect: true, rot: self.rot.clone(), trans: -&self.rot.rotate(&self.trans.conj()) }
        } else {
            let r = self.rot.conj();
            let trans = -&r.rotate(&self.trans);
            Isometry { reflect: false, rot: r, trans }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Chirality::Minus
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Chirality::Plus => "+",
            Chirality::Minus => "-",
        }
    }
}

impl Serialize for Chirality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Chirality {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "+" => Ok(Chirality::Plus),
            "-" | "−" => Ok(Chirality::Minus),
            other => Err(serde::de::Error::custom(format!("bad chirality `{other}`"))),
        }
    }
}

/// Reference triangle `V+`: long-leg end, right angle, short-leg end.
pub fn reference_vertices(ch: Chirality) -> [ExactPoint; 3] {
    let v = [ExactPoint::int(0, 0), ExactPoint::int(2, 0), ExactPoint::int(2, 1)];
    match ch {
        Chirality::Plus => v,
        Chirality::Minus => v.map(|p| p.conj()),
    }
}

/// A tile as the image of the reference triangle of its chirality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TilePose {
    pub chirality: Chirality,
    pub rot: UnitRotation,
    pub trans: ExactPoint,
}

impl TilePose {
    pub fn new(chirality: Chirality, rot: UnitRotation, trans: ExactPoint) -> Self {
        TilePose { chirality, rot, trans }
    }

    pub fn base(chirality: Chirality) -> Self {
        TilePose::new(chirality, UnitRotation::identity(), ExactPoint::zero())
    }

    /// The isometry carrying `V+` onto this tile.
    pub fn isometry(&self) -> Isometry {
        Isometry { reflect: self.chirality.is_minus(), rot: self.rot.clone(), trans: self.trans.clone() }
    }

    pub fn from_isometry(g: &Isometry) -> Self {
        let chirality = if g.reflect { Chirality::Minus } else { Chirality::Plus };
        TilePose::new(chirality, g.rot.clone(), g.trans.clone())
    }

    /// The direct part `z ↦ rot·z + trans`, carrying the base tile of the same
    /// chirality onto this tile.
    pub fn direct_part(&self) -> Isometry {
        Isometry::direct(self.rot.clone(), self.trans.clone())
    }

    /// Image of this tile under `g`.
    pub fn transform(&self, g: &Isometry) -> TilePose {
        let mut out = TilePose::from_isometry(&g.compose(&self.direct_part()));
        if self.chirality.is_minus() {
            out.chirality = out.chirality.flip();
        }
        out
    }

    pub fn mirror(&self) -> TilePose {
        TilePose::new(self.chirality.flip(), self.rot.conj(), self.trans.conj())
    }

    pub fn vertices(&self) -> [ExactPoint; 3] {
        reference_vertices(self.chirality).map(|v| &self.rot.rotate(&v) + &self.trans)
    }

    pub fn tile_key_bytes(&self, out: &mut Vec<u8>) {
        out.push(self.chirality as u8);
        self.rot.c.write_key_bytes(out);
        self.rot.s.write_key_bytes(out);
        self.trans.x.write_key_bytes(out);
        self.trans.y.write_key_bytes(out);
    }

    /// Sort key used by canonical encodings.
    pub fn sort_key(&self) -> (Chirality, &Q, &Q, &Q, &Q) {
        (self.chirality, &self.rot.c, &self.rot.s, &self.trans.x, &self.trans.y)
    }
}

impl fmt::Debug for TilePose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}+{}i, {:?})", self.chirality.symbol(), self.rot.c, self.rot.s, self.trans)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn apply_examples() {
        let p = ExactPoint::new(q(3, 2), q(1, 2));
        assert_eq!(Isometry::identity().apply(&p), p);
        let quarter = Isometry::direct(UnitRotation::quarter(), ExactPoint::zero());
        assert_eq!(quarter.apply(&ExactPoint::int(2, 0)), ExactPoint::int(0, 2));
        let r = UnitRotation::new(q(3, 5), q(4, 5)).unwrap();
        let img = Isometry::direct(r, ExactPoint::zero()).apply(&ExactPoint::int(5, 0));
        assert_eq!(img, ExactPoint::int(3, 4));
        assert_eq!(img.norm2(), Q::from(25));
    }

    #[test]
    fn rejects_non_unit() {
        assert!(UnitRotation::new(q(1, 2), q(1, 2)).is_err());
    }

    #[test]
    fn tile_vertex_examples() {
        let plus = TilePose::base(Chirality::Plus).vertices();
        assert_eq!(plus, [ExactPoint::int(0, 0), ExactPoint::int(2, 0), ExactPoint::int(2, 1)]);
        let minus = TilePose::base(Chirality::Minus).vertices();
        assert_eq!(minus, [ExactPoint::int(0, 0), ExactPoint::int(2, 0), ExactPoint::int(2, -1)]);
        let t = TilePose::new(Chirality::Plus, UnitRotation::half(), ExactPoint::int(2, 1));
        let v = t.vertices();
        assert_eq!(v, [ExactPoint::int(2, 1), ExactPoint::int(0, 1), ExactPoint::int(0, 0)]);
        let d2 = |a: &ExactPoint, b: &ExactPoint| (a - b).norm2();
        assert_eq!(d2(&v[0], &v[2]), Q::from(5));
        assert_eq!(d2(&v[0], &v[1]), Q::from(4));
        assert_eq!(d2(&v[1], &v[2]), Q::from(1));
        assert_eq!(signed_area2(&v[0], &v[1], &v[2]), Q::from(2));
    }

    #[test]
    fn transform_matches_vertices() {
        let g = Isometry {
            reflect: true,
            rot: UnitRotation::new(q(-4, 5), q(3, 5)).unwrap(),
            trans: ExactPoint::new(q(1, 5), q(-7, 3)),
        };
        for ch in [Chirality::Plus, Chirality::Minus] {
            let t = TilePose::new(ch, UnitRotation::quarter(), ExactPoint::int(1, 2));
            let moved = t.transform(&g);
            assert_eq!(moved.chirality, ch.flip());
            assert_eq!(moved.vertices(), t.vertices().map(|v| g.apply(&v)));
        }
    }

    #[test]
    fn mirror_is_conjugation() {
        let t = TilePose::new(
            Chirality::Plus,
            UnitRotation::new(q(3, 5), q(4, 5)).unwrap(),
            ExactPoint::new(q(1, 5), q(2, 1)),
        );
        assert_eq!(t.mirror().vertices(), t.vertices().map(|v| v.conj()));
        assert_eq!(t.mirror(), t.transform(&Isometry::conjugation()));
    }
}
