//! Small fixed-size vector types used throughout the toolkit.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Real 3-vector. Serializes as a `[x, y, z]` array.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector along `self`, or `None` for a zero or non-finite vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn axis(a: Axis) -> Vec3 {
        match a {
            Axis::X => Vec3::X,
            Axis::Y => Vec3::Y,
            Axis::Z => Vec3::Z,
        }
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Complex 3-vector, used for Fourier coefficients of vector fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const ZERO: CVec3 = CVec3([Complex64::new(0.0, 0.0); 3]);

    pub fn from_real(v: Vec3, scale: Complex64) -> Self {
        CVec3([scale * v.x, scale * v.y, scale * v.z])
    }

    /// Bilinear contraction with a real vector (no conjugation).
    pub fn dot_real(&self, v: Vec3) -> Complex64 {
        self.0[0] * v.x + self.0[1] * v.y + self.0[2] * v.z
    }

    /// Hermitian inner product `<self, o> = sum conj(self_i) o_i`.
    pub fn inner(&self, o: &CVec3) -> Complex64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn conj(&self) -> CVec3 {
        CVec3(self.0.map(|c| c.conj()))
    }

    pub fn scale(&self, s: Complex64) -> CVec3 {
        CVec3(self.0.map(|c| c * s))
    }

    pub fn add(&self, o: &CVec3) -> CVec3 {
        CVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &CVec3) -> CVec3 {
        CVec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    /// `k × self` for a real vector `k`.
    pub fn cross_from_real(k: Vec3, v: &CVec3) -> CVec3 {
        let [a, b, c] = v.0;
        CVec3([k.y * c - k.z * b, k.z * a - k.x * c, k.x * b - k.y * a])
    }
}

/// Cartesian axis, enumerated as (x, y, z) = (1, 2, 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    /// The axis completing `(self, other)` to a permutation of (x, y, z).
    pub fn third(self, other: Axis) -> Option<Axis> {
        if self == other {
            return None;
        }
        Axis::ALL.into_iter().find(|a| *a != self && *a != other)
    }
}

impl std::str::FromStr for Axis {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "1" => Ok(Axis::X),
            "y" | "2" => Ok(Axis::Y),
            "z" | "3" => Ok(Axis::Z),
            other => Err(crate::Error::invalid(format!("unknown axis `{other}`"))),
        }
    }
}

/// Levi-Civita symbol with ε_xyz = +1.
pub fn levi_civita(i: Axis, j: Axis, k: Axis) -> f64 {
    let (a, b, c) = (i.index() as i32, j.index() as i32, k.index() as i32);
    ((b - a) * (c - a) * (c - b)).signum() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_matches_cross_product() {
        for &i in &Axis::ALL {
            for &j in &Axis::ALL {
                let c = Vec3::axis(i).cross(Vec3::axis(j));
                for &k in &Axis::ALL {
                    assert_eq!(levi_civita(i, j, k), c[k.index()]);
                }
            }
        }
    }

    #[test]
    fn third_axis() {
        assert_eq!(Axis::X.third(Axis::Y), Some(Axis::Z));
        assert_eq!(Axis::Z.third(Axis::X), Some(Axis::Y));
        assert_eq!(Axis::Y.third(Axis::Y), None);
    }

    #[test]
    fn serde_as_array() {
        let v = Vec3::new(1.0, -2.0, 0.5);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5]");
        assert_eq!(serde_json::from_str::<Vec3>(&s).unwrap(), v);
    }
}
