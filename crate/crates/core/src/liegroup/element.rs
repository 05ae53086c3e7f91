use std::f64::consts::PI;

use rand::Rng;

use super::{GroupKind, GroupModel};

/// A group element: a U(1) phase angle or an SU(2) unit quaternion
/// `(w, x, y, z) <-> w + x iσx + y iσy + z iσz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    U1(f64),
    SU2([f64; 4]),
}

impl GroupElement {
    pub fn identity(group: &GroupModel) -> Self {
        match group.kind() {
            GroupKind::U1 => GroupElement::U1(0.0),
            GroupKind::SU2 => GroupElement::SU2([1.0, 0.0, 0.0, 0.0]),
        }
    }

    /// Element of class angle `theta` whose rotation axis is `axis` (unit
    /// vector, ignored for U(1)).
    pub fn from_class_angle(group: &GroupModel, theta: f64, axis: [f64; 3]) -> Self {
        match group.kind() {
            GroupKind::U1 => GroupElement::U1(theta),
            GroupKind::SU2 => {
                let (s, c) = theta.sin_cos();
                GroupElement::SU2([c, s * axis[0], s * axis[1], s * axis[2]])
            }
        }
    }

    /// Haar-distributed random element.
    pub fn haar_random<R: Rng + ?Sized>(group: &GroupModel, rng: &mut R) -> Self {
        match group.kind() {
            GroupKind::U1 => GroupElement::U1(rng.random_range(-PI..PI)),
            GroupKind::SU2 => loop {
                // uniform on S^3 by rejection from the cube
                let q = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                let n2: f64 = q.iter().map(|v| v * v).sum();
                if n2 > 1e-6 && n2 <= 1.0 {
                    let n = n2.sqrt();
                    break GroupElement::SU2([q[0] / n, q[1] / n, q[2] / n, q[3] / n]);
                }
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (GroupElement::U1(a), GroupElement::U1(b)) => GroupElement::U1(wrap_angle(a + b)),
            (GroupElement::SU2(p), GroupElement::SU2(q)) => {
                // quaternion product
                let (a1, b1, c1, d1) = (p[0], p[1], p[2], p[3]);
                let (a2, b2, c2, d2) = (q[0], q[1], q[2], q[3]);
                GroupElement::SU2([
                    a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                    a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                    a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                    a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
                ])
            }
            _ => panic!("multiplying elements of different groups"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::U1(a) => GroupElement::U1(wrap_angle(-a)),
            GroupElement::SU2(q) => GroupElement::SU2([q[0], -q[1], -q[2], -q[3]]),
        }
    }

    /// Torus angle of the conjugacy class: signed in `(-pi, pi]` for U(1),
    /// in `[0, pi]` for SU(2).
    pub fn class_angle(&self) -> f64 {
        match self {
            GroupElement::U1(a) => wrap_angle(*a),
            GroupElement::SU2(q) => q[0].clamp(-1.0, 1.0).acos(),
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}
