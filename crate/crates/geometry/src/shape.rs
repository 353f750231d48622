use nalgebra::Isometry3;
use serde::{Deserialize, Serialize};

use crate::{GeometryError, Point3, Result, TriMesh, Vector3};

/// Analytic primitive, dimensions in meters, centered at the local origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrimitiveKind {
    Box { half_extents: [f64; 3] },
    Sphere { radius: f64 },
    /// Axis along local +z.
    Cylinder { radius: f64, half_height: f64 },
    /// Superquadric with semi-extents `a` and shape exponents `e1` (z blending)
    /// and `e2` (xy blending). `e1 = e2 = 1` with equal extents is a sphere.
    Superquadric { extents: [f64; 3], e1: f64, e2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosedPrimitive {
    pub kind: PrimitiveKind,
    /// Rigid world-from-local pose.
    pub pose: Isometry3<f64>,
}

/// A shape as a union of posed primitives (one element = a single primitive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub parts: Vec<PosedPrimitive>,
}

impl PrimitiveKind {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            PrimitiveKind::Box { half_extents } => half_extents.iter().all(|&h| h > 0.0),
            PrimitiveKind::Sphere { radius } => *radius > 0.0,
            PrimitiveKind::Cylinder { radius, half_height } => *radius > 0.0 && *half_height > 0.0,
            PrimitiveKind::Superquadric { extents, e1, e2 } => {
                extents.iter().all(|&h| h > 0.0) && *e1 > 0.0 && *e2 > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GeometryError::InvalidShape(format!("non-positive parameter in {self:?}")))
        }
    }

    /// Signed distance in the primitive's local frame. Exact for box, sphere
    /// and cylinder; the superquadric uses the radially-scaled implicit
    /// function, which has the exact zero set and sign but approximate
    /// magnitude away from the surface.
    pub fn sdf_local(&self, p: &Point3) -> f64 {
        match self {
            PrimitiveKind::Sphere { radius } => p.coords.norm() - radius,
            PrimitiveKind::Box { half_extents } => {
                let q = Vector3::new(
                    p.x.abs() - half_extents[0],
                    p.y.abs() - half_extents[1],
                    p.z.abs() - half_extents[2],
                );
                let outside = Vector3::new(q.x.max(0.0), q.y.max(0.0), q.z.max(0.0)).norm();
                let inside = q.x.max(q.y).max(q.z).min(0.0);
                outside + inside
            }
            PrimitiveKind::Cylinder { radius, half_height } => {
                let dr = (p.x * p.x + p.y * p.y).sqrt() - radius;
                let dz = p.z.abs() - half_height;
                let outside = (dr.max(0.0).powi(2) + dz.max(0.0).powi(2)).sqrt();
                let inside = dr.max(dz).min(0.0);
                outside + inside
            }
            PrimitiveKind::Superquadric { extents, e1, e2 } => {
                let r = p.coords.norm();
                if r < 1e-12 {
                    return -extents.iter().cloned().fold(f64::INFINITY, f64::min);
                }
                let xa = (p.x / extents[0]).abs();
                let yb = (p.y / extents[1]).abs();
                let zc = (p.z / extents[2]).abs();
                let f = (xa.powf(2.0 / e2) + yb.powf(2.0 / e2)).powf(e2 / e1) + zc.powf(2.0 / e1);
                if f <= 0.0 {
                    // On the z-axis with x = y = 0 and z = 0 handled above.
                    return -extents.iter().cloned().fold(f64::INFINITY, f64::min);
                }
                r * (1.0 - f.powf(-e1 / 2.0))
            }
        }
    }

    /// Half-extents of the local axis-aligned bounding box.
    pub fn local_half_extents(&self) -> Vector3 {
        match self {
            PrimitiveKind::Box { half_extents } => {
                Vector3::new(half_extents[0], half_extents[1], half_extents[2])
            }
            PrimitiveKind::Sphere { radius } => Vector3::repeat(*radius),
            PrimitiveKind::Cylinder { radius, half_height } => {
                Vector3::new(*radius, *radius, *half_height)
            }
            PrimitiveKind::Superquadric { extents, .. } => {
                Vector3::new(extents[0], extents[1], extents[2])
            }
        }
    }
}

impl ShapeSpec {
    pub fn new(parts: Vec<PosedPrimitive>) -> Result<Self> {
        if parts.is_empty() {
            return Err(GeometryError::InvalidShape("union of zero primitives".into()));
        }
        for part in &parts {
            part.kind.validate()?;
            let r = part.pose.rotation.to_rotation_matrix();
            let err = (r.matrix().transpose() * r.matrix()
                - nalgebra::Matrix3::identity())
            .norm();
            if err > 1e-6 {
                return Err(GeometryError::InvalidShape(format!(
                    "pose rotation not orthonormal (deviation {err:.2e})"
                )));
            }
        }
        Ok(Self { parts })
    }

    pub fn single(kind: PrimitiveKind, pose: Isometry3<f64>) -> Result<Self> {
        Self::new(vec![PosedPrimitive { kind, pose }])
    }

    /// World-frame axis-aligned bounding box (conservative for rotated parts).
    pub fn bbox(&self) -> (Point3, Point3) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for part in &self.parts {
            let h = part.kind.local_half_extents();
            for ix in [-1.0, 1.0] {
                for iy in [-1.0, 1.0] {
                    for iz in [-1.0, 1.0] {
                        let corner =
                            part.pose * Point3::new(ix * h.x, iy * h.y, iz * h.z);
                        for k in 0..3 {
                            lo[k] = lo[k].min(corner[k]);
                            hi[k] = hi[k].max(corner[k]);
                        }
                    }
                }
            }
        }
        (lo, hi)
    }

    /// Extract a triangle mesh of the zero level set by marching cubes over a
    /// padded bounding box. `resolution` is the cell count on the longest axis.
    pub fn to_mesh(&self, resolution: usize) -> Result<TriMesh> {
        let (lo, hi) = self.bbox();
        let pad = 2.0 * (hi - lo).norm().max(1e-3) / resolution as f64;
        let lo = lo - Vector3::repeat(pad);
        let hi = hi + Vector3::repeat(pad);
        let extent = hi - lo;
        let longest = extent.x.max(extent.y).max(extent.z);
        let res = |e: f64| (((e / longest) * resolution as f64).ceil() as usize).max(2);
        let grid = crate::SdfGrid::from_fn(
            [res(extent.x), res(extent.y), res(extent.z)],
            (lo, hi),
            |p| sdf_eval(self, &p),
        )?;
        let (mesh, _) = crate::marching_cubes(&grid, 0.0)?;
        Ok(mesh)
    }
}

/// Signed distance of `x` to the shape: negative inside, positive outside.
/// Unions combine parts with the pointwise minimum.
pub fn sdf_eval(spec: &ShapeSpec, x: &Point3) -> f64 {
    spec.parts
        .iter()
        .map(|part| part.kind.sdf_local(&part.pose.inverse_transform_point(x)))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Translation3, UnitQuaternion};

    fn sphere(r: f64) -> ShapeSpec {
        ShapeSpec::single(PrimitiveKind::Sphere { radius: r }, Isometry3::identity()).unwrap()
    }

    #[test]
    fn sphere_center_and_outside() {
        let s = sphere(0.5);
        assert_eq!(sdf_eval(&s, &Point3::origin()), -0.5);
        // ‖x‖ − r by hand: 1 − 0.5
        assert!((sdf_eval(&s, &Point3::new(1.0, 0.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn box_center() {
        let b = ShapeSpec::single(
            PrimitiveKind::Box { half_extents: [1.0, 1.0, 1.0] },
            Isometry3::identity(),
        )
        .unwrap();
        assert_eq!(sdf_eval(&b, &Point3::origin()), -1.0);
    }

    #[test]
    fn box_outside_corner_distance() {
        let b = ShapeSpec::single(
            PrimitiveKind::Box { half_extents: [0.5, 0.5, 0.5] },
            Isometry3::identity(),
        )
        .unwrap();
        let d = sdf_eval(&b, &Point3::new(1.0, 1.0, 1.0));
        assert!((d - (3.0f64).sqrt() * 0.5).abs() < 1e-12);
    }

    #[test]
    fn union_is_pointwise_min() {
        let a = PosedPrimitive {
            kind: PrimitiveKind::Sphere { radius: 0.3 },
            pose: Translation3::new(-0.5, 0.0, 0.0).into(),
        };
        let b = PosedPrimitive {
            kind: PrimitiveKind::Box { half_extents: [0.2, 0.2, 0.2] },
            pose: Translation3::new(0.5, 0.0, 0.0).into(),
        };
        let u = ShapeSpec::new(vec![a.clone(), b.clone()]).unwrap();
        let sa = ShapeSpec::new(vec![a]).unwrap();
        let sb = ShapeSpec::new(vec![b]).unwrap();
        for i in 0..50 {
            let t = i as f64 / 49.0;
            let p = Point3::new(-1.0 + 2.0 * t, 0.3 * (7.0 * t).sin(), 0.2 * (3.0 * t).cos());
            let du = sdf_eval(&u, &p);
            let dmin = sdf_eval(&sa, &p).min(sdf_eval(&sb, &p));
            assert!((du - dmin).abs() < 1e-15);
            assert!(du <= sdf_eval(&sa, &p) + 1e-15);
        }
    }

    #[test]
    fn superquadric_reduces_to_sphere() {
        let sq = ShapeSpec::single(
            PrimitiveKind::Superquadric { extents: [0.4, 0.4, 0.4], e1: 1.0, e2: 1.0 },
            Isometry3::identity(),
        )
        .unwrap();
        for p in [
            Point3::new(0.7, 0.1, -0.2),
            Point3::new(0.1, 0.0, 0.0),
            Point3::new(-0.3, 0.25, 0.33),
        ] {
            let expect = p.coords.norm() - 0.4;
            assert!((sdf_eval(&sq, &p) - expect).abs() < 1e-12, "p={p:?}");
        }
        assert!((sdf_eval(&sq, &Point3::origin()) + 0.4).abs() < 1e-12);
    }

    #[test]
    fn posed_primitive_moves_with_pose() {
        let pose = Isometry3::from_parts(
            Translation3::new(1.0, 2.0, 3.0),
            UnitQuaternion::from_euler_angles(0.3, -0.8, 1.1),
        );
        let s = ShapeSpec::single(PrimitiveKind::Sphere { radius: 0.25 }, pose).unwrap();
        // Sphere SDF is rotation invariant: distance from the translated center.
        let p = Point3::new(0.2, 1.4, 3.3);
        let expect = (p - Point3::new(1.0, 2.0, 3.0)).norm() - 0.25;
        assert!((sdf_eval(&s, &p) - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(ShapeSpec::single(
            PrimitiveKind::Sphere { radius: 0.0 },
            Isometry3::identity()
        )
        .is_err());
        assert!(ShapeSpec::single(
            PrimitiveKind::Box { half_extents: [0.1, -0.1, 0.1] },
            Isometry3::identity()
        )
        .is_err());
        assert!(ShapeSpec::new(vec![]).is_err());
    }

    #[test]
    fn bbox_contains_surface() {
        let pose = Isometry3::from_parts(
            Translation3::new(0.3, -0.2, 0.5),
            UnitQuaternion::from_euler_angles(0.5, 0.4, 0.3),
        );
        let s = ShapeSpec::single(
            PrimitiveKind::Box { half_extents: [0.3, 0.1, 0.2] },
            pose,
        )
        .unwrap();
        let (lo, hi) = s.bbox();
        // Points just outside the bbox must have positive distance.
        for k in 0..3 {
            let mut p = Point3::new(0.3, -0.2, 0.5);
            p[k] = hi[k] + 1e-6;
            assert!(sdf_eval(&s, &p) > 0.0);
            p[k] = lo[k] - 1e-6;
            assert!(sdf_eval(&s, &p) > 0.0);
        }
    }
}
