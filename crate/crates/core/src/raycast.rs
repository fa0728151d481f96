//! Ray queries against scene triangles.
//!
//! A linear scan over every triangle; scenes at desk scale are small enough
//! that no acceleration structure is needed.

use serde::Serialize;

use crate::geometry::Vec3;
use crate::num::Real;
use crate::scene::{MaterialKind, Scene};

/// Hits closer than this (meters) are ignored so rays can start on surfaces.
pub const MIN_HIT_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Plastic,
    Glass,
    Trans,
}

impl<T> From<&MaterialKind<T>> for SurfaceKind {
    fn from(k: &MaterialKind<T>) -> Self {
        match k {
            MaterialKind::Plastic { .. } => SurfaceKind::Plastic,
            MaterialKind::Glass { .. } => SurfaceKind::Glass,
            MaterialKind::Trans { .. } => SurfaceKind::Trans,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit<T> {
    pub distance: T,
    pub kind: SurfaceKind,
    pub mesh: usize,
    pub triangle: usize,
}

/// Möller–Trumbore ray/triangle test, two-sided. Returns the ray parameter.
pub fn intersect_triangle<T: Real>(origin: Vec3<T>, dir: Vec3<T>, [a, b, c]: [Vec3<T>; 3]) -> Option<T> {
    let e1 = b - a;
    let e2 = c - a;
    let p = dir.cross(e2);
    let det = e1.dot(p);
    // Parallel rays are rejected relative to the triangle's own scale.
    let scale = e1.norm() * e2.norm();
    if det.abs() <= T::epsilon() * scale {
        return None;
    }
    let inv = T::one() / det;
    // Barycentric slack keeps shared edges watertight under rounding.
    let slack = T::epsilon() * T::lit(64.0);
    let s = origin - a;
    let u = s.dot(p) * inv;
    if u < -slack || u > T::one() + slack {
        return None;
    }
    let q = s.cross(e1);
    let v = dir.dot(q) * inv;
    if v < -slack || u + v > T::one() + slack {
        return None;
    }
    Some(e2.dot(q) * inv)
}

/// Every intersection farther than [`MIN_HIT_DISTANCE`], nearest first.
pub fn ray_hits<T: Real>(scene: &Scene<T>, origin: Vec3<T>, dir: Vec3<T>) -> Vec<Hit<T>> {
    let eps = T::lit(MIN_HIT_DISTANCE);
    let mut hits = Vec::new();
    for (mi, mesh) in scene.meshes.iter().enumerate() {
        let kind = SurfaceKind::from(&scene.material_of(mi).kind);
        for ti in 0..mesh.triangles.len() {
            if let Some(t) = intersect_triangle(origin, dir, mesh.triangle(ti)) {
                if t > eps {
                    hits.push(Hit { distance: t, kind, mesh: mi, triangle: ti });
                }
            }
        }
    }
    hits.sort_by(|a, b| a.distance.partial_cmp(&b.distance).expect("finite distances"));
    hits
}

/// Fraction of a beam leaving `origin` along `dir` that escapes the scene:
/// zero once any opaque surface is crossed, otherwise the product of the
/// crossed glazing transmittances. Coincident hits on one mesh (a ray through
/// a shared triangle edge) count once.
pub fn beam_transmission<T: Real>(scene: &Scene<T>, origin: Vec3<T>, dir: Vec3<T>) -> T {
    let eps = T::lit(MIN_HIT_DISTANCE);
    let mut glazing: Vec<(usize, T)> = Vec::new();
    for (mi, mesh) in scene.meshes.iter().enumerate() {
        let opaque = scene.material_of(mi).is_opaque();
        for ti in 0..mesh.triangles.len() {
            if let Some(t) = intersect_triangle(origin, dir, mesh.triangle(ti)) {
                if t > eps {
                    if opaque {
                        return T::zero();
                    }
                    glazing.push((mi, t));
                }
            }
        }
    }
    glazing.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).expect("finite distances"));
    glazing.dedup_by(|b, a| a.0 == b.0 && (b.1 - a.1).abs() <= eps);
    glazing.iter().fold(T::one(), |tau, &(mi, _)| tau * scene.material_of(mi).beam_transmittance())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Visible,
    Blocked,
    BelowHorizon,
}

/// Direct-sun indicator from `observer` towards a unit `sun_direction`.
/// Glazing counts as transparent; any opaque hit blocks.
pub fn classify_visibility<T: Real>(scene: &Scene<T>, observer: Vec3<T>, sun_direction: Vec3<T>) -> Visibility {
    if sun_direction.z < T::zero() {
        return Visibility::BelowHorizon;
    }
    let eps = T::lit(MIN_HIT_DISTANCE);
    let blocked = scene.meshes.iter().enumerate().any(|(mi, mesh)| {
        scene.material_of(mi).is_opaque()
            && (0..mesh.triangles.len())
                .any(|ti| intersect_triangle(observer, sun_direction, mesh.triangle(ti)).is_some_and(|t| t > eps))
    });
    if blocked {
        Visibility::Blocked
    } else {
        Visibility::Visible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, MeshBuilder};
    use crate::scene::{Material, Scene};

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn hits_cube_face_at_plane_distance() {
        let s = fixtures::sealed_box(v(0.0, 0.0, 0.0), v(1.0, 1.0, 1.0));
        let hits = ray_hits(&s, v(0.3, 0.6, -2.0), v(0.0, 0.0, 1.0));
        assert_eq!(hits.len(), 2);
        assert!((hits[0].distance - 2.0).abs() < 1e-12);
        assert!((hits[1].distance - 3.0).abs() < 1e-12);
        assert_eq!(hits[0].kind, SurfaceKind::Plastic);
    }

    #[test]
    fn parallel_ray_misses() {
        let s = fixtures::sealed_box(v(0.0, 0.0, 0.0), v(1.0, 1.0, 1.0));
        assert!(ray_hits(&s, v(-1.0, 0.5, 2.0), v(1.0, 0.0, 0.0)).is_empty());
        assert!(intersect_triangle(
            v(0.0, 0.0, 1.0),
            v(1.0, 0.0, 0.0),
            [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)]
        )
        .is_none());
    }

    #[test]
    fn visibility_cases() {
        let s = fixtures::sealed_box(v(0.0, 0.0, 0.0), v(1.0, 1.0, 1.0));
        assert_eq!(classify_visibility(&s, v(0.5, 0.5, 0.5), v(0.0, 0.0, -1.0)), Visibility::BelowHorizon);
        assert_eq!(classify_visibility(&s, v(0.5, 0.5, 0.5), v(0.0, 0.0, 1.0)), Visibility::Blocked);
        assert_eq!(classify_visibility(&s, v(5.0, 5.0, 0.5), v(0.0, 0.0, 1.0)), Visibility::Visible);
    }

    #[test]
    fn single_glass_pane_does_not_block() {
        let pane = MeshBuilder::new("g").xy_rect(2.0, (-1.0, 1.0), (-1.0, 1.0)).build();
        let s = Scene::new(fixtures::san_francisco(), vec![Material::glass("g", 0.65)], vec![pane]).unwrap();
        let up = v(0.0, 0.0, 1.0);
        let hits = ray_hits(&s, Vec3::zero(), up);
        assert_eq!(hits.len(), 2, "pane is two triangles, ray crosses their shared diagonal");
        assert!(hits.iter().all(|h| h.kind == SurfaceKind::Glass));
        assert!((beam_transmission(&s, Vec3::zero(), up) - 0.65).abs() < 1e-12);
        assert_eq!(classify_visibility(&s, Vec3::zero(), up), Visibility::Visible);
        let off = v(0.3, -0.2, 0.0);
        assert_eq!(ray_hits(&s, off, up).len(), 1);
        assert!((beam_transmission(&s, off, up) - 0.65).abs() < 1e-12);
    }

    #[test]
    fn ignores_hits_at_origin() {
        let s = fixtures::sealed_box(v(0.0, 0.0, 0.0), v(1.0, 1.0, 1.0));
        let hits = ray_hits(&s, v(0.5, 0.5, 1.0), v(0.0, 0.0, 1.0));
        assert!(hits.is_empty());
    }
}
