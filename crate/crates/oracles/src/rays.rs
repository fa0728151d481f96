//! Plane-then-inside ray/triangle test over every triangle, no shortcuts.

use helios_core::{Scene, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveHit {
    pub distance: f64,
    pub mesh: usize,
    pub triangle: usize,
}

/// Intersects the supporting plane, then checks the point lies on the inner
/// side of all three edges.
pub fn naive_intersect(origin: Vec3, dir: Vec3, [a, b, c]: [Vec3; 3]) -> Option<f64> {
    let n = (b - a).cross(c - a);
    let nn = n.norm();
    let denom = n.dot(dir);
    if denom.abs() <= 1e-12 * nn {
        return None;
    }
    let t = n.dot(a - origin) / denom;
    let p = origin + dir * t;
    let inside = [(a, b), (b, c), (c, a)].iter().all(|&(u, v)| (v - u).cross(p - u).dot(n) >= -1e-9 * nn);
    inside.then_some(t)
}

/// All hits farther than `min_distance`, sorted by distance.
pub fn list_hits(scene: &Scene, origin: Vec3, dir: Vec3, min_distance: f64) -> Vec<NaiveHit> {
    let mut out = Vec::new();
    for (mi, mesh) in scene.meshes.iter().enumerate() {
        for (ti, tri) in mesh.triangles.iter().enumerate() {
            let corners = tri.map(|i| mesh.vertices[i]);
            if let Some(t) = naive_intersect(origin, dir, corners) {
                if t > min_distance {
                    out.push(NaiveHit { distance: t, mesh: mi, triangle: ti });
                }
            }
        }
    }
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    out
}
