//! Reference scenes used by tests, the acceptance suite and the CLI demos.

use crate::geometry::Vec3;
use crate::num::Real;
use crate::scene::{Material, Scene, Site, TriangleMesh};

/// San Francisco, fixed UTC-8.
pub fn san_francisco<T: Real>() -> Site<T> {
    Site::new(T::lit(37.77), T::lit(-122.42), T::lit(-8.0))
}

/// Accumulates planar quads into one mesh.
#[derive(Debug, Clone)]
pub struct MeshBuilder<T> {
    material: String,
    vertices: Vec<Vec3<T>>,
    triangles: Vec<[usize; 3]>,
}

impl<T: Real> MeshBuilder<T> {
    pub fn new(material: &str) -> Self {
        Self { material: material.to_owned(), vertices: Vec::new(), triangles: Vec::new() }
    }

    pub fn quad(mut self, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, d: Vec3<T>) -> Self {
        let base = self.vertices.len();
        self.vertices.extend([a, b, c, d]);
        self.triangles.push([base, base + 1, base + 2]);
        self.triangles.push([base, base + 2, base + 3]);
        self
    }

    /// Axis-aligned rectangle on the plane `y = at` spanning x and z ranges.
    pub fn xz_rect(self, at: T, x: (T, T), z: (T, T)) -> Self {
        self.quad(Vec3::new(x.0, at, z.0), Vec3::new(x.1, at, z.0), Vec3::new(x.1, at, z.1), Vec3::new(x.0, at, z.1))
    }

    pub fn yz_rect(self, at: T, y: (T, T), z: (T, T)) -> Self {
        self.quad(Vec3::new(at, y.0, z.0), Vec3::new(at, y.1, z.0), Vec3::new(at, y.1, z.1), Vec3::new(at, y.0, z.1))
    }

    pub fn xy_rect(self, at: T, x: (T, T), y: (T, T)) -> Self {
        self.quad(Vec3::new(x.0, y.0, at), Vec3::new(x.1, y.0, at), Vec3::new(x.1, y.1, at), Vec3::new(x.0, y.1, at))
    }

    /// Rectangle on `y = at` over `outer` minus the `hole` rectangle.
    pub fn xz_rect_with_hole(self, at: T, outer: ((T, T), (T, T)), hole: ((T, T), (T, T))) -> Self {
        let ((x0, x1), (z0, z1)) = outer;
        let ((hx0, hx1), (hz0, hz1)) = hole;
        self.xz_rect(at, (x0, hx0), (z0, z1))
            .xz_rect(at, (hx1, x1), (z0, z1))
            .xz_rect(at, (hx0, hx1), (z0, hz0))
            .xz_rect(at, (hx0, hx1), (hz1, z1))
    }

    /// Rectangle on `z = at` over `outer` minus the `hole` rectangle.
    pub fn xy_rect_with_hole(self, at: T, outer: ((T, T), (T, T)), hole: ((T, T), (T, T))) -> Self {
        let ((x0, x1), (y0, y1)) = outer;
        let ((hx0, hx1), (hy0, hy1)) = hole;
        self.xy_rect(at, (x0, hx0), (y0, y1))
            .xy_rect(at, (hx1, x1), (y0, y1))
            .xy_rect(at, (hx0, hx1), (y0, hy0))
            .xy_rect(at, (hx0, hx1), (hy1, y1))
    }

    /// Closed box with outward-facing triangles.
    pub fn cuboid(self, min: Vec3<T>, max: Vec3<T>) -> Self {
        let c = |x: bool, y: bool, z: bool| {
            Vec3::new(if x { max.x } else { min.x }, if y { max.y } else { min.y }, if z { max.z } else { min.z })
        };
        let (f, t) = (false, true);
        self.quad(c(f, f, f), c(f, t, f), c(t, t, f), c(t, f, f))
            .quad(c(f, f, t), c(t, f, t), c(t, t, t), c(f, t, t))
            .quad(c(f, f, f), c(t, f, f), c(t, f, t), c(f, f, t))
            .quad(c(f, t, f), c(f, t, t), c(t, t, t), c(t, t, f))
            .quad(c(f, f, f), c(f, f, t), c(f, t, t), c(f, t, f))
            .quad(c(t, f, f), c(t, t, f), c(t, t, t), c(t, f, t))
    }

    pub fn build(self) -> TriangleMesh<T> {
        TriangleMesh { material: self.material, vertices: self.vertices, triangles: self.triangles }
    }
}

pub fn box_mesh<T: Real>(material: &str, min: Vec3<T>, max: Vec3<T>) -> TriangleMesh<T> {
    MeshBuilder::new(material).cuboid(min, max).build()
}

/// Closed opaque box (material "wall", reflectance 0.5).
pub fn sealed_box<T: Real>(min: Vec3<T>, max: Vec3<T>) -> Scene<T> {
    Scene::new(san_francisco(), vec![Material::plastic("wall", T::lit(0.5))], vec![box_mesh("wall", min, max)])
        .expect("valid fixture")
}

/// Unit cube room at the origin with one glazed opening in its south face.
pub fn unit_room_with_window<T: Real>() -> Scene<T> {
    let l = T::lit;
    let room = MeshBuilder::new("wall")
        .xy_rect(l(0.0), (l(0.0), l(1.0)), (l(0.0), l(1.0)))
        .xy_rect(l(1.0), (l(0.0), l(1.0)), (l(0.0), l(1.0)))
        .yz_rect(l(0.0), (l(0.0), l(1.0)), (l(0.0), l(1.0)))
        .yz_rect(l(1.0), (l(0.0), l(1.0)), (l(0.0), l(1.0)))
        .xz_rect(l(1.0), (l(0.0), l(1.0)), (l(0.0), l(1.0)))
        .xz_rect_with_hole(l(0.0), ((l(0.0), l(1.0)), (l(0.0), l(1.0))), ((l(0.2), l(0.8)), (l(0.3), l(0.8))))
        .build();
    let pane = MeshBuilder::new("pane").xz_rect(l(0.0), (l(0.2), l(0.8)), (l(0.3), l(0.8))).build();
    Scene::new(
        san_francisco(),
        vec![Material::plastic("wall", l(0.5)), Material::glass("pane", l(0.65))],
        vec![room, pane],
    )
    .expect("valid fixture")
}

/// Dimensions of [`windowed_room`].
pub mod windowed {
    pub const WIDTH: f64 = 6.0;
    pub const DEPTH: f64 = 8.0;
    pub const HEIGHT: f64 = 3.0;
    pub const SILL: f64 = 0.9;
    pub const HEAD: f64 = 2.4;
    pub const WINDOW_X: (f64, f64) = (1.0, 5.0);
    pub const OVERHANG_DEPTH: f64 = 1.0;
    pub const GLASS: f64 = 0.65;
}

/// 6 m × 8 m × 3 m room with a single glazed window in its south wall
/// (`y = 0`) shaded by a 1 m overhang at head height.
pub fn windowed_room<T: Real>() -> Scene<T> {
    use windowed::*;
    let l = T::lit;
    let (w, d, h) = (l(WIDTH), l(DEPTH), l(HEIGHT));
    let zero = T::zero();
    let hole = ((l(WINDOW_X.0), l(WINDOW_X.1)), (l(SILL), l(HEAD)));
    let shell = MeshBuilder::new("wall")
        .xy_rect(zero, (zero, w), (zero, d))
        .xy_rect(h, (zero, w), (zero, d))
        .yz_rect(zero, (zero, d), (zero, h))
        .yz_rect(w, (zero, d), (zero, h))
        .xz_rect(d, (zero, w), (zero, h))
        .xz_rect_with_hole(zero, ((zero, w), (zero, h)), hole)
        .build();
    let overhang = MeshBuilder::new("wall")
        .xy_rect(l(HEAD + 0.05), (l(WINDOW_X.0 - 0.5), l(WINDOW_X.1 + 0.5)), (l(-OVERHANG_DEPTH), zero))
        .build();
    let pane = MeshBuilder::new("glazing").xz_rect(zero, hole.0, hole.1).build();
    Scene::new(
        san_francisco(),
        vec![Material::plastic("wall", l(0.5)), Material::glass("glazing", l(GLASS))],
        vec![shell, overhang, pane],
    )
    .expect("valid fixture")
}

/// Dimensions of [`pool_hall`].
pub mod hall {
    pub const WIDTH: f64 = 25.0;
    pub const DEPTH: f64 = 40.0;
    pub const HEIGHT: f64 = 8.0;
    /// Skylight strip along the hall's long axis.
    pub const SKYLIGHT_X: (f64, f64) = (11.0, 14.0);
    pub const SKYLIGHT_Y: (f64, f64) = (4.0, 36.0);
    pub const GLASS: f64 = 0.7;
}

/// 25 m × 40 m hall with a glazed roof strip.
pub fn pool_hall<T: Real>() -> Scene<T> {
    use hall::*;
    let l = T::lit;
    let (w, d, h) = (l(WIDTH), l(DEPTH), l(HEIGHT));
    let zero = T::zero();
    let sky = ((l(SKYLIGHT_X.0), l(SKYLIGHT_X.1)), (l(SKYLIGHT_Y.0), l(SKYLIGHT_Y.1)));
    let shell = MeshBuilder::new("wall")
        .xy_rect(zero, (zero, w), (zero, d))
        .xy_rect_with_hole(h, ((zero, w), (zero, d)), sky)
        .yz_rect(zero, (zero, d), (zero, h))
        .yz_rect(w, (zero, d), (zero, h))
        .xz_rect(zero, (zero, w), (zero, h))
        .xz_rect(d, (zero, w), (zero, h))
        .build();
    let skylight = MeshBuilder::new("glazing").xy_rect(h, sky.0, sky.1).build();
    Scene::new(
        san_francisco(),
        vec![Material::plastic("wall", l(0.5)), Material::glass("glazing", l(GLASS))],
        vec![shell, skylight],
    )
    .expect("valid fixture")
}
