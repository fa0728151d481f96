//! Semantic scene: triangle meshes, their materials and the site they sit on.
//!
//! Scenes are exchanged as a single JSON document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "site": { "lat": 37.77, "lon": -122.42, "tz": -8, "north_offset": 0 },
//!   "materials": [
//!     { "name": "wall", "kind": "plastic",
//!       "params": { "reflectance": [0.5, 0.5, 0.5], "specularity": 0, "roughness": 0 } },
//!     { "name": "pane", "kind": "glass", "params": { "transmissivity": [0.65, 0.65, 0.65] } }
//!   ],
//!   "meshes": [
//!     { "material": "wall", "vertices": [[0,0,0],[1,0,0],[1,1,0]], "triangles": [[0,1,2]] }
//!   ]
//! }
//! ```
//!
//! Lengths are meters, angles degrees. Coordinates are right-handed with Z up;
//! +Y is project north and `north_offset` is the counterclockwise angle (seen
//! from above) from +Y to true north. Faces may list 3 or 4 vertex indices;
//! quads are split into two triangles on import.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Aabb, Vec3};
use crate::num::Real;

pub const SCHEMA_VERSION: u32 = 1;

/// Triangles smaller than this (m²) are rejected.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scene document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {found} (this build reads {expected})")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("validation error: {0}")]
    Invalid(#[from] ValidationError),
}

/// The first violated scene invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("latitude out of range: {0} not in [-90, 90]")]
    Latitude(f64),
    #[error("longitude out of range: {0} not in [-180, 180]")]
    Longitude(f64),
    #[error("timezone offset out of range: {0} not in [-14, 14]")]
    Timezone(f64),
    #[error("north offset is not finite")]
    NorthOffset,
    #[error("scene has no meshes")]
    NoMeshes,
    #[error("duplicate material name {0:?}")]
    DuplicateMaterial(String),
    #[error("material {material:?}: parameter {param} = {value} out of range [0, 1]")]
    MaterialParam { material: String, param: &'static str, value: f64 },
    #[error("mesh {mesh}: unresolved material {material:?}")]
    UnresolvedMaterial { mesh: usize, material: String },
    #[error("mesh {mesh}: vertex {vertex} is not finite")]
    NonFiniteVertex { mesh: usize, vertex: usize },
    #[error("mesh {mesh}: face {face} has {len} indices, expected 3 or 4")]
    FaceArity { mesh: usize, face: usize, len: usize },
    #[error("mesh {mesh}: triangle {triangle} index {index} out of range (vertex count {count})")]
    IndexOutOfRange { mesh: usize, triangle: usize, index: usize, count: usize },
    #[error("mesh {mesh}: triangle {triangle} is degenerate (area {area:e} m²)")]
    DegenerateTriangle { mesh: usize, triangle: usize, area: f64 },
}

/// Site location. Latitude is positive north, longitude positive east.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Site<T> {
    #[serde(rename = "lat")]
    pub latitude: T,
    #[serde(rename = "lon")]
    pub longitude: T,
    #[serde(rename = "tz")]
    pub timezone_offset_hours: T,
    #[serde(rename = "north_offset", default)]
    pub north_offset_deg: T,
}

impl<T: Real> Site<T> {
    pub fn new(latitude: T, longitude: T, timezone_offset_hours: T) -> Self {
        Self { latitude, longitude, timezone_offset_hours, north_offset_deg: T::zero() }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let in_range = |v: T, lim: f64| v.is_finite() && v.abs() <= T::lit(lim);
        if !in_range(self.latitude, 90.0) {
            return Err(ValidationError::Latitude(self.latitude.as_f64()));
        }
        if !in_range(self.longitude, 180.0) {
            return Err(ValidationError::Longitude(self.longitude.as_f64()));
        }
        if !in_range(self.timezone_offset_hours, 14.0) {
            return Err(ValidationError::Timezone(self.timezone_offset_hours.as_f64()));
        }
        if !self.north_offset_deg.is_finite() {
            return Err(ValidationError::NorthOffset);
        }
        Ok(())
    }

    pub fn is_southern(&self) -> bool {
        self.latitude < T::zero()
    }
}

/// Optical description of a surface, mirroring Radiance's primitive types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub enum MaterialKind<T> {
    Plastic { reflectance: [T; 3], specularity: T, roughness: T },
    Glass { transmissivity: [T; 3] },
    Trans { reflectance: [T; 3], specularity: T, roughness: T, transmission: T, transmitted_specularity: T },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Material<T> {
    pub name: String,
    #[serde(flatten)]
    pub kind: MaterialKind<T>,
}

impl<T: Real> Material<T> {
    pub fn plastic(name: &str, reflectance: T) -> Self {
        Self {
            name: name.to_owned(),
            kind: MaterialKind::Plastic { reflectance: [reflectance; 3], specularity: T::zero(), roughness: T::zero() },
        }
    }

    pub fn glass(name: &str, transmissivity: T) -> Self {
        Self { name: name.to_owned(), kind: MaterialKind::Glass { transmissivity: [transmissivity; 3] } }
    }

    /// Fraction of a direct beam passing straight through the surface.
    ///
    /// Plastic is opaque. Glass passes the mean transmissivity. Trans passes
    /// its specular (undiffused) transmitted part.
    pub fn beam_transmittance(&self) -> T {
        let mean = |c: &[T; 3]| (c[0] + c[1] + c[2]) / T::lit(3.0);
        match &self.kind {
            MaterialKind::Plastic { .. } => T::zero(),
            MaterialKind::Glass { transmissivity } => mean(transmissivity),
            MaterialKind::Trans { reflectance, specularity, transmission, transmitted_specularity, .. } => {
                mean(reflectance) * (T::one() - *specularity) * *transmission * *transmitted_specularity
            }
        }
    }

    /// Opaque surfaces block the direct-sun indicator; glazing does not.
    pub fn is_opaque(&self) -> bool {
        matches!(self.kind, MaterialKind::Plastic { .. })
    }

    fn validate(&self) -> Result<(), ValidationError> {
        let check = |param: &'static str, v: T| {
            if v.is_finite() && v >= T::zero() && v <= T::one() {
                Ok(())
            } else {
                Err(ValidationError::MaterialParam { material: self.name.clone(), param, value: v.as_f64() })
            }
        };
        let check_rgb = |param: &'static str, c: &[T; 3]| c.iter().try_for_each(|&v| check(param, v));
        match &self.kind {
            MaterialKind::Plastic { reflectance, specularity, roughness } => {
                check_rgb("reflectance", reflectance)?;
                check("specularity", *specularity)?;
                check("roughness", *roughness)
            }
            MaterialKind::Glass { transmissivity } => check_rgb("transmissivity", transmissivity),
            MaterialKind::Trans { reflectance, specularity, roughness, transmission, transmitted_specularity } => {
                check_rgb("reflectance", reflectance)?;
                check("specularity", *specularity)?;
                check("roughness", *roughness)?;
                check("transmission", *transmission)?;
                check("transmitted_specularity", *transmitted_specularity)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T> {
    pub material: String,
    pub vertices: Vec<Vec3<T>>,
    pub triangles: Vec<[usize; 3]>,
}

impl<T: Real> TriangleMesh<T> {
    pub fn new(material: &str, vertices: Vec<Vec3<T>>, triangles: Vec<[usize; 3]>) -> Self {
        Self { material: material.to_owned(), vertices, triangles }
    }

    pub fn triangle(&self, i: usize) -> [Vec3<T>; 3] {
        let [a, b, c] = self.triangles[i];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn translated(&self, by: Vec3<T>) -> Self {
        Self {
            material: self.material.clone(),
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            triangles: self.triangles.clone(),
        }
    }
}

pub fn triangle_area<T: Real>([a, b, c]: [Vec3<T>; 3]) -> T {
    (b - a).cross(c - a).norm() * T::lit(0.5)
}

/// A validated scene. Immutable once built; share it by reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene<T> {
    pub site: Site<T>,
    pub materials: Vec<Material<T>>,
    pub meshes: Vec<TriangleMesh<T>>,
    mesh_material: Vec<usize>,
}

impl<T: Real> Scene<T> {
    /// Builds and validates a scene; at least one mesh is required.
    pub fn new(
        site: Site<T>,
        materials: Vec<Material<T>>,
        meshes: Vec<TriangleMesh<T>>,
    ) -> Result<Self, ValidationError> {
        if meshes.is_empty() {
            site.validate()?;
            return Err(ValidationError::NoMeshes);
        }
        Self::build(site, materials, meshes)
    }

    /// A scene with no geometry: the unobstructed sky reference.
    pub fn unobstructed(site: Site<T>) -> Result<Self, ValidationError> {
        Self::build(site, Vec::new(), Vec::new())
    }

    fn build(
        site: Site<T>,
        materials: Vec<Material<T>>,
        meshes: Vec<TriangleMesh<T>>,
    ) -> Result<Self, ValidationError> {
        site.validate()?;
        let mut index = HashMap::with_capacity(materials.len());
        for (i, m) in materials.iter().enumerate() {
            if index.insert(m.name.as_str(), i).is_some() {
                return Err(ValidationError::DuplicateMaterial(m.name.clone()));
            }
            m.validate()?;
        }
        let min_area = T::lit(MIN_TRIANGLE_AREA);
        let mut mesh_material = Vec::with_capacity(meshes.len());
        for (mi, mesh) in meshes.iter().enumerate() {
            let &mat = index
                .get(mesh.material.as_str())
                .ok_or_else(|| ValidationError::UnresolvedMaterial { mesh: mi, material: mesh.material.clone() })?;
            mesh_material.push(mat);
            if let Some(vertex) = mesh.vertices.iter().position(|v| !v.is_finite()) {
                return Err(ValidationError::NonFiniteVertex { mesh: mi, vertex });
            }
            let count = mesh.vertices.len();
            for (ti, tri) in mesh.triangles.iter().enumerate() {
                if let Some(&index) = tri.iter().find(|&&i| i >= count) {
                    return Err(ValidationError::IndexOutOfRange { mesh: mi, triangle: ti, index, count });
                }
                let area = triangle_area(mesh.triangle(ti));
                #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
                if !(area > min_area) {
                    return Err(ValidationError::DegenerateTriangle { mesh: mi, triangle: ti, area: area.as_f64() });
                }
            }
        }
        Ok(Self { site, materials, meshes, mesh_material })
    }

    pub fn from_json_str(s: &str) -> Result<Self, SceneError> {
        let doc: SceneDoc<T> = serde_json::from_str(s)?;
        doc.into_scene()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&SceneDoc::from_scene(self)).expect("scene serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SceneError> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| SceneError::Io { path: path.to_owned(), source })
    }

    pub fn material_of(&self, mesh: usize) -> &Material<T> {
        &self.materials[self.mesh_material[mesh]]
    }

    pub fn material(&self, name: &str) -> Option<&Material<T>> {
        self.materials.iter().find(|m| m.name == name)
    }

    pub fn triangle_count(&self) -> usize {
        self.meshes.iter().map(|m| m.triangles.len()).sum()
    }

    /// Tight axis-aligned box around every vertex; `None` for a geometry-free scene.
    pub fn bounds(&self) -> Option<Aabb<T>> {
        Aabb::from_points(self.meshes.iter().flat_map(|m| m.vertices.iter().copied()))
    }

    pub fn translated(&self, by: Vec3<T>) -> Self {
        Self {
            site: self.site,
            materials: self.materials.clone(),
            meshes: self.meshes.iter().map(|m| m.translated(by)).collect(),
            mesh_material: self.mesh_material.clone(),
        }
    }

    /// Copy of the scene with `extra` meshes appended (materials must already exist).
    pub fn with_meshes(&self, extra: Vec<TriangleMesh<T>>) -> Result<Self, ValidationError> {
        let mut meshes = self.meshes.clone();
        meshes.extend(extra);
        Self::build(self.site, self.materials.clone(), meshes)
    }
}

/// Reads and validates a scene file.
pub fn load_scene<T: Real>(path: impl AsRef<Path>) -> Result<Scene<T>, SceneError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SceneError::Io { path: path.to_owned(), source })?;
    Scene::from_json_str(&text)
}

pub fn scene_bounds<T: Real>(scene: &Scene<T>) -> Option<Aabb<T>> {
    scene.bounds()
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct SceneDoc<T> {
    schema_version: u32,
    site: Site<T>,
    materials: Vec<Material<T>>,
    meshes: Vec<MeshDoc<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct MeshDoc<T> {
    material: String,
    vertices: Vec<Vec3<T>>,
    triangles: Vec<Vec<usize>>,
}

impl<T: Real> SceneDoc<T> {
    fn from_scene(scene: &Scene<T>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            site: scene.site,
            materials: scene.materials.clone(),
            meshes: scene
                .meshes
                .iter()
                .map(|m| MeshDoc {
                    material: m.material.clone(),
                    vertices: m.vertices.clone(),
                    triangles: m.triangles.iter().map(|t| t.to_vec()).collect(),
                })
                .collect(),
        }
    }

    fn into_scene(self) -> Result<Scene<T>, SceneError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(SceneError::SchemaVersion { found: self.schema_version, expected: SCHEMA_VERSION });
        }
        let mut meshes = Vec::with_capacity(self.meshes.len());
        for (mi, m) in self.meshes.into_iter().enumerate() {
            let mut triangles = Vec::with_capacity(m.triangles.len());
            for (face, idx) in m.triangles.iter().enumerate() {
                match idx.as_slice() {
                    &[a, b, c] => triangles.push([a, b, c]),
                    &[a, b, c, d] => {
                        triangles.push([a, b, c]);
                        triangles.push([a, c, d]);
                    }
                    other => return Err(ValidationError::FaceArity { mesh: mi, face, len: other.len() }.into()),
                }
            }
            meshes.push(TriangleMesh { material: m.material, vertices: m.vertices, triangles });
        }
        Ok(Scene::new(self.site, self.materials, meshes)?)
    }
}
