//! Radiance scene description: materials, polygons and a `gensky` sky.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use helios_core::metrics::LUMINOUS_EFFICACY;
use helios_core::num::Real;
use helios_core::scene::{MaterialKind, Scene};
use helios_core::sky::{DirectNormalModel, SkyError, SkyKind, SkyModel};
use thiserror::Error;

use crate::format::push_g;

pub const MATERIALS_FILE: &str = "materials.rad";
pub const GEOMETRY_FILE: &str = "geometry.rad";
pub const SKY_FILE: &str = "sky.rad";

/// Modifier names defined by the sky file. Scene materials may not reuse them.
pub const RESERVED_NAMES: [&str; 6] = ["void", "solar", "skyfunc", "sky_glow", "ground_glow", "sun"];

const SKY_GLOW: &str = "\
skyfunc glow sky_glow
0
0
4 1 1 1 0

sky_glow source sky
0
0
4 0 0 1 180

skyfunc glow ground_glow
0
0
4 1 1 1 0

ground_glow source ground
0
0
4 0 0 -1 180
";

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Sky(#[from] SkyError),
    #[error("material name {0:?} is not a usable Radiance identifier")]
    MaterialName(String),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// The three text files handed to `oconv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadianceFiles {
    pub materials: String,
    pub geometry: String,
    pub sky: String,
}

/// Paths of [`RadianceFiles`] once written, in `oconv` argument order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFiles {
    pub materials: PathBuf,
    pub sky: PathBuf,
    pub geometry: PathBuf,
}

impl RadianceFiles {
    pub fn write_to(&self, dir: &Path) -> Result<WrittenFiles, EmitError> {
        let write = |name: &str, text: &str| -> Result<PathBuf, EmitError> {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|source| EmitError::Io { path: path.clone(), source })?;
            Ok(path)
        };
        Ok(WrittenFiles {
            materials: write(MATERIALS_FILE, &self.materials)?,
            sky: write(SKY_FILE, &self.sky)?,
            geometry: write(GEOMETRY_FILE, &self.geometry)?,
        })
    }
}

pub fn emit_radiance_files<T: Real>(scene: &Scene<T>, sky: &SkyModel<T>) -> Result<RadianceFiles, EmitError> {
    Ok(RadianceFiles { materials: materials_rad(scene)?, geometry: geometry_rad(scene), sky: sky_rad(sky)? })
}

fn check_name(name: &str) -> Result<(), EmitError> {
    let usable = !name.is_empty() && name.chars().all(|c| c.is_ascii_graphic()) && !RESERVED_NAMES.contains(&name);
    if usable {
        Ok(())
    } else {
        Err(EmitError::MaterialName(name.to_owned()))
    }
}

fn push_args<T: Real>(out: &mut String, values: &[T]) {
    push_g(out, values.len() as f64);
    for v in values {
        out.push(' ');
        push_g(out, v.as_f64());
    }
    out.push('\n');
}

/// One primitive per material, in table order.
pub fn materials_rad<T: Real>(scene: &Scene<T>) -> Result<String, EmitError> {
    let mut out = String::new();
    for (i, m) in scene.materials.iter().enumerate() {
        check_name(&m.name)?;
        if i > 0 {
            out.push('\n');
        }
        let (kind, args): (&str, Vec<T>) = match &m.kind {
            MaterialKind::Plastic { reflectance: [r, g, b], specularity, roughness } => {
                ("plastic", vec![*r, *g, *b, *specularity, *roughness])
            }
            MaterialKind::Glass { transmissivity } => ("glass", transmissivity.to_vec()),
            MaterialKind::Trans {
                reflectance: [r, g, b],
                specularity,
                roughness,
                transmission,
                transmitted_specularity,
            } => ("trans", vec![*r, *g, *b, *specularity, *roughness, *transmission, *transmitted_specularity]),
        };
        out.push_str(&format!("void {kind} {}\n0\n0\n", m.name));
        push_args(&mut out, &args);
    }
    Ok(out)
}

/// Every triangle as a `polygon` named `m<mesh>_t<triangle>`.
pub fn geometry_rad<T: Real>(scene: &Scene<T>) -> String {
    let mut out = String::new();
    for (i, mesh) in scene.meshes.iter().enumerate() {
        for j in 0..mesh.triangles.len() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("{} polygon m{i}_t{j}\n0\n0\n", mesh.material));
            let coords: Vec<T> = mesh.triangle(j).iter().flat_map(|v| [v.x, v.y, v.z]).collect();
            push_args(&mut out, &coords);
        }
    }
    out
}

/// The `gensky` argument list after the program name.
///
/// Longitude and meridian flip to Radiance's west-positive convention. Zenith
/// brightness is passed explicitly so both backends see the same sky; the
/// clear sky also fixes the horizontal direct irradiance from the shared
/// direct-normal model.
pub fn gensky_args<T: Real>(sky: &SkyModel<T>) -> Result<String, SkyError> {
    sky.validate()?;
    let t = sky.instant;
    let site = &sky.site;
    let mut out = format!("{} {} {:.3} -a ", t.month(), t.day(), t.hours::<f64>());
    push_g(&mut out, site.latitude.as_f64());
    out.push_str(" -o ");
    push_g(&mut out, -site.longitude.as_f64());
    out.push_str(" -m ");
    push_g(&mut out, -15.0 * site.timezone_offset_hours.as_f64());
    match sky.kind {
        SkyKind::CieOvercast => out.push_str(" -c"),
        SkyKind::CieClear => out.push_str(" +s"),
    }
    out.push_str(" -b ");
    push_g(&mut out, sky.zenith_luminance().as_f64() / LUMINOUS_EFFICACY);
    if sky.kind == SkyKind::CieClear {
        let alt = sky.sun().altitude_deg.as_f64();
        let horizontal = DirectNormalModel::<f64>::default().eval(alt) * alt.to_radians().sin();
        out.push_str(" -R ");
        push_g(&mut out, horizontal / LUMINOUS_EFFICACY);
    }
    out.push_str(" -g ");
    push_g(&mut out, sky.ground_reflectance.as_f64());
    Ok(out)
}

/// Sky description: a `gensky` command (rotated into model coordinates when
/// the site has a north offset) followed by sky and ground glow hemispheres.
pub fn sky_rad<T: Real>(sky: &SkyModel<T>) -> Result<String, SkyError> {
    let mut out = format!("!gensky {}", gensky_args(sky)?);
    let offset = sky.site.north_offset_deg.as_f64();
    if offset != 0.0 {
        out.push_str(" | xform -rz ");
        push_g(&mut out, offset);
    }
    out.push_str("\n\n");
    out.push_str(SKY_GLOW);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use helios_core::fixtures::{san_francisco, unit_room_with_window};
    use helios_core::{CivilInstant, Material, Site};

    fn noon() -> CivilInstant {
        CivilInstant::new(2026, 6, 21, 12, 0).unwrap()
    }

    #[test]
    fn plastic_line_is_exact() {
        let scene: Scene<f64> = unit_room_with_window();
        let text = materials_rad(&scene).unwrap();
        let name = &scene.materials.iter().find(|m| m.is_opaque()).unwrap().name;
        assert!(text.contains(&format!("void plastic {name}\n0\n0\n5 0.5 0.5 0.5 0 0\n")), "{text}");
    }

    #[test]
    fn glass_and_trans_argument_counts() {
        let mut scene: Scene<f64> = unit_room_with_window();
        scene.materials.push(Material {
            name: "frosted".into(),
            kind: MaterialKind::Trans {
                reflectance: [0.6, 0.6, 0.6],
                specularity: 0.0,
                roughness: 0.0,
                transmission: 0.3,
                transmitted_specularity: 0.1,
            },
        });
        let text = materials_rad(&scene).unwrap();
        assert!(text.contains("void glass pane\n0\n0\n3 0.65 0.65 0.65\n"), "{text}");
        assert!(text.ends_with("void trans frosted\n0\n0\n7 0.6 0.6 0.6 0 0 0.3 0.1\n"), "{text}");
    }

    #[test]
    fn polygon_per_triangle() {
        let scene: Scene<f64> = unit_room_with_window();
        let text = geometry_rad(&scene);
        assert_eq!(text.matches(" polygon ").count(), scene.triangle_count());
        assert!(text.starts_with(&format!("{} polygon m0_t0\n0\n0\n9 ", scene.meshes[0].material)));
    }

    #[test]
    fn bad_names_are_rejected() {
        let mut scene: Scene<f64> = unit_room_with_window();
        for bad in ["two words", "skyfunc", ""] {
            scene.materials[0].name = bad.into();
            assert!(matches!(materials_rad(&scene), Err(EmitError::MaterialName(_))), "{bad:?}");
        }
    }

    #[test]
    fn clear_sky_command_line() {
        let sky = SkyModel::<f64>::clear(san_francisco(), noon());
        let args = gensky_args(&sky).unwrap();
        assert!(args.starts_with("6 21 12.000 -a 37.77 -o 122.42 -m 120 +s -b "), "{args}");
        assert!(args.contains(" -R ") && args.ends_with(" -g 0.2"));
        assert!(!args.contains("-c"));
    }

    #[test]
    fn overcast_sky_has_no_sun() {
        let sky = SkyModel::<f64>::overcast(san_francisco(), CivilInstant::new(2026, 12, 22, 0, 30).unwrap());
        let text = sky_rad(&sky).unwrap();
        assert!(text.starts_with("!gensky 12 22 0.500 -a 37.77 -o 122.42 -m 120 -c -b "), "{text}");
        assert!(!text.contains("+s") && !text.contains("-R"));
        assert!(text.contains("sky_glow source sky") && text.contains("ground_glow source ground"));
    }

    #[test]
    fn southern_east_site_and_north_offset() {
        let mut site: Site = Site::new(-33.9, 151.2, 10.0);
        site.north_offset_deg = 30.0;
        let args = sky_rad(&SkyModel::overcast(site, noon())).unwrap();
        assert!(args.contains("-a -33.9 -o -151.2 -m -150 -c"), "{args}");
        assert!(args.lines().next().unwrap().ends_with("| xform -rz 30"));
    }

    #[test]
    fn night_clear_sky_is_an_error() {
        let sky = SkyModel::<f64>::clear(san_francisco(), CivilInstant::new(2026, 6, 21, 1, 0).unwrap());
        assert!(matches!(sky_rad(&sky), Err(SkyError::SunBelowHorizon { .. })));
    }
}
