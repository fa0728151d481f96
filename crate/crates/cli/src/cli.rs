//! Command-line verbs.

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use helios_core::grid::grid_to_sensor_lines;
use helios_core::heatmap::raster;
use helios_core::sunpath::{diagram_svg, Projection, DEFAULT_STEP_MINUTES};
use helios_core::{
    build_diagram, load_scene, solar_position, CancelToken, CivilInstant, ColoredResult, DiagramOptions, GridSpec,
    HeatmapSpec, ReferenceCache, Scene, SensorGrid, Site,
};

use crate::api::{parse_triple, router};
use crate::run::{make_backend, parse_metric, simulate, BackendKind, RadianceConfig};
use crate::state::AppState;

#[derive(Debug, Parser)]
#[command(
    name = "helios",
    version,
    about = "Daylight analysis: sun positions, sun paths, sensor grids and simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a scene file and print a summary, optionally re-saving it in canonical form.
    Import {
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solar position for a site and local clock time.
    Sun {
        #[arg(long, allow_hyphen_values = true)]
        lat: f64,
        #[arg(long, allow_hyphen_values = true)]
        lon: f64,
        /// Standard-time offset from UTC in hours.
        #[arg(long, allow_hyphen_values = true)]
        tz: f64,
        /// YYYY-MM-DD
        #[arg(long)]
        date: String,
        /// HH:MM
        #[arg(long)]
        time: String,
        #[arg(long)]
        json: bool,
    },
    /// Sun-path diagram as JSON or SVG.
    Sunpath {
        #[arg(long)]
        scene: PathBuf,
        /// x,y,z
        #[arg(long, allow_hyphen_values = true)]
        observer: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 2026)]
        year: i32,
        /// Only the eleven listed days, no April arc.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_STEP_MINUTES)]
        step: u32,
        /// Write an SVG plot instead of JSON.
        #[arg(long, value_enum)]
        svg: Option<SvgProjection>,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sensor grid in rtrace point format.
    Grid {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Daylight factor or point-in-time illuminance over a grid.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        /// df or illuminance
        #[arg(long)]
        metric: String,
        #[arg(long, default_value = "oracle")]
        backend: BackendKind,
        /// Ambient bounces for the Radiance backend.
        #[arg(long, default_value_t = 2)]
        ab: u32,
        #[command(flatten)]
        grid: GridArgs,
        /// YYYY-MM-DD, defaults to June 21 of the current year.
        #[arg(long)]
        date: Option<String>,
        #[arg(long, default_value = "12:00")]
        time: String,
        #[command(flatten)]
        radiance: RadianceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PNG heatmap from a result written by `simulate`.
    Heatmap {
        result: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mid: Option<f64>,
        /// Pixels per sensor along each axis.
        #[arg(long, default_value_t = 8)]
        block: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Local HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        scene: Option<PathBuf>,
        #[command(flatten)]
        radiance: RadianceArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SvgProjection {
    Equidistant,
    Stereographic,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// x,y
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
    #[arg(long, default_value_t = 0.8)]
    pub height: f64,
    /// WxD
    #[arg(long)]
    pub size: String,
    /// sx,sy or a single value for both
    #[arg(long)]
    pub spacing: String,
}

#[derive(Debug, Args)]
pub struct RadianceArgs {
    /// Radiance bin directory; otherwise $HELIOS_RADIANCE_BIN, PATH and standard prefixes are searched.
    #[arg(long)]
    pub radiance_bin: Option<PathBuf>,
    /// Parent for per-job working directories.
    #[arg(long)]
    pub workdir: Option<PathBuf>,
}

impl From<&RadianceArgs> for RadianceConfig {
    fn from(a: &RadianceArgs) -> Self {
        Self { bin: a.radiance_bin.clone(), work_root: a.workdir.clone() }
    }
}

fn parse_list(s: &str, sep: char, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(sep)
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("{what}: cannot parse {s:?}"))?;
    if v.len() != n {
        bail!("{what}: expected {n} values separated by '{sep}', got {s:?}");
    }
    Ok(v)
}

impl GridArgs {
    pub fn spec(&self) -> Result<GridSpec> {
        let center = parse_list(&self.center, ',', 2, "--center")?;
        let size = parse_list(&self.size.to_ascii_lowercase(), 'x', 2, "--size")?;
        let spacing = match parse_list(&self.spacing, ',', 1, "--spacing") {
            Ok(one) => vec![one[0], one[0]],
            Err(_) => parse_list(&self.spacing, ',', 2, "--spacing")?,
        };
        Ok(GridSpec {
            center: [center[0], center[1]],
            height: self.height,
            size: [size[0], size[1]],
            spacing: [spacing[0], spacing[1]],
        })
    }
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(bytes).context("writing to stdout"),
    }
}

fn default_instant(date: Option<&str>, time: &str) -> Result<CivilInstant> {
    let date = match date {
        Some(d) => d.to_owned(),
        None => {
            use chrono::Datelike;
            format!("{}-06-21", chrono::Local::now().year())
        }
    };
    Ok(CivilInstant::parse(&date, time)?)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Import { scene, out } => {
            let scene: Scene = load_scene(&scene)?;
            let b = scene.bounds();
            println!(
                "{} meshes, {} triangles, {} materials, site lat {} lon {} tz {} north offset {}",
                scene.meshes.len(),
                scene.triangle_count(),
                scene.materials.len(),
                scene.site.latitude,
                scene.site.longitude,
                scene.site.timezone_offset_hours,
                scene.site.north_offset_deg
            );
            if let Some(b) = b {
                println!("bounds [{}, {}, {}] .. [{}, {}, {}]", b.min.x, b.min.y, b.min.z, b.max.x, b.max.y, b.max.z);
            }
            if let Some(out) = out {
                scene.save(&out)?;
            }
            Ok(())
        }
        Command::Sun { lat, lon, tz, date, time, json } => {
            let site = Site::new(lat, lon, tz);
            site.validate()?;
            let t = CivilInstant::parse(&date, &time)?;
            let p = solar_position(&site, &t);
            if json {
                println!("{}", serde_json::to_string_pretty(&p)?);
            } else {
                println!("altitude     {:9.4} deg", p.altitude_deg);
                println!("azimuth      {:9.4} deg", p.azimuth_deg);
                println!("zenith       {:9.4} deg", p.zenith_deg);
                println!("declination  {:9.4} deg", p.declination_deg);
                println!("eq. of time  {:9.4} min", p.equation_of_time_min);
            }
            Ok(())
        }
        Command::Sunpath { scene, observer, radius, year, strict, step, svg, size, out } => {
            let scene: Scene = load_scene(&scene)?;
            let observer =
                parse_triple(&observer).ok_or_else(|| anyhow!("--observer: expected x,y,z, got {observer:?}"))?;
            let options = DiagramOptions { year, strict, step_minutes: step };
            let diagram = build_diagram(&scene, observer, radius, &options)?;
            let text = match svg {
                Some(p) => {
                    let projection = match p {
                        SvgProjection::Equidistant => Projection::Equidistant,
                        SvgProjection::Stereographic => Projection::Stereographic,
                    };
                    diagram_svg(&diagram, size, projection)
                }
                None => serde_json::to_string_pretty(&diagram)? + "\n",
            };
            write_out(out.as_deref(), text.as_bytes())
        }
        Command::Grid { grid, json, out } => {
            let grid = SensorGrid::from_spec(&grid.spec()?)?;
            let text = if json { serde_json::to_string_pretty(&grid)? + "\n" } else { grid_to_sensor_lines(&grid) };
            eprintln!("{} sensors ({} x {})", grid.len(), grid.count_x, grid.count_y);
            write_out(out.as_deref(), text.as_bytes())
        }
        Command::Simulate { scene, metric, backend, ab, grid, date, time, radiance, out } => {
            let metric = parse_metric(&metric).map_err(|m| anyhow!(m))?;
            let scene: Scene = load_scene(&scene)?;
            let grid = SensorGrid::from_spec(&grid.spec()?)?;
            let instant = default_instant(date.as_deref(), &time)?;
            let backend = make_backend(backend, ab, &RadianceConfig::from(&radiance))?;
            let result = simulate(
                backend.as_ref(),
                &scene,
                &grid,
                metric,
                instant,
                &ReferenceCache::new(),
                &CancelToken::new(),
            )?;
            let colored = ColoredResult::new(&result, HeatmapSpec::default_for(metric, &result.values));
            write_out(out.as_deref(), (serde_json::to_string_pretty(&colored)? + "\n").as_bytes())
        }
        Command::Heatmap { result, min, max, mid, block, out } => {
            let text = fs::read_to_string(&result).with_context(|| format!("reading {}", result.display()))?;
            let colored: ColoredResult<f64> = serde_json::from_str(&text).context("parsing result JSON")?;
            let spec = match (min, max) {
                (Some(lo), Some(hi)) => match mid {
                    Some(m) => HeatmapSpec::with_mid(lo, m, hi)?,
                    None => HeatmapSpec::new(lo, hi)?,
                },
                (None, None) if mid.is_none() => colored.spec,
                _ => bail!("--min and --max must be given together"),
            };
            let colors: Vec<_> = colored.values.iter().map(|&v| spec.color(v)).collect();
            write_png(&out, colored.grid.count_x, colored.grid.count_y, &colors, block)
        }
        Command::Serve { port, host, scene, radiance } => {
            let scene: Option<Scene> = scene.map(load_scene).transpose()?;
            let addr: SocketAddr =
                format!("{host}:{port}").parse().with_context(|| format!("bad address {host}:{port}"))?;
            let state = Arc::new(AppState::with_scene(scene, RadianceConfig::from(&radiance)));
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(state, addr))
        }
    }
}

pub fn write_png(
    path: &Path,
    count_x: usize,
    count_y: usize,
    colors: &[helios_core::Rgb8],
    block: usize,
) -> Result<()> {
    if colors.len() != count_x * count_y {
        bail!("result has {} values for a {count_x} x {count_y} grid", colors.len());
    }
    let (w, h, pixels) = raster(count_x, count_y, colors, block);
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut encoder = png::Encoder::new(io::BufWriter::new(file), w as u32, h as u32);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    encoder.write_header()?.write_image_data(&pixels)?;
    Ok(())
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
