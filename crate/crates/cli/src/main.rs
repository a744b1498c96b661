//! `segviz` command-line front end.
//!
//! Exit codes: 0 on success, 1 for user errors (bad flags, unreadable or
//! invalid inputs), 2 for internal errors.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use segviz::atlas::{Hemi, MeshHemi, Surface, View};
use segviz::meshops::{GlassHemisphere, INFLATED_ITERATIONS, SEMI_INFLATED_ITERATIONS};
use segviz::plot2d::Position;
use segviz::render3d::CameraPreset;

#[derive(Debug, Parser)]
#[command(
    name = "segviz",
    version,
    about = "Brain atlas choropleths in 2D and 3D"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a polygon atlas, optionally colored by a statistics table, to SVG.
    Plot2d(Plot2dArgs),
    /// Render a mesh atlas to PNG and/or a gscene document.
    Plot3d(Plot3dArgs),
    /// Assemble a cortical mesh atlas from surface and annotation binaries.
    Convert(ConvertArgs),
    /// Project a mesh atlas into a polygon atlas.
    #[command(name = "make-atlas-2d")]
    MakeAtlas2d(MakeAtlas2dArgs),
    /// Print a summary of an atlas file.
    Inspect(InspectArgs),
    /// Report how a statistics table joins onto an atlas, without rendering.
    #[command(name = "join-check")]
    JoinCheck(JoinCheckArgs),
}

/// How the statistics table is read and joined.
#[derive(Debug, Args)]
struct StatsArgs {
    /// CSV or TSV statistics table.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Comma-separated key (non-numeric) columns. Defaults to whichever of
    /// label, area and hemi the header has, plus the group column.
    #[arg(long, value_delimiter = ',')]
    key_cols: Option<Vec<String>>,
    /// Facet by this column, one panel set per distinct value.
    #[arg(long)]
    group_col: Option<String>,
    /// The table is wide: one row per id, one column per region.
    #[arg(long, requires = "id_cols")]
    wide: bool,
    /// Id columns of a wide table.
    #[arg(long, value_delimiter = ',')]
    id_cols: Option<Vec<String>>,
    /// Name of the key column created from wide column headers.
    #[arg(long, default_value = "label")]
    key_name: String,
    /// Name of the value column created from wide cells.
    #[arg(long, default_value = "value")]
    value_name: String,
    /// Fail when a stat row matches no atlas region.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct ColorArgs {
    /// Value column to map to color. Without it regions keep atlas colors.
    #[arg(long)]
    value: Option<String>,
    /// Colors "c1,c2,..." or breakpoints "c1=v1,c2=v2,...".
    #[arg(long, default_value = "white,firebrick")]
    palette: String,
    /// Color for regions without data.
    #[arg(long, default_value = "#BEBEBE")]
    na_color: String,
    /// Opacity of regions without data, in [0, 1].
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    na_alpha: f64,
}

#[derive(Debug, Args)]
struct Plot2dArgs {
    /// Polygon atlas (gatlas-poly/1).
    #[arg(long)]
    atlas: PathBuf,
    #[command(flatten)]
    stats: StatsArgs,
    #[command(flatten)]
    color: ColorArgs,
    #[arg(long, value_parser = parse_str::<Hemi>)]
    hemisphere: Option<Hemi>,
    #[arg(long, value_parser = parse_str::<View>)]
    view: Option<View>,
    /// dispersed or stacked.
    #[arg(long, value_parser = parse_position)]
    position: Option<Position>,
    /// Facet columns when grouping (default: all groups on one row).
    #[arg(long)]
    ncol: Option<usize>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Plot3dArgs {
    /// Mesh atlas (gatlas-mesh/1).
    #[arg(long)]
    atlas: PathBuf,
    #[command(flatten)]
    stats: StatsArgs,
    #[command(flatten)]
    color: ColorArgs,
    /// Surface to draw (default: semi_inflated, or subcortical).
    #[arg(long, value_parser = parse_str::<Surface>)]
    surface: Option<Surface>,
    /// Restrict to one hemisphere; repeat for several.
    #[arg(long, value_parser = parse_str::<MeshHemi>)]
    hemisphere: Vec<MeshHemi>,
    /// Camera preset such as "left lateral" or "superior".
    #[arg(long, value_parser = parse_str::<CameraPreset>)]
    camera: Option<CameraPreset>,
    /// Add a translucent glass brain: left, right or both.
    #[arg(long, value_parser = parse_str::<GlassHemisphere>)]
    glass: Option<GlassHemisphere>,
    #[arg(long, default_value_t = segviz::meshops::GLASS_OPACITY, allow_negative_numbers = true)]
    glass_opacity: f64,
    #[arg(long)]
    no_axes: bool,
    #[arg(long, default_value = "#FFFFFF")]
    background: String,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 600)]
    height: u32,
    /// Output file; `.png` writes an image, anything else a gscene
    /// document. Repeat to write both.
    #[arg(long, required = true)]
    out: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    /// Triangle surface binary, one per hemisphere.
    #[arg(long, required = true)]
    surface: Vec<PathBuf>,
    /// Annotation binary matching each --surface, in the same order.
    #[arg(long, required = true)]
    annot: Vec<PathBuf>,
    /// Hemisphere of each --surface; inferred from an lh./rh. file prefix
    /// when omitted.
    #[arg(long, value_parser = parse_str::<MeshHemi>)]
    hemi: Vec<MeshHemi>,
    #[arg(long, default_value = "atlas")]
    name: String,
    /// Smoothing iterations for the semi-inflated surface.
    #[arg(long, default_value_t = SEMI_INFLATED_ITERATIONS)]
    inflate_iters: usize,
    /// Smoothing iterations for the inflated surface.
    #[arg(long, default_value_t = INFLATED_ITERATIONS)]
    inflated_iters: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MakeAtlas2dArgs {
    #[arg(long)]
    mesh_atlas: PathBuf,
    #[arg(long, default_value_t = 512)]
    size: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long, default_value = "semi_inflated", value_parser = parse_str::<Surface>)]
    surface: Surface,
    /// Views to project; repeat for several (default: lateral and medial).
    #[arg(long, value_parser = parse_str::<View>)]
    view: Vec<View>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// Polygon or mesh atlas file.
    atlas: PathBuf,
}

#[derive(Debug, Args)]
struct JoinCheckArgs {
    #[arg(long)]
    atlas: PathBuf,
    #[command(flatten)]
    stats: StatsArgs,
    /// Value column whose coverage is reported (default: every column).
    #[arg(long)]
    value: Option<String>,
    /// Surface of a mesh atlas to join against.
    #[arg(long, value_parser = parse_str::<Surface>)]
    surface: Option<Surface>,
}

fn parse_str<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn parse_position(s: &str) -> Result<Position, String> {
    match s {
        "dispersed" => Ok(Position::Dispersed),
        "stacked" => Ok(Position::Stacked),
        other => Err(format!(
            "unknown position {other:?} (expected dispersed or stacked)"
        )),
    }
}

#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::User(m) => f.write_str(m),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

fn run<I, T>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            return Err(CliError::User(
                e.render().to_string().trim_end().to_string(),
            ))
        }
    };
    match cli.command {
        Command::Plot2d(a) => commands::plot2d(a),
        Command::Plot3d(a) => commands::plot3d(a),
        Command::Convert(a) => commands::convert(a),
        Command::MakeAtlas2d(a) => commands::make_atlas_2d(a),
        Command::Inspect(a) => commands::inspect(a),
        Command::JoinCheck(a) => commands::join_check(a),
    }
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        eprintln!("segviz: internal error: {info}");
    }));
    match std::panic::catch_unwind(|| run(std::env::args_os())) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("segviz: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(2),
    }
}
