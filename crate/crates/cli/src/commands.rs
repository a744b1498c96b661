use std::fmt::Display;
use std::fs;
use std::path::Path;

use segviz::atlas::{parse_atlas, serialize_atlas, MeshHemi, RegionRef, Surface, View};
use segviz::fsformat::{read_annot, read_surface};
use segviz::meshops::{assemble_cortical_atlas, make_glassbrain, HemisphereInput, GLASS_COLOR};
use segviz::pipeline::{build_polygon_atlas, PipelineError, PipelineOptions};
use segviz::plot2d::{layout_facets, render_svg, select_panels, Legend, RenderSpec2D};
use segviz::render3d::{
    build_scene, encode_png, export_scene, rasterize_scene, CameraPreset, SceneSpec,
};
use segviz::scale::{
    brain_palette, make_gradient, parse_palette, resolve_fill, value_range, ColorScale,
};
use segviz::stats::{
    join_grouped, pivot_wide_to_long, read_header, read_stat_table, JoinOptions, JoinResult,
    JoinTarget, MeshSelection, StatTable,
};
use segviz::{Atlas, AtlasKind, MeshAtlas, PolygonAtlas, Rgb};

use crate::{
    CliError, ColorArgs, ConvertArgs, InspectArgs, JoinCheckArgs, MakeAtlas2dArgs, Plot2dArgs,
    Plot3dArgs, StatsArgs,
};

type Result<T> = std::result::Result<T, CliError>;

/// Join results per group; a single `None` entry when ungrouped.
type Groups = Vec<(Option<String>, JoinResult)>;

fn user(context: impl Display, e: impl Display) -> CliError {
    CliError::User(format!("{context}: {e}"))
}

fn read_file(flag: &str, path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| user(format_args!("{flag} {}", path.display()), e))
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| user(format_args!("--out {}", path.display()), e))
}

fn load_atlas(flag: &str, path: &Path) -> Result<Atlas> {
    let bytes = read_file(flag, path)?;
    parse_atlas(&bytes).map_err(|e| user(format_args!("{flag} {}", path.display()), e))
}

fn load_polygon(path: &Path) -> Result<PolygonAtlas> {
    match load_atlas("--atlas", path)? {
        Atlas::Polygon(a) => Ok(a),
        Atlas::Mesh(_) => Err(CliError::User(format!(
            "--atlas {}: expected a polygon atlas, got a mesh atlas",
            path.display()
        ))),
    }
}

fn load_mesh(flag: &str, path: &Path) -> Result<MeshAtlas> {
    match load_atlas(flag, path)? {
        Atlas::Mesh(a) => Ok(a),
        Atlas::Polygon(_) => Err(CliError::User(format!(
            "{flag} {}: expected a mesh atlas, got a polygon atlas",
            path.display()
        ))),
    }
}

fn default_surface(atlas: &MeshAtlas) -> Surface {
    match atlas.kind {
        AtlasKind::Cortical => Surface::SemiInflated,
        AtlasKind::Subcortical => Surface::Subcortical,
    }
}

/// Reads the table named by `--stats`, reshaping it when `--wide` is set.
fn load_stats(args: &StatsArgs, path: &Path) -> Result<StatTable> {
    let bytes = read_file("--stats", path)?;
    let ctx = format_args!("--stats {}", path.display()).to_string();
    if args.wide {
        let ids: Vec<&str> = args.id_cols.iter().flatten().map(String::as_str).collect();
        let wide = read_stat_table(&bytes, &ids).map_err(|e| user(&ctx, e))?;
        return pivot_wide_to_long(&wide, &ids, &args.key_name, &args.value_name)
            .map_err(|e| user(&ctx, e));
    }
    let keys: Vec<String> = match &args.key_cols {
        Some(k) => k.clone(),
        None => {
            let header = read_header(&bytes).map_err(|e| user(&ctx, e))?;
            header
                .into_iter()
                .filter(|h| {
                    ["label", "area", "hemi"].contains(&h.as_str())
                        || Some(h) == args.group_col.as_ref()
                })
                .collect()
        }
    };
    let keys: Vec<&str> = keys.iter().map(String::as_str).collect();
    read_stat_table(&bytes, &keys).map_err(|e| user(&ctx, e))
}

/// Joins the table onto `target`, one entry per group.
fn join(args: &StatsArgs, target: &(impl JoinTarget + ?Sized)) -> Result<Option<Groups>> {
    let Some(path) = &args.stats else {
        if args.group_col.is_some() || args.wide || args.key_cols.is_some() {
            return Err(CliError::User("table options given without --stats".into()));
        }
        return Ok(None);
    };
    let table = load_stats(args, path)?;
    let options = JoinOptions {
        strict: args.strict,
    };
    join_grouped(target, &table, args.group_col.as_deref(), options)
        .map(Some)
        .map_err(|e| user(format_args!("--stats {}", path.display()), e))
}

fn value_column(
    color: &ColorArgs,
    groups: &[(Option<String>, JoinResult)],
) -> Result<Option<String>> {
    let Some((_, first)) = groups.first() else {
        return Ok(None);
    };
    match &color.value {
        Some(v) if first.column(v).is_none() => Err(CliError::User(format!(
            "--value {v:?}: no such numeric column (have {:?})",
            first.value_columns
        ))),
        Some(v) => Ok(Some(v.clone())),
        None if first.value_columns.len() == 1 => Ok(Some(first.value_columns[0].clone())),
        None => Err(CliError::User(format!(
            "--value is required: the table has value columns {:?}",
            first.value_columns
        ))),
    }
}

/// Data range over every group. A constant column is widened by 0.5 on
/// each side so the gradient still has a span.
fn data_range(groups: &[(Option<String>, JoinResult)], column: &str) -> Result<(f64, f64)> {
    let (lo, hi) = groups
        .iter()
        .filter_map(|(_, j)| value_range(j, column))
        .fold(None, |acc: Option<(f64, f64)>, (l, h)| {
            Some(acc.map_or((l, h), |(a, b)| (a.min(l), b.max(h))))
        })
        .ok_or_else(|| CliError::User(format!("--value {column:?}: no region received a value")))?;
    Ok(if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    })
}

fn na_color(color: &ColorArgs) -> Result<Rgb> {
    Rgb::parse(&color.na_color).map_err(|e| user("--na-color", e))
}

fn gradient(color: &ColorArgs, range: (f64, f64), na_alpha: f64) -> Result<ColorScale> {
    let palette = parse_palette(&color.palette).map_err(|e| user("--palette", e))?;
    make_gradient(&palette, range)
        .map_err(|e| user("--palette", e))?
        .with_na(na_color(color)?, na_alpha)
        .map_err(|e| user("--na-alpha", e))
}

fn atlas_palette(
    target: &(impl JoinTarget + ?Sized),
    color: &ColorArgs,
    na_alpha: f64,
) -> Result<ColorScale> {
    brain_palette(target)
        .map_err(|e| user("atlas colors", e))?
        .with_na(na_color(color)?, na_alpha)
        .map_err(|e| user("--na-alpha", e))
}

pub fn plot2d(a: Plot2dArgs) -> Result<()> {
    let atlas = load_polygon(&a.atlas)?;
    let layout = select_panels(&atlas, a.hemisphere, a.view, a.position)
        .map_err(|e| user("panel selection", e))?;
    let joined = join(&a.stats, &atlas)?;
    let regions: &[RegionRef] = &atlas.region_refs();

    let (groups, column, scale, legend) = match joined {
        Some(groups) => match value_column(&a.color, &groups)? {
            Some(col) => {
                let (lo, hi) = data_range(&groups, &col)?;
                let scale = gradient(&a.color, (lo, hi), a.color.na_alpha)?;
                let legend = Legend::Gradient {
                    scale: scale.clone(),
                    lo,
                    hi,
                };
                (groups, Some(col), scale, legend)
            }
            None => (
                groups,
                None,
                atlas_palette(regions, &a.color, a.color.na_alpha)?,
                Legend::None,
            ),
        },
        None => {
            let empty = StatTable::new(vec!["label".into()], vec![]);
            let all = join_grouped(regions, &empty, None, JoinOptions::default())
                .map_err(|e| CliError::Internal(e.to_string()))?;
            (
                all,
                None,
                atlas_palette(regions, &a.color, a.color.na_alpha)?,
                Legend::None,
            )
        }
    };
    let fills = groups
        .iter()
        .map(|(_, j)| resolve_fill(j, column.as_deref(), &scale).map_err(|e| user("fill", e)))
        .collect::<Result<Vec<_>>>()?;

    let layout = if a.stats.group_col.is_some() {
        let names: Vec<String> = groups
            .iter()
            .map(|(g, _)| g.clone().unwrap_or_default())
            .collect();
        let ncol = a.ncol.unwrap_or(names.len()).max(1);
        layout_facets(&layout, &names, ncol).map_err(|e| user("--ncol", e))?
    } else {
        layout
    };
    let spec = RenderSpec2D {
        legend,
        title: a.title.clone(),
        ..RenderSpec2D::default()
    };
    let svg = render_svg(&atlas, &layout, &fills, &spec).map_err(|e| user("plot2d", e))?;
    write_out(&a.out, &svg)
}

pub fn plot3d(a: Plot3dArgs) -> Result<()> {
    let atlas = load_mesh("--atlas", &a.atlas)?;
    if a.stats.group_col.is_some() {
        return Err(CliError::User(
            "--group-col: plot3d renders a single group".into(),
        ));
    }
    let surface = a.surface.unwrap_or_else(|| default_surface(&atlas));
    let selection = MeshSelection {
        atlas: &atlas,
        surface,
        hemis: &a.hemisphere,
    };
    if atlas.selected_sets(surface, &a.hemisphere).next().is_none() {
        return Err(CliError::User(format!(
            "--surface {surface}: not present for the selected hemispheres"
        )));
    }
    let regions = selection.join_regions();

    let joined = join(&a.stats, &selection)?;
    let (join, column, scale) = match &joined {
        Some(groups) => {
            let column = value_column(&a.color, groups)?;
            let scale = match &column {
                Some(col) => gradient(&a.color, data_range(groups, col)?, 1.0)?,
                None => atlas_palette(&regions[..], &a.color, 1.0)?,
            };
            (groups[0].1.clone(), column, scale)
        }
        None => {
            let empty = StatTable::new(vec!["label".into()], vec![]);
            let j = segviz::stats::join_stats(&regions[..], &empty, JoinOptions::default())
                .map_err(|e| CliError::Internal(e.to_string()))?;
            (j, None, atlas_palette(&regions[..], &a.color, 1.0)?)
        }
    };
    let fills = resolve_fill(&join, column.as_deref(), &scale).map_err(|e| user("fill", e))?;

    let glass = match a.glass {
        Some(g) => Some(
            make_glassbrain(&atlas, g, GLASS_COLOR, a.glass_opacity)
                .map_err(|e| user("--glass", e))?,
        ),
        None => None,
    };
    let mut spec = SceneSpec::new(surface, &fills);
    spec.hemis = a.hemisphere.clone();
    spec.na_alpha = a.color.na_alpha;
    spec.hover = column.as_deref().map(|c| (&join, c));
    spec.glass = glass.as_ref();
    spec.preset = a.camera.unwrap_or(if a.hemisphere == [MeshHemi::Right] {
        CameraPreset::RightLateral
    } else {
        CameraPreset::LeftLateral
    });
    spec.show_axes = !a.no_axes;
    spec.background = Rgb::parse(&a.background).map_err(|e| user("--background", e))?;
    let scene = build_scene(&atlas, &spec).map_err(|e| user("plot3d", e))?;

    for out in &a.out {
        let bytes = if has_extension(out, "png") {
            let image = rasterize_scene(&scene, a.width, a.height)
                .map_err(|e| user("--width/--height", e))?;
            encode_png(&image)
        } else {
            export_scene(&scene)
        };
        write_out(out, &bytes)?;
    }
    Ok(())
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

fn infer_hemi(path: &Path) -> Option<MeshHemi> {
    let name = path.file_name()?.to_str()?;
    if name.starts_with("lh.") {
        Some(MeshHemi::Left)
    } else if name.starts_with("rh.") {
        Some(MeshHemi::Right)
    } else {
        None
    }
}

pub fn convert(a: ConvertArgs) -> Result<()> {
    if a.surface.len() != a.annot.len() {
        return Err(CliError::User(format!(
            "--annot: {} annotation(s) for {} surface(s)",
            a.annot.len(),
            a.surface.len()
        )));
    }
    if !a.hemi.is_empty() && a.hemi.len() != a.surface.len() {
        return Err(CliError::User(format!(
            "--hemi: {} value(s) for {} surface(s)",
            a.hemi.len(),
            a.surface.len()
        )));
    }
    let mut loaded = Vec::new();
    for (k, (sp, ap)) in a.surface.iter().zip(&a.annot).enumerate() {
        let hemi = match a.hemi.get(k) {
            Some(&h) => h,
            None => infer_hemi(sp).ok_or_else(|| {
                CliError::User(format!(
                    "--surface {}: cannot tell the hemisphere; pass --hemi",
                    sp.display()
                ))
            })?,
        };
        let surface = read_surface(&read_file("--surface", sp)?)
            .map_err(|e| user(format_args!("--surface {}", sp.display()), e))?;
        let annot = read_annot(&read_file("--annot", ap)?)
            .map_err(|e| user(format_args!("--annot {}", ap.display()), e))?;
        loaded.push((hemi, surface, annot));
    }
    let inputs: Vec<HemisphereInput<'_>> = loaded
        .iter()
        .map(|(hemi, surface, annotation)| HemisphereInput {
            hemi: *hemi,
            surface,
            annotation,
        })
        .collect();
    let atlas = assemble_cortical_atlas(&a.name, &inputs, a.inflate_iters, a.inflated_iters)
        .map_err(|e| user("convert", e))?;
    write_out(&a.out, &serialize_atlas(&Atlas::Mesh(atlas)))
}

pub fn make_atlas_2d(a: MakeAtlas2dArgs) -> Result<()> {
    let mesh = load_mesh("--mesh-atlas", &a.mesh_atlas)?;
    let views = if a.view.is_empty() {
        vec![View::Lateral, View::Medial]
    } else {
        a.view.clone()
    };
    let options = PipelineOptions {
        surface: a.surface,
        views,
        size: a.size,
        epsilon: a.epsilon,
    };
    let out = build_polygon_atlas(&mesh, &options).map_err(|e| match e {
        PipelineError::Atlas(inner) => {
            CliError::Internal(format!("traced atlas failed validation: {inner}"))
        }
        other => user("make-atlas-2d", other),
    })?;
    for id in &out.invisible {
        eprintln!("segviz: warning: region {id} is not visible in any view");
    }
    write_out(&a.out, &serialize_atlas(&Atlas::Polygon(out.atlas)))
}

fn join_list<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn inspect(a: InspectArgs) -> Result<()> {
    let atlas = load_atlas("atlas", &a.atlas)?;
    println!("name: {}", atlas.name());
    println!("format: {}", atlas.format());
    match &atlas {
        Atlas::Polygon(p) => {
            println!("kind: {}", p.kind);
            println!("regions: {}", p.region_refs().len());
            println!("pieces: {}", p.piece_count());
            println!("rings: {}", p.regions.len());
            println!("hemispheres: {}", join_list(p.hemis()));
            println!("views: {}", join_list(p.views()));
        }
        Atlas::Mesh(m) => {
            println!("kind: {}", m.kind);
            println!("regions: {}", m.region_count());
            println!("surfaces:");
            for set in &m.surfaces {
                let (v, f) = set.regions.iter().fold((0, 0), |(v, f), r| {
                    (v + r.mesh.vertex_count(), f + r.mesh.face_count())
                });
                println!(
                    "  {}/{}: {} regions, {v} vertices, {f} faces",
                    set.surface,
                    set.hemi,
                    set.regions.len()
                );
            }
        }
    }
    Ok(())
}

pub fn join_check(a: JoinCheckArgs) -> Result<()> {
    if a.stats.stats.is_none() {
        return Err(CliError::User("--stats is required".into()));
    }
    let atlas = load_atlas("--atlas", &a.atlas)?;
    let groups = match &atlas {
        Atlas::Polygon(p) => {
            if a.surface.is_some() {
                return Err(CliError::User(
                    "--surface applies only to mesh atlases".into(),
                ));
            }
            join(&a.stats, p)?
        }
        Atlas::Mesh(m) => {
            let surface = a.surface.unwrap_or_else(|| default_surface(m));
            if !m.has_surface(surface) {
                return Err(CliError::User(format!(
                    "--surface {surface}: not in the atlas"
                )));
            }
            join(
                &a.stats,
                &MeshSelection {
                    atlas: m,
                    surface,
                    hemis: &[],
                },
            )?
        }
    }
    .unwrap_or_default();

    for (group, j) in &groups {
        let prefix = group
            .as_ref()
            .map(|g| format!("[{g}] "))
            .unwrap_or_default();
        println!(
            "{prefix}{} matched, {} unmatched; {} regions",
            j.matched_count,
            j.unmatched_rows.len(),
            j.pairs.len()
        );
        let columns: Vec<&String> = match &a.value {
            Some(v) if j.column(v).is_none() => {
                return Err(CliError::User(format!(
                    "--value {v:?}: no such numeric column"
                )));
            }
            Some(v) => vec![v],
            None => j.value_columns.iter().collect(),
        };
        for c in columns {
            println!(
                "{prefix}column {c}: {} of {} regions valued",
                j.valued_regions(c),
                j.pairs.len()
            );
        }
        for u in &j.unmatched_rows {
            println!("{prefix}unmatched row {}: {}", u.row, u.keys.join(", "));
        }
    }
    Ok(())
}
