//! One PASS/FAIL line per acceptance criterion, each against a wall-clock
//! budget. The lines go to stderr even when test output is captured.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use segviz::atlas::{parse_atlas, serialize_atlas, Atlas, Hemi, Surface, View};
use segviz::fsformat::{
    read_annot, read_surface, write_annot, write_surface, ColorTable, ColorTableEntry,
    RawAnnotation, RawSurface,
};
use segviz::meshops::{icosphere, inflate_mesh, LaplacianSmoother};
use segviz::pipeline::{build_polygon_atlas, preset_for, render_label_raster, PipelineOptions};
use segviz::plot2d::{layout_facets, render_svg, select_panels, Position, RenderSpec2D};
use segviz::render3d::{
    camera_preset, rasterize_ids, Camera, CameraPreset, Projector, ScreenTriangle,
};
use segviz::scale::{make_gradient, parse_palette, resolve_fill, value_range, DEFAULT_NA_COLOR};
use segviz::stats::{join_grouped, join_stats, pivot_wide_to_long, read_stat_table, JoinOptions};
use segviz::{toy, Rgb};

use common::{
    bbox_diagonal, even_odd_mask, grouped_area_table, mock_area_table, ray_cast_ids,
    roughness_oracle, LONG_ROWS, V3, WIDE_CSV,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pivot() -> Outcome {
    let wide = read_stat_table(WIDE_CSV.as_bytes(), &["id"]).map_err(|e| e.to_string())?;
    let long =
        pivot_wide_to_long(&wide, &["id"], "label", "thickness").map_err(|e| e.to_string())?;
    let rows: Vec<(&str, &str, f64)> = long
        .rows
        .iter()
        .map(|r| {
            (
                r.keys[0].as_str(),
                r.keys[1].as_str(),
                r.values[0].unwrap_or(f64::NAN),
            )
        })
        .collect();
    check(rows == LONG_ROWS.to_vec(), format!("rows differ: {rows:?}"))?;
    Ok(format!("{} long rows", rows.len()))
}

fn join_completeness() -> Outcome {
    let atlas = toy::cortical_polygon_atlas();
    let join = join_stats(&atlas, &mock_area_table(), JoinOptions::default())
        .map_err(|e| e.to_string())?;
    let range = value_range(&join, "p").ok_or("no data range")?;
    let scale = make_gradient(&parse_palette("firebrick,goldenrod").unwrap(), range)
        .map_err(|e| e.to_string())?;
    let fills = resolve_fill(&join, Some("p"), &scale).map_err(|e| e.to_string())?;
    let na = fills
        .missing
        .iter()
        .filter(|id| fills.get(id) == Some(DEFAULT_NA_COLOR.opaque()))
        .count();
    let got = (fills.valued_count(), na, join.unmatched_rows.len());
    check(got == (4, 30, 0), format!("valued/NA/unmatched = {got:?}"))?;
    Ok(format!(
        "valued {} / NA {} / unmatched {}",
        got.0, got.1, got.2
    ))
}

fn gradient() -> Outcome {
    let s = make_gradient(
        &parse_palette("red=0,white=0.5,blue=1").unwrap(),
        (0.0, 1.0),
    )
    .map_err(|e| e.to_string())?;
    for (v, hex) in [
        (0.0, "#FF0000"),
        (0.25, "#FF8080"),
        (0.5, "#FFFFFF"),
        (1.0, "#0000FF"),
    ] {
        let got = s.map_value(Some(v)).rgb();
        check(
            got == Rgb::from_hex(hex).unwrap(),
            format!("{v} -> {got}, want {hex}"),
        )?;
    }
    Ok("4 fixed points exact".into())
}

fn svg_output() -> Outcome {
    let atlas = toy::cortical_polygon_atlas();
    let join = join_stats(&atlas, &mock_area_table(), JoinOptions::default())
        .map_err(|e| e.to_string())?;
    let scale = make_gradient(
        &parse_palette("firebrick,goldenrod").unwrap(),
        value_range(&join, "p").unwrap(),
    )
    .unwrap();
    let fills = resolve_fill(&join, Some("p"), &scale).unwrap();
    let layout = select_panels(&atlas, None, None, None).map_err(|e| e.to_string())?;
    let spec = RenderSpec2D::default();
    let a = render_svg(&atlas, &layout, std::slice::from_ref(&fills), &spec)
        .map_err(|e| e.to_string())?;
    let b = render_svg(&atlas, &layout, &[fills], &spec).map_err(|e| e.to_string())?;
    check(a == b, "two renders differ")?;
    let count_paths = |bytes: &[u8]| -> Result<usize, String> {
        let text = std::str::from_utf8(bytes).map_err(|e| e.to_string())?;
        let doc = roxmltree::Document::parse(text).map_err(|e| e.to_string())?;
        Ok(doc
            .descendants()
            .filter(|n| n.tag_name().name() == "path")
            .count())
    };
    let n = count_paths(&a)?;
    check(
        n == atlas.piece_count(),
        format!("{n} paths for {} pieces", atlas.piece_count()),
    )?;

    let groups = join_grouped(
        &atlas,
        &grouped_area_table(),
        Some("AgeG"),
        JoinOptions::default(),
    )
    .unwrap();
    let fills: Vec<_> = groups
        .iter()
        .map(|(_, j)| resolve_fill(j, Some("p"), &scale).unwrap())
        .collect();
    let names: Vec<String> = groups
        .iter()
        .map(|(g, _)| g.clone().unwrap_or_default())
        .collect();
    let base = select_panels(&atlas, None, None, Some(Position::Stacked)).unwrap();
    let single = count_paths(&render_svg(&atlas, &base, &fills[..1], &spec).unwrap())?;
    let faceted = layout_facets(&base, &names, 2).map_err(|e| e.to_string())?;
    let double = count_paths(&render_svg(&atlas, &faceted, &fills, &spec).unwrap())?;
    check(
        double == 2 * single,
        format!("facets {double} vs single {single}"),
    )?;
    Ok(format!(
        "byte-identical, {n} paths, facets {single} -> {double}"
    ))
}

fn binary_round_trips() -> Outcome {
    const MINIMAL: [u8; 14] = [0xFF, 0xFF, 0xFE, b't', b'\n', b'\n', 0, 0, 0, 0, 0, 0, 0, 0];
    let s = read_surface(&MINIMAL).map_err(|e| e.to_string())?;
    check(write_surface(&s) == MINIMAL, "golden surface bytes differ")?;

    let mut runner = TestRunner::deterministic();
    let surfaces = (0usize..40).prop_flat_map(|nv| {
        let verts = proptest::collection::vec(proptest::array::uniform3(-1.0e4f32..1.0e4), nv);
        let faces = proptest::collection::vec(
            proptest::array::uniform3(0..nv.max(1) as i32),
            if nv == 0 { 0..1 } else { 0..60 },
        );
        (verts, faces).prop_map(|(vertices, faces)| RawSurface {
            comment: "fixture".into(),
            vertices,
            faces,
        })
    });
    let entry = (
        "[a-z_]{1,12}",
        proptest::array::uniform3(0u8..=255),
        0i32..100,
    )
        .prop_map(|(name, c, id)| ColorTableEntry {
            id,
            name,
            r: c[0],
            g: c[1],
            b: c[2],
            flag: 0,
        });
    let annots = (
        proptest::collection::vec((0i32..5000, 0i32..0x00FF_FFFF), 0..50),
        proptest::option::of(proptest::collection::vec(entry, 0..12)),
    )
        .prop_map(|(vertex_labels, entries)| RawAnnotation {
            vertex_labels,
            color_table: entries.map(|entries| ColorTable {
                source: "ctab".into(),
                entries,
            }),
        });
    for k in 0..100 {
        let s = surfaces
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let bytes = write_surface(&s);
        check(
            read_surface(&bytes).ok().as_ref() == Some(&s),
            format!("surface fixture {k}"),
        )?;
        let a = annots
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let bytes = write_annot(&a);
        check(
            read_annot(&bytes).ok().as_ref() == Some(&a),
            format!("annotation fixture {k}"),
        )?;
    }
    Ok("golden 14 bytes, 100 surfaces, 100 annotations".into())
}

fn ids_for(camera: &Camera, tris: &[[V3; 3]]) -> Vec<u32> {
    let proj = Projector::new(camera, 64, 64).unwrap();
    let screen: Vec<ScreenTriangle> = tris
        .iter()
        .enumerate()
        .map(|(k, t)| ScreenTriangle {
            v: t.map(|p| proj.project(p)),
            id: k as u32 + 1,
        })
        .collect();
    rasterize_ids(&proj, &screen).ids
}

fn rasterizer() -> Outcome {
    let front = Camera {
        eye: [0.0, 0.0, 5.0],
        center: [0.0; 3],
        up: [0.0, 1.0, 0.0],
        scale: 1.0,
    };
    let far = [[-0.9, -0.8, -0.5], [0.7, -0.6, -0.5], [0.1, 0.9, -0.5]];
    let near = [[-0.4, -0.3, 0.5], [0.85, 0.1, 0.5], [-0.2, 0.6, 0.5]];
    for tris in [[far, near], [near, far]] {
        check(
            ids_for(&front, &tris) == ray_cast_ids(&front, 64, 64, &tris),
            "occlusion fixture",
        )?;
    }
    let mut runner = TestRunner::deterministic();
    let scenes = (
        proptest::collection::vec(
            proptest::array::uniform3(proptest::array::uniform3(-1.0f64..1.0)),
            1..=8,
        ),
        0usize..8,
    );
    let mut pixels = 0;
    for k in 0..64 {
        let (tris, preset) = scenes
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let bounds = segviz::geom::Aabb::from_points(tris.iter().flatten()).unwrap();
        let camera = camera_preset(CameraPreset::ALL[preset], &bounds);
        let got = ids_for(&camera, &tris);
        let want = ray_cast_ids(&camera, 64, 64, &tris);
        let bad = got.iter().zip(&want).filter(|(a, b)| a != b).count();
        check(bad == 0, format!("scene {k}: {bad} pixels differ"))?;
        pixels += got.len();
    }
    Ok(format!("occlusion + 64 scenes, {pixels} pixels exact"))
}

fn inflation() -> Outcome {
    let mesh = icosphere(3);
    check(mesh.vertex_count() == 642, "icosphere size")?;
    let mut smoother = LaplacianSmoother::new(&mesh, 0.5).map_err(|e| e.to_string())?;
    let mut last = roughness_oracle(&mesh.vertices, &mesh.faces);
    let first = last;
    for it in 0..10 {
        smoother.step();
        let r = roughness_oracle(smoother.positions(), &mesh.faces);
        check(r < last, format!("iteration {it}: {r} !< {last}"))?;
        last = r;
    }
    let out = inflate_mesh(&mesh, 10, 0.5).map_err(|e| e.to_string())?;
    check(out.faces == mesh.faces, "topology changed")?;
    let (d0, d1) = (bbox_diagonal(&mesh.vertices), bbox_diagonal(&out.vertices));
    let rel = (d1 - d0).abs() / d0;
    check(rel < 1e-6, format!("diagonal drift {rel:e}"))?;
    Ok(format!(
        "roughness {first:.3e} -> {last:.3e}, diagonal drift {rel:.1e}"
    ))
}

fn pipeline_fidelity() -> Outcome {
    let size = 256;
    let mesh = toy::cortical_mesh_atlas(3);
    let options = PipelineOptions {
        size,
        epsilon: 1.0,
        ..PipelineOptions::default()
    };
    let out = build_polygon_atlas(&mesh, &options).map_err(|e| e.to_string())?;
    let bytes = serialize_atlas(&Atlas::Polygon(out.atlas.clone()));
    parse_atlas(&bytes).map_err(|e| format!("output does not validate: {e}"))?;
    let mut worst: f64 = 1.0;
    for hemi in mesh.hemis() {
        let set = mesh
            .surface_set(Surface::SemiInflated, hemi)
            .ok_or("missing surface")?;
        let poly_hemi: Hemi = hemi.as_str().parse().map_err(|_| "hemi")?;
        for view in [View::Lateral, View::Medial] {
            let raster =
                render_label_raster(&set.regions, preset_for(hemi, view).unwrap(), size, size)
                    .unwrap();
            for (k, region) in set.regions.iter().enumerate() {
                let rings: Vec<Vec<[f64; 2]>> = out
                    .atlas
                    .regions
                    .iter()
                    .filter(|s| s.label == region.label && s.hemi == poly_hemi && s.view == view)
                    .map(|s| {
                        s.ring
                            .iter()
                            .map(|p| [p[0] * f64::from(size), p[1] * f64::from(size)])
                            .collect()
                    })
                    .collect();
                let mask = even_odd_mask(&rings, size, size);
                let id = k as u32 + 1;
                let source = raster.count(id);
                if source == 0 {
                    continue;
                }
                let diff = raster
                    .cells
                    .iter()
                    .zip(&mask)
                    .filter(|(&c, &m)| (c == id) != m)
                    .count();
                worst = worst.min(1.0 - diff as f64 / source as f64);
            }
        }
    }
    check(worst >= 0.97, format!("worst region fidelity {worst:.4}"))?;
    Ok(format!(
        "worst region fidelity {:.2}%, {} rings, validates",
        worst * 100.0,
        out.atlas.regions.len()
    ))
}

fn subcortical_guard() -> Outcome {
    let atlas = toy::subcortical_polygon_atlas();
    let err = select_panels(&atlas, Some(Hemi::Left), None, None)
        .err()
        .ok_or("hemisphere filter accepted")?;
    let msg = err.to_string();
    check(
        msg.contains("no option to show only a single hemisphere"),
        format!("message: {msg}"),
    )?;
    Ok(msg)
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("wide-to-long pivot", 1, pivot),
        ("join completeness 4/30/0", 1, join_completeness),
        ("gradient fixed points", 1, gradient),
        ("svg determinism, path count, facets", 2, svg_output),
        ("binary format round trips", 5, binary_round_trips),
        ("rasterizer vs ray cast at 64x64", 10, rasterizer),
        ("inflation on 642 vertices", 5, inflation),
        ("mesh-to-polygon fidelity at 256", 30, pipeline_fidelity),
        ("subcortical hemisphere guard", 1, subcortical_guard),
    ];
    let mut failed = Vec::new();
    let _ = writeln!(std::io::stderr().lock());
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{detail}; over {budget}s budget"))
            }
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        // Written to the stream directly so the report survives output capture.
        let _ = writeln!(
            std::io::stderr().lock(),
            "{status} {name} [{:.3}s / {budget}s] {detail}",
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
