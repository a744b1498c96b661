//! Mesh atlas to polygon atlas: render region ids per view, trace pixel
//! contours, simplify them, and assemble a validated polygon atlas.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::atlas::{
    validate_polygon_atlas, AtlasError, AtlasKind, MeshAtlas, MeshHemi, MeshRegion, PolygonAtlas,
    PolygonAtlasDoc, RegionId, RegionShapeDoc, Surface, View,
};
use crate::geom::{point_in_ring, segment_distance, signed_area, Point2};
use crate::render3d::{
    camera_preset, rasterize_ids, CameraPreset, Projector, Render3dError, ScreenTriangle,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("the pipeline needs a cortical mesh atlas")]
    NotCortical,
    #[error("surface {surface} missing for hemisphere {hemi}")]
    MissingSurface { surface: Surface, hemi: MeshHemi },
    #[error("view {0} is not a cortical view")]
    BadView(View),
    #[error("raster size must be at least 1")]
    BadSize,
    #[error("epsilon {0} must be finite and non-negative")]
    BadEpsilon(f64),
    #[error(transparent)]
    Render(#[from] Render3dError),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

/// Region ids per pixel, row 0 at the top; 0 is background and region `k`
/// of the input list has id `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRaster {
    pub width: u32,
    pub height: u32,
    pub cells: Vec<u32>,
}

impl LabelRaster {
    pub fn new(width: u32, height: u32) -> LabelRaster {
        LabelRaster {
            width,
            height,
            cells: vec![0; (width * height) as usize],
        }
    }

    pub fn get(&self, col: u32, row: u32) -> u32 {
        self.cells[(row * self.width + col) as usize]
    }

    pub fn count(&self, id: u32) -> usize {
        self.cells.iter().filter(|&&c| c == id).count()
    }
}

/// Depth-tested id image of the regions seen through `preset`, framed on
/// the regions' joint bounding box.
pub fn render_label_raster(
    regions: &[MeshRegion],
    preset: CameraPreset,
    width: u32,
    height: u32,
) -> Result<LabelRaster, PipelineError> {
    if width == 0 || height == 0 {
        return Err(PipelineError::BadSize);
    }
    let Some(bounds) = regions
        .iter()
        .filter_map(|r| r.mesh.bounds())
        .reduce(|a, b| a.union(&b))
    else {
        return Ok(LabelRaster::new(width, height));
    };
    let proj = Projector::new(&camera_preset(preset, &bounds), width, height)?;
    let mut triangles = Vec::new();
    for (k, region) in regions.iter().enumerate() {
        for f in 0..region.mesh.face_count() {
            let v = region.mesh.triangle(f).map(|p| proj.project(p));
            triangles.push(ScreenTriangle {
                v,
                id: k as u32 + 1,
            });
        }
    }
    let ids = rasterize_ids(&proj, &triangles);
    Ok(LabelRaster {
        width,
        height,
        cells: ids.ids,
    })
}

/// One 4-connected component: its counter-clockwise outer ring and the
/// clockwise rings of its holes, in pixel units with y up.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedPiece {
    pub outer: Vec<Point2>,
    pub holes: Vec<Vec<Point2>>,
}

const NONE: u32 = u32::MAX;
/// Offset, in pixels, of ring corners where two diagonal pixels meet.
pub const SADDLE_INSET: f64 = 1.0 / 64.0;

/// Traces the boundary of `raster == id`.
///
/// Every pixel side between the region and anything else becomes a unit
/// edge directed with the region on its left. Edges are chained into rings;
/// where two diagonal pixels touch, the chain turns left, which keeps
/// diagonal neighbours in separate components, and the shared corner is
/// moved [`SADDLE_INSET`] into each pixel so every ring is simple.
/// Collinear corners are dropped. Pieces come out in row-major order of their first pixel.
pub fn trace_region_contours(raster: &LabelRaster, id: u32) -> Vec<TracedPiece> {
    let (w, h) = (raster.width as i64, raster.height as i64);
    let inside = |c: i64, r: i64| {
        c >= 0 && r >= 0 && c < w && r < h && raster.cells[(r * w + c) as usize] == id
    };
    let stride = w + 1;
    let vid = |x: i64, y: i64| (y * stride + x) as usize;

    // Edges as (start corner, direction); at most two leave any corner.
    let mut starts: Vec<(i64, i64)> = Vec::new();
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    let mut out = vec![[NONE; 2]; ((w + 1) * (h + 1)) as usize];
    let mut add = |x: i64,
                   y: i64,
                   d: (i64, i64),
                   starts: &mut Vec<(i64, i64)>,
                   dirs: &mut Vec<(i64, i64)>| {
        let e = starts.len() as u32;
        starts.push((x, y));
        dirs.push(d);
        let slot = &mut out[vid(x, y)];
        if slot[0] == NONE {
            slot[0] = e;
        } else {
            slot[1] = e;
        }
    };
    for r in 0..h {
        for c in 0..w {
            if !inside(c, r) {
                continue;
            }
            let (x0, y0) = (c, h - r - 1);
            if !inside(c, r + 1) {
                add(x0, y0, (1, 0), &mut starts, &mut dirs);
            }
            if !inside(c + 1, r) {
                add(x0 + 1, y0, (0, 1), &mut starts, &mut dirs);
            }
            if !inside(c, r - 1) {
                add(x0 + 1, y0 + 1, (-1, 0), &mut starts, &mut dirs);
            }
            if !inside(c - 1, r) {
                add(x0, y0 + 1, (0, -1), &mut starts, &mut dirs);
            }
        }
    }

    let mut used = vec![false; starts.len()];
    let mut outers: Vec<Vec<Point2>> = Vec::new();
    let mut holes: Vec<(Vec<Point2>, Point2)> = Vec::new();
    for first in 0..starts.len() {
        if used[first] {
            continue;
        }
        let mut corners: Vec<(i64, i64)> = Vec::new();
        let mut turns: Vec<(i64, i64)> = Vec::new();
        let mut e = first;
        loop {
            used[e] = true;
            corners.push(starts[e]);
            turns.push(dirs[e]);
            let (sx, sy) = starts[e];
            let d = dirs[e];
            let [a, b] = out[vid(sx + d.0, sy + d.1)];
            let left = (-d.1, d.0);
            let next = if b != NONE && dirs[b as usize] == left {
                b
            } else {
                a
            };
            if next == NONE || used[next as usize] {
                break;
            }
            e = next as usize;
        }
        // Keep only corners where the direction changes; saddle corners are
        // pulled into the region so rings never touch each other or
        // themselves.
        let n = corners.len();
        let ring: Vec<Point2> = (0..n)
            .filter(|&k| turns[k] != turns[(k + n - 1) % n])
            .map(|k| {
                let (x, y) = corners[k];
                let mut p = [x as f64, y as f64];
                if out[vid(x, y)][1] != NONE {
                    let (din, dout) = (turns[(k + n - 1) % n], turns[k]);
                    p[0] += SADDLE_INSET * (dout.0 - din.0) as f64;
                    p[1] += SADDLE_INSET * (dout.1 - din.1) as f64;
                }
                p
            })
            .collect();
        // Midpoint of the first unit edge: on this ring and no other.
        let (sx, sy) = starts[first];
        let probe = [
            sx as f64 + 0.5 * dirs[first].0 as f64,
            sy as f64 + 0.5 * dirs[first].1 as f64,
        ];
        if signed_area(&ring) > 0.0 {
            outers.push(ring);
        } else {
            holes.push((ring, probe));
        }
    }

    let mut pieces: Vec<TracedPiece> = outers
        .into_iter()
        .map(|outer| TracedPiece {
            outer,
            holes: Vec::new(),
        })
        .collect();
    let areas: Vec<f64> = pieces.iter().map(|p| signed_area(&p.outer)).collect();
    for (hole, probe) in holes {
        let owner = (0..pieces.len())
            .filter(|&k| point_in_ring(probe, &pieces[k].outer))
            .min_by(|&a, &b| areas[a].total_cmp(&areas[b]));
        if let Some(k) = owner {
            pieces[k].holes.push(hole);
        }
    }
    pieces
}

/// Closed-curve Douglas-Peucker.
///
/// The two mutually farthest vertices anchor the ring; each arc between
/// them keeps the vertices farther than `epsilon` from its chord,
/// recursively. Orientation and vertex order are preserved. If fewer than
/// three vertices survive, the vertex farthest from the anchor chord is
/// added back.
pub fn simplify_ring(ring: &[Point2], epsilon: f64) -> Vec<Point2> {
    let n = ring.len();
    if n <= 3 {
        return ring.to_vec();
    }
    let d2 = |a: Point2, b: Point2| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
    let (mut ia, mut ib, mut best) = (0, 1, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = d2(ring[i], ring[j]);
            if d > best {
                (ia, ib, best) = (i, j, d);
            }
        }
    }

    let mut keep = vec![false; n];
    keep[ia] = true;
    keep[ib] = true;
    let mut stack = vec![(ia, ib), (ib, ia + n)];
    while let Some((s, e)) = stack.pop() {
        let (a, b) = (ring[s % n], ring[e % n]);
        let mut far = (0, epsilon);
        for k in s + 1..e {
            let d = segment_distance(ring[k % n], a, b);
            if d > far.1 {
                far = (k, d);
            }
        }
        if far.0 != 0 {
            keep[far.0 % n] = true;
            stack.push((s, far.0));
            stack.push((far.0, e));
        }
    }

    if keep.iter().filter(|&&k| k).count() < 3 {
        let (a, b) = (ring[ia], ring[ib]);
        let far = (0..n).filter(|&k| !keep[k]).max_by(|&x, &y| {
            segment_distance(ring[x], a, b)
                .total_cmp(&segment_distance(ring[y], a, b))
                .then(y.cmp(&x))
        });
        if let Some(k) = far {
            keep[k] = true;
        }
    }
    ring.iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(p, _)| *p)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub surface: Surface,
    pub views: Vec<View>,
    /// Square raster side in pixels.
    pub size: u32,
    pub epsilon: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            surface: Surface::SemiInflated,
            views: vec![View::Lateral, View::Medial],
            size: 512,
            epsilon: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub atlas: PolygonAtlas,
    /// Regions that did not show up in any view.
    pub invisible: Vec<RegionId>,
}

pub fn preset_for(hemi: MeshHemi, view: View) -> Option<CameraPreset> {
    match (hemi, view) {
        (MeshHemi::Left, View::Lateral) => Some(CameraPreset::LeftLateral),
        (MeshHemi::Left, View::Medial) => Some(CameraPreset::LeftMedial),
        (MeshHemi::Right, View::Lateral) => Some(CameraPreset::RightLateral),
        (MeshHemi::Right, View::Medial) => Some(CameraPreset::RightMedial),
        _ => None,
    }
}

/// Builds a polygon atlas from the chosen surface of a cortical mesh atlas.
///
/// Each hemisphere and view is rendered on its own, traced, simplified and
/// scaled so the raster maps onto the unit square. Every 4-connected
/// component becomes a piece, numbered per region and view.
pub fn build_polygon_atlas(
    atlas: &MeshAtlas,
    options: &PipelineOptions,
) -> Result<PipelineOutput, PipelineError> {
    if atlas.kind != AtlasKind::Cortical {
        return Err(PipelineError::NotCortical);
    }
    if options.size == 0 {
        return Err(PipelineError::BadSize);
    }
    if !(options.epsilon.is_finite() && options.epsilon >= 0.0) {
        return Err(PipelineError::BadEpsilon(options.epsilon));
    }
    if let Some(&v) = options
        .views
        .iter()
        .find(|v| !v.valid_for(AtlasKind::Cortical))
    {
        return Err(PipelineError::BadView(v));
    }

    let size = f64::from(options.size);
    let scale = |ring: Vec<Point2>| {
        ring.into_iter()
            .map(|p| [p[0] / size, p[1] / size])
            .collect::<Vec<_>>()
    };
    let mut shapes = Vec::new();
    let mut all = Vec::new();
    let mut seen = BTreeSet::new();
    for hemi in atlas.hemis() {
        let set =
            atlas
                .surface_set(options.surface, hemi)
                .ok_or(PipelineError::MissingSurface {
                    surface: options.surface,
                    hemi,
                })?;
        let hemi_name = hemi.as_str();
        for r in &set.regions {
            all.push(RegionId::new(r.label.clone(), hemi_name));
        }
        for &view in &options.views {
            let preset = preset_for(hemi, view).expect("cortical hemisphere and view");
            let raster = render_label_raster(&set.regions, preset, options.size, options.size)?;
            for (k, region) in set.regions.iter().enumerate() {
                let pieces = trace_region_contours(&raster, k as u32 + 1);
                if !pieces.is_empty() {
                    seen.insert(RegionId::new(region.label.clone(), hemi_name));
                }
                for (piece, traced) in pieces.into_iter().enumerate() {
                    let rings = std::iter::once(("outer", traced.outer))
                        .chain(traced.holes.into_iter().map(|h| ("hole", h)));
                    for (role, ring) in rings {
                        shapes.push(RegionShapeDoc {
                            label: region.label.clone(),
                            area: region.area.clone(),
                            hemi: hemi_name.to_string(),
                            view: view.as_str().to_string(),
                            piece: piece as u64,
                            color: region.color.to_string(),
                            ring_role: role.to_string(),
                            ring: scale(simplify_ring(&ring, options.epsilon)),
                        });
                    }
                }
            }
        }
    }
    let polygon = validate_polygon_atlas(PolygonAtlasDoc {
        name: atlas.name.clone(),
        kind: "cortical".into(),
        regions: shapes,
    })?;
    let invisible = all.into_iter().filter(|id| !seen.contains(id)).collect();
    Ok(PipelineOutput {
        atlas: polygon,
        invisible,
    })
}
