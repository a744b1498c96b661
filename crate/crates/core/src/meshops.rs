//! Mesh construction: per-region extraction from an annotated surface,
//! Laplacian inflation, icospheres and glass brains.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::atlas::{
    validate_mesh_atlas, AtlasError, AtlasKind, MeshAtlas, MeshHemi, MeshRegion, Surface,
    SurfaceSet,
};
use crate::color::Rgb;
use crate::fsformat::{FsFormatError, RawAnnotation, RawSurface};
use crate::geom::{add, norm, normalize, scale, sub, Aabb, Vec3};
use crate::mesh::{TriMesh, TriMeshError};

pub const GLASS_COLOR: Rgb = Rgb::new(0xAA, 0xAA, 0xAA);
pub const GLASS_OPACITY: f64 = 0.3;
pub const SEMI_INFLATED_ITERATIONS: usize = 10;
pub const INFLATED_ITERATIONS: usize = 60;
pub const DEFAULT_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshOpsError {
    #[error(transparent)]
    Surface(#[from] FsFormatError),
    #[error(transparent)]
    Mesh(#[from] TriMeshError),
    #[error("annotation labels vertex {vertex} but the surface has {count} vertices")]
    VertexOutOfRange { vertex: i32, count: usize },
    #[error("vertex {vertex} carries code {code}, which is not in the color table")]
    UnknownCode { vertex: usize, code: i32 },
    #[error("lambda {0} outside (0, 1]")]
    BadLambda(f64),
    #[error("vertex {0} has no neighbors")]
    IsolatedVertex(usize),
    #[error("glass brains need a cortical reference atlas")]
    NotCortical,
    #[error("hemisphere {0} not present in the atlas")]
    MissingHemisphere(MeshHemi),
    #[error("opacity {0} outside [0, 1]")]
    BadOpacity(f64),
    #[error("unknown hemisphere {0:?} (expected left, right or both)")]
    UnknownHemisphere(String),
    #[error("hemisphere {0} given more than once")]
    DuplicateHemisphere(MeshHemi),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

/// Splits a surface into one mesh per color-table structure.
///
/// A face belongs to the label shared by at least two of its vertices; a
/// face with three distinct labels goes to the label of its lowest vertex
/// index. Faces that resolve to the unlabeled code 0 are dropped unless the
/// table has an entry for code 0. Regions come out in table order, each with
/// its used vertices re-indexed in ascending original order.
pub fn split_by_annot(
    surface: &RawSurface,
    annotation: &RawAnnotation,
) -> Result<Vec<MeshRegion>, MeshOpsError> {
    surface.validate()?;
    split_mesh(&surface.to_trimesh(), annotation)
}

/// [`split_by_annot`] over an already converted mesh.
pub fn split_mesh(
    mesh: &TriMesh,
    annotation: &RawAnnotation,
) -> Result<Vec<MeshRegion>, MeshOpsError> {
    let n = mesh.vertices.len();
    let mut codes = vec![0i32; n];
    for &(v, code) in &annotation.vertex_labels {
        let slot =
            usize::try_from(v)
                .ok()
                .filter(|&i| i < n)
                .ok_or(MeshOpsError::VertexOutOfRange {
                    vertex: v,
                    count: n,
                })?;
        codes[slot] = code;
    }
    let table = annotation.color_table.clone().unwrap_or_default();
    let index_of: HashMap<i32, usize> = table
        .entries
        .iter()
        .enumerate()
        .rev()
        .map(|(i, e)| (e.code(), i))
        .collect();
    if let Some(vertex) = codes
        .iter()
        .position(|&c| c != 0 && !index_of.contains_key(&c))
    {
        return Err(MeshOpsError::UnknownCode {
            vertex,
            code: codes[vertex],
        });
    }

    let mut faces_of: Vec<Vec<[u32; 3]>> = vec![Vec::new(); table.entries.len()];
    for f in &mesh.faces {
        let c = f.map(|i| codes[i as usize]);
        let code = if c[0] == c[1] || c[0] == c[2] {
            c[0]
        } else if c[1] == c[2] {
            c[1]
        } else {
            codes[*f.iter().min().unwrap() as usize]
        };
        if let Some(&entry) = index_of.get(&code) {
            faces_of[entry].push(*f);
        }
    }

    let mut regions = Vec::new();
    for (entry, faces) in table.entries.iter().zip(faces_of) {
        if faces.is_empty() {
            continue;
        }
        let mut used: Vec<u32> = faces.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let remap: HashMap<u32, u32> = used
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, k as u32))
            .collect();
        let vertices = used.iter().map(|&v| mesh.vertices[v as usize]).collect();
        let faces = faces.iter().map(|f| f.map(|i| remap[&i])).collect();
        regions.push(MeshRegion {
            label: entry.name.clone(),
            annot: entry.name.clone(),
            area: entry.name.clone(),
            color: entry.color(),
            mesh: TriMesh::new(vertices, faces)?,
        });
    }
    Ok(regions)
}

/// Uniform Laplacian smoothing, one simultaneous update per step.
#[derive(Debug, Clone)]
pub struct LaplacianSmoother {
    neighbors: Vec<Vec<u32>>,
    positions: Vec<Vec3>,
    lambda: f64,
}

impl LaplacianSmoother {
    pub fn new(mesh: &TriMesh, lambda: f64) -> Result<LaplacianSmoother, MeshOpsError> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(MeshOpsError::BadLambda(lambda));
        }
        let neighbors = mesh.neighbors();
        if let Some(v) = neighbors.iter().position(Vec::is_empty) {
            return Err(MeshOpsError::IsolatedVertex(v));
        }
        Ok(LaplacianSmoother {
            neighbors,
            positions: mesh.vertices.clone(),
            lambda,
        })
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn neighbors(&self) -> &[Vec<u32>] {
        &self.neighbors
    }

    pub fn step(&mut self) {
        let next = self
            .positions
            .iter()
            .zip(&self.neighbors)
            .map(|(&p, nb)| {
                add(
                    p,
                    scale(sub(neighbor_mean(&self.positions, nb), p), self.lambda),
                )
            })
            .collect();
        self.positions = next;
    }
}

fn neighbor_mean(positions: &[Vec3], nb: &[u32]) -> Vec3 {
    let sum = nb
        .iter()
        .fold([0.0; 3], |acc, &j| add(acc, positions[j as usize]));
    scale(sum, 1.0 / nb.len() as f64)
}

/// Mean distance from each vertex to the mean of its neighbors.
pub fn roughness(positions: &[Vec3], neighbors: &[Vec<u32>]) -> f64 {
    if positions.is_empty() {
        return 0.0;
    }
    let total: f64 = positions
        .iter()
        .zip(neighbors)
        .map(|(&p, nb)| {
            if nb.is_empty() {
                0.0
            } else {
                norm(sub(neighbor_mean(positions, nb), p))
            }
        })
        .sum();
    total / positions.len() as f64
}

/// Smooths `iterations` times, then rescales about the vertex centroid so
/// the bounding-box diagonal matches the input's. Topology is untouched.
pub fn inflate_mesh(
    mesh: &TriMesh,
    iterations: usize,
    lambda: f64,
) -> Result<TriMesh, MeshOpsError> {
    let mut smoother = LaplacianSmoother::new(mesh, lambda)?;
    if iterations == 0 {
        return Ok(mesh.clone());
    }
    for _ in 0..iterations {
        smoother.step();
    }
    let mut vertices = smoother.positions;
    let before = Aabb::from_points(&mesh.vertices).map_or(0.0, |b| b.diagonal());
    let after = Aabb::from_points(&vertices).map_or(0.0, |b| b.diagonal());
    if after > 0.0 {
        let centroid = scale(
            vertices.iter().fold([0.0; 3], |acc, &v| add(acc, v)),
            1.0 / vertices.len() as f64,
        );
        let k = before / after;
        for v in &mut vertices {
            *v = add(centroid, scale(sub(*v, centroid), k));
        }
    }
    Ok(TriMesh {
        vertices,
        faces: mesh.faces.clone(),
    })
}

/// Unit icosphere: an icosahedron with each face split into four
/// `subdivisions` times (10·4ⁿ + 2 vertices).
pub fn icosphere(subdivisions: u32) -> TriMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|&v| normalize(v).expect("nonzero"))
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vec3>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let m = scale(add(vertices[a as usize], vertices[b as usize]), 0.5);
                vertices.push(normalize(m).expect("nonzero"));
                vertices.len() as u32 - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriMesh { vertices, faces }
}

/// One annotated hemisphere surface.
#[derive(Debug, Clone, Copy)]
pub struct HemisphereInput<'a> {
    pub hemi: MeshHemi,
    pub surface: &'a RawSurface,
    pub annotation: &'a RawAnnotation,
}

/// Builds a cortical mesh atlas: `white` is the raw surface, the two
/// inflated surfaces smooth the whole hemisphere before splitting so region
/// borders stay aligned. Labels get an `lh_`/`rh_` prefix; areas keep the
/// color-table names.
pub fn assemble_cortical_atlas(
    name: &str,
    inputs: &[HemisphereInput<'_>],
    semi_iterations: usize,
    inflated_iterations: usize,
) -> Result<MeshAtlas, MeshOpsError> {
    let mut surfaces = Vec::new();
    let mut seen = Vec::new();
    for input in inputs {
        let prefix = match input.hemi {
            MeshHemi::Left => "lh_",
            MeshHemi::Right => "rh_",
            MeshHemi::Subcort => return Err(MeshOpsError::NotCortical),
        };
        if seen.contains(&input.hemi) {
            return Err(MeshOpsError::DuplicateHemisphere(input.hemi));
        }
        seen.push(input.hemi);
        input.surface.validate()?;
        let white = input.surface.to_trimesh();
        for (surface, iterations) in [
            (Surface::White, 0),
            (Surface::SemiInflated, semi_iterations),
            (Surface::Inflated, inflated_iterations),
        ] {
            let mesh = inflate_mesh(&white, iterations, DEFAULT_LAMBDA)?;
            let mut regions = split_mesh(&mesh, input.annotation)?;
            for r in &mut regions {
                r.label = format!("{prefix}{}", r.label);
            }
            surfaces.push(SurfaceSet {
                surface,
                hemi: input.hemi,
                regions,
            });
        }
    }
    let atlas = MeshAtlas {
        name: name.to_string(),
        kind: AtlasKind::Cortical,
        surfaces,
    };
    Ok(validate_mesh_atlas(atlas.to_doc())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlassHemisphere {
    Left,
    Right,
    Both,
}

impl FromStr for GlassHemisphere {
    type Err = MeshOpsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(GlassHemisphere::Left),
            "right" => Ok(GlassHemisphere::Right),
            "both" => Ok(GlassHemisphere::Both),
            other => Err(MeshOpsError::UnknownHemisphere(other.to_string())),
        }
    }
}

impl fmt::Display for GlassHemisphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlassHemisphere::Left => "left",
            GlassHemisphere::Right => "right",
            GlassHemisphere::Both => "both",
        })
    }
}

/// Translucent whole-hemisphere reference meshes.
#[derive(Debug, Clone, PartialEq)]
pub struct GlassBrain {
    pub meshes: Vec<(MeshHemi, TriMesh)>,
    pub color: Rgb,
    pub opacity: f64,
}

/// Merges every semi-inflated region mesh of each chosen hemisphere.
pub fn make_glassbrain(
    atlas: &MeshAtlas,
    hemisphere: GlassHemisphere,
    color: Rgb,
    opacity: f64,
) -> Result<GlassBrain, MeshOpsError> {
    if !(0.0..=1.0).contains(&opacity) {
        return Err(MeshOpsError::BadOpacity(opacity));
    }
    if atlas.kind != AtlasKind::Cortical {
        return Err(MeshOpsError::NotCortical);
    }
    let hemis: &[MeshHemi] = match hemisphere {
        GlassHemisphere::Left => &[MeshHemi::Left],
        GlassHemisphere::Right => &[MeshHemi::Right],
        GlassHemisphere::Both => &[MeshHemi::Left, MeshHemi::Right],
    };
    let mut meshes = Vec::with_capacity(hemis.len());
    for &hemi in hemis {
        let set = atlas
            .surface_set(Surface::SemiInflated, hemi)
            .ok_or(MeshOpsError::MissingHemisphere(hemi))?;
        let mut merged = TriMesh::default();
        for region in &set.regions {
            merged.append(&region.mesh);
        }
        meshes.push((hemi, merged));
    }
    Ok(GlassBrain {
        meshes,
        color,
        opacity,
    })
}
