//! Small synthetic atlases for tests, examples and demos.

use crate::atlas::MeshHemi;
use crate::atlas::{
    validate_mesh_atlas, validate_polygon_atlas, MeshAtlas, MeshAtlasDoc, MeshRegionDoc,
    PolygonAtlas, PolygonAtlasDoc, RegionShapeDoc, SurfaceSetDoc, TriMeshDoc,
};
use crate::fsformat::{ColorTable, ColorTableEntry, RawAnnotation, RawSurface};
use crate::mesh::TriMesh;
use crate::meshops::{assemble_cortical_atlas, icosphere, HemisphereInput};

/// The 34 cortical areas of the Desikan-Killiany parcellation with their
/// lookup-table colors, using spaced display names.
pub const CORTICAL_AREAS: [(&str, [u8; 3]); 34] = [
    ("bankssts", [25, 100, 40]),
    ("caudal anterior cingulate", [125, 100, 160]),
    ("caudal middle frontal", [100, 25, 0]),
    ("cuneus", [220, 20, 100]),
    ("entorhinal", [220, 20, 10]),
    ("fusiform", [180, 220, 140]),
    ("inferior parietal", [220, 60, 220]),
    ("inferior temporal", [180, 40, 120]),
    ("isthmus cingulate", [140, 20, 140]),
    ("lateral occipital", [20, 30, 140]),
    ("lateral orbitofrontal", [35, 75, 50]),
    ("lingual", [225, 140, 140]),
    ("medial orbitofrontal", [200, 35, 75]),
    ("middle temporal", [160, 100, 50]),
    ("parahippocampal", [20, 220, 60]),
    ("paracentral", [60, 220, 60]),
    ("pars opercularis", [220, 180, 140]),
    ("pars orbitalis", [20, 100, 50]),
    ("pars triangularis", [220, 60, 20]),
    ("pericalcarine", [120, 100, 60]),
    ("post central", [220, 20, 20]),
    ("posterior cingulate", [220, 180, 220]),
    ("pre central", [60, 20, 220]),
    ("precuneus", [160, 140, 180]),
    ("rostral anterior cingulate", [80, 20, 140]),
    ("rostral middle frontal", [75, 50, 125]),
    ("superior frontal", [20, 220, 160]),
    ("superior parietal", [20, 180, 140]),
    ("superior temporal", [140, 220, 220]),
    ("supramarginal", [80, 160, 20]),
    ("frontal pole", [100, 0, 100]),
    ("temporal pole", [70, 20, 170]),
    ("transverse temporal", [150, 150, 200]),
    ("insula", [255, 192, 32]),
];

fn hex(c: [u8; 3]) -> String {
    format!("#{:02X}{:02X}{:02X}", c[0], c[1], c[2])
}

fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<[f64; 2]> {
    vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]]
}

#[allow(clippy::too_many_arguments)]
fn shape(
    label: &str,
    area: &str,
    hemi: &str,
    view: &str,
    piece: u64,
    color: &str,
    role: &str,
    ring: Vec<[f64; 2]>,
) -> RegionShapeDoc {
    RegionShapeDoc {
        label: label.into(),
        area: area.into(),
        hemi: hemi.into(),
        view: view.into(),
        piece,
        color: color.into(),
        ring_role: role.into(),
        ring,
    }
}

/// Cortical polygon atlas with every area drawn once: 9, 8, 8 and 9 areas
/// in the left lateral, left medial, right medial and right lateral panels,
/// laid out as squares on a 3×3 grid. The first square of each panel has a
/// hole.
pub fn cortical_polygon_atlas() -> PolygonAtlas {
    let panels = [
        ("left", "lateral", 0..9),
        ("left", "medial", 9..17),
        ("right", "medial", 17..25),
        ("right", "lateral", 25..34),
    ];
    let mut regions = Vec::new();
    for (hemi, view, range) in panels {
        for (k, i) in range.enumerate() {
            let (area, color) = CORTICAL_AREAS[i];
            let prefix = if hemi == "left" { "lh" } else { "rh" };
            let label = format!("{prefix}_{}", area.replace(' ', ""));
            let (x, y) = ((k % 3) as f64 / 3.0, (k / 3) as f64 / 3.0);
            let third = 1.0 / 3.0;
            regions.push(shape(
                &label,
                area,
                hemi,
                view,
                0,
                &hex(color),
                "outer",
                square(
                    x + 0.05 * third,
                    y + 0.05 * third,
                    x + 0.95 * third,
                    y + 0.95 * third,
                ),
            ));
            if k == 0 {
                regions.push(shape(
                    &label,
                    area,
                    hemi,
                    view,
                    0,
                    &hex(color),
                    "hole",
                    square(
                        x + 0.35 * third,
                        y + 0.35 * third,
                        x + 0.65 * third,
                        y + 0.65 * third,
                    ),
                ));
            }
        }
    }
    validate_polygon_atlas(PolygonAtlasDoc {
        name: "toy_dk".into(),
        kind: "cortical".into(),
        regions,
    })
    .expect("toy cortical atlas is valid")
}

const SUBCORTICAL: [(&str, &str, &str, [u8; 3]); 5] = [
    ("Left-Thalamus", "thalamus", "left", [0, 118, 14]),
    ("Right-Thalamus", "thalamus", "right", [0, 118, 14]),
    ("Left-Caudate", "caudate", "left", [122, 186, 220]),
    ("Right-Caudate", "caudate", "right", [122, 186, 220]),
    ("Brain-Stem", "brain stem", "midline", [119, 159, 176]),
];

/// Subcortical polygon atlas with coronal, sagittal and axial panels.
pub fn subcortical_polygon_atlas() -> PolygonAtlas {
    let mut regions = Vec::new();
    let mut push = |i: usize, view: &str, ring: Vec<[f64; 2]>| {
        let (label, area, hemi, color) = SUBCORTICAL[i];
        regions.push(shape(
            label,
            area,
            hemi,
            view,
            0,
            &hex(color),
            "outer",
            ring,
        ));
    };
    push(0, "coronal", square(0.30, 0.40, 0.45, 0.60));
    push(1, "coronal", square(0.55, 0.40, 0.70, 0.60));
    push(2, "coronal", square(0.20, 0.65, 0.35, 0.80));
    push(3, "coronal", square(0.65, 0.65, 0.80, 0.80));
    push(4, "coronal", square(0.42, 0.05, 0.58, 0.35));
    push(0, "sagittal", square(0.30, 0.45, 0.60, 0.65));
    push(
        2,
        "sagittal",
        vec![[0.55, 0.70], [0.85, 0.70], [0.70, 0.90]],
    );
    push(4, "sagittal", square(0.35, 0.05, 0.50, 0.40));
    push(0, "axial", square(0.30, 0.35, 0.45, 0.65));
    push(1, "axial", square(0.55, 0.35, 0.70, 0.65));
    push(2, "axial", square(0.25, 0.70, 0.40, 0.90));
    push(3, "axial", square(0.60, 0.70, 0.75, 0.90));
    validate_polygon_atlas(PolygonAtlasDoc {
        name: "toy_aseg".into(),
        kind: "subcortical".into(),
        regions,
    })
    .expect("toy subcortical atlas is valid")
}

/// Names and colors of the two labels of [`two_label_hemisphere`].
pub const HEMISPHERE_LABELS: [(&str, [u8; 3]); 2] =
    [("superior", [220, 20, 20]), ("inferior", [20, 30, 140])];

/// Ellipsoidal hemisphere surface (an icosphere with `subdivisions`
/// subdivisions) whose upper half (z ≥ 0) is labeled `superior` and lower
/// half `inferior`. The left hemisphere sits at negative x.
pub fn two_label_hemisphere(subdivisions: u32, hemi: MeshHemi) -> (RawSurface, RawAnnotation) {
    let sphere = icosphere(subdivisions);
    let dx = if hemi == MeshHemi::Right { 0.7 } else { -0.7 };
    let vertices: Vec<[f32; 3]> = sphere
        .vertices
        .iter()
        .map(|v| [(0.6 * v[0] + dx) as f32, v[1] as f32, (0.8 * v[2]) as f32])
        .collect();
    let faces = sphere.faces.iter().map(|f| f.map(|i| i as i32)).collect();
    let entries: Vec<ColorTableEntry> = HEMISPHERE_LABELS
        .iter()
        .enumerate()
        .map(|(id, (name, c))| ColorTableEntry {
            id: id as i32 + 1,
            name: name.to_string(),
            r: c[0],
            g: c[1],
            b: c[2],
            flag: 0,
        })
        .collect();
    let vertex_labels = vertices
        .iter()
        .enumerate()
        .map(|(v, p)| {
            (
                v as i32,
                if p[2] >= 0.0 {
                    entries[0].code()
                } else {
                    entries[1].code()
                },
            )
        })
        .collect();
    let surface = RawSurface::new("toy hemisphere", vertices, faces).expect("valid toy surface");
    (
        surface,
        RawAnnotation {
            vertex_labels,
            color_table: Some(ColorTable {
                source: "toy".into(),
                entries,
            }),
        },
    )
}

/// Two-hemisphere cortical mesh atlas built from [`two_label_hemisphere`]
/// with the standard inflation settings.
pub fn cortical_mesh_atlas(subdivisions: u32) -> MeshAtlas {
    let left = two_label_hemisphere(subdivisions, MeshHemi::Left);
    let right = two_label_hemisphere(subdivisions, MeshHemi::Right);
    let inputs = [
        HemisphereInput {
            hemi: MeshHemi::Left,
            surface: &left.0,
            annotation: &left.1,
        },
        HemisphereInput {
            hemi: MeshHemi::Right,
            surface: &right.0,
            annotation: &right.1,
        },
    ];
    assemble_cortical_atlas(
        "toy_hemispheres",
        &inputs,
        crate::meshops::SEMI_INFLATED_ITERATIONS,
        crate::meshops::INFLATED_ITERATIONS,
    )
    .expect("toy cortical mesh atlas is valid")
}

fn blob(center: [f64; 3], radii: [f64; 3]) -> TriMesh {
    let mut m = icosphere(1);
    for v in &mut m.vertices {
        for k in 0..3 {
            v[k] = center[k] + radii[k] * v[k];
        }
    }
    m
}

/// Subcortical mesh atlas of three ellipsoids.
pub fn subcortical_mesh_atlas() -> MeshAtlas {
    let parts = [
        (0, blob([-0.35, 0.0, 0.2], [0.25, 0.35, 0.2])),
        (1, blob([0.35, 0.0, 0.2], [0.25, 0.35, 0.2])),
        (4, blob([0.0, -0.3, -0.5], [0.2, 0.2, 0.45])),
    ];
    let regions = parts
        .iter()
        .map(|(i, mesh)| {
            let (label, area, _, color) = SUBCORTICAL[*i];
            MeshRegionDoc {
                label: label.into(),
                annot: label.into(),
                area: area.into(),
                color: hex(color),
                mesh: TriMeshDoc::from(mesh),
            }
        })
        .collect();
    validate_mesh_atlas(MeshAtlasDoc {
        name: "toy_aseg_3d".into(),
        kind: "subcortical".into(),
        surfaces: vec![SurfaceSetDoc {
            surface: "subcortical".into(),
            hemi: "subcort".into(),
            regions,
        }],
    })
    .expect("toy subcortical mesh atlas is valid")
}
