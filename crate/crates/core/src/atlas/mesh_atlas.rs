use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{AtlasError, AtlasKind, MeshHemi, RegionId, RegionRef, Surface};
use crate::color::Rgb;
use crate::geom::Vec3;
use crate::mesh::TriMesh;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshRegion {
    pub label: String,
    pub annot: String,
    pub area: String,
    pub color: Rgb,
    pub mesh: TriMesh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSet {
    pub surface: Surface,
    pub hemi: MeshHemi,
    pub regions: Vec<MeshRegion>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshAtlas {
    pub name: String,
    pub kind: AtlasKind,
    pub surfaces: Vec<SurfaceSet>,
}

impl MeshAtlas {
    pub fn surface_set(&self, surface: Surface, hemi: MeshHemi) -> Option<&SurfaceSet> {
        self.surfaces
            .iter()
            .find(|s| s.surface == surface && s.hemi == hemi)
    }

    pub fn hemis(&self) -> Vec<MeshHemi> {
        self.surfaces
            .iter()
            .map(|s| s.hemi)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn has_surface(&self, surface: Surface) -> bool {
        self.surfaces.iter().any(|s| s.surface == surface)
    }

    /// Regions of `surface` for the chosen hemispheres (all when `hemis` is
    /// empty), in atlas order.
    pub fn region_refs(&self, surface: Surface, hemis: &[MeshHemi]) -> Vec<RegionRef> {
        self.selected_sets(surface, hemis)
            .flat_map(|set| {
                set.regions.iter().map(move |r| RegionRef {
                    id: RegionId::new(r.label.clone(), set.hemi.as_str()),
                    area: r.area.clone(),
                    color: r.color,
                })
            })
            .collect()
    }

    pub fn selected_sets<'a>(
        &'a self,
        surface: Surface,
        hemis: &'a [MeshHemi],
    ) -> impl Iterator<Item = &'a SurfaceSet> + 'a {
        self.surfaces
            .iter()
            .filter(move |s| s.surface == surface && (hemis.is_empty() || hemis.contains(&s.hemi)))
    }

    pub fn region_count(&self) -> usize {
        self.surfaces.iter().map(|s| s.regions.len()).sum()
    }

    pub fn to_doc(&self) -> MeshAtlasDoc {
        MeshAtlasDoc {
            name: self.name.clone(),
            kind: self.kind.as_str().to_string(),
            surfaces: self
                .surfaces
                .iter()
                .map(|s| SurfaceSetDoc {
                    surface: s.surface.as_str().to_string(),
                    hemi: s.hemi.as_str().to_string(),
                    regions: s
                        .regions
                        .iter()
                        .map(|r| MeshRegionDoc {
                            label: r.label.clone(),
                            annot: r.annot.clone(),
                            area: r.area.clone(),
                            color: r.color.to_string(),
                            mesh: TriMeshDoc::from(&r.mesh),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshAtlasDoc {
    pub name: String,
    pub kind: String,
    pub surfaces: Vec<SurfaceSetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSetDoc {
    pub surface: String,
    pub hemi: String,
    pub regions: Vec<MeshRegionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshRegionDoc {
    pub label: String,
    pub annot: String,
    pub area: String,
    pub color: String,
    pub mesh: TriMeshDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriMeshDoc {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[u64; 3]>,
}

impl From<&TriMesh> for TriMeshDoc {
    fn from(m: &TriMesh) -> Self {
        TriMeshDoc {
            vertices: m.vertices.clone(),
            faces: m.faces.iter().map(|f| f.map(u64::from)).collect(),
        }
    }
}

/// Checks every mesh-atlas invariant.
///
/// Cortical atlases carry one or both hemispheres, and every hemisphere that
/// is present carries all of `white`, `semi_inflated` and `inflated`.
/// Subcortical atlases carry exactly one `subcortical`/`subcort` set.
pub fn validate_mesh_atlas(doc: MeshAtlasDoc) -> Result<MeshAtlas, AtlasError> {
    let kind: AtlasKind = doc.kind.parse()?;
    let mut surfaces = Vec::with_capacity(doc.surfaces.len());
    let mut seen_sets = HashSet::new();

    for raw_set in doc.surfaces {
        let surface: Surface = raw_set.surface.parse()?;
        let hemi: MeshHemi = raw_set.hemi.parse()?;
        let allowed = match kind {
            AtlasKind::Cortical => surface != Surface::Subcortical && hemi != MeshHemi::Subcort,
            AtlasKind::Subcortical => surface == Surface::Subcortical && hemi == MeshHemi::Subcort,
        };
        if !allowed {
            return Err(AtlasError::SurfaceInvalidForKind {
                surface,
                hemi,
                kind,
            });
        }
        if !seen_sets.insert((surface, hemi)) {
            return Err(AtlasError::DuplicateSurface { surface, hemi });
        }

        let mut labels = HashSet::new();
        let mut regions = Vec::with_capacity(raw_set.regions.len());
        for raw in raw_set.regions {
            if !labels.insert(raw.label.clone()) {
                return Err(AtlasError::DuplicateLabel {
                    surface,
                    hemi,
                    label: raw.label,
                });
            }
            let color = Rgb::from_hex(&raw.color).map_err(|source| AtlasError::Color {
                label: raw.label.clone(),
                source,
            })?;
            let mesh = mesh_from_doc(raw.mesh, surface, hemi, &raw.label)?;
            regions.push(MeshRegion {
                label: raw.label,
                annot: raw.annot,
                area: raw.area,
                color,
                mesh,
            });
        }
        surfaces.push(SurfaceSet {
            surface,
            hemi,
            regions,
        });
    }

    match kind {
        AtlasKind::Cortical => {
            let hemis: BTreeSet<MeshHemi> = seen_sets.iter().map(|(_, h)| *h).collect();
            if hemis.is_empty() {
                return Err(AtlasError::NoSurfaces);
            }
            for hemi in hemis {
                for surface in Surface::CORTICAL {
                    if !seen_sets.contains(&(surface, hemi)) {
                        return Err(AtlasError::MissingSurface { surface, hemi });
                    }
                }
            }
        }
        AtlasKind::Subcortical => {
            if surfaces.len() != 1 {
                return Err(AtlasError::SubcorticalSurfaceCount(surfaces.len()));
            }
        }
    }

    Ok(MeshAtlas {
        name: doc.name,
        kind,
        surfaces,
    })
}

fn mesh_from_doc(
    doc: TriMeshDoc,
    surface: Surface,
    hemi: MeshHemi,
    label: &str,
) -> Result<TriMesh, AtlasError> {
    let wrap = |source| AtlasError::Mesh {
        surface,
        hemi,
        label: label.to_string(),
        source,
    };
    let n = doc.vertices.len();
    let mut faces = Vec::with_capacity(doc.faces.len());
    for (face, f) in doc.faces.iter().enumerate() {
        if let Some(&index) = f.iter().find(|&&i| i >= n as u64) {
            return Err(wrap(crate::mesh::TriMeshError::IndexOutOfRange {
                face,
                index,
                vertex_count: n,
            }));
        }
        faces.push(f.map(|i| i as u32));
    }
    TriMesh::new(doc.vertices, faces).map_err(wrap)
}
