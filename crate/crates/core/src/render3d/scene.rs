use std::collections::{BTreeMap, HashSet};

use super::{camera_preset, Camera, CameraPreset, Render3dError};
use crate::atlas::{MeshAtlas, MeshHemi, RegionId, Surface};
use crate::color::{alpha_byte, Rgb, Rgba};
use crate::geom::Aabb;
use crate::mesh::TriMesh;
use crate::meshops::GlassBrain;
use crate::scale::Fills;
use crate::stats::JoinResult;

pub const GLASS_LABEL_PREFIX: &str = "glassbrain_";

#[derive(Debug, Clone, PartialEq)]
pub struct SceneItem {
    pub label: String,
    pub hover: Vec<String>,
    pub color: Rgba,
    pub opacity: f64,
    pub mesh: TriMesh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub items: Vec<SceneItem>,
    pub camera: Camera,
    pub show_axes: bool,
    pub background: Rgb,
}

impl Scene {
    pub fn bounds(&self) -> Option<Aabb> {
        self.items
            .iter()
            .filter_map(|i| i.mesh.bounds())
            .reduce(|a, b| a.union(&b))
    }

    /// Opacities within [0, 1] and unique item labels.
    pub fn validate(&self) -> Result<(), Render3dError> {
        let mut labels = HashSet::new();
        for item in &self.items {
            if !(0.0..=1.0).contains(&item.opacity) {
                return Err(Render3dError::BadOpacity {
                    label: item.label.clone(),
                    opacity: item.opacity,
                });
            }
            if !labels.insert(item.label.as_str()) {
                return Err(Render3dError::DuplicateLabel(item.label.clone()));
            }
        }
        Ok(())
    }
}

/// Inputs of [`build_scene`] besides the atlas.
#[derive(Debug, Clone)]
pub struct SceneSpec<'a> {
    pub surface: Surface,
    /// Empty selects every hemisphere of the surface.
    pub hemis: Vec<MeshHemi>,
    pub fills: &'a Fills,
    /// Joined data and the column shown in hover text.
    pub hover: Option<(&'a JoinResult, &'a str)>,
    pub na_alpha: f64,
    pub glass: Option<&'a GlassBrain>,
    pub preset: CameraPreset,
    pub show_axes: bool,
    pub background: Rgb,
}

impl<'a> SceneSpec<'a> {
    pub fn new(surface: Surface, fills: &'a Fills) -> SceneSpec<'a> {
        SceneSpec {
            surface,
            hemis: Vec::new(),
            fills,
            hover: None,
            na_alpha: 1.0,
            glass: None,
            preset: CameraPreset::LeftLateral,
            show_axes: true,
            background: Rgb::new(255, 255, 255),
        }
    }
}

fn format_value(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// One item per selected region, colored from `fills`. Regions marked
/// missing keep their NA color but take `na_alpha` as their alpha. Glass
/// meshes are appended last, labeled `glassbrain_<hemi>`. The camera is the
/// preset applied to the bounds of everything in the scene.
pub fn build_scene(atlas: &MeshAtlas, spec: &SceneSpec<'_>) -> Result<Scene, Render3dError> {
    if !(0.0..=1.0).contains(&spec.na_alpha) {
        return Err(Render3dError::BadAlpha(spec.na_alpha));
    }
    let sets: Vec<_> = atlas.selected_sets(spec.surface, &spec.hemis).collect();
    if sets.is_empty() {
        return Err(Render3dError::UnknownSurface {
            surface: spec.surface,
            hemis: spec.hemis.clone(),
        });
    }

    let hover_values: BTreeMap<RegionId, Option<f64>> = match spec.hover {
        Some((join, column)) => {
            let c = join.column(column);
            join.pairs
                .iter()
                .map(|p| (p.region.id.clone(), c.and_then(|c| p.values[c])))
                .collect()
        }
        None => BTreeMap::new(),
    };

    let mut label_count: BTreeMap<&str, usize> = BTreeMap::new();
    for set in &sets {
        for r in &set.regions {
            *label_count.entry(r.label.as_str()).or_default() += 1;
        }
    }

    let mut items = Vec::new();
    for set in &sets {
        for region in &set.regions {
            let id = RegionId::new(region.label.clone(), set.hemi.as_str());
            let fill = spec
                .fills
                .get(&id)
                .ok_or_else(|| Render3dError::MissingFill(id.to_string()))?;
            let color = if spec.fills.is_missing(&id) {
                fill.rgb().with_alpha(alpha_byte(spec.na_alpha))
            } else {
                fill
            };
            let mut hover = vec![region.area.clone()];
            if let Some((_, column)) = spec.hover {
                hover.push(format!(
                    "{column}: {}",
                    format_value(hover_values.get(&id).copied().flatten())
                ));
            }
            let label = if label_count[region.label.as_str()] > 1 {
                format!("{}_{}", region.label, set.hemi)
            } else {
                region.label.clone()
            };
            items.push(SceneItem {
                label,
                hover,
                color,
                opacity: 1.0,
                mesh: region.mesh.clone(),
            });
        }
    }
    if let Some(glass) = spec.glass {
        for (hemi, mesh) in &glass.meshes {
            items.push(SceneItem {
                label: format!("{GLASS_LABEL_PREFIX}{hemi}"),
                hover: vec![format!("glass brain ({hemi})")],
                color: glass.color.opaque(),
                opacity: glass.opacity,
                mesh: mesh.clone(),
            });
        }
    }

    let bounds = items
        .iter()
        .filter_map(|i| i.mesh.bounds())
        .reduce(|a, b| a.union(&b))
        .unwrap_or(Aabb {
            min: [0.0; 3],
            max: [0.0; 3],
        });
    let scene = Scene {
        items,
        camera: camera_preset(spec.preset, &bounds),
        show_axes: spec.show_axes,
        background: spec.background,
    };
    scene.validate()?;
    Ok(scene)
}
