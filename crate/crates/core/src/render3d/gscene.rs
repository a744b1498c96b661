use serde::{Deserialize, Serialize};

use super::{Camera, Render3dError, Scene, SceneItem};
use crate::atlas::{parse_tagged, to_canonical_bytes, AtlasError, TriMeshDoc};
use crate::color::{Rgb, Rgba};
use crate::geom::Vec3;
use crate::mesh::TriMesh;

pub const SCENE_FORMAT: &str = "gscene/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    background: String,
    show_axes: bool,
    camera: CameraDoc,
    items: Vec<ItemDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraDoc {
    eye: Vec3,
    center: Vec3,
    up: Vec3,
    scale: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    label: String,
    hover: Vec<String>,
    color: String,
    opacity: f64,
    mesh: TriMeshDoc,
}

/// Canonical `gscene/1` document: sorted keys, shortest round-trip floats,
/// one trailing newline.
pub fn export_scene(scene: &Scene) -> Vec<u8> {
    let doc = SceneDoc {
        background: scene.background.to_string(),
        show_axes: scene.show_axes,
        camera: CameraDoc {
            eye: scene.camera.eye,
            center: scene.camera.center,
            up: scene.camera.up,
            scale: scene.camera.scale,
        },
        items: scene
            .items
            .iter()
            .map(|i| ItemDoc {
                label: i.label.clone(),
                hover: i.hover.clone(),
                color: i.color.to_string(),
                opacity: i.opacity,
                mesh: TriMeshDoc::from(&i.mesh),
            })
            .collect(),
    };
    let value = serde_json::to_value(doc).expect("scene documents hold finite numbers");
    to_canonical_bytes(value, SCENE_FORMAT)
}

pub fn parse_scene(bytes: &[u8]) -> Result<Scene, Render3dError> {
    let (tag, map) = parse_tagged(bytes)?;
    if tag != SCENE_FORMAT {
        return Err(AtlasError::UnknownFormat(tag).into());
    }
    let schema = |e: String| Render3dError::Document(AtlasError::Schema(e));
    let doc: SceneDoc = serde_json::from_value(serde_json::Value::Object(map))
        .map_err(|e| schema(e.to_string()))?;
    let mut items = Vec::with_capacity(doc.items.len());
    for item in doc.items {
        let color = Rgba::from_hex(&item.color)
            .map_err(|e| schema(format!("item {:?}: {e}", item.label)))?;
        let faces = item
            .mesh
            .faces
            .iter()
            .map(|f| f.map(|i| u32::try_from(i).unwrap_or(u32::MAX)))
            .collect();
        let mesh = TriMesh::new(item.mesh.vertices, faces)
            .map_err(|e| schema(format!("item {:?}: {e}", item.label)))?;
        items.push(SceneItem {
            label: item.label,
            hover: item.hover,
            color,
            opacity: item.opacity,
            mesh,
        });
    }
    let background = Rgb::from_hex(&doc.background).map_err(|e| schema(e.to_string()))?;
    let c = doc.camera;
    let scene = Scene {
        items,
        camera: Camera {
            eye: c.eye,
            center: c.center,
            up: c.up,
            scale: c.scale,
        },
        show_axes: doc.show_axes,
        background,
    };
    scene.validate()?;
    Ok(scene)
}
