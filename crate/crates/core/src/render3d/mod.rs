//! 3D scenes: assembly from mesh atlases, camera presets, a software
//! rasterizer and the `gscene/1` exchange document.

mod camera;
mod gscene;
mod raster;
mod scene;

use thiserror::Error;

use crate::atlas::{AtlasError, MeshHemi, Surface};

pub use camera::{camera_preset, Camera, CameraPreset, Projector};
pub use gscene::{export_scene, parse_scene, SCENE_FORMAT};
pub use raster::{encode_png, rasterize_ids, rasterize_scene, IdBuffer, RgbImage, ScreenTriangle};
pub use scene::{build_scene, Scene, SceneItem, SceneSpec, GLASS_LABEL_PREFIX};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Render3dError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("degenerate camera: {0}")]
    DegenerateCamera(&'static str),
    #[error("image size must be at least 1x1, got {width}x{height}")]
    BadSize { width: u32, height: u32 },
    #[error("surface {surface} not present for hemisphere selection {hemis:?}")]
    UnknownSurface {
        surface: Surface,
        hemis: Vec<MeshHemi>,
    },
    #[error("no fill for region {0}")]
    MissingFill(String),
    #[error("item {label:?} has opacity {opacity} outside [0, 1]")]
    BadOpacity { label: String, opacity: f64 },
    #[error("duplicate item label {0:?}")]
    DuplicateLabel(String),
    #[error("NA alpha {0} outside [0, 1]")]
    BadAlpha(f64),
    #[error(transparent)]
    Document(#[from] AtlasError),
}
