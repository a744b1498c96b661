use std::fmt;
use std::str::FromStr;

use super::Render3dError;
use crate::geom::{add, cross, dot, normalize, scale, sub, Aabb, Vec3};

/// Distance of a preset eye from the scene center, in half-diagonals.
const EYE_DISTANCE: f64 = 2.5;

/// Orthographic camera. `scale` is the half-extent of the shorter image
/// side in world units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub eye: Vec3,
    pub center: Vec3,
    pub up: Vec3,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CameraPreset {
    LeftLateral,
    RightLateral,
    LeftMedial,
    RightMedial,
    Anterior,
    Posterior,
    Superior,
    Inferior,
}

impl CameraPreset {
    pub const ALL: [CameraPreset; 8] = [
        CameraPreset::LeftLateral,
        CameraPreset::RightLateral,
        CameraPreset::LeftMedial,
        CameraPreset::RightMedial,
        CameraPreset::Anterior,
        CameraPreset::Posterior,
        CameraPreset::Superior,
        CameraPreset::Inferior,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CameraPreset::LeftLateral => "left lateral",
            CameraPreset::RightLateral => "right lateral",
            CameraPreset::LeftMedial => "left medial",
            CameraPreset::RightMedial => "right medial",
            CameraPreset::Anterior => "anterior",
            CameraPreset::Posterior => "posterior",
            CameraPreset::Superior => "superior",
            CameraPreset::Inferior => "inferior",
        }
    }

    /// Unit vector from the scene center towards the eye.
    pub fn direction(self) -> Vec3 {
        match self {
            CameraPreset::LeftLateral | CameraPreset::RightMedial => [-1.0, 0.0, 0.0],
            CameraPreset::RightLateral | CameraPreset::LeftMedial => [1.0, 0.0, 0.0],
            CameraPreset::Anterior => [0.0, 1.0, 0.0],
            CameraPreset::Posterior => [0.0, -1.0, 0.0],
            CameraPreset::Superior => [0.0, 0.0, 1.0],
            CameraPreset::Inferior => [0.0, 0.0, -1.0],
        }
    }

    pub fn up(self) -> Vec3 {
        match self {
            CameraPreset::Superior | CameraPreset::Inferior => [0.0, 1.0, 0.0],
            _ => [0.0, 0.0, 1.0],
        }
    }
}

impl fmt::Display for CameraPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CameraPreset {
    type Err = Render3dError;

    /// Accepts `left lateral`, `left-lateral` or `left_lateral`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().replace(['-', '_'], " ");
        CameraPreset::ALL
            .into_iter()
            .find(|p| p.as_str() == norm)
            .ok_or_else(|| Render3dError::UnknownPreset(s.to_string()))
    }
}

/// Camera looking at the center of `bounds` from `2.5·d` along the preset
/// direction, where `d` is half the bounding-box diagonal (1 when the box is
/// a single point).
pub fn camera_preset(preset: CameraPreset, bounds: &Aabb) -> Camera {
    let center = bounds.center();
    let mut d = bounds.diagonal() / 2.0;
    if d <= 0.0 || !d.is_finite() {
        d = 1.0;
    }
    Camera {
        eye: add(center, scale(preset.direction(), EYE_DISTANCE * d)),
        center,
        up: preset.up(),
        scale: d,
    }
}

/// Orthographic projection of a camera onto a pixel grid.
#[derive(Debug, Clone, Copy)]
pub struct Projector {
    pub right: Vec3,
    pub up: Vec3,
    pub forward: Vec3,
    pub center: Vec3,
    pub width: u32,
    pub height: u32,
    pub half_w: f64,
    pub half_h: f64,
}

impl Projector {
    pub fn new(camera: &Camera, width: u32, height: u32) -> Result<Projector, Render3dError> {
        if width == 0 || height == 0 {
            return Err(Render3dError::BadSize { width, height });
        }
        if !(camera.scale.is_finite() && camera.scale > 0.0) {
            return Err(Render3dError::DegenerateCamera("scale must be positive"));
        }
        let forward = normalize(sub(camera.center, camera.eye))
            .ok_or(Render3dError::DegenerateCamera("eye equals center"))?;
        let right = normalize(cross(forward, camera.up)).ok_or(Render3dError::DegenerateCamera(
            "up is parallel to the view direction",
        ))?;
        let up = cross(right, forward);
        let (w, h) = (f64::from(width), f64::from(height));
        let (half_w, half_h) = if width >= height {
            (camera.scale * w / h, camera.scale)
        } else {
            (camera.scale, camera.scale * h / w)
        };
        Ok(Projector {
            right,
            up,
            forward,
            center: camera.center,
            width,
            height,
            half_w,
            half_h,
        })
    }

    /// Screen coordinates (world units, y up) and depth (larger is farther).
    pub fn project(&self, p: Vec3) -> Vec3 {
        let q = sub(p, self.center);
        [dot(q, self.right), dot(q, self.up), dot(q, self.forward)]
    }

    /// Screen position of the center of pixel (i, j), row 0 at the top.
    pub fn pixel_center(&self, i: u32, j: u32) -> [f64; 2] {
        let (w, h) = (f64::from(self.width), f64::from(self.height));
        [
            (2.0 * f64::from(i) + 1.0 - w) / w * self.half_w,
            -((2.0 * f64::from(j) + 1.0 - h) / h) * self.half_h,
        ]
    }

    /// Continuous pixel coordinates of a screen point.
    pub fn to_pixel(&self, x: f64, y: f64) -> [f64; 2] {
        let (w, h) = (f64::from(self.width), f64::from(self.height));
        [
            (x / self.half_w * w + w - 1.0) / 2.0,
            (-y / self.half_h * h + h - 1.0) / 2.0,
        ]
    }
}
