use super::{Projector, Render3dError, Scene};
use crate::geom::{cross, dot, normalize, round_channel, sub, Vec3};

const AMBIENT: f64 = 0.25;
const AXIS_COLORS: [[f64; 3]; 3] = [[255.0, 0.0, 0.0], [0.0, 255.0, 0.0], [0.0, 0.0, 255.0]];

/// A projected triangle: screen x, screen y, depth per vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenTriangle {
    pub v: [Vec3; 3],
    /// Written into the id buffer; 0 is reserved for background.
    pub id: u32,
}

/// Per-pixel nearest triangle id (0 = none) and its depth, row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct IdBuffer {
    pub width: u32,
    pub height: u32,
    pub ids: Vec<u32>,
    pub depth: Vec<f64>,
}

impl IdBuffer {
    pub fn id(&self, i: u32, j: u32) -> u32 {
        self.ids[(j * self.width + i) as usize]
    }
}

fn edge(a: Vec3, b: Vec3, p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

/// Depth at `p` when the pixel center lies inside or on the triangle.
fn cover(v: &[Vec3; 3], p: [f64; 2]) -> Option<f64> {
    let w0 = edge(v[1], v[2], p);
    let w1 = edge(v[2], v[0], p);
    let w2 = edge(v[0], v[1], p);
    let inside = (w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0) || (w0 <= 0.0 && w1 <= 0.0 && w2 <= 0.0);
    let sum = w0 + w1 + w2;
    if !inside || sum == 0.0 {
        return None;
    }
    Some((w0 * v[0][2] + w1 * v[1][2] + w2 * v[2][2]) / sum)
}

/// Calls `f(pixel index, depth)` for every pixel center the triangle covers.
fn scan(proj: &Projector, v: &[Vec3; 3], mut f: impl FnMut(usize, f64)) {
    let px: Vec<[f64; 2]> = v.iter().map(|p| proj.to_pixel(p[0], p[1])).collect();
    let lo = |k: usize, max: u32| {
        let m = px
            .iter()
            .map(|p| p[k])
            .fold(f64::INFINITY, f64::min)
            .floor()
            - 1.0;
        m.clamp(0.0, f64::from(max)) as u32
    };
    let hi = |k: usize, max: u32| {
        let m = px
            .iter()
            .map(|p| p[k])
            .fold(f64::NEG_INFINITY, f64::max)
            .ceil()
            + 1.0;
        m.clamp(-1.0, f64::from(max) - 1.0)
    };
    let (i0, j0) = (lo(0, proj.width), lo(1, proj.height));
    let (i1, j1) = (hi(0, proj.width), hi(1, proj.height));
    if i1 < 0.0 || j1 < 0.0 {
        return;
    }
    for j in j0..=j1 as u32 {
        for i in i0..=i1 as u32 {
            if let Some(z) = cover(v, proj.pixel_center(i, j)) {
                f((j * proj.width + i) as usize, z);
            }
        }
    }
}

/// Z-buffered id rasterization: a pixel takes a triangle's id when its
/// center lies inside or on the triangle and the interpolated depth is
/// strictly less than the stored depth. Triangles are drawn in order.
pub fn rasterize_ids(proj: &Projector, triangles: &[ScreenTriangle]) -> IdBuffer {
    let n = (proj.width * proj.height) as usize;
    let mut buf = IdBuffer {
        width: proj.width,
        height: proj.height,
        ids: vec![0; n],
        depth: vec![f64::INFINITY; n],
    };
    for t in triangles {
        scan(proj, &t.v, |p, z| {
            if z < buf.depth[p] {
                buf.depth[p] = z;
                buf.ids[p] = t.id;
            }
        });
    }
    buf
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB bytes, row 0 at the top.
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, i: u32, j: u32) -> [u8; 3] {
        let k = 3 * (j * self.width + i) as usize;
        [self.data[k], self.data[k + 1], self.data[k + 2]]
    }
}

fn shade(tri: &[Vec3; 3], forward: Vec3, color: [f64; 3]) -> [f64; 3] {
    let lambert = normalize(cross(sub(tri[1], tri[0]), sub(tri[2], tri[0])))
        .map_or(0.0, |n| dot(n, forward).abs());
    let k = AMBIENT + (1.0 - AMBIENT) * lambert;
    color.map(|c| c * k)
}

/// Renders a scene with flat two-sided Lambert shading lit from the eye.
///
/// Items whose effective alpha (opacity times color alpha) is 1 are drawn
/// first with a depth buffer. The rest are composited afterwards, faces
/// sorted back to front by centroid depth, only where they lie in front of
/// the opaque surface. Axes are overlaid last when enabled.
pub fn rasterize_scene(scene: &Scene, width: u32, height: u32) -> Result<RgbImage, Render3dError> {
    scene.validate()?;
    let proj = Projector::new(&scene.camera, width, height)?;

    let mut opaque = Vec::new();
    let mut opaque_colors = Vec::new();
    let mut translucent = Vec::new();
    for item in &scene.items {
        let alpha = item.opacity * item.color.alpha_f64();
        if alpha <= 0.0 {
            continue;
        }
        let base = item.color.rgb().channels().map(f64::from);
        for f in 0..item.mesh.face_count() {
            let world = item.mesh.triangle(f);
            let v = world.map(|p| proj.project(p));
            let color = shade(&world, proj.forward, base);
            if alpha >= 1.0 {
                opaque.push(ScreenTriangle {
                    v,
                    id: opaque.len() as u32 + 1,
                });
                opaque_colors.push(color);
            } else {
                let depth = (v[0][2] + v[1][2] + v[2][2]) / 3.0;
                translucent.push((depth, v, color, alpha));
            }
        }
    }

    let ids = rasterize_ids(&proj, &opaque);
    let bg = scene.background.channels().map(f64::from);
    let mut color: Vec<[f64; 3]> = ids
        .ids
        .iter()
        .map(|&id| {
            if id == 0 {
                bg
            } else {
                opaque_colors[id as usize - 1]
            }
        })
        .collect();

    translucent.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, v, c, a) in &translucent {
        scan(&proj, v, |p, z| {
            if z < ids.depth[p] {
                for k in 0..3 {
                    color[p][k] = color[p][k] * (1.0 - a) + c[k] * a;
                }
            }
        });
    }

    if scene.show_axes {
        let origin = proj.project(scene.camera.center);
        for (k, axis_color) in AXIS_COLORS.iter().enumerate() {
            let mut end = scene.camera.center;
            end[k] += scene.camera.scale;
            draw_line(&proj, origin, proj.project(end), *axis_color, &mut color);
        }
    }

    let data = color.iter().flat_map(|c| c.map(round_channel)).collect();
    Ok(RgbImage {
        width,
        height,
        data,
    })
}

fn draw_line(proj: &Projector, a: Vec3, b: Vec3, c: [f64; 3], color: &mut [[f64; 3]]) {
    let p0 = proj.to_pixel(a[0], a[1]);
    let p1 = proj.to_pixel(b[0], b[1]);
    let steps = (p1[0] - p0[0])
        .abs()
        .max((p1[1] - p0[1]).abs())
        .ceil()
        .max(1.0) as usize;
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let x = (p0[0] + t * (p1[0] - p0[0])).round();
        let y = (p0[1] + t * (p1[1] - p0[1])).round();
        if x >= 0.0 && y >= 0.0 && x < f64::from(proj.width) && y < f64::from(proj.height) {
            color[(y as u32 * proj.width + x as u32) as usize] = c;
        }
    }
}

/// 8-bit RGB PNG.
pub fn encode_png(image: &RgbImage) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, image.width, image.height);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().expect("writing to memory");
        writer
            .write_image_data(&image.data)
            .expect("buffer matches declared size");
    }
    out
}
