//! Reference implementations the library is checked against. They favour
//! obviousness over speed and share no code with the crate.
#![allow(dead_code)]

use segviz::render3d::Camera;
use segviz::stats::{StatRow, StatTable};

pub type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(a: V3) -> V3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Orthographic ray cast: for every pixel center, the index (1-based) of the
/// nearest triangle hit, first one winning ties, 0 for none.
pub fn ray_cast_ids(camera: &Camera, width: u32, height: u32, triangles: &[[V3; 3]]) -> Vec<u32> {
    let f = unit(sub(camera.center, camera.eye));
    let r = unit(cross(f, camera.up));
    let u = cross(r, f);
    let (w, h) = (f64::from(width), f64::from(height));
    let (hw, hh) = if w >= h {
        (camera.scale * w / h, camera.scale)
    } else {
        (camera.scale, camera.scale * h / w)
    };
    let mut out = Vec::with_capacity((width * height) as usize);
    for j in 0..height {
        for i in 0..width {
            let x = (2.0 * f64::from(i) + 1.0 - w) / w * hw;
            let y = (h - 2.0 * f64::from(j) - 1.0) / h * hh;
            let origin = [
                camera.center[0] + x * r[0] + y * u[0],
                camera.center[1] + x * r[1] + y * u[1],
                camera.center[2] + x * r[2] + y * u[2],
            ];
            let mut best = (f64::INFINITY, 0);
            for (k, t) in triangles.iter().enumerate() {
                if let Some(depth) = hit(origin, f, t) {
                    if depth < best.0 {
                        best = (depth, k as u32 + 1);
                    }
                }
            }
            out.push(best.1);
        }
    }
    out
}

/// Möller-Trumbore without culling; barycentric bounds are inclusive.
fn hit(origin: V3, dir: V3, t: &[V3; 3]) -> Option<f64> {
    let e1 = sub(t[1], t[0]);
    let e2 = sub(t[2], t[0]);
    let p = cross(dir, e2);
    let det = dot(e1, p);
    if det.abs() < 1e-12 {
        return None;
    }
    let s = sub(origin, t[0]);
    let u = dot(s, p) / det;
    let q = cross(s, e1);
    let v = dot(dir, q) / det;
    if u < 0.0 || v < 0.0 || u + v > 1.0 {
        return None;
    }
    Some(dot(e2, q) / det)
}

/// Even-odd fill of rings (pixel units, y up) sampled at pixel centers,
/// row 0 at the top.
pub fn even_odd_mask(rings: &[Vec<[f64; 2]>], width: u32, height: u32) -> Vec<bool> {
    let mut out = vec![false; (width * height) as usize];
    for row in 0..height {
        let py = f64::from(height - row) - 0.5;
        for col in 0..width {
            let px = f64::from(col) + 0.5;
            let mut crossings = 0;
            for ring in rings {
                for k in 0..ring.len() {
                    let a = ring[k];
                    let b = ring[(k + 1) % ring.len()];
                    if (a[1] > py) != (b[1] > py)
                        && px < a[0] + (py - a[1]) / (b[1] - a[1]) * (b[0] - a[0])
                    {
                        crossings += 1;
                    }
                }
            }
            out[(row * width + col) as usize] = crossings % 2 == 1;
        }
    }
    out
}

/// Mean distance from each vertex to the average of its edge neighbours.
pub fn roughness_oracle(vertices: &[V3], faces: &[[u32; 3]]) -> f64 {
    let mut nbrs: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); vertices.len()];
    for f in faces {
        for k in 0..3 {
            let a = f[k] as usize;
            let b = f[(k + 1) % 3] as usize;
            nbrs[a].insert(b);
            nbrs[b].insert(a);
        }
    }
    let mut total = 0.0;
    for (v, n) in vertices.iter().zip(&nbrs) {
        let mut m = [0.0; 3];
        for &j in n {
            for c in 0..3 {
                m[c] += vertices[j][c] / n.len() as f64;
            }
        }
        total += dot(sub(*v, m), sub(*v, m)).sqrt();
    }
    total / vertices.len() as f64
}

/// Channel-wise linear interpolation, rounded half up.
pub fn lerp_channel(a: u8, b: u8, t: f64) -> u8 {
    (f64::from(a) + t * (f64::from(b) - f64::from(a)) + 0.5).floor() as u8
}

pub fn bbox_diagonal(vertices: &[V3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in vertices {
        for c in 0..3 {
            lo[c] = lo[c].min(v[c]);
            hi[c] = hi[c].max(v[c]);
        }
    }
    dot(sub(hi, lo), sub(hi, lo)).sqrt()
}

/// True when two closed segments properly cross or overlap.
fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let on = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    let (d1, d2, d3, d4) = (
        orient(c, d, a),
        orient(c, d, b),
        orient(a, b, c),
        orient(a, b, d),
    );
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on(c, d, a))
        || (d2 == 0.0 && on(c, d, b))
        || (d3 == 0.0 && on(a, b, c))
        || (d4 == 0.0 && on(a, b, d))
}

/// Brute-force check that no two non-adjacent edges of a ring touch.
pub fn ring_is_simple(ring: &[[f64; 2]]) -> bool {
    let n = ring.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// The mock analysis table: four areas keyed by `area` with a `p` column.
pub fn mock_area_table() -> StatTable {
    let mut t = StatTable::new(vec!["area".into()], vec!["p".into()]);
    for (area, p) in [
        ("transverse temporal", 0.012),
        ("insula", 0.301),
        ("pre central", 0.045),
        ("superior parietal", 0.47),
    ] {
        t.rows.push(StatRow {
            keys: vec![area.into()],
            values: vec![Some(p)],
        });
    }
    t
}

/// The same four areas twice, once per age group.
pub fn grouped_area_table() -> StatTable {
    let mut t = StatTable::new(vec!["area".into(), "AgeG".into()], vec!["p".into()]);
    let areas = [
        "transverse temporal",
        "insula",
        "pre central",
        "superior parietal",
    ];
    for (g, group) in ["Young", "Old"].iter().enumerate() {
        for (k, area) in areas.iter().enumerate() {
            let p = 0.05 * (k + 4 * g) as f64;
            t.rows.push(StatRow {
                keys: vec![area.to_string(), group.to_string()],
                values: vec![Some(p)],
            });
        }
    }
    t
}

pub const WIDE_CSV: &str = "id,lh_superiortemporal,lh_precentral,lh_rostralmiddlefrontal\n\
                            10,3.32,2.3,3.3\n\
                            11,4.1,2.5,3.2\n\
                            12,3.5,2.1,3.1\n";

/// The long table as printed after gathering the wide example.
pub const LONG_ROWS: [(&str, &str, f64); 9] = [
    ("10", "lh_superiortemporal", 3.32),
    ("11", "lh_superiortemporal", 4.10),
    ("12", "lh_superiortemporal", 3.50),
    ("10", "lh_precentral", 2.30),
    ("11", "lh_precentral", 2.50),
    ("12", "lh_precentral", 2.10),
    ("10", "lh_rostralmiddlefrontal", 3.30),
    ("11", "lh_rostralmiddlefrontal", 3.20),
    ("12", "lh_rostralmiddlefrontal", 3.10),
];
