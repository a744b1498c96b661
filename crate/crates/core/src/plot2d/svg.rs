use std::fmt::Write as _;

use super::{PanelLayout, Plot2dError, CELL};
use crate::atlas::{pieces_by_key, PolygonAtlas, RegionShape};
use crate::color::{Rgb, Rgba};
use crate::geom::Point2;
use crate::scale::{ColorScale, Fills};

const MARGIN: f64 = 10.0;
const FACET_GAP: f64 = 10.0;
const TITLE_H: f64 = 24.0;
const FACET_TITLE_H: f64 = 20.0;
const SWATCH: f64 = 12.0;
const SWATCH_STEP: f64 = 16.0;
const BAR_STEPS: usize = 256;
const BAR_W: f64 = 256.0;
const BAR_H: f64 = 14.0;
/// Fraction of a cell the panel content may occupy.
const FILL_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub enum Legend {
    None,
    /// Swatch column of (name, color).
    Discrete(Vec<(String, Rgba)>),
    /// Horizontal bar sampling `scale` over `[lo, hi]`.
    Gradient {
        scale: ColorScale,
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec2D {
    pub stroke: Option<Rgba>,
    pub stroke_width: f64,
    pub legend: Legend,
    pub title: Option<String>,
    pub background: Rgb,
}

impl Default for RenderSpec2D {
    fn default() -> Self {
        RenderSpec2D {
            stroke: Some(Rgba::new(0, 0, 0, 255)),
            stroke_width: 0.5,
            legend: Legend::None,
            title: None,
            background: Rgb::new(255, 255, 255),
        }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn paint(attr: &str, c: Rgba) -> String {
    let mut s = format!(r#"{attr}="{}""#, c.rgb());
    if c.a != 255 {
        let _ = write!(s, r#" {attr}-opacity="{}""#, num(c.alpha_f64()));
    }
    s
}

/// Maps panel content into a cell: uniform scale, centered, y flipped.
struct Fit {
    min: Point2,
    max_y: f64,
    scale: f64,
    offset: Point2,
}

impl Fit {
    fn new(shapes: &[&RegionShape]) -> Fit {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in shapes.iter().flat_map(|s| &s.ring) {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let (w, h) = (max[0] - min[0], max[1] - min[1]);
        let scale = FILL_RATIO * CELL / w.max(h);
        Fit {
            min,
            max_y: max[1],
            scale,
            offset: [(CELL - w * scale) / 2.0, (CELL - h * scale) / 2.0],
        }
    }

    fn apply(&self, p: Point2) -> Point2 {
        [
            self.offset[0] + (p[0] - self.min[0]) * self.scale,
            self.offset[1] + (self.max_y - p[1]) * self.scale,
        ]
    }
}

fn legend_height(legend: &Legend) -> f64 {
    match legend {
        Legend::None => 0.0,
        Legend::Discrete(entries) => MARGIN + entries.len() as f64 * SWATCH_STEP,
        Legend::Gradient { .. } => MARGIN + BAR_H + 14.0,
    }
}

/// Renders an SVG 1.1 document. `fills` holds one fill set per facet.
///
/// Output order is facet, panel, then (label, hemi, piece); each piece is a
/// single even-odd path whose first subpath is the outer ring.
pub fn render_svg(
    atlas: &PolygonAtlas,
    layout: &PanelLayout,
    fills: &[Fills],
    spec: &RenderSpec2D,
) -> Result<Vec<u8>, Plot2dError> {
    if !spec.stroke_width.is_finite() || spec.stroke_width < 0.0 {
        return Err(Plot2dError::BadStrokeWidth(spec.stroke_width));
    }
    if fills.len() != layout.facets.len() {
        return Err(Plot2dError::FillCount {
            facets: layout.facets.len(),
            fills: fills.len(),
        });
    }

    let facet_titles = layout.facets.iter().any(|f| f.title.is_some());
    let facet_w = layout.grid.1 as f64 * CELL;
    let facet_h = layout.grid.0 as f64 * CELL + if facet_titles { FACET_TITLE_H } else { 0.0 };
    let (frows, fcols) = layout.facet_grid;
    let title_h = if spec.title.is_some() { TITLE_H } else { 0.0 };
    let body_w = fcols as f64 * facet_w + (fcols.saturating_sub(1)) as f64 * FACET_GAP;
    let body_h = frows as f64 * facet_h + (frows.saturating_sub(1)) as f64 * FACET_GAP;
    let width = 2.0 * MARGIN
        + body_w.max(if matches!(spec.legend, Legend::Gradient { .. }) {
            BAR_W
        } else {
            0.0
        });
    let height = 2.0 * MARGIN + title_h + body_h + legend_height(&spec.legend);

    let stroke = match spec.stroke {
        Some(c) => format!(
            r#"{} stroke-width="{}""#,
            paint("stroke", c),
            num(spec.stroke_width)
        ),
        None => r#"stroke="none""#.to_string(),
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="{}"/>"#,
        num(width),
        num(height),
        spec.background
    );
    if let Some(title) = &spec.title {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16">{}</text>"#,
            num(MARGIN),
            num(MARGIN + 16.0),
            escape(title)
        );
    }

    // Panel geometry does not depend on the facet, so it is prepared once.
    let panels: Vec<(String, Vec<(crate::atlas::RegionId, String)>)> = layout
        .panels
        .iter()
        .map(|panel| {
            let shapes: Vec<&RegionShape> =
                atlas.regions.iter().filter(|s| panel.contains(s.hemi, s.view)).collect();
            let fit = Fit::new(&shapes);
            let paths = pieces_by_key(&shapes)
                .into_values()
                .map(|rings| {
                    let mut d = String::new();
                    for ring in &rings {
                        for (i, p) in ring.ring.iter().enumerate() {
                            let [x, y] = fit.apply(*p);
                            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(x), num(y));
                        }
                        d.push_str(" Z ");
                    }
                    (rings[0].region_id(), d.trim_end().to_string())
                })
                .collect();
            let hemi = panel.hemi.map(|h| h.as_str()).unwrap_or("all");
            let open = format!(
                r#"<g class="panel" data-hemi="{hemi}" data-view="{}" transform="translate({} {})">"#,
                panel.view,
                num(panel.col as f64 * CELL),
                num(panel.row as f64 * CELL + if facet_titles { FACET_TITLE_H } else { 0.0 })
            );
            (open, paths)
        })
        .collect();

    for (facet, fill) in layout.facets.iter().zip(fills) {
        let fx = MARGIN + facet.col as f64 * (facet_w + FACET_GAP);
        let fy = MARGIN + title_h + facet.row as f64 * (facet_h + FACET_GAP);
        let _ = writeln!(
            out,
            r#"<g class="facet" transform="translate({} {})">"#,
            num(fx),
            num(fy)
        );
        if let Some(t) = &facet.title {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="14" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
                num(facet_w / 2.0),
                escape(t)
            );
        }
        for (open, paths) in &panels {
            out.push_str(open);
            out.push('\n');
            for (id, d) in paths {
                let color = fill
                    .get(id)
                    .ok_or_else(|| Plot2dError::MissingFill(id.to_string()))?;
                let _ = writeln!(
                    out,
                    r#"<path d="{d}" {} fill-rule="evenodd" {stroke}/>"#,
                    paint("fill", color)
                );
            }
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n");
    }

    let ly = MARGIN + title_h + body_h + MARGIN;
    match &spec.legend {
        Legend::None => {}
        Legend::Discrete(entries) => {
            let _ = writeln!(
                out,
                r#"<g class="legend" transform="translate({} {})">"#,
                num(MARGIN),
                num(ly)
            );
            for (i, (name, color)) in entries.iter().enumerate() {
                let y = i as f64 * SWATCH_STEP;
                let _ = writeln!(
                    out,
                    r#"<rect x="0" y="{}" width="{s}" height="{s}" {}/>"#,
                    num(y),
                    paint("fill", *color),
                    s = num(SWATCH)
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{}</text>"#,
                    num(SWATCH + 4.0),
                    num(y + 10.0),
                    escape(name)
                );
            }
            out.push_str("</g>\n");
        }
        Legend::Gradient { scale, lo, hi } => {
            let _ = writeln!(
                out,
                r#"<g class="legend" transform="translate({} {})">"#,
                num(MARGIN),
                num(ly)
            );
            let step = BAR_W / BAR_STEPS as f64;
            for k in 0..BAR_STEPS {
                let v = lo + (hi - lo) * k as f64 / (BAR_STEPS - 1) as f64;
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="0" width="{}" height="{}" {}/>"#,
                    num(k as f64 * step),
                    num(step),
                    num(BAR_H),
                    paint("fill", scale.map_value(Some(v)))
                );
            }
            for (x, anchor, v) in [(0.0, "start", lo), (BAR_W, "end", hi)] {
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{}</text>"#,
                    num(x),
                    num(BAR_H + 11.0),
                    escape(&v.to_string())
                );
            }
            out.push_str("</g>\n");
        }
    }
    out.push_str("</svg>\n");
    Ok(out.into_bytes())
}
