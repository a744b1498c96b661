//! Value-to-color mapping: atlas-native discrete palettes and piecewise
//! linear gradients, with a separate color and alpha for missing values.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::atlas::RegionId;
use crate::color::{alpha_byte, ColorError, Rgb, Rgba};
use crate::geom::round_channel;
use crate::stats::{JoinResult, JoinTarget};

pub const DEFAULT_NA_COLOR: Rgb = Rgb::new(0xBE, 0xBE, 0xBE);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("a gradient needs at least 2 colors, got {0}")]
    TooFewColors(usize),
    #[error("breakpoints must be strictly ascending (entry {index}: {value})")]
    NotAscending { index: usize, value: f64 },
    #[error("breakpoint {0} is not finite")]
    NonFiniteBreakpoint(f64),
    #[error("data range [{lo}, {hi}] cannot space colors evenly")]
    BadRange { lo: f64, hi: f64 },
    #[error("area {area:?} has two colors: {first} and {second}")]
    ConflictingAreaColor {
        area: String,
        first: Rgb,
        second: Rgb,
    },
    #[error("atlas has no regions to build a palette from")]
    EmptyPalette,
    #[error("NA alpha {0} outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("palette entry {entry:?}: {message}")]
    Palette { entry: String, message: String },
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("value column {0:?} not present in joined data")]
    MissingValueColumn(String),
    #[error("a gradient scale needs a value column")]
    NoValueColumn,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stop {
    pub at: f64,
    pub color: Rgb,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleMode {
    /// Area name to color.
    Discrete(BTreeMap<String, Rgb>),
    /// Strictly ascending, at least two stops.
    Gradient(Vec<Stop>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorScale {
    pub mode: ScaleMode,
    pub na_color: Rgb,
    pub na_alpha: f64,
}

impl ColorScale {
    pub fn with_na(mut self, color: Rgb, alpha: f64) -> Result<ColorScale, ScaleError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ScaleError::InvalidAlpha(alpha));
        }
        self.na_color = color;
        self.na_alpha = alpha;
        Ok(self)
    }

    pub fn na(&self) -> Rgba {
        self.na_color.with_alpha(alpha_byte(self.na_alpha))
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.mode, ScaleMode::Discrete(_))
    }

    /// Gradient lookup. Values are clamped to the outer stops; a missing
    /// (or NaN) value yields the NA color. Discrete scales always yield NA.
    pub fn map_value(&self, value: Option<f64>) -> Rgba {
        let (ScaleMode::Gradient(stops), Some(v)) = (&self.mode, value.filter(|v| !v.is_nan()))
        else {
            return self.na();
        };
        let first = stops[0];
        let last = stops[stops.len() - 1];
        if v <= first.at {
            return first.color.opaque();
        }
        if v >= last.at {
            return last.color.opaque();
        }
        let i = stops.partition_point(|s| s.at < v);
        let (a, b) = (stops[i - 1], stops[i]);
        let t = (v - a.at) / (b.at - a.at);
        let lerp = |x: u8, y: u8| round_channel(f64::from(x) + t * (f64::from(y) - f64::from(x)));
        Rgba::new(
            lerp(a.color.r, b.color.r),
            lerp(a.color.g, b.color.g),
            lerp(a.color.b, b.color.b),
            255,
        )
    }

    /// Discrete lookup by area name; unknown areas (and gradient scales) get NA.
    pub fn map_area(&self, area: &str) -> Option<Rgba> {
        match &self.mode {
            ScaleMode::Discrete(map) => map.get(area).map(|c| c.opaque()),
            ScaleMode::Gradient(_) => None,
        }
    }
}

/// Discrete scale reproducing the atlas's own region colors.
pub fn brain_palette<T: JoinTarget + ?Sized>(atlas: &T) -> Result<ColorScale, ScaleError> {
    let mut map: BTreeMap<String, Rgb> = BTreeMap::new();
    for r in atlas.join_regions() {
        match map.get(&r.area) {
            Some(&c) if c != r.color => {
                return Err(ScaleError::ConflictingAreaColor {
                    area: r.area,
                    first: c,
                    second: r.color,
                })
            }
            Some(_) => {}
            None => {
                map.insert(r.area, r.color);
            }
        }
    }
    if map.is_empty() {
        return Err(ScaleError::EmptyPalette);
    }
    Ok(ColorScale {
        mode: ScaleMode::Discrete(map),
        na_color: DEFAULT_NA_COLOR,
        na_alpha: 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PaletteSpec {
    /// Spread evenly over the data range.
    Colors(Vec<Rgb>),
    /// Explicit (color, breakpoint) pairs.
    Breakpoints(Vec<(Rgb, f64)>),
}

/// Parses `"red=0,white=0.5,blue=1"` or `"#ff0000,#00ff00,#0000ff"`.
pub fn parse_palette(text: &str) -> Result<PaletteSpec, ScaleError> {
    let entries: Vec<&str> = text.split(',').map(str::trim).collect();
    let with_breaks = entries.iter().filter(|e| e.contains('=')).count();
    if with_breaks == 0 {
        let colors = entries
            .iter()
            .map(|e| Rgb::parse(e))
            .collect::<Result<_, _>>()?;
        return Ok(PaletteSpec::Colors(colors));
    }
    let mut pairs = Vec::with_capacity(entries.len());
    for e in &entries {
        let Some((name, at)) = e.split_once('=') else {
            return Err(ScaleError::Palette {
                entry: e.to_string(),
                message: "mix of plain colors and breakpoints".into(),
            });
        };
        let at: f64 = at.trim().parse().map_err(|_| ScaleError::Palette {
            entry: e.to_string(),
            message: "breakpoint is not a number".into(),
        })?;
        pairs.push((Rgb::parse(name)?, at));
    }
    Ok(PaletteSpec::Breakpoints(pairs))
}

/// Builds a gradient. Plain colors are spaced evenly over `range`
/// (`lo + k·(hi − lo)/(n − 1)`); explicit breakpoints are used as given and
/// the range is ignored.
pub fn make_gradient(palette: &PaletteSpec, range: (f64, f64)) -> Result<ColorScale, ScaleError> {
    let stops: Vec<Stop> = match palette {
        PaletteSpec::Colors(colors) => {
            if colors.len() < 2 {
                return Err(ScaleError::TooFewColors(colors.len()));
            }
            let (lo, hi) = range;
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ScaleError::BadRange { lo, hi });
            }
            let n = (colors.len() - 1) as f64;
            colors
                .iter()
                .enumerate()
                .map(|(k, &color)| Stop {
                    at: lo + k as f64 * (hi - lo) / n,
                    color,
                })
                .collect()
        }
        PaletteSpec::Breakpoints(pairs) => {
            if pairs.len() < 2 {
                return Err(ScaleError::TooFewColors(pairs.len()));
            }
            pairs
                .iter()
                .map(|&(color, at)| Stop { at, color })
                .collect()
        }
    };
    for (i, s) in stops.iter().enumerate() {
        if !s.at.is_finite() {
            return Err(ScaleError::NonFiniteBreakpoint(s.at));
        }
        if i > 0 && s.at <= stops[i - 1].at {
            return Err(ScaleError::NotAscending {
                index: i,
                value: s.at,
            });
        }
    }
    Ok(ColorScale {
        mode: ScaleMode::Gradient(stops),
        na_color: DEFAULT_NA_COLOR,
        na_alpha: 1.0,
    })
}

/// Fill per region; `missing` records the regions that received the NA color.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Fills {
    pub colors: BTreeMap<RegionId, Rgba>,
    pub missing: BTreeSet<RegionId>,
}

impl Fills {
    pub fn get(&self, id: &RegionId) -> Option<Rgba> {
        self.colors.get(id).copied()
    }

    pub fn is_missing(&self, id: &RegionId) -> bool {
        self.missing.contains(id)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn valued_count(&self) -> usize {
        self.colors.len() - self.missing.len()
    }
}

/// Colors every joined region. Gradient scales read `value_column`;
/// discrete scales color by area name and ignore it.
pub fn resolve_fill(
    join: &JoinResult,
    value_column: Option<&str>,
    scale: &ColorScale,
) -> Result<Fills, ScaleError> {
    let column = match value_column {
        Some(name) => Some(
            join.column(name)
                .ok_or_else(|| ScaleError::MissingValueColumn(name.into()))?,
        ),
        None => None,
    };
    if column.is_none() && !scale.is_discrete() {
        return Err(ScaleError::NoValueColumn);
    }
    let mut fills = Fills::default();
    for pair in &join.pairs {
        let color = if scale.is_discrete() {
            scale.map_area(&pair.region.area)
        } else {
            let v = column.and_then(|c| pair.values[c]);
            v.map(|v| scale.map_value(Some(v)))
        };
        let id = pair.region.id.clone();
        match color {
            Some(c) => {
                fills.colors.insert(id, c);
            }
            None => {
                fills.colors.insert(id.clone(), scale.na());
                fills.missing.insert(id);
            }
        }
    }
    Ok(fills)
}

/// Smallest and largest present value of a joined column.
pub fn value_range(join: &JoinResult, column: &str) -> Option<(f64, f64)> {
    let c = join.column(column)?;
    join.pairs
        .iter()
        .filter_map(|p| p.values[c])
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}
