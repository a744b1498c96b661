//! Polygon (2D) and mesh (3D) atlas models.
//!
//! Both atlas kinds are immutable once validated. Raw documents
//! ([`PolygonAtlasDoc`], [`MeshAtlasDoc`]) carry plain strings straight from
//! the JSON file; [`validate_polygon_atlas`] and [`validate_mesh_atlas`]
//! turn them into typed atlases or report the first violated invariant.

mod io;
mod mesh_atlas;
mod polygon;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::color::ColorError;
use crate::mesh::TriMeshError;

pub use io::{parse_atlas, serialize_atlas, Atlas, MESH_FORMAT, POLYGON_FORMAT};
pub(crate) use io::{parse_tagged, to_canonical_bytes};
pub use mesh_atlas::{
    validate_mesh_atlas, MeshAtlas, MeshAtlasDoc, MeshRegion, MeshRegionDoc, SurfaceSet,
    SurfaceSetDoc, TriMeshDoc,
};
pub(crate) use polygon::pieces_by_key;
pub use polygon::{
    validate_polygon_atlas, PolygonAtlas, PolygonAtlasDoc, RegionShape, RegionShapeDoc,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("unknown {field} {value:?}")]
    UnknownValue { field: &'static str, value: String },
    #[error("duplicate shape (label {label:?}, hemi {hemi}, view {view}, piece {piece})")]
    DuplicateShape {
        label: String,
        hemi: Hemi,
        view: View,
        piece: u32,
    },
    #[error("ring of {label:?} piece {piece} has {count} distinct vertices; at least 3 required")]
    RingTooShort {
        label: String,
        piece: u32,
        count: usize,
    },
    #[error("ring of {label:?} piece {piece} has zero area")]
    DegenerateRing { label: String, piece: u32 },
    #[error("ring of {label:?} piece {piece} has a non-finite coordinate")]
    NonFiniteRing { label: String, piece: u32 },
    #[error("hole ring of {label:?} (hemi {hemi}, view {view}, piece {piece}) has no outer ring")]
    OrphanHole {
        label: String,
        hemi: Hemi,
        view: View,
        piece: u32,
    },
    #[error("view invalid for kind: {view} in a {kind} atlas")]
    ViewInvalidForKind { view: View, kind: AtlasKind },
    #[error("hemisphere invalid for kind: {hemi} in a {kind} atlas")]
    HemiInvalidForKind { hemi: String, kind: AtlasKind },
    #[error("region {label:?} ({hemi}) has inconsistent area or color across its shapes")]
    InconsistentRegion { label: String, hemi: Hemi },
    #[error("region {label:?}: {source}")]
    Color {
        label: String,
        #[source]
        source: ColorError,
    },
    #[error("region {label:?} on {surface}/{hemi}: {source}")]
    Mesh {
        surface: Surface,
        hemi: MeshHemi,
        label: String,
        #[source]
        source: TriMeshError,
    },
    #[error("duplicate surface set {surface}/{hemi}")]
    DuplicateSurface { surface: Surface, hemi: MeshHemi },
    #[error("surface set {surface}/{hemi} invalid for a {kind} atlas")]
    SurfaceInvalidForKind {
        surface: Surface,
        hemi: MeshHemi,
        kind: AtlasKind,
    },
    #[error("cortical atlas is missing surface {surface} for hemisphere {hemi}")]
    MissingSurface { surface: Surface, hemi: MeshHemi },
    #[error(
        "subcortical atlas must carry exactly one surface set (subcortical/subcort), found {0}"
    )]
    SubcorticalSurfaceCount(usize),
    #[error("cortical atlas carries no surfaces")]
    NoSurfaces,
    #[error("duplicate label {label:?} in surface set {surface}/{hemi}")]
    DuplicateLabel {
        surface: Surface,
        hemi: MeshHemi,
        label: String,
    },
    #[error("unknown format tag {0:?}")]
    UnknownFormat(String),
    #[error("document has no \"format\" tag")]
    MissingFormat,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid atlas document: {0}")]
    Schema(String),
}

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident, $field:literal { $($variant:ident => $text:literal $(| $alias:literal)*),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = AtlasError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text $(| $alias)* => Ok($name::$variant),)+
                    _ => Err(AtlasError::UnknownValue { field: $field, value: s.to_string() }),
                }
            }
        }
    };
}

string_enum!(AtlasKind, "atlas kind" {
    Cortical => "cortical",
    Subcortical => "subcortical",
});

string_enum!(
    /// Hemisphere of a 2D region shape.
    Hemi, "hemisphere" {
    Left => "left",
    Right => "right",
    Midline => "midline",
});

string_enum!(View, "view" {
    Lateral => "lateral",
    Medial => "medial",
    Axial => "axial",
    Sagittal => "sagittal",
    Coronal => "coronal",
});

string_enum!(RingRole, "ring role" {
    Outer => "outer",
    Hole => "hole",
});

string_enum!(
    /// Mesh surface. `semi_inflated` also parses from the legacy name `LCBC`.
    Surface, "surface" {
    White => "white",
    SemiInflated => "semi_inflated" | "LCBC",
    Inflated => "inflated",
    Subcortical => "subcortical",
});

string_enum!(
    /// Hemisphere of a mesh surface set.
    MeshHemi, "hemisphere" {
    Left => "left",
    Right => "right",
    Subcort => "subcort",
});

impl View {
    pub fn valid_for(self, kind: AtlasKind) -> bool {
        match kind {
            AtlasKind::Cortical => matches!(self, View::Lateral | View::Medial),
            AtlasKind::Subcortical => matches!(self, View::Axial | View::Sagittal | View::Coronal),
        }
    }
}

impl Surface {
    pub const CORTICAL: [Surface; 3] = [Surface::White, Surface::SemiInflated, Surface::Inflated];
}

/// Identity of a plottable region across both atlas kinds: its
/// software-native label plus hemisphere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionId {
    pub label: String,
    pub hemi: String,
}

impl RegionId {
    pub fn new(label: impl Into<String>, hemi: impl Into<String>) -> Self {
        RegionId {
            label: label.into(),
            hemi: hemi.into(),
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label, self.hemi)
    }
}

/// A region as seen by the statistics join: identity plus display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionRef {
    pub id: RegionId,
    pub area: String,
    pub color: crate::color::Rgb,
}
