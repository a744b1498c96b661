//! 2D choropleths: panel selection, facet layout and SVG output.

mod layout;
mod svg;

use thiserror::Error;

use crate::atlas::{AtlasKind, View};

pub use layout::{layout_facets, select_panels, Facet, Panel, PanelLayout, Position, CELL};
pub use svg::{render_svg, Legend, RenderSpec2D};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Plot2dError {
    #[error("subcortical atlases have no option to show only a single hemisphere")]
    SubcorticalHemisphere,
    #[error("subcortical atlases have no option to show only a single hemisphere or stack them")]
    SubcorticalPosition,
    #[error("view {view} is not available for {kind} atlases")]
    ViewInvalidForKind { view: View, kind: AtlasKind },
    #[error("hemisphere {0} is not available for cortical atlases")]
    HemiInvalid(String),
    #[error("selection matches no panel in the atlas")]
    NoPanels,
    #[error("facet columns must be at least 1")]
    BadColumns,
    #[error("at least one facet group is required")]
    NoGroups,
    #[error("{facets} facets but {fills} fill sets")]
    FillCount { facets: usize, fills: usize },
    #[error("no fill for region {0}")]
    MissingFill(String),
    #[error("stroke width {0} must be finite and non-negative")]
    BadStrokeWidth(f64),
}
