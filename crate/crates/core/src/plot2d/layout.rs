use super::Plot2dError;
use crate::atlas::{AtlasKind, Hemi, PolygonAtlas, View};

/// Side length of one panel cell in SVG user units.
pub const CELL: f64 = 200.0;

const DISPERSED: [(Hemi, View); 4] = [
    (Hemi::Left, View::Lateral),
    (Hemi::Left, View::Medial),
    (Hemi::Right, View::Medial),
    (Hemi::Right, View::Lateral),
];
const SUBCORTICAL_VIEWS: [View; 3] = [View::Coronal, View::Sagittal, View::Axial];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Dispersed,
    Stacked,
}

/// One panel of the base grid. `hemi` is `None` for subcortical panels,
/// which show every hemisphere of their view together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Panel {
    pub hemi: Option<Hemi>,
    pub view: View,
    pub row: usize,
    pub col: usize,
}

impl Panel {
    pub fn contains(&self, hemi: Hemi, view: View) -> bool {
        self.view == view && self.hemi.is_none_or(|h| h == hemi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub title: Option<String>,
    pub row: usize,
    pub col: usize,
}

/// Panels arranged on a (rows, cols) grid, replicated once per facet.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelLayout {
    pub panels: Vec<Panel>,
    pub grid: (usize, usize),
    pub facets: Vec<Facet>,
    pub facet_grid: (usize, usize),
    pub panel_size: (f64, f64),
}

impl PanelLayout {
    fn single(panels: Vec<Panel>) -> PanelLayout {
        let rows = panels.iter().map(|p| p.row + 1).max().unwrap_or(0);
        let cols = panels.iter().map(|p| p.col + 1).max().unwrap_or(0);
        PanelLayout {
            panels,
            grid: (rows, cols),
            facets: vec![Facet {
                title: None,
                row: 0,
                col: 0,
            }],
            facet_grid: (1, 1),
            panel_size: (CELL, CELL),
        }
    }
}

/// Chooses panels from the atlas.
///
/// Cortical atlases default to one row `[left lateral, left medial, right
/// medial, right lateral]`; stacked puts the left hemisphere on the first
/// row and the right on the second, lateral before medial. Subcortical
/// atlases get one row of their views `[coronal, sagittal, axial]` and
/// accept neither a hemisphere filter nor a position.
pub fn select_panels(
    atlas: &PolygonAtlas,
    hemisphere: Option<Hemi>,
    view: Option<View>,
    position: Option<Position>,
) -> Result<PanelLayout, Plot2dError> {
    if let Some(v) = view {
        if !v.valid_for(atlas.kind) {
            return Err(Plot2dError::ViewInvalidForKind {
                view: v,
                kind: atlas.kind,
            });
        }
    }
    let present = |h: Option<Hemi>, v: View| {
        atlas
            .regions
            .iter()
            .any(|s| s.view == v && h.is_none_or(|h| s.hemi == h))
    };

    let panels: Vec<Panel> = match atlas.kind {
        AtlasKind::Subcortical => {
            if hemisphere.is_some() {
                return Err(Plot2dError::SubcorticalHemisphere);
            }
            if position.is_some() {
                return Err(Plot2dError::SubcorticalPosition);
            }
            SUBCORTICAL_VIEWS
                .into_iter()
                .filter(|&v| view.is_none_or(|f| f == v) && present(None, v))
                .enumerate()
                .map(|(col, v)| Panel {
                    hemi: None,
                    view: v,
                    row: 0,
                    col,
                })
                .collect()
        }
        AtlasKind::Cortical => {
            if hemisphere == Some(Hemi::Midline) {
                return Err(Plot2dError::HemiInvalid(Hemi::Midline.to_string()));
            }
            let chosen: Vec<(Hemi, View)> = DISPERSED
                .into_iter()
                .filter(|&(h, v)| {
                    hemisphere.is_none_or(|f| f == h)
                        && view.is_none_or(|f| f == v)
                        && present(Some(h), v)
                })
                .collect();
            match position.unwrap_or(Position::Dispersed) {
                Position::Dispersed => chosen
                    .into_iter()
                    .enumerate()
                    .map(|(col, (h, v))| Panel {
                        hemi: Some(h),
                        view: v,
                        row: 0,
                        col,
                    })
                    .collect(),
                Position::Stacked => {
                    let rows: Vec<Hemi> = [Hemi::Left, Hemi::Right]
                        .into_iter()
                        .filter(|h| chosen.iter().any(|c| c.0 == *h))
                        .collect();
                    let cols: Vec<View> = [View::Lateral, View::Medial]
                        .into_iter()
                        .filter(|v| chosen.iter().any(|c| c.1 == *v))
                        .collect();
                    let mut panels: Vec<Panel> = chosen
                        .into_iter()
                        .map(|(h, v)| Panel {
                            hemi: Some(h),
                            view: v,
                            row: rows.iter().position(|r| *r == h).unwrap(),
                            col: cols.iter().position(|c| *c == v).unwrap(),
                        })
                        .collect();
                    panels.sort_by_key(|p| (p.row, p.col));
                    panels
                }
            }
        }
    };
    if panels.is_empty() {
        return Err(Plot2dError::NoPanels);
    }
    Ok(PanelLayout::single(panels))
}

/// Replicates the base grid once per group, row-major with at most `ncol`
/// facet columns.
pub fn layout_facets(
    layout: &PanelLayout,
    groups: &[String],
    ncol: usize,
) -> Result<PanelLayout, Plot2dError> {
    if ncol < 1 {
        return Err(Plot2dError::BadColumns);
    }
    if groups.is_empty() {
        return Err(Plot2dError::NoGroups);
    }
    let cols = ncol.min(groups.len());
    let rows = groups.len().div_ceil(cols);
    let facets = groups
        .iter()
        .enumerate()
        .map(|(i, g)| Facet {
            title: Some(g.clone()),
            row: i / cols,
            col: i % cols,
        })
        .collect();
    Ok(PanelLayout {
        facets,
        facet_grid: (rows, cols),
        ..layout.clone()
    })
}
