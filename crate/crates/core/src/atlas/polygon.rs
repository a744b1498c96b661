use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{AtlasError, AtlasKind, Hemi, RegionId, RegionRef, RingRole, View};
use crate::color::Rgb;
use crate::geom::{signed_area, Point2};

/// One ring of one piece of a region, in panel-local units with y up.
///
/// Rings are stored open: the closing edge from the last vertex back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionShape {
    pub label: String,
    pub area: String,
    pub hemi: Hemi,
    pub view: View,
    pub piece: u32,
    pub color: Rgb,
    pub ring_role: RingRole,
    pub ring: Vec<Point2>,
}

impl RegionShape {
    pub fn region_id(&self) -> RegionId {
        RegionId::new(self.label.clone(), self.hemi.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonAtlas {
    pub name: String,
    pub kind: AtlasKind,
    pub regions: Vec<RegionShape>,
}

impl PolygonAtlas {
    /// Distinct regions in first-appearance order.
    pub fn region_refs(&self) -> Vec<RegionRef> {
        let mut seen = HashSet::new();
        self.regions
            .iter()
            .filter(|s| seen.insert((s.label.as_str(), s.hemi)))
            .map(|s| RegionRef {
                id: s.region_id(),
                area: s.area.clone(),
                color: s.color,
            })
            .collect()
    }

    /// Number of (label, hemi, view, piece) tuples, i.e. outer rings.
    pub fn piece_count(&self) -> usize {
        self.regions
            .iter()
            .filter(|s| s.ring_role == RingRole::Outer)
            .count()
    }

    pub fn views(&self) -> Vec<View> {
        let mut views: Vec<View> = self.regions.iter().map(|s| s.view).collect();
        views.sort();
        views.dedup();
        views
    }

    pub fn hemis(&self) -> Vec<Hemi> {
        let mut hemis: Vec<Hemi> = self.regions.iter().map(|s| s.hemi).collect();
        hemis.sort();
        hemis.dedup();
        hemis
    }

    pub fn to_doc(&self) -> PolygonAtlasDoc {
        PolygonAtlasDoc {
            name: self.name.clone(),
            kind: self.kind.as_str().to_string(),
            regions: self
                .regions
                .iter()
                .map(|s| RegionShapeDoc {
                    label: s.label.clone(),
                    area: s.area.clone(),
                    hemi: s.hemi.as_str().to_string(),
                    view: s.view.as_str().to_string(),
                    piece: u64::from(s.piece),
                    color: s.color.to_string(),
                    ring_role: s.ring_role.as_str().to_string(),
                    ring: s.ring.clone(),
                })
                .collect(),
        }
    }
}

/// Untyped polygon atlas document as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonAtlasDoc {
    pub name: String,
    pub kind: String,
    pub regions: Vec<RegionShapeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionShapeDoc {
    pub label: String,
    pub area: String,
    pub hemi: String,
    pub view: String,
    pub piece: u64,
    pub color: String,
    pub ring_role: String,
    pub ring: Vec<[f64; 2]>,
}

/// Checks every polygon-atlas invariant.
///
/// Rings are cleaned (consecutive duplicates and a repeated closing vertex
/// dropped) and reoriented so outer rings are counter-clockwise and holes
/// clockwise. Each (label, hemi, view, piece) has exactly one outer ring;
/// hole rings share the piece index of the outer ring they cut.
pub fn validate_polygon_atlas(doc: PolygonAtlasDoc) -> Result<PolygonAtlas, AtlasError> {
    let kind: AtlasKind = doc.kind.parse()?;
    let mut regions = Vec::with_capacity(doc.regions.len());
    let mut outers: HashSet<(String, Hemi, View, u32)> = HashSet::new();
    let mut region_attrs: HashMap<(String, Hemi), (String, Rgb)> = HashMap::new();

    for raw in doc.regions {
        let hemi: Hemi = raw.hemi.parse()?;
        let view: View = raw.view.parse()?;
        let role: RingRole = raw.ring_role.parse()?;
        if !view.valid_for(kind) {
            return Err(AtlasError::ViewInvalidForKind { view, kind });
        }
        if kind == AtlasKind::Cortical && hemi == Hemi::Midline {
            return Err(AtlasError::HemiInvalidForKind {
                hemi: hemi.to_string(),
                kind,
            });
        }
        let piece = u32::try_from(raw.piece).map_err(|_| AtlasError::UnknownValue {
            field: "piece",
            value: raw.piece.to_string(),
        })?;
        let color = Rgb::from_hex(&raw.color).map_err(|source| AtlasError::Color {
            label: raw.label.clone(),
            source,
        })?;

        let ring = clean_ring(raw.ring, &raw.label, piece, role)?;

        match region_attrs.get(&(raw.label.clone(), hemi)) {
            Some((area, c)) if *area != raw.area || *c != color => {
                return Err(AtlasError::InconsistentRegion {
                    label: raw.label,
                    hemi,
                });
            }
            Some(_) => {}
            None => {
                region_attrs.insert((raw.label.clone(), hemi), (raw.area.clone(), color));
            }
        }

        if role == RingRole::Outer && !outers.insert((raw.label.clone(), hemi, view, piece)) {
            return Err(AtlasError::DuplicateShape {
                label: raw.label,
                hemi,
                view,
                piece,
            });
        }

        regions.push(RegionShape {
            label: raw.label,
            area: raw.area,
            hemi,
            view,
            piece,
            color,
            ring_role: role,
            ring,
        });
    }

    for s in regions.iter().filter(|s| s.ring_role == RingRole::Hole) {
        if !outers.contains(&(s.label.clone(), s.hemi, s.view, s.piece)) {
            return Err(AtlasError::OrphanHole {
                label: s.label.clone(),
                hemi: s.hemi,
                view: s.view,
                piece: s.piece,
            });
        }
    }

    Ok(PolygonAtlas {
        name: doc.name,
        kind,
        regions,
    })
}

fn clean_ring(
    raw: Vec<[f64; 2]>,
    label: &str,
    piece: u32,
    role: RingRole,
) -> Result<Vec<Point2>, AtlasError> {
    if raw.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(AtlasError::NonFiniteRing {
            label: label.to_string(),
            piece,
        });
    }
    let mut ring = raw;
    ring.dedup();
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    if ring.len() < 3 {
        return Err(AtlasError::RingTooShort {
            label: label.to_string(),
            piece,
            count: ring.len(),
        });
    }
    let area = signed_area(&ring);
    if area == 0.0 {
        return Err(AtlasError::DegenerateRing {
            label: label.to_string(),
            piece,
        });
    }
    let want_positive = role == RingRole::Outer;
    if (area > 0.0) != want_positive {
        ring.reverse();
    }
    Ok(ring)
}

/// Groups the shapes of a view into pieces keyed by (label, hemi, piece):
/// outer ring first, then holes.
pub(crate) fn pieces_by_key<'a>(
    shapes: &[&'a RegionShape],
) -> BTreeMap<(String, Hemi, u32), Vec<&'a RegionShape>> {
    let mut out: BTreeMap<(String, Hemi, u32), Vec<&'a RegionShape>> = BTreeMap::new();
    for s in shapes {
        out.entry((s.label.clone(), s.hemi, s.piece))
            .or_default()
            .push(s);
    }
    for rings in out.values_mut() {
        rings.sort_by_key(|s| s.ring_role != RingRole::Outer);
    }
    out
}
