//! Canonical JSON encoding of atlases.
//!
//! Output is deterministic: object keys are emitted in sorted order and
//! floats use the shortest representation that round-trips.

use serde_json::{Map, Value};

use super::{
    validate_mesh_atlas, validate_polygon_atlas, AtlasError, MeshAtlas, MeshAtlasDoc, PolygonAtlas,
    PolygonAtlasDoc,
};

pub const POLYGON_FORMAT: &str = "gatlas-poly/1";
pub const MESH_FORMAT: &str = "gatlas-mesh/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Atlas {
    Polygon(PolygonAtlas),
    Mesh(MeshAtlas),
}

impl Atlas {
    pub fn name(&self) -> &str {
        match self {
            Atlas::Polygon(a) => &a.name,
            Atlas::Mesh(a) => &a.name,
        }
    }

    pub fn format(&self) -> &'static str {
        match self {
            Atlas::Polygon(_) => POLYGON_FORMAT,
            Atlas::Mesh(_) => MESH_FORMAT,
        }
    }
}

impl From<PolygonAtlas> for Atlas {
    fn from(a: PolygonAtlas) -> Self {
        Atlas::Polygon(a)
    }
}

impl From<MeshAtlas> for Atlas {
    fn from(a: MeshAtlas) -> Self {
        Atlas::Mesh(a)
    }
}

pub fn serialize_atlas(atlas: &Atlas) -> Vec<u8> {
    let value = match atlas {
        Atlas::Polygon(a) => serde_json::to_value(a.to_doc()),
        Atlas::Mesh(a) => serde_json::to_value(a.to_doc()),
    }
    .expect("atlas documents contain only finite numbers and strings");
    to_canonical_bytes(value, atlas.format())
}

pub(crate) fn to_canonical_bytes(value: Value, format: &str) -> Vec<u8> {
    let mut map = match value {
        Value::Object(map) => map,
        _ => unreachable!("documents serialize to objects"),
    };
    map.insert("format".to_string(), Value::String(format.to_string()));
    let mut out = serde_json::to_vec(&Value::Object(map)).expect("in-memory serialization");
    out.push(b'\n');
    out
}

/// Parses a JSON document, splitting off its `format` tag.
pub(crate) fn parse_tagged(bytes: &[u8]) -> Result<(String, Map<String, Value>), AtlasError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| syntax_error(bytes, &e))?;
    let mut map = match value {
        Value::Object(map) => map,
        _ => return Err(AtlasError::Schema("top level must be an object".into())),
    };
    match map.remove("format") {
        Some(Value::String(tag)) => Ok((tag, map)),
        Some(other) => Err(AtlasError::UnknownFormat(other.to_string())),
        None => Err(AtlasError::MissingFormat),
    }
}

pub fn parse_atlas(bytes: &[u8]) -> Result<Atlas, AtlasError> {
    let (tag, map) = parse_tagged(bytes)?;
    let body = Value::Object(map);
    match tag.as_str() {
        POLYGON_FORMAT => {
            let doc: PolygonAtlasDoc =
                serde_json::from_value(body).map_err(|e| AtlasError::Schema(e.to_string()))?;
            validate_polygon_atlas(doc).map(Atlas::Polygon)
        }
        MESH_FORMAT => {
            let doc: MeshAtlasDoc =
                serde_json::from_value(body).map_err(|e| AtlasError::Schema(e.to_string()))?;
            validate_mesh_atlas(doc).map(Atlas::Mesh)
        }
        _ => Err(AtlasError::UnknownFormat(tag)),
    }
}

pub(crate) fn syntax_error(bytes: &[u8], e: &serde_json::Error) -> AtlasError {
    let offset = if e.is_eof() {
        bytes.len()
    } else {
        let line_start: usize = bytes
            .split_inclusive(|b| *b == b'\n')
            .take(e.line().saturating_sub(1))
            .map(<[u8]>::len)
            .sum();
        (line_start + e.column().saturating_sub(1)).min(bytes.len())
    };
    AtlasError::Syntax {
        offset,
        message: e.to_string(),
    }
}
