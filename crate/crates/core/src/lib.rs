//! Brain parcellation atlas toolkit.
//!
//! * [`atlas`]: polygon and mesh atlas models with canonical JSON encoding.
//! * [`fsformat`]: big-endian triangle-surface and annotation binaries.
//! * [`stats`]: statistics tables, wide-to-long reshaping, and the
//!   region join.
//! * [`scale`]: discrete and gradient color scales with NA handling.
//! * [`plot2d`]: panel layout, faceting and SVG choropleths.
//! * [`meshops`]: region extraction, Laplacian inflation, glass brains.
//! * [`render3d`]: scenes, camera presets, software rasterizer, scene export.
//! * [`pipeline`]: mesh atlas to polygon atlas conversion.

pub mod atlas;
pub mod color;
pub mod fsformat;
pub mod geom;
pub mod mesh;
pub mod meshops;
pub mod pipeline;
pub mod plot2d;
pub mod render3d;
pub mod scale;
pub mod stats;
pub mod toy;

pub use atlas::{Atlas, AtlasKind, MeshAtlas, PolygonAtlas, RegionId};
pub use color::{Rgb, Rgba};
pub use mesh::TriMesh;
