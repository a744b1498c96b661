//! Readers and writers for big-endian triangle-surface and annotation
//! binaries.
//!
//! Both formats are read from and written to in-memory byte slices; the
//! caller owns file I/O.

mod annot;
mod surface;

use thiserror::Error;

pub use annot::{read_annot, write_annot, ColorTable, ColorTableEntry, RawAnnotation};
pub use surface::{read_surface, write_surface, RawSurface, TRIANGLE_MAGIC};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsFormatError {
    #[error("bad magic {0:02X?}: only triangle surfaces (FF FF FE) are supported")]
    BadMagic([u8; 3]),
    #[error("truncated payload while reading {0}")]
    Truncated(&'static str),
    #[error("negative {what} count {count}")]
    NegativeCount { what: &'static str, count: i32 },
    #[error("face {face}: vertex index {index} out of range (vertex count {vertex_count})")]
    IndexOutOfRange {
        face: usize,
        index: i32,
        vertex_count: usize,
    },
    #[error("{0} is not valid UTF-8")]
    InvalidText(&'static str),
    #[error("surface comment must not contain an empty line or end with a newline")]
    InvalidComment,
    #[error("unknown color table tag {0}")]
    UnknownTableTag(i32),
    #[error("legacy color table (positive entry count {0}) is not supported; version 2 only")]
    LegacyColorTable(i32),
    #[error("color table entry {name:?}: channel value {value} outside 0..=255")]
    InvalidChannel { name: String, value: i32 },
}

impl From<std::io::Error> for FsFormatError {
    fn from(_: std::io::Error) -> Self {
        FsFormatError::Truncated("payload")
    }
}
