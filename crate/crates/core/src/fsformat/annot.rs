use std::io::Cursor;

use byteorder::{BigEndian, ReadBytesExt, WriteBytesExt};

use super::FsFormatError;

const HAS_COLOR_TABLE: i32 = 1;
const COLOR_TABLE_V2: i32 = -2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorTableEntry {
    pub id: i32,
    pub name: String,
    pub r: u8,
    pub g: u8,
    pub b: u8,
    pub flag: i32,
}

impl ColorTableEntry {
    /// Packed vertex label: `r + g·2⁸ + b·2¹⁶`.
    pub fn code(&self) -> i32 {
        i32::from(self.r) + (i32::from(self.g) << 8) + (i32::from(self.b) << 16)
    }

    pub fn color(&self) -> crate::color::Rgb {
        crate::color::Rgb::new(self.r, self.g, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorTable {
    /// Name of the lookup table the entries were taken from.
    pub source: String,
    pub entries: Vec<ColorTableEntry>,
}

impl ColorTable {
    pub fn entry_for_code(&self, code: i32) -> Option<&ColorTableEntry> {
        self.entries.iter().find(|e| e.code() == code)
    }
}

/// Per-vertex region labels plus an optional embedded color table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawAnnotation {
    /// (vertex index, packed color code); code 0 means unlabeled.
    pub vertex_labels: Vec<(i32, i32)>,
    pub color_table: Option<ColorTable>,
}

impl RawAnnotation {
    /// Returns the first referenced code that is neither 0 nor present in
    /// the color table.
    pub fn unknown_code(&self) -> Option<i32> {
        self.vertex_labels.iter().map(|&(_, c)| c).find(|&c| {
            c != 0
                && self
                    .color_table
                    .as_ref()
                    .is_none_or(|t| t.entry_for_code(c).is_none())
        })
    }
}

/// Layout (big-endian int32 unless noted): vertex count; that many
/// (vertex, code) pairs; then optionally a color table: a has-table flag
/// (1), the version tag (-2), the structure count, the source name as
/// length + NUL-terminated bytes, the entry count, and per entry: id,
/// name length + NUL-terminated name, r, g, b, flag.
pub fn read_annot(bytes: &[u8]) -> Result<RawAnnotation, FsFormatError> {
    let mut cur = Cursor::new(bytes);
    let n = cur
        .read_i32::<BigEndian>()
        .map_err(|_| FsFormatError::Truncated("vertex count"))?;
    let n = usize::try_from(n).map_err(|_| FsFormatError::NegativeCount {
        what: "vertex",
        count: n,
    })?;
    if (bytes.len() as u64).saturating_sub(4) < n as u64 * 8 {
        return Err(FsFormatError::Truncated("vertex labels"));
    }
    let mut vertex_labels = Vec::with_capacity(n);
    for _ in 0..n {
        vertex_labels.push((cur.read_i32::<BigEndian>()?, cur.read_i32::<BigEndian>()?));
    }

    if cur.position() as usize == bytes.len() {
        return Ok(RawAnnotation {
            vertex_labels,
            color_table: None,
        });
    }
    let flag = cur
        .read_i32::<BigEndian>()
        .map_err(|_| FsFormatError::Truncated("table flag"))?;
    let color_table = match flag {
        0 => None,
        HAS_COLOR_TABLE => Some(read_color_table(&mut cur)?),
        other => return Err(FsFormatError::UnknownTableTag(other)),
    };
    Ok(RawAnnotation {
        vertex_labels,
        color_table,
    })
}

fn read_color_table(cur: &mut Cursor<&[u8]>) -> Result<ColorTable, FsFormatError> {
    let tag = cur
        .read_i32::<BigEndian>()
        .map_err(|_| FsFormatError::Truncated("table tag"))?;
    if tag > 0 {
        return Err(FsFormatError::LegacyColorTable(tag));
    }
    if tag != COLOR_TABLE_V2 {
        return Err(FsFormatError::UnknownTableTag(tag));
    }
    let _structures = cur.read_i32::<BigEndian>()?;
    let source = read_string(cur, "table source")?;
    let count = cur.read_i32::<BigEndian>()?;
    let count = usize::try_from(count).map_err(|_| FsFormatError::NegativeCount {
        what: "color table entry",
        count,
    })?;
    let mut entries = Vec::with_capacity(count.min(4096));
    for _ in 0..count {
        let id = cur.read_i32::<BigEndian>()?;
        let name = read_string(cur, "structure name")?;
        let mut channel = || -> Result<u8, FsFormatError> {
            let value = cur.read_i32::<BigEndian>()?;
            u8::try_from(value).map_err(|_| FsFormatError::InvalidChannel {
                name: name.clone(),
                value,
            })
        };
        let (r, g, b) = (channel()?, channel()?, channel()?);
        let flag = cur.read_i32::<BigEndian>()?;
        entries.push(ColorTableEntry {
            id,
            name,
            r,
            g,
            b,
            flag,
        });
    }
    Ok(ColorTable { source, entries })
}

fn read_string(cur: &mut Cursor<&[u8]>, what: &'static str) -> Result<String, FsFormatError> {
    let len = cur.read_i32::<BigEndian>()?;
    let len =
        usize::try_from(len).map_err(|_| FsFormatError::NegativeCount { what, count: len })?;
    let start = cur.position() as usize;
    let buf = cur.get_ref();
    if buf.len() - start < len {
        return Err(FsFormatError::Truncated(what));
    }
    let raw = &buf[start..start + len];
    cur.set_position((start + len) as u64);
    let text = std::str::from_utf8(raw).map_err(|_| FsFormatError::InvalidText(what))?;
    Ok(text.trim_end_matches('\0').to_string())
}

pub fn write_annot(annotation: &RawAnnotation) -> Vec<u8> {
    let mut out = Vec::new();
    // Writes into a Vec cannot fail.
    out.write_i32::<BigEndian>(annotation.vertex_labels.len() as i32)
        .unwrap();
    for &(v, code) in &annotation.vertex_labels {
        out.write_i32::<BigEndian>(v).unwrap();
        out.write_i32::<BigEndian>(code).unwrap();
    }
    if let Some(table) = &annotation.color_table {
        let structures = table.entries.iter().map(|e| e.id + 1).max().unwrap_or(0);
        out.write_i32::<BigEndian>(HAS_COLOR_TABLE).unwrap();
        out.write_i32::<BigEndian>(COLOR_TABLE_V2).unwrap();
        out.write_i32::<BigEndian>(structures.max(table.entries.len() as i32))
            .unwrap();
        write_string(&mut out, &table.source);
        out.write_i32::<BigEndian>(table.entries.len() as i32)
            .unwrap();
        for e in &table.entries {
            out.write_i32::<BigEndian>(e.id).unwrap();
            write_string(&mut out, &e.name);
            for c in [e.r, e.g, e.b] {
                out.write_i32::<BigEndian>(i32::from(c)).unwrap();
            }
            out.write_i32::<BigEndian>(e.flag).unwrap();
        }
    }
    out
}

fn write_string(out: &mut Vec<u8>, s: &str) {
    out.write_i32::<BigEndian>(s.len() as i32 + 1).unwrap();
    out.extend_from_slice(s.as_bytes());
    out.push(0);
}
