use std::io::Cursor;

use byteorder::{BigEndian, ReadBytesExt, WriteBytesExt};

use super::FsFormatError;

pub const TRIANGLE_MAGIC: [u8; 3] = [0xFF, 0xFF, 0xFE];

/// A triangle surface exactly as stored on disk.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawSurface {
    pub comment: String,
    pub vertices: Vec<[f32; 3]>,
    pub faces: Vec<[i32; 3]>,
}

impl RawSurface {
    pub fn new(
        comment: impl Into<String>,
        vertices: Vec<[f32; 3]>,
        faces: Vec<[i32; 3]>,
    ) -> Result<RawSurface, FsFormatError> {
        let s = RawSurface {
            comment: comment.into(),
            vertices,
            faces,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), FsFormatError> {
        if self.comment.contains("\n\n") || self.comment.ends_with('\n') {
            return Err(FsFormatError::InvalidComment);
        }
        check_faces(&self.faces, self.vertices.len())
    }

    pub fn to_trimesh(&self) -> crate::mesh::TriMesh {
        crate::mesh::TriMesh {
            vertices: self.vertices.iter().map(|v| v.map(f64::from)).collect(),
            faces: self.faces.iter().map(|f| f.map(|i| i as u32)).collect(),
        }
    }
}

fn check_faces(faces: &[[i32; 3]], vertex_count: usize) -> Result<(), FsFormatError> {
    for (face, f) in faces.iter().enumerate() {
        if let Some(&index) = f.iter().find(|&&i| i < 0 || i as usize >= vertex_count) {
            return Err(FsFormatError::IndexOutOfRange {
                face,
                index,
                vertex_count,
            });
        }
    }
    Ok(())
}

/// Layout: magic `FF FF FE`, creator comment terminated by `\n\n`, int32
/// vertex count, int32 face count, vertex xyz float32 triples, face int32
/// triples. Big-endian throughout. Trailing bytes (optional tag blocks
/// some writers append) are ignored.
pub fn read_surface(bytes: &[u8]) -> Result<RawSurface, FsFormatError> {
    if bytes.len() < 3 {
        return Err(FsFormatError::Truncated("magic"));
    }
    let magic = [bytes[0], bytes[1], bytes[2]];
    if magic != TRIANGLE_MAGIC {
        return Err(FsFormatError::BadMagic(magic));
    }
    let rest = &bytes[3..];
    let end = rest
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or(FsFormatError::Truncated("comment"))?;
    let comment = std::str::from_utf8(&rest[..end])
        .map_err(|_| FsFormatError::InvalidText("comment"))?
        .to_string();

    let mut cur = Cursor::new(&rest[end + 2..]);
    let nv = read_count(&mut cur, "vertex")?;
    let nf = read_count(&mut cur, "face")?;
    let remaining = cur.get_ref().len() as u64 - cur.position();
    if remaining < (nv as u64 + nf as u64) * 12 {
        return Err(FsFormatError::Truncated(if remaining < nv as u64 * 12 {
            "vertices"
        } else {
            "faces"
        }));
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push([
            cur.read_f32::<BigEndian>()?,
            cur.read_f32::<BigEndian>()?,
            cur.read_f32::<BigEndian>()?,
        ]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        faces.push([
            cur.read_i32::<BigEndian>()?,
            cur.read_i32::<BigEndian>()?,
            cur.read_i32::<BigEndian>()?,
        ]);
    }
    check_faces(&faces, nv)?;
    Ok(RawSurface {
        comment,
        vertices,
        faces,
    })
}

fn read_count(cur: &mut Cursor<&[u8]>, what: &'static str) -> Result<usize, FsFormatError> {
    let count = cur
        .read_i32::<BigEndian>()
        .map_err(|_| FsFormatError::Truncated("counts"))?;
    usize::try_from(count).map_err(|_| FsFormatError::NegativeCount { what, count })
}

pub fn write_surface(surface: &RawSurface) -> Vec<u8> {
    let mut out = Vec::with_capacity(
        3 + surface.comment.len() + 2 + 8 + 12 * (surface.vertices.len() + surface.faces.len()),
    );
    out.extend_from_slice(&TRIANGLE_MAGIC);
    out.extend_from_slice(surface.comment.as_bytes());
    out.extend_from_slice(b"\n\n");
    // Writes into a Vec cannot fail.
    out.write_i32::<BigEndian>(surface.vertices.len() as i32)
        .unwrap();
    out.write_i32::<BigEndian>(surface.faces.len() as i32)
        .unwrap();
    for v in &surface.vertices {
        for c in v {
            out.write_f32::<BigEndian>(*c).unwrap();
        }
    }
    for f in &surface.faces {
        for i in f {
            out.write_i32::<BigEndian>(*i).unwrap();
        }
    }
    out
}
