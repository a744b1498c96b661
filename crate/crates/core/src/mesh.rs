//! Indexed triangle meshes.

use thiserror::Error;

use crate::geom::{Aabb, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriMeshError {
    #[error("face {face}: vertex index {index} out of range (vertex count {vertex_count})")]
    IndexOutOfRange {
        face: usize,
        index: u64,
        vertex_count: usize,
    },
    #[error("face {face} is degenerate (repeated vertex index)")]
    DegenerateFace { face: usize },
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFinite { vertex: usize },
}

/// Vertices are arbitrary Cartesian plot coordinates; faces are
/// zero-based vertex indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Result<TriMesh, TriMeshError> {
        let mesh = TriMesh { vertices, faces };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<(), TriMeshError> {
        if let Some(vertex) = self
            .vertices
            .iter()
            .position(|v| !v.iter().all(|c| c.is_finite()))
        {
            return Err(TriMeshError::NonFinite { vertex });
        }
        let n = self.vertices.len();
        for (face, f) in self.faces.iter().enumerate() {
            if let Some(&index) = f.iter().find(|&&i| i as usize >= n) {
                return Err(TriMeshError::IndexOutOfRange {
                    face,
                    index: u64::from(index),
                    vertex_count: n,
                });
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(TriMeshError::DegenerateFace { face });
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn bounds(&self) -> Option<Aabb> {
        Aabb::from_points(&self.vertices)
    }

    pub fn triangle(&self, face: usize) -> [Vec3; 3] {
        let f = self.faces[face];
        [
            self.vertices[f[0] as usize],
            self.vertices[f[1] as usize],
            self.vertices[f[2] as usize],
        ]
    }

    /// Appends `other`, offsetting its face indices.
    pub fn append(&mut self, other: &TriMesh) {
        let offset = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&other.vertices);
        self.faces.extend(
            other
                .faces
                .iter()
                .map(|f| [f[0] + offset, f[1] + offset, f[2] + offset]),
        );
    }

    /// Sorted, de-duplicated vertex adjacency built from face edges.
    pub fn neighbors(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.vertices.len()];
        for f in &self.faces {
            for k in 0..3 {
                let a = f[k];
                let b = f[(k + 1) % 3];
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}
