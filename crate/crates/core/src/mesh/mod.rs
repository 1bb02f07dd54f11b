//! Tetrahedral vorticity meshes: storage and validation, TetGen-format
//! file I/O ([`tetgen`]), and self-contained generators ([`generate`]).

mod generate;
mod tetgen;

pub use generate::{ball_mesh, lattice_mesh, random_ball_points, ring_tube_mesh, sample_node_ids};
pub use tetgen::{load_tetgen, load_vorticity_csv, write_tetgen, write_velocity_csv};

use crate::error::MeshError;
use crate::geometry::{max_edge_sq, signed_volume};
use crate::vec3::Vec3;

/// One tetrahedral cell: four node indices plus the cached squared diameter
/// (maximum squared edge length), which the solver's skip test uses on
/// every ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetra {
    pub nodes: [usize; 4],
    pub h2: f64,
}

/// A tetrahedral mesh carrying a piecewise-linear vorticity field: one
/// vorticity vector per node, interpolated linearly over each cell.
///
/// Construction validates and canonicalizes: node indices must be in range
/// and distinct per cell, cells with (near-)zero volume are rejected, and
/// every stored cell is positively oriented (cells arriving with negative
/// signed volume get their last two nodes swapped). The mesh is immutable
/// in the solver and safe to share across worker threads.
#[derive(Debug, Clone)]
pub struct TetMesh {
    pub nodes: Vec<Vec3>,
    pub vorticity: Vec<Vec3>,
    pub tets: Vec<Tetra>,
    /// Node numbering base of the file this mesh was read from (0 for
    /// generated meshes); file writers reuse it so ids round-trip.
    pub index_base: usize,
}

/// Relative volume threshold below which a cell counts as degenerate:
/// |volume| ≤ `DEGENERATE_REL_VOL`·diam³.
pub const DEGENERATE_REL_VOL: f64 = 1e-12;

impl TetMesh {
    /// Build a mesh from node positions and cell connectivity, with
    /// vorticity zero-filled.
    ///
    /// Rejects non-finite coordinates, out-of-range or repeated node
    /// indices, and degenerate cells (listing every offending cell index).
    pub fn new(nodes: Vec<Vec3>, cells: Vec<[usize; 4]>) -> Result<Self, MeshError> {
        for (i, p) in nodes.iter().enumerate() {
            if !p.is_finite() {
                return Err(MeshError::Validation(format!(
                    "node {i} has non-finite coordinates {p:?}"
                )));
            }
        }
        let n = nodes.len();
        let mut tets = Vec::with_capacity(cells.len());
        let mut degenerate = Vec::new();
        for (c, ids) in cells.into_iter().enumerate() {
            for &id in &ids {
                if id >= n {
                    return Err(MeshError::Validation(format!(
                        "cell {c} references node {id}, but the mesh has {n} nodes"
                    )));
                }
            }
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if ids[i] == ids[j] {
                        return Err(MeshError::Validation(format!(
                            "cell {c} repeats node {}",
                            ids[i]
                        )));
                    }
                }
            }
            let verts = [nodes[ids[0]], nodes[ids[1]], nodes[ids[2]], nodes[ids[3]]];
            let h2 = max_edge_sq(&verts);
            let vol = signed_volume(&verts);
            if vol.abs() <= DEGENERATE_REL_VOL * h2.powf(1.5) {
                degenerate.push(c);
                continue;
            }
            let nodes_oriented = if vol < 0.0 { [ids[0], ids[1], ids[3], ids[2]] } else { ids };
            tets.push(Tetra { nodes: nodes_oriented, h2 });
        }
        if !degenerate.is_empty() {
            return Err(MeshError::Validation(format!(
                "degenerate (near-zero volume) cells: {degenerate:?}"
            )));
        }
        let vorticity = vec![Vec3::ZERO; n];
        Ok(TetMesh { nodes, vorticity, tets, index_base: 0 })
    }

    /// Sample a vorticity field at every node: `vorticity[i] = field(nodes[i])`.
    pub fn set_vorticity(&mut self, field: impl Fn(Vec3) -> Vec3) {
        self.vorticity = self.nodes.iter().map(|&p| field(p)).collect();
    }

    /// Replace the nodal vorticity with explicit values (length-checked).
    pub fn set_vorticity_values(&mut self, values: Vec<Vec3>) -> Result<(), MeshError> {
        if values.len() != self.nodes.len() {
            return Err(MeshError::Validation(format!(
                "{} vorticity values for {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        self.vorticity = values;
        Ok(())
    }

    /// Vertex positions of cell `t`.
    #[inline]
    pub fn cell_vertices(&self, t: usize) -> [Vec3; 4] {
        let ids = self.tets[t].nodes;
        [self.nodes[ids[0]], self.nodes[ids[1]], self.nodes[ids[2]], self.nodes[ids[3]]]
    }

    /// Nodal vorticities of cell `t`.
    #[inline]
    pub fn cell_vorticities(&self, t: usize) -> [Vec3; 4] {
        let ids = self.tets[t].nodes;
        [
            self.vorticity[ids[0]],
            self.vorticity[ids[1]],
            self.vorticity[ids[2]],
            self.vorticity[ids[3]],
        ]
    }

    /// Signed volume of cell `t` (positive for every stored cell).
    pub fn cell_volume(&self, t: usize) -> f64 {
        signed_volume(&self.cell_vertices(t))
    }

    /// Sum of all cell volumes.
    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.cell_volume(t)).sum()
    }

    /// Largest cell diameter in the mesh (maximum edge length).
    pub fn max_diameter(&self) -> f64 {
        self.tets.iter().map(|t| t.h2).fold(0.0f64, f64::max).sqrt()
    }
}
