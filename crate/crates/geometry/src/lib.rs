//! Mesh and signed-distance-field geometry kernel.
//!
//! Everything downstream (scene synthesis, the shape autoencoder, the
//! evaluation metrics) is built on the types here: indexed triangle meshes,
//! analytic SDFs for primitive shapes, surface/edge point samplers, marching
//! cubes extraction, and the isotropic NDC normalization / metric rescale
//! pair. All operations are pure and deterministic under a fixed seed.

mod marching_cubes;
mod mesh;
mod ndc;
mod primitives;
mod sample;
mod sdf_grid;
mod shape;

pub use marching_cubes::{marching_cubes, McStatus};
pub use mesh::TriMesh;
pub use ndc::{normalize_to_ndc, rescale_mesh, rescale_points, NdcTransform};
pub use primitives::{box_mesh, icosphere};
pub use sample::{sample_edge_salient, sample_surface_uniform, EdgeSamples, SurfaceSamples};
pub use sdf_grid::SdfGrid;
pub use shape::{sdf_eval, PosedPrimitive, PrimitiveKind, ShapeSpec};

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("mesh has no faces")]
    EmptyMesh,
    #[error("face {face} references vertex {index} out of range (vertex count {count})")]
    FaceIndexOutOfRange { face: usize, index: u32, count: usize },
    #[error("face {0} is degenerate (zero area)")]
    DegenerateFace(usize),
    #[error("point set is degenerate: {0}")]
    DegeneratePoints(String),
    #[error("invalid shape spec: {0}")]
    InvalidShape(String),
    #[error("sdf grid is invalid: {0}")]
    InvalidGrid(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
