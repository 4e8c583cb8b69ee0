//! Second-order finite differences for the Dirichlet Laplacian in polar
//! coordinates on one symmetry sector.

mod assemble;
mod grid;
mod operator;

pub use assemble::{assemble, assemble_cells, center_policy};
pub use grid::{AngularLayout, PolarGrid};
pub use operator::{AssembledOperator, CenterPolicy, Csr, Node, NodeLayout, OperatorData};


/// Wrapper for free-function style calls: `A v`.
pub fn apply(op: &AssembledOperator, v: &[f64]) -> crate::Result<Vec<f64>> {
    op.apply(v)
}
