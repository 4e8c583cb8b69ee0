use num_complex::Complex64;

use super::grid::{AngularLayout, PolarGrid};
use super::operator::{AssembledOperator, CenterPolicy, Csr, NodeLayout, OperatorData};
use crate::domain::{SectorKind, SectorProblem};
use crate::error::Result;
use crate::scalar::Scalar;

/// Center treatment used by [`assemble`].
///
/// Only the `ell = 0` Floquet sector and the NND quarter problem contain
/// functions that do not vanish at the origin; everything else is forced to
/// `u(0) = 0` by symmetry.
pub fn center_policy(problem: &SectorProblem) -> CenterPolicy {
    match problem.kind {
        SectorKind::Floquet { ell: 0, .. } => CenterPolicy::RegularityStencil,
        SectorKind::Quarter(c) if c.neumann_at_zero() && c.neumann_at_right_angle() => {
            CenterPolicy::RegularityStencil
        }
        _ => CenterPolicy::DirichletAtCenter,
    }
}

/// Assembles `problem` with `m` cells in both directions.
pub fn assemble(problem: &SectorProblem, m: usize) -> Result<AssembledOperator> {
    assemble_cells(problem, m, m)
}

/// Assembles `problem` with `m` radial and `m_theta` angular cells.
pub fn assemble_cells(problem: &SectorProblem, m: usize, m_theta: usize) -> Result<AssembledOperator> {
    let grid = PolarGrid::for_problem(problem, m, m_theta)?;
    let policy = center_policy(problem);
    let layout = NodeLayout::new(&grid, policy == CenterPolicy::RegularityStencil);
    let seam = match grid.angular {
        AngularLayout::Periodic { .. } => seam_phase(problem),
        AngularLayout::Bounded { .. } => Complex64::new(1.0, 0.0),
    };
    let (data, mass) = if seam.im == 0.0 {
        let (a, s, mass) = build::<f64>(&grid, &layout, seam);
        (OperatorData::Real { a, s }, mass)
    } else {
        let (a, s, mass) = build::<Complex64>(&grid, &layout, seam);
        (OperatorData::Complex { a, s }, mass)
    };
    Ok(AssembledOperator {
        n: layout.len(),
        data,
        mass,
        grid,
        layout,
        sector: problem.tag(),
        center: policy,
        symmetric: false,
    })
}

/// `exp(2 pi i ell / N)`, exactly real for `ell = 0` and `ell = N/2`.
fn seam_phase(problem: &SectorProblem) -> Complex64 {
    match problem.kind {
        SectorKind::Floquet { ell: 0, .. } => Complex64::new(1.0, 0.0),
        SectorKind::Floquet { ell, n } if 2 * ell == n => Complex64::new(-1.0, 0.0),
        SectorKind::Floquet { ell, n } => {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ell as f64 / n as f64)
        }
        SectorKind::Quarter(_) => Complex64::new(1.0, 0.0),
    }
}

pub(crate) fn cell_areas(grid: &PolarGrid, layout: &NodeLayout) -> Vec<f64> {
    layout
        .nodes
        .iter()
        .map(|node| match *node {
            super::Node::Center => grid.theta_extent * grid.r(1).powi(2) / 8.0,
            super::Node::Ring { i, j } => {
                let h = grid.r(i + 1) - grid.r(i - 1);
                grid.r(i) * 0.5 * h * grid.ray_weight(j) * grid.dtheta
            }
        })
        .collect()
}

/// Stiffness matrix `S` over the layout's unknowns and `A = D^{-1} S`.
///
/// `S` is the finite-volume form of `-Laplace`: radial faces at `r_{i +- 1/2}`,
/// angular faces between rays, trapezoid weights on Neumann edges. On a uniform
/// grid `A` is exactly the centered polar difference operator.
pub(crate) fn build<T: Scalar>(
    grid: &PolarGrid,
    layout: &NodeLayout,
    seam: Complex64,
) -> (Csr<T>, Csr<T>, Vec<f64>) {
    let n = layout.len();
    let mut trip: Vec<(usize, usize, T)> = Vec::with_capacity(5 * n + 2 * grid.m_theta);
    let dth = grid.dtheta;
    let periodic = matches!(grid.angular, AngularLayout::Periodic { .. });

    if let Some(c) = layout.center {
        // Flux through the circle r = h/2 into each ray of ring 1.
        for j in grid.rays() {
            let coupling = 0.5 * grid.ray_weight(j) * dth;
            trip.push((c, c, T::of_real(coupling)));
            if let Some(q) = layout.index_of(1, j) {
                trip.push((c, q, T::of_real(-coupling)));
            }
        }
    }

    for (p, node) in layout.nodes.iter().enumerate() {
        let super::Node::Ring { i, j } = *node else { continue };
        let w = grid.ray_weight(j);
        let (r_lo, r, r_hi) = (grid.r(i - 1), grid.r(i), grid.r(i + 1));

        for (ii, r_face, h) in [(i + 1, 0.5 * (r + r_hi), r_hi - r), (i - 1, 0.5 * (r + r_lo), r - r_lo)] {
            let c = r_face * w * dth / h;
            trip.push((p, p, T::of_real(c)));
            if ii == 0 {
                if let Some(q) = layout.center {
                    trip.push((p, q, T::of_real(-c)));
                }
            } else if let Some(q) = layout.index_of(ii, j) {
                trip.push((p, q, T::of_real(-c)));
            }
        }

        let ca = 0.5 * (r_hi - r_lo) / (r * dth);
        for step in [1isize, -1] {
            let jj = j as isize + step;
            let (jj, phase) = if periodic {
                let m = grid.m_theta as isize;
                if jj == m {
                    (0, seam)
                } else if jj < 0 {
                    ((m - 1) as usize, seam.conj())
                } else {
                    (jj as usize, Complex64::new(1.0, 0.0))
                }
            } else if jj < 0 || jj > grid.m_theta as isize {
                continue;
            } else {
                (jj as usize, Complex64::new(1.0, 0.0))
            };
            trip.push((p, p, T::of_real(ca)));
            if let Some(q) = layout.index_of(i, jj) {
                trip.push((p, q, T::from_complex(phase * -ca)));
            }
        }
    }

    let s = Csr::from_triplets(n, trip);
    let mass = cell_areas(grid, layout);
    let mut a = s.clone();
    for (row, &area) in mass.iter().enumerate() {
        let inv = T::of_real(1.0 / area);
        for k in a.row_ptr[row]..a.row_ptr[row + 1] {
            a.vals[k] *= inv;
        }
    }
    (a, s, mass)
}
