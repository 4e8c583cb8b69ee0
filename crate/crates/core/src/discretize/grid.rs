use std::f64::consts::{FRAC_PI_2, PI};

use crate::domain::{SectorKind, SectorProblem};
use crate::error::{Error, Result};

/// Angular boundary treatment of a sector grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularLayout {
    /// Rays `j = 0..M-1`; ray `M` is ray `0` times `exp(i phase)`.
    Periodic { phase: f64 },
    /// Rays `j = 0..=M`; an edge ray is an unknown iff its condition is Neumann.
    Bounded { neumann_lo: bool, neumann_hi: bool },
}

/// Polar grid of one sector.
///
/// The radial grid is uniform on `[0, R1]` and on `[R1, R2]` separately, with
/// `round(M R1/R2)` inner cells, so that the crack circle is a grid circle.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    /// Radial cells.
    pub m: usize,
    /// Angular cells.
    pub m_theta: usize,
    /// `r_0 = 0 < r_1 < ... < r_m = R2`.
    pub radii: Vec<f64>,
    /// Index of the grid circle carrying the cracks.
    pub crack_ring: usize,
    pub theta_extent: f64,
    pub dtheta: f64,
    pub angular: AngularLayout,
    pub r1_requested: f64,
    pub r1_snapped: f64,
    pub epsilon_requested: f64,
    pub epsilon_snapped: f64,
    /// Ray indices `lo..=hi` carrying the crack on `crack_ring`; `None` when open.
    pub crack_rays: Option<(usize, usize)>,
}

impl PolarGrid {
    /// Grid for `problem` with `m` radial and `m_theta` angular cells.
    pub fn for_problem(problem: &SectorProblem, m: usize, m_theta: usize) -> Result<Self> {
        if m < 8 || m_theta < 8 {
            return Err(Error::validation(format!(
                "grid needs at least 8 cells per direction, got M={m}, M_theta={m_theta}"
            )));
        }
        let g = &problem.geometry;
        let (r1, r2) = (g.r1(), g.r2());
        let inner = (m as f64 * r1 / r2).round() as usize;
        if inner == 0 || inner >= m {
            return Err(Error::Geometry(format!(
                "R1={r1} snaps to {} on a {m}-cell radial grid of R2={r2}",
                if inner == 0 { "the center" } else { "the outer circle" }
            )));
        }
        let mut radii = Vec::with_capacity(m + 1);
        radii.extend((0..=inner).map(|i| r1 * i as f64 / inner as f64));
        let outer = m - inner;
        radii.extend((1..=outer).map(|i| r1 + (r2 - r1) * i as f64 / outer as f64));
        radii[m] = r2;

        let theta_extent = problem.angular_extent();
        let dtheta = theta_extent / m_theta as f64;
        let eps = g.epsilon();
        let j0 = (eps / dtheta).round() as usize;
        let (angular, crack_rays, epsilon_snapped) = match problem.kind {
            SectorKind::Floquet { ell, n } => {
                let phase = 2.0 * PI * ell as f64 / n as f64;
                let rays = if g.is_open() || 2 * j0 >= m_theta {
                    None
                } else {
                    Some((j0, m_theta - j0))
                };
                let snapped = if rays.is_some() { j0 as f64 * dtheta } else { PI / n as f64 };
                (AngularLayout::Periodic { phase }, rays, snapped)
            }
            SectorKind::Quarter(case) => {
                let rays = if g.is_open() || j0 >= m_theta { None } else { Some((j0, m_theta)) };
                let snapped = if rays.is_some() { j0 as f64 * dtheta } else { FRAC_PI_2 };
                let layout = AngularLayout::Bounded {
                    neumann_lo: case.neumann_at_zero(),
                    neumann_hi: case.neumann_at_right_angle(),
                };
                (layout, rays, snapped)
            }
        };
        Ok(PolarGrid {
            m,
            m_theta,
            radii,
            crack_ring: inner,
            theta_extent,
            dtheta,
            angular,
            r1_requested: r1,
            r1_snapped: r1,
            epsilon_requested: eps,
            epsilon_snapped,
            crack_rays,
        })
    }

    pub fn r(&self, i: usize) -> f64 {
        self.radii[i]
    }

    /// Nominal spacing `R2 / M`.
    pub fn dr(&self) -> f64 {
        self.radii[self.m] / self.m as f64
    }

    pub fn dr_inner(&self) -> f64 {
        self.radii[1]
    }

    pub fn dr_outer(&self) -> f64 {
        self.radii[self.m] - self.radii[self.m - 1]
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta
    }

    /// Rays that exist on every ring, Dirichlet edges included.
    pub fn rays(&self) -> std::ops::Range<usize> {
        match self.angular {
            AngularLayout::Periodic { .. } => 0..self.m_theta,
            AngularLayout::Bounded { .. } => 0..self.m_theta + 1,
        }
    }

    /// Ray `j` carries unknowns (false on Dirichlet edges).
    pub fn ray_is_free(&self, j: usize) -> bool {
        match self.angular {
            AngularLayout::Periodic { .. } => j < self.m_theta,
            AngularLayout::Bounded { neumann_lo, neumann_hi } => {
                (j > 0 && j < self.m_theta)
                    || (j == 0 && neumann_lo)
                    || (j == self.m_theta && neumann_hi)
            }
        }
    }

    /// Trapezoid weight of ray `j`: 1/2 on bounded edges.
    pub fn ray_weight(&self, j: usize) -> f64 {
        match self.angular {
            AngularLayout::Periodic { .. } => 1.0,
            AngularLayout::Bounded { .. } => {
                if j == 0 || j == self.m_theta {
                    0.5
                } else {
                    1.0
                }
            }
        }
    }

    pub fn is_crack(&self, i: usize, j: usize) -> bool {
        match self.crack_rays {
            Some((lo, hi)) => i == self.crack_ring && j >= lo && j <= hi,
            None => false,
        }
    }

    /// Node `(i, j)` with `1 <= i < m` is an unknown of the eigenproblem.
    pub fn is_unknown(&self, i: usize, j: usize) -> bool {
        i >= 1 && i < self.m && self.ray_is_free(j) && !self.is_crack(i, j)
    }
}
