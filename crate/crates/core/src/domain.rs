//! Geometry of the cracked disk and its symmetry-reduced eigenvalue problems.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Slack accepted on the upper bound of `epsilon` so that `pi/N` typed as a
/// decimal still counts as the fully open interface.
const EPS_SLACK: f64 = 1e-12;

/// Disk of radius `R2` with `N` symmetric Dirichlet cracks on the circle `r = R1`.
///
/// The holes are centered at `theta = 2 pi j / N` and have half-opening `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackedDiskSpec {
    n: u32,
    epsilon: f64,
    r1: f64,
    r2: f64,
}

impl CrackedDiskSpec {
    pub fn new(n: u32, epsilon: f64, r1: f64, r2: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if n < 1 {
            problems.push(format!("N must be >= 1, got {n}"));
        }
        if !(r1 > 0.0) || !r1.is_finite() {
            problems.push(format!("R1 must be > 0, got {r1}"));
        }
        if !(r2 > r1) || !r2.is_finite() {
            problems.push(format!("R2 must be > R1, got R1={r1}, R2={r2}"));
        }
        if n >= 1 {
            let max = PI / n as f64;
            if !(epsilon >= 0.0) || epsilon > max + EPS_SLACK {
                problems.push(format!("epsilon must lie in [0, pi/N = {max:.6}], got {epsilon}"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let epsilon = epsilon.min(PI / n as f64);
        Ok(CrackedDiskSpec { n, epsilon, r1, r2 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Same geometry with another opening.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.n, epsilon, self.r1, self.r2)
    }

    /// Angular extent `2 pi / N` of one rotation sector.
    pub fn sector_angle(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// `pi/N - epsilon`, the half-width of each crack arc. For `N = 2` this is
    /// the `delta = pi/2 - epsilon` of the quarter-disk asymptotics.
    pub fn delta(&self) -> f64 {
        (PI / self.n as f64 - self.epsilon).max(0.0)
    }

    /// The interface is fully open: the domain is the plain disk `B_{R2}`.
    pub fn is_open(&self) -> bool {
        self.delta() <= EPS_SLACK
    }
}

/// Validated construction of a [`CrackedDiskSpec`].
pub fn build_cracked_disk(n: u32, epsilon: f64, r1: f64, r2: f64) -> Result<CrackedDiskSpec> {
    CrackedDiskSpec::new(n, epsilon, r1, r2)
}

/// Boundary conditions of the `N = 2` quarter-disk problems: the letters give
/// the conditions on `theta = 0`, on `theta = pi/2` and on the crack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuarterCase {
    Nnd,
    Ddd,
    Ndd,
    Dnd,
}

impl QuarterCase {
    pub const ALL: [QuarterCase; 4] = [QuarterCase::Nnd, QuarterCase::Ddd, QuarterCase::Ndd, QuarterCase::Dnd];

    pub fn label(self) -> &'static str {
        match self {
            QuarterCase::Nnd => "NND",
            QuarterCase::Ddd => "DDD",
            QuarterCase::Ndd => "NDD",
            QuarterCase::Dnd => "DND",
        }
    }

    /// Neumann condition on the ray `theta = 0`.
    pub fn neumann_at_zero(self) -> bool {
        matches!(self, QuarterCase::Nnd | QuarterCase::Ndd)
    }

    /// Neumann condition on the ray `theta = pi/2`.
    pub fn neumann_at_right_angle(self) -> bool {
        matches!(self, QuarterCase::Nnd | QuarterCase::Dnd)
    }
}

impl fmt::Display for QuarterCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for QuarterCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NND" => Ok(QuarterCase::Nnd),
            "DDD" => Ok(QuarterCase::Ddd),
            "NDD" => Ok(QuarterCase::Ndd),
            "DND" => Ok(QuarterCase::Dnd),
            _ => Err(Error::validation(format!(
                "unknown quarter case {s:?}, expected NND, DDD, NDD or DND"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorKind {
    /// Functions with `u(theta + 2 pi/N) = exp(2 pi i ell/N) u(theta)`.
    Floquet { ell: u32, n: u32 },
    Quarter(QuarterCase),
}

impl SectorKind {
    pub fn label(&self) -> String {
        match self {
            SectorKind::Floquet { ell, .. } => format!("l={ell}"),
            SectorKind::Quarter(c) => c.label().to_string(),
        }
    }
}

/// One symmetry-reduced eigenvalue problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorProblem {
    pub kind: SectorKind,
    pub geometry: CrackedDiskSpec,
}

impl SectorProblem {
    pub fn floquet(geometry: CrackedDiskSpec, ell: u32) -> Result<Self> {
        let n = geometry.n();
        if ell > n / 2 {
            return Err(Error::validation(format!(
                "Floquet index {ell} outside 0..={} for N={n}",
                n / 2
            )));
        }
        Ok(SectorProblem {
            kind: SectorKind::Floquet { ell, n },
            geometry,
        })
    }

    pub fn quarter(geometry: CrackedDiskSpec, case: QuarterCase) -> Result<Self> {
        if geometry.n() != 2 {
            return Err(Error::Unsupported(format!(
                "quarter-disk problems need N = 2, got N = {}",
                geometry.n()
            )));
        }
        Ok(SectorProblem {
            kind: SectorKind::Quarter(case),
            geometry,
        })
    }

    /// Angular extent of the computational sector.
    pub fn angular_extent(&self) -> f64 {
        match self.kind {
            SectorKind::Floquet { .. } => self.geometry.sector_angle(),
            SectorKind::Quarter(_) => FRAC_PI_2,
        }
    }

    pub fn tag(&self) -> SectorTag {
        let weight = match self.kind {
            SectorKind::Floquet { ell, n } if ell > 0 && 2 * ell < n => 2,
            _ => 1,
        };
        SectorTag { kind: self.kind, weight }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Ok(SectorProblem {
            kind: self.kind,
            geometry: self.geometry.with_epsilon(epsilon)?,
        })
    }
}

/// Sector label plus the multiplicity with which its eigenvalues enter the
/// spectrum of the whole domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorTag {
    pub kind: SectorKind,
    pub weight: u32,
}

impl SectorTag {
    pub fn label(&self) -> String {
        self.kind.label()
    }
}

impl fmt::Display for SectorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Floquet sectors `ell = 0..=N/2` with their weights.
pub fn reduce_to_sectors(spec: &CrackedDiskSpec) -> Vec<(SectorProblem, SectorTag)> {
    (0..=spec.n() / 2)
        .map(|ell| {
            let p = SectorProblem {
                kind: SectorKind::Floquet { ell, n: spec.n() },
                geometry: *spec,
            };
            (p, p.tag())
        })
        .collect()
}

/// NND, DDD, NDD and DND problems on the quarter disk.
pub fn quarter_problems(spec: &CrackedDiskSpec) -> Result<Vec<SectorProblem>> {
    QuarterCase::ALL
        .iter()
        .map(|&c| SectorProblem::quarter(*spec, c))
        .collect()
}

/// Closed angular interval `[start, end]` (radians, `end >= start`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.start + self.end)
    }
}

/// The `N` crack arcs on `r = R1`, centered at `(2j+1) pi / N`. A fully open
/// interface has no arcs.
pub fn crack_arcs(spec: &CrackedDiskSpec) -> Vec<Arc> {
    if spec.is_open() {
        return Vec::new();
    }
    let sector = spec.sector_angle();
    (0..spec.n())
        .map(|j| Arc {
            start: j as f64 * sector + spec.epsilon(),
            end: (j + 1) as f64 * sector - spec.epsilon(),
        })
        .collect()
}
