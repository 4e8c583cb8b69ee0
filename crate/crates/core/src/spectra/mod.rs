//! Sector solves combined into spectra of the whole domain, opening sweeps,
//! crossing detection and nodal-domain counts.

mod crossings;
mod nodal;
mod sweep;

pub use crossings::{detect_crossings, CrossingEvent};
pub use nodal::{eigenfunction, nodal_domains, unfold, GridFunction, NodalCount, DEFAULT_ZERO_TOL};
pub use sweep::{sweep, EigenvalueCurve, SectorCurve, SweepConfig, SweepFamily};

use crate::discretize::assemble;
use crate::domain::{quarter_problems, reduce_to_sectors, CrackedDiskSpec, SectorProblem, SectorTag};
use crate::eigensolve::{
    default_cluster_tol, group_multiplicities, lowest_eigenpairs_with, Cluster, SolverOptions, Spectrum,
};
use crate::error::Result;

/// One sector eigenvalue inside a merged spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergedEntry {
    pub eigenvalue: f64,
    pub residual: f64,
    pub sector: SectorTag,
    /// Position within its own sector (0-based).
    pub index: usize,
}

/// Weighted union of sector spectra, sorted by eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedSpectrum {
    pub entries: Vec<MergedEntry>,
    pub sectors: Vec<Spectrum>,
}

impl MergedSpectrum {
    pub fn from_sectors(sectors: Vec<Spectrum>) -> Self {
        let mut entries: Vec<MergedEntry> = sectors
            .iter()
            .flat_map(|s| {
                s.eigenvalues.iter().zip(&s.residuals).enumerate().map(move |(index, (&eigenvalue, &residual))| {
                    MergedEntry { eigenvalue, residual, sector: s.sector, index }
                })
            })
            .collect();
        entries.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
        MergedSpectrum { entries, sectors }
    }

    /// Eigenvalues repeated by sector weight.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.eigenvalue, e.sector.weight as usize))
            .collect()
    }

    /// The first `count` eigenvalues counted with multiplicity.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.expanded().into_iter().take(count).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// Degenerate levels with multiplicities.
    pub fn levels(&self, cluster_tol: f64) -> Vec<Cluster> {
        let values: Vec<f64> = self.entries.iter().map(|e| e.eigenvalue).collect();
        let weights: Vec<u32> = self.entries.iter().map(|e| e.sector.weight).collect();
        group_multiplicities(&values, &weights, cluster_tol)
    }

    /// Tolerance from the residuals and the largest stored eigenvalue.
    pub fn default_cluster_tol(&self) -> f64 {
        let top = self.entries.last().map_or(0.0, |e| e.eigenvalue);
        default_cluster_tol(self.max_residual(), top)
    }
}

fn solve_problems(problems: &[SectorProblem], m: usize, k: usize, opts: &SolverOptions) -> Result<MergedSpectrum> {
    let spectra = problems
        .iter()
        .map(|p| lowest_eigenpairs_with(&assemble(p, m)?, k, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(MergedSpectrum::from_sectors(spectra))
}

/// Spectrum of the cracked disk from its Floquet sectors, `k` eigenvalues per sector.
pub fn solve_full_spectrum(spec: &CrackedDiskSpec, m: usize, k: usize, tol: f64) -> Result<MergedSpectrum> {
    let opts = SolverOptions { tol, ..SolverOptions::default() };
    solve_full_spectrum_with(spec, m, k, &opts)
}

pub fn solve_full_spectrum_with(
    spec: &CrackedDiskSpec,
    m: usize,
    k: usize,
    opts: &SolverOptions,
) -> Result<MergedSpectrum> {
    let problems: Vec<SectorProblem> = reduce_to_sectors(spec).into_iter().map(|(p, _)| p).collect();
    solve_problems(&problems, m, k, opts)
}

/// Spectrum of the `N = 2` cracked disk from the four quarter-disk problems.
pub fn solve_quarter_spectrum(spec: &CrackedDiskSpec, m: usize, k: usize, tol: f64) -> Result<MergedSpectrum> {
    let opts = SolverOptions { tol, ..SolverOptions::default() };
    solve_problems(&quarter_problems(spec)?, m, k, &opts)
}

/// `lambda_1^NDD - lambda_1^DND` at one opening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub epsilon: f64,
    pub epsilon_snapped: f64,
    pub ndd: f64,
    pub dnd: f64,
    pub gap: f64,
}

/// First NDD and DND eigenvalues of the `N = 2` quarter disk along `epsilon_list`.
pub fn ndd_dnd_gap(
    r1: f64,
    r2: f64,
    epsilon_list: &[f64],
    m: usize,
    tol: f64,
    jobs: Option<usize>,
) -> Result<Vec<GapPoint>> {
    use crate::domain::QuarterCase;
    let template = CrackedDiskSpec::new(2, epsilon_list.first().copied().unwrap_or(0.0), r1, r2)?;
    let config = SweepConfig {
        m,
        k: 1,
        tol,
        jobs,
        family: SweepFamily::Cases(vec![QuarterCase::Ndd, QuarterCase::Dnd]),
    };
    let curve = sweep(&template, epsilon_list, &config)?;
    Ok((0..curve.epsilon.len())
        .map(|t| {
            let ndd = curve.sectors[0].values[t][0];
            let dnd = curve.sectors[1].values[t][0];
            GapPoint {
                epsilon: curve.epsilon[t],
                epsilon_snapped: curve.epsilon_snapped[t],
                ndd,
                dnd,
                gap: ndd - dnd,
            }
        })
        .collect())
}
