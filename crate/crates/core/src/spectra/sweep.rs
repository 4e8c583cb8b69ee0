use rayon::prelude::*;

use crate::discretize::assemble;
use crate::domain::{quarter_problems, reduce_to_sectors, CrackedDiskSpec, QuarterCase, SectorProblem, SectorTag};
use crate::eigensolve::{lowest_eigenpairs_with, SolverOptions, Spectrum};
use crate::error::{Error, Result};

use super::MergedSpectrum;

/// Which sector problems a sweep solves.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepFamily {
    /// Floquet sectors `ell = 0..=N/2`.
    Floquet,
    /// All four quarter-disk problems (`N = 2`).
    Quarter,
    /// A subset of the quarter-disk problems.
    Cases(Vec<QuarterCase>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Radial and angular cells per sector.
    pub m: usize,
    /// Eigenvalues per sector.
    pub k: usize,
    pub tol: f64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub family: SweepFamily,
}

impl SweepConfig {
    pub fn floquet(m: usize, k: usize, tol: f64) -> Self {
        SweepConfig { m, k, tol, jobs: None, family: SweepFamily::Floquet }
    }

    pub(crate) fn problems(&self, spec: &CrackedDiskSpec) -> Result<Vec<SectorProblem>> {
        match &self.family {
            SweepFamily::Floquet => Ok(reduce_to_sectors(spec).into_iter().map(|(p, _)| p).collect()),
            SweepFamily::Quarter => quarter_problems(spec),
            SweepFamily::Cases(cases) => cases.iter().map(|&c| SectorProblem::quarter(*spec, c)).collect(),
        }
    }

    pub(crate) fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, keep_vectors: false, ..SolverOptions::default() }
    }
}

/// Eigenvalues of one sector along the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorCurve {
    pub tag: SectorTag,
    /// `values[t][i]` is eigenvalue `i` at opening `t`.
    pub values: Vec<Vec<f64>>,
    pub residuals: Vec<Vec<f64>>,
}

/// Sector eigenvalues as functions of the opening.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueCurve {
    pub template: CrackedDiskSpec,
    pub config: SweepConfig,
    pub epsilon: Vec<f64>,
    pub epsilon_snapped: Vec<f64>,
    pub sectors: Vec<SectorCurve>,
}

impl EigenvalueCurve {
    pub fn len(&self) -> usize {
        self.epsilon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilon.is_empty()
    }

    /// Merged spectrum at sweep point `t`.
    pub fn merged_at(&self, t: usize) -> MergedSpectrum {
        let spectra = self
            .sectors
            .iter()
            .map(|c| Spectrum {
                eigenvalues: c.values[t].clone(),
                residuals: c.residuals[t].clone(),
                sector: c.tag,
                epsilon_snapped: self.epsilon_snapped[t],
                r1_snapped: self.template.r1(),
                tolerance: self.config.tol,
                vectors: None,
            })
            .collect();
        MergedSpectrum::from_sectors(spectra)
    }

    pub fn max_residual(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|c| c.residuals.iter().flatten())
            .copied()
            .fold(0.0, f64::max)
    }

    /// Increases of a sector eigenvalue between consecutive openings beyond
    /// `slack`, as `(sector, index, t)` with `t` the later point.
    pub fn monotonicity_violations(&self, slack: f64) -> Vec<(SectorTag, usize, usize)> {
        let mut out = Vec::new();
        for c in &self.sectors {
            for t in 1..c.values.len() {
                for (i, (&a, &b)) in c.values[t - 1].iter().zip(&c.values[t]).enumerate() {
                    if b > a + slack {
                        out.push((c.tag, i, t));
                    }
                }
            }
        }
        out
    }
}

/// Solves every sector at every opening in `epsilon_list` (strictly ascending,
/// inside `[0, pi/N]`).
pub fn sweep(template: &CrackedDiskSpec, epsilon_list: &[f64], config: &SweepConfig) -> Result<EigenvalueCurve> {
    if epsilon_list.is_empty() {
        return Err(Error::validation("empty opening list"));
    }
    if let Some(w) = epsilon_list.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::validation(format!(
            "openings must be strictly ascending, got {} then {}",
            w[0], w[1]
        )));
    }
    if config.jobs == Some(0) {
        return Err(Error::validation("jobs must be at least 1"));
    }
    let specs = epsilon_list
        .iter()
        .map(|&e| template.with_epsilon(e))
        .collect::<Result<Vec<_>>>()?;
    let problems = specs.iter().map(|s| config.problems(s)).collect::<Result<Vec<_>>>()?;
    let n_sectors = problems[0].len();
    let opts = config.options();

    let tasks: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|t| (0..n_sectors).map(move |s| (t, s)))
        .collect();
    let run = || -> Result<Vec<Spectrum>> {
        tasks
            .par_iter()
            .map(|&(t, s)| lowest_eigenpairs_with(&assemble(&problems[t][s], config.m)?, config.k, &opts))
            .collect()
    };
    let solved = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let mut sectors: Vec<SectorCurve> = problems[0]
        .iter()
        .map(|p| SectorCurve { tag: p.tag(), values: Vec::new(), residuals: Vec::new() })
        .collect();
    let mut epsilon_snapped = Vec::with_capacity(specs.len());
    for (&(t, s), sp) in tasks.iter().zip(solved) {
        if s == 0 {
            debug_assert_eq!(epsilon_snapped.len(), t);
            epsilon_snapped.push(sp.epsilon_snapped);
        }
        sectors[s].values.push(sp.eigenvalues);
        sectors[s].residuals.push(sp.residuals);
    }
    Ok(EigenvalueCurve {
        template: *template,
        config: config.clone(),
        epsilon: epsilon_list.to_vec(),
        epsilon_snapped,
        sectors,
    })
}
