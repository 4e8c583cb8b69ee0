//! Lowest eigenpairs of an assembled sector operator with residual certificates.

mod banded;
mod dense;
mod krylov;

pub use banded::BandCholesky;

use num_complex::Complex64;

use crate::discretize::{AssembledOperator, Csr, OperatorData};
use crate::domain::SectorTag;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default residual tolerance `||A v - lambda v|| / ||v||`.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Bound on the relative Hermitian defect of `D A` accepted from assembly.
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense for `n <= dense_threshold`, Krylov otherwise.
    Auto,
    Krylov,
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub method: Method,
    pub dense_threshold: usize,
    pub max_restarts: usize,
    pub block: usize,
    pub seed: u64,
    pub keep_vectors: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            method: Method::Auto,
            dense_threshold: 600,
            max_restarts: 50,
            block: 2,
            seed: 0x5eed,
            keep_vectors: true,
        }
    }
}

/// Eigenvectors in the layout of the operator they came from.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenVectors {
    Real(Vec<Vec<f64>>),
    Complex(Vec<Vec<Complex64>>),
}

impl EigenVectors {
    pub fn len(&self) -> usize {
        match self {
            EigenVectors::Real(v) => v.len(),
            EigenVectors::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vector `i` promoted to complex.
    pub fn complex(&self, i: usize) -> Vec<Complex64> {
        match self {
            EigenVectors::Real(v) => v[i].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            EigenVectors::Complex(v) => v[i].clone(),
        }
    }
}

/// Certified lowest eigenvalues of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `||A v - lambda v||_2 / ||v||_2` per pair.
    pub residuals: Vec<f64>,
    pub sector: SectorTag,
    pub epsilon_snapped: f64,
    pub r1_snapped: f64,
    pub tolerance: f64,
    pub vectors: Option<EigenVectors>,
}

impl Spectrum {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Levels of this sector alone, each counted with the sector weight.
    pub fn grouped(&self, cluster_tol: f64) -> Vec<Cluster> {
        let w = vec![self.sector.weight; self.eigenvalues.len()];
        group_multiplicities(&self.eigenvalues, &w, cluster_tol)
    }
}

pub(crate) struct Pairs<T> {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Vec<Vec<T>>,
}

/// `k` smallest eigenvalues of `op` with residuals below `tol`.
pub fn lowest_eigenpairs(op: &AssembledOperator, k: usize, tol: f64) -> Result<Spectrum> {
    lowest_eigenpairs_with(op, k, &SolverOptions { tol, ..SolverOptions::default() })
}

pub fn lowest_eigenpairs_with(op: &AssembledOperator, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    if k < 1 || 4 * k > op.n {
        return Err(Error::validation(format!(
            "need 1 <= k <= n/4, got k={k}, n={}",
            op.n
        )));
    }
    if !(opts.tol >= 1e-12) {
        return Err(Error::validation(format!("tolerance must be >= 1e-12, got {}", opts.tol)));
    }
    let defect = op.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Numeric(format!(
            "D A is not Hermitian (relative defect {defect:e}); eigenvalues would not be real"
        )));
    }
    let (values, residuals, vectors) = match &op.data {
        OperatorData::Real { a, s } => {
            let p = solve(a, s, &op.mass, k, opts, op.n)?;
            (p.values, p.residuals, EigenVectors::Real(p.vectors))
        }
        OperatorData::Complex { a, s } => {
            let p = solve(a, s, &op.mass, k, opts, op.n)?;
            (p.values, p.residuals, EigenVectors::Complex(p.vectors))
        }
    };
    if let Some(bad) = residuals.iter().position(|&r| !(r <= opts.tol)) {
        return Err(Error::NoConvergence {
            restarts: 0,
            best_residuals: {
                let mut r = residuals.clone();
                r.truncate(bad + 1);
                r
            },
        });
    }
    Ok(Spectrum {
        eigenvalues: values,
        residuals,
        sector: op.sector,
        epsilon_snapped: op.grid.epsilon_snapped,
        r1_snapped: op.grid.r1_snapped,
        tolerance: opts.tol,
        vectors: opts.keep_vectors.then_some(vectors),
    })
}

fn solve<T: Scalar>(
    a: &Csr<T>,
    s: &Csr<T>,
    mass: &[f64],
    k: usize,
    opts: &SolverOptions,
    n: usize,
) -> Result<Pairs<T>> {
    let p = krylov::Problem { a, s, mass };
    let dense = match opts.method {
        Method::Dense => true,
        Method::Krylov => false,
        Method::Auto => n <= opts.dense_threshold,
    };
    if dense {
        return Ok(dense::lowest(&p, k));
    }
    krylov::lowest(
        &p,
        &krylov::KrylovParams {
            k,
            tol: opts.tol,
            block: opts.block,
            max_restarts: opts.max_restarts,
            seed: opts.seed,
        },
    )
}

/// One degenerate level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Mean of the merged eigenvalues.
    pub eigenvalue: f64,
    /// Sum of the weights of the merged eigenvalues.
    pub multiplicity: u32,
}

/// Merges sorted-by-value eigenvalues whose neighbours lie within `cluster_tol`.
pub fn group_multiplicities(values: &[f64], weights: &[u32], cluster_tol: f64) -> Vec<Cluster> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out: Vec<Cluster> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in idx {
        let v = values[i];
        let w = weights.get(i).copied().unwrap_or(1);
        if out.is_empty() || v - last > cluster_tol {
            out.push(Cluster { eigenvalue: v, multiplicity: w });
            sum = v;
            count = 1;
        } else {
            let c = out.last_mut().expect("non-empty");
            c.multiplicity += w;
            sum += v;
            count += 1;
            c.eigenvalue = sum / count as f64;
        }
        last = v;
    }
    out
}

/// `10 x max residual` plus a relative discretization allowance of `1e-3`.
pub fn default_cluster_tol(max_residual: f64, max_eigenvalue: f64) -> f64 {
    10.0 * max_residual + 1e-3 * max_eigenvalue.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering() {
        let c = group_multiplicities(&[14.68, 14.681], &[1, 1], 0.01);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].multiplicity, 2);
        assert!((c[0].eigenvalue - 14.6805).abs() < 1e-12);
        let c = group_multiplicities(&[5.78, 14.68], &[1, 1], 0.01);
        assert_eq!(c.len(), 2);
        let c = group_multiplicities(&[30.0, 5.0, 30.0], &[1, 1, 2], 0.01);
        assert_eq!(c.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![1, 3]);
    }
}
