use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::PolarGrid;
use crate::domain::SectorTag;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-compressed sparse matrix with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    /// Builds from unsorted triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("duplicate follows an entry") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { n, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// `max |M_ij - conj(M_ji)| / max |M_ij|`.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.vals.iter().map(|v| v.abs_sq()).fold(0.0, f64::max).sqrt();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i).conj()).abs_sq().sqrt());
            }
        }
        worst / scale
    }

    /// Adds `shift` to every diagonal entry already present.
    pub(crate) fn shift_diagonal(&mut self, i: usize, shift: T) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        if let Ok(k) = self.cols[r.clone()].binary_search(&i) {
            self.vals[r.start + k] += shift;
        }
    }
}

/// Unknown of the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Center,
    Ring { i: usize, j: usize },
}

/// Numbering of the unknowns: the center (if present), then rings outward
/// with rays ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeLayout {
    pub nodes: Vec<Node>,
    pub center: Option<usize>,
    index: Vec<Option<usize>>,
    rays: usize,
}

impl NodeLayout {
    pub(crate) fn new(grid: &PolarGrid, with_center: bool) -> Self {
        let rays = grid.rays().len();
        let mut nodes = Vec::new();
        let mut index = vec![None; (grid.m + 1) * rays];
        let center = if with_center {
            nodes.push(Node::Center);
            Some(0)
        } else {
            None
        };
        for i in 1..grid.m {
            for j in grid.rays() {
                if grid.is_unknown(i, j) {
                    index[i * rays + j] = Some(nodes.len());
                    nodes.push(Node::Ring { i, j });
                }
            }
        }
        NodeLayout { nodes, center, index, rays }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of ring node `(i, j)`, `None` for Dirichlet nodes.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if j >= self.rays {
            return None;
        }
        self.index.get(i * self.rays + j).copied().flatten()
    }
}

/// How the origin enters the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterPolicy {
    /// `u(0) = 0`; exact whenever the symmetry class forces it.
    DirichletAtCenter,
    /// A center unknown whose equation is the finite-volume balance
    /// `4/h^2 (u_0 - mean of ring 1)`.
    RegularityStencil,
}

/// Matrices of one sector: `a` is the finite-difference operator, `s = diag(mass) a`
/// the Hermitian stiffness matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorData {
    Real { a: Csr<f64>, s: Csr<f64> },
    Complex { a: Csr<Complex64>, s: Csr<Complex64> },
}

/// Discretized sector Laplacian with all boundary conditions built in.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledOperator {
    pub n: usize,
    pub data: OperatorData,
    /// Cell areas `D`; `D A` is Hermitian.
    pub mass: Vec<f64>,
    pub grid: PolarGrid,
    pub layout: NodeLayout,
    pub sector: SectorTag,
    pub center: CenterPolicy,
    /// `A` itself is not symmetric in polar coordinates.
    pub symmetric: bool,
}

impl AssembledOperator {
    pub fn is_complex(&self) -> bool {
        matches!(self.data, OperatorData::Complex { .. })
    }

    /// `A v` for a real sector.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v.len())?;
        match &self.data {
            OperatorData::Real { a, .. } => Ok(a.matvec(v)),
            OperatorData::Complex { .. } => Err(Error::Unsupported(format!(
                "sector {} has a complex operator, use apply_complex",
                self.sector
            ))),
        }
    }

    /// `A v` for any sector.
    pub fn apply_complex(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(v.len())?;
        match &self.data {
            OperatorData::Real { a, .. } => {
                let mut out = vec![Complex64::new(0.0, 0.0); self.n];
                for (i, o) in out.iter_mut().enumerate() {
                    *o = a.row(i).map(|(j, x)| v[j] * x).sum();
                }
                Ok(out)
            }
            OperatorData::Complex { a, .. } => Ok(a.matvec(v)),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::Dimension { expected: self.n, got });
        }
        Ok(())
    }

    /// Entries of `A` per row.
    pub fn row_nnz(&self, i: usize) -> usize {
        match &self.data {
            OperatorData::Real { a, .. } => a.row_ptr[i + 1] - a.row_ptr[i],
            OperatorData::Complex { a, .. } => a.row_ptr[i + 1] - a.row_ptr[i],
        }
    }

    /// Relative Hermitian defect of `D A`.
    pub fn hermitian_defect(&self) -> f64 {
        match &self.data {
            OperatorData::Real { s, .. } => s.hermitian_defect(),
            OperatorData::Complex { s, .. } => s.hermitian_defect(),
        }
    }

    /// Returns `A + c I` (and `S + c D`).
    pub fn shifted(&self, c: f64) -> AssembledOperator {
        fn shift<T: Scalar>(a: &Csr<T>, s: &Csr<T>, mass: &[f64], c: f64) -> (Csr<T>, Csr<T>) {
            let (mut a, mut s) = (a.clone(), s.clone());
            for (i, &area) in mass.iter().enumerate().take(a.n) {
                a.shift_diagonal(i, T::of_real(c));
                s.shift_diagonal(i, T::of_real(c * area));
            }
            (a, s)
        }
        let data = match &self.data {
            OperatorData::Real { a, s } => {
                let (a, s) = shift(a, s, &self.mass, c);
                OperatorData::Real { a, s }
            }
            OperatorData::Complex { a, s } => {
                let (a, s) = shift(a, s, &self.mass, c);
                OperatorData::Complex { a, s }
            }
        };
        AssembledOperator { data, ..self.clone() }
    }

    /// Writes `A` as `i j value` lines (1-based), complex entries as `i j re im`.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "% crackspec operator n={}", self.n)?;
        writeln!(
            w,
            "% sector={} M={} M_theta={} epsilon_snapped={:.12} r1_snapped={:.12}",
            self.sector,
            self.grid.m,
            self.grid.m_theta,
            self.grid.epsilon_snapped,
            self.grid.r1_snapped
        )?;
        match &self.data {
            OperatorData::Real { a, .. } => {
                for i in 0..a.n {
                    for (j, v) in a.row(i) {
                        writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
                    }
                }
            }
            OperatorData::Complex { a, .. } => {
                for i in 0..a.n {
                    for (j, v) in a.row(i) {
                        writeln!(w, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re, v.im)?;
                    }
                }
            }
        }
        Ok(())
    }
}
