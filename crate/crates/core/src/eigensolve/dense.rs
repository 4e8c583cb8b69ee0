use nalgebra::{DMatrix, SymmetricEigen};

use super::krylov::Problem;
use super::Pairs;
use crate::scalar::{norm2, Scalar};

/// All eigenpairs through the symmetrised matrix `D^{-1/2} S D^{-1/2}`;
/// returns the lowest `k`.
pub(crate) fn lowest<T: Scalar>(p: &Problem<T>, k: usize) -> Pairs<T> {
    let n = p.mass.len();
    let scale: Vec<f64> = p.mass.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut h = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        for (j, v) in p.s.row(i) {
            h[(i, j)] = v * T::of_real(scale[i] * scale[j]);
        }
    }
    let h = (&h + h.adjoint()) * T::of_real(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for &c in order.iter().take(k) {
        let lambda = eig.eigenvalues[c];
        let x: Vec<T> = (0..n).map(|i| eig.eigenvectors[(i, c)] * T::of_real(scale[i])).collect();
        let ax = p.a.matvec(&x);
        let r: Vec<T> = ax.iter().zip(&x).map(|(&u, &v)| u - v * T::of_real(lambda)).collect();
        residuals.push(norm2(&r) / norm2(&x));
        values.push(lambda);
        vectors.push(x);
    }
    Pairs { values, residuals, vectors }
}
