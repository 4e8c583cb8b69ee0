//! Thick-restart block Krylov iteration for `S x = lambda D x` with shift-invert at 0.
//!
//! `T = S^{-1} D` is self-adjoint in the `D` inner product and its largest
//! eigenvalues are the reciprocals of the wanted ones. Every basis vector is
//! stored together with its image under `T`, so Rayleigh-Ritz needs no extra
//! solves, and each restart keeps the best Ritz vectors plus the pending block.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::banded::BandCholesky;
use super::Pairs;
use crate::discretize::Csr;
use crate::error::{Error, Result};
use crate::scalar::{axpy, dot_w, norm2, norm_w, Scalar};

pub(crate) struct Problem<'a, T> {
    pub a: &'a Csr<T>,
    pub s: &'a Csr<T>,
    pub mass: &'a [f64],
}

pub(crate) struct KrylovParams {
    pub k: usize,
    pub tol: f64,
    pub block: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

fn random_vector<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::from_re_im(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// `D`-orthogonalises `x` against `basis` (two passes) and normalises it.
/// Returns `false` if `x` was (numerically) inside the span.
fn orthonormalize<T: Scalar>(x: &mut [T], basis: &[Vec<T>], mass: &[f64]) -> bool {
    let before = norm_w(x, mass);
    if before == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for v in basis {
            let c = dot_w(v, mass, x);
            axpy(-c, v, x);
        }
    }
    let after = norm_w(x, mass);
    if after <= 1e-10 * before {
        return false;
    }
    let inv = T::of_real(1.0 / after);
    x.iter_mut().for_each(|e| *e *= inv);
    true
}

fn combine<T: Scalar>(vectors: &[Vec<T>], coeffs: &DMatrix<T>, col: usize) -> Vec<T> {
    let n = vectors[0].len();
    let mut out = vec![T::zero(); n];
    for (j, v) in vectors.iter().enumerate() {
        axpy(coeffs[(j, col)], v, &mut out);
    }
    out
}

/// Rayleigh-Ritz of `S` and `D` on the span of `z`; pairs ascending.
fn refine<T: Scalar>(p: &Problem<T>, z: &[Vec<T>]) -> Result<(Vec<f64>, Vec<Vec<T>>)> {
    let m = z.len();
    let sz: Vec<Vec<T>> = z.iter().map(|v| p.s.matvec(v)).collect();
    let mut g = DMatrix::<T>::zeros(m, m);
    let mut b = DMatrix::<T>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] = z[i].iter().zip(&sz[j]).fold(T::zero(), |acc, (&x, &y)| acc + x.conj() * y);
            b[(i, j)] = dot_w(&z[i], p.mass, &z[j]);
        }
    }
    let g = (&g + g.adjoint()) * T::of_real(0.5);
    let b = (&b + b.adjoint()) * T::of_real(0.5);
    let chol = b
        .cholesky()
        .ok_or_else(|| Error::Numeric("refinement basis lost D-definiteness".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("singular refinement basis".into()))?;
    let c = &linv * g * linv.adjoint();
    let c = (&c + c.adjoint()) * T::of_real(0.5);
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let coeffs = linv.adjoint() * &eig.eigenvectors;
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| combine(z, &coeffs, i)).collect();
    Ok((values, vectors))
}

fn residual<T: Scalar>(a: &Csr<T>, lambda: f64, x: &[T]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<T> = ax.iter().zip(x).map(|(&u, &v)| u - v * T::of_real(lambda)).collect();
    norm2(&r) / norm2(x)
}

pub(crate) fn lowest<T: Scalar>(p: &Problem<T>, params: &KrylovParams) -> Result<Pairs<T>> {
    let n = p.mass.len();
    let k = params.k;
    let b = params.block.max(1);
    let mut m_max = (4 * k).max(k + 16);
    m_max += (b - m_max % b) % b;
    let m_max = m_max.min(n);
    let keep = (k + b.max(k / 2)).min(m_max.saturating_sub(2 * b)).max(k);
    if m_max < keep + b {
        return Err(Error::validation(format!(
            "problem of size {n} too small for {k} eigenpairs with the Krylov path"
        )));
    }

    let chol = BandCholesky::factor(p.s)?;
    let apply_t = |x: &[T]| -> Vec<T> {
        let mut y: Vec<T> = x.iter().zip(p.mass).map(|(&v, &d)| v * T::of_real(d)).collect();
        chol.solve_in_place(&mut y);
        y
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m_max);
    let mut images: Vec<Vec<T>> = Vec::with_capacity(m_max);
    let mut pending: Vec<Vec<T>> = Vec::new();
    let mut best: Vec<f64> = vec![f64::INFINITY; k];

    for _restart in 0..=params.max_restarts {
        while basis.len() + b <= m_max {
            let mut block = std::mem::take(&mut pending);
            block.resize_with(b, Vec::new);
            let mut accepted = Vec::with_capacity(b);
            for mut v in block {
                let mut tries = 0;
                loop {
                    if v.len() == n && orthonormalize(&mut v, &basis, p.mass) {
                        break;
                    }
                    tries += 1;
                    if tries > 5 {
                        return Err(Error::Numeric("Krylov basis cannot be extended".into()));
                    }
                    v = random_vector(&mut rng, n);
                }
                basis.push(v);
                accepted.push(basis.len() - 1);
            }
            for idx in accepted {
                let w = apply_t(&basis[idx]);
                images.push(w.clone());
                pending.push(w);
            }
        }

        // Rayleigh-Ritz for T in the D inner product.
        let m = basis.len();
        let mut h = DMatrix::<T>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                h[(i, j)] = dot_w(&basis[i], p.mass, &images[j]);
            }
        }
        let h = (&h + h.adjoint()) * T::of_real(0.5);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));

        let ritz_images: Vec<Vec<T>> = order[..keep]
            .iter()
            .map(|&c| combine(&images, &eig.eigenvectors, c))
            .collect();

        // One step of inverse iteration on the wanted Ritz vectors.
        let (values, vectors) = refine(p, &ritz_images[..(k + b).min(keep)])?;
        let res: Vec<f64> = (0..k).map(|i| residual(p.a, values[i], &vectors[i])).collect();
        for (bst, &r) in best.iter_mut().zip(&res) {
            *bst = bst.min(r);
        }
        if res.iter().all(|&r| r <= params.tol) {
            return Ok(Pairs {
                values: values[..k].to_vec(),
                residuals: res,
                vectors: vectors.into_iter().take(k).collect(),
            });
        }

        // The continuation block must be the residual direction, orthogonal
        // to the whole current basis and not only to the kept Ritz vectors.
        for v in pending.iter_mut() {
            let _ = orthonormalize(v, &basis, p.mass);
        }
        let new_basis: Vec<Vec<T>> = order[..keep]
            .iter()
            .map(|&c| combine(&basis, &eig.eigenvectors, c))
            .collect();
        basis = new_basis;
        images = ritz_images;
    }
    Err(Error::NoConvergence {
        restarts: params.max_restarts,
        best_residuals: best,
    })
}
