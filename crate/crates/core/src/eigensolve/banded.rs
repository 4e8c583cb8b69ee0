use crate::discretize::Csr;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cholesky factor `S = L L^H` of a Hermitian positive definite band matrix.
///
/// Row `i` of `L` is stored contiguously at `data[i * (bw + 1)..]`, column `t`
/// at offset `t + bw - i`.
#[derive(Debug, Clone)]
pub struct BandCholesky<T> {
    n: usize,
    bw: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandCholesky<T> {
    pub fn factor(s: &Csr<T>) -> Result<Self> {
        let n = s.n;
        let bw = s.bandwidth();
        let stride = bw + 1;
        let mut data = vec![T::zero(); n * stride];
        for i in 0..n {
            for (j, v) in s.row(i) {
                if j <= i {
                    data[i * stride + j + bw - i] = v;
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for k in lo..=i {
                let klo = k.saturating_sub(bw).max(lo);
                let (head, tail) = data.split_at_mut(i * stride);
                let row_i = &mut tail[..stride];
                let row_k: &[T] = if k == i { &[] } else { &head[k * stride..(k + 1) * stride] };
                let a = &row_i[klo + bw - i..k + bw - i];
                if k == i {
                    let sq: f64 = a.iter().map(|x| x.abs_sq()).sum();
                    let d = row_i[bw].re() - sq;
                    if !(d > 0.0) {
                        return Err(Error::Numeric(format!(
                            "stiffness matrix not positive definite at row {i} (pivot {d:e})"
                        )));
                    }
                    row_i[bw] = T::of_real(d.sqrt());
                } else {
                    let b = &row_k[klo + bw - k..bw];
                    let dot = a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y.conj());
                    row_i[k + bw - i] = (row_i[k + bw - i] - dot) / row_k[bw];
                }
            }
        }
        Ok(BandCholesky { n, bw, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves `S x = b` in place.
    pub fn solve_in_place(&self, x: &mut [T]) {
        let (n, bw, stride) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let row = &self.data[i * stride..(i + 1) * stride];
            let lo = i.saturating_sub(bw);
            let dot = row[lo + bw - i..bw]
                .iter()
                .zip(&x[lo..i])
                .fold(T::zero(), |acc, (&l, &v)| acc + l * v);
            x[i] = (x[i] - dot) / row[bw];
        }
        for i in (0..n).rev() {
            let row = &self.data[i * stride..(i + 1) * stride];
            let xi = x[i] / row[bw];
            x[i] = xi;
            let lo = i.saturating_sub(bw);
            for (xt, &l) in x[lo..i].iter_mut().zip(&row[lo + bw - i..bw]) {
                *xt -= l.conj() * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tridiag<T: Scalar>(n: usize, off: T) -> Csr<T> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, T::of_real(4.0)));
            if i + 1 < n {
                t.push((i, i + 1, off));
                t.push((i + 1, i, off.conj()));
            }
        }
        Csr::from_triplets(n, t)
    }

    #[test]
    fn solves_real_and_complex() {
        let s = tridiag(50, -1.0);
        let chol = BandCholesky::factor(&s).unwrap();
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        chol.solve_in_place(&mut x);
        let r = s.matvec(&x);
        assert!(r.iter().zip(&b).all(|(a, b)| (a - b).abs() < 1e-13));

        let s = tridiag(40, Complex64::new(-0.5, 0.8));
        let chol = BandCholesky::factor(&s).unwrap();
        let b: Vec<Complex64> = (0..40).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut x = b.clone();
        chol.solve_in_place(&mut x);
        let r = s.matvec(&x);
        assert!(r.iter().zip(&b).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn rejects_indefinite() {
        let s = Csr::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(BandCholesky::factor(&s), Err(Error::Numeric(_))));
    }
}
