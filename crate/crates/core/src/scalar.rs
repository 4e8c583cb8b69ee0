//! Field abstraction shared by real and complex (Floquet) operators.

use nalgebra::ComplexField;
use num_complex::Complex64;

/// Matrix entry type: `f64` for real sectors, `Complex64` for twisted Floquet sectors.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    /// Converts an entry computed in complex arithmetic. Real scalars keep the real part.
    fn from_complex(c: Complex64) -> Self;

    fn to_complex(self) -> Complex64;

    /// `re + i im`; real scalars drop `im`.
    fn from_re_im(re: f64, im: f64) -> Self;

    fn of_real(x: f64) -> Self {
        Self::from_real(x)
    }

    fn conj(self) -> Self {
        self.conjugate()
    }

    fn re(self) -> f64 {
        self.real()
    }

    fn abs_sq(self) -> f64 {
        self.modulus_squared()
    }
}

impl Scalar for f64 {
    fn from_complex(c: Complex64) -> Self {
        debug_assert!(c.im.abs() <= 1e-12 * (1.0 + c.re.abs()));
        c.re
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn from_re_im(re: f64, _im: f64) -> Self {
        re
    }
}

impl Scalar for Complex64 {
    fn from_complex(c: Complex64) -> Self {
        c
    }

    fn to_complex(self) -> Complex64 {
        self
    }

    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}

/// Weighted inner product `sum conj(x_i) w_i y_i`.
pub(crate) fn dot_w<T: Scalar>(x: &[T], w: &[f64], y: &[T]) -> T {
    x.iter()
        .zip(w)
        .zip(y)
        .fold(T::zero(), |acc, ((&a, &wi), &b)| acc + a.conj() * b * T::of_real(wi))
}

pub(crate) fn norm_w<T: Scalar>(x: &[T], w: &[f64]) -> f64 {
    x.iter()
        .zip(w)
        .map(|(&a, &wi)| a.abs_sq() * wi)
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|a| a.abs_sq()).sum::<f64>().sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
