use num_complex::Complex64;
use petgraph::unionfind::UnionFind;

use crate::discretize::{AngularLayout, AssembledOperator, Node};
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

/// Relative threshold below which a grid value counts as a nodal point.
pub const DEFAULT_ZERO_TOL: f64 = 1e-6;

/// Real function on the nodes of a polar grid: the origin plus rings
/// `1..m` (the outer circle `r_m` is Dirichlet and not stored).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    /// `r_0 = 0 .. r_m`.
    pub radii: Vec<f64>,
    pub rays: usize,
    pub dtheta: f64,
    /// Ray `rays - 1` is adjacent to ray `0`.
    pub periodic: bool,
    pub center: f64,
    /// Row-major over rings `1..m`: `values[(i - 1) * rays + j]`.
    pub values: Vec<f64>,
}

impl GridFunction {
    /// Samples `f(r, theta)` on rings `1..m` and rays `0..rays`.
    pub fn sample(
        radii: Vec<f64>,
        rays: usize,
        dtheta: f64,
        periodic: bool,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let m = radii.len() - 1;
        let center = f(0.0, 0.0);
        let values = (1..m)
            .flat_map(|i| (0..rays).map(move |j| (i, j)))
            .map(|(i, j)| f(radii[i], j as f64 * dtheta))
            .collect();
        GridFunction { radii, rays, dtheta, periodic, center, values }
    }

    pub fn rings(&self) -> usize {
        self.radii.len() - 2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == 0 {
            self.center
        } else {
            self.values[(i - 1) * self.rays + j]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(self.center.abs(), |m, v| m.max(v.abs()))
    }

    /// `(r, theta, value)` over the center and all stored ring nodes.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        std::iter::once((0.0, 0.0, self.center)).chain(
            (1..=self.rings())
                .flat_map(move |i| (0..self.rays).map(move |j| (i, j)))
                .map(|(i, j)| (self.radii[i], j as f64 * self.dtheta, self.get(i, j))),
        )
    }
}

/// Sector eigenvector extended to the whole domain of the sector family:
/// Floquet vectors are copied to all `N` sectors with their phase, quarter
/// vectors stay on the quarter disk. The result is rotated to be as real as
/// possible and its real part returned.
pub fn unfold(op: &AssembledOperator, v: &[Complex64]) -> Result<GridFunction> {
    if v.len() != op.n {
        return Err(Error::Dimension { expected: op.n, got: v.len() });
    }
    let g = &op.grid;
    let (copies, phase, periodic) = match g.angular {
        AngularLayout::Periodic { phase } => {
            let n = (std::f64::consts::TAU / g.theta_extent).round() as usize;
            (n, phase, true)
        }
        AngularLayout::Bounded { .. } => (1, 0.0, false),
    };
    let sector_rays = g.rays().len();
    let rays = copies * sector_rays;
    let mut values = vec![Complex64::new(0.0, 0.0); (g.m - 1) * rays];
    let mut center = Complex64::new(0.0, 0.0);
    for (idx, node) in op.layout.nodes.iter().enumerate() {
        match *node {
            Node::Center => center = v[idx],
            Node::Ring { i, j } => {
                for s in 0..copies {
                    let f = Complex64::from_polar(1.0, phase * s as f64);
                    values[(i - 1) * rays + s * sector_rays + j] = v[idx] * f;
                }
            }
        }
    }
    let square: Complex64 = values.iter().map(|z| z * z).sum::<Complex64>() + center * center;
    let rot = Complex64::from_polar(1.0, -0.5 * square.arg());
    let values: Vec<f64> = values.iter().map(|z| (z * rot).re).collect();
    let center = (center * rot).re;
    let scale = values.iter().fold(center.abs(), |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::DegenerateVector("eigenvector vanishes after phase normalisation".into()));
    }
    Ok(GridFunction {
        radii: g.radii.clone(),
        rays,
        dtheta: g.dtheta,
        periodic,
        center,
        values,
    })
}

/// Eigenfunction `index` of `spectrum`, which must have been solved on `op`
/// with vectors kept.
pub fn eigenfunction(op: &AssembledOperator, spectrum: &Spectrum, index: usize) -> Result<GridFunction> {
    let vectors = spectrum
        .vectors
        .as_ref()
        .ok_or_else(|| Error::validation("spectrum was computed without eigenvectors"))?;
    if index >= vectors.len() {
        return Err(Error::Range(format!(
            "eigenfunction {index} requested, {} available",
            vectors.len()
        )));
    }
    unfold(op, &vectors.complex(index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodalCount {
    pub domains: usize,
    pub positive: usize,
    pub negative: usize,
}

/// Connected sign components of `f` on the 4-neighbour grid graph (periodic
/// in the angle when `f.periodic`, the origin joined to every ray of ring 1).
/// Values with `|u| <= zero_tol * max|u|` separate domains.
pub fn nodal_domains(f: &GridFunction, zero_tol: f64) -> Result<NodalCount> {
    if !(0.0..1.0).contains(&zero_tol) {
        return Err(Error::validation(format!("zero tolerance must lie in [0, 1), got {zero_tol}")));
    }
    let scale = f.max_abs();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::DegenerateVector("function is zero or not finite".into()));
    }
    let cut = zero_tol * scale;
    let rings = f.rings();
    let rays = f.rays;
    // Node 0 is the center, ring node (i, j) is 1 + (i - 1) * rays + j.
    let id = |i: usize, j: usize| 1 + (i - 1) * rays + j;
    let sign = |x: f64| if x > cut { 1 } else if x < -cut { -1 } else { 0 };
    let total = 1 + rings * rays;
    let mut uf = UnionFind::<usize>::new(total);
    let sc = sign(f.center);
    for i in 1..=rings {
        for j in 0..rays {
            let s = sign(f.get(i, j));
            if s == 0 {
                continue;
            }
            if i == 1 && s == sc {
                uf.union(0, id(i, j));
            }
            if i < rings && sign(f.get(i + 1, j)) == s {
                uf.union(id(i, j), id(i + 1, j));
            }
            let next = if j + 1 < rays {
                Some(j + 1)
            } else if f.periodic && rays > 1 {
                Some(0)
            } else {
                None
            };
            if let Some(jn) = next {
                if sign(f.get(i, jn)) == s {
                    uf.union(id(i, j), id(i, jn));
                }
            }
        }
    }
    let mut roots = std::collections::HashMap::new();
    let mut visit = |node: usize, s: i32| {
        if s != 0 {
            roots.entry(uf.find(node)).or_insert(s);
        }
    };
    visit(0, sc);
    for i in 1..=rings {
        for j in 0..rays {
            visit(id(i, j), sign(f.get(i, j)));
        }
    }
    let positive = roots.values().filter(|&&s| s > 0).count();
    let negative = roots.len() - positive;
    Ok(NodalCount { domains: roots.len(), positive, negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn disk(m: usize) -> Vec<f64> {
        (0..=m).map(|i| i as f64 / m as f64).collect()
    }

    #[test]
    fn angular_modes() {
        for ell in 1..5 {
            let rays = 96;
            let f = GridFunction::sample(disk(40), rays, TAU / rays as f64, true, |r, t| {
                r * (ell as f64 * t + 0.1).cos()
            });
            let c = nodal_domains(&f, 1e-8).unwrap();
            assert_eq!(c.domains, 2 * ell);
            assert_eq!(c.positive, ell);
        }
    }

    #[test]
    fn radial_and_center() {
        let f = GridFunction::sample(disk(60), 64, TAU / 64.0, true, |r, _| (3.0 * std::f64::consts::PI * r).cos());
        assert_eq!(nodal_domains(&f, 1e-8).unwrap().domains, 4);
        let zero = GridFunction::sample(disk(10), 16, TAU / 16.0, true, |_, _| 0.0);
        assert!(matches!(nodal_domains(&zero, 1e-8), Err(Error::DegenerateVector(_))));
    }
}
