//! Condenser capacity of arcs on the circle `r = R1` relative to the disk
//! `B_{R2}`, from the discrete capacitary potential.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::discretize::{assemble_cells, AssembledOperator, Csr, OperatorData};
use crate::domain::{Arc, CrackedDiskSpec, SectorProblem};
use crate::eigensolve::BandCholesky;
use crate::error::{Error, Result};
use crate::spectra::GridFunction;

/// Compact set made of arcs on `r = R1` inside the disk of radius `R2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityProblem {
    pub r1: f64,
    pub r2: f64,
    /// Radial cells.
    pub m: usize,
    /// Angular cells on the full circle.
    pub m_theta: usize,
    pub arcs: Vec<Arc>,
}

impl CapacityProblem {
    pub fn new(r1: f64, r2: f64, m: usize, m_theta: usize, arcs: Vec<Arc>) -> Result<Self> {
        let mut problems = Vec::new();
        if !(r2 > 0.0 && r2.is_finite()) {
            problems.push(format!("R2 must be positive, got {r2}"));
        }
        if !(r1 > 0.0 && r1 < r2) {
            problems.push(format!("need 0 < R1 < R2, got R1={r1}, R2={r2}"));
        }
        for a in &arcs {
            if !(a.start.is_finite() && a.end >= a.start) {
                problems.push(format!("arc [{}, {}] is not a closed interval", a.start, a.end));
            } else if a.width() > TAU {
                problems.push(format!("arc [{}, {}] is longer than the circle", a.start, a.end));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(CapacityProblem { r1, r2, m, m_theta, arcs })
    }

    /// The two antipodal arcs of half-width `delta` centered at `pi/2` and `3 pi/2`.
    pub fn antipodal(r1: f64, r2: f64, delta: f64, m: usize) -> Result<Self> {
        check_delta(delta)?;
        Self::new(r1, r2, m, m, vec![upper_arc(delta), lower_arc(delta)])
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < FRAC_PI_2) {
        return Err(Error::Domain(format!("half-width must lie in (0, pi/2), got {delta}")));
    }
    Ok(())
}

pub fn upper_arc(delta: f64) -> Arc {
    Arc { start: FRAC_PI_2 - delta, end: FRAC_PI_2 + delta }
}

pub fn lower_arc(delta: f64) -> Arc {
    Arc { start: 3.0 * FRAC_PI_2 - delta, end: 3.0 * FRAC_PI_2 + delta }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub cap: f64,
    /// `||(S V)_free|| / ||S_free,K 1||`.
    pub energy_residual: f64,
    /// Arcs as represented on the grid (ray to ray).
    pub arcs_snapped: Vec<Arc>,
    pub r1_snapped: f64,
    /// Number of grid nodes carrying `V = 1`.
    pub constrained_nodes: usize,
    pub potential: GridFunction,
}

/// Full-disk grid with no crack: the `ell = 0` sector of `N = 1`.
fn disk_operator(p: &CapacityProblem) -> Result<AssembledOperator> {
    let spec = CrackedDiskSpec::new(1, PI, p.r1, p.r2)?;
    assemble_cells(&SectorProblem::floquet(spec, 0)?, p.m, p.m_theta)
}

/// Ray indices of `arc`: the nearest ray to its center plus the nearest
/// whole number of rays to each side.
fn arc_rays(arc: &Arc, dtheta: f64, m_theta: usize) -> (isize, isize) {
    let c = (arc.center() / dtheta).round() as isize;
    let h = (0.5 * arc.width() / dtheta).round() as isize;
    if 2 * h + 1 >= m_theta as isize {
        return (0, m_theta as isize - 1);
    }
    (c - h, c + h)
}

/// Solves for the potential equal to 1 on the arcs and 0 on `r = R2`.
pub fn capacitary_potential(problem: &CapacityProblem) -> Result<CapacityResult> {
    let op = disk_operator(problem)?;
    let OperatorData::Real { s, .. } = &op.data else {
        return Err(Error::Numeric("disk operator unexpectedly complex".into()));
    };
    let g = &op.grid;
    let mt = g.m_theta;
    let mut k_nodes = BTreeSet::new();
    let mut arcs_snapped = Vec::with_capacity(problem.arcs.len());
    let mut owner = vec![usize::MAX; mt];
    for (a_idx, arc) in problem.arcs.iter().enumerate() {
        let (lo, hi) = arc_rays(arc, g.dtheta, mt);
        arcs_snapped.push(Arc { start: lo as f64 * g.dtheta, end: hi as f64 * g.dtheta });
        for j in lo..=hi {
            let j = j.rem_euclid(mt as isize) as usize;
            if owner[j] != usize::MAX && owner[j] != a_idx {
                return Err(Error::validation(format!(
                    "arcs {} and {a_idx} overlap on the grid",
                    owner[j]
                )));
            }
            owner[j] = a_idx;
            let node = op.layout.index_of(g.crack_ring, j).expect("ring node exists without a crack");
            k_nodes.insert(node);
        }
    }

    let n = op.n;
    let mut v = vec![0.0; n];
    for &q in &k_nodes {
        v[q] = 1.0;
    }
    let mut energy_residual = 0.0;
    if !k_nodes.is_empty() {
        let free: Vec<usize> = (0..n).filter(|q| !k_nodes.contains(q)).collect();
        if free.is_empty() {
            return Err(Error::Geometry("no free nodes left for the potential".into()));
        }
        let mut pos = vec![usize::MAX; n];
        for (f, &q) in free.iter().enumerate() {
            pos[q] = f;
        }
        let mut trip = Vec::new();
        let mut rhs = vec![0.0; free.len()];
        for (f, &q) in free.iter().enumerate() {
            for (c, val) in s.row(q) {
                if pos[c] != usize::MAX {
                    trip.push((f, pos[c], val));
                } else {
                    rhs[f] -= val;
                }
            }
        }
        let sff = Csr::from_triplets(free.len(), trip);
        let chol = BandCholesky::factor(&sff)
            .map_err(|e| Error::Geometry(format!("potential system is singular: {e}")))?;
        let rhs_norm = rhs.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut x = rhs;
        chol.solve_in_place(&mut x);
        for (f, &q) in free.iter().enumerate() {
            v[q] = x[f];
        }
        let sv = s.matvec(&v);
        let res: f64 = free.iter().map(|&q| sv[q] * sv[q]).sum::<f64>().sqrt();
        energy_residual = if rhs_norm > 0.0 { res / rhs_norm } else { res };
    }
    let cap = energy(s, &v);
    let potential = crate::spectra::unfold(&op, &v.iter().map(|&x| x.into()).collect::<Vec<_>>())
        .unwrap_or_else(|_| GridFunction {
            radii: g.radii.clone(),
            rays: mt,
            dtheta: g.dtheta,
            periodic: true,
            center: 0.0,
            values: vec![0.0; (g.m - 1) * mt],
        });
    Ok(CapacityResult {
        cap,
        energy_residual,
        arcs_snapped,
        r1_snapped: g.r(g.crack_ring),
        constrained_nodes: k_nodes.len(),
        potential,
    })
}

/// Discrete Dirichlet energy `V^T S V`.
pub fn energy(s: &Csr<f64>, v: &[f64]) -> f64 {
    let sv = s.matvec(v);
    v.iter().zip(&sv).map(|(a, b)| a * b).sum()
}

/// Capacities of `K_delta`, its two halves and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityPoint {
    pub delta: f64,
    pub cap_total: f64,
    pub cap_plus: f64,
    pub cap_minus: f64,
    pub ratio: f64,
}

pub fn additivity(r1: f64, r2: f64, delta: f64, m: usize) -> Result<AdditivityPoint> {
    check_delta(delta)?;
    let solve = |arcs: Vec<Arc>| -> Result<f64> {
        Ok(capacitary_potential(&CapacityProblem::new(r1, r2, m, m, arcs)?)?.cap)
    };
    let cap_total = solve(vec![upper_arc(delta), lower_arc(delta)])?;
    let cap_plus = solve(vec![upper_arc(delta)])?;
    let cap_minus = solve(vec![lower_arc(delta)])?;
    Ok(AdditivityPoint {
        delta,
        cap_total,
        cap_plus,
        cap_minus,
        ratio: cap_total / (cap_plus + cap_minus),
    })
}

/// `Cap(K_delta) / (Cap(K_delta^+) + Cap(K_delta^-))`.
pub fn additivity_ratio(r1: f64, r2: f64, delta: f64, m: usize) -> Result<f64> {
    Ok(additivity(r1, r2, delta, m)?.ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_has_zero_capacity() {
        let p = CapacityProblem::new(0.4356, 1.0, 40, 40, vec![]).unwrap();
        let r = capacitary_potential(&p).unwrap();
        assert_eq!(r.cap, 0.0);
        assert_eq!(r.constrained_nodes, 0);
    }

    #[test]
    fn overlapping_arcs_rejected() {
        let a = Arc { start: 0.0, end: 1.0 };
        let b = Arc { start: 0.5, end: 1.5 };
        let p = CapacityProblem::new(0.5, 1.0, 40, 40, vec![a, b]).unwrap();
        assert!(matches!(capacitary_potential(&p), Err(Error::Validation(_))));
        assert!(matches!(CapacityProblem::antipodal(0.5, 1.0, 2.0, 40), Err(Error::Domain(_))));
    }
}
