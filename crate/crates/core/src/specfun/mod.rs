//! Bessel functions, their zeros, and closed-form Dirichlet spectra of disks
//! and annuli used as reference values throughout the crate.

mod bessel;
mod zeros;

pub use bessel::{bessel_j, bessel_j_prime, bessel_y, wronskian_defect, MAX_ORDER};
pub use zeros::{bessel_zero, BesselZero, ZeroTable, MAX_INDEX, ROOT_TOLERANCE, ZERO_TABLE_HEADER};

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One degenerate level of a rotationally symmetric Dirichlet spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceEntry {
    pub eigenvalue: f64,
    pub ell: u32,
    pub k: u32,
    /// 1 for radial (`ell = 0`) modes, 2 otherwise.
    pub multiplicity: u32,
}

/// Sorted closed-form spectrum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReferenceSpectrum {
    pub entries: Vec<ReferenceEntry>,
}

impl ReferenceSpectrum {
    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.eigenvalue, e.multiplicity as usize))
            .collect()
    }
}

/// Dirichlet eigenvalues `(j_{ell,k}/R)^2` of the disk of radius `radius`.
///
/// Entries are returned until their multiplicities add up to at least `count`,
/// so a degenerate pair is never split.
pub fn disk_spectrum(radius: f64, count: usize) -> Result<ReferenceSpectrum> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::validation(format!("radius must be > 0, got {radius}")));
    }
    if count == 0 {
        return Err(Error::validation("count must be >= 1"));
    }
    // All zeros below `bound` have ell < bound, so enumerating ell, k up to the
    // bound is exhaustive; grow the bound until enough eigenvalues fall below it.
    let mut bound = 8.0_f64;
    loop {
        let mut entries = Vec::new();
        let max_ell = (bound.ceil() as u32).min(MAX_ORDER);
        for ell in 0..=max_ell {
            for k in 1..=MAX_INDEX {
                let z = bessel_zero(ell, k)?.value;
                if z >= bound {
                    break;
                }
                entries.push(ReferenceEntry {
                    eigenvalue: (z / radius).powi(2),
                    ell,
                    k,
                    multiplicity: if ell == 0 { 1 } else { 2 },
                });
            }
        }
        entries.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
        let total: u32 = entries.iter().map(|e| e.multiplicity).sum();
        if total as usize >= count {
            let mut acc = 0;
            let kept = entries
                .into_iter()
                .take_while(|e| {
                    let keep = acc < count;
                    acc += e.multiplicity as usize;
                    keep
                })
                .collect();
            return Ok(ReferenceSpectrum { entries: kept });
        }
        if bound > MAX_ORDER as f64 {
            return Err(Error::Range(format!(
                "{count} disk eigenvalues need Bessel orders beyond {MAX_ORDER}"
            )));
        }
        bound *= 2.0;
    }
}

/// `J_ell(k R1) Y_ell(k R2) - J_ell(k R2) Y_ell(k R1)`; its roots give the
/// Dirichlet-Dirichlet annulus eigenvalues `k^2`.
pub fn annulus_cross_product(r1: f64, r2: f64, ell: u32, k: f64) -> Result<f64> {
    Ok(bessel_j(ell, k * r1)? * bessel_y(ell, k * r2)?
        - bessel_j(ell, k * r2)? * bessel_y(ell, k * r1)?)
}

/// First `count` Dirichlet eigenvalues of the annulus `R1 < r < R2` with angular order `ell`.
pub fn annulus_spectrum(r1: f64, r2: f64, ell: u32, count: usize) -> Result<Vec<f64>> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::validation(format!("need 0 < R1 < R2, got R1={r1}, R2={r2}")));
    }
    if ell > MAX_ORDER {
        return Err(Error::Range(format!("order {ell} exceeds {MAX_ORDER}")));
    }
    let spacing = PI / (r2 - r1);
    let step = 0.02 * spacing;
    // Domain monotonicity: the annulus mode lies above the disk mode of the same order.
    let start = (ell as f64).max(2.0) / r2;
    let stop = start + (count as f64 + 4.0) * 2.0 * spacing;
    let mut roots = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = annulus_cross_product(r1, r2, ell, a)?;
    while roots.len() < count {
        let b = a + step;
        if b > stop {
            return Err(Error::Numeric(format!(
                "annulus root bracketing failed for ell={ell}: found {} of {count} roots in k in [{start:.4}, {stop:.4}]",
                roots.len()
            )));
        }
        let fb = annulus_cross_product(r1, r2, ell, b)?;
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(bisect(|k| annulus_cross_product(r1, r2, ell, k), a, b, fa)?);
        }
        a = b;
        fa = fb;
    }
    Ok(roots.into_iter().map(|k| k * k).collect())
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let s = f_lo.signum();
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inner radius `R2 j_{0,1} / j_{0,2}`: the nodal circle of the second radial
/// eigenfunction of `B_{R2}`, making `lambda_1(B_{R1}) = lambda_1(annulus)`.
pub fn choose_r1(r2: f64) -> Result<f64> {
    if !(r2 > 0.0) || !r2.is_finite() {
        return Err(Error::validation(format!("R2 must be > 0, got {r2}")));
    }
    Ok(r2 * bessel_zero(0, 1)?.value / bessel_zero(0, 2)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiiCondition {
    /// `lambda_1(B_R1) < lambda_1(M) < lambda_2(B_R1)`
    pub strict: bool,
    /// `max(first eigenvalues) < min(second eigenvalues)`
    pub weak: bool,
    pub lambda1_inner: f64,
    pub lambda2_inner: f64,
    pub lambda1_annulus: f64,
    pub lambda2_annulus: f64,
}

/// Relative margin below which two closed-form eigenvalues count as equal.
const STRICT_MARGIN: f64 = 1e-9;

fn less(a: f64, b: f64) -> bool {
    a < b * (1.0 - STRICT_MARGIN)
}

/// Checks the radius conditions on the disk `B_{R1}` and annulus `M_{R1,R2}`.
pub fn verify_radii_condition(r1: f64, r2: f64) -> Result<RadiiCondition> {
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::validation(format!("need 0 < R1 < R2, got R1={r1}, R2={r2}")));
    }
    let lambda1_inner = (bessel_zero(0, 1)?.value / r1).powi(2);
    let lambda2_inner = (bessel_zero(1, 1)?.value / r1).powi(2);
    let radial = annulus_spectrum(r1, r2, 0, 2)?;
    let first_twisted = annulus_spectrum(r1, r2, 1, 1)?[0];
    let lambda1_annulus = radial[0];
    let lambda2_annulus = radial[1].min(first_twisted);
    Ok(RadiiCondition {
        strict: less(lambda1_inner, lambda1_annulus) && less(lambda1_annulus, lambda2_inner),
        weak: less(
            lambda1_inner.max(lambda1_annulus),
            lambda2_inner.min(lambda2_annulus),
        ),
        lambda1_inner,
        lambda2_inner,
        lambda1_annulus,
        lambda2_annulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_first_six() {
        let s = disk_spectrum(1.0, 6).unwrap();
        let got: Vec<(f64, u32)> = s.entries.iter().map(|e| (e.eigenvalue, e.multiplicity)).collect();
        let want = [(5.78, 1), (14.68, 2), (26.37, 2), (30.47, 1)];
        assert_eq!(got.len(), want.len());
        for ((g, gm), (w, wm)) in got.iter().zip(want) {
            assert!((g - w).abs() < 0.01, "{g} vs {w}");
            assert_eq!(*gm, wm);
        }
    }

    #[test]
    fn disk_scaling() {
        let s = disk_spectrum(2.0, 1).unwrap();
        assert_eq!(s.entries.len(), 1);
        assert!((s.entries[0].eigenvalue - 5.783185962946784 / 4.0).abs() < 1e-9);
    }

    #[test]
    fn r1_choice() {
        assert!((choose_r1(1.0).unwrap() - 0.4356).abs() < 5e-4);
        assert!((choose_r1(2.0).unwrap() - 0.8712).abs() < 1e-3);
    }

    #[test]
    fn radii_condition_examples() {
        let c = verify_radii_condition(0.4356, 1.0).unwrap();
        assert!(c.weak);
        assert!(!c.strict);
        assert!((c.lambda2_inner - 77.2).abs() < 0.2);
        let c = verify_radii_condition(0.1, 1.0).unwrap();
        assert!(!c.strict);
        assert!((c.lambda1_inner - 578.3).abs() < 0.1);
    }

    #[test]
    fn annulus_rejects_bad_radii() {
        assert!(annulus_spectrum(1.0, 0.5, 0, 1).is_err());
    }
}
