use std::collections::HashMap;

use rayon::prelude::*;

use crate::discretize::assemble;
use crate::domain::{SectorProblem, SectorTag};
use crate::eigensolve::{lowest_eigenpairs_with, Spectrum};
use crate::error::{Error, Result};

use super::{EigenvalueCurve, MergedSpectrum};

/// Opening at which eigenvalues of two different sectors coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingEvent {
    /// Interpolated opening of the coincidence.
    pub epsilon_star: f64,
    pub lambda_star: f64,
    pub sectors: (SectorTag, SectorTag),
    /// Eigenvalue index (0-based) inside each sector.
    pub indices: (usize, usize),
    /// Openings on neighbouring grid rays bracketing the crossing.
    pub bracket: (f64, f64),
    /// `lambda_A - lambda_B` at the two bracket ends; opposite signs.
    pub difference: (f64, f64),
    /// Sum of the two sector weights.
    pub multiplicity: u32,
    /// 1-based position of the coincident level in the spectrum, counting
    /// distinct levels.
    pub rank: usize,
}

struct Resolver<'a> {
    curve: &'a EigenvalueCurve,
    dtheta: f64,
    cache: HashMap<(usize, usize), Spectrum>,
}

impl Resolver<'_> {
    fn problem(&self, s: usize, j: usize) -> Result<SectorProblem> {
        let spec = self.curve.template.with_epsilon(j as f64 * self.dtheta)?;
        Ok(self.curve.config.problems(&spec)?.swap_remove(s))
    }

    fn ensure(&mut self, sectors: &[usize], j: usize) -> Result<()> {
        let missing: Vec<usize> = sectors.iter().copied().filter(|&s| !self.cache.contains_key(&(s, j))).collect();
        let opts = self.curve.config.options();
        let m = self.curve.config.m;
        let k = self.curve.config.k;
        let problems = missing.iter().map(|&s| self.problem(s, j)).collect::<Result<Vec<_>>>()?;
        let solved = problems
            .par_iter()
            .map(|p| lowest_eigenpairs_with(&assemble(p, m)?, k, &opts))
            .collect::<Result<Vec<_>>>()?;
        for (s, sp) in missing.into_iter().zip(solved) {
            self.cache.insert((s, j), sp);
        }
        Ok(())
    }

    fn value(&mut self, s: usize, i: usize, j: usize) -> Result<f64> {
        self.ensure(&[s], j)?;
        Ok(self.cache[&(s, j)].eigenvalues[i])
    }

    fn merged(&mut self, j: usize) -> Result<MergedSpectrum> {
        let all: Vec<usize> = (0..self.curve.sectors.len()).collect();
        self.ensure(&all, j)?;
        Ok(MergedSpectrum::from_sectors(all.iter().map(|&s| self.cache[&(s, j)].clone()).collect()))
    }
}

/// Number of distinct levels of `merged` strictly below `lambda`.
fn levels_below(merged: &MergedSpectrum, lambda: f64) -> usize {
    let tol = merged.default_cluster_tol();
    merged.levels(tol).iter().filter(|c| c.eigenvalue < lambda - tol).count()
}

/// Sign changes of `lambda_A - lambda_B` between consecutive sweep points,
/// refined by bisection over grid rays and linear interpolation inside the
/// last ray interval. Only crossings with `rank <= max_rank` are returned.
pub fn detect_crossings(curve: &EigenvalueCurve, max_rank: usize) -> Result<Vec<CrossingEvent>> {
    if curve.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "crossing detection needs at least two openings, got {}",
            curve.len()
        )));
    }
    let first = curve.config.problems(&curve.template)?;
    let dtheta = first[0].angular_extent() / curve.config.m as f64;
    let ray = |e: f64| (e / dtheta).round() as usize;
    let mut res = Resolver { curve, dtheta, cache: HashMap::new() };
    for t in 0..curve.len() {
        let j = ray(curve.epsilon_snapped[t]);
        for (s, c) in curve.sectors.iter().enumerate() {
            res.cache.entry((s, j)).or_insert_with(|| Spectrum {
                eigenvalues: c.values[t].clone(),
                residuals: c.residuals[t].clone(),
                sector: c.tag,
                epsilon_snapped: curve.epsilon_snapped[t],
                r1_snapped: curve.template.r1(),
                tolerance: curve.config.tol,
                vectors: None,
            });
        }
    }

    let mut events = Vec::new();
    let ns = curve.sectors.len();
    for t in 0..curve.len() - 1 {
        let coarse = curve.merged_at(t);
        for sa in 0..ns {
            for sb in sa + 1..ns {
                let (ca, cb) = (&curve.sectors[sa], &curve.sectors[sb]);
                for a in 0..ca.values[t].len() {
                    for b in 0..cb.values[t].len() {
                        let d0 = ca.values[t][a] - cb.values[t][b];
                        let d1 = ca.values[t + 1][a] - cb.values[t + 1][b];
                        if !(d0 * d1 < 0.0 || (d1 == 0.0 && d0 != 0.0)) {
                            continue;
                        }
                        let low = ca.values[t][a].min(cb.values[t][b]);
                        if levels_below(&coarse, low) > max_rank {
                            continue;
                        }
                        let (mut jl, mut jh) = (ray(curve.epsilon_snapped[t]), ray(curve.epsilon_snapped[t + 1]));
                        let (mut dl, mut dh) = (d0, d1);
                        while jh - jl > 1 {
                            let jm = (jl + jh) / 2;
                            let dm = res.value(sa, a, jm)? - res.value(sb, b, jm)?;
                            if dm * dl > 0.0 {
                                jl = jm;
                                dl = dm;
                            } else {
                                jh = jm;
                                dh = dm;
                            }
                        }
                        let frac = if dl == dh { 0.0 } else { dl / (dl - dh) };
                        let (la, lb) = (res.value(sa, a, jl)?, res.value(sb, b, jl)?);
                        let (ha, hb) = (res.value(sa, a, jh)?, res.value(sb, b, jh)?);
                        let lambda_star = 0.5 * ((la + frac * (ha - la)) + (lb + frac * (hb - lb)));
                        let merged = res.merged(jl)?;
                        let rank = 1 + levels_below(&merged, la.min(lb));
                        if rank > max_rank {
                            continue;
                        }
                        events.push(CrossingEvent {
                            epsilon_star: (jl as f64 + frac) * dtheta,
                            lambda_star,
                            sectors: (ca.tag, cb.tag),
                            indices: (a, b),
                            bracket: (jl as f64 * dtheta, jh as f64 * dtheta),
                            difference: (dl, dh),
                            multiplicity: ca.tag.weight + cb.tag.weight,
                            rank,
                        });
                    }
                }
            }
        }
    }
    events.sort_by(|x, y| x.epsilon_star.total_cmp(&y.epsilon_star));
    Ok(events)
}
