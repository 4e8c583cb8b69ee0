use std::f64::consts::{FRAC_PI_2, PI};

use crackspec::discretize::assemble;
use crackspec::domain::{reduce_to_sectors, CrackedDiskSpec, SectorKind, SectorProblem};
use crackspec::eigensolve::lowest_eigenpairs;
use crackspec::specfun::{annulus_spectrum, bessel_j, bessel_y, disk_spectrum};
use crackspec::spectra::*;
use crackspec::Error;

const R1: f64 = 0.4356;

fn spec(n: u32, eps: f64) -> CrackedDiskSpec {
    CrackedDiskSpec::new(n, eps, R1, 1.0).unwrap()
}

fn ell_of(kind: SectorKind) -> u32 {
    match kind {
        SectorKind::Floquet { ell, .. } => ell,
        SectorKind::Quarter(_) => panic!("not a Floquet sector"),
    }
}

fn close(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= rel * y)
}

#[test]
fn sector_weights_cover_the_group() {
    for n in 1..8 {
        let total: u32 = reduce_to_sectors(&spec(n, 0.0)).iter().map(|(_, t)| t.weight).sum();
        assert_eq!(total, n);
    }
}

#[test]
fn plain_disk_from_sectors() {
    let exact = disk_spectrum(1.0, 6).unwrap().expanded();
    for n in [1, 3, 4] {
        let merged = solve_full_spectrum(&spec(n, PI / n as f64), 60, 6, 1e-6).unwrap();
        let low = merged.lowest(6);
        assert!(close(&low, &exact, 0.01), "N={n}: {low:?}");
        let levels = merged.levels(merged.default_cluster_tol());
        let mult: Vec<u32> = levels.iter().take(4).map(|c| c.multiplicity).collect();
        assert_eq!(mult, [1, 2, 2, 1], "N={n}");
    }
}

#[test]
fn single_crack_is_one_sector() {
    let s = spec(1, 0.8);
    let merged = solve_full_spectrum(&s, 30, 4, 1e-8).unwrap();
    assert_eq!(merged.sectors.len(), 1);
    let direct = lowest_eigenpairs(&assemble(&SectorProblem::floquet(s, 0).unwrap(), 30).unwrap(), 4, 1e-8).unwrap();
    assert_eq!(merged.lowest(4), direct.eigenvalues);
    assert!(merged.entries.iter().all(|e| e.sector.weight == 1));
}

#[test]
fn closed_cracks_split_disk_and_annulus() {
    let mut exact: Vec<f64> = disk_spectrum(R1, 4).unwrap().expanded();
    for ell in 0..6 {
        let v = annulus_spectrum(R1, 1.0, ell, 2).unwrap();
        let copies = if ell == 0 { 1 } else { 2 };
        for x in v {
            exact.extend(std::iter::repeat_n(x, copies));
        }
    }
    exact.sort_by(f64::total_cmp);
    let merged = solve_full_spectrum(&spec(3, 0.0), 90, 6, 1e-6).unwrap();
    let low = merged.lowest(9);
    assert!(close(&low, &exact[..9], 0.01), "{low:?} vs {:?}", &exact[..9]);
}

#[test]
fn quarters_and_floquet_sectors_agree_for_two_cracks() {
    let s = spec(2, 0.9);
    let a = solve_full_spectrum(&s, 60, 4, 1e-7).unwrap().lowest(6);
    let b = solve_quarter_spectrum(&s, 60, 3, 1e-7).unwrap().lowest(6);
    assert!(close(&a, &b, 0.01), "{a:?} vs {b:?}");
}

#[test]
fn nodal_counts_of_low_eigenfunctions() {
    let disk = spec(1, PI);
    let op = assemble(&SectorProblem::floquet(disk, 0).unwrap(), 48).unwrap();
    let sp = lowest_eigenpairs(&op, 3, 1e-8).unwrap();
    let first = nodal_domains(&eigenfunction(&op, &sp, 0).unwrap(), DEFAULT_ZERO_TOL).unwrap();
    assert_eq!(first.domains, 1);
    for i in [1, 2] {
        let c = nodal_domains(&eigenfunction(&op, &sp, i).unwrap(), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(c.domains, 2);
        assert_eq!((c.positive, c.negative), (1, 1));
    }

    // Cracked disk past the first crossing: lambda_2 lives in the l = 1 sector.
    let cracked = spec(3, 0.6);
    let p1 = SectorProblem::floquet(cracked, 1).unwrap();
    let op1 = assemble(&p1, 48).unwrap();
    let sp1 = lowest_eigenpairs(&op1, 1, 1e-8).unwrap();
    assert_eq!(nodal_domains(&eigenfunction(&op1, &sp1, 0).unwrap(), DEFAULT_ZERO_TOL).unwrap().domains, 2);
    let op0 = assemble(&SectorProblem::floquet(cracked, 0).unwrap(), 48).unwrap();
    let sp0 = lowest_eigenpairs(&op0, 1, 1e-8).unwrap();
    assert_eq!(nodal_domains(&eigenfunction(&op0, &sp0, 0).unwrap(), DEFAULT_ZERO_TOL).unwrap().domains, 1);
}

#[test]
fn annulus_mode_has_four_nodal_domains() {
    let k = annulus_spectrum(R1, 1.0, 2, 1).unwrap()[0].sqrt();
    let radial = |r: f64| {
        if r <= R1 {
            0.0
        } else {
            bessel_y(2, k * R1).unwrap() * bessel_j(2, k * r).unwrap()
                - bessel_j(2, k * R1).unwrap() * bessel_y(2, k * r).unwrap()
        }
    };
    let radii: Vec<f64> = (0..=60).map(|i| i as f64 / 60.0).collect();
    let f = GridFunction::sample(radii, 120, 2.0 * PI / 120.0, true, |r, t| radial(r) * (2.0 * t + 0.3).cos());
    assert_eq!(nodal_domains(&f, DEFAULT_ZERO_TOL).unwrap().domains, 4);
}

#[test]
fn nodal_count_rejects_zero_function() {
    let radii: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let f = GridFunction::sample(radii, 16, 2.0 * PI / 16.0, true, |_, _| 0.0);
    assert!(matches!(nodal_domains(&f, DEFAULT_ZERO_TOL), Err(Error::DegenerateVector(_))));
}

#[test]
fn sweep_validation() {
    let cfg = SweepConfig::floquet(16, 2, 1e-6);
    assert!(matches!(sweep(&spec(3, 0.0), &[], &cfg), Err(Error::Validation(_))));
    assert!(matches!(sweep(&spec(3, 0.0), &[0.3, 0.2], &cfg), Err(Error::Validation(_))));
    let zero_jobs = SweepConfig { jobs: Some(0), ..cfg };
    assert!(matches!(sweep(&spec(3, 0.0), &[0.1], &zero_jobs), Err(Error::Validation(_))));
}

#[test]
fn sweep_points_match_direct_solves_and_are_thread_independent() {
    let eps = [0.1, 0.4, 0.8];
    let one = SweepConfig { jobs: Some(1), ..SweepConfig::floquet(24, 3, 1e-7) };
    let two = SweepConfig { jobs: Some(2), ..one.clone() };
    let a = sweep(&spec(3, 0.0), &eps, &one).unwrap();
    let b = sweep(&spec(3, 0.0), &eps, &two).unwrap();
    assert_eq!(a.sectors, b.sectors);
    assert_eq!(a.epsilon_snapped, b.epsilon_snapped);
    for (t, &e) in eps.iter().enumerate() {
        let direct = solve_full_spectrum(&spec(3, e), 24, 3, 1e-7).unwrap();
        let merged = a.merged_at(t);
        for (x, y) in merged.lowest(5).iter().zip(direct.lowest(5)) {
            assert!((x - y).abs() < 1e-6 * y);
        }
    }
    assert!(a.max_residual() <= 1e-7);
}

fn coarse_three_crack_sweep() -> EigenvalueCurve {
    let eps: Vec<f64> = (0..8).map(|i| 0.1 + 0.05 * i as f64).collect();
    sweep(&spec(3, 0.0), &eps, &SweepConfig::floquet(48, 3, 1e-7)).unwrap()
}

#[test]
fn first_three_crack_crossing() {
    let curve = coarse_three_crack_sweep();
    assert!(curve.monotonicity_violations(1e-9).is_empty());
    let events = detect_crossings(&curve, 2).unwrap();
    let c = events.first().expect("a crossing below rank 2");
    assert_eq!(c.multiplicity, 3);
    assert_eq!(c.rank, 2);
    let ells = (ell_of(c.sectors.0.kind), ell_of(c.sectors.1.kind));
    assert!(ells == (0, 1) || ells == (1, 0));
    assert!(c.epsilon_star > 0.2 && c.epsilon_star < 0.4, "{}", c.epsilon_star);
    assert!(c.bracket.0 <= c.epsilon_star && c.epsilon_star <= c.bracket.1);
    assert!(c.difference.0 * c.difference.1 <= 0.0);
    let dtheta = 2.0 * PI / 3.0 / 48.0;
    assert!((c.bracket.1 - c.bracket.0 - dtheta).abs() < 1e-12);

    // lambda_2 changes sector across the bracket.
    let level2 = |eps: f64| {
        let merged = solve_full_spectrum(&spec(3, eps), 48, 3, 1e-7).unwrap();
        let e = merged.entries.iter().find(|e| e.index > 0 || ell_of(e.sector.kind) != 0).unwrap();
        ell_of(e.sector.kind)
    };
    assert_eq!(level2(c.bracket.0 - 1e-9), 0);
    assert_eq!(level2(c.bracket.1 + 1e-9), 1);
}

#[test]
fn crossings_need_two_points() {
    let curve = sweep(&spec(3, 0.0), &[0.3], &SweepConfig::floquet(16, 2, 1e-6)).unwrap();
    assert!(matches!(detect_crossings(&curve, 3), Err(Error::InsufficientData(_))));
}

#[test]
fn mixed_quarter_gap_sign() {
    let pts = ndd_dnd_gap(R1, 1.0, &[0.5, 1.0, 1.4, FRAC_PI_2], 40, 1e-7, None).unwrap();
    for p in &pts[..3] {
        assert!(p.gap < 0.0, "{p:?}");
    }
    assert!(pts[3].gap.abs() < 1e-6 * pts[3].ndd);
}
