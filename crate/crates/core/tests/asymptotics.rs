use std::f64::consts::FRAC_PI_2;

use crackspec::asymptotics::*;
use crackspec::domain::{CrackedDiskSpec, QuarterCase, SectorKind};
use crackspec::spectra::{sweep, SweepConfig, SweepFamily};
use crackspec::Error;
use proptest::prelude::*;

const R1: f64 = 0.4356;
const DELTAS: [f64; 10] = [0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.03, 0.02, 0.01];

fn ascending_eps() -> Vec<f64> {
    let mut e: Vec<f64> = DELTAS.iter().map(|d| FRAC_PI_2 - d).collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn synthetic_curves_recover_the_coefficient() {
    let eps = ascending_eps();
    for case in QuarterCase::ALL {
        let m = model(case, R1, 1.0).unwrap();
        let lam: Vec<f64> = eps.iter().map(|&e| m.predict(e).unwrap()).collect();
        let fit = fit_coefficient(&eps, &lam, m.law, m.lambda_limit, Some(m.coefficient)).unwrap();
        assert!((fit.c_hat - m.coefficient).abs() < 1e-6 * m.coefficient);
        assert_eq!(fit.windows.len(), 3);
        assert!(fit.approaching);
        assert_eq!(select_law(&eps, &lam, m.lambda_limit).unwrap().preferred, m.law);
    }
}

#[test]
fn fit_needs_four_tail_points() {
    let eps = [1.0, 1.2, 1.5, 1.55];
    let lam = [20.0, 19.0, 18.0, 17.5];
    assert!(matches!(fit_coefficient(&eps, &lam, Law::Quadratic, 17.0, None), Err(Error::InsufficientData(_))));
    assert!(matches!(fit_coefficient(&eps, &lam[..3], Law::Quadratic, 17.0, None), Err(Error::Dimension { .. })));
}

#[test]
fn conjectural_status_is_carried() {
    for (case, status) in [
        (QuarterCase::Nnd, Status::Proven),
        (QuarterCase::Dnd, Status::Proven),
        (QuarterCase::Ddd, Status::Conjectural),
        (QuarterCase::Ndd, Status::Conjectural),
    ] {
        assert_eq!(model(case, R1, 1.0).unwrap().status, status);
    }
}

#[test]
fn computed_tails_respect_bounds_and_prefer_the_right_law() {
    let mut eps = ascending_eps();
    eps.push(FRAC_PI_2);
    let template = CrackedDiskSpec::new(2, eps[0], R1, 1.0).unwrap();
    let config = SweepConfig { m: 60, k: 1, tol: 1e-7, jobs: None, family: SweepFamily::Quarter };
    let curve = sweep(&template, &eps, &config).unwrap();
    let tail = eps.len() - 1;
    for c in &curve.sectors {
        let SectorKind::Quarter(case) = c.tag.kind else { unreachable!() };
        let m = model(case, R1, 1.0).unwrap();
        let lam: Vec<f64> = c.values.iter().map(|v| v[0]).collect();
        // Dirichlet monotonicity: the curve never undershoots the full-opening value.
        assert!(lam.iter().all(|&l| l >= m.lambda_limit * (1.0 - 0.005)), "{case}: {lam:?}");
        let sel = select_law(&eps[..tail], &lam[..tail], lam[tail]).unwrap();
        if m.law == Law::Quadratic {
            assert_eq!(sel.preferred, Law::Quadratic, "{case}");
        }
        let fit = fit_coefficient(&eps[..tail], &lam[..tail], m.law, lam[tail], Some(m.coefficient)).unwrap();
        assert!(fit.c_hat > 0.0, "{case}");
    }
}

proptest! {
    #[test]
    fn coefficients_positive(case in prop::sample::select(QuarterCase::ALL.to_vec()), r1 in 0.01f64..0.99, r2 in 0.5f64..3.0) {
        let m = model(case, r1 * r2, r2).unwrap();
        prop_assert!(m.coefficient > 0.0);
        prop_assert!(m.lambda_limit > 0.0);
    }

    #[test]
    fn predictions_decrease_toward_the_limit(case in prop::sample::select(QuarterCase::ALL.to_vec()), a in 0.0f64..0.999, b in 0.0f64..0.999) {
        let m = model(case, R1, 1.0).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (e_lo, e_hi) = (FRAC_PI_2 - hi, FRAC_PI_2 - lo);
        prop_assert!(m.predict(e_lo).unwrap() >= m.predict(e_hi).unwrap());
        prop_assert!(m.predict(e_hi).unwrap() >= m.lambda_limit);
    }

    #[test]
    fn outside_window_is_a_domain_error(e in -1.0f64..(FRAC_PI_2 - 1.0)) {
        let m = model(QuarterCase::Nnd, R1, 1.0).unwrap();
        prop_assert!(matches!(m.predict(e), Err(Error::Domain(_))));
    }
}
