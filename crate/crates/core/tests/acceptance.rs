//! Acceptance run at production resolution. Prints one line per criterion
//! followed by its individual checks, and exits non-zero when a check fails
//! that is not listed as known-unattainable.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use crackspec::capacity::{additivity, capacitary_potential, CapacityProblem};
use crackspec::discretize::assemble;
use crackspec::domain::{Arc, CrackedDiskSpec, QuarterCase, SectorKind, SectorProblem};
use crackspec::eigensolve::{default_cluster_tol, lowest_eigenpairs, lowest_eigenpairs_with, Method, SolverOptions};
use crackspec::specfun::bessel_zero;
use crackspec::spectra::*;
use crackspec::asymptotics::{fit_coefficient, model, select_law, Law};

const R1: f64 = 0.4356;
const M: usize = 180;
const TOL: f64 = 1e-6;
const BAND: f64 = 0.005;

/// Checks that fail for reasons outside the solver: the reference value
/// itself is off. Each entry is `(criterion, check label)`.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(3, "DDD lambda_3")];

struct Check {
    label: String,
    ok: bool,
    detail: String,
}

fn check(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { label: label.into(), ok, detail: detail.into() }
}

fn near(label: &str, got: f64, want: f64, rel: f64) -> Check {
    let dev = (got - want).abs() / want;
    check(label, dev <= rel, format!("{got:.4} vs {want} ({:.3}%)", 100.0 * dev))
}

fn spec(n: u32, eps: f64) -> CrackedDiskSpec {
    CrackedDiskSpec::new(n, eps, R1, 1.0).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn ell_of(kind: SectorKind) -> Option<u32> {
    match kind {
        SectorKind::Floquet { ell, .. } => Some(ell),
        SectorKind::Quarter(_) => None,
    }
}

fn crossing_label(c: &CrossingEvent) -> String {
    format!(
        "eps*={:.4} lambda*={:.3} rank {} mult {} ({}/{})",
        c.epsilon_star,
        c.lambda_star,
        c.rank,
        c.multiplicity,
        c.sectors.0.label(),
        c.sectors.1.label()
    )
}

struct Shared {
    three: EigenvalueCurve,
    four: EigenvalueCurve,
}

fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let merged = solve_full_spectrum(&spec(1, PI), M, 6, TOL).unwrap();
    let took = start.elapsed();
    let want = [5.78, 14.68, 14.68, 26.37, 26.37, 30.47];
    let mut out: Vec<Check> = merged
        .lowest(6)
        .iter()
        .zip(want)
        .enumerate()
        .map(|(i, (&g, w))| near(&format!("lambda_{}", i + 1), g, w, BAND))
        .collect();
    let mult: Vec<u32> = merged.levels(merged.default_cluster_tol()).iter().take(4).map(|c| c.multiplicity).collect();
    out.push(check("multiplicities", mult == [1, 2, 2, 1], format!("{mult:?}")));
    out.push(check("sector time", took <= Duration::from_secs(60), format!("{:.1} s", took.as_secs_f64())));
    out
}

fn criterion_2() -> Vec<Check> {
    let s = spec(12, 0.0);
    let want = [30.46, 32.53, 38.68, 48.78, 62.61, 79.91];
    let mut out = Vec::new();
    for (ell, w) in want.into_iter().enumerate() {
        let k = if ell == 0 { 3 } else { 1 };
        let op = assemble(&SectorProblem::floquet(s, ell as u32).unwrap(), M).unwrap();
        let sp = lowest_eigenpairs(&op, k, TOL).unwrap();
        out.push(near(&format!("l={ell} first"), sp.eigenvalues[0], w, BAND));
        if ell == 0 {
            // The inner disk's ground state sits next to the annulus one.
            out.push(near("l=0 second radial", sp.eigenvalues[2], 123.38, BAND));
        }
    }
    out
}

fn criterion_3() -> Vec<Check> {
    let s = spec(2, FRAC_PI_2);
    let table = [
        (QuarterCase::Nnd, [5.76, 26.42, 30.47]),
        (QuarterCase::Dnd, [14.67, 40.70, 49.0]),
        (QuarterCase::Ddd, [26.41, 57.61, 68.89]),
    ];
    let mut out = Vec::new();
    for (case, want) in table {
        let op = assemble(&SectorProblem::quarter(s, case).unwrap(), M).unwrap();
        let sp = lowest_eigenpairs(&op, 3, TOL).unwrap();
        for (i, (&g, w)) in sp.eigenvalues.iter().zip(want).enumerate() {
            out.push(near(&format!("{case} lambda_{}", i + 1), g, w, BAND));
        }
    }
    out
}

fn criterion_4(shared: &Shared) -> Vec<Check> {
    let mut out = Vec::new();

    let events = detect_crossings(&shared.three, 3).unwrap();
    match events.first() {
        Some(c) => {
            let ells = (ell_of(c.sectors.0.kind), ell_of(c.sectors.1.kind));
            let ok = (c.epsilon_star - 0.29).abs() <= 0.05
                && c.multiplicity == 3
                && c.rank == 2
                && (ells == (Some(0), Some(1)) || ells == (Some(1), Some(0)));
            out.push(check("N=3 first crossing", ok, crossing_label(c)));
        }
        None => out.push(check("N=3 first crossing", false, "none detected")),
    }
    let second = events.iter().find(|c| c.rank == 3 && (c.epsilon_star - 0.96).abs() <= 0.07);
    out.push(check(
        "N=3 rank-3 crossing near 0.96",
        second.is_some(),
        second.map_or_else(|| format!("{} events, none matched", events.len()), crossing_label),
    ));

    // Crossing abscissae for four cracks are reported as 2 eps. The one near
    // full opening sits above three distinct levels, hence the wider rank.
    let events = detect_crossings(&shared.four, 8).unwrap();
    match events.first() {
        Some(c) => {
            let ok = (2.0 * c.epsilon_star - 0.54).abs() <= 0.05 && c.multiplicity == 3;
            out.push(check("N=4 first crossing", ok, format!("2eps*={:.4}, {}", 2.0 * c.epsilon_star, crossing_label(c))));
        }
        None => out.push(check("N=4 first crossing", false, "none detected")),
    }
    for target in [0.95, 1.565] {
        let hit = events.iter().find(|c| (2.0 * c.epsilon_star - target).abs() <= 0.07);
        out.push(check(
            format!("N=4 crossing near 2eps={target}"),
            hit.is_some(),
            hit.map_or_else(
                || format!("{} events, none matched", events.len()),
                |c| format!("2eps*={:.4}, {}", 2.0 * c.epsilon_star, crossing_label(c)),
            ),
        ));
    }
    out
}

fn criterion_5() -> Vec<Check> {
    let mut eps: Vec<f64> = (1..=15).map(|i| 0.1 * i as f64).collect();
    eps.push(FRAC_PI_2 - 0.05);
    eps.push(FRAC_PI_2);
    let pts = ndd_dnd_gap(R1, 1.0, &eps, M, TOL, None).unwrap();
    let (open, last) = pts.split_at(pts.len() - 1);
    let worst = open.iter().map(|p| p.gap).fold(f64::NEG_INFINITY, f64::max);
    let mut out = vec![check(
        "gap negative before full opening",
        open.iter().all(|p| p.gap < 0.0),
        format!("{} points, largest gap {worst:.4}", open.len()),
    )];
    let tol = default_cluster_tol(TOL, last[0].ndd);
    out.push(check(
        "gap closes at pi/2",
        last[0].gap.abs() <= tol,
        format!("|gap| = {:.2e}, cluster tol {tol:.2e}", last[0].gap.abs()),
    ));
    out
}

fn criterion_6() -> (Vec<Check>, f64) {
    let deltas = [0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.03, 0.02, 0.01];
    let mut eps: Vec<f64> = deltas.iter().map(|d| FRAC_PI_2 - d).collect();
    eps.sort_by(f64::total_cmp);
    eps.push(FRAC_PI_2);
    let config = SweepConfig { m: M, k: 1, tol: TOL, jobs: None, family: SweepFamily::Quarter };
    let curve = sweep(&spec(2, eps[0]), &eps, &config).unwrap();
    let tail = eps.len() - 1;
    let mut out = Vec::new();
    for c in &curve.sectors {
        let SectorKind::Quarter(case) = c.tag.kind else { unreachable!() };
        let m = model(case, R1, 1.0).unwrap();
        let lam: Vec<f64> = c.values.iter().map(|v| v[0]).collect();
        let floor = lam.iter().copied().fold(f64::INFINITY, f64::min);
        match m.law {
            Law::Quadratic => {
                out.push(check(
                    format!("{case} above its limit"),
                    floor >= m.lambda_limit * (1.0 - BAND),
                    format!("min {floor:.4}, limit {:.4}", m.lambda_limit),
                ));
                let sel = select_law(&eps[..tail], &lam[..tail], lam[tail]).unwrap();
                out.push(check(
                    format!("{case} prefers quadratic"),
                    sel.preferred == Law::Quadratic,
                    format!(
                        "rms quadratic {:.2e}, inverse log {:.2e}",
                        sel.quadratic.windows[0].rms_residual, sel.inverse_log.windows[0].rms_residual
                    ),
                ));
            }
            Law::InverseLog => {
                let fit = fit_coefficient(&eps[..tail], &lam[..tail], m.law, lam[tail], Some(m.coefficient)).unwrap();
                let ratios: Vec<String> = fit.windows.iter().map(|w| format!("{:.3}", w.ratio)).collect();
                out.push(check(
                    format!("{case} coefficient ratio approaches 1"),
                    fit.approaching && fit.windows.iter().all(|w| w.ratio > 0.0),
                    format!("ratios {}", ratios.join(" -> ")),
                ));
            }
        }
    }
    (out, curve.max_residual())
}

fn criterion_7() -> Vec<Check> {
    let exact = TAU / (1.0 / R1).ln();
    let full = capacitary_potential(&CapacityProblem::new(R1, 1.0, M, M, vec![Arc { start: 0.0, end: TAU }]).unwrap())
        .unwrap();
    let mut out = vec![near("full circle", full.cap, exact, 0.02)];
    let mut ratios = Vec::new();
    for delta in [0.4, 0.2, 0.1, 0.05] {
        let p = additivity(R1, 1.0, delta, M).unwrap();
        out.push(check(
            format!("subadditive at delta={delta}"),
            p.cap_total <= p.cap_plus + p.cap_minus,
            format!("ratio {:.4}", p.ratio),
        ));
        ratios.push(p.ratio);
    }
    out.push(check(
        "ratio increases as delta shrinks",
        ratios.windows(2).all(|w| w[1] > w[0]) && ratios.iter().all(|&r| r < 1.0),
        format!("{ratios:.4?}"),
    ));
    out
}

fn criterion_8(shared: &Shared, quarter_residual: f64) -> Vec<Check> {
    let mut out = Vec::new();

    // Disk ground state on uniform grids (R1 = M_inner / M exactly).
    let exact = bessel_zero(0, 1).unwrap().value.powi(2);
    let disk = CrackedDiskSpec::new(1, PI, 0.5, 1.0).unwrap();
    let errs: Vec<f64> = [40, 80, 160]
        .iter()
        .map(|&m| {
            let op = assemble(&SectorProblem::floquet(disk, 0).unwrap(), m).unwrap();
            (lowest_eigenpairs(&op, 1, 1e-8).unwrap().eigenvalues[0] - exact).abs()
        })
        .collect();
    let factors = [errs[0] / errs[1], errs[1] / errs[2]];
    out.push(check(
        "second-order convergence",
        factors.iter().all(|f| (3.0..=5.0).contains(f)),
        format!("error factors {factors:.3?}"),
    ));

    for (name, curve) in [("N=3", &shared.three), ("N=4", &shared.four)] {
        let v = curve.monotonicity_violations(1e-9);
        out.push(check(format!("{name} sweep monotone"), v.is_empty(), format!("{} violations", v.len())));
    }
    let worst = shared.three.max_residual().max(shared.four.max_residual()).max(quarter_residual);
    out.push(check("residuals within tolerance", worst <= TOL, format!("max {worst:.2e}")));

    let mut worst_rel: f64 = 0.0;
    for ell in [0, 1] {
        let op = assemble(&SectorProblem::floquet(spec(3, 0.3), ell).unwrap(), 20).unwrap();
        assert!(op.n <= 400);
        let solve = |method| {
            lowest_eigenpairs_with(&op, 6, &SolverOptions { tol: 1e-9, method, ..SolverOptions::default() }).unwrap()
        };
        let (d, k) = (solve(Method::Dense), solve(Method::Krylov));
        for (a, b) in d.eigenvalues.iter().zip(&k.eigenvalues) {
            worst_rel = worst_rel.max((a - b).abs() / a);
        }
    }
    out.push(check("dense and iterative agree", worst_rel <= 1e-8, format!("max rel {worst_rel:.1e}")));

    let op = assemble(&SectorProblem::floquet(spec(1, PI), 0).unwrap(), 90).unwrap();
    let sp = lowest_eigenpairs(&op, 2, 1e-8).unwrap();
    let mu: Vec<usize> = (0..2)
        .map(|i| nodal_domains(&eigenfunction(&op, &sp, i).unwrap(), DEFAULT_ZERO_TOL).unwrap().domains)
        .collect();
    out.push(check("disk nodal counts", mu == [1, 2], format!("{mu:?}")));
    out
}

fn report(n: u32, title: &str, checks: &[Check], took: Duration) -> bool {
    let known = |c: &Check| KNOWN_UNATTAINABLE.contains(&(n, c.label.as_str()));
    let pass = checks.iter().all(|c| c.ok);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.label.as_str()).collect();
    let mut line = format!("criterion {n} ({title}): {} in {:.1} s", if pass { "PASS" } else { "FAIL" }, took.as_secs_f64());
    if !pass {
        line.push_str(&format!(" [failed: {}]", failed.join(", ")));
    }
    println!("{line}");
    for c in checks {
        let tag = match (c.ok, known(c)) {
            (true, true) => "ok (listed as unattainable)",
            (true, false) => "ok",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("    {tag}: {}: {}", c.label, c.detail);
    }
    checks.iter().all(|c| c.ok || known(c))
}

fn main() -> ExitCode {
    let timed = |f: &mut dyn FnMut() -> Vec<Check>| {
        let start = Instant::now();
        let checks = f();
        (checks, start.elapsed())
    };

    let start = Instant::now();
    let three = sweep(&spec(3, 0.0), &linspace(0.0, PI / 3.0, 30), &SweepConfig::floquet(M, 4, TOL)).unwrap();
    let four = sweep(&spec(4, 0.0), &linspace(0.0, PI / 4.0, 30), &SweepConfig::floquet(M, 4, TOL)).unwrap();
    let shared = Shared { three, four };
    let sweep_time = start.elapsed();
    println!("shared sweeps (N=3, N=4; 30 openings each, M={M}): {:.1} s", sweep_time.as_secs_f64());

    let mut quarter_residual = 0.0;
    let mut all = true;
    let (c, t) = timed(&mut criterion_1);
    all &= report(1, "plain disk", &c, t);
    let (c, t) = timed(&mut criterion_2);
    all &= report(2, "closed cracks, annulus sectors", &c, t);
    let (c, t) = timed(&mut criterion_3);
    all &= report(3, "quarter-disk endpoints", &c, t);
    let (c, t) = timed(&mut || criterion_4(&shared));
    all &= report(4, "eigenvalue crossings", &c, t + sweep_time);
    let (c, t) = timed(&mut criterion_5);
    all &= report(5, "NDD below DND", &c, t);
    let (c, t) = timed(&mut || {
        let (c, r) = criterion_6();
        quarter_residual = r;
        c
    });
    all &= report(6, "full-opening asymptotics", &c, t);
    let (c, t) = timed(&mut criterion_7);
    all &= report(7, "condenser capacity", &c, t);
    let (c, t) = timed(&mut || criterion_8(&shared, quarter_residual));
    all &= report(8, "numerical invariants", &c, t);

    if all {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures");
        ExitCode::FAILURE
    }
}
