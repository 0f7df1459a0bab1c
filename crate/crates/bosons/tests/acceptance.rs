//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass/fail line (run with `--nocapture` to see them on success). Every
//! tolerance is pinned here, not configurable.

use bosons::cvec;
use bosons::experiments::{
    self, render_csv, ExpOpts, Verdict,
};
use bosons::index::dim_sym;
use bosons::nets::{self, NetOpts};
use bosons::sampling::{haar_boson_state, haar_unit_vector, RngSpec};
use bosons::spectral::{
    basis_spectral_norm, brute_force_spectral_norm, dicke_entanglement, spectral_norm,
    BlockProfile, SpectralOpts,
};
use bosons::tensor::SymmetricTensor;
use num_complex::Complex;

fn verdict_line(id: u32, pass: bool, what: &str) -> bool {
    println!(
        "acceptance {:02}: {} - {}",
        id,
        if pass { "PASS" } else { "FAIL" },
        what
    );
    pass
}

fn opts(seed: u64, restarts: usize) -> ExpOpts {
    ExpOpts {
        rng: RngSpec::new(seed, 0),
        restarts,
        ..ExpOpts::default()
    }
}

/// 1. Dicke closed forms match the optimizer to 1e-6 and the qubit grid
///    oracle within its certified error, for every block profile with
///    m <= 12.
#[test]
fn acceptance_01_dicke_closed_forms() {
    let mut pass = true;
    for m in 1..=12u32 {
        for j in 0..=m {
            let closed_e = dicke_entanglement(j, m).unwrap();
            let profile = if j == 0 || j == m {
                BlockProfile::new(vec![m as u64]).unwrap()
            } else {
                BlockProfile::new(vec![j as u64, (m - j) as u64]).unwrap()
            };
            let closed_norm = basis_spectral_norm(&profile);

            let entries: Vec<u32> = std::iter::repeat(1)
                .take(j as usize)
                .chain(std::iter::repeat(2).take((m - j) as usize))
                .collect();
            let idx = bosons::index::MultiIndex::new(2, entries).unwrap();
            let t = SymmetricTensor::<f64>::basis_state(&idx).unwrap();

            let res = spectral_norm(
                &t,
                &SpectralOpts {
                    restarts: 16,
                    instance: (m * 100 + j) as u64,
                    ..SpectralOpts::default()
                },
            )
            .unwrap();
            let opt_e = -2.0 * res.value.log2();
            if (opt_e - closed_e).abs() > 1e-6 {
                pass = false;
            }

            let grid = brute_force_spectral_norm(&t, 256).unwrap();
            if grid.value > closed_norm + 1e-10 || closed_norm > grid.value + grid.error_bound {
                pass = false;
            }
        }
    }
    assert!(verdict_line(
        1,
        pass,
        "Dicke closed forms agree with optimizer (1e-6) and grid certificates, m <= 12"
    ));
}

/// 2. Monte Carlo average of |<T, v^(x)m>|^2 over 1e5 Haar vectors equals
///    1/dim within 5 standard errors, for 10 tensors at each of
///    (2,3), (2,4), (3,3).
#[test]
fn acceptance_02_projector_average() {
    let mut pass = true;
    for (n, m) in [(2u32, 3u32), (2, 4), (3, 3)] {
        let report = experiments::verify_schur_average(n, m, 100_000, 10, &opts(42, 8)).unwrap();
        if !report.passed() {
            pass = false;
            eprintln!("{}", report.to_text());
        }
    }
    assert!(verdict_line(
        2,
        pass,
        "projector average = 1/dim within 5 stderr at (2,3), (2,4), (3,3), 1e5 samples x 10 tensors"
    ));
}

/// 3. 500 Haar states at (2, 20): every witness has value^2 >= 1/21 - 1e-8
///    and E <= log2(21) + 1e-6.
#[test]
fn acceptance_03_entanglement_window() {
    let report = experiments::max_entanglement_check(2, 20, 500, &opts(42, 32)).unwrap();
    let min_sq = report
        .rows
        .iter()
        .find(|r| r.statistic == "min_witness_sq")
        .unwrap();
    let max_e = report
        .rows
        .iter()
        .find(|r| r.statistic == "max_entanglement")
        .unwrap();
    let pass = report.passed()
        && min_sq.value >= 1.0 / 21.0 - 1e-8
        && max_e.value <= 21f64.log2() + 1e-6;
    if !pass {
        eprintln!("{}", report.to_text());
    }
    assert!(verdict_line(
        3,
        pass,
        "(2,20) x 500: witness^2 >= 1/21 - 1e-8 and E <= log2 21 + 1e-6"
    ));
}

/// 4. Concentration at (2, 50), 1000 samples: the empirical fraction with
///    E >= log2 50 - log2 log2 50 - 3 is exactly 1.0.
#[test]
fn acceptance_04_concentration() {
    let report = experiments::concentration_check(2, 50, 1000, &opts(42, 32)).unwrap();
    let frac = report
        .rows
        .iter()
        .find(|r| r.statistic == "fraction_above_threshold")
        .unwrap();
    let pass = report.passed() && frac.value == 1.0;
    if !pass {
        eprintln!("{}", report.to_text());
    }
    assert!(verdict_line(
        4,
        pass,
        "(2,50) x 1000: fraction with E above the concentration cutoff is 1.0"
    ));
}

/// 5. Net validity for n in {2,3}, eps in {0.5, 0.2}: cardinality within
///    2^(n+1) n^n / eps^(2(n-1)) and 1e4 covering probes all inside eps/2.
#[test]
fn acceptance_05_net_validity() {
    let mut pass = true;
    for n in [2u32, 3] {
        for eps in [0.5f64, 0.2] {
            let net = nets::build_net::<f64>(n, eps, &NetOpts::default()).unwrap();
            let cap = 2f64.powi(n as i32 + 1) * (n as f64).powi(n as i32)
                / eps.powi(2 * (n as i32 - 1));
            if net.len() as f64 > cap {
                pass = false;
                eprintln!("cardinality {} over cap {cap} at n={n} eps={eps}", net.len());
            }
            let coverage = nets::covering_check(&net, 10_000, 42);
            if !coverage.passed() {
                pass = false;
                eprintln!(
                    "covering failures {} at n={n} eps={eps}, worst {:?}",
                    coverage.failures, coverage.worst_uncovered
                );
            }
        }
    }
    assert!(verdict_line(
        5,
        pass,
        "nets at n in {2,3}, eps in {0.5,0.2}: cardinality within certificate, 1e4 probes covered"
    ));
}

/// 6. Certified upper bounds on 100 Haar states at (2, 30), eps = 0.9:
///    certification never contradicts the optimizer witness.
#[test]
fn acceptance_06_certified_bounds() {
    let spec = RngSpec::new(42, 0);
    let net_opts = NetOpts::default();
    let mut certified = 0usize;
    let mut contradictions = 0usize;
    for k in 0..100u64 {
        let mut rng = spec.rng(k);
        let psi = haar_boson_state::<f64, _>(&mut rng, 2, 30).unwrap();
        let cert = nets::certified_upper_bound(psi.tensor(), 0.9, &net_opts, None).unwrap();
        if cert.certified {
            certified += 1;
            let res = spectral_norm(
                psi.tensor(),
                &SpectralOpts {
                    restarts: 32,
                    instance: k,
                    ..SpectralOpts::default()
                },
            )
            .unwrap();
            if res.value >= 0.9 {
                contradictions += 1;
            }
        }
    }
    let pass = contradictions == 0 && certified > 0;
    assert!(verdict_line(
        6,
        pass,
        &format!(
            "(2,30) x 100 at eps 0.9: {certified} certified, {contradictions} contradictions"
        )
    ));
}

/// 7. Tensor-power Lipschitz bound over 1e4 random unit pairs for every
///    m <= 8, via ||v^(x)m - w^(x)m||^2 = 2 - 2 Re <v,w>^m.
#[test]
fn acceptance_07_lipschitz() {
    let spec = RngSpec::new(42, 0);
    let mut pass = true;
    for k in 0..10_000u64 {
        let n = 2 + (k % 3) as usize;
        let mut rng = spec.rng(k);
        let v = haar_unit_vector::<f64, _>(&mut rng, n);
        let w = haar_unit_vector::<f64, _>(&mut rng, n);
        let inner = cvec::inner(&v, &w);
        let dist = cvec::norm(&v.iter().zip(&w).map(|(a, b)| a - b).collect::<Vec<_>>());
        let mut power = Complex::new(1.0f64, 0.0);
        for m in 1..=8u32 {
            power *= inner;
            let lhs = (2.0 - 2.0 * power.re).max(0.0).sqrt();
            if lhs > m as f64 * dist + 1e-10 {
                pass = false;
                eprintln!("violation at k={k} m={m}: {lhs} > {}", m as f64 * dist);
            }
        }
    }
    assert!(verdict_line(
        7,
        pass,
        "||v^m - w^m|| <= m ||v - w|| + 1e-10 on 1e4 unit pairs, m <= 8"
    ));
}

/// 8. Norm sandwich on 1e3 random qubit tensors, m <= 4: the grid-oracle
///    value stays within [2^(-m/2) ||T||_2 - 1e-8, ||T||_2 + 1e-8].
#[test]
fn acceptance_08_norm_sandwich() {
    let spec = RngSpec::new(42, 0);
    let mut pass = true;
    for k in 0..1000u64 {
        let m = 1 + (k % 4) as u32;
        let d = dim_sym(2, m).unwrap() as usize;
        let mut rng = spec.rng(k);
        let coeffs = haar_unit_vector::<f64, _>(&mut rng, d);
        let scale = Complex::new(0.5 + (k % 7) as f64 / 4.0, 0.0);
        let t = SymmetricTensor::new(2, m, coeffs).unwrap().scaled(scale);
        let hs = t.hs_norm();
        let grid = brute_force_spectral_norm(&t, 96).unwrap();
        let lower = 2f64.powf(-(m as f64) / 2.0) * hs - 1e-8;
        let upper = hs + 1e-8;
        if grid.value < lower || grid.value > upper {
            pass = false;
            eprintln!(
                "violation at k={k} m={m}: value {} outside [{lower}, {upper}]",
                grid.value
            );
        }
    }
    assert!(verdict_line(
        8,
        pass,
        "grid value within [2^(-m/2) ||T||, ||T||] +- 1e-8 on 1e3 qubit tensors, m <= 4"
    ));
}

/// 9. Sphere-tail exactness for d in {2, 10, 100} at t in {0.1, 0.25, 0.5}:
///    empirical tails match (1-t)^(d-1) within 3 stderr; the printed
///    exponential bound is tabulated with discrepancy flags only.
#[test]
fn acceptance_09_sphere_tail() {
    let mut pass = true;
    let epsilons: Vec<f64> = [0.1f64, 0.25, 0.5].iter().map(|t| t.sqrt()).collect();
    for d in [2u32, 10, 100] {
        let report =
            experiments::hiai_petz_tail_check(d, &epsilons, 100_000, &opts(42, 8)).unwrap();
        if !report.passed() {
            pass = false;
            eprintln!("{}", report.to_text());
        }
        // The flag mechanism must be present (printed bound rows exist) and
        // flags must not fail the report.
        let printed_rows = report
            .rows
            .iter()
            .filter(|r| r.statistic == "printed_bound")
            .count();
        if printed_rows != epsilons.len() {
            pass = false;
        }
        if d == 2 {
            let flagged = report
                .rows
                .iter()
                .any(|r| r.statistic == "printed_bound" && r.verdict == Some(Verdict::Flag));
            if !flagged {
                pass = false;
                eprintln!("expected a printed-bound discrepancy flag at d=2");
            }
        }
    }
    assert!(verdict_line(
        9,
        pass,
        "sphere tails match the exact law within 3 stderr; printed bound flagged, not failed"
    ));
}

/// 10. Determinism: identical (seed, stream, params) give byte-identical
///     CSV across thread counts 1 and 4.
#[test]
fn acceptance_10_determinism() {
    let run = |threads: usize| {
        let o = ExpOpts {
            rng: RngSpec::new(42, 0),
            threads,
            restarts: 8,
            ..ExpOpts::default()
        };
        let a = experiments::verify_schur_average(2, 3, 5000, 3, &o).unwrap();
        let b = experiments::concentration_check(2, 12, 80, &o).unwrap();
        let c = experiments::hiai_petz_tail_check(10, &[0.3, 0.5], 20_000, &o).unwrap();
        render_csv(&[a, b, c])
    };
    let serial = run(1);
    let parallel = run(4);
    let pass = serial == parallel;
    assert!(verdict_line(
        10,
        pass,
        "byte-identical CSV across thread counts {1, 4}"
    ));
}

/// 11. The parameter table reproduces the qubit feasibility onsets exactly:
///     m = 43 for the alpha = 8 route and m = 108 for the general route.
#[test]
fn acceptance_11_parameter_table() {
    let report = experiments::concentration_parameter_table(2, &[30, 42, 43, 107, 108]).unwrap();
    let alpha8 = report
        .rows
        .iter()
        .find(|r| r.statistic == "qubit_alpha8_onset_m")
        .unwrap();
    let general = report
        .rows
        .iter()
        .find(|r| r.statistic == "qubit_general_route_onset_m")
        .unwrap();
    let pass = report.passed() && alpha8.value == 43.0 && general.value == 108.0;
    if !pass {
        eprintln!("{}", report.to_text());
    }
    assert!(verdict_line(
        11,
        pass,
        "feasibility onsets reproduce m = 43 (alpha = 8) and m = 108 (general route)"
    ));
}
