//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pzphase::adiabatic::{adiabatic_phase, DriveSpec};
use pzphase::manybody::{filled_band_phase, slater_cycle_oracle, FilledBandSpec};
use pzphase::models::{ssh_obc_hamiltonian, translate, zero_mode_count};
use pzphase::numerics::{angle_distance, herm_eig_n, JacobiOptions};
use pzphase::phase::{apply_gauge, build_chain, chain_phase, zak_phase, GaugeFunction};
use pzphase::{pancharatnam_zak, wrap_angle, Angle, BlochModel, ContinuumModel, KitaevModel, SshModel, ZakEndpoint};

const M: usize = 4096;
const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ssh(v: f64, w: f64, b: f64) -> BlochModel {
    SshModel::with_hoppings(v, w, b).unwrap().into()
}

fn kitaev(eps: f64) -> BlochModel {
    KitaevModel::new(eps, 1.0, 1.0, 1.0).unwrap().into()
}

fn gamma_g(model: &BlochModel, m: usize) -> Angle {
    pancharatnam_zak(model, 0, m).unwrap().gamma
}

const TOPOLOGICAL: [(f64, f64); 3] = [(0.2, 1.0), (0.5, 1.0), (0.9, 1.0)];
const TRIVIAL: [(f64, f64); 3] = [(1.1, 1.0), (2.0, 1.0), (5.0, 1.0)];

/// Largest deviation from the expected value and slowest single point.
fn ssh_grid(b: f64, topological_value: Angle, trivial_value: Angle) -> (f64, Duration) {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (pairs, expected) in [(TOPOLOGICAL, topological_value), (TRIVIAL, trivial_value)] {
        for (v, w) in pairs {
            let start = Instant::now();
            let g = gamma_g(&ssh(v, w, b), M);
            slowest = slowest.max(start.elapsed());
            worst = worst.max(g.distance(expected));
        }
    }
    (worst, slowest)
}

fn criterion_1() -> Outcome {
    let (worst, slowest) = ssh_grid(0.3, Angle::PI, Angle::ZERO);
    outcome(
        worst < 1e-6 && slowest < Duration::from_secs(1),
        format!("max deviation {worst:.2e}, slowest point {slowest:.2?}"),
    )
}

fn criterion_2() -> Outcome {
    let (worst, _) = ssh_grid(0.7, Angle::ZERO, Angle::PI);
    outcome(worst < 1e-6, format!("b = 0.7a, max deviation {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for eps in [0.0, 1.0, 1.9] {
        worst = worst.max(gamma_g(&kitaev(eps), M).distance(Angle::PI));
    }
    for eps in [2.1, 3.0, 10.0] {
        worst = worst.max(gamma_g(&kitaev(eps), M).distance(Angle::ZERO));
    }
    outcome(worst < 1e-6, format!("max deviation {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let chain = build_chain(&ssh(1.0, 2.0, 0.3), 0, M).unwrap();
    let g0 = chain_phase(&chain).unwrap().gamma;
    let z0 = zak_phase(&chain, ZakEndpoint::RawEigenvector).unwrap().gamma;
    let (mut dg, mut dz): (f64, f64) = (0.0, 0.0);
    for trial in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + trial);
        let values = (0..=M).map(|_| -rng.gen_range(-PI..PI)).collect();
        let gauge = GaugeFunction::new(values).unwrap();
        let gauged = apply_gauge(&chain, &gauge).unwrap();
        dg = dg.max(chain_phase(&gauged).unwrap().gamma.distance(g0));
        let z1 = zak_phase(&gauged, ZakEndpoint::RawEigenvector).unwrap().gamma;
        dz = dz.max((z1 - z0).distance(gauge.zak_shift()));
    }
    let elapsed = start.elapsed();
    outcome(
        dg < 1e-9 && dz < 1e-9 && elapsed < Duration::from_secs(5),
        format!("max |d gamma_g| {dg:.2e}, max Zak shift residual {dz:.2e}, {elapsed:.2?}"),
    )
}

fn criterion_5() -> Outcome {
    let model = ssh(1.0, 2.0, 0.3);
    let chain = build_chain(&model, 0, M).unwrap();
    let g0 = chain_phase(&chain).unwrap().gamma;
    let z0 = zak_phase(&chain, ZakEndpoint::PeriodicGauge).unwrap().gamma;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut dg, mut dz): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let d = loop {
            let d: f64 = rng.gen_range(0.0..1.0);
            if d > 0.0 {
                break d;
            }
        };
        let moved = build_chain(&translate(&model, d), 0, M).unwrap();
        dg = dg.max(chain_phase(&moved).unwrap().gamma.distance(g0));
        let z1 = zak_phase(&moved, ZakEndpoint::PeriodicGauge).unwrap().gamma;
        dz = dz.max((z1 - z0).distance(wrap_angle(TAU * d)));
    }
    outcome(
        dg < 1e-6 && dz < 1e-6,
        format!("max |d gamma_g| {dg:.2e}, max Zak shift residual {dz:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (mut oracle_dev, mut stat_dev): (f64, f64) = (0.0, 0.0);
    for (v, w) in [(1.0, 2.0), (2.0, 1.0)] {
        let model = ssh(v, w, 0.3);
        let g = gamma_g(&model, M);
        for n in 2..=6 {
            let spec = FilledBandSpec::new(model.clone(), 0, n, 64).unwrap();
            let oracle = slater_cycle_oracle(&spec).unwrap();
            oracle_dev = oracle_dev.max(oracle.distance(filled_band_phase(g, n)));
            let expected = if n % 2 == 0 { Angle::PI } else { Angle::ZERO };
            stat_dev = stat_dev.max((oracle - g).distance(expected));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        oracle_dev < 1e-6 && stat_dev < 1e-6 && elapsed < Duration::from_secs(10),
        format!("oracle vs formula {oracle_dev:.2e}, statistics term {stat_dev:.2e}, {elapsed:.2?}"),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let model = ssh(1.0, 2.0, 0.3);
    let reference = gamma_g(&model, M);
    let deviations: Vec<f64> = [200.0, 400.0, 800.0]
        .into_iter()
        .map(|t| {
            let drive = DriveSpec::new(model.clone(), 0, t, 0.01).unwrap();
            adiabatic_phase(&drive).unwrap().1.gamma.distance(reference)
        })
        .collect();
    let elapsed = start.elapsed();
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        monotone && deviations[2] < 0.05 && elapsed < Duration::from_secs(30),
        format!("deviations {deviations:.4?} rad, {elapsed:.2?}"),
    )
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for v0 in [0.5, 2.0, 5.0] {
        let model: BlochModel = ContinuumModel::single_harmonic(1.0, 1.0, 16, v0).unwrap().into();
        let g = gamma_g(&model, 512).value();
        worst = worst.max(angle_distance(g, 0.0).min(angle_distance(g, PI)));
        values.push(g / PI);
    }
    outcome(
        worst < 1e-4,
        format!("gamma_g/pi {values:.6?}, max distance to 0 or pi {worst:.2e}"),
    )
}

fn criterion_9() -> Outcome {
    let ms = [256, 512, 1024, 2048, 4096, 8192];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, model) in [("SSH", ssh(1.0, 2.0, 0.3)), ("Kitaev", kitaev(1.0))] {
        let phases: Vec<Angle> = ms.iter().map(|&m| gamma_g(&model, m)).collect();
        let diffs: Vec<f64> = phases.windows(2).map(|w| w[0].distance(w[1])).collect();
        // Both models are quantized at every M, so successive differences sit at rounding level.
        let monotone = diffs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let at_4096 = diffs[4];
        pass &= monotone && at_4096 < 1e-8;
        detail.push(format!("{name} |g(4096)-g(8192)| {at_4096:.2e}"));
    }
    outcome(pass, detail.join(", "))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let count = |v: f64| {
        let model = SshModel::with_hoppings(v, 1.0, 0.3).unwrap();
        let h = ssh_obc_hamiltonian(&model, 40).unwrap();
        let spectrum: Vec<f64> = herm_eig_n(&h, JacobiOptions::default())
            .unwrap()
            .into_iter()
            .map(|p| p.energy)
            .collect();
        zero_mode_count(&spectrum, 1e-3).unwrap()
    };
    let (topological, trivial) = (count(0.5), count(2.0));
    let elapsed = start.elapsed();
    outcome(
        topological == 2 && trivial == 0 && elapsed < Duration::from_secs(1),
        format!("zero modes {topological} (v=0.5), {trivial} (v=2), {elapsed:.2?}"),
    )
}

fn criterion_11() -> Outcome {
    let mut worst: f64 = 0.0;
    for (vt, wt) in TOPOLOGICAL {
        let gt = gamma_g(&ssh(vt, wt, 0.3), M);
        for (vn, wn) in TRIVIAL {
            let gn = gamma_g(&ssh(vn, wn, 0.3), M);
            worst = worst.max((gt - gn).distance(Angle::PI));
        }
    }
    outcome(worst < 1e-6, format!("max ||d gamma_g| - pi| {worst:.2e}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("SSH topological phase values", criterion_1),
        ("SSH b-interchange", criterion_2),
        ("Kitaev phase diagram", criterion_3),
        ("gauge invariance", criterion_4),
        ("translation invariance", criterion_5),
        ("many-body statistics term", criterion_6),
        ("adiabatic cross-validation", criterion_7),
        ("inversion-symmetric quantization", criterion_8),
        ("convergence in M", criterion_9),
        ("OBC zero modes", criterion_10),
        ("topological minus trivial phase", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        if !result.pass {
            failures += 1;
        }
        println!(
            "{} criterion {:>2}: {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
