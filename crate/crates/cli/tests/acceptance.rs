//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p qtrans-cli --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use qtrans::counterexample::{curvature_at, fourier_decay_probe, trace_zero_component};
use qtrans::families::{random_point, rng_from_seed};
use qtrans::{rho_matrix, FockConfig, C64};
use qtrans_cli::suites::run_suite;
use qtrans_cli::{Command, Report, RunConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(command: Command, tweak: impl FnOnce(&mut RunConfig)) -> (Report, Duration) {
    let mut cfg = RunConfig::defaults(command);
    tweak(&mut cfg);
    cfg.validate().unwrap();
    let start = Instant::now();
    let report = run_suite(&cfg).unwrap();
    (report, start.elapsed())
}

fn metric(r: &Report, name: &str) -> f64 {
    r.get_f64(name).unwrap_or_else(|| panic!("{} has no metric {name}", r.command))
}

fn passed(r: &Report, names: &[&str]) -> bool {
    names.iter().all(|n| !r.failed().iter().any(|f| f == n))
}

/// Hermite functions `h_k(t) = 2^{1/4}(2^k k!)^{-1/2} H_k(√(2π)t) e^{−πt²}`
/// from the normalized three-term recurrence.
fn hermite(t: f64, count: usize) -> Vec<f64> {
    let s = (2.0 * PI).sqrt() * t;
    let mut h = vec![0.0; count];
    h[0] = 2f64.powf(0.25) * (-PI * t * t).exp();
    if count > 1 {
        h[1] = 2f64.sqrt() * s * h[0];
    }
    for k in 1..count.saturating_sub(1) {
        let kf = k as f64;
        h[k + 1] = (2.0 / (kf + 1.0)).sqrt() * s * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
    }
    h
}

/// `⟨h_j, ρ(x, y, 1) h_k⟩` with `(ρ(x, y, 1)φ)(t) = e^{πi(xy + 2yt)} φ(t + x)`,
/// trapezoid rule on `[−8, 8]`.
fn quadrature_matrix(x: f64, y: f64, levels: usize) -> Vec<Vec<C64>> {
    let points = 4096;
    let h = 16.0 / points as f64;
    let mut m = vec![vec![C64::new(0.0, 0.0); levels]; levels];
    for i in 0..points {
        let t = -8.0 + i as f64 * h;
        let a = hermite(t, levels);
        let b = hermite(t + x, levels);
        let phase = C64::from_polar(h, PI * (x * y + 2.0 * y * t));
        for j in 0..levels {
            for k in 0..levels {
                m[j][k] += phase * (a[j] * b[k]);
            }
        }
    }
    m
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = FockConfig::new(1, 16).unwrap();
    let mut rng = rng_from_seed(101);
    let mut oracle_dev = 0.0f64;
    for _ in 0..6 {
        let z = random_point(1, 1.0, &mut rng);
        let m = rho_matrix(&z, &cfg).unwrap();
        let q = quadrature_matrix(z.x()[0], z.y()[0], 16);
        for j in 0..16 {
            for k in 0..16 {
                oracle_dev = oracle_dev.max((m.matrix()[(j, k)] - q[j][k]).norm());
            }
        }
    }
    let (r, _) = suite(Command::ReprCheck, |c| c.levels = 64);
    let projective = metric(&r, "projective_defect");
    let unitarity = metric(&r, "unitarity_defect");
    let elapsed = start.elapsed();
    Outcome {
        pass: oracle_dev < 1e-8 && projective < 1e-6 && unitarity < 1e-4 && elapsed.as_secs_f64() < 30.0,
        detail: format!(
            "oracle dev {oracle_dev:.2e} (<1e-8), projective {projective:.2e} (<1e-6), unitarity {unitarity:.2e} (<1e-4), {:.1}s (<30s)",
            elapsed.as_secs_f64()
        ),
    }
}

fn criteria_2_and_9() -> (Outcome, Outcome) {
    let (r, elapsed) = suite(Command::TransformCheck, |c| {
        c.levels = 64;
        c.side = 12.0;
        c.grid_points = 96;
    });
    let secs = elapsed.as_secs_f64();
    let coarse = metric(&r, "roundtrip_error");
    let fine = metric(&r, "roundtrip_error_refined");
    let spread = metric(&r, "plancherel_spread");
    let halving = passed(&r, &["roundtrip_halving"]);
    let two = Outcome {
        pass: coarse < 1e-4 && halving && spread < 1e-3 && secs < 60.0,
        detail: format!(
            "round trip {coarse:.2e} (<1e-4) -> {fine:.2e} at 2M,2N (halving: {halving}), Plancherel spread {spread:.2e} (<1e-3), {secs:.1}s for transform suite (<60s)"
        ),
    };
    let ratio = metric(&r, "thm21_spread_p4");
    let nine = Outcome {
        pass: ratio < 50.0 && secs < 120.0,
        detail: format!("max/min of S^4 ratio over 20 bumps {ratio:.4} (<50), {secs:.1}s (<120s)"),
    };
    (two, nine)
}

fn criterion_3() -> Outcome {
    let (r, elapsed) = suite(Command::IntertwineCheck, |c| c.levels = 64);
    let dev = metric(&r, "intertwining_deviation");
    let pairs = metric(&r, "pairs");
    Outcome {
        pass: dev < 1e-5 && pairs >= 100.0 && elapsed.as_secs_f64() < 60.0,
        detail: format!("max deviation {dev:.2e} (<1e-5) over {pairs} pairs, {:.1}s (<60s)", elapsed.as_secs_f64()),
    }
}

fn criterion_4() -> Outcome {
    let (r, elapsed) = suite(Command::Independence, |c| c.levels = 64);
    let err = metric(&r, "p0_two_point_error");
    let margins: Vec<f64> =
        ["min_margin_p0", "min_margin_rank3", "min_margin_bump"].iter().map(|n| metric(&r, n)).collect();
    let min = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Outcome {
        pass: err < 1e-5 && min > 1e-6 && elapsed.as_secs_f64() < 60.0,
        detail: format!(
            "two-point error {err:.2e} (<1e-5), min margins p0/rank3/bump {:.2e}/{:.2e}/{:.2e} (>1e-6), {:.1}s (<60s)",
            margins[0],
            margins[1],
            margins[2],
            elapsed.as_secs_f64()
        ),
    }
}

fn criteria_5_and_6() -> (Outcome, Outcome) {
    let (r, elapsed) = suite(Command::Counterexample, |c| {
        c.levels = 256;
        c.curve_nodes = 4000;
    });
    let secs = elapsed.as_secs_f64();
    let res = metric(&r, "residual_rel");
    let res_half = metric(&r, "residual_rel_half_N");
    let full = metric(&r, "residual_rel_full");
    let full_half = metric(&r, "residual_rel_full_half_N");
    let norm = metric(&r, "norm_s2");
    let sa = metric(&r, "selfadjoint_defect");
    let five = Outcome {
        pass: res < 5e-2 && res_half < 5e-2 && full < full_half && norm > 0.1 && sa < 1e-10 && secs < 300.0,
        detail: format!(
            "leading-block residual {res:.2e} at N=256, {res_half:.2e} at N=128 (<5e-2); full-matrix residual {full:.3} < {full_half:.3}; ‖A‖_S2 {norm:.3} (>0.1); self-adjoint defect {sa:.1e} (<1e-10); {secs:.1}s (<300s)"
        ),
    };
    let exponent = metric(&r, "decay_exponent");
    let stderr = metric(&r, "decay_stderr");
    let six = Outcome {
        pass: (-0.35..=-0.15).contains(&exponent),
        detail: format!("singular-value exponent over j in [10,128] {exponent:.4} ± {stderr:.4} (in [-0.35,-0.15])"),
    };
    (five, six)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let curve = trace_zero_component(4000).unwrap();
    let radii: Vec<f64> = (0..2000).map(|i| 5.0 + 45.0 * i as f64 / 1999.0).collect();
    let rays: Vec<[f64; 2]> = [0.3f64, 1.1, 1.9, 2.7].iter().map(|t| [t.cos(), t.sin()]).collect();
    let fits = fourier_decay_probe(&curve, &rays, &radii).unwrap();
    let exps: Vec<f64> = fits.iter().map(|f| f.exponent).collect();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: exps.iter().all(|e| (-0.65..=-0.35).contains(e)) && secs < 60.0,
        detail: format!(
            "exponents {} (in [-0.65,-0.35]), {secs:.1}s (<60s)",
            exps.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let seed = curvature_at(0.25, 0.0).unwrap();
    let curve = trace_zero_component(4000).unwrap();
    let min = curve.curvatures().iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: (seed - 2.0 * PI).abs() < 1e-6 && min > 1.0 && secs < 10.0,
        detail: format!("κ(1/4,0) − 2π = {:.1e} (<1e-6), min |κ| {min:.4} (>1), {secs:.2}s (<10s)", seed - 2.0 * PI),
    }
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qtrans");
    let mut differing = Vec::new();
    for command in
        ["repr-check", "transform-check", "intertwine-check", "independence", "counterexample", "decay-fit", "zero-scan"]
    {
        let run = |threads: &str| {
            let out = Process::new(bin).args([command, "--seed", "17"]).env("QTRANS_THREADS", threads).output().unwrap();
            assert!(out.status.code().is_some(), "{command} was killed");
            out.stdout
        };
        let first = run("1");
        let second = run("2");
        if first.is_empty() || first != second {
            differing.push(command);
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            "all 7 suites byte-identical across reruns (1 and 2 threads)".into()
        } else {
            format!("differing output: {}", differing.join(", "))
        },
    }
}

#[test]
fn acceptance() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "representation correctness", criterion_1()));
    let (two, nine) = criteria_2_and_9();
    results.push((2, "transform inversion and Plancherel", two));
    results.push((3, "intertwining", criterion_3()));
    results.push((4, "independence witness", criterion_4()));
    let (five, six) = criteria_5_and_6();
    results.push((5, "difference equation residual", five));
    results.push((6, "spectral threshold", six));
    results.push((7, "stationary-phase decay", criterion_7()));
    results.push((8, "curvature hypothesis", criterion_8()));
    results.push((9, "compact-support ratio probe", nine));
    results.push((10, "determinism", criterion_10()));

    for (id, name, o) in &results {
        println!("[{}] {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.pass).map(|(id, _, _)| *id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
