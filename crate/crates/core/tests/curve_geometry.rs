use std::f64::consts::PI;

use qtrans::counterexample::{curvature_at, fourier_decay_probe, trace_zero_component};

/// `∫_a^b f` by tanh-sinh quadrature; tolerates integrable endpoint singularities.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 256.0;
    let mut sum = 0.0;
    for k in -(6 * 256)..=(6 * 256) {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        // distances to each endpoint without cancellation
        let from_a = half * 2.0 / (1.0 + (-2.0 * u).exp());
        let from_b = half * 2.0 / (1.0 + (2.0 * u).exp());
        if from_a <= 0.0 || from_b <= 0.0 {
            continue;
        }
        let x = if from_a < from_b { a + from_a } else { b - from_b };
        sum += w * f(x);
    }
    sum * half * h
}

/// Arclength of `cos 2πx + cos 2πy = 1` from the explicit branch
/// `y = arccos(1 − cos 2πx)/2π` on one quarter.
fn length_oracle() -> f64 {
    let integrand = |d: f64| {
        let s = (2.0 * PI * d).sin();
        let c = (2.0 * PI * d).cos();
        (1.0 + c * c / (s * (2.0 - s))).sqrt()
    };
    4.0 * tanh_sinh(integrand, 0.0, 0.25)
}

fn branch(x: f64) -> f64 {
    (1.0 - (2.0 * PI * x).cos()).acos() / (2.0 * PI)
}

#[test]
fn length_matches_quadrature_oracle() {
    let oracle = length_oracle();
    let curve = trace_zero_component(4000).unwrap();
    assert!((curve.total_length() - oracle).abs() < 1e-9, "{} vs {oracle}", curve.total_length());
}

#[test]
fn length_is_stable_under_refinement() {
    let a = trace_zero_component(2000).unwrap().total_length();
    let b = trace_zero_component(4000).unwrap().total_length();
    assert!((a - b).abs() < 1e-8 * a);
}

#[test]
fn curvature_matches_explicit_branch() {
    for x in [0.05, 0.1, 0.17, 0.22] {
        let h = 1e-4;
        let (ym, y0, yp) = (branch(x - h), branch(x), branch(x + h));
        let d1 = (yp - ym) / (2.0 * h);
        let d2 = (yp - 2.0 * y0 + ym) / (h * h);
        let oracle = d2.abs() / (1.0 + d1 * d1).powf(1.5);
        let k = curvature_at(x, y0).unwrap();
        assert!((k - oracle).abs() < 1e-5 * oracle, "x={x}: {k} vs {oracle}");
    }
    let diag = curvature_at(1.0 / 6.0, 1.0 / 6.0).unwrap();
    assert!((diag - 2.0 * PI / 6f64.sqrt()).abs() < 1e-12);
}

#[test]
fn nodes_follow_the_explicit_branch() {
    let curve = trace_zero_component(1000).unwrap();
    for z in curve.nodes().iter().filter(|z| z[0] > 0.0 && z[1] > 0.0) {
        assert!((z[1] - branch(z[0])).abs() < 1e-10);
    }
}

#[test]
fn measure_transform_decays_at_the_stationary_phase_rate() {
    let curve = trace_zero_component(4000).unwrap();
    let radii: Vec<f64> = (0..1500).map(|i| 5.0 + 45.0 * i as f64 / 1499.0).collect();
    let fits = fourier_decay_probe(&curve, &[[1.0, 0.0], [0.6, 0.8]], &radii).unwrap();
    for fit in fits {
        assert!(fit.envelope);
        assert!((fit.exponent + 0.5).abs() < 0.05, "{fit:?}");
    }
}
