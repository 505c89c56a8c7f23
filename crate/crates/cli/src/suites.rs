//! One verification suite per command. Each returns a [`Report`]; files are
//! written only when an output directory is configured.

use std::f64::consts::PI;
use std::path::Path;

use qtrans::counterexample::{
    build_from_curve, char_poly_surface, curvature_at, fourier_decay_probe, trace_zero_component, zero_scan,
    LevelCurve,
};
use qtrans::families::{low_rank_operator, random_point, rng_from_seed, separated_points, Bump, GaussianEnvelope};
use qtrans::fock_rep::{rho_adjoint, rho_matrix, FockConfig, FockOperator};
use qtrans::io;
use qtrans::phase_space::{cocycle, symplectic_form, PhasePoint};
use qtrans::qtranslate::{characteristic_poly, eq4_spec, independence_margin, translate};
use qtrans::schatten::{norm_from_singular_values, singular_values, singular_values_of, SpectrumProfile};
use qtrans::transforms::{
    beta_damp, fourier_wigner, fourier_wigner_at, ordinary_fourier, symplectic_fourier, translate_samples,
    weyl_correspondence, weyl_transform, BoundaryPolicy, PhaseFunction, PhaseGrid, WEYL_PLANCHEREL,
};
use qtrans::{Error, C64};
use rand::Rng;

use crate::config::{Command, OperatorChoice, RunConfig};
use crate::report::{Json, Limit, Report};

type Result<T> = std::result::Result<T, Error>;

/// Widths `a` of the round-trip test functions `e^{−πa|w|²}`.
pub const ROUNDTRIP_WIDTHS: [f64; 2] = [0.5, 4.0];
/// Round-trip errors at or below this are at rounding level; halving is not
/// required there.
pub const ROUNDTRIP_FLOOR: f64 = 1e-12;

/// Grid carrying bumps supported in `[−1, 1]²`.
const BUMP_GRID_SIDE: f64 = 4.0;
const BUMP_GRID_POINTS: usize = 128;

/// Radii and rays of the stationary-phase probe.
const PROBE_RADII: (f64, f64, usize) = (5.0, 50.0, 2000);
const PROBE_ANGLES: [f64; 4] = [0.3, 1.1, 1.9, 2.7];

pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new(cfg.command.name());
    report.param("n", cfg.n).param("N", cfg.levels).param("seed", cfg.seed);
    match cfg.command {
        Command::ReprCheck => repr_check(cfg, &mut report)?,
        Command::TransformCheck => transform_check(cfg, &mut report)?,
        Command::IntertwineCheck => intertwine_check(cfg, &mut report)?,
        Command::Independence => independence(cfg, &mut report)?,
        Command::Counterexample => counterexample(cfg, &mut report)?,
        Command::DecayFit => decay_fit(cfg, &mut report)?,
        Command::ZeroScan => scan(cfg, &mut report)?,
    }
    Ok(report)
}

fn out_file(cfg: &RunConfig, name: &str) -> Option<std::path::PathBuf> {
    cfg.out.as_ref().map(|d| d.join(name))
}

/// Indices whose every per-mode level is below `levels / 2`.
fn leading_indices(fc: &FockConfig) -> Vec<usize> {
    let half = fc.levels() / 2;
    (0..fc.dim())
        .filter(|&i| {
            let mut rest = i;
            (0..fc.n()).all(|_| {
                let ok = rest % fc.levels() < half;
                rest /= fc.levels();
                ok
            })
        })
        .collect()
}

/// Largest `|z|` drawn by `repr-check`: 1 from `N = 64` up, shrinking
/// linearly below so the leading block stays clear of the truncation edge.
pub fn displacement_radius(levels: usize) -> f64 {
    (levels as f64 / 64.0).min(1.0)
}

fn repr_check(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("eq1_representation").anchor("sec1_group_law");
    let fc = FockConfig::new(cfg.n, cfg.levels)?;
    let mut rng = rng_from_seed(cfg.seed);
    let lead = leading_indices(&fc);
    let radius = displacement_radius(cfg.levels);

    let origin = rho_matrix(&PhasePoint::origin(cfg.n), &fc)?;
    let identity_defect = origin.sub(&FockOperator::identity(fc))?.max_abs_entry();

    let (mut projective, mut unitarity, mut adjoint) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let z1 = random_point(cfg.n, radius, &mut rng);
        let z2 = random_point(cfg.n, radius, &mut rng);
        let a = rho_matrix(&z1, &fc)?;
        let b = rho_matrix(&z2, &fc)?;
        let ab = rho_matrix(&z1.add(&z2)?, &fc)?;
        let phase = C64::from_polar(1.0, PI * symplectic_form(&z1, &z2)?);
        let prod = a.matrix() * b.matrix();
        for &i in &lead {
            for &j in &lead {
                projective = projective.max((prod[(i, j)] - phase * ab.matrix()[(i, j)]).norm());
            }
        }
        let rows = nalgebra::DMatrix::from_fn(lead.len(), fc.dim(), |i, j| a.matrix()[(lead[i], j)]);
        let s = singular_values_of(&rows)?;
        unitarity = s.iter().fold(unitarity, |m, v| m.max((v - 1.0).abs()));
        adjoint = adjoint.max(rho_adjoint(&z1, &fc)?.sub(&rho_matrix(&z1.neg(), &fc)?)?.max_abs_entry());
    }
    r.metric("leading_block", lead.len()).metric("displacement_radius", radius);
    r.check("identity_defect", identity_defect, Limit::Below(1e-12));
    r.check("projective_defect", projective, Limit::Below(1e-6));
    r.check("unitarity_defect", unitarity, Limit::Below(1e-4));
    r.check("adjoint_defect", adjoint, Limit::Below(1e-10));
    Ok(())
}

fn gaussian(grid: PhaseGrid, a: f64) -> Result<PhaseFunction> {
    PhaseFunction::from_fn(grid, |w| C64::new((-PI * a * w.iter().map(|c| c * c).sum::<f64>()).exp(), 0.0))
}

/// Max-norm error of `α(W(f)) − f` over all grid nodes, worst over the
/// round-trip widths.
pub fn roundtrip_error(side: f64, points: usize, levels: usize, policy: BoundaryPolicy) -> Result<f64> {
    let grid = PhaseGrid::new(1, side, points)?;
    let fc = FockConfig::new(1, levels)?;
    let mut worst = 0.0f64;
    for a in ROUNDTRIP_WIDTHS {
        let f = gaussian(grid, a)?;
        let back = fourier_wigner(&weyl_transform(&f, &fc, policy)?, &grid)?;
        worst = worst.max(back.max_abs_diff(&f)?);
    }
    Ok(worst)
}

fn policy(cfg: &RunConfig) -> BoundaryPolicy {
    if cfg.strict {
        BoundaryPolicy::Strict
    } else {
        BoundaryPolicy::Warn
    }
}

fn spread(values: &[f64]) -> (f64, f64, f64) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (min, max, mean)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn bump_grid(n: usize) -> Result<PhaseGrid> {
    PhaseGrid::new(n, BUMP_GRID_SIDE, BUMP_GRID_POINTS)
}

/// `‖W(T)‖_{S^p} / ‖T̂‖_p` for a bump `T`.
pub fn bump_ratio(bump: &Bump, fc: &FockConfig, p: f64) -> Result<f64> {
    let t = bump.sample(bump_grid(fc.n())?)?;
    let w = weyl_transform(&t, fc, BoundaryPolicy::Strict)?;
    let num = norm_from_singular_values(&singular_values(&w)?, p)?;
    Ok(num / ordinary_fourier(&t).lp_norm(p))
}

fn transform_check(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("sec2_inversion").anchor("lemma31_plancherel").anchor("sec3_beta_bounded").anchor("thm21_ratio");
    r.param("L", cfg.side).param("M", cfg.grid_points);
    let fc = FockConfig::new(1, cfg.levels)?;
    let grid = PhaseGrid::new(1, cfg.side, cfg.grid_points)?;
    let mut rng = rng_from_seed(cfg.seed);

    let coarse = roundtrip_error(cfg.side, cfg.grid_points, cfg.levels, policy(cfg))?;
    let fine = roundtrip_error(cfg.side, 2 * cfg.grid_points, 2 * cfg.levels, policy(cfg))?;
    r.metric("roundtrip_widths", ROUNDTRIP_WIDTHS.to_vec());
    r.check("roundtrip_error", coarse, Limit::Below(1e-4));
    r.metric("roundtrip_error_refined", fine);
    r.check_flag("roundtrip_halving", fine <= 0.5 * coarse || fine <= ROUNDTRIP_FLOOR);

    let ratios: Vec<f64> = (0..10)
        .map(|_| {
            let f = GaussianEnvelope::random(1, &mut rng).sample(grid)?;
            Ok(weyl_transform(&f, &fc, policy(cfg))?.frobenius_norm() / f.l2_norm())
        })
        .collect::<Result<_>>()?;
    let (min, max, mean) = spread(&ratios);
    r.metric("plancherel_ratios", ratios.clone());
    r.check("plancherel_spread", (max - min) / mean, Limit::Below(1e-3));
    r.check("plancherel_constant_error", (mean - WEYL_PLANCHEREL).abs(), Limit::Below(1e-3));

    let probe = GaussianEnvelope::random(1, &mut rng).sample(grid)?;
    let twice = symplectic_fourier(&symplectic_fourier(&probe));
    r.check("symplectic_involution_error", twice.max_abs_diff(&probe)?, Limit::Below(1e-10));

    // β̌ on unit-S^p operators: the ratio to the family median stays bounded
    let mut per_p: Vec<Vec<f64>> = vec![Vec::new(); 3];
    let ps = [2.0, 4.0, f64::INFINITY];
    for _ in 0..20 {
        let rank = rng.gen_range(1..=5);
        let x = low_rank_operator(&fc, rank, &mut rng)?;
        let s = singular_values(&x)?;
        let damped = symplectic_fourier(&beta_damp(&x, &grid)?);
        for (k, &p) in ps.iter().enumerate() {
            per_p[k].push(damped.lp_norm(p) / norm_from_singular_values(&s, p)?);
        }
    }
    for (k, label) in ["2", "4", "inf"].iter().enumerate() {
        let vals = &per_p[k];
        let max = vals.iter().copied().fold(0.0, f64::max);
        r.metric(&format!("beta_check_max_p{label}"), max);
        r.check(&format!("beta_check_max_over_median_p{label}"), max / median(vals), Limit::Below(10.0));
    }

    let bump_ratios: Vec<f64> =
        (0..20).map(|_| bump_ratio(&Bump::random(1, &mut rng), &fc, 4.0)).collect::<Result<_>>()?;
    let (min, max, _) = spread(&bump_ratios);
    r.metric("thm21_ratios_p4", bump_ratios);
    r.check("thm21_spread_p4", max / min, Limit::Below(50.0));
    Ok(())
}

/// Lattice points of spacing 1/4 in the disc `|w| ≤ 2`.
fn probe_points() -> Vec<PhasePoint> {
    let mut pts = Vec::new();
    for i in -8..=8 {
        for j in -8..=8 {
            let (x, y) = (i as f64 / 4.0, j as f64 / 4.0);
            if x.hypot(y) <= 2.0 {
                pts.push(PhasePoint::planar(x, y));
            }
        }
    }
    pts
}

fn intertwine_check(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("eq2_intertwining").anchor("sec2_weyl_covariance");
    let fc = FockConfig::new(1, cfg.levels)?;
    let mut rng = rng_from_seed(cfg.seed);
    let pts = probe_points();

    let mut worst = 0.0f64;
    for _ in 0..10 {
        let rank = rng.gen_range(1..=5);
        let a = low_rank_operator(&fc, rank, &mut rng)?;
        let alpha = fourier_wigner_at(&a, &pts)?;
        for _ in 0..10 {
            let z = random_point(1, 0.5, &mut rng);
            let moved = fourier_wigner_at(&translate(&z, &a)?, &pts)?;
            for ((w, lhs), rhs) in pts.iter().zip(&moved).zip(&alpha) {
                worst = worst.max((lhs - cocycle(&z, w)?.value() * rhs).norm());
            }
        }
    }
    r.metric("pairs", 100usize).metric("probe_points", pts.len());
    r.check("intertwining_deviation", worst, Limit::Below(1e-5));

    let grid = PhaseGrid::new(1, cfg.side, cfg.grid_points)?;
    let f = GaussianEnvelope { amplitude: C64::new(1.0, 0.0), width: 1.0, centre: vec![0.0, 0.0], frequency: vec![0.0, 0.0] }
        .sample(grid)?;
    let base = weyl_correspondence(&f, &fc, policy(cfg))?;
    let half = cfg.levels / 2;
    let mut covariance = 0.0f64;
    for _ in 0..3 {
        let z = random_point(1, 0.5, &mut rng);
        let lhs = weyl_correspondence(&translate_samples(&f, &z)?, &fc, policy(cfg))?;
        let rhs = translate(&z, &base)?;
        let diff = lhs.sub(&rhs)?.leading_block(half);
        covariance = covariance.max(diff.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    r.check("weyl_covariance_deviation", covariance, Limit::Below(1e-4));
    Ok(())
}

fn normalized(x: FockOperator) -> FockOperator {
    let norm = x.frobenius_norm();
    x.scale(C64::new(1.0 / norm, 0.0))
}

fn operator_for(choice: &OperatorChoice, fc: &FockConfig, rng: &mut rand_chacha::ChaCha8Rng) -> Result<FockOperator> {
    Ok(match choice {
        OperatorChoice::GroundState => FockOperator::ground_state(*fc),
        OperatorChoice::Rank3 => low_rank_operator(fc, 3, rng)?,
        OperatorChoice::Bump => {
            let t = Bump::random(fc.n(), rng).sample(bump_grid(fc.n())?)?;
            normalized(weyl_transform(&t, fc, BoundaryPolicy::Strict)?)
        }
        OperatorChoice::File(path) => {
            let op = io::read_operator(path)?;
            if op.config() != *fc {
                return Err(Error::InvalidConfig(format!(
                    "{} holds an operator for n = {}, N = {}",
                    path.display(),
                    op.config().n(),
                    op.config().levels()
                )));
            }
            op
        }
    })
}

fn independence(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("thm11_independence");
    let fc = FockConfig::new(cfg.n, cfg.levels)?;
    let mut rng = rng_from_seed(cfg.seed);

    if let Some(path) = &cfg.points {
        let pts = io::read_points(path, cfg.n)?;
        let a = operator_for(&cfg.operator, &fc, &mut rng)?;
        r.param("operator", cfg.operator.to_string()).param("points", pts.len());
        r.check("margin", independence_margin(&pts, &a)?, Limit::Above(1e-6));
        return Ok(());
    }

    let p0 = FockOperator::ground_state(fc);
    let mut e1 = vec![0.0; 2 * cfg.n];
    e1[0] = 1.0;
    let mut worst = 0.0f64;
    for d in [0.25, 0.5, 1.0, 2.0] {
        let e = PhasePoint::from_coords(&e1)?.scale(d);
        let margin = independence_margin(&[PhasePoint::origin(cfg.n), e], &p0)?;
        r.metric(&format!("p0_margin_d{d}"), margin);
        worst = worst.max((margin - (1.0 - (-PI * d * d).exp())).abs());
    }
    r.check("p0_two_point_error", worst, Limit::Below(1e-5));

    let families = [OperatorChoice::GroundState, OperatorChoice::Rank3, OperatorChoice::Bump];
    for family in &families {
        let mut min_margin = f64::INFINITY;
        for _ in 0..5 {
            let a = operator_for(family, &fc, &mut rng)?;
            let pts = separated_points(cfg.n, 5, 0.3, 1.0, &mut rng)?;
            min_margin = min_margin.min(independence_margin(&pts, &a)?);
        }
        r.check(&format!("min_margin_{family}"), min_margin, Limit::Above(1e-6));
    }
    Ok(())
}

fn write_spectrum(cfg: &RunConfig, profile: &SpectrumProfile) -> Result<()> {
    if let (Some(csv), Some(json)) = (out_file(cfg, "spectrum.csv"), out_file(cfg, "spectrum_fit.json")) {
        io::write_spectrum(&csv, &json, profile)?;
    }
    Ok(())
}

fn schatten_metrics(r: &mut Report, s: &[f64], p_list: &[f64]) -> Result<()> {
    let fields = p_list
        .iter()
        .map(|&p| Ok((format!("{p}"), Json::Num(norm_from_singular_values(s, p)?))))
        .collect::<Result<Vec<_>>>()?;
    r.metric("schatten_norms", Json::Obj(fields));
    Ok(())
}

fn curve_checks(curve: &LevelCurve, r: &mut Report) -> Result<()> {
    let spec = eq4_spec(1)?;
    let mut on_set = 0.0f64;
    for z in curve.nodes() {
        on_set = on_set.max(characteristic_poly(&spec, &PhasePoint::planar(z[0], z[1]))?.norm());
    }
    let kappa_min = curve.curvatures().iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
    r.metric("curve_length", curve.total_length());
    r.check("zero_set_residual", on_set, Limit::Below(1e-9));
    r.check("curvature_seed_error", (curvature_at(0.25, 0.0)? - 2.0 * PI).abs(), Limit::Below(1e-6));
    r.check("curvature_min", kappa_min, Limit::Above(1.0));
    Ok(())
}

fn counterexample(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("eq4_residual").anchor("eq3_fourier_side").anchor("thm22_curvature");
    r.param("nodes", cfg.curve_nodes);
    let curve = trace_zero_component(cfg.curve_nodes)?;
    curve_checks(&curve, r)?;

    let (a, rep) = build_from_curve(&FockConfig::new(1, cfg.levels)?, &curve)?;
    let (_, coarse) = build_from_curve(&FockConfig::new(1, cfg.levels / 2)?, &curve)?;
    r.check("norm_s2", rep.norm_s2, Limit::Above(0.1));
    r.check("residual_rel", rep.residual_rel, Limit::Below(5e-2));
    r.check("residual_rel_half_N", coarse.residual_rel, Limit::Below(5e-2));
    r.metric("residual_rel_full", rep.residual_rel_full);
    r.metric("residual_rel_full_half_N", coarse.residual_rel_full);
    r.check_flag("truncation_residual_decreases", rep.residual_rel_full < coarse.residual_rel_full);
    r.check("selfadjoint_defect", rep.selfadjoint_defect, Limit::Below(1e-10));
    r.check("fourier_side_residual", rep.fourier_side_residual, Limit::Below(1e-8));
    r.metric("decay_exponent", rep.decay_exponent);
    r.metric("decay_stderr", rep.decay_stderr);
    r.metric("decay_range", Json::Arr(vec![rep.decay_range.0.into(), rep.decay_range.1.into()]));
    schatten_metrics(r, &rep.spectrum, &cfg.p_list)?;

    if let Some(path) = out_file(cfg, "curve.csv") {
        io::write_curve(&path, &curve)?;
    }
    if let Some(path) = out_file(cfg, "measure.csv") {
        io::write_measure(&path, &curve.to_measure()?)?;
    }
    let profile = SpectrumProfile::from_values(rep.spectrum.clone(), rep.decay_range)?;
    write_spectrum(cfg, &profile)?;
    if cfg.dump {
        if let Some(path) = out_file(cfg, "counterexample.op") {
            io::write_operator(&path, &a)?;
        }
    }
    Ok(())
}

fn probe_radii() -> Vec<f64> {
    let (lo, hi, count) = PROBE_RADII;
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn decay_fit(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    if let OperatorChoice::File(path) = &cfg.operator {
        r.anchor("schatten_decay");
        r.param("operator", cfg.operator.to_string());
        let op = io::read_operator(path)?;
        let profile = SpectrumProfile::of_operator(&op)?;
        r.metric("decay_exponent", profile.fit_exponent);
        r.metric("decay_stderr", profile.fit_stderr);
        schatten_metrics(r, &profile.values, &cfg.p_list)?;
        write_spectrum(cfg, &profile)?;
        return Ok(());
    }

    r.anchor("thm22_decay").anchor("sec2_stationary_phase");
    r.param("nodes", cfg.curve_nodes);
    let curve = trace_zero_component(cfg.curve_nodes)?;
    let (_, rep) = build_from_curve(&FockConfig::new(1, cfg.levels)?, &curve)?;
    r.metric("decay_range", Json::Arr(vec![rep.decay_range.0.into(), rep.decay_range.1.into()]));
    r.check("decay_exponent", rep.decay_exponent, Limit::Within(-0.35, -0.15));
    r.metric("decay_stderr", rep.decay_stderr);
    schatten_metrics(r, &rep.spectrum, &cfg.p_list)?;
    let profile = SpectrumProfile::from_values(rep.spectrum, rep.decay_range)?;
    write_spectrum(cfg, &profile)?;

    let mut rays = vec![[1.0, 0.0]];
    rays.extend(PROBE_ANGLES.iter().map(|t| [t.cos(), t.sin()]));
    let fits = fourier_decay_probe(&curve, &rays, &probe_radii())?;
    for (i, fit) in fits.iter().enumerate() {
        let name = if i == 0 { "ray_axis".to_string() } else { format!("ray_{:.1}", PROBE_ANGLES[i - 1]) };
        r.check(&format!("{name}_exponent"), fit.exponent, Limit::Within(-0.65, -0.35));
        r.metric(&format!("{name}_stderr"), fit.stderr);
    }
    Ok(())
}

fn scan(cfg: &RunConfig, r: &mut Report) -> Result<()> {
    r.anchor("sec4_zero_set");
    r.param("M", cfg.grid_points);
    let s = zero_scan(cfg.grid_points)?;
    r.metric("negative_fraction", s.negative_fraction);
    r.metric("components", s.components);
    r.check("components_found", s.components as f64, Limit::Above(0.0));
    let seed_value = char_poly_surface(&[0.25, 0.0]);
    r.check("seed_on_zero_set", seed_value.abs(), Limit::Below(1e-12));
    Ok(())
}

/// Runs the suite and writes `<command>.json` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
    }
    let report = run_suite(cfg)?;
    if let Some(path) = out_file(cfg, &format!("{}.json", cfg.command.name())) {
        write_report(&path, &report)?;
    }
    Ok(report)
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    std::fs::write(path, report.render())?;
    Ok(())
}
