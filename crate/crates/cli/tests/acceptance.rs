//! Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails. Runs without the libtest harness so the lines are
//! visible in `cargo test` output.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use levysup::fluctuation::{
    fristedt_kappa, inverse_subordinator_density, reconstruction_report, semigroup_reconstruct, wiener_hopf_residual,
};
use levysup::jointlaw::{arcsine_cdf, sn_gt_sup_density};
use levysup::montecarlo::independence::independence_statistic;
use levysup::montecarlo::rng::path_rng;
use levysup::montecarlo::sampler::{exp1, normal, open01};
use levysup::{JointLaw, JumpSign, ProcessModel, QuadratureConfig, SimulationPlan, SnPath, SubordinatorModel, TripleSample};
use levysup_cli::driver::{simulate, simulate_levels};
use levysup_cli::validate::{arcsine_ks, atom_check, factor_independence, joint_chi2, sup_ks};

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn half_normal(x: f64) -> f64 {
    (2.0 / PI).sqrt() * (-0.5 * x * x).exp()
}

fn gaussian(mean: f64, var: f64, z: f64) -> f64 {
    (-(z - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// κ(α, β) of Brownian motion with drift `c`, normalized to κ(1, 0) = 1.
fn brownian_kappa(c: f64, alpha: f64, beta: f64) -> f64 {
    let r = |a: f64| (c * c + 2.0 * a).sqrt();
    (beta + r(alpha) - c) / (r(1.0) - c)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Cauchy samples on nested grids of 10³, 10⁴ and 10⁵ steps, shared by several criteria.
struct CauchyRun {
    levels: Vec<Vec<TripleSample>>,
    elapsed: Duration,
}

fn cauchy_run() -> Result<CauchyRun, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let plan = SimulationPlan::new(ProcessModel::cauchy(), 1.0, 100_000, 100_000, 31)?;
    let levels = simulate_levels(&plan, &[1_000, 10_000, 100_000])?;
    Ok(CauchyRun { levels, elapsed: start.elapsed() })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let law = JointLaw::new(ProcessModel::brownian(0.0)?, 1.0, quad())?;
    let mut worst: f64 = 0.0;
    for x in linspace(0.01, 4.0, 400) {
        let f = law.sup_marginal(x)?;
        worst = worst.max((f - half_normal(x)).abs() / half_normal(x));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((worst <= 1e-6 && secs < 10.0, format!("max rel err {worst:.2e} (tol 1e-6), {secs:.2} s (limit 10 s)")))
}

fn criterion_2() -> Outcome {
    let cases: [(&str, ProcessModel, f64); 4] = [
        ("bm c=0", ProcessModel::brownian(0.0)?, 1e-4),
        ("bm c=0.5", ProcessModel::brownian(0.5)?, 1e-4),
        ("cauchy", ProcessModel::cauchy(), 1e-3),
        ("sn 1.5", ProcessModel::spectrally_negative(1.5)?, 1e-3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, model, tol) in cases {
        let err = JointLaw::new(model, 1.0, quad())?.total_mass()? - 1.0;
        pass &= err.abs() <= tol;
        parts.push(format!("{name}: {err:+.1e}"));
    }
    Ok((pass, format!("mass − 1: {}", parts.join(", "))))
}

fn criterion_3(cauchy: &CauchyRun) -> Outcome {
    let bm = ProcessModel::brownian(0.5)?;
    let plan = SimulationPlan::new(bm.clone(), 1.0, 1_000_000, 64, 17)?;
    let samples = simulate(&plan)?;
    let bm_ks = sup_ks(&JointLaw::new(bm, 1.0, quad())?, &[samples], None)?.extrapolated;
    let study = sup_ks(&JointLaw::new(ProcessModel::cauchy(), 1.0, quad())?, &cauchy.levels, Some(0.99))?;
    let pass = bm_ks <= 0.005 && study.extrapolated <= 0.01;
    Ok((
        pass,
        format!(
            "bm KS {bm_ks:.4} (tol 0.005, N=1e6); cauchy KS per level {:?} -> {:.4} (tol 0.01, N=1e5, window [0, {:.2}], simulation {:.0} s)",
            study.distances.iter().map(|d| (d * 1e4).round() / 1e4).collect::<Vec<_>>(),
            study.extrapolated,
            study.window.1,
            cauchy.elapsed.as_secs_f64()
        ),
    ))
}

fn criterion_4(cauchy: &CauchyRun) -> Outcome {
    let mut worst: f64 = 0.0;
    for model in [ProcessModel::cauchy(), ProcessModel::brownian(0.0)?, ProcessModel::stable(1.5, 0.5)?] {
        let law = JointLaw::new(model, 2.0, quad())?;
        for s in linspace(0.02, 1.98, 50) {
            let want = 1.0 / (PI * (s * (2.0 - s)).sqrt());
            worst = worst.max((law.gt_density(s)? / want - 1.0).abs());
        }
    }
    let finest = cauchy.levels.last().unwrap();
    let ks = arcsine_ks(finest, 0.5, 1.0);
    // Independent check of the reference CDF used by the KS distance.
    let cdf_err = linspace(0.0, 1.0, 11).iter().map(|&s| (arcsine_cdf(0.5, 1.0, s) - 2.0 / PI * s.sqrt().asin()).abs()).fold(0.0, f64::max);
    Ok((
        worst <= 1e-8 && ks <= 0.015 && cdf_err <= 1e-12,
        format!("density rel err {worst:.1e} (tol 1e-8); cauchy g KS {ks:.4} (tol 0.015)"),
    ))
}

fn criterion_5() -> Outcome {
    let mut wh: f64 = 0.0;
    let mut vs_closed: f64 = 0.0;
    for c in [-1.0, 0.0, 1.0] {
        let m = ProcessModel::brownian(c)?;
        for a in [0.5, 1.0, 2.0, 5.0] {
            wh = wh.max(wiener_hopf_residual(&m, a)?.abs());
        }
        wh = wh.max((fristedt_kappa(&m, 1.0, 0.0)? - 1.0).abs());
    }
    for c in [-1.0, 0.5] {
        let m = ProcessModel::brownian(c)?;
        for a in [0.5, 1.0, 3.0] {
            for b in [0.0, 0.5, 2.0] {
                vs_closed = vs_closed.max((fristedt_kappa(&m, a, b)? / brownian_kappa(c, a, b) - 1.0).abs());
            }
        }
    }
    Ok((wh <= 1e-4 && vs_closed <= 1e-4, format!("WH/normalization max residual {wh:.1e}; Fristedt vs closed form max rel err {vs_closed:.1e} (tol 1e-4)")))
}

fn criterion_6() -> Outcome {
    let model = ProcessModel::brownian(0.5)?;
    let report = reconstruction_report(&model, 1.0, 5.0, 201)?;
    let grid = linspace(-4.5, 5.5, 201);
    let h = grid[1] - grid[0];
    let rebuilt = semigroup_reconstruct(&model, 1.0, &grid)?;
    let l1: f64 = grid
        .iter()
        .zip(&rebuilt)
        .enumerate()
        .map(|(k, (&z, &r))| if k == 0 || k == 200 { 0.5 } else { 1.0 } * h * (r - gaussian(0.5, 1.0, z)).abs())
        .sum();
    Ok((report.residual <= 1e-3 && l1 <= 1e-3, format!("L1 {:.1e} (report), {l1:.1e} (direct), tol 1e-3", report.residual)))
}

fn criterion_7() -> Outcome {
    let sub = SubordinatorModel::stable(0.5, (2.0 / PI).sqrt(), 0.0, 0.0)?;
    let mut worst: f64 = 0.0;
    for x in linspace(0.1, 3.0, 300) {
        worst = worst.max((inverse_subordinator_density(&sub, 1.0, x)? - half_normal(x)).abs());
    }
    Ok((worst <= 1e-6, format!("sup error {worst:.1e} (tol 1e-6)")))
}

fn criterion_8(cauchy: &CauchyRun) -> Outcome {
    let sample = &cauchy.levels.last().unwrap()[..10_000];
    let report = factor_independence(sample, 1.0, 1.0, 199, 5)?;
    let seeds = 400;
    let mut rejected = 0;
    for seed in 0..seeds {
        let triples: Vec<[f64; 3]> = (0..1000)
            .map(|i| {
                let mut rng = path_rng(1000 + seed, i);
                [open01(&mut rng), normal(&mut rng), exp1(&mut rng)]
            })
            .collect();
        if independence_statistic(&triples, 199, seed)?.p_value <= 0.05 {
            rejected += 1;
        }
    }
    let rate = rejected as f64 / seeds as f64;
    Ok((
        report.p_value >= 0.01 && (0.03..=0.07).contains(&rate),
        format!("cauchy factors p {:.3} (min 0.01); null rejection rate {rate:.3} over {seeds} seeds (range [0.03, 0.07])", report.p_value),
    ))
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for s in [0.2, 0.5, 0.8] {
        for x in [0.3, 1.0, 2.0] {
            let a = sn_gt_sup_density(1.5, 1.0, s, x, SnPath::Semigroup)?;
            let b = sn_gt_sup_density(1.5, 1.0, s, x, SnPath::Series)?;
            worst = worst.max((a / b - 1.0).abs());
        }
    }
    let model = ProcessModel::spectrally_negative(1.5)?;
    let plan = SimulationPlan::new(model.clone(), 1.0, 100_000, 10_000, 23)?;
    let levels = simulate_levels(&plan, &[1_000, 10_000])?;
    let law = JointLaw::new(model, 1.0, quad())?;
    let chi = joint_chi2(&law, &levels, &linspace(0.0, 1.0, 6), &[0.0, 0.3, 0.6, 1.0, 1.5, f64::INFINITY])?;
    Ok((
        worst <= 1e-3 && chi.p_value >= 0.01,
        format!("paths max rel diff {worst:.1e} (tol 1e-3); chi-square {:.1} on {} dof, p {:.3} (min 0.01)", chi.statistic, chi.dof, chi.p_value),
    ))
}

fn criterion_10() -> Outcome {
    let model = ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0)?;
    let plan = SimulationPlan::new(model, 1.0, 1_000_000, 1, 41)?;
    let check = atom_check(&plan)?;
    let z = check.estimate.z_score();
    let exact = check.exact.unwrap_or(f64::NAN);
    Ok((
        z.abs() <= 3.0 && check.total_z.abs() <= 3.0,
        format!(
            "atom {:.5} vs first passage {:.5} (exact {exact:.5}): z {z:+.2}; continuous + atom − 1: z {:+.2} (|z| <= 3)",
            check.estimate.sup_at_zero.value, check.estimate.no_passage.value, check.total_z
        ),
    ))
}

fn main() {
    let mut failed = Vec::new();
    let mut run = |id: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {id:>2} {title}: {detail} [{secs:.1} s]", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(id);
        }
    };
    run(1, "half-normal supremum marginal", &mut criterion_1);
    run(2, "joint law total mass", &mut criterion_2);
    run(5, "Wiener-Hopf and Fristedt closed forms", &mut criterion_5);
    run(6, "semigroup reconstruction", &mut criterion_6);
    run(7, "inverse stable subordinator density", &mut criterion_7);
    run(10, "compound Poisson atom at zero", &mut criterion_10);
    run(9, "spectrally negative (g, sup) density", &mut criterion_9);
    match cauchy_run() {
        Ok(c) => {
            run(3, "supremum marginal against Monte Carlo", &mut || criterion_3(&c));
            run(4, "arcsine law of the time of the supremum", &mut || criterion_4(&c));
            run(8, "independence of the stable triple factors", &mut || criterion_8(&c));
        }
        Err(e) => {
            for (id, title) in [(3, "supremum marginal against Monte Carlo"), (4, "arcsine law"), (8, "independence of the stable triple factors")] {
                run(id, title, &mut || Err(format!("cauchy simulation failed: {e}").into()));
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
