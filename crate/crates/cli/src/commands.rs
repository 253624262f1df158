//! Subcommand bodies. Each returns an artifact and whether its checks passed.

use levysup::fluctuation::{
    drifted_identity_report, fristedt_closed_form_report, inverse_subordinator_density, ladder_laplace_report,
    normalization_report, reconstruction_report, subordinator_laplace_report, wiener_hopf_report,
};
use levysup::jointlaw::{arcsine_density, sn_gt_sup_density};
use levysup::{
    EntranceLaw, Family, IdentityReport, JointLaw, ModelParams, ProcessModel, QuadratureConfig, Regularity, Side,
    SimulationPlan, SnPath,
};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::driver;
use crate::grid::Grid;
use crate::output::{num, Artifact, Cell, Provenance};
use crate::validate;
use crate::CliError;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Context {
    pub quad: QuadratureConfig,
    pub seed: u64,
    pub workers: usize,
}

pub struct Outcome {
    pub artifact: Artifact,
    pub pass: bool,
}

impl Outcome {
    fn ok(artifact: Artifact) -> Self {
        Self { artifact, pass: true }
    }
}

pub fn execute(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        Command::Density(a) => density(a, ctx),
        Command::Marginal(a) => marginal(a, ctx),
        Command::Arcsine(a) => arcsine(a, ctx),
        Command::Identity(a) => identity(a, ctx),
        Command::Validate(a) => validate(a, ctx),
        Command::Simulate(a) => simulate(a, ctx),
    }
}

fn need_grid(g: Option<Grid>, flag: &str) -> Result<Grid, CliError> {
    g.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this kind")))
}

fn horizon(t: f64) -> Result<f64, CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(CliError::Usage(format!("--t must be positive and finite, got {t}")))
    }
}

fn provenance(command: &str, model: Option<&ProcessModel>, ctx: &Context) -> Provenance {
    Provenance::new(command, model.map(ProcessModel::to_text), ctx.quad)
}

fn density(a: &DensityArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let t = horizon(a.t)?;
    if a.kind == DensityKind::InverseSubordinator {
        let sub = a.subordinator.build()?;
        let grid = need_grid(a.grid, "grid")?;
        let p = Provenance::new("density", Some(sub.to_text()), ctx.quad).param("kind", "inverse-subordinator").param("t", t);
        let mut art = Artifact::new(p, &["x", "density"]);
        for x in grid.points() {
            let v = if x > 0.0 { inverse_subordinator_density(&sub, t, x)? } else { 0.0 };
            art.push(vec![x.into(), v.into()]);
        }
        return Ok(Outcome::ok(art));
    }
    let model = a.model.build()?;
    let p = provenance("density", Some(&model), ctx).param("t", t);
    let art = match a.kind {
        DensityKind::Entrance => {
            let side = match a.side {
                SideArg::Sup => Side::Supremum,
                SideArg::Inf => Side::Infimum,
            };
            let law = EntranceLaw::new(model.clone(), side, ctx.quad)?;
            let grid = need_grid(a.grid, "grid")?;
            let p = p.param("kind", "entrance").param("side", format!("{side:?}").to_lowercase());
            let mut art = Artifact::new(p, &["x", "density"]).summary("lifetime_tail", num(law.lifetime_tail(t)?));
            for x in grid.points() {
                art.push(vec![x.into(), law.density(t, x)?.into()]);
            }
            art
        }
        DensityKind::Joint | DensityKind::Terminal => {
            let law = JointLaw::new(model.clone(), t, ctx.quad)?;
            let terminal = a.kind == DensityKind::Terminal;
            let (third, flag) = if terminal { (a.z_grid, "z-grid") } else { (a.y_grid, "y-grid") };
            let (sg, xg, wg) = (need_grid(a.s_grid, "s-grid")?, need_grid(a.x_grid, "x-grid")?, need_grid(third, flag)?);
            let kind = if terminal { "terminal" } else { "joint" };
            let mut art = Artifact::new(p.param("kind", kind), &["s", "x", if terminal { "z" } else { "y" }, "density"]);
            let atoms = law.atoms()?;
            art = art.summary("atom_at_start", num(atoms.start.map_or(0.0, |a| a.mass)));
            art = art.summary("atom_at_end", num(atoms.end.map_or(0.0, |a| a.mass)));
            for s in sg.points() {
                for x in xg.points() {
                    for w in wg.points() {
                        let v = if terminal { law.density_terminal(s, x, w)? } else { law.density(s, x, w)? };
                        art.push(vec![s.into(), x.into(), w.into(), v.into()]);
                    }
                }
            }
            art
        }
        DensityKind::TimeLevel => {
            let (sg, xg) = (need_grid(a.s_grid, "s-grid")?, need_grid(a.x_grid, "x-grid")?);
            let sn_alpha = match model.params() {
                ModelParams::SpectrallyNegative { alpha } => Some(alpha),
                _ => None,
            };
            let path = match (a.path, sn_alpha) {
                (Some(SnPathArg::Series), None) => {
                    return Err(CliError::Usage("--path series needs a spectrally negative model".into()))
                }
                (Some(SnPathArg::Series), Some(_)) => SnPath::Series,
                _ => SnPath::Semigroup,
            };
            let law = JointLaw::new(model.clone(), t, ctx.quad)?;
            let p = p.param("kind", "time-level").param("path", <&str>::from(path));
            let mut art = Artifact::new(p, &["s", "x", "density"]);
            for s in sg.points() {
                for x in xg.points() {
                    let v = match sn_alpha {
                        Some(alpha) => sn_gt_sup_density(alpha, t, s, x, path)?,
                        None => time_level_density(&law, s, x)?,
                    };
                    art.push(vec![s.into(), x.into(), v.into()]);
                }
            }
            art
        }
        DensityKind::InverseSubordinator => unreachable!("handled above"),
    };
    Ok(Outcome::ok(art))
}

/// `n(t−s<ζ)·q*_s(x)`, the density of `(g_t, X̄_t)`.
fn time_level_density(law: &JointLaw, s: f64, x: f64) -> Result<f64, CliError> {
    let t = law.horizon();
    if !(s > 0.0 && s <= t && x >= 0.0) {
        return Err(CliError::Usage(format!("time must lie in (0, {t}] and level must be nonnegative, got ({s}, {x})")));
    }
    if s == t {
        return Ok(f64::INFINITY);
    }
    Ok(law.supremum_law().lifetime_tail(t - s)? * law.infimum_law().density(s, x)?)
}

/// Density of `X̄_t` at `x ≥ 0`, `x = 0` meaning the right limit.
fn marginal_density(law: &JointLaw, x: f64) -> Result<f64, CliError> {
    if x > 0.0 {
        return Ok(law.sup_marginal(x)?);
    }
    let model = law.model();
    if let (Some(alpha), Some(rho)) = (model.scaling_alpha(), model.scaling_rho()) {
        // Near 0 the density behaves like x^{αρ−1}.
        if alpha * rho < 1.0 - 1e-12 {
            return Ok(f64::INFINITY);
        }
    }
    let h = 1e-9 * law.horizon().powf(1.0 / model.scaling_alpha().unwrap_or(2.0));
    Ok(2.0 * law.sup_marginal(h)? - law.sup_marginal(2.0 * h)?)
}

fn marginal(a: &MarginalArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let t = horizon(a.t)?;
    let model = a.model.build()?;
    let law = JointLaw::new(model.clone(), t, ctx.quad)?;
    let cols: &[&str] = if a.cdf { &["x", "density", "cdf"] } else { &["x", "density"] };
    let p = provenance("marginal", Some(&model), ctx).param("t", t);
    let mut art = Artifact::new(p, cols).summary("atom", num(law.sup_atom()?));
    for x in a.grid.points() {
        if x < 0.0 {
            return Err(CliError::Usage(format!("the supremum is nonnegative; grid point {x} is invalid")));
        }
        let mut row: Vec<Cell> = vec![x.into(), marginal_density(&law, x)?.into()];
        if a.cdf {
            row.push(law.sup_marginal_cdf(x)?.into());
        }
        art.push(row);
    }
    Ok(Outcome::ok(art))
}

fn arcsine(a: &ArcsineArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let t = horizon(a.t)?;
    let model = a.model.build()?;
    let law = JointLaw::new(model.clone(), t, ctx.quad)?;
    let rho = model.scaling_rho();
    let cols: &[&str] = if rho.is_some() { &["s", "density", "arcsine"] } else { &["s", "density"] };
    let mut p = provenance("arcsine", Some(&model), ctx).param("t", t);
    if let Some(r) = rho {
        p = p.param("rho", r);
    }
    let mut art = Artifact::new(p, cols);
    for s in a.grid.points() {
        if !(s > 0.0 && s < t) {
            return Err(CliError::Usage(format!("time grid must lie inside (0, {t}), got {s}")));
        }
        let mut row: Vec<Cell> = vec![s.into(), law.gt_density(s)?.into()];
        if let Some(r) = rho {
            row.push(arcsine_density(r, t, s).into());
        }
        art.push(row);
    }
    Ok(Outcome::ok(art))
}

fn report_json(r: &IdentityReport) -> Value {
    let params: Map<String, Value> = r.parameters.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
    json!({
        "identity": r.identity,
        "model": r.model,
        "parameters": params,
        "residual": num(r.residual),
        "tolerance": num(r.tolerance),
        "pass": r.pass,
    })
}

fn identity(a: &IdentityArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let model_report = |f: &dyn Fn(&ProcessModel) -> levysup::Result<IdentityReport>| -> Result<IdentityReport, CliError> {
        Ok(f(&a.model.build()?)?)
    };
    let mut report = match a.check {
        IdentityCheck::Normalization => model_report(&normalization_report)?,
        IdentityCheck::WienerHopf => model_report(&|m| wiener_hopf_report(m, a.alpha))?,
        IdentityCheck::Fristedt => model_report(&|m| fristedt_closed_form_report(m, a.alpha, a.beta))?,
        IdentityCheck::LadderLaplace => model_report(&|m| ladder_laplace_report(m, a.eps))?,
        IdentityCheck::Semigroup => model_report(&|m| reconstruction_report(m, horizon(a.t).unwrap_or(f64::NAN), a.half_width, a.count))?,
        IdentityCheck::SubordinatorLaplace => subordinator_laplace_report(&a.subordinator.build()?, a.alpha, a.level)?,
        IdentityCheck::DriftedSubordinator => {
            let grid = need_grid(a.grid, "grid")?;
            drifted_identity_report(&a.subordinator.build()?, a.level, &grid.points(), a.tolerance.unwrap_or(1e-6))?
        }
    };
    if let Some(tol) = a.tolerance {
        if !(tol >= 0.0) {
            return Err(CliError::Usage(format!("--tolerance must be nonnegative, got {tol}")));
        }
        report = IdentityReport::new(report.identity, report.model, report.parameters, report.residual, tol);
    }
    let p = Provenance::new("identity", Some(report.model.clone()), ctx.quad).param("check", report.identity);
    let mut art = Artifact::new(p, &["identity", "residual", "tolerance", "pass"]);
    for (k, v) in report_json(&report).as_object().cloned().unwrap_or_default() {
        art = art.summary(&k, v);
    }
    art.push(vec![Cell::Text(report.identity.into()), report.residual.into(), report.tolerance.into(), Cell::Bool(report.pass)]);
    Ok(Outcome { artifact: art, pass: report.pass })
}

fn levels_of(a: &ValidateArgs) -> Vec<usize> {
    a.levels.clone().map_or_else(|| vec![1000], |l| l.0)
}

fn plan_for(model: &ProcessModel, t: f64, paths: usize, steps: usize, no_bridge: bool, ctx: &Context) -> Result<SimulationPlan, CliError> {
    let mut plan = SimulationPlan::new(model.clone(), t, paths, steps, ctx.seed)?.with_workers(ctx.workers);
    if no_bridge {
        plan = plan.without_bridge_correction();
    }
    Ok(plan)
}

/// Samples per level. Gaussian models with the bridge correction and
/// compound Poisson models are simulated exactly on the finest level only.
fn samples_by_level(plan: &SimulationPlan, levels: &[usize]) -> Result<Vec<Vec<levysup::TripleSample>>, CliError> {
    let gaussian = matches!(plan.model.params(), ModelParams::Brownian { .. } | ModelParams::Stable { alpha: 2.0, .. });
    let exact = (gaussian && plan.bridge_correction) || plan.model.family() == Family::CompoundPoissonWithDrift;
    if exact || levels.len() == 1 {
        Ok(vec![driver::simulate(plan)?])
    } else {
        Ok(driver::simulate_levels(plan, levels)?)
    }
}

fn validate(a: &ValidateArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let t = horizon(a.t)?;
    let model = a.model.build()?;
    let levels = levels_of(a);
    let fine = *levels.last().unwrap();
    let plan = plan_for(&model, t, a.paths, fine, a.no_bridge, ctx)?;
    let p = provenance("validate", Some(&model), ctx)
        .param("t", t)
        .param("paths", a.paths)
        .param("levels", levels.clone())
        .param("bridge_correction", plan.bridge_correction)
        .seed(ctx.seed);
    let check_tol = |default: f64| -> Result<f64, CliError> {
        match a.tolerance {
            Some(v) if !(v >= 0.0) => Err(CliError::Usage(format!("--tolerance must be nonnegative, got {v}"))),
            Some(v) => Ok(v),
            None => Ok(default),
        }
    };
    match a.check {
        ValidateCheck::SupKs => {
            let law = JointLaw::new(model.clone(), t, ctx.quad)?;
            let samples = samples_by_level(&plan, &levels)?;
            let study = validate::sup_ks(&law, &samples, a.restrict_quantile)?;
            // Kolmogorov critical value at level 0.01.
            let tol = check_tol(1.63 / (a.paths as f64).sqrt())?;
            let pass = study.extrapolated <= tol;
            let p = p.param("check", "sup-ks");
            let mut art = Artifact::new(p, &["steps", "distance"])
                .summary("extrapolated", num(study.extrapolated))
                .summary("window", json!([num(study.window.0), num(study.window.1)]))
                .summary("tolerance", num(tol))
                .summary("pass", pass);
            for (s, d) in study.steps.iter().zip(&study.distances) {
                art.push(vec![Cell::Int(*s), (*d).into()]);
            }
            Ok(Outcome { artifact: art, pass })
        }
        ValidateCheck::ArcsineKs => {
            let rho = model.scaling_rho().ok_or_else(|| CliError::Usage("the arcsine law needs a self-similar model".into()))?;
            let samples = samples_by_level(&plan, &[fine])?;
            let d = validate::arcsine_ks(&samples[0], rho, t);
            let tol = check_tol(1.63 / (a.paths as f64).sqrt())?;
            let pass = d <= tol;
            metric_artifact(p.param("check", "arcsine-ks"), &[("distance", d), ("tolerance", tol)], pass)
        }
        ValidateCheck::Atom => {
            if model.regularity() != Regularity::Type3 {
                return Err(CliError::Model(levysup::Error::Precondition("the atom check needs a Type 3 model".into())));
            }
            let c = validate::atom_check(&plan)?;
            let tol = check_tol(3.0)?;
            let pass = c.estimate.z_score().abs() <= tol && c.total_z.abs() <= tol;
            let mut metrics = vec![
                ("sup_at_zero", c.estimate.sup_at_zero.value),
                ("sup_at_zero_se", c.estimate.sup_at_zero.std_err),
                ("no_passage", c.estimate.no_passage.value),
                ("no_passage_se", c.estimate.no_passage.std_err),
                ("agreement_z", c.estimate.z_score()),
                ("continuous", c.continuous.value),
                ("total_z", c.total_z),
                ("tolerance", tol),
            ];
            if let Some(e) = c.exact {
                metrics.push(("exact_atom", e));
            }
            metric_artifact(p.param("check", "atom"), &metrics, pass)
        }
        ValidateCheck::JointChi2 => {
            let law = JointLaw::new(model.clone(), t, ctx.quad)?;
            let s_edges = a.s_edges.clone().map_or_else(|| (0..=5).map(|k| t * k as f64 / 5.0).collect(), |e| e.0);
            let x_edges = a.x_edges.clone().map(|e| e.0).ok_or_else(|| CliError::Usage("--x-edges is required".into()))?;
            let samples = samples_by_level(&plan, &levels)?;
            let chi = validate::joint_chi2(&law, &samples, &s_edges, &x_edges)?;
            let tol = check_tol(0.01)?;
            let pass = chi.p_value >= tol;
            metric_artifact(
                p.param("check", "joint-chi2"),
                &[("statistic", chi.statistic), ("dof", chi.dof as f64), ("p_value", chi.p_value), ("tolerance", tol)],
                pass,
            )
        }
        ValidateCheck::Independence => {
            let alpha = model.scaling_alpha().ok_or_else(|| CliError::Usage("the factor test needs a self-similar model".into()))?;
            let samples = samples_by_level(&plan, &[fine])?;
            let r = validate::factor_independence(&samples[0], alpha, t, a.permutations, ctx.seed)?;
            let tol = check_tol(0.01)?;
            let pass = r.p_value >= tol;
            let metrics = [
                ("dcor_01", r.dcor[0]),
                ("dcor_02", r.dcor[1]),
                ("dcor_12", r.dcor[2]),
                ("p_value", r.p_value),
                ("tolerance", tol),
            ];
            metric_artifact(p.param("check", "independence").param("permutations", a.permutations), &metrics, pass)
        }
    }
}

fn metric_artifact(p: Provenance, metrics: &[(&str, f64)], pass: bool) -> Result<Outcome, CliError> {
    let mut art = Artifact::new(p, &["metric", "value"]).summary("pass", pass);
    for (k, v) in metrics {
        art = art.summary(k, num(*v));
        art.push(vec![Cell::Text(k.to_string()), (*v).into()]);
    }
    Ok(Outcome { artifact: art, pass })
}

fn simulate(a: &SimulateArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let t = horizon(a.t)?;
    let model = a.model.build()?;
    let plan = plan_for(&model, t, a.paths, a.steps, a.no_bridge, ctx)?;
    let samples = driver::simulate(&plan)?;
    let p = provenance("simulate", Some(&model), ctx)
        .param("t", t)
        .param("paths", a.paths)
        .param("steps", a.steps)
        .param("bridge_correction", plan.bridge_correction)
        .seed(ctx.seed);
    let mut art = Artifact::new(p, &["path", "g_hat", "sup_hat", "terminal", "n_steps", "bridge_corrected"]);
    for (i, s) in samples.iter().enumerate() {
        art.push(vec![
            Cell::Int(i as u64),
            s.g_hat.into(),
            s.sup_hat.into(),
            s.terminal.into(),
            Cell::Int(s.n_steps),
            Cell::Bool(s.bridge_corrected),
        ]);
    }
    Ok(Outcome::ok(art))
}
