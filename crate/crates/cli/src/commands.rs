use std::path::Path;
use std::time::Instant;

use manifold_agg::dynamics::{self, FlowConfig};
use manifold_agg::measures::{self, oracle};
use manifold_agg::potentials::{self, PotentialConstants};
use manifold_agg::verify::{self, CheckReport, MeasureField, ShiftedField};
use manifold_agg::{EmpiricalMeasure, Manifold, PotentialProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{default_delta, RunConfig};
use crate::CliError;

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn config_json(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("configs serialize")
}

pub fn simulate(cfg: &RunConfig) -> Result<u8, CliError> {
    let (m, profile, rho0) = cfg.resolve()?;
    let start = Instant::now();
    let rec = dynamics::simulate(&m, &profile, &rho0, &cfg.flow)?;
    let wall = start.elapsed().as_secs_f64();
    let last = rec.diagnostics.last().expect("trajectories are never empty");
    write(&cfg.output, "trajectory.jsonl", &rec.to_jsonl())?;
    write(&cfg.output, "trajectory.csv", &rec.to_csv())?;
    let summary = json!({
        "final_time": rec.times.last(),
        "recorded_times": rec.len(),
        "final_support_radius": last.support_radius,
        "final_max_pairwise_distance": last.max_pairwise_distance,
        "wall_time_seconds": wall,
        "config": config_json(cfg),
    });
    write(&cfg.output, "summary.json", &serde_json::to_string_pretty(&summary).expect("json"))?;
    println!(
        "simulated {} particles to t = {} on {m}: support radius {}, max pairwise distance {}",
        rho0.len(),
        cfg.flow.t_final,
        last.support_radius,
        last.max_pairwise_distance
    );
    Ok(0)
}

type Overrides = Vec<(String, f64)>;

fn parse_overrides(raw: &[String]) -> Result<Overrides, CliError> {
    raw.iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override `{s}` is not NAME=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("override `{s}` has a non-numeric value")))?;
            let k = k.trim().to_string();
            // rejects unknown names up front
            let mut probe = PotentialConstants {
                delta: 1.0,
                c_gprime: 0.0,
                l_gprime: 0.0,
                l: 0.0,
                ell: 0.0,
                lbar: 0.0,
                lambda: 0.0,
                epsilon: 1.0,
                grid_size: 0,
            };
            probe.set(&k, v).map_err(|e| CliError::Config(e.to_string()))?;
            Ok((k, v))
        })
        .collect()
}

fn lookup(ov: &Overrides, name: &str) -> Option<f64> {
    ov.iter().rev().find(|(k, _)| k == name).map(|(_, v)| *v)
}

fn apply(ov: &Overrides, mut c: PotentialConstants) -> PotentialConstants {
    for (k, v) in ov {
        c.set(k, *v).expect("names were validated");
    }
    c
}

fn constants_for_delta(m: &Manifold, profile: &PotentialProfile, delta: f64, epsilon: f64) -> Result<PotentialConstants, CliError> {
    Ok(potentials::profile_constants(
        profile,
        delta,
        m.curvature_lower(),
        m.curvature_upper(),
        epsilon,
    )?)
}

/// Moves every atom a distance `size` in a seeded random direction.
fn perturb(m: &Manifold, rho: &EmpiricalMeasure, size: f64, seed: u64) -> Result<EmpiricalMeasure, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = rho
        .points()
        .iter()
        .map(|p| m.exp(&m.random_unit_tangent(p, &mut rng)?.scaled(size)))
        .collect::<manifold_agg::Result<Vec<_>>>()?;
    Ok(rho.with_points(points)?)
}

fn run_check(
    name: &str,
    cfg: &RunConfig,
    ov: &Overrides,
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
) -> Result<CheckReport, CliError> {
    let vs = &cfg.verify;
    let (samples, seed) = (vs.samples, cfg.seed);
    let delta = vs.delta.unwrap_or_else(|| default_delta(m));
    let flow = &cfg.flow;
    let report = match name {
        "transport_identities" => verify::check_transport_identities(m, samples, seed)?,
        "hessian_bounds" => {
            let l = lookup(ov, "L").unwrap_or_else(|| potentials::hessian_bound(m.curvature_lower(), delta));
            verify::check_hessian_bounds_with(m, samples, delta, l, seed)?
        }
        "d2_lipschitz" => {
            let l = lookup(ov, "L").unwrap_or_else(|| potentials::hessian_bound(m.curvature_lower(), delta));
            verify::check_d2_lipschitz_with(m, samples, delta, l, seed)?
        }
        "log_lipschitz_second_arg" => match lookup(ov, "ell") {
            Some(ell) => verify::check_log_lipschitz_second_arg_with(m, samples, delta, ell, seed)?,
            None => verify::check_log_lipschitz_second_arg(m, samples, delta, vs.epsilon, seed)?,
        },
        "gronwall_flow_bound" => {
            let base = m.origin();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shift = m.random_unit_tangent(&base, &mut rng)?.scaled(vs.perturbation);
            let x = MeasureField { profile, measure: rho0 };
            let y = ShiftedField {
                base: MeasureField { profile, measure: rho0 },
                shift,
            };
            // the shifted flow may leave the support by at most |w| T
            let spread = measures::diameter(m, rho0.points())? * (1.0 + flow.diameter_margin);
            let region = (spread + 2.0 * vs.perturbation * flow.t_final).max(1e-12);
            let c = apply(ov, constants_for_delta(m, profile, region, vs.epsilon)?);
            verify::check_gronwall_flow_bound(m, &x, &y, rho0.points(), c.lbar, vs.perturbation, flow, seed)?
        }
        "stability" => {
            let sigma0 = perturb(m, rho0, vs.perturbation, seed)?;
            let c = apply(ov, verify::region_constants(m, profile, &[rho0, &sigma0], flow.diameter_margin)?);
            verify::check_stability_with(m, profile, rho0, &sigma0, flow, &c, seed)?
        }
        "contraction" => {
            let c = apply(ov, dynamics::picard_constants(m, profile, rho0, flow)?);
            let horizon = flow.t_final.min(c.horizon_for_factor(vs.contraction_target));
            let config = FlowConfig {
                t_final: horizon,
                dt: flow.dt.min(horizon / 50.0),
                ..flow.clone()
            };
            verify::check_contraction_with(m, profile, rho0, &config, &c, vs.picard_tol, vs.picard_max_iter, seed)?
        }
        "support_containment" => verify::check_support_containment(m, profile, rho0, flow, seed)?,
        other => return Err(CliError::Config(format!("unknown check `{other}`"))),
    };
    Ok(report)
}

pub fn verify(cfg: &RunConfig, raw_overrides: &[String]) -> Result<u8, CliError> {
    let ov = parse_overrides(raw_overrides)?;
    let (m, profile, rho0) = cfg.resolve()?;
    let mut reports = Vec::new();
    for name in &cfg.checks {
        let report = run_check(name, cfg, &ov, &m, &profile, &rho0)?;
        println!("{report}");
        write(&cfg.output, &format!("{name}.json"), &report.to_json())?;
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    let summary = json!({
        "passed": passed,
        "reports": reports,
        "overrides": ov.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
        "config": config_json(cfg),
    });
    write(&cfg.output, "verify_summary.json", &serde_json::to_string_pretty(&summary).expect("json"))?;
    Ok(if passed { 0 } else { 1 })
}

fn read_measure(path: &Path) -> Result<EmpiricalMeasure, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    EmpiricalMeasure::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn w1(
    cfg: &RunConfig,
    a: &Path,
    b: &Path,
    manifold: Option<&str>,
    with_oracle: bool,
    write_plan: bool,
) -> Result<u8, CliError> {
    let m: Manifold = match manifold {
        Some(s) => s.parse().map_err(CliError::Config)?,
        None => cfg.manifold()?,
    };
    let (rho, sigma) = (read_measure(a)?, read_measure(b)?);
    rho.validate_on(&m)?;
    sigma.validate_on(&m)?;
    let (d, plan) = measures::w1_distance(&m, &rho, &sigma)?;
    println!("w1 = {d}");
    if with_oracle {
        let o = oracle::permutation_w1(&m, &rho, &sigma)?;
        println!("oracle = {o}");
        println!("difference = {}", (d - o).abs());
    }
    if write_plan {
        write(&cfg.output, "coupling.csv", &plan.to_csv())?;
    }
    Ok(0)
}

pub fn constants(
    cfg: &RunConfig,
    manifold: Option<&str>,
    potential: Option<&str>,
    delta: f64,
    epsilon: f64,
    write_json: bool,
) -> Result<u8, CliError> {
    let m: Manifold = match manifold {
        Some(s) => s.parse().map_err(CliError::Config)?,
        None => cfg.manifold()?,
    };
    let profile = match potential {
        Some(s) => PotentialProfile::parse(s)?,
        None => cfg.profile()?,
    };
    let c = constants_for_delta(&m, &profile, delta, epsilon)?;
    let rows: [(&str, String); 10] = [
        ("manifold", m.to_string()),
        ("potential", profile.name().to_string()),
        ("delta", c.delta.to_string()),
        ("epsilon", c.epsilon.to_string()),
        ("c_gprime", c.c_gprime.to_string()),
        ("l_gprime", c.l_gprime.to_string()),
        ("L", c.l.to_string()),
        ("ell", c.ell.to_string()),
        ("Lbar", c.lbar.to_string()),
        ("Lambda", c.lambda.to_string()),
    ];
    for (k, v) in &rows {
        println!("{k:<10} {v}");
    }
    if write_json {
        write(&cfg.output, "constants.json", &serde_json::to_string_pretty(&c).expect("json"))?;
    }
    Ok(0)
}
