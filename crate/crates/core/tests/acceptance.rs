//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use manifold_agg::dynamics::{self, two_body_exact};
use manifold_agg::measures::{self, oracle};
use manifold_agg::potentials::{self, check_kglob};
use manifold_agg::verify::{self, MeasureField, ShiftedField};
use manifold_agg::{EmpiricalMeasure, FlowConfig, Manifold, PotentialProfile, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALL: [Manifold; 3] = [Manifold::Euclidean(2), Manifold::Sphere, Manifold::Hyperbolic];

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }
}

type Criterion = fn(&mut Outcome) -> manifold_agg::Result<()>;

/// Radius of the sampling ball used for particle clouds. On the sphere the
/// diameter has to stay well inside the guard.
fn cloud_radius(m: &Manifold) -> f64 {
    match m {
        Manifold::Sphere => PI / 6.0,
        _ => 1.0,
    }
}

fn two_body(m: &Manifold, d0: f64) -> EmpiricalMeasure {
    let o = m.origin();
    let e = m.tangent_basis(&o).unwrap().remove(0);
    let a = m.exp(&e.scaled(0.5 * d0)).unwrap();
    let b = m.exp(&e.scaled(-0.5 * d0)).unwrap();
    EmpiricalMeasure::uniform(vec![a, b]).unwrap()
}

fn final_gap(m: &Manifold, rho0: &EmpiricalMeasure, config: &FlowConfig) -> manifold_agg::Result<f64> {
    let rec = dynamics::simulate(m, &PotentialProfile::quadratic(), rho0, config)?;
    let p = rec.final_measure().points();
    m.distance(&p[0], &p[1])
}

fn perturb(m: &Manifold, rho: &EmpiricalMeasure, size: f64, seed: u64) -> manifold_agg::Result<EmpiricalMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = rho
        .points()
        .iter()
        .map(|p| m.exp(&m.random_unit_tangent(p, &mut rng)?.scaled(size)))
        .collect::<manifold_agg::Result<Vec<_>>>()?;
    rho.with_points(points)
}

fn transport_identities(o: &mut Outcome) -> manifold_agg::Result<()> {
    for m in ALL {
        let r = verify::check_transport_identities(&m, 1000, 101)?;
        o.require(r.samples == 1000 && r.worst_margin >= -1e-9, format!("{m}: worst margin {}", r.worst_margin));
    }
    Ok(())
}

fn hessian_comparison(o: &mut Outcome) -> manifold_agg::Result<()> {
    for (m, delta) in [(Manifold::Euclidean(2), 2.0), (Manifold::Sphere, PI / 3.0), (Manifold::Hyperbolic, 2.0)] {
        let r = verify::check_hessian_bounds(&m, 500, delta, 202)?;
        o.require(r.tolerance <= 1e-3 && r.passed, format!("{m}: worst margin {}", r.worst_margin));
        match m {
            Manifold::Sphere => {
                let gap = r.metrics["lower_attainment_gap"];
                o.require(gap <= 1e-3, format!("sphere lower bound missed by {gap}"));
            }
            Manifold::Hyperbolic => {
                let gap = r.metrics["upper_attainment_gap"];
                o.require(gap <= 1e-3, format!("hyperbolic upper bound missed by {gap}"));
            }
            Manifold::Euclidean(_) => {}
        }
    }
    Ok(())
}

fn log_lipschitz_base_point(o: &mut Outcome) -> manifold_agg::Result<()> {
    for (m, delta) in [(Manifold::Euclidean(2), 2.0), (Manifold::Sphere, PI / 3.0), (Manifold::Hyperbolic, 2.0)] {
        let r = verify::check_d2_lipschitz(&m, 500, delta, 303)?;
        let expected = match m {
            Manifold::Hyperbolic => 2.0 * delta / delta.tanh(),
            _ => 2.0,
        };
        o.require((r.metrics["L"] - expected).abs() <= 1e-12, format!("{m}: L = {}", r.metrics["L"]));
        o.require(r.tolerance <= 1e-6 && r.passed, format!("{m}: worst margin {}", r.worst_margin));
    }
    Ok(())
}

fn log_lipschitz_second_arg(o: &mut Outcome) -> manifold_agg::Result<()> {
    let eps = PI / 2.0;
    for (m, delta) in [(Manifold::Euclidean(2), 2.0), (Manifold::Sphere, PI / 2.0), (Manifold::Hyperbolic, 2.0)] {
        let r = verify::check_log_lipschitz_second_arg(&m, 500, delta, eps, 404)?;
        let expected = if m == Manifold::Sphere { (PI - eps) / (PI - eps).sin() } else { 1.0 };
        o.require((r.metrics["ell"] - expected).abs() <= 1e-15, format!("{m}: ell = {}", r.metrics["ell"]));
        o.require(r.tolerance <= 1e-9 && r.passed, format!("{m}: worst margin {}", r.worst_margin));
    }
    Ok(())
}

fn two_body_oracle(o: &mut Outcome) -> manifold_agg::Result<()> {
    let exact = (-1.0f64).exp();
    o.require(
        (two_body_exact(&PotentialProfile::quadratic(), 1.0, 1.0) - exact).abs() < 1e-15,
        "closed form",
    );
    for m in ALL {
        let rho = two_body(&m, 1.0);
        let d = final_gap(&m, &rho, &FlowConfig::new(1e-3, 1.0, Scheme::GeodesicRk4))?;
        o.require((d - exact).abs() < 1e-6, format!("{m}: d(1) = {d}"));

        for (scheme, lo, hi) in [(Scheme::GeodesicEuler, 1.7, 2.3), (Scheme::GeodesicRk4, 11.0, 21.0)] {
            let errs = [0.1, 0.05, 0.025]
                .iter()
                .map(|&dt| Ok((final_gap(&m, &rho, &FlowConfig::new(dt, 1.0, scheme))? - exact).abs()))
                .collect::<manifold_agg::Result<Vec<f64>>>()?;
            for w in errs.windows(2) {
                let ratio = w[0] / w[1];
                o.require(ratio >= lo && ratio <= hi, format!("{m} {scheme}: error ratio {ratio}"));
            }
        }
    }
    Ok(())
}

fn gronwall_flow_bound(o: &mut Outcome) -> manifold_agg::Result<()> {
    let profile = PotentialProfile::quadratic();
    let config = FlowConfig::new(0.01, 1.0, Scheme::GeodesicRk4);
    let size = 0.01;
    for m in ALL {
        for seed in 0..3u64 {
            let rho = verify::sample_measure(&m, cloud_radius(&m), 10, 600 + seed)?;
            let starts = verify::sample_measure(&m, cloud_radius(&m), 8, 650 + seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shift = m.random_unit_tangent(&m.origin(), &mut rng)?.scaled(size);
            let x = MeasureField { profile: &profile, measure: &rho };
            let y = ShiftedField { base: MeasureField { profile: &profile, measure: &rho }, shift };
            // both flows stay within the frozen cloud's ball widened by the shift
            let spread = measures::diameter(&m, rho.points())?.max(measures::diameter(&m, starts.points())?);
            let region = 2.0 * cloud_radius(&m) + 2.0 * size * config.t_final;
            let c = potentials::profile_constants(
                &profile,
                region.max(spread),
                m.curvature_lower(),
                m.curvature_upper(),
                PI / 2.0,
            )?;
            let r = verify::check_gronwall_flow_bound(&m, &x, &y, starts.points(), c.lbar, size, &config, seed)?;
            o.require(r.passed, format!("{m} seed {seed}: worst margin {}", r.worst_margin));
        }
    }
    Ok(())
}

fn picard_contraction(o: &mut Outcome) -> manifold_agg::Result<()> {
    let m = Manifold::Euclidean(2);
    let profile = PotentialProfile::quadratic();
    let config = FlowConfig::new(1e-3, 0.5, Scheme::GeodesicRk4);
    let tol = 1e-8;
    let rho = two_body(&m, 1.0);
    let r = verify::check_contraction(&m, &profile, &rho, &config, tol, 100, 707)?;
    let bound = 0.5f64.exp_m1() * (1.0 + 10.0 * config.dt);
    o.require(r.passed, format!("worst margin {}", r.worst_margin));
    o.require(r.metrics["max_ratio"] <= bound, format!("max ratio {} > {bound}", r.metrics["max_ratio"]));
    let gap = r.metrics["fixed_point_vs_simulate"];
    o.require(gap <= 10.0 * tol, format!("fixed point vs simulate {gap}"));
    Ok(())
}

fn stability(o: &mut Outcome) -> manifold_agg::Result<()> {
    let profile = PotentialProfile::quadratic();
    let config = FlowConfig::new(0.01, 2.0, Scheme::GeodesicRk4);
    for m in ALL {
        for seed in 0..5u64 {
            let rho = verify::sample_measure(&m, cloud_radius(&m), 50, 800 + seed)?;
            let sigma = perturb(&m, &rho, 0.01, 850 + seed)?;
            let r = verify::check_stability(&m, &profile, &rho, &sigma, &config, seed)?;
            o.require(r.passed, format!("{m} seed {seed}: worst margin {}", r.worst_margin));
        }
    }
    Ok(())
}

fn support_containment(o: &mut Outcome) -> manifold_agg::Result<()> {
    let profile = PotentialProfile::quadratic();
    let config = FlowConfig::new(0.01, 5.0, Scheme::GeodesicRk4);
    for m in ALL {
        let rho = verify::sample_measure(&m, cloud_radius(&m), 50, 909)?;
        let r = verify::check_support_containment(&m, &profile, &rho, &config, 909)?;
        o.require(r.passed, format!("{m}: worst margin {}", r.worst_margin));
    }
    Ok(())
}

fn random_measure(m: &Manifold, n: usize, uniform: bool, rng: &mut ChaCha8Rng) -> manifold_agg::Result<EmpiricalMeasure> {
    let o = m.origin();
    let points = (0..n)
        .map(|_| m.random_point_in_ball(&o, cloud_radius(m), rng))
        .collect::<manifold_agg::Result<Vec<_>>>()?;
    if uniform {
        return EmpiricalMeasure::uniform(points);
    }
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    EmpiricalMeasure::new(points, raw.iter().map(|w| w / total).collect())
}

fn w1_exactness(o: &mut Outcome) -> manifold_agg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let m = ALL[k % 3];
        let n = 1 + k % 6;
        let a = random_measure(&m, n, true, &mut rng)?;
        let b = random_measure(&m, n, true, &mut rng)?;
        let (d, _) = measures::w1_distance(&m, &a, &b)?;
        worst = worst.max((d - oracle::permutation_w1(&m, &a, &b)?).abs());
    }
    o.require(worst <= 1e-12, format!("oracle difference {worst}"));

    let tol = 1e-9;
    let w1 = |m: &Manifold, a: &EmpiricalMeasure, b: &EmpiricalMeasure| measures::w1_distance(m, a, b).map(|r| r.0);
    for k in 0..50 {
        let m = ALL[k % 3];
        let sizes = [1 + rng.random_range(0..8), 1 + rng.random_range(0..8), 1 + rng.random_range(0..8)];
        let [a, b, c] = sizes.map(|n| random_measure(&m, n, false, &mut rng));
        let (a, b, c) = (a?, b?, c?);
        let (ab, ba, bc, ac) = (w1(&m, &a, &b)?, w1(&m, &b, &a)?, w1(&m, &b, &c)?, w1(&m, &a, &c)?);
        let aa = w1(&m, &a, &a)?;
        o.require(aa.abs() <= tol, format!("triple {k}: W1(a, a) = {aa}"));
        o.require(ab >= -tol, format!("triple {k}: negative distance {ab}"));
        o.require((ab - ba).abs() <= tol, format!("triple {k}: asymmetry {}", ab - ba));
        o.require(ac <= ab + bc + tol, format!("triple {k}: triangle {ac} > {ab} + {bc}"));
    }
    Ok(())
}

fn kglob_gate(o: &mut Outcome) -> manifold_agg::Result<()> {
    let b = check_kglob(&PotentialProfile::bounded_attractive(), -1.0, 20.0, 2000)?;
    o.require(b.a_gprime == 0.5, format!("A = {}", b.a_gprime));
    o.require(b.passed(1e-9), format!("bounded-attractive violations {b:?}"));

    let q = check_kglob(&PotentialProfile::quadratic(), -1.0, 20.0, 500)?;
    o.require(q.lipschitz_violation <= 1e-9, "quadratic fails the first bound");
    o.require(q.bound_violation.is_some_and(|v| v > 1e-9), "quadratic not rejected on the second bound");
    o.require(!q.passed(1e-9), "quadratic accepted");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, Option<u64>); 11] = [
        ("transport identities", transport_identities, Some(5)),
        ("hessian comparison", hessian_comparison, Some(10)),
        ("log lipschitz in base point", log_lipschitz_base_point, None),
        ("log lipschitz in second argument", log_lipschitz_second_arg, None),
        ("two-body oracle and orders", two_body_oracle, Some(30)),
        ("gronwall flow bound", gronwall_flow_bound, Some(20)),
        ("picard contraction", picard_contraction, Some(60)),
        ("stability", stability, Some(120)),
        ("support containment", support_containment, Some(120)),
        ("w1 exactness", w1_exactness, Some(30)),
        ("kglob profile gate", kglob_gate, None),
    ];
    let mut failures = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        let start = Instant::now();
        if let Err(e) = run(&mut o) {
            o.require(false, format!("error: {e}"));
        }
        let elapsed = start.elapsed();
        if let Some(secs) = budget {
            o.require(elapsed < Duration::from_secs(*secs), format!("took {elapsed:.2?}, budget {secs} s"));
        }
        let status = if o.ok { "PASS" } else { "FAIL" };
        let detail = if o.detail.is_empty() { String::new() } else { format!(" ({})", o.detail) };
        println!("criterion {:>2} [{status}] {name}: {elapsed:.2?}{detail}", k + 1);
        if !o.ok {
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
