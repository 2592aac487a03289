use serde::Serialize;
use serde_json::json;

use scp_anneal::ising::{exact_ground_states, reduce, state_bits};
use scp_anneal::qa::{evolve_with, find_min_anneal_time, AnnealHamiltonian, AnnealSchedule, SuccessSpec};
use scp_anneal::rng::derive_seed;
use scp_anneal::sa::{anneal, estimate_success_with, optimize_from_curve, BetaSchedule, SaConfig, SweepOptimum, ENERGY_MATCH_TOLERANCE};
use scp_anneal::scp::{solve_exact, verify_cover};
use scp_anneal::{IsingModel, Rational, ScpInstance, VariableLayout};

use crate::error::{CliError, CliResult};
use crate::io::{read_instance, write_text};
use crate::manifest::{sidecar, RunManifest};
use crate::{Backend, Criterion, SolveArgs, SolverArgs};

/// Outcome of one `solve` invocation. Deterministic for fixed inputs, so
/// timing lives in the manifest instead.
#[derive(Debug, Serialize)]
struct SolveRecord {
    backend: &'static str,
    #[serde(rename = "M")]
    spins: usize,
    seed: u64,
    #[serde(flatten)]
    detail: serde_json::Value,
    cover: Vec<usize>,
    cover_size: usize,
    valid: bool,
    optimal_size: usize,
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn base_config(args: &SolverArgs) -> CliResult<SaConfig<f64>> {
    let schedule = BetaSchedule::Linear {
        init: args.beta_init,
        end: args.beta_final,
    };
    let cfg = SaConfig::new(1, 1, args.seed).with_schedule(schedule);
    cfg.validate()?;
    Ok(cfg)
}

/// `w(S)` over the sweep grid under the chosen success criterion, then the
/// `T(S)`-minimizing sweep count.
pub fn sa_optimum(
    inst: &ScpInstance,
    model: &IsingModel<Rational>,
    layout: &VariableLayout,
    optimal_energy: f64,
    args: &SolverArgs,
) -> CliResult<SweepOptimum> {
    if args.sweeps_grid.is_empty() {
        return Err(CliError::Input("empty sweeps grid".into()));
    }
    let base = base_config(args)?;
    let mut points = Vec::with_capacity(args.sweeps_grid.len());
    for (n, &sweeps) in args.sweeps_grid.iter().enumerate() {
        let cfg = SaConfig {
            sweeps,
            repetitions: 1,
            schedule: base.schedule.clone(),
            seed: derive_seed(base.seed, n as u64),
        };
        let stats = estimate_success_with(model, &cfg, args.runs, |bits, e| match args.criterion {
            Criterion::Energy => (e - optimal_energy).abs() <= ENERGY_MATCH_TOLERANCE,
            Criterion::Cover => layout.decode(bits).is_ok_and(|c| verify_cover(inst, &c).unwrap_or(false)),
        })?;
        points.push((sweeps, stats.w, stats.ci));
    }
    Ok(optimize_from_curve(&points, args.target_p)?)
}

pub fn write_curve(path: &std::path::Path, opt: &SweepOptimum) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["S", "w", "ci_low", "ci_high", "R", "T"])?;
    for pt in &opt.curve {
        let (r, t) = pt.time.map_or((String::new(), String::new()), |(r, t)| (r.to_string(), t.to_string()));
        w.write_record([
            pt.sweeps.to_string(),
            pt.w.to_string(),
            pt.ci.0.to_string(),
            pt.ci.1.to_string(),
            r,
            t,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    write_text(path, &String::from_utf8_lossy(&bytes))
}

pub fn run(args: SolveArgs) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let cfg = crate::reduce::config(&args.reduction)?;
    let (model, layout) = reduce(&inst, &cfg)?;
    let optimal_size = solve_exact(&inst)?.size();
    let s = &args.solver;
    let mut manifest = RunManifest::start(
        "solve",
        Some(s.seed),
        json!({
            "backend": format!("{:?}", args.backend).to_lowercase(),
            "alpha": cfg.alpha.to_string(),
            "enforce_top": cfg.enforce_top,
            "target_p": s.target_p,
            "t_max": s.t_max,
            "tol": s.tol,
            "sweeps_grid": s.sweeps_grid,
            "runs": s.runs,
            "criterion": format!("{:?}", s.criterion).to_lowercase(),
            "beta": [s.beta_init, s.beta_final],
        }),
    );
    manifest.input(&args.instance);

    let (backend, detail, cover) = match args.backend {
        Backend::Oracle => {
            let ground = exact_ground_states(&model)?;
            let bits = state_bits(ground.states[0], model.num_spins());
            let cover = layout.decode(&bits)?;
            let consistent = ground.states.iter().all(|&st| {
                let c = layout.decode_state(st);
                c.size() == optimal_size && verify_cover(&inst, &c).unwrap_or(false)
            });
            let detail = json!({
                "energy": ground.energy.to_string(),
                "ground_states": ground.states.len(),
                "consistent": consistent,
            });
            ("oracle", detail, cover)
        }
        Backend::Qa => {
            let spec = SuccessSpec::minimum_covers(&inst, &layout)?;
            let delta = AnnealSchedule::<f64>::new(1, model.num_spins()).delta;
            let search = find_min_anneal_time(&model, &delta, &spec, s.target_p, s.t_max, s.tol)?;
            let ham = AnnealHamiltonian::new(&model, &delta)?;
            let (psi, _) = evolve_with(&ham, search.t_star, s.tol)?;
            let best = (0..psi.dim())
                .max_by(|&a, &b| psi.probability(a).total_cmp(&psi.probability(b)))
                .unwrap_or(0);
            let detail = json!({
                "T": search.t_star,
                "p": search.p_at_t_star,
                "tol": s.tol,
                "probes": search.probes,
                "most_likely_state": best,
            });
            ("qa", detail, layout.decode_state(best as u64))
        }
        Backend::Sa => {
            let optimal = to_f64(&exact_ground_states(&model)?.energy);
            let opt = sa_optimum(&inst, &model, &layout, optimal, s)?;
            if let Some(path) = &args.curve_csv {
                write_curve(path, &opt)?;
                manifest.output(path);
            }
            let point = opt.curve.iter().find(|p| p.sweeps == opt.s_star).expect("optimum is on the curve");
            let (reps, _) = point.time.expect("optimum has a finite time");
            let run_cfg = SaConfig {
                sweeps: opt.s_star,
                repetitions: reps as usize,
                ..base_config(s)?
            };
            let outcome = anneal(&model, &run_cfg)?;
            let detail = json!({
                "S_star": opt.s_star,
                "T_star": opt.t_star,
                "R": reps,
                "w": point.w,
                "energy": outcome.energy,
            });
            ("sa", detail, layout.decode(&outcome.bits)?)
        }
    };

    let valid = verify_cover(&inst, &cover)?;
    let record = SolveRecord {
        backend,
        spins: model.num_spins(),
        seed: s.seed,
        detail,
        cover: cover.chosen().to_vec(),
        cover_size: cover.size(),
        valid,
        optimal_size,
    };
    let text = serde_json::to_string_pretty(&record)? + "\n";
    match &args.out {
        None => print!("{text}"),
        Some(path) => {
            write_text(path, &text)?;
            manifest.output(path);
            manifest.finish(&sidecar(path))?;
        }
    }
    if !valid {
        return Err(CliError::Verification(format!("decoded selection {:?} is not a cover", cover.chosen())));
    }
    Ok(())
}

