use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use scp_anneal::ising::{exact_ground_states, reduce};
use scp_anneal::rng::derive_seed;
use scp_anneal::scaling::{
    build_ensemble, censored_medians_by_size, default_shapes, fit_exponent, isomorphism_key, qa_anneal_time, ExponentFit,
};
use scp_anneal::{Error, ReductionConfig};

use crate::error::{io_context, CliError, CliResult};
use crate::io::{ensure_dir, write_text};
use crate::manifest::RunManifest;
use crate::solve::{sa_optimum, to_f64};
use crate::{Backend, BenchArgs, FitArgs, SolverArgs};

#[derive(Debug, Serialize)]
struct QaRow {
    #[serde(rename = "M")]
    spins: usize,
    instance_id: u64,
    /// Empty when the search hit `t_max`.
    #[serde(rename = "T_star")]
    t_star: Option<u64>,
    p_at_t_star: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SaRow {
    #[serde(rename = "M")]
    spins: usize,
    instance_id: u64,
    #[serde(rename = "S_star")]
    s_star: usize,
    #[serde(rename = "T_star")]
    t_star: u64,
    w: f64,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    backend: String,
    #[serde(rename = "M")]
    spins: usize,
    median_t: Option<f64>,
}

fn fit_json(fit: &ExponentFit) -> serde_json::Value {
    json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points": fit.points,
    })
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(io_context(format!("writing {}", path.display())))
}

/// Errors that only drop one instance from the ensemble.
fn skippable(e: &Error) -> bool {
    matches!(e, Error::Capacity { .. } | Error::Unreachable(_))
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    let s: &SolverArgs = &args.solver;
    let shapes = if args.shapes.is_empty() { default_shapes() } else { args.shapes.clone() };
    let mut backends = args.backend.clone();
    backends.dedup();
    if backends.contains(&Backend::Oracle) {
        return Err(CliError::Input("bench supports the qa and sa backends".into()));
    }
    let mut manifest = RunManifest::start(
        "bench",
        Some(s.seed),
        json!({
            "spins": [args.spins.start(), args.spins.end()],
            "per_size": args.per_size,
            "shapes": shapes,
            "backends": backends.iter().map(|b| format!("{b:?}").to_lowercase()).collect::<Vec<_>>(),
            "target_p": s.target_p,
            "t_max": s.t_max,
            "tol": s.tol,
            "sweeps_grid": s.sweeps_grid,
            "runs": s.runs,
            "beta": [s.beta_init, s.beta_final],
        }),
    );
    let ens = build_ensemble(args.spins.clone(), args.per_size, &shapes, s.seed, args.max_draws)?;
    for m in ens.short_sizes(&args.spins, args.per_size) {
        let got = ens.buckets.get(&m).map_or(0, Vec::len);
        manifest.warn(format!("M = {m}: only {got} of {} instances drawn", args.per_size));
    }
    let dir = &args.out.out_dir;
    ensure_dir(dir)?;

    let mut summary = Vec::new();
    let mut fits = BTreeMap::new();
    for backend in backends {
        let name = format!("{backend:?}").to_lowercase();
        let mut samples = Vec::new();
        let path = dir.join(format!("{name}_times.csv"));
        match backend {
            Backend::Qa => {
                // isomorphic instances share T*, so each class is searched once
                let mut cache = BTreeMap::new();
                let mut rows = Vec::new();
                for (m, member) in ens.iter() {
                    let key = isomorphism_key(&member.instance);
                    if !cache.contains_key(&key) {
                        let found = match qa_anneal_time(&member.instance, s.target_p, s.t_max, s.tol) {
                            Ok(found) => Some(Some((found.t_star, found.p_at_t_star))),
                            Err(Error::NotFound { .. }) => Some(None),
                            Err(e) if skippable(&e) => {
                                manifest.warn(format!("qa: skipped instance {} (M = {m}): {e}", member.id));
                                None
                            }
                            Err(e) => return Err(e.into()),
                        };
                        cache.insert(key.clone(), found);
                    }
                    let Some(found) = cache[&key] else { continue };
                    match found {
                        Some((t, _)) => eprintln!("qa M={m} id={} T*={t}", member.id),
                        None => manifest.warn(format!("qa: instance {} (M = {m}) needs T > {}; kept as censored", member.id, s.t_max)),
                    }
                    samples.push((m, found.map(|(t, _)| t as f64)));
                    rows.push(QaRow { spins: m, instance_id: member.id, t_star: found.map(|f| f.0), p_at_t_star: found.map(|f| f.1) });
                }
                write_csv(&path, &rows)?;
            }
            Backend::Sa => {
                let mut cache = BTreeMap::new();
                let mut rows = Vec::new();
                for (m, member) in ens.iter() {
                    let key = isomorphism_key(&member.instance);
                    if !cache.contains_key(&key) {
                        let (model, layout) = reduce(&member.instance, &ReductionConfig::default())?;
                        let optimal = to_f64(&exact_ground_states(&model)?.energy);
                        let per_instance = SolverArgs {
                            seed: derive_seed(s.seed, member.id),
                            sweeps_grid: s.sweeps_grid.clone(),
                            ..*s
                        };
                        let found = match sa_optimum(&member.instance, &model, &layout, optimal, &per_instance) {
                            Ok(opt) => {
                                let w = opt.curve.iter().find(|p| p.sweeps == opt.s_star).map_or(0.0, |p| p.w);
                                Some((opt.s_star, opt.t_star, w))
                            }
                            Err(CliError::Core(e)) if skippable(&e) => {
                                manifest.warn(format!("sa: skipped instance {} (M = {m}): {e}", member.id));
                                None
                            }
                            Err(e) => return Err(e),
                        };
                        cache.insert(key.clone(), found);
                    }
                    let Some((s_star, t_star, w)) = cache[&key] else { continue };
                    eprintln!("sa M={m} id={} S*={s_star} T*={t_star}", member.id);
                    samples.push((m, Some(t_star as f64)));
                    rows.push(SaRow { spins: m, instance_id: member.id, s_star, t_star, w });
                }
                write_csv(&path, &rows)?;
            }
            Backend::Oracle => unreachable!(),
        }
        manifest.output(&path);
        let mut medians = Vec::new();
        for (m, t) in censored_medians_by_size(samples) {
            match t {
                Some(t) => medians.push((m, t)),
                None => manifest.warn(format!("{name}: median at M = {m} lies above t_max; size left out of the fit")),
            }
            summary.push(SummaryRow { backend: name.clone(), spins: m, median_t: t });
        }
        match fit_exponent(&medians) {
            Ok(fit) => {
                println!("{name}: log2 T = {:.4} M + {:.4} (r^2 = {:.3})", fit.slope, fit.intercept, fit.r_squared);
                fits.insert(name, fit_json(&fit));
            }
            Err(e) => manifest.warn(format!("{name}: no exponent fit: {e}")),
        }
    }
    let summary_path = dir.join("summary.csv");
    write_csv(&summary_path, &summary)?;
    manifest.output(&summary_path);
    let fit_path = dir.join("fit.json");
    write_text(&fit_path, &(serde_json::to_string_pretty(&fits)? + "\n"))?;
    manifest.output(&fit_path);
    manifest.finish(&dir.join("bench.manifest.json"))
}

pub fn fit(args: FitArgs) -> CliResult<()> {
    let mut reader = csv::Reader::from_path(&args.csv)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Input(format!("{} has no column {name:?}", args.csv.display())))
    };
    let (m_col, t_col) = (col("M")?, col(&args.column)?);
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse_err = |what: &str| CliError::Input(format!("bad {what} in row {:?}", record.position().map(|p| p.line())));
        let m: usize = record[m_col].parse().map_err(|_| parse_err("M"))?;
        // an empty time is a censored search
        let t: Option<f64> = match &record[t_col] {
            "" => None,
            text => Some(text.parse().map_err(|_| parse_err(&args.column))?),
        };
        samples.push((m, t));
    }
    let points: Vec<(usize, f64)> = if args.medians {
        censored_medians_by_size(samples).into_iter().filter_map(|(m, t)| t.map(|t| (m, t))).collect()
    } else {
        samples.into_iter().filter_map(|(m, t)| t.map(|t| (m, t))).collect()
    };
    let fit = fit_exponent(&points)?;
    println!("{}", serde_json::to_string_pretty(&fit_json(&fit))?);
    Ok(())
}
