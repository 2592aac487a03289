use serde_json::json;

use scp_anneal::ising::{parse_rational, reduce};
use scp_anneal::{Rational, ReductionConfig};

use crate::error::CliResult;
use crate::io::{read_instance, write_text};
use crate::manifest::{sidecar, RunManifest};
use crate::{ReduceArgs, ReductionArgs};

pub fn config(args: &ReductionArgs) -> CliResult<ReductionConfig<Rational>> {
    Ok(ReductionConfig {
        alpha: parse_rational(&args.alpha)?,
        enforce_top: !args.no_top_penalty,
    })
}

pub fn run(args: ReduceArgs) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let cfg = config(&args.reduction)?;
    let (model, layout) = reduce(&inst, &cfg)?;
    let text = model.to_json() + "\n";
    match &args.out {
        None => print!("{text}"),
        Some(path) => {
            write_text(path, &text)?;
            let labels: Vec<String> = layout.labels().iter().map(ToString::to_string).collect();
            let mut manifest = RunManifest::start(
                "reduce",
                None,
                json!({"alpha": cfg.alpha.to_string(), "enforce_top": cfg.enforce_top, "labels": labels}),
            );
            manifest.input(&args.instance);
            manifest.output(path);
            manifest.finish(&sidecar(path))?;
        }
    }
    Ok(())
}
