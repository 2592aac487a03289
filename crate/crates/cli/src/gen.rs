use serde_json::json;

use scp_anneal::rng::derive_seed;
use scp_anneal::scp::gen_random_dummy_free;

use crate::error::CliResult;
use crate::io::{ensure_dir, write_text};
use crate::manifest::RunManifest;
use crate::GenArgs;

/// Instance `i` is drawn from stream `i` of the seed, so files do not depend
/// on `count`.
pub fn run(args: GenArgs) -> CliResult<()> {
    let mut manifest = RunManifest::start("gen", Some(args.seed), json!({"n": args.n, "m": args.m, "count": args.count}));
    // validate before touching the file system
    if args.count > 0 {
        gen_random_dummy_free(args.n, args.m, derive_seed(args.seed, 0))?;
    } else if args.n == 0 || args.m == 0 {
        gen_random_dummy_free(args.n, args.m, 0)?;
    }
    ensure_dir(&args.out.out_dir)?;
    for i in 0..args.count {
        let inst = gen_random_dummy_free(args.n, args.m, derive_seed(args.seed, i as u64))?;
        let path = args.out.out_dir.join(format!("instance-{i:04}.json"));
        write_text(&path, &(inst.to_json() + "\n"))?;
        println!("{}", path.display());
        manifest.output(&path);
    }
    manifest.finish(&args.out.out_dir.join("gen.manifest.json"))
}
