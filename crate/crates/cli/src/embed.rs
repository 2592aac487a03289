use serde_json::json;

use scp_anneal::chimera::{embed_instance, to_dot, verify_minor_embedding};

use crate::error::{CliError, CliResult};
use crate::io::{ensure_dir, read_instance, write_text};
use crate::manifest::RunManifest;
use crate::EmbedArgs;

const CELL: usize = 4;

pub fn run(args: EmbedArgs) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let built = embed_instance(&inst, CELL)?;
    let report = verify_minor_embedding(&built.logical, &built.hardware, &built.embedding);
    let dir = &args.out.out_dir;
    ensure_dir(dir)?;
    let json_path = dir.join(format!("{}.json", args.name));
    let dot_path = dir.join(format!("{}.dot", args.name));
    write_text(&json_path, &(built.embedding.to_json() + "\n"))?;
    write_text(&dot_path, &to_dot(&built.hardware, &built.embedding))?;

    let summary = json!({
        "f1": built.hardware.rows(),
        "f2": built.hardware.cols(),
        "shore": CELL,
        "qubits_used": built.embedding.qubits_used(),
        "logical_vertices": built.logical.num_vertices(),
        "logical_edges": built.logical.num_edges(),
        "valid": report.is_valid(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);

    let mut manifest = RunManifest::start("embed", None, summary);
    manifest.input(&args.instance);
    manifest.output(&json_path);
    manifest.output(&dot_path);
    if !report.is_valid() {
        manifest.warn(report.to_string());
    }
    manifest.finish(&dir.join(format!("{}.manifest.json", args.name)))?;
    if !report.is_valid() {
        return Err(CliError::Verification(report.to_string()));
    }
    Ok(())
}
