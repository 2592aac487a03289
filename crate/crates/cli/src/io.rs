use std::fs;
use std::path::Path;

use scp_anneal::ScpInstance;

use crate::error::{io_context, CliResult};

pub fn read_instance(path: &Path) -> CliResult<ScpInstance> {
    let text = fs::read_to_string(path).map_err(io_context(format!("reading {}", path.display())))?;
    Ok(ScpInstance::from_json(&text)?)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_context(format!("creating {}", dir.display())))?;
    }
    fs::write(path, text).map_err(io_context(format!("writing {}", path.display())))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(io_context(format!("creating {}", dir.display())))
}
